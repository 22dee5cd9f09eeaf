//! The explicit hitting set and the identity testers built on it.
//!
//! With `S` the first `dnk² + 1` and `T` the first `d + 1` elements of the canonical field
//! enumeration, the hitting set is
//! `{ δ(β, γ̄) : β ∈ S, γ̄ ∈ T^k }` with `δ_i = Σ_{j=1}^k β^{ij} γ_j`.
//! Every nonzero ΣΠΣ(k, d, n) circuit over a field with more than `dnk²` elements is nonzero
//! at one of its points.

mod random;
mod tester;

use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{ensure_min_size, Embedding, Field, FieldElement};
use crate::reduce::{family_size, ReductionMap};

pub use random::{grid_zero_count, schwartz_zippel_test, RandomOutcome, RandomVerdict, Trial};
pub use tester::{
    blackbox_test, blackbox_test_parallel, circuit_blackbox_test, whitebox_test, CircuitOracle, Oracle, Outcome,
    Verdict, Witness,
};

/// One point `δ̄` of the hitting set with its provenance `(β, γ̄)` and stream position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingPoint {
    pub beta: FieldElement,
    pub gamma: Vec<FieldElement>,
    pub delta: Vec<FieldElement>,
    pub index: u128,
}

impl HittingPoint {
    pub fn to_json(&self, field: &Field) -> serde_json::Value {
        serde_json::json!({
            "beta": field.element_to_json(&self.beta),
            "gamma": self.gamma.iter().map(|x| field.element_to_json(x)).collect::<Vec<_>>(),
            "delta": self.delta.iter().map(|x| field.element_to_json(x)).collect::<Vec<_>>(),
        })
    }
}

/// `(d + 1)^k`, the size of the grid `T^k`.
pub fn grid_size(k: usize, d: usize) -> Result<u128> {
    ((d as u128) + 1)
        .checked_pow(k as u32)
        .ok_or_else(|| Error::InvalidParameters("(d + 1)^k overflows".into()))
}

/// `(dnk² + 1)(d + 1)^k`.
pub fn hitting_set_size(k: usize, d: usize, n: usize) -> Result<u128> {
    family_size(k, d, n)?
        .checked_mul(grid_size(k, d)?)
        .ok_or_else(|| Error::InvalidParameters("hitting set size overflows".into()))
}

/// The smallest field containing `field` over which the hitting set for `(k, d, n)` exists.
pub fn lift_field(field: &Field, k: usize, d: usize, n: usize) -> Result<(Field, Embedding)> {
    let bound = family_size(k, d, n)? - 1;
    Ok(ensure_min_size(field, bound.max(d as u128)))
}

/// Odometer over `T^k`, last coordinate fastest.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    digits: Vec<usize>,
    base: usize,
    done: bool,
}

impl Grid {
    pub(crate) fn new(k: usize, base: usize) -> Grid {
        Grid { digits: vec![0; k], base, done: false }
    }

    pub(crate) fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// Advances and reports which coordinates changed as `(j, old digit)`; `None` after the
    /// last grid point.
    pub(crate) fn advance(&mut self, changed: &mut Vec<(usize, usize)>) -> bool {
        changed.clear();
        for j in (0..self.digits.len()).rev() {
            let old = self.digits[j];
            if old + 1 < self.base {
                self.digits[j] = old + 1;
                changed.push((j, old));
                return true;
            }
            self.digits[j] = 0;
            changed.push((j, old));
        }
        self.done = true;
        false
    }
}

fn check_parameters(field: &Field, k: usize, d: usize, n: usize) -> Result<()> {
    if k == 0 || d == 0 || n == 0 {
        return Err(Error::InvalidParameters(format!("k = {k}, d = {d}, n = {n} must be positive")));
    }
    let bound = family_size(k, d, n)? - 1;
    if !field.has_more_than(bound) || !field.has_more_than(d as u128) {
        return Err(Error::FieldTooSmall { bound });
    }
    grid_size(k, d)?;
    hitting_set_size(k, d, n)?;
    Ok(())
}

/// Lazy stream over the hitting set, ordered by `β` and then by `γ̄` in odometer order.
///
/// Consecutive grid points differ in few coordinates, so `δ̄` is updated in place using
/// `δ_i += β^{ij}(T[b] − T[a])` for each coordinate `γ_j` moving from `T[a]` to `T[b]`.
pub struct HittingSet {
    field: Field,
    k: usize,
    d: usize,
    n: usize,
    t: Vec<FieldElement>,
    betas: Range<u128>,
    grid_len: u128,
    // Current β state.
    beta_index: u128,
    psi: Option<ReductionMap>,
    grid: Grid,
    delta: Vec<FieldElement>,
    changed: Vec<(usize, usize)>,
    position: u128,
    fresh: bool,
}

impl HittingSet {
    pub fn new(k: usize, d: usize, n: usize, field: &Field) -> Result<HittingSet> {
        let total = family_size(k, d, n)?;
        HittingSet::with_beta_range(k, d, n, field, 0..total)
    }

    /// The slice of the stream whose `β` has enumeration index in `betas`.
    pub fn with_beta_range(k: usize, d: usize, n: usize, field: &Field, betas: Range<u128>) -> Result<HittingSet> {
        check_parameters(field, k, d, n)?;
        let total = family_size(k, d, n)?;
        let betas = betas.start.min(total)..betas.end.min(total);
        let grid_len = grid_size(k, d)?;
        let t = field.first_elements(d as u128 + 1)?;
        Ok(HittingSet {
            field: field.clone(),
            k,
            d,
            n,
            t,
            beta_index: betas.start,
            betas,
            grid_len,
            psi: None,
            grid: Grid::new(k, d + 1),
            delta: Vec::new(),
            changed: Vec::with_capacity(k),
            position: 0,
            fresh: true,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn params(&self) -> (usize, usize, usize) {
        (self.k, self.d, self.n)
    }

    /// The sample set `T`.
    pub fn sample_set(&self) -> &[FieldElement] {
        &self.t
    }

    /// Number of points in this stream (or slice).
    pub fn total(&self) -> u128 {
        (self.betas.end - self.betas.start) * self.grid_len
    }

    /// Points still to be yielded.
    pub fn remaining(&self) -> u128 {
        self.total() - self.position
    }

    /// Visits every remaining point by reference, avoiding per-point allocation. The visitor
    /// receives `(index, β, γ̄, δ̄)` and returns `false` to stop.
    pub fn for_each_ref<E>(
        &mut self,
        mut visit: impl FnMut(u128, &FieldElement, &[FieldElement], &[FieldElement]) -> std::result::Result<bool, E>,
    ) -> std::result::Result<(), E> {
        let mut gamma = Vec::with_capacity(self.k);
        while self.step() {
            gamma.clear();
            gamma.extend(self.grid.digits().iter().map(|&a| self.t[a].clone()));
            let psi = self.psi.as_ref().expect("β state is set");
            let index = self.beta_index * self.grid_len + self.position_in_grid();
            if !visit(index, psi.beta(), &gamma, &self.delta)? {
                break;
            }
        }
        Ok(())
    }

    fn position_in_grid(&self) -> u128 {
        (self.position - 1) % self.grid_len
    }

    /// Moves to the next point; returns `false` at the end of the stream.
    fn step(&mut self) -> bool {
        if self.position >= self.total() {
            return false;
        }
        let f = &self.field;
        if self.fresh {
            let beta = f.element_at(self.beta_index).expect("field size checked");
            let psi = ReductionMap::new(f, beta, self.n, self.k).expect("parameters checked");
            // γ̄ = (T[0], …) = 0, hence δ̄ = 0.
            self.delta = vec![f.zero(); self.n];
            self.grid = Grid::new(self.k, self.d + 1);
            self.psi = Some(psi);
            self.fresh = false;
        } else if !self.grid.advance(&mut self.changed) {
            self.beta_index += 1;
            self.fresh = true;
            return self.step();
        } else {
            let psi = self.psi.as_ref().expect("β state is set");
            for &(j, old) in &self.changed {
                let new = self.grid.digits()[j];
                let diff = f.sub(&self.t[new], &self.t[old]);
                for (slot, row) in self.delta.iter_mut().zip(psi.matrix()) {
                    *slot = f.add(slot, &f.mul(&row[j], &diff));
                }
            }
        }
        self.position += 1;
        true
    }
}

impl Iterator for HittingSet {
    type Item = HittingPoint;

    fn next(&mut self) -> Option<HittingPoint> {
        if !self.step() {
            return None;
        }
        let psi = self.psi.as_ref().expect("β state is set");
        Some(HittingPoint {
            beta: psi.beta().clone(),
            gamma: self.grid.digits().iter().map(|&a| self.t[a].clone()).collect(),
            delta: self.delta.clone(),
            index: self.beta_index * self.grid_len + self.position_in_grid(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining();
        (usize::try_from(r).unwrap_or(usize::MAX), usize::try_from(r).ok())
    }
}

/// The full hitting set stream for `(k, d, n)` over `field`.
pub fn hitting_set(k: usize, d: usize, n: usize, field: &Field) -> Result<HittingSet> {
    HittingSet::new(k, d, n, field)
}
