//! Membership in ideals generated by homogeneous polynomials.
//!
//! A homogeneous ideal decomposes by degree, so `f` of degree `D` lies in `⟨f_1, …, f_m⟩`
//! iff it lies in the span of `{μ · f_j : μ a monomial of degree D − deg f_j}`. That span is
//! computed by exact elimination over the monomial basis of the degree-`D` component.

use std::collections::HashMap;

use super::IdealGens;
use crate::circuit::{Monomial, MultiplicationTerm, SparsePoly, DEFAULT_EXPAND_CAP};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{Echelon, Reduction};

/// Default cap on the number of monomials in a graded component.
pub const DEFAULT_GRADED_CAP: usize = 100_000;

/// `C(n + D − 1, D)`, saturating at `u128::MAX`.
fn monomial_count(n: usize, degree: u32) -> u128 {
    if n == 0 {
        return u128::from(degree == 0);
    }
    let mut acc: u128 = 1;
    for i in 1..=degree as u128 {
        acc = match acc.checked_mul(n as u128 - 1 + i) {
            Some(x) => x / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// All exponent vectors of total degree `degree` in `n` variables, lexicographically.
fn monomials(n: usize, degree: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, degree, &mut Vec::with_capacity(n), &mut out);
    out
}

/// The degree-`D` component of an ideal, as an echelon basis over the monomials of degree `D`.
pub struct GradedComponent {
    field: Field,
    n: usize,
    degree: u32,
    index: HashMap<Monomial, usize>,
    echelon: Echelon,
    /// For each inserted column: the generator and the monomial multiplier.
    columns: Vec<(usize, Monomial)>,
}

impl GradedComponent {
    /// Builds the component; `track` records combinations so witnesses can be extracted.
    pub fn new(gens: &IdealGens, degree: u32, cap: usize, track: bool) -> Result<GradedComponent> {
        let n = gens.n();
        let field = gens.field().clone();
        if monomial_count(n, degree) > cap as u128 {
            return Err(Error::GradedSpaceTooLarge { cap });
        }
        let basis = monomials(n, degree);
        let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut echelon = if track { Echelon::with_tracking(&field, basis.len()) } else { Echelon::new(&field, basis.len()) };
        let mut columns = Vec::new();
        for (j, g) in gens.generators().iter().enumerate() {
            if g.is_zero() || g.degree() as u32 > degree {
                continue;
            }
            let expanded = g.expand(&field, n, DEFAULT_EXPAND_CAP)?;
            for mult in monomials(n, degree - g.degree() as u32) {
                let mut v = vec![field.zero(); basis.len()];
                for (e, c) in expanded.terms() {
                    let shifted: Monomial = e.iter().zip(&mult).map(|(a, b)| a + b).collect();
                    v[index[&shifted]] = c.clone();
                }
                let independent = echelon.insert(&v);
                if track || independent {
                    columns.push((j, mult));
                }
                if !track && echelon.rank() == basis.len() {
                    break;
                }
            }
        }
        Ok(GradedComponent { field, n, degree, index, echelon, columns })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Dimension of the component inside the degree-`D` polynomials.
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    fn vector(&self, f: &SparsePoly) -> Result<Vec<FieldElement>> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: f.n() });
        }
        let mut v = vec![self.field.zero(); self.index.len()];
        for (e, c) in f.terms() {
            let pos = self.index.get(e).ok_or(Error::NotHomogeneous)?;
            v[*pos] = c.clone();
        }
        Ok(v)
    }

    /// Reduces `f` modulo the component. The residue is canonical: two polynomials agree
    /// modulo the ideal iff their residues are equal.
    pub fn reduce(&self, f: &SparsePoly) -> Result<Reduction> {
        Ok(self.echelon.reduce(&self.vector(f)?))
    }

    pub fn contains(&self, f: &SparsePoly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Cofactors `q_j` with `f = Σ q_j f_j`, one per generator, if `f` is in the ideal.
    /// Requires a component built with tracking.
    pub fn witness(&self, f: &SparsePoly, generators: usize) -> Result<Option<Vec<SparsePoly>>> {
        let r = self.reduce(f)?;
        if !r.is_zero() {
            return Ok(None);
        }
        let mut q = vec![SparsePoly::zero(&self.field, self.n); generators];
        for (c, (j, mult)) in r.combination.iter().zip(&self.columns) {
            if !c.is_zero() {
                q[*j].add_term(mult.clone(), c.clone());
            }
        }
        Ok(Some(q))
    }
}

fn graded_degree(f: &SparsePoly) -> Result<Option<u32>> {
    if f.is_zero() {
        return Ok(None);
    }
    f.homogeneous_degree().map(Some).ok_or(Error::NotHomogeneous)
}

/// `f ∈ ⟨gens⟩` for homogeneous `f`. Generators of degree above `deg f` cannot contribute and
/// are skipped.
pub fn membership(f: &SparsePoly, gens: &IdealGens) -> Result<bool> {
    let Some(degree) = graded_degree(f)? else {
        return Ok(true);
    };
    GradedComponent::new(gens, degree, DEFAULT_GRADED_CAP, false)?.contains(f)
}

/// Like [`membership`], returning cofactors `q_j` with `f = Σ q_j f_j` when `f` is a member.
pub fn membership_witness(f: &SparsePoly, gens: &IdealGens) -> Result<Option<Vec<SparsePoly>>> {
    let count = gens.generators().len();
    let Some(degree) = graded_degree(f)? else {
        return Ok(Some(vec![SparsePoly::zero(gens.field(), gens.n()); count]));
    };
    GradedComponent::new(gens, degree, DEFAULT_GRADED_CAP, true)?.witness(f, count)
}

/// Membership of a multiplication term, through its expansion.
pub fn term_membership(t: &MultiplicationTerm, gens: &IdealGens) -> Result<bool> {
    membership(&t.expand(gens.field(), gens.n(), DEFAULT_EXPAND_CAP)?, gens)
}
