use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};

use super::{lift_field, Grid, HittingPoint, HittingSet};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::reduce::{family_size, ReductionMap};

/// Point-evaluation access to a polynomial.
pub trait Oracle {
    fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement>;
}

impl<F> Oracle for F
where
    F: Fn(&[FieldElement]) -> Result<FieldElement>,
{
    fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        self(point)
    }
}

/// Evaluates a circuit whose field is the field the points come from.
pub struct CircuitOracle {
    circuit: Circuit,
}

impl CircuitOracle {
    pub fn new(circuit: Circuit) -> CircuitOracle {
        CircuitOracle { circuit }
    }
}

impl Oracle for CircuitOracle {
    fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.circuit.n() {
            return Err(Error::DimensionMismatch { expected: self.circuit.n(), got: point.len() });
        }
        Ok(self.circuit.evaluate_unchecked(point))
    }
}

/// A point of the hitting set where the polynomial does not vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: HittingPoint,
    pub value: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Zero,
    NonZero(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Stream position of the witness plus one, or the full stream length for `Zero`.
    pub points_evaluated: u128,
    /// The field the points were drawn from.
    pub field: Field,
}

impl Verdict {
    pub fn is_zero(&self) -> bool {
        matches!(self.outcome, Outcome::Zero)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Zero => None,
            Outcome::NonZero(w) => Some(w),
        }
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let witness = self.witness().map(|w| {
            let mut v = w.point.to_json(f);
            v["value"] = f.element_to_json(&w.value);
            v["index"] = json!(w.point.index.to_string());
            v
        });
        json!({
            "verdict": if self.is_zero() { "zero" } else { "nonzero" },
            "witness": witness,
            "points_evaluated": self.points_evaluated.to_string(),
        })
    }
}

/// Evaluates `oracle` on the hitting set for `(k, d, n)` over `field`, stopping at the first
/// nonzero value. `field` must already be large enough (see [`lift_field`]).
pub fn blackbox_test(oracle: &dyn Oracle, k: usize, d: usize, n: usize, field: &Field) -> Result<Verdict> {
    let mut set = HittingSet::new(k, d, n, field)?;
    let total = set.total();
    let mut found: Option<(u128, FieldElement)> = None;
    set.for_each_ref(|index, _, _, delta| {
        let value = oracle.evaluate(delta)?;
        if value.is_zero() {
            return Ok(true);
        }
        found = Some((index, value));
        Ok::<bool, Error>(false)
    })?;
    Ok(match found {
        None => Verdict { outcome: Outcome::Zero, points_evaluated: total, field: field.clone() },
        Some((index, value)) => witness_verdict(k, d, n, field, index, value)?,
    })
}

/// Rebuilds the full point at a stream index; used only once per verdict.
fn point_at(k: usize, d: usize, n: usize, field: &Field, index: u128) -> Result<HittingPoint> {
    let grid = super::grid_size(k, d)?;
    let beta = index / grid;
    let mut set = HittingSet::with_beta_range(k, d, n, field, beta..beta + 1)?;
    set.nth((index % grid) as usize).ok_or(Error::IndexOutOfRange { index: index as usize, len: 0 })
}

fn witness_verdict(k: usize, d: usize, n: usize, field: &Field, index: u128, value: FieldElement) -> Result<Verdict> {
    let point = point_at(k, d, n, field, index)?;
    Ok(Verdict {
        outcome: Outcome::NonZero(Witness { point, value }),
        points_evaluated: index + 1,
        field: field.clone(),
    })
}

/// [`blackbox_test`] on `jobs` threads. Workers take whole `β` slices in increasing order;
/// the reported witness is the one with the smallest stream index, so the verdict does not
/// depend on scheduling.
pub fn blackbox_test_parallel(
    oracle: &(dyn Oracle + Sync),
    k: usize,
    d: usize,
    n: usize,
    field: &Field,
    jobs: usize,
) -> Result<Verdict> {
    if jobs <= 1 {
        return blackbox_test(oracle, k, d, n, field);
    }
    let probe = HittingSet::new(k, d, n, field)?;
    let total = probe.total();
    let betas = u64::try_from(family_size(k, d, n)?)
        .map_err(|_| Error::InvalidParameters("too many β values for parallel evaluation".into()))?;
    let next_beta = AtomicU64::new(0);
    let best_beta = AtomicU64::new(u64::MAX);
    let best: Mutex<Option<(u128, FieldElement)>> = Mutex::new(None);
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let b = next_beta.fetch_add(1, Ordering::SeqCst);
                if b >= betas || b > best_beta.load(Ordering::SeqCst) || failure.lock().unwrap().is_some() {
                    return;
                }
                let mut slice = match HittingSet::with_beta_range(k, d, n, field, b as u128..b as u128 + 1) {
                    Ok(s) => s,
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        return;
                    }
                };
                let mut hit = None;
                let run = slice.for_each_ref(|index, _, _, delta| {
                    let value = oracle.evaluate(delta)?;
                    if value.is_zero() {
                        return Ok(true);
                    }
                    hit = Some((index, value));
                    Ok::<bool, Error>(false)
                });
                if let Err(e) = run {
                    failure.lock().unwrap().get_or_insert(e);
                    return;
                }
                if let Some((index, value)) = hit {
                    let mut guard = best.lock().unwrap();
                    if guard.as_ref().is_none_or(|(i, _)| index < *i) {
                        *guard = Some((index, value));
                    }
                    best_beta.fetch_min(b, Ordering::SeqCst);
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    match best.into_inner().unwrap() {
        None => Ok(Verdict { outcome: Outcome::Zero, points_evaluated: total, field: field.clone() }),
        Some((index, value)) => witness_verdict(k, d, n, field, index, value),
    }
}

/// Lifts the circuit to a large enough field and runs [`blackbox_test`] with the circuit as
/// the oracle.
pub fn circuit_blackbox_test(circuit: &Circuit, jobs: usize) -> Result<Verdict> {
    let (k, d, n) = (circuit.k(), circuit.d(), circuit.n());
    let (field, embedding) = lift_field(circuit.field(), k, d, n)?;
    let oracle = CircuitOracle::new(circuit.embed(&embedding)?);
    blackbox_test_parallel(&oracle, k, d, n, &field, jobs)
}

/// Applies each `Ψ_β` of the reduction family to the (lifted) circuit and evaluates the
/// ΣΠΣ(k, d, k) image on `T^k`. Points are visited in the same order as the hitting set, so
/// witnesses agree with [`circuit_blackbox_test`].
pub fn whitebox_test(circuit: &Circuit) -> Result<Verdict> {
    let (k, d, n) = (circuit.k(), circuit.d(), circuit.n());
    let (field, embedding) = lift_field(circuit.field(), k, d, n)?;
    let lifted = circuit.embed(&embedding)?;
    let probe = HittingSet::new(k, d, n, &field)?;
    let t = probe.sample_set().to_vec();
    let total = probe.total();
    let grid_len = super::grid_size(k, d)?;
    let mut gamma = vec![field.zero(); k];
    let mut changed = Vec::with_capacity(k);
    for b in 0..family_size(k, d, n)? {
        let beta = field.element_at(b).expect("field size checked");
        let psi = ReductionMap::new(&field, beta.clone(), n, k)?;
        let image = psi.apply_circuit(&lifted)?;
        if image.terms().iter().all(|term| term.is_zero()) {
            continue;
        }
        let mut grid = Grid::new(k, d + 1);
        let mut offset = 0u128;
        loop {
            for (g, &a) in gamma.iter_mut().zip(grid.digits()) {
                *g = t[a].clone();
            }
            let value = image.evaluate_unchecked(&gamma);
            if !value.is_zero() {
                let index = b * grid_len + offset;
                let delta = psi.lift_point(&gamma)?;
                let point = HittingPoint { beta, gamma: gamma.clone(), delta, index };
                return Ok(Verdict {
                    outcome: Outcome::NonZero(Witness { point, value }),
                    points_evaluated: index + 1,
                    field,
                });
            }
            if !grid.advance(&mut changed) {
                break;
            }
            offset += 1;
        }
    }
    Ok(Verdict { outcome: Outcome::Zero, points_evaluated: total, field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::tests::{f2_identity, form};
    use crate::circuit::MultiplicationTerm;

    fn power(f: &Field, n: usize, d: usize) -> Circuit {
        let mut coeffs = vec![0; n];
        coeffs[0] = 1;
        let t = MultiplicationTerm::new(f.one(), vec![form(f, &coeffs); d]).unwrap();
        Circuit::new(f, n, d, 1, vec![t]).unwrap()
    }

    #[test]
    fn f2_identity_is_zero() {
        let c = f2_identity();
        let v = circuit_blackbox_test(&c, 1).unwrap();
        assert!(v.is_zero());
        assert_eq!(v.field.size_u128(), Some(64));
        assert_eq!(v.points_evaluated, 37 * 27);
        assert!(whitebox_test(&c).unwrap().is_zero());
    }

    #[test]
    fn power_is_nonzero_and_replayable() {
        let f = Field::prime(101).unwrap();
        let c = power(&f, 3, 3);
        let v = circuit_blackbox_test(&c, 1).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(c.evaluate(&w.point.delta).unwrap(), w.value);
        assert!(!w.value.is_zero());
        assert_eq!(whitebox_test(&c).unwrap(), v);
        assert_eq!(circuit_blackbox_test(&c, 4).unwrap(), v);
    }

    #[test]
    fn constant_zero_oracle() {
        let f = Field::prime(101).unwrap();
        let zero = |_: &[FieldElement]| Ok(Field::prime(101).unwrap().zero());
        let v = blackbox_test(&zero, 2, 2, 2, &f).unwrap();
        assert!(v.is_zero());
        assert_eq!(v.points_evaluated, 17 * 9);
        let v = blackbox_test_parallel(&zero, 2, 2, 2, &f, 3).unwrap();
        assert!(v.is_zero());
        assert!(whitebox_test(&Circuit::zero(&f, 2, 2, 2)).unwrap().is_zero());
    }

    #[test]
    fn oracle_errors_propagate() {
        let f = Field::prime(101).unwrap();
        let failing = |_: &[FieldElement]| Err(Error::Oracle("down".into()));
        assert_eq!(blackbox_test(&failing, 1, 1, 1, &f), Err(Error::Oracle("down".into())));
        assert_eq!(blackbox_test_parallel(&failing, 1, 1, 1, &f, 2), Err(Error::Oracle("down".into())));
    }
}
