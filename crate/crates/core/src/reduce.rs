//! Vandermonde variable reduction `Ψ_β : x_i ↦ Σ_{j=1}^k β^{ij} y_j`.
//!
//! A [`ReductionMap`] sends linear forms in `n` variables to forms in `k` variables, and
//! therefore ΣΠΣ(k, d, n) circuits to ΣΠΣ(k, d, k) circuits. For a family of `dnk² + 1`
//! distinct `β`, a circuit is zero iff every image is zero.

use crate::circuit::{Circuit, LinearForm, MultiplicationTerm};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg;

/// `Ψ_β` for fixed `(β, n, k)`, stored as the `n × k` matrix `V[i][j] = β^{(i+1)(j+1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    field: Field,
    beta: FieldElement,
    n: usize,
    k: usize,
    matrix: Vec<Vec<FieldElement>>,
}

impl ReductionMap {
    /// Fills the matrix with `O(nk)` multiplications: row `i` is the successive powers of `β^i`.
    pub fn new(field: &Field, beta: FieldElement, n: usize, k: usize) -> Result<ReductionMap> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidParameters(format!("n = {n} and k = {k} must be positive")));
        }
        field.check(&beta)?;
        let mut matrix = Vec::with_capacity(n);
        let mut beta_i = field.one();
        for _ in 0..n {
            beta_i = field.mul(&beta_i, &beta);
            let mut row = Vec::with_capacity(k);
            let mut acc = field.one();
            for _ in 0..k {
                acc = field.mul(&acc, &beta_i);
                row.push(acc.clone());
            }
            matrix.push(row);
        }
        Ok(ReductionMap { field: field.clone(), beta, n, k, matrix })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Row `i` holds the coefficients of `Ψ_β(x_{i+1})`.
    pub fn matrix(&self) -> &[Vec<FieldElement>] {
        &self.matrix
    }

    /// Images of the variables, `Ψ_β(x_i)` for each `i`.
    pub fn images(&self) -> Vec<LinearForm> {
        self.matrix.iter().map(|row| LinearForm::new(row.clone())).collect()
    }

    /// Scalars are fixed by the map.
    pub fn apply_scalar(&self, a: &FieldElement) -> FieldElement {
        a.clone()
    }

    /// `b_r = Σ_i a_i β^{ri}`.
    pub fn apply_form(&self, form: &LinearForm) -> Result<LinearForm> {
        if form.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: form.n() });
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.k];
        for (a, row) in form.coeffs().iter().zip(&self.matrix) {
            if a.is_zero() {
                continue;
            }
            for (slot, v) in out.iter_mut().zip(row) {
                *slot = f.add(slot, &f.mul(a, v));
            }
        }
        Ok(LinearForm::new(out))
    }

    /// Image of a term; forms that vanish are kept so the result may be flagged zero.
    pub fn apply_term(&self, term: &MultiplicationTerm) -> Result<MultiplicationTerm> {
        let forms = term.forms().iter().map(|l| self.apply_form(l)).collect::<Result<Vec<_>>>()?;
        Ok(MultiplicationTerm::from_parts(term.scalar().clone(), forms))
    }

    /// The ΣΠΣ(k, d, k) image of `circuit`. Term indices are preserved; a term with a form
    /// mapped to zero stays in place and reports [`MultiplicationTerm::is_zero`].
    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<Circuit> {
        if circuit.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: circuit.n() });
        }
        if circuit.field() != &self.field {
            return Err(Error::FieldMismatch("reduction map and circuit use different fields".into()));
        }
        let terms = circuit.terms().iter().map(|t| self.apply_term(t)).collect::<Result<Vec<_>>>()?;
        Ok(Circuit::from_parts(&self.field, self.k, circuit.d(), circuit.k(), terms))
    }

    /// `δ_i = Σ_j β^{ij} γ_j`: the point at which `C` agrees with `Ψ_β(C)` at `γ`.
    pub fn lift_point(&self, gamma: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if gamma.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: gamma.len() });
        }
        let f = &self.field;
        Ok(self
            .matrix
            .iter()
            .map(|row| row.iter().zip(gamma).fold(f.zero(), |acc, (v, g)| f.add(&acc, &f.mul(v, g))))
            .collect())
    }
}

/// Rank of a list of forms over the field; the empty list has rank 0.
pub fn rank(field: &Field, forms: &[LinearForm]) -> Result<usize> {
    let Some(first) = forms.first() else {
        return Ok(0);
    };
    let n = first.n();
    let mut vectors = Vec::with_capacity(forms.len());
    for l in forms {
        if l.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: l.n() });
        }
        field.check_all(l.coeffs())?;
        vectors.push(l.coeffs().to_vec());
    }
    Ok(linalg::rank(field, n, &vectors))
}

/// `dnk² + 1`, the number of maps in the reduction family.
pub fn family_size(k: usize, d: usize, n: usize) -> Result<u128> {
    (d as u128)
        .checked_mul(n as u128)
        .and_then(|x| x.checked_mul((k as u128).checked_mul(k as u128)?))
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::InvalidParameters("dnk² + 1 overflows".into()))
}

/// The `dnk² + 1` maps with `β` ranging over the first elements of the canonical enumeration.
pub fn reduction_family(k: usize, d: usize, n: usize, field: &Field) -> Result<Vec<ReductionMap>> {
    let size = family_size(k, d, n)?;
    if !field.has_more_than(size - 1) {
        return Err(Error::FieldTooSmall { bound: size - 1 });
    }
    field
        .first_elements(size)?
        .into_iter()
        .map(|beta| ReductionMap::new(field, beta, n, k))
        .collect()
}

/// The candidates `β` for which `rk(Ψ_β(S)) < rk(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadBetas {
    pub rank: usize,
    pub bad: Vec<FieldElement>,
}

impl BadBetas {
    pub fn count(&self) -> usize {
        self.bad.len()
    }
}

pub fn count_bad_betas(field: &Field, forms: &[LinearForm], candidates: &[FieldElement], k: usize) -> Result<BadBetas> {
    let r = rank(field, forms)?;
    let n = forms.first().map_or(1, LinearForm::n);
    let mut bad = Vec::new();
    for beta in candidates {
        let psi = ReductionMap::new(field, beta.clone(), n, k)?;
        let images = forms.iter().map(|l| psi.apply_form(l)).collect::<Result<Vec<_>>>()?;
        if rank(field, &images)? < r {
            bad.push(beta.clone());
        }
    }
    Ok(BadBetas { rank: r, bad })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(f: &Field, cs: &[i64]) -> LinearForm {
        LinearForm::new(cs.iter().map(|&c| f.from_i64(c)).collect())
    }

    #[test]
    fn build_psi_examples() {
        let f = Field::prime(101).unwrap();
        let psi = ReductionMap::new(&f, f.from_i64(3), 2, 2).unwrap();
        assert_eq!(psi.images(), vec![form(&f, &[3, 9]), form(&f, &[9, 81])]);

        let zero = ReductionMap::new(&f, f.zero(), 3, 2).unwrap();
        assert!(zero.images().iter().all(LinearForm::is_zero));

        let one = ReductionMap::new(&f, f.one(), 3, 4).unwrap();
        assert!(one.images().iter().all(|l| *l == form(&f, &[1, 1, 1, 1])));

        assert!(ReductionMap::new(&f, f.one(), 0, 1).is_err());
    }

    #[test]
    fn apply_form_examples() {
        let f = Field::prime(101).unwrap();
        let psi = ReductionMap::new(&f, f.from_i64(3), 2, 2).unwrap();
        assert_eq!(psi.apply_form(&form(&f, &[1, 0])).unwrap(), form(&f, &[3, 9]));
        assert!(psi.apply_form(&form(&f, &[0, 0])).unwrap().is_zero());
        assert_eq!(psi.apply_form(&form(&f, &[1, 1])).unwrap(), form(&f, &[12, 90]));
        assert!(matches!(psi.apply_form(&form(&f, &[1])), Err(Error::DimensionMismatch { .. })));
        assert_eq!(psi.apply_scalar(&f.from_i64(1)), f.one());
    }

    #[test]
    fn apply_circuit_examples() {
        let f = Field::prime(101).unwrap();
        let psi = ReductionMap::new(&f, f.from_i64(3), 2, 2).unwrap();
        let c = Circuit::new(
            &f,
            2,
            2,
            2,
            vec![MultiplicationTerm::new(f.one(), vec![form(&f, &[1, 0]), form(&f, &[0, 1])]).unwrap()],
        )
        .unwrap();
        let r = psi.apply_circuit(&c).unwrap();
        assert_eq!(r.terms()[0].forms(), &[form(&f, &[3, 9]), form(&f, &[9, 81])]);
        assert_eq!((r.n(), r.d(), r.k()), (2, 2, 2));

        let z = Circuit::zero(&f, 2, 2, 2);
        assert!(psi.apply_circuit(&z).unwrap().terms().is_empty());

        let psi0 = ReductionMap::new(&f, f.zero(), 2, 2).unwrap();
        let flagged = psi0.apply_circuit(&c).unwrap();
        assert!(flagged.terms()[0].is_zero());
        assert_eq!(flagged.to_document().zero_terms, vec![0]);
    }

    #[test]
    fn rank_examples() {
        let f = Field::prime(101).unwrap();
        assert_eq!(rank(&f, &[form(&f, &[1, 0]), form(&f, &[0, 1]), form(&f, &[1, 1])]).unwrap(), 2);
        assert_eq!(rank(&f, &[]).unwrap(), 0);
        assert_eq!(rank(&f, &[form(&f, &[1, 0]), form(&f, &[2, 0])]).unwrap(), 1);
        let q = Field::rational();
        assert!(matches!(rank(&f, &[form(&q, &[1, 0])]), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn family_sizes() {
        let f = Field::prime(101).unwrap();
        assert_eq!(reduction_family(1, 1, 1, &f).unwrap().len(), 2);
        let q = Field::rational();
        assert_eq!(reduction_family(3, 4, 5, &q).unwrap().len(), 181);
        assert_eq!(reduction_family(3, 4, 5, &f), Err(Error::FieldTooSmall { bound: 180 }));
        let fam = reduction_family(2, 1, 1, &f).unwrap();
        let betas: Vec<_> = fam.iter().map(|m| m.beta().clone()).collect();
        assert_eq!(betas, f.first_elements(5).unwrap());
    }

    #[test]
    fn bad_beta_examples() {
        let f = Field::prime(101).unwrap();
        let all = f.first_elements(101).unwrap();
        let s = [form(&f, &[1, 0]), form(&f, &[0, 1])];
        let report = count_bad_betas(&f, &s, &all, 2).unwrap();
        assert_eq!(report.bad, vec![f.zero(), f.one()]);

        let single = count_bad_betas(&f, &[form(&f, &[1])], &[f.zero()], 1).unwrap();
        assert_eq!(single.count(), 1);
    }
}
