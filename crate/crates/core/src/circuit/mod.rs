//! Depth-3 circuits: sums of at most `k` multiplication terms, each a nonzero scalar times a
//! product of `d` linear forms in `n` variables.

mod json;
mod sparse;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement};

pub use json::{AffineCircuit, AffineTerm, CircuitDocument, TermDocument};
pub use sparse::{Monomial, SparsePoly, DEFAULT_EXPAND_CAP};

/// A point in `F^n`.
pub type Point = Vec<FieldElement>;

/// `Σ a_i x_i`, with zero constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<FieldElement>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<FieldElement>) -> LinearForm {
        LinearForm { coeffs }
    }

    pub fn zero(field: &Field, n: usize) -> LinearForm {
        LinearForm { coeffs: vec![field.zero(); n] }
    }

    /// The variable `x_i` (0-based).
    pub fn variable(field: &Field, n: usize, i: usize) -> LinearForm {
        let mut f = LinearForm::zero(field, n);
        f.coeffs[i] = field.one();
        f
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// Unchecked evaluation; `point.len()` must equal `n`.
    pub fn eval(&self, field: &Field, point: &[FieldElement]) -> FieldElement {
        self.coeffs.iter().zip(point).fold(field.zero(), |acc, (a, x)| {
            if a.is_zero() {
                acc
            } else {
                field.add(&acc, &field.mul(a, x))
            }
        })
    }

    pub fn scale(&self, field: &Field, c: &FieldElement) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().map(|a| field.mul(a, c)).collect() }
    }

    pub fn add(&self, field: &Field, other: &LinearForm) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| field.add(a, b)).collect() }
    }

    pub fn map(&self, embedding: &Embedding) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().map(|a| embedding.apply(a)).collect() }
    }
}

/// `c · ∏ ℓ` with `c ≠ 0`. Repeated forms are allowed.
///
/// Terms produced by a variable reduction may contain a form that mapped to zero; such a
/// term is identically zero and [`MultiplicationTerm::is_zero`] reports it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationTerm {
    scalar: FieldElement,
    forms: Vec<LinearForm>,
}

impl MultiplicationTerm {
    /// Validates that the scalar and every form are nonzero.
    pub fn new(scalar: FieldElement, forms: Vec<LinearForm>) -> Result<MultiplicationTerm> {
        if scalar.is_zero() {
            return Err(Error::ZeroScalar { term: 0 });
        }
        if forms.iter().any(LinearForm::is_zero) {
            return Err(Error::ZeroFormInTerm { term: 0 });
        }
        Ok(MultiplicationTerm { scalar, forms })
    }

    /// `M(S)`: the product of the forms with scalar one; the empty list gives `1`.
    pub fn product(field: &Field, forms: Vec<LinearForm>) -> MultiplicationTerm {
        MultiplicationTerm { scalar: field.one(), forms }
    }

    pub(crate) fn from_parts(scalar: FieldElement, forms: Vec<LinearForm>) -> MultiplicationTerm {
        MultiplicationTerm { scalar, forms }
    }

    pub fn scalar(&self) -> &FieldElement {
        &self.scalar
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn degree(&self) -> usize {
        self.forms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() || self.forms.iter().any(LinearForm::is_zero)
    }

    pub fn with_scalar(&self, scalar: FieldElement) -> MultiplicationTerm {
        MultiplicationTerm { scalar, forms: self.forms.clone() }
    }

    pub fn eval(&self, field: &Field, point: &[FieldElement]) -> FieldElement {
        self.forms
            .iter()
            .fold(self.scalar.clone(), |acc, l| field.mul(&acc, &l.eval(field, point)))
    }

    pub fn expand(&self, field: &Field, n: usize, cap: usize) -> Result<SparsePoly> {
        let mut p = SparsePoly::constant(field, n, self.scalar.clone());
        for l in &self.forms {
            p = p.mul_form(l, cap)?;
        }
        Ok(p)
    }

    pub fn map(&self, embedding: &Embedding) -> MultiplicationTerm {
        MultiplicationTerm {
            scalar: embedding.apply(&self.scalar),
            forms: self.forms.iter().map(|l| l.map(embedding)).collect(),
        }
    }
}

/// A ΣΠΣ(k, d, n) circuit: at most `k` terms, each of degree exactly `d`, over `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    field: Field,
    n: usize,
    d: usize,
    k: usize,
    terms: Vec<MultiplicationTerm>,
}

impl Circuit {
    /// Validates dimensions, degrees, field membership and the fanin bound.
    pub fn new(field: &Field, n: usize, d: usize, k: usize, terms: Vec<MultiplicationTerm>) -> Result<Circuit> {
        if terms.len() > k {
            return Err(Error::TooManyTerms { k, got: terms.len() });
        }
        for (t, term) in terms.iter().enumerate() {
            if term.degree() != d {
                return Err(Error::DegreeMismatch { term: t, expected: d, got: term.degree() });
            }
            if term.scalar.is_zero() {
                return Err(Error::ZeroScalar { term: t });
            }
            field.check(&term.scalar)?;
            for l in &term.forms {
                if l.n() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: l.n() });
                }
                if l.is_zero() {
                    return Err(Error::ZeroFormInTerm { term: t });
                }
                field.check_all(l.coeffs())?;
            }
        }
        Ok(Circuit { field: field.clone(), n, d, k, terms })
    }

    /// Builds a circuit whose terms may contain zero forms (flagged, identically zero terms).
    pub(crate) fn from_parts(field: &Field, n: usize, d: usize, k: usize, terms: Vec<MultiplicationTerm>) -> Circuit {
        Circuit { field: field.clone(), n, d, k, terms }
    }

    /// The circuit with no terms.
    pub fn zero(field: &Field, n: usize, d: usize, k: usize) -> Circuit {
        Circuit { field: field.clone(), n, d, k, terms: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[MultiplicationTerm] {
        &self.terms
    }

    /// `L(C)`: all forms of all terms, in order.
    pub fn forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.terms.iter().flat_map(|t| t.forms.iter())
    }

    /// Exact evaluation `Σ c_i ∏ ℓ(p)`.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: point.len() });
        }
        self.field.check_all(point)?;
        Ok(self.evaluate_unchecked(point))
    }

    pub(crate) fn evaluate_unchecked(&self, point: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        self.terms.iter().fold(f.zero(), |acc, t| f.add(&acc, &t.eval(f, point)))
    }

    pub fn expand(&self) -> Result<SparsePoly> {
        self.expand_with_cap(DEFAULT_EXPAND_CAP)
    }

    /// Fully multiplied-out polynomial; errors rather than truncating past `cap` monomials.
    pub fn expand_with_cap(&self, cap: usize) -> Result<SparsePoly> {
        let mut total = SparsePoly::zero(&self.field, self.n);
        for t in &self.terms {
            total = total.add(&t.expand(&self.field, self.n, cap)?);
            if total.len() > cap {
                return Err(Error::ExpansionTooLarge { cap });
            }
        }
        Ok(total)
    }

    /// `C_S = Σ_{s ∈ S} T_s` with 0-based indices; `S = ∅` gives the zero circuit.
    pub fn subcircuit(&self, indices: &[usize]) -> Result<Circuit> {
        let terms = indices
            .iter()
            .map(|&i| {
                self.terms
                    .get(i)
                    .cloned()
                    .ok_or(Error::IndexOutOfRange { index: i, len: self.terms.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit { terms, ..self.clone() })
    }

    /// Same circuit with coefficients pushed through a field embedding.
    pub fn embed(&self, embedding: &Embedding) -> Result<Circuit> {
        if embedding.source() != &self.field {
            return Err(Error::FieldMismatch("embedding source differs from the circuit field".into()));
        }
        Ok(Circuit {
            field: embedding.target().clone(),
            terms: self.terms.iter().map(|t| t.map(embedding)).collect(),
            ..self.clone()
        })
    }

    /// Replaces the scalar of term `index`.
    pub fn with_term_scalar(&self, index: usize, scalar: FieldElement) -> Result<Circuit> {
        let mut terms = self.terms.clone();
        let t = terms
            .get_mut(index)
            .ok_or(Error::IndexOutOfRange { index, len: self.terms.len() })?;
        *t = t.with_scalar(scalar);
        Circuit::new(&self.field, self.n, self.d, self.k, terms)
    }
}
