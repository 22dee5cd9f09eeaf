use std::collections::BTreeMap;

use super::LinearForm;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Default monomial cap for expansions.
pub const DEFAULT_EXPAND_CAP: usize = 1_000_000;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// A multivariate polynomial stored as a map from exponent vectors to nonzero coefficients.
///
/// This is the ground-truth representation: every identity verdict in the crate can be
/// checked against a full expansion into this form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    field: Field,
    n: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl SparsePoly {
    pub fn zero(field: &Field, n: usize) -> SparsePoly {
        SparsePoly { field: field.clone(), n, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, n: usize, c: FieldElement) -> SparsePoly {
        let mut p = SparsePoly::zero(field, n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn monomial(field: &Field, exponents: Monomial, c: FieldElement) -> SparsePoly {
        let mut p = SparsePoly::zero(field, exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn from_form(field: &Field, form: &LinearForm) -> SparsePoly {
        let n = form.n();
        let mut p = SparsePoly::zero(field, n);
        for (i, a) in form.coeffs().iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> FieldElement {
        self.terms.get(exponents).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c · x^exponents`, dropping the entry if it cancels.
    pub fn add_term(&mut self, exponents: Monomial, c: FieldElement) {
        debug_assert_eq!(exponents.len(), self.n);
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common degree of all monomials; the zero polynomial reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next().unwrap_or(0);
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &FieldElement) -> SparsePoly {
        let mut out = SparsePoly::zero(&self.field, self.n);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        self.mul_capped(other, usize::MAX).expect("uncapped product")
    }

    pub fn mul_capped(&self, other: &SparsePoly, cap: usize) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(&self.field, self.n);
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, self.field.mul(a, b));
                if out.terms.len() > cap {
                    return Err(Error::ExpansionTooLarge { cap });
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a linear form.
    pub fn mul_form(&self, form: &LinearForm, cap: usize) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(&self.field, self.n);
        for (e, a) in &self.terms {
            for (i, b) in form.coeffs().iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] += 1;
                out.add_term(e2, self.field.mul(a, b));
                if out.terms.len() > cap {
                    return Err(Error::ExpansionTooLarge { cap });
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: point.len() });
        }
        self.field.check_all(point)?;
        let f = &self.field;
        Ok(self.terms.iter().fold(f.zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(point)
                .filter(|(k, _)| **k > 0)
                .fold(c.clone(), |m, (k, x)| f.mul(&m, &f.pow(x, *k as u128)));
            f.add(&acc, &mono)
        }))
    }

    /// Substitutes `value` for variable `var`, keeping the variable count.
    pub fn substitute(&self, var: usize, value: &FieldElement) -> SparsePoly {
        let f = &self.field;
        let mut out = SparsePoly::zero(f, self.n);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0);
            out.add_term(e2, f.mul(c, &f.pow(value, k as u128)));
        }
        out
    }

    /// Applies the ring homomorphism `x_i ↦ images[i]` (a linear substitution), returning a
    /// polynomial in the images' variables.
    pub fn compose_linear(&self, images: &[LinearForm]) -> Result<SparsePoly> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: images.len() });
        }
        let m = images.first().map_or(0, LinearForm::n);
        let image_polys: Vec<SparsePoly> = images.iter().map(|l| SparsePoly::from_form(&self.field, l)).collect();
        let mut out = SparsePoly::zero(&self.field, m);
        for (e, c) in &self.terms {
            let mut acc = SparsePoly::constant(&self.field, m, c.clone());
            for (i, k) in e.iter().enumerate() {
                for _ in 0..*k {
                    acc = acc.mul(&image_polys[i]);
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_entries() {
        let f = Field::prime(5).unwrap();
        let mut p = SparsePoly::monomial(&f, vec![1, 1], f.from_i64(2));
        p.add_term(vec![1, 1], f.from_i64(3));
        assert!(p.is_zero());
        assert_eq!(p.homogeneous_degree(), Some(0));
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn substitute_and_eval_agree() {
        let q = Field::rational();
        let x = SparsePoly::from_form(&q, &LinearForm::new(vec![q.from_i64(1), q.from_i64(2)]));
        let p = x.mul(&x);
        let partial = p.substitute(0, &q.from_i64(3));
        let pt = [q.from_i64(3), q.from_i64(-1)];
        assert_eq!(partial.eval(&pt).unwrap(), p.eval(&pt).unwrap());
        assert_eq!(p.eval(&pt).unwrap(), q.from_i64(1));
    }

    #[test]
    fn cap_is_enforced() {
        let f = Field::prime(101).unwrap();
        let form = LinearForm::new(vec![f.one(); 4]);
        let mut p = SparsePoly::constant(&f, 4, f.one());
        let mut hit = false;
        for _ in 0..4 {
            match p.mul_form(&form, 20) {
                Ok(next) => p = next,
                Err(Error::ExpansionTooLarge { cap: 20 }) => {
                    hit = true;
                    break;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(hit);
    }
}
