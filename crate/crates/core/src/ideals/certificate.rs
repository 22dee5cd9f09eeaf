//! Certificates `(i, p̄, α)` with `C_{[i]'} ≡ α·T_{i+1} ≢ 0 (mod p̄)`, where `p̄` is a path of
//! the first `i` terms modulo `⟨0⟩`.

use serde_json::{json, Value};

use super::membership::{GradedComponent, DEFAULT_GRADED_CAP};
use super::{enumerate_paths, nodes, ratio, IdealGens, Path, DEFAULT_PATH_CAP};
use crate::circuit::{Circuit, MultiplicationTerm, SparsePoly, DEFAULT_EXPAND_CAP};
use crate::error::{Error, Result};
use crate::field::FieldElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub i: usize,
    pub path: Path,
    pub alpha: FieldElement,
}

impl Certificate {
    /// `{"i": …, "path": [<term>…], "alpha": "…"}` with terms in the circuit term format.
    pub fn to_json(&self) -> Value {
        let f = self.path.base.field();
        let path: Vec<Value> = self
            .path
            .nodes
            .iter()
            .map(|v| {
                json!({
                    "scalar": f.element_to_json(v.scalar()),
                    "forms": v.forms().iter()
                        .map(|l| l.coeffs().iter().map(|a| f.element_to_json(a)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "i": self.i, "path": path, "alpha": f.element_to_json(&self.alpha) })
    }
}

/// Caps for the certificate search.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub path_cap: usize,
    pub graded_cap: usize,
    pub expand_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { path_cap: DEFAULT_PATH_CAP, graded_cap: DEFAULT_GRADED_CAP, expand_cap: DEFAULT_EXPAND_CAP }
    }
}

fn sum_terms(circuit: &Circuit, terms: &[MultiplicationTerm], cap: usize) -> Result<SparsePoly> {
    let mut acc = SparsePoly::zero(circuit.field(), circuit.n());
    for t in terms {
        acc = acc.add(&t.expand(circuit.field(), circuit.n(), cap)?);
    }
    Ok(acc)
}

pub fn find_certificate(circuit: &Circuit) -> Result<Certificate> {
    find_certificate_with(circuit, SearchOptions::default())
}

/// Searches `i = 0, 1, …` and, for each `i`, the paths of length `i` in depth-first order.
/// `α` is the ratio of the canonical residues of `C_{[i]'}` and `T_{i+1}` modulo the path's
/// degree-`d` component.
pub fn find_certificate_with(circuit: &Circuit, opts: SearchOptions) -> Result<Certificate> {
    let f = circuit.field();
    if circuit.expand_with_cap(opts.expand_cap)?.is_zero() {
        return Err(Error::CircuitIsZero);
    }
    let terms = circuit.terms();
    let degree = circuit.d() as u32;
    let base = IdealGens::zero(f, circuit.n());
    for i in 0..terms.len() {
        let next = terms[i].expand(f, circuit.n(), opts.expand_cap)?;
        let tail = sum_terms(circuit, &terms[i..], opts.expand_cap)?;
        for path in enumerate_paths(circuit, i, &base, opts.path_cap)? {
            let component = GradedComponent::new(&path.ideal(), degree, opts.graded_cap, false)?;
            let r_next = component.reduce(&next)?.residue;
            if r_next.iter().all(FieldElement::is_zero) {
                continue;
            }
            let r_tail = component.reduce(&tail)?.residue;
            if let Some(alpha) = ratio(f, &r_tail, &r_next) {
                if !alpha.is_zero() {
                    return Ok(Certificate { i, path, alpha });
                }
            }
        }
    }
    Err(Error::CertificateNotFound)
}

fn same_term(a: &MultiplicationTerm, b: &MultiplicationTerm) -> bool {
    let mut fa = a.forms().to_vec();
    let mut fb = b.forms().to_vec();
    fa.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
    fb.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
    a.scalar() == b.scalar() && fa == fb
}

/// Re-derives every node of the path and checks `C_{[i]} ∈ ⟨p̄⟩`,
/// `C_{[i]'} − α·T_{i+1} ∈ ⟨p̄⟩` and `T_{i+1} ∉ ⟨p̄⟩`.
pub fn verify_certificate(circuit: &Circuit, cert: &Certificate) -> Result<bool> {
    let f = circuit.field();
    let terms = circuit.terms();
    let n = circuit.n();
    if cert.path.base.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cert.path.base.n() });
    }
    if cert.i >= terms.len() || cert.path.len() != cert.i || cert.alpha.is_zero() || f.check(&cert.alpha).is_err() {
        return Ok(false);
    }
    let mut prefix = cert.path.base.clone();
    for (j, v) in cert.path.nodes.iter().enumerate() {
        if !nodes(&terms[j], &prefix).iter().any(|u| same_term(u, v)) {
            return Ok(false);
        }
        prefix = prefix.with(v.clone());
    }
    let component = GradedComponent::new(&cert.path.ideal(), circuit.d() as u32, DEFAULT_GRADED_CAP, false)?;
    let head = sum_terms(circuit, &terms[..cert.i], DEFAULT_EXPAND_CAP)?;
    let tail = sum_terms(circuit, &terms[cert.i..], DEFAULT_EXPAND_CAP)?;
    let next = terms[cert.i].expand(f, n, DEFAULT_EXPAND_CAP)?;
    Ok(component.contains(&head)?
        && component.contains(&tail.sub(&next.scale(&cert.alpha)))?
        && !component.contains(&next)?)
}
