#![allow(dead_code)]

use pitkit_core::{Circuit, Field, FieldElement, LinearForm, MultiplicationTerm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn f101() -> Field {
    Field::prime(101).unwrap()
}

pub fn form(f: &Field, cs: &[i64]) -> LinearForm {
    LinearForm::new(cs.iter().map(|&c| f.from_i64(c)).collect())
}

pub fn rand_form(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> LinearForm {
    loop {
        let l = LinearForm::new((0..n).map(|_| f.random(rng)).collect());
        if !l.is_zero() {
            return l;
        }
    }
}

/// A nonzero form in the span of `basis`.
pub fn form_in_span(f: &Field, basis: &[LinearForm], rng: &mut ChaCha8Rng) -> LinearForm {
    loop {
        let l = basis.iter().fold(LinearForm::zero(f, basis[0].n()), |acc, b| acc.add(f, &b.scale(f, &f.random(rng))));
        if !l.is_zero() {
            return l;
        }
    }
}

pub fn rand_term(f: &Field, n: usize, d: usize, rng: &mut ChaCha8Rng) -> MultiplicationTerm {
    let forms = (0..d).map(|_| rand_form(f, n, rng)).collect();
    MultiplicationTerm::new(f.random_nonzero(rng), forms).unwrap()
}

pub fn rand_circuit(f: &Field, k: usize, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let terms = (0..k).map(|_| rand_term(f, n, d, rng)).collect();
    Circuit::new(f, n, d, k, terms).unwrap()
}

/// A random circuit whose forms all come from a small set, so cancellations and shared
/// factors are common.
pub fn clustered_circuit(f: &Field, k: usize, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let pool: Vec<LinearForm> = (0..rng.random_range(1..=3)).map(|_| rand_form(f, n, rng)).collect();
    let terms = (0..k)
        .map(|_| {
            let forms = (0..d).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
            MultiplicationTerm::new(f.random_nonzero(rng), forms).unwrap()
        })
        .collect();
    Circuit::new(f, n, d, k, terms).unwrap()
}

/// Direct evaluation `Σ c ∏ ℓ(x)` written independently of the library's evaluator.
pub fn naive_eval(c: &Circuit, x: &[FieldElement]) -> FieldElement {
    let f = c.field();
    let mut total = f.zero();
    for t in c.terms() {
        let mut prod = t.scalar().clone();
        for l in t.forms() {
            let mut v = f.zero();
            for (a, xi) in l.coeffs().iter().zip(x) {
                v = f.add(&v, &f.mul(a, xi));
            }
            prod = f.mul(&prod, &v);
        }
        total = f.add(&total, &prod);
    }
    total
}
