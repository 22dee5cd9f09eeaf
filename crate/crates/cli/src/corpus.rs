//! Seeded corpora of circuits with expansion-derived labels.
//!
//! Generation uses ChaCha8 seeded through `seed_from_u64`. Field elements are drawn with
//! `Field::random`, which for finite fields is uniform over the canonical enumeration.

use std::ops::RangeInclusive;

use pitkit_core::{Circuit, Error, Field, FieldDescription, FieldElement, LinearForm, MultiplicationTerm, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub k_range: RangeInclusive<usize>,
    pub d_range: RangeInclusive<usize>,
    pub n_range: RangeInclusive<usize>,
    pub fields: Vec<FieldDescription>,
    pub zero_fraction: f64,
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let nonempty = |r: &RangeInclusive<usize>| !r.is_empty() && *r.start() >= 1;
        if !nonempty(&self.k_range) || !nonempty(&self.d_range) || !nonempty(&self.n_range) {
            return Err(Error::InvalidParameters("k, d and n ranges must be nonempty and positive".into()));
        }
        if !(0.0..=1.0).contains(&self.zero_fraction) {
            return Err(Error::InvalidParameters("zero_fraction must lie in [0, 1]".into()));
        }
        if self.fields.is_empty() {
            return Err(Error::InvalidParameters("at least one field is required".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Zero,
    Nonzero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub id: usize,
    pub construction: String,
    pub label: Label,
    pub circuit: Circuit,
}

impl CorpusEntry {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "id": self.id,
            "construction": self.construction,
            "label": self.label,
            "circuit": self.circuit.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<CorpusEntry> {
        let bad = |what: &str| Error::MalformedDocument(format!("corpus entry: {what}"));
        let id = v["id"].as_u64().ok_or_else(|| bad("id"))? as usize;
        let construction = v["construction"].as_str().unwrap_or("unknown").to_string();
        let label: Label = serde_json::from_value(v["label"].clone()).map_err(|_| bad("label"))?;
        let circuit = Circuit::from_json(&v["circuit"].to_string())?;
        Ok(CorpusEntry { id, construction, label, circuit })
    }
}

/// Reads a JSON Lines corpus.
pub fn read_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Value = serde_json::from_str(l).map_err(|e| Error::MalformedDocument(e.to_string()))?;
            CorpusEntry::from_json(&v)
        })
        .collect()
}

pub fn write_corpus(entries: &[CorpusEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&e.to_json().to_string());
        out.push('\n');
    }
    out
}

fn rand_form(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> LinearForm {
    loop {
        let l = LinearForm::new((0..n).map(|_| f.random(rng)).collect());
        if !l.is_zero() {
            return l;
        }
    }
}

fn forms(f: &Field, n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<LinearForm> {
    (0..count).map(|_| rand_form(f, n, rng)).collect()
}

fn term(scalar: FieldElement, forms: Vec<LinearForm>) -> MultiplicationTerm {
    MultiplicationTerm::new(scalar, forms).expect("scalar and forms are nonzero")
}

fn with(mut head: Vec<LinearForm>, tail: &[LinearForm]) -> Vec<LinearForm> {
    head.extend_from_slice(tail);
    head
}

/// `T + (−T)` where the second copy has its forms permuted and rescaled.
fn cancel_pair(f: &Field, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<MultiplicationTerm> {
    let ls = forms(f, n, d, rng);
    let c = f.random_nonzero(rng);
    let mut permuted = ls.clone();
    permuted.rotate_left(rng.random_range(0..d));
    let mut scalar = f.neg(&c);
    let permuted = permuted
        .into_iter()
        .map(|l| {
            let lambda = f.random_nonzero(rng);
            scalar = f.div(&scalar, &lambda).expect("nonzero");
            l.scale(f, &lambda)
        })
        .collect();
    vec![term(c, ls), term(scalar, permuted)]
}

/// `c₁ℓ₁M + c₂ℓ₂M − (c₁ℓ₁ + c₂ℓ₂)M`.
fn distributive(f: &Field, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<MultiplicationTerm>> {
    let m = forms(f, n, d - 1, rng);
    let (l1, l2) = (rand_form(f, n, rng), rand_form(f, n, rng));
    let (c1, c2) = (f.random_nonzero(rng), f.random_nonzero(rng));
    let sum = l1.scale(f, &c1).add(f, &l2.scale(f, &c2));
    if sum.is_zero() {
        return None;
    }
    Some(vec![
        term(c1, with(vec![l1], &m)),
        term(c2, with(vec![l2], &m)),
        term(f.neg(&f.one()), with(vec![sum], &m)),
    ])
}

/// `(a + b)(a − b)M − a·a·M + b·b·M`.
fn squares(f: &Field, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<MultiplicationTerm>> {
    let m = forms(f, n, d - 2, rng);
    let (a, b) = (rand_form(f, n, rng), rand_form(f, n, rng));
    let plus = a.add(f, &b);
    let minus = a.add(f, &b.scale(f, &f.neg(&f.one())));
    if plus.is_zero() || minus.is_zero() {
        return None;
    }
    let c = f.random_nonzero(rng);
    Some(vec![
        term(c.clone(), with(vec![plus, minus], &m)),
        term(f.neg(&c), with(vec![a.clone(), a], &m)),
        term(c, with(vec![b.clone(), b], &m)),
    ])
}

/// `ℓ₁ℓ₂M + ℓ₁(ℓ₁ + ℓ₂)M + ℓ₁ℓ₁M`, zero in characteristic 2.
fn char2_identity(f: &Field, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<MultiplicationTerm>> {
    let m = forms(f, n, d - 2, rng);
    let (l1, l2) = (rand_form(f, n, rng), rand_form(f, n, rng));
    let sum = l1.add(f, &l2);
    if sum.is_zero() {
        return None;
    }
    let c = f.random_nonzero(rng);
    Some(vec![
        term(c.clone(), with(vec![l1.clone(), l2], &m)),
        term(c.clone(), with(vec![l1.clone(), sum], &m)),
        term(c, with(vec![l1.clone(), l1], &m)),
    ])
}

/// An identically zero term list for `(k, d, n)`, with the construction's name.
fn zero_terms(f: &Field, k: usize, d: usize, n: usize, rng: &mut ChaCha8Rng) -> (&'static str, Vec<MultiplicationTerm>) {
    if k == 1 {
        return ("empty", Vec::new());
    }
    loop {
        let choice = rng.random_range(0..4);
        let built = match choice {
            0 => Some(("cancel-pair", cancel_pair(f, d, n, rng))),
            1 if k >= 3 => distributive(f, d, n, rng).map(|t| ("distributive", t)),
            2 if k >= 3 && d >= 2 => squares(f, d, n, rng).map(|t| ("squares", t)),
            3 if k >= 3 && d >= 2 && f.characteristic() == Some(2) => {
                char2_identity(f, d, n, rng).map(|t| ("char2-identity", t))
            }
            _ => None,
        };
        if let Some(b) = built {
            return b;
        }
    }
}

fn random_terms(f: &Field, k: usize, d: usize, n: usize, rng: &mut ChaCha8Rng) -> (&'static str, Vec<MultiplicationTerm>) {
    let count = rng.random_range(1..=k);
    if rng.random_bool(0.5) {
        let terms = (0..count).map(|_| term(f.random_nonzero(rng), forms(f, n, d, rng))).collect();
        return ("random", terms);
    }
    // Forms drawn from a small pool share factors and sometimes cancel.
    let pool = forms(f, n, rng.random_range(1..=3), rng);
    let terms = (0..count)
        .map(|_| {
            let fs = (0..d).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
            term(f.random_nonzero(rng), fs)
        })
        .collect();
    ("clustered", terms)
}

/// A zero construction with one scalar changed.
fn near_identity(f: &Field, k: usize, d: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<(&'static str, Vec<MultiplicationTerm>)> {
    let (_, mut terms) = zero_terms(f, k, d, n, rng);
    if terms.is_empty() || f.size_u128() == Some(2) {
        return None;
    }
    let i = rng.random_range(0..terms.len());
    let factor = loop {
        let c = f.random_nonzero(rng);
        if c != f.one() {
            break c;
        }
    };
    terms[i] = terms[i].with_scalar(f.mul(terms[i].scalar(), &factor));
    Some(("near-identity", terms))
}

/// Builds `spec.count` circuits. Exactly `⌈zero_fraction · count⌉` of them come from zero
/// constructions (spread evenly through the corpus); every label is recomputed by expansion.
pub fn generate_corpus(spec: &CorpusSpec, expand_cap: usize) -> Result<Vec<CorpusEntry>> {
    spec.validate()?;
    let fields = spec.fields.iter().map(Field::from_description).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for id in 0..spec.count {
        let f = &fields[id % fields.len()];
        let k = rng.random_range(spec.k_range.clone());
        let d = rng.random_range(spec.d_range.clone());
        let n = rng.random_range(spec.n_range.clone());
        let zero = ((id + 1) as f64 * spec.zero_fraction).ceil() > (id as f64 * spec.zero_fraction).ceil();
        let (construction, terms) = if zero {
            zero_terms(f, k, d, n, &mut rng)
        } else if rng.random_bool(0.3) {
            near_identity(f, k, d, n, &mut rng).unwrap_or_else(|| random_terms(f, k, d, n, &mut rng))
        } else {
            random_terms(f, k, d, n, &mut rng)
        };
        let circuit = Circuit::new(f, n, d, k, terms)?;
        let label = if circuit.expand_with_cap(expand_cap)?.is_zero() { Label::Zero } else { Label::Nonzero };
        out.push(CorpusEntry { id, construction: construction.to_string(), label, circuit });
    }
    Ok(out)
}
