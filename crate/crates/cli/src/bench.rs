//! Hitting-set streaming throughput with a digest of the stream.

use std::time::Instant;

use pitkit_core::hitting::{lift_field, HittingSet};
use pitkit_core::{Field, FieldElement, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub field: serde_json::Value,
    pub points: u128,
    pub elapsed_ms: f64,
    pub points_per_sec: f64,
    /// SHA-256 of the canonical byte encoding of every `(β, γ̄, δ̄)` streamed.
    pub sha256: String,
    /// Largest growth of live heap bytes observed while streaming, when a probe is given.
    pub peak_extra_bytes: Option<usize>,
}

impl BenchReport {
    pub fn csv_header() -> [&'static str; 8] {
        ["k", "d", "n", "field", "points", "elapsed_ms", "points_per_sec", "sha256"]
    }

    pub fn csv_row(&self) -> [String; 8] {
        [
            self.k.to_string(),
            self.d.to_string(),
            self.n.to_string(),
            self.field.to_string(),
            self.points.to_string(),
            format!("{:.3}", self.elapsed_ms),
            format!("{:.1}", self.points_per_sec),
            self.sha256.clone(),
        ]
    }
}

/// Appends a canonical encoding of `x` to `buf`.
pub fn encode_element(x: &FieldElement, buf: &mut Vec<u8>) {
    match x {
        FieldElement::Prime(a) => buf.extend_from_slice(&a.to_le_bytes()),
        FieldElement::Ext(cs) => cs.iter().for_each(|c| buf.extend_from_slice(&c.to_le_bytes())),
        FieldElement::Rational(r) => {
            buf.extend_from_slice(r.to_string().as_bytes());
            buf.push(0);
        }
    }
}

/// Streams up to `budget` points of the hitting set for `(k, d, n)` over `field` (lifted when
/// too small). `probe`, if given, returns the current number of live heap bytes and is
/// sampled every 4096 points.
pub fn bench(k: usize, d: usize, n: usize, field: &Field, budget: u128, probe: Option<&dyn Fn() -> usize>) -> Result<BenchReport> {
    let (field, _) = lift_field(field, k, d, n)?;
    let mut set = HittingSet::new(k, d, n, &field)?;
    let baseline = probe.map(|p| p());
    let mut peak = 0usize;
    let mut hasher = Sha256::new();
    let mut buf = Vec::with_capacity(16 * (n + k + 1));
    let mut points = 0u128;
    let start = Instant::now();
    if budget > 0 {
        let streamed = set.for_each_ref::<std::convert::Infallible>(|_, beta, gamma, delta| {
            buf.clear();
            encode_element(beta, &mut buf);
            gamma.iter().chain(delta).for_each(|x| encode_element(x, &mut buf));
            hasher.update(&buf);
            points += 1;
            if points.is_multiple_of(4096) {
                if let (Some(p), Some(b)) = (probe, baseline) {
                    peak = peak.max(p().saturating_sub(b));
                }
            }
            Ok(points < budget)
        });
        if let Err(never) = streamed {
            match never {}
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(BenchReport {
        k,
        d,
        n,
        field: serde_json::to_value(field.description()).expect("descriptions serialize"),
        points,
        elapsed_ms: elapsed * 1e3,
        points_per_sec: if elapsed > 0.0 { points as f64 / elapsed } else { 0.0 },
        sha256: hex::encode(hasher.finalize()),
        peak_extra_bytes: probe.map(|_| peak),
    })
}
