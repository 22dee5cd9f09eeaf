//! Runs several testers over a corpus and cross-checks them against the labels.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use pitkit_core::hitting::{circuit_blackbox_test, schwartz_zippel_test, whitebox_test, CircuitOracle, Verdict};
use pitkit_core::ideals::{find_certificate, verify_certificate};
use pitkit_core::{ensure_min_size, Circuit, Error, Result};
use serde::Serialize;
use serde_json::Value;

use crate::corpus::{CorpusEntry, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Hitting,
    Whitebox,
    Random,
    Expand,
    Certify,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Mode, String> {
        match s {
            "hitting" => Ok(Mode::Hitting),
            "whitebox" => Ok(Mode::Whitebox),
            "random" => Ok(Mode::Random),
            "expand" => Ok(Mode::Expand),
            "certify" => Ok(Mode::Certify),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Hitting => "hitting",
            Mode::Whitebox => "whitebox",
            Mode::Random => "random",
            Mode::Expand => "expand",
            Mode::Certify => "certify",
        };
        f.write_str(s)
    }
}

/// Settings shared by every mode.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub jobs: usize,
    pub expand_cap: usize,
    pub seed: u64,
    pub random_trials: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { jobs: 1, expand_cap: pitkit_core::circuit::DEFAULT_EXPAND_CAP, seed: 0, random_trials: 40 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeResult {
    pub mode: Mode,
    /// `zero` or `nonzero`; certify reports `nonzero` only for a verified certificate.
    pub verdict: Option<Label>,
    pub elapsed_ms: f64,
    /// The witness or certificate, when the mode produced one.
    pub evidence: Value,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircuitReport {
    pub id: usize,
    pub construction: String,
    pub label: Label,
    pub results: Vec<ModeResult>,
    /// True iff every mode produced a verdict equal to the label.
    pub agree: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub circuits: Vec<CircuitReport>,
    pub total: usize,
    pub agreeing: usize,
    pub zero_labels: usize,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn all_agree(&self) -> bool {
        self.agreeing == self.total
    }
}

fn label_of(v: &Verdict) -> Label {
    if v.is_zero() {
        Label::Zero
    } else {
        Label::Nonzero
    }
}

fn random_mode(circuit: &Circuit, opts: &SuiteOptions) -> Result<(Label, Value)> {
    // Lift so that |T| = 2d fits, which keeps the per-trial miss rate at most 1/2.
    let size = 2 * circuit.d().max(1) as u128;
    let (f, embedding) = ensure_min_size(circuit.field(), size - 1);
    let oracle = CircuitOracle::new(circuit.embed(&embedding)?);
    let v = schwartz_zippel_test(&oracle, &f, circuit.n(), circuit.d(), size, opts.random_trials, opts.seed)?;
    let label = if v.is_nonzero() { Label::Nonzero } else { Label::Zero };
    let evidence = v
        .witness()
        .map(|t| serde_json::json!(t.point.iter().map(|x| f.element_to_json(x)).collect::<Vec<_>>()))
        .unwrap_or(Value::Null);
    Ok((label, evidence))
}

fn certify_mode(circuit: &Circuit) -> Result<(Label, Value)> {
    match find_certificate(circuit) {
        Err(Error::CircuitIsZero) => Ok((Label::Zero, Value::Null)),
        Err(e) => Err(e),
        Ok(cert) => {
            if verify_certificate(circuit, &cert)? {
                Ok((Label::Nonzero, cert.to_json()))
            } else {
                Err(Error::Oracle("certificate failed verification".into()))
            }
        }
    }
}

/// Runs one mode on a circuit.
pub fn run_mode(circuit: &Circuit, mode: Mode, opts: &SuiteOptions) -> ModeResult {
    let start = Instant::now();
    let outcome: Result<(Label, Value)> = match mode {
        Mode::Hitting => circuit_blackbox_test(circuit, opts.jobs).map(|v| (label_of(&v), v.to_json())),
        Mode::Whitebox => whitebox_test(circuit).map(|v| (label_of(&v), v.to_json())),
        Mode::Expand => circuit.expand_with_cap(opts.expand_cap).map(|p| {
            let label = if p.is_zero() { Label::Zero } else { Label::Nonzero };
            (label, serde_json::json!({ "monomials": p.len() }))
        }),
        Mode::Random => random_mode(circuit, opts),
        Mode::Certify => certify_mode(circuit),
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok((verdict, evidence)) => ModeResult { mode, verdict: Some(verdict), elapsed_ms, evidence, error: None },
        Err(e) => ModeResult { mode, verdict: None, elapsed_ms, evidence: Value::Null, error: Some(e.to_string()) },
    }
}

fn run_entry(entry: &CorpusEntry, modes: &[Mode], opts: &SuiteOptions) -> CircuitReport {
    // Parallelism is spent across circuits, so each tester runs single-threaded.
    let inner = SuiteOptions { jobs: 1, ..*opts };
    let results: Vec<ModeResult> = modes.iter().map(|&m| run_mode(&entry.circuit, m, &inner)).collect();
    let agree = results.iter().all(|r| r.verdict == Some(entry.label));
    CircuitReport { id: entry.id, construction: entry.construction.clone(), label: entry.label, results, agree }
}

/// Executes every mode on every circuit, on `opts.jobs` worker threads.
pub fn run_suite(corpus: &[CorpusEntry], modes: &[Mode], opts: &SuiteOptions) -> RunReport {
    let start = Instant::now();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<CircuitReport>>> = Mutex::new(vec![None; corpus.len()]);
    std::thread::scope(|scope| {
        for _ in 0..opts.jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= corpus.len() {
                    return;
                }
                let report = run_entry(&corpus[i], modes, opts);
                slots.lock().unwrap()[i] = Some(report);
            });
        }
    });
    let circuits: Vec<CircuitReport> =
        slots.into_inner().unwrap().into_iter().map(|r| r.expect("every slot is filled")).collect();
    RunReport {
        total: circuits.len(),
        agreeing: circuits.iter().filter(|c| c.agree).count(),
        zero_labels: circuits.iter().filter(|c| c.label == Label::Zero).count(),
        circuits,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}
