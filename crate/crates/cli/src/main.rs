use std::alloc::{GlobalAlloc, Layout, System};
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pitkit::bench::{bench, BenchReport};
use pitkit::corpus::{generate_corpus, read_corpus, write_corpus, CorpusSpec};
use pitkit::suite::{run_suite, Mode, SuiteOptions};
use pitkit_core::circuit::DEFAULT_EXPAND_CAP;
use pitkit_core::hitting::{
    circuit_blackbox_test, hitting_set, lift_field, schwartz_zippel_test, whitebox_test, CircuitOracle,
};
use pitkit_core::ideals::{find_certificate, verify_certificate};
use pitkit_core::reduce::ReductionMap;
use pitkit_core::{ensure_min_size, AffineCircuit, Circuit, Error, Field, FieldDescription};
use serde_json::{json, Value};

struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        LIVE.fetch_add(layout.size(), Ordering::Relaxed);
        unsafe { System.alloc(layout) }
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
        unsafe { System.dealloc(ptr, layout) }
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

#[derive(Parser)]
#[command(name = "pitkit", version, about = "Deterministic identity testing for depth-3 circuits")]
struct Cli {
    /// Field as JSON, e.g. '{"kind":"prime","p":"101"}'.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_EXPAND_CAP)]
    expand_cap: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestMode {
    Hitting,
    Whitebox,
    Random,
    Expand,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a circuit is identically zero.
    Test {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value = "hitting")]
        mode: TestMode,
        /// Read affine factors `[a_0, a_1, …, a_n]` and homogenize (whitebox and expand only).
        #[arg(long)]
        homogenize: bool,
        #[arg(long, default_value_t = 40)]
        trials: usize,
    },
    /// Print the hitting set as JSON Lines.
    HittingSet {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Stop after this many points.
        #[arg(long)]
        limit: Option<u128>,
    },
    /// Apply the reduction map for one β.
    Reduce {
        circuit: PathBuf,
        #[arg(long)]
        beta: String,
        /// Target variable count (defaults to the circuit's k).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Find and verify a non-identity certificate.
    Certify { circuit: PathBuf },
    /// Generate a labelled corpus as JSON Lines.
    Corpus {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value = "1:3")]
        k_range: String,
        #[arg(long, default_value = "1:4")]
        d_range: String,
        #[arg(long, default_value = "1:5")]
        n_range: String,
        /// JSON array of fields; `--field` selects a single one.
        #[arg(long)]
        fields: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        zero_fraction: f64,
    },
    /// Run testers over a corpus and cross-check against the labels.
    Suite {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "hitting,expand")]
        modes: Vec<Mode>,
    },
    /// Measure hitting-set streaming throughput.
    Bench {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
        /// Append a CSV row (with header when the file is new).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::CircuitIsZero
            | Error::CertificateNotFound
            | Error::Oracle(_)
            | Error::ExpansionTooLarge { .. }
            | Error::GradedSpaceTooLarge { .. }
            | Error::PathExplosion { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_field(text: Option<&str>) -> Result<Field, Failure> {
    match text {
        Some(t) => Ok(Field::from_json(t)?),
        None => Ok(Field::prime(101)?),
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let lo = a.trim().parse().map_err(|_| Failure::Usage(format!("bad range {s:?}")))?;
    let hi = b.trim().parse().map_err(|_| Failure::Usage(format!("bad range {s:?}")))?;
    Ok(lo..=hi)
}

fn verdict_code(zero: bool) -> ExitCode {
    ExitCode::from(if zero { 0 } else { 1 })
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn load_circuit(path: &Path, homogenize: bool) -> Result<Circuit, Failure> {
    let text = read(path)?;
    Ok(if homogenize { AffineCircuit::from_json(&text)?.homogenize()? } else { Circuit::from_json(&text)? })
}

fn cmd_test(cli: &Cli, out: &mut dyn Write, path: &Path, mode: TestMode, homogenize: bool, trials: usize) -> Outcome {
    if homogenize && !matches!(mode, TestMode::Whitebox | TestMode::Expand) {
        return Err(Failure::Usage("--homogenize is supported with --mode whitebox or expand only".into()));
    }
    let circuit = load_circuit(path, homogenize)?;
    let start = Instant::now();
    let mut report = match mode {
        TestMode::Hitting => circuit_blackbox_test(&circuit, cli.jobs)?.to_json(),
        TestMode::Whitebox => whitebox_test(&circuit)?.to_json(),
        TestMode::Expand => {
            let zero = circuit.expand_with_cap(cli.expand_cap)?.is_zero();
            json!({ "verdict": if zero { "zero" } else { "nonzero" }, "witness": null, "points_evaluated": "0" })
        }
        TestMode::Random => {
            let size = 2 * circuit.d() as u128;
            let (f, e) = ensure_min_size(circuit.field(), size - 1);
            let oracle = CircuitOracle::new(circuit.embed(&e)?);
            let v = schwartz_zippel_test(&oracle, &f, circuit.n(), circuit.d(), size, trials, cli.seed)?;
            let witness = v.witness().map(|t| {
                json!({
                    "point": t.point.iter().map(|x| f.element_to_json(x)).collect::<Vec<_>>(),
                    "value": f.element_to_json(&t.value),
                })
            });
            let bound = match v.outcome {
                pitkit_core::hitting::RandomOutcome::ProbablyZero { bound } => Some(bound),
                _ => None,
            };
            json!({
                "verdict": if v.is_nonzero() { "nonzero" } else { "zero" },
                "witness": witness,
                "points_evaluated": v.trials.len().to_string(),
                "error_bound": bound,
            })
        }
    };
    report["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    let zero = report["verdict"] == "zero";
    emit(out, &report)?;
    Ok(verdict_code(zero))
}

fn cmd_hitting_set(cli: &Cli, out: &mut dyn Write, k: usize, d: usize, n: usize, limit: Option<u128>) -> Outcome {
    let field = parse_field(cli.field.as_deref())?;
    let (field, _) = lift_field(&field, k, d, n)?;
    let limit = limit.map_or(usize::MAX, |l| usize::try_from(l).unwrap_or(usize::MAX));
    for p in hitting_set(k, d, n, &field)?.take(limit) {
        emit(out, &p.to_json(&field))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(out: &mut dyn Write, path: &Path, beta: &str, k: Option<usize>) -> Outcome {
    let circuit = load_circuit(path, false)?;
    let f = circuit.field();
    let beta_value: Value = serde_json::from_str(beta).unwrap_or_else(|_| Value::String(beta.to_string()));
    let beta = f.parse_element(&beta_value)?;
    let psi = ReductionMap::new(f, beta, circuit.n(), k.unwrap_or(circuit.k()))?;
    emit(out, &psi.apply_circuit(&circuit)?.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(out: &mut dyn Write, path: &Path) -> Outcome {
    let circuit = load_circuit(path, false)?;
    match find_certificate(&circuit) {
        Err(Error::CircuitIsZero) => {
            emit(out, &json!({ "verdict": "zero" }))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Err(e.into()),
        Ok(cert) => {
            let verified = verify_certificate(&circuit, &cert)?;
            let mut v = cert.to_json();
            v["verified"] = json!(verified);
            emit(out, &v)?;
            if verified {
                Ok(verdict_code(false))
            } else {
                Err(Failure::Internal("certificate failed verification".into()))
            }
        }
    }
}

fn cmd_corpus(cli: &Cli, out: &mut dyn Write, args: &Command) -> Outcome {
    let Command::Corpus { count, k_range, d_range, n_range, fields, zero_fraction } = args else {
        unreachable!()
    };
    let fields: Vec<FieldDescription> = match (&cli.field, fields) {
        (Some(f), _) => vec![Field::from_json(f)?.description()],
        (None, Some(list)) => {
            let raw: Vec<Value> = serde_json::from_str(list).map_err(|e| Failure::Usage(e.to_string()))?;
            raw.iter().map(|v| Ok(Field::from_json(&v.to_string())?.description())).collect::<Result<_, Failure>>()?
        }
        (None, None) => vec![
            Field::prime(101)?.description(),
            Field::extension(2, 2, None)?.description(),
            Field::rational().description(),
        ],
    };
    let spec = CorpusSpec {
        seed: cli.seed,
        count: *count,
        k_range: parse_range(k_range)?,
        d_range: parse_range(d_range)?,
        n_range: parse_range(n_range)?,
        fields,
        zero_fraction: *zero_fraction,
    };
    let entries = generate_corpus(&spec, cli.expand_cap)?;
    out.write_all(write_corpus(&entries).as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_suite(cli: &Cli, out: &mut dyn Write, path: &Path, modes: &[Mode]) -> Outcome {
    let corpus = read_corpus(&read(path)?)?;
    let opts = SuiteOptions { jobs: cli.jobs, expand_cap: cli.expand_cap, seed: cli.seed, ..Default::default() };
    let report = run_suite(&corpus, modes, &opts);
    emit(out, &serde_json::to_value(&report).expect("reports serialize"))?;
    if report.all_agree() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} of {} circuits disagree", report.total - report.agreeing, report.total);
        Ok(ExitCode::from(3))
    }
}

fn cmd_bench(cli: &Cli, out: &mut dyn Write, k: usize, d: usize, n: usize, budget: u128, csv: Option<&Path>) -> Outcome {
    let field = parse_field(cli.field.as_deref())?;
    let probe = || LIVE.load(Ordering::Relaxed);
    let report = bench(k, d, n, &field, budget, Some(&probe))?;
    if let Some(path) = csv {
        let fresh = !path.exists();
        let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
        let mut w = csv::Writer::from_writer(file);
        let io_err = |e: csv::Error| Failure::Usage(e.to_string());
        if fresh {
            w.write_record(BenchReport::csv_header()).map_err(io_err)?;
        }
        w.write_record(report.csv_row()).map_err(io_err)?;
        w.flush()?;
    }
    emit(out, &serde_json::to_value(&report).expect("reports serialize"))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Outcome {
    let sink: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let code = match &cli.command {
        Command::Test { circuit, mode, homogenize, trials } => cmd_test(cli, &mut out, circuit, *mode, *homogenize, *trials),
        Command::HittingSet { k, d, n, limit } => cmd_hitting_set(cli, &mut out, *k, *d, *n, *limit),
        Command::Reduce { circuit, beta, k } => cmd_reduce(&mut out, circuit, beta, *k),
        Command::Certify { circuit } => cmd_certify(&mut out, circuit),
        c @ Command::Corpus { .. } => cmd_corpus(cli, &mut out, c),
        Command::Suite { corpus, modes } => cmd_suite(cli, &mut out, corpus, modes),
        Command::Bench { k, d, n, budget, csv } => cmd_bench(cli, &mut out, *k, *d, *n, *budget, csv.as_deref()),
    }?;
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
