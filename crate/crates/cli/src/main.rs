//! `maxdet`: lower bounds, witnesses and reference values for the maximal
//! determinant of `{+1,-1}` matrices.

mod table;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use maxdet_core::bounds::{bound_report, excess_lower};
use maxdet_core::oracle::{brute_force_d, oracle_csv, reference_d, ReferenceTable};
use maxdet_core::orders::{delta, gamma, lambda, GapTable};
use maxdet_core::selftest;
use maxdet_core::witness::search_excess;
use maxdet_core::{
    best_witness, det_exact, is_hadamard, Error, OrderRegistry, RegistryMode, SignMatrix, WitnessCertificate,
    WitnessConfig,
};
use serde_json::json;

const EXIT_FAILURE: u8 = 1;
const EXIT_REGISTRY_TOO_SMALL: u8 = 3;
const EXIT_NO_WITNESS: u8 = 4;
const EXIT_UNVERIFIED: u8 = 5;

/// Environment variable naming the data directory: `references.csv`
/// (`n,D,source`) and `matrices/*.txt` Hadamard matrices.
const DATA_DIR_VAR: &str = "MAXDET_DATA_DIR";

#[derive(Parser)]
#[command(name = "maxdet", version, about = "Maximal determinant bounds with exact witness certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Constructive,
    KnownOrders,
    Conjecture,
}

impl From<Mode> for RegistryMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Constructive => RegistryMode::Constructive,
            Mode::KnownOrders => RegistryMode::KnownOrders,
            Mode::Conjecture => RegistryMode::Conjecture,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct RegistryArgs {
    /// Which Hadamard orders count as realizable.
    #[arg(long, value_enum, default_value = "conjecture")]
    mode: Mode,
    /// Largest registry order [default: 2n+8].
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random restarts of the excess search.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Every applicable lower and upper bound on D(n).
    Bound {
        n: usize,
        #[command(flatten)]
        registry: RegistryArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Best explicit witness matrix for n, with its certificate.
    Witness {
        n: usize,
        #[command(flatten)]
        registry: RegistryArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Largest order for exact determinants.
        #[arg(long, default_value_t = maxdet_core::DEFAULT_EXACT_CAP)]
        exact_cap: usize,
        /// Directory for witness-<n>.json and witness-<n>.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV comparison table for n_min..=n_max.
    Table {
        n_min: usize,
        n_max: usize,
        #[arg(long, value_enum, default_value = "conjecture")]
        mode: Mode,
        /// Registry cap [default: 2*n_max+8].
        #[arg(long)]
        cap: Option<usize>,
        /// Build witnesses for n up to this order.
        #[arg(long, default_value_t = 64)]
        witness_max: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Realizable Hadamard orders up to the cap.
    Orders {
        #[arg(long, default_value_t = 100)]
        cap: usize,
        #[arg(long, value_enum, default_value = "conjecture")]
        mode: Mode,
    },
    /// lambda, gamma and delta for n up to cap/2.
    Gaps {
        #[arg(long, default_value_t = 100)]
        cap: usize,
        #[arg(long, value_enum, default_value = "conjecture")]
        mode: Mode,
        /// Prime sieve bound [default: 2*cap].
        #[arg(long)]
        sieve_bound: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Maximize the excess of a constructed Hadamard matrix of order h.
    Excess {
        h: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exhaustive D(n) for n <= 6.
    Oracle {
        n: usize,
        /// `csv` lists every order from 1 to n.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-verify a certificate JSON or a matrix text file.
    Verify { path: PathBuf },
    /// Run the acceptance criteria.
    Selftest {
        /// Comma-separated criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::RegistryTooSmall { .. }) => EXIT_REGISTRY_TOO_SMALL,
        Some(Error::NoWitness(_) | Error::NoMatrix(_) | Error::CapExceeded { .. }) => EXIT_NO_WITNESS,
        _ => EXIT_FAILURE,
    }
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_VAR).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn references() -> Result<ReferenceTable> {
    let Some(path) = data_dir().map(|d| d.join("references.csv")).filter(|p| p.is_file()) else {
        return Ok(ReferenceTable::builtin());
    };
    let file = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
    ReferenceTable::from_csv(file).with_context(|| format!("reading {}", path.display()))
}

fn registry(mode: Mode, cap: usize) -> Result<OrderRegistry> {
    let mut reg = OrderRegistry::build(cap, mode.into())?;
    let Some(dir) = data_dir().map(|d| d.join("matrices")).filter(|p| p.is_dir()) else {
        return Ok(reg);
    };
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|x| x == "txt"));
    files.sort();
    for path in files {
        match reg.load_matrix(&path) {
            Ok(_) | Err(Error::CapExceeded { .. }) => {}
            Err(e) => return Err(e).with_context(|| format!("loading {}", path.display())),
        }
    }
    Ok(reg)
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Bound { n, registry: r, format } => {
            if n == 0 {
                bail!(Error::Precondition("n must be positive".into()));
            }
            let reg = registry(r.mode, r.cap.unwrap_or(2 * n + 8))?;
            let reference = reference_d(n, &references()?);
            let report = bound_report::<f64>(n, &reg, reference.as_ref())?;
            emit(&match format {
                Format::Json => report.to_json()?,
                Format::Csv => report.to_csv()?,
            })?;
        }
        Command::Witness { n, registry: r, search, exact_cap, out } => {
            let reg = registry(r.mode, r.cap.unwrap_or(2 * n + 8))?;
            let cfg = WitnessConfig { exact_cap, restarts: search.restarts, seed: search.seed };
            let cert = best_witness(n, &reg, &cfg)?;
            let json = cert.to_json()?;
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join(format!("witness-{n}.json")), format!("{json}\n"))?;
                fs::write(dir.join(format!("witness-{n}.txt")), cert.matrix.to_text())?;
            }
            emit(&json)?;
            if !cert.verified {
                return Ok(EXIT_UNVERIFIED);
            }
        }
        Command::Table { n_min, n_max, mode, cap, witness_max, search } => {
            if n_min == 0 || n_min > n_max {
                bail!(Error::Precondition(format!("need 1 <= n_min <= n_max, got {n_min}..{n_max}")));
            }
            let reg = registry(mode, cap.unwrap_or(2 * n_max + 8))?;
            let cfg = WitnessConfig { restarts: search.restarts, seed: search.seed, ..WitnessConfig::default() };
            table::write(n_min..=n_max, &reg, &references()?, &cfg, witness_max, io::stdout().lock())?;
        }
        Command::Orders { cap, mode } => emit(&registry(mode, cap)?.to_json()?)?,
        Command::Gaps { cap, mode, sieve_bound, format } => gaps(cap, mode, sieve_bound, format)?,
        Command::Excess { h, search } => {
            let reg = registry(Mode::Constructive, h.max(2))?;
            let m = reg.realize(h)?;
            let s = search_excess(&m, search.restarts, search.seed);
            let floor = excess_lower::<f64>(h)?.ln.exp();
            emit(&pretty(&json!({
                "h": h,
                "tag": reg.tag(h).map(|t| t.to_string()),
                "sigma_initial": s.sigma_initial,
                "sigma": s.sigma,
                "sigma_floor": floor,
                "meets_floor": s.sigma as f64 >= floor,
                "exhaustive": s.exhaustive,
                "seed": search.seed,
                "restarts": search.restarts,
                "matrix": s.matrix.rows_as_strings(),
            }))?)?;
        }
        Command::Oracle { n, format } => match format {
            Format::Json => {
                let d = brute_force_d(n)?;
                emit(&pretty(&json!({ "n": n, "D": d.to_string(), "source": "exhaustive search" }))?)?;
            }
            Format::Csv => oracle_csv(n, io::stdout().lock())?,
        },
        Command::Verify { path } => return verify(&path),
        Command::Selftest { only, format } => {
            let ids: Vec<u8> = if only.is_empty() { selftest::criteria().map(|(id, _)| id).collect() } else { only };
            let mut reports = Vec::new();
            for id in ids {
                let Some(r) = selftest::run_criterion(id) else {
                    bail!(Error::Precondition(format!("no criterion {id}")));
                };
                if format.is_none() {
                    println!("{r}");
                }
                reports.push(r);
            }
            if format.is_some() {
                emit(&serde_json::to_string_pretty(&reports)?)?;
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(EXIT_FAILURE);
            }
        }
    }
    Ok(0)
}

fn gaps(cap: usize, mode: Mode, sieve_bound: Option<u64>, format: Format) -> Result<()> {
    let reg = registry(mode, cap)?;
    let table = GapTable::new(sieve_bound.unwrap_or(2 * cap as u64));
    let mut rows = Vec::new();
    for n in 1..=cap / 2 {
        let d = delta(n, &reg)?;
        rows.push(json!({
            "n": n,
            "lambda": lambda(n as f64, &table)?,
            "gamma": gamma(n as f64, &reg)?,
            "delta": d.delta,
            "nearest": d.primary(),
        }));
    }
    match format {
        Format::Json => emit(&pretty(&serde_json::Value::Array(rows))?),
        Format::Csv => {
            let mut w = io::stdout().lock();
            writeln!(w, "n,lambda,gamma,delta,nearest")?;
            for r in rows {
                writeln!(w, "{},{},{},{},{}", r["n"], r["lambda"], r["gamma"], r["delta"], r["nearest"])?;
            }
            Ok(())
        }
    }
}

fn verify(path: &Path) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let cert = WitnessCertificate::from_json(&text)?;
        let verified = cert.verified && cert.reverify();
        emit(&pretty(&json!({
            "kind": "certificate",
            "n": cert.n,
            "det_abs": cert.det_abs.to_string(),
            "construction": cert.construction.to_string(),
            "verified": verified,
        }))?)?;
        return Ok(if verified { 0 } else { EXIT_UNVERIFIED });
    }
    let m = SignMatrix::parse(&text)?;
    let det = det_exact(&m);
    let singular = det == maxdet_core::ExactInt::default();
    emit(&pretty(&json!({
        "kind": "matrix",
        "n": m.order(),
        "det_abs": det.magnitude().to_string(),
        "hadamard": is_hadamard(&m),
        "verified": !singular,
    }))?)?;
    Ok(if singular { EXIT_UNVERIFIED } else { 0 })
}
