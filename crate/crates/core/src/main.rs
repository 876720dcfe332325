use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use signpat::census::{
    check_verdict, corrupt, run_census, write_csv, CensusConfig, Mode, OracleCheck, OracleStatus,
    ReportRow, DEFAULT_SAMPLES,
};
use signpat::classify::classify;
use signpat::error::Error;
use signpat::oracle::Tolerances;
use signpat::pattern::{parse_patterns, SignPattern};

#[derive(Parser)]
#[command(name = "signpat", version, about = "Algebraic positivity of cycle sign patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every pattern in a file and print CSV rows.
    Classify { file: PathBuf },
    /// Classify and cross-check each verdict numerically.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Flip every verdict before checking (harness self-test).
        #[arg(long, hide = true)]
        corrupt_verdicts: bool,
    },
    /// Enumerate cycle-form patterns of one order.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        zero_diag: bool,
        #[arg(long)]
        forward_positive: bool,
        /// One representative per rotation/reflection/negation orbit.
        #[arg(long)]
        dedupe: bool,
        /// Sample this many patterns instead of enumerating all.
        #[arg(long, value_name = "M")]
        random: Option<usize>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiply every oracle tolerance by this factor.
    #[arg(long, default_value_t = 1.0)]
    tol: f64,
}

impl OracleArgs {
    fn tolerances(&self) -> Result<Tolerances, String> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(format!("--tol must be positive, got {}", self.tol));
        }
        let d = Tolerances::default();
        Ok(Tolerances {
            imag_rel: d.imag_rel * self.tol,
            sep_rel: d.sep_rel * self.tol,
            pos: d.pos * self.tol,
            residual_rel: d.residual_rel * self.tol,
        })
    }
}

/// A failure with its exit code.
struct Fail(u8, String);

fn load(path: &Path) -> Result<Vec<(usize, SignPattern)>, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))?;
    let pats = parse_patterns(&text).map_err(|e| {
        let line = match &e {
            Error::UnknownToken { row, .. } | Error::RaggedRows { row, .. } | Error::NotSquare { row, .. } => {
                format!(":{row}")
            }
            _ => String::new(),
        };
        Fail(2, format!("{}{line}: {e}", path.display()))
    })?;
    if pats.is_empty() {
        return Err(Fail(2, format!("{}: no patterns", path.display())));
    }
    Ok(pats)
}

fn emit(rows: &[ReportRow]) -> Result<(), Fail> {
    write_csv(rows, io::stdout().lock()).map_err(|e| Fail(2, e.to_string()))
}

fn cmd_classify(file: &Path) -> Result<u8, Fail> {
    let pats = load(file)?;
    let rows: Vec<ReportRow> = pats
        .iter()
        .enumerate()
        .map(|(k, (_, a))| ReportRow::new(k as u64 + 1, a, &classify(a), &OracleCheck::skipped(), 0))
        .collect();
    emit(&rows)?;
    Ok(0)
}

fn cmd_verify(file: &Path, oracle: &OracleArgs, corrupt_verdicts: bool) -> Result<u8, Fail> {
    if oracle.samples == 0 {
        return Err(Fail(2, "--samples must be at least 1".into()));
    }
    let tols = oracle.tolerances().map_err(|e| Fail(2, e))?;
    let pats = load(file)?;
    let mut rows = Vec::with_capacity(pats.len());
    for (k, (line, a)) in pats.iter().enumerate() {
        let mut v = classify(a);
        if corrupt_verdicts {
            v = corrupt(&v);
        }
        let check = check_verdict(a, &v, oracle.samples, oracle.seed, &tols, true)
            .map_err(|e| Fail(2, format!("{}:{line}: {e}", file.display())))?;
        if check.witness_failures > 0 {
            eprintln!("{}:{line}: {} witness polynomial failures", file.display(), check.witness_failures);
        }
        if let Some((b, reason)) = &check.counterexample {
            eprintln!("{}:{line}: {} counterexample\n{b}", file.display(), reason.code());
        }
        rows.push(ReportRow::new(k as u64 + 1, a, &v, &check, oracle.seed));
    }
    emit(&rows)?;
    let bad = rows.iter().any(|r| r.oracle == OracleStatus::Disagree);
    Ok(if bad { 1 } else { 0 })
}

fn cmd_census(cfg: &CensusConfig, out: &Path) -> Result<u8, Fail> {
    let report = run_census(cfg).map_err(|e| Fail(2, e.to_string()))?;
    let file = fs::File::create(out).map_err(|e| Fail(2, format!("{}: {e}", out.display())))?;
    write_csv(&report.rows(), io::BufWriter::new(file)).map_err(|e| Fail(2, e.to_string()))?;
    let mut so = io::stdout().lock();
    let _ = writeln!(so, "patterns: {}", report.records.len());
    for (k, c) in report.counts() {
        let _ = writeln!(so, "{k}: {c}");
    }
    for (k, c) in report.oracle_counts() {
        let _ = writeln!(so, "oracle {k}: {c}");
    }
    let bad = report.records.iter().any(|r| r.check.status == OracleStatus::Disagree);
    Ok(if bad { 1 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Classify { file } => cmd_classify(file),
        Command::Verify {
            file,
            oracle,
            corrupt_verdicts,
        } => cmd_verify(file, oracle, *corrupt_verdicts),
        Command::Census {
            n,
            zero_diag,
            forward_positive,
            dedupe,
            random,
            oracle,
            out,
        } => oracle
            .tolerances()
            .map_err(|e| Fail(2, e))
            .and_then(|tolerances| {
                let cfg = CensusConfig {
                    n: *n,
                    zero_diag: *zero_diag,
                    forward_positive: *forward_positive,
                    dedupe: *dedupe,
                    mode: random.map_or(Mode::Exhaustive, Mode::Random),
                    samples: oracle.samples,
                    seed: oracle.seed,
                    tolerances,
                };
                cmd_census(&cfg, out)
            }),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
