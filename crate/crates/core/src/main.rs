use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sharpness::effect::validate_effect;
use sharpness::measures::{fmt_f64, parse_measure_list, MeasureId, MeasureReport};
use sharpness::operator::OperatorJson;
use sharpness::oracle::{joint_feasible_bruteforce, DEFAULT_RESOLUTION, DEFAULT_ROUNDS};
use sharpness::qubit::{are_coexistent, CoexistenceStatus, PairJson};
use sharpness::scan::{run_scan, to_csv, Range, ScanSpec};
use sharpness::suites::{run_suite, Suite, SuiteConfig};
use sharpness::{Error, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sharpness", version, about = "Sharpness and bias measures for quantum effects")]
struct Cli {
    /// Eigenvalue tolerance used when validating effects.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Append the brute-force joint-observable search to `coexist`.
    #[arg(long, global = true)]
    oracle: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate measures on an operator file.
    Measure {
        file: PathBuf,
        /// Comma-separated measure names; defaults to every applicable one.
        #[arg(long, short)]
        measures: Option<String>,
    },
    /// Print spectral data of an effect.
    Spectrum { file: PathBuf },
    /// Decide coexistence of a qubit pair.
    Coexist { file: PathBuf },
    /// Sweep the coexistence criterion over a parameter grid.
    Scan {
        #[arg(long, default_value = "0.5")]
        a0: String,
        #[arg(long, default_value = "0.5")]
        b0: String,
        #[arg(long, default_value = "0.25")]
        ra: String,
        #[arg(long, default_value = "0.25")]
        rb: String,
        /// Sweep |a| = |b| together; overrides --ra and --rb.
        #[arg(long)]
        r: Option<String>,
        /// Angle between the Bloch vectors, in degrees.
        #[arg(long, default_value = "90")]
        angle: String,
    },
    /// Run a verification suite: axioms, identities, counterexamples or oracle.
    Verify {
        suite: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
        dims: Vec<usize>,
    },
}

/// Process outcome other than an error.
enum Outcome {
    Ok,
    Negative,
    Marginal,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Ok(Outcome::Marginal) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Error> {
    match cli.tol {
        Some(t) if !(t >= 0.0) || !t.is_finite() => Err(Error::InvalidInput(format!("--tol must be >= 0, got {t}"))),
        Some(t) => Ok(Tolerances::default().with_eig(t)),
        None => Ok(Tolerances::default()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::InvalidInput(format!("stdout: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Measure { file, measures } => {
            let names = measures.as_deref().map(parse_measure_list).transpose()?;
            let op = read_json::<OperatorJson>(file)?.to_operator(&tol)?;
            let effect = validate_effect(&op, tol.eig)?;
            let names = names.unwrap_or_else(|| {
                MeasureId::ALL.into_iter().filter(|m| !m.qubit_only() || effect.dim() == 2).collect()
            });
            let rows = names
                .iter()
                .map(|&m| MeasureReport::compute(m, &effect))
                .collect::<Result<Vec<_>, _>>()?;
            let text = match cli.format {
                Format::Csv => {
                    let mut s = format!("{}\n", MeasureReport::CSV_HEADER);
                    for r in &rows {
                        s.push_str(&r.csv_row());
                        s.push('\n');
                    }
                    s
                }
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|r| json!({ "measure": r.name.name(), "dim": r.dim, "value": r.value }))
                        .collect();
                    format!("{:#}\n", json!({ "schema": 1, "rows": rows }))
                }
            };
            emit(cli, &text)?;
            Ok(Outcome::Ok)
        }
        Command::Spectrum { file } => {
            let op = read_json::<OperatorJson>(file)?.to_operator(&tol)?;
            let e = validate_effect(&op, tol.eig)?;
            let s = e.summary();
            let fields = [
                ("norm", e.norm()),
                ("complement_norm", e.complement_norm()),
                ("min", s.min),
                ("max", s.max),
                ("width", s.width),
                ("midpoint", s.midpoint),
                ("aa_dash_norm", e.aa_dash_norm()),
                ("one_minus_aa_dash_norm", e.one_minus_aa_dash_norm()),
                ("dispersion", e.dispersion()),
            ];
            let text = match cli.format {
                Format::Csv => {
                    let mut t = String::from("quantity,value\n");
                    for (i, l) in e.spectrum().iter().enumerate() {
                        t.push_str(&format!("eigenvalue_{i},{}\n", fmt_f64(*l)));
                    }
                    for (k, v) in fields {
                        t.push_str(&format!("{k},{}\n", fmt_f64(v)));
                    }
                    t
                }
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("schema".into(), json!(1));
                    obj.insert("dim".into(), json!(e.dim()));
                    obj.insert("eigenvalues".into(), json!(e.spectrum()));
                    for (k, v) in fields {
                        obj.insert(k.into(), json!(v));
                    }
                    format!("{:#}\n", serde_json::Value::Object(obj))
                }
            };
            emit(cli, &text)?;
            Ok(Outcome::Ok)
        }
        Command::Coexist { file } => {
            let pair: PairJson = read_json(file)?;
            let v = are_coexistent(&pair.a, &pair.b);
            let mut obj = json!({
                "schema": 1,
                "status": v.status.name(),
                "lhs": v.lhs,
                "witness": v.witness,
            });
            if cli.oracle {
                let r = joint_feasible_bruteforce(&pair.a, &pair.b, DEFAULT_RESOLUTION, DEFAULT_ROUNDS);
                obj["oracle"] = json!({
                    "feasible": r.feasible,
                    "margin": r.margin,
                    "witness": r.witness,
                    "resolution": DEFAULT_RESOLUTION,
                    "rounds": DEFAULT_ROUNDS,
                    "evidence": "grid search",
                });
            }
            emit(cli, &format!("{obj:#}\n"))?;
            Ok(match v.status {
                CoexistenceStatus::Coexistent => Outcome::Ok,
                CoexistenceStatus::NotCoexistent => Outcome::Negative,
                CoexistenceStatus::Marginal => Outcome::Marginal,
            })
        }
        Command::Scan { a0, b0, ra, rb, r, angle } => {
            let (ra, rb, tied) = match r {
                Some(r) => (r.parse::<Range>()?, Range::single(0.0), true),
                None => (ra.parse()?, rb.parse()?, false),
            };
            let spec = ScanSpec { a0: a0.parse()?, b0: b0.parse()?, ra, rb, tied, angle_deg: angle.parse()? };
            let rows = run_scan(&spec)?;
            let text = match cli.format {
                Format::Csv => to_csv(&rows),
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "a0": r.a0, "b0": r.b0, "ra": r.ra, "rb": r.rb,
                                "angle_deg": r.angle_deg, "lhs": r.lhs, "verdict": r.verdict.name(),
                            })
                        })
                        .collect();
                    format!("{:#}\n", json!({ "schema": 1, "rows": rows }))
                }
            };
            emit(cli, &text)?;
            Ok(Outcome::Ok)
        }
        Command::Verify { suite, dims } => {
            let suite: Suite = suite.parse()?;
            let cfg = SuiteConfig { samples: cli.samples, seed: cli.seed, dims: dims.clone() };
            let report = run_suite(suite, &cfg)?;
            let text = match cli.format {
                Format::Csv => report.to_text(),
                Format::Json => format!("{}\n", report.to_json()),
            };
            emit(cli, &text)?;
            Ok(if report.passed() { Outcome::Ok } else { Outcome::Negative })
        }
    }
}
