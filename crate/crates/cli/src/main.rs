//! `qpoly`: entanglement measures, polygon inequalities, worked-example
//! reproduction and randomized searches from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical-input error,
//! 3 an inequality check or reproduction found a violation or mismatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qudit_polygon::inequalities::{
    bipartition_check, default_tau_hat_cuts, polygon_check, renyi_mixed_check_ordered, tau_hat_indicator, tau_indicator,
    triangle_check, InequalityResult, DEFAULT_TOL,
};
use qudit_polygon::measures::{marginal_vector, measure_pure, total_entanglement};
use qudit_polygon::reproduce::{reproduce, ReproOptions, Target};
use qudit_polygon::search::{fuzz, grid_scan, scan_csv, CheckKind, Family, ScanQuantity, SearchConfig, ORDERINGS};
use qudit_polygon::states::haar_random;
use qudit_polygon::{Bipartition, Dims, Error, MeasureSpec, MultiQuditState};

#[derive(Parser, Debug)]
#[command(name = "qpoly", version, about = "Entanglement polygon inequalities for multipartite qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct MeasureArgs {
    /// Measure token: qconc, unified, renyi, tsallis, eof, conc, neg
    #[arg(long)]
    measure: String,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
}

impl MeasureArgs {
    fn spec(&self) -> Result<MeasureSpec, CliError> {
        MeasureSpec::from_token(&self.measure, self.q, self.r, self.s).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entanglement of a pure state across one cut
    Measure {
        #[arg(long)]
        state: PathBuf,
        /// Cut such as "0|1,2"
        #[arg(long)]
        cut: String,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// One-to-group marginal entanglement of every site
    Marginals {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// Evaluate an inequality family on a state
    Check {
        #[arg(value_enum)]
        kind: CheckArg,
        #[arg(long)]
        state: PathBuf,
        /// Measure token (not used by renyi-mixed, which takes --r)
        #[arg(long, default_value = "")]
        measure: String,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        /// Restrict to one cut (bipartition only); repeatable
        #[arg(long)]
        cut: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Polygon indicator tau or bipartition indicator tau-hat
    Indicator {
        #[arg(value_enum)]
        kind: IndicatorArg,
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Cuts for tau-hat; defaults to every cut with |A| >= 2
        #[arg(long)]
        cut: Vec<String>,
    },
    /// Recompute a worked example, figure or the comparison table
    Reproduce {
        /// example1..example6, fig2, fig4a, fig4b, table1
        target: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Write the CSV (figure targets) or JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized search over Haar-random states
    Fuzz {
        /// Comma-separated local dimensions, e.g. 3,3,3
        #[arg(long)]
        dims: String,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FuzzCheck::Polygon)]
        check: FuzzCheck,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 5)]
        record_worst: usize,
        /// Worker threads; 0 uses all cores. Output does not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Indicator over a two-angle state family, as CSV
    Scan {
        /// generalized_ghz3 or w_interp
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, value_enum, default_value_t = QuantityArg::Tau)]
        quantity: QuantityArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a Haar-random state file
    Sample {
        #[arg(long)]
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CheckArg {
    Polygon,
    Triangle,
    Bipartition,
    RenyiMixed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum IndicatorArg {
    Tau,
    TauHat,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FuzzCheck {
    Polygon,
    Triangle,
    Bipartition,
    RenyiMixed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum QuantityArg {
    Tau,
    TauHat,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(Error::Io(e))
    }
}

/// Successful run; `violation` selects exit code 3.
struct Outcome {
    violation: bool,
}

fn parse_dims(text: &str) -> Result<Dims, CliError> {
    let dims = text
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("bad --dims {text:?}: {e}")))?;
    Ok(Dims::new(dims)?)
}

fn load_state(path: &Path) -> Result<MultiQuditState, CliError> {
    MultiQuditState::load(path).map_err(CliError::Input)
}

fn parse_cut(text: &str, n: usize) -> Result<Bipartition, CliError> {
    Bipartition::parse(text, n).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn print_json(value: &Value) -> Result<(), CliError> {
    emit(None, &serde_json::to_string_pretty(value).expect("json serializes"))
}

fn ineq_json(label: String, r: &InequalityResult) -> Value {
    json!({ "check": label, "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin, "satisfied": r.satisfied })
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Measure { state, cut, measure } => {
            let spec = measure.spec()?;
            let psi = load_state(&state)?;
            let cut = parse_cut(&cut, psi.sites())?;
            let value = measure_pure(&psi, &cut, &spec)?;
            print_json(&json!({ "measure": spec, "cut": cut.to_string(), "value": value }))?;
        }
        Command::Marginals { state, measure } => {
            let spec = measure.spec()?;
            let psi = load_state(&state)?;
            let mv = marginal_vector(&psi, &spec)?;
            print_json(&json!({ "measure": spec, "values": mv.values(), "total": total_entanglement(&mv) }))?;
        }
        Command::Check { kind, state, measure, q, r, s, cut, tol } => {
            let psi = load_state(&state)?;
            let n = psi.sites();
            let spec_for = || MeasureArgs { measure: measure.clone(), q, r, s }.spec();
            let mut results = Vec::new();
            match kind {
                CheckArg::Polygon => {
                    let mv = marginal_vector(&psi, &spec_for()?)?;
                    for j in 0..n {
                        results.push(ineq_json(format!("polygon j={j}"), &polygon_check(&mv, j, tol)?));
                    }
                }
                CheckArg::Triangle => {
                    let mv = marginal_vector(&psi, &spec_for()?)?;
                    for i in 0..mv.len().min(3) {
                        let (lo, up) = triangle_check(&mv, i, tol)?;
                        results.push(ineq_json(format!("triangle-lower i={i}"), &lo));
                        results.push(ineq_json(format!("triangle-upper i={i}"), &up));
                    }
                }
                CheckArg::Bipartition => {
                    let spec = spec_for()?;
                    let cuts = if cut.is_empty() {
                        default_tau_hat_cuts(n)?
                    } else {
                        cut.iter().map(|c| parse_cut(c, n)).collect::<Result<_, _>>()?
                    };
                    for c in &cuts {
                        results.push(ineq_json(format!("bipartition {c}"), &bipartition_check(&psi, c, &spec, tol)?));
                    }
                }
                CheckArg::RenyiMixed => {
                    let r = r.ok_or_else(|| CliError::Usage("renyi-mixed needs --r".into()))?;
                    for (i, j, k) in ORDERINGS {
                        let (lo, up) = renyi_mixed_check_ordered(&psi, i, j, k, r, tol)?;
                        results.push(ineq_json(format!("renyi-mixed-lower i={i} j={j} k={k}"), &lo));
                        results.push(ineq_json(format!("renyi-mixed-upper i={i} j={j} k={k}"), &up));
                    }
                }
            }
            let violation = results.iter().any(|v| v["satisfied"] == json!(false));
            print_json(&json!({ "tol": tol, "results": results, "violation": violation }))?;
            return Ok(Outcome { violation });
        }
        Command::Indicator { kind, state, measure, cut } => {
            let spec = measure.spec()?;
            let psi = load_state(&state)?;
            let value = match kind {
                IndicatorArg::Tau => {
                    let t = tau_indicator(&psi, &spec)?;
                    json!({ "indicator": "tau", "measure": spec, "value": t.value, "argmin_site": t.argmin })
                }
                IndicatorArg::TauHat => {
                    let cuts = if cut.is_empty() {
                        default_tau_hat_cuts(psi.sites())?
                    } else {
                        cut.iter().map(|c| parse_cut(c, psi.sites())).collect::<Result<_, _>>()?
                    };
                    let t = tau_hat_indicator(&psi, &cuts, &spec)?;
                    json!({
                        "indicator": "tau_hat",
                        "measure": spec,
                        "value": t.value,
                        "argmin_cut": cuts[t.argmin].to_string(),
                    })
                }
            };
            print_json(&value)?;
        }
        Command::Reproduce { target, grid, q, r, s, d, m, n, seed, trials, workers, out } => {
            let target: Target = target.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
            let opts = ReproOptions { grid, q, r, s, d, m, n, seed, trials, workers };
            let report = reproduce(target, &opts)?;
            match (&report.csv, out.as_deref()) {
                (Some(csv), Some(path)) => {
                    fs::write(path, csv)?;
                    print_json(&serde_json::to_value(&report).expect("report serializes"))?;
                }
                (Some(csv), None) => {
                    emit(None, csv)?;
                    eprintln!(
                        "# target={} seed={} grid_points={} max_abs_diff={:e} passed={}",
                        report.target, report.seed, report.grid_points, report.max_abs_diff, report.passed
                    );
                }
                (None, out) => emit(out, &report.to_json())?,
            }
            return Ok(Outcome { violation: !report.passed });
        }
        Command::Fuzz { dims, measure, trials, seed, check, tol, record_worst, workers, out } => {
            let spec = measure.spec()?;
            let check = match check {
                FuzzCheck::Polygon => CheckKind::Polygon,
                FuzzCheck::Triangle => CheckKind::Triangle,
                FuzzCheck::Bipartition => CheckKind::Bipartition,
                FuzzCheck::RenyiMixed => CheckKind::RenyiMixed,
            };
            let cfg = SearchConfig { dims: parse_dims(&dims)?, spec, check, trials, seed, tol, record_worst, workers };
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let report = fuzz(&cfg)?;
            emit(out.as_deref(), &report.to_json())?;
        }
        Command::Scan { family, grid, measure, quantity, seed, out } => {
            let spec = measure.spec()?;
            let family = Family::parse(&family).map_err(|e| CliError::Usage(e.to_string()))?;
            let quantity = match quantity {
                QuantityArg::Tau => ScanQuantity::Tau,
                QuantityArg::TauHat => ScanQuantity::TauHat,
            };
            let rows = grid_scan(family, grid, &spec, quantity)?;
            eprintln!("# family={family:?} grid={grid} measure={spec} quantity={quantity:?} seed={seed}");
            emit(out.as_deref(), &scan_csv(&rows))?;
        }
        Command::Sample { dims, seed, out } => {
            let dims = parse_dims(&dims)?;
            let psi = haar_random(&dims, seed);
            psi.save(&out)?;
            print_json(&json!({ "dims": dims, "seed": seed, "out": out }))?;
        }
    }
    Ok(Outcome { violation: false })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome { violation: false }) => ExitCode::SUCCESS,
        Ok(Outcome { violation: true }) => ExitCode::from(3),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
