//! Command-line front end.
//!
//! Exit codes: 0 when no criterion is violated, 2 when entanglement is
//! detected, 1 on any error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::criteria::{bipartition_report, full_report_with_tol, BipartitionReport, CriteriaReport, LocalOrthogonalBasis};
use crate::error::{Error, Result};
use crate::io::{load_state, save_state, state_to_json, to_json_pretty, witness_to_json, StateFile};
use crate::numerics::tol;
use crate::schmidt::schmidt_decompose;
use crate::states::{builtin_rho33, smolin_state, Bipartition, BipartiteState};
use crate::witness::{build_schmidt_witness, default_keep, DEFAULT_RESTARTS, DEFAULT_SEED};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_ENTANGLED: u8 = 2;
/// A witness value below this counts as detection.
pub const WITNESS_THRESHOLD: f64 = -1e-6;

#[derive(Debug, Parser)]
#[command(name = "symsep", version, about = "Separability tests and entanglement witnesses for symmetric two-party states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Numerical tolerance for state validation and criterion verdicts.
    #[arg(long, global = true, env = "SYMSEP_TOL", default_value_t = tol::CRITERION)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a built-in state (`rho33` or `smolin`) to a state file.
    Builtin {
        name: String,
        /// Half the number of qubits of the Smolin state.
        #[arg(long)]
        n: Option<usize>,
        /// Output path; the state is printed when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every separability criterion on a two-party state.
    Analyze {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Operator Schmidt decomposition of a permutationally invariant state.
    Schmidt {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Build and evaluate the Schmidt-based witness of a symmetric state.
    Witness {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also write the witness operator and constant to this file.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// PPT and realignment across one bipartition of a multi-qubit state.
    Multiqubit {
        #[arg(short, long)]
        input: PathBuf,
        /// Qubits of the first party, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDescriptor {
    pub path: Option<String>,
    pub kind: String,
    /// Local dimension for two-party states, qubit count otherwise.
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSummary {
    pub kind: String,
    pub constant: f64,
    pub operator_expectation: f64,
    pub value: f64,
    pub kept_terms: usize,
    pub weights: Vec<f64>,
    pub restarts: usize,
    pub converged_fraction: f64,
    pub detected: bool,
}

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: InputDescriptor,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub symmetric: Option<bool>,
    pub permutationally_invariant: Option<bool>,
    pub criteria: Option<CriteriaReport>,
    pub schmidt_coefficients: Option<Vec<f64>>,
    pub witness: Option<WitnessSummary>,
    pub bipartition: Option<BipartitionReport>,
    pub output: Option<String>,
    pub entangled: bool,
}

impl AnalysisReport {
    fn new(command: &str, input: InputDescriptor, tolerance: f64) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input,
            tolerance,
            seed: None,
            symmetric: None,
            permutationally_invariant: None,
            criteria: None,
            schmidt_coefficients: None,
            witness: None,
            bipartition: None,
            output: None,
            entangled: false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.entangled {
            EXIT_ENTANGLED
        } else {
            EXIT_OK
        }
    }
}

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

fn describe(path: Option<&Path>, s: &StateFile) -> InputDescriptor {
    let dimension = match s {
        StateFile::Bipartite(b) => b.dim(),
        StateFile::MultiQubit(q) => q.qubits(),
    };
    InputDescriptor {
        path: path.map(|p| p.display().to_string()),
        kind: s.kind().into(),
        dimension,
    }
}

fn bipartite(s: StateFile) -> Result<BipartiteState> {
    match s {
        StateFile::Bipartite(b) => Ok(b),
        StateFile::MultiQubit(_) => Err(Error::Unsupported(
            "this command needs a bipartite state file; use `multiqubit` for qubit registers".into(),
        )),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let tol = cli.common.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Validation(format!("tolerance must be a nonnegative number, got {tol}")));
    }
    let report = match &cli.command {
        Command::Builtin { name, n, out } => {
            let state = match name.as_str() {
                "rho33" => StateFile::Bipartite(builtin_rho33()),
                "smolin" => {
                    let n = n.ok_or_else(|| Error::Validation("`--n` is required for smolin".into()))?;
                    StateFile::MultiQubit(smolin_state(n)?)
                }
                other => return Err(Error::UnknownBuiltin(other.into())),
            };
            let Some(out) = out else {
                return Ok(Outcome {
                    stdout: state_to_json(&state)? + "\n",
                    code: EXIT_OK,
                });
            };
            save_state(out, &state)?;
            let mut r = AnalysisReport::new("builtin", describe(None, &state), tol);
            r.output = Some(out.display().to_string());
            r
        }
        Command::Analyze { input } => {
            let file = load_state(input, tol)?;
            let mut r = AnalysisReport::new("analyze", describe(Some(input), &file), tol);
            let s = bipartite(file)?;
            let basis = LocalOrthogonalBasis::hermitian(s.dim())?;
            let criteria = full_report_with_tol(&s, &basis, tol)?;
            r.symmetric = Some(criteria.symmetric);
            r.permutationally_invariant = Some(criteria.permutationally_invariant);
            if criteria.permutationally_invariant {
                r.schmidt_coefficients = Some(schmidt_decompose(&s, &basis)?.coefficients);
            }
            r.entangled = criteria.entanglement_detected();
            r.criteria = Some(criteria);
            r
        }
        Command::Schmidt { input } => {
            let file = load_state(input, tol)?;
            let mut r = AnalysisReport::new("schmidt", describe(Some(input), &file), tol);
            let s = bipartite(file)?;
            let symmetric = s.is_symmetric(tol::HERMITIAN);
            let dec = schmidt_decompose(&s, &LocalOrthogonalBasis::hermitian(s.dim())?)?;
            r.symmetric = Some(symmetric);
            r.permutationally_invariant = Some(true);
            // negative coefficients mean NPT only on the symmetric subspace
            r.entangled = symmetric && dec.min_coefficient() < -tol;
            r.schmidt_coefficients = Some(dec.coefficients);
            r
        }
        Command::Witness {
            input,
            restarts,
            seed,
            out,
        } => {
            let file = load_state(input, tol)?;
            let mut r = AnalysisReport::new("witness", describe(Some(input), &file), tol);
            let s = bipartite(file)?;
            if !s.is_symmetric(tol::HERMITIAN) {
                return Err(Error::NotSymmetric);
            }
            let keep = default_keep(s.dim());
            let sw = build_schmidt_witness(&s, keep, *restarts, *seed)?;
            let expectation = sw.witness.operator_expectation(&s)?;
            let value = sw.witness.constant() - expectation;
            if let Some(out) = out {
                std::fs::write(out, witness_to_json(&sw.witness)? + "\n")?;
                r.output = Some(out.display().to_string());
            }
            r.seed = Some(*seed);
            r.symmetric = Some(true);
            r.permutationally_invariant = Some(true);
            r.schmidt_coefficients = Some(sw.decomposition.coefficients.clone());
            r.entangled = value < WITNESS_THRESHOLD;
            r.witness = Some(WitnessSummary {
                kind: sw.witness.kind().as_str().into(),
                constant: sw.witness.constant(),
                operator_expectation: expectation,
                value,
                kept_terms: keep,
                weights: sw.weights,
                restarts: sw.optimization.restarts_used,
                converged_fraction: sw.optimization.converged_fraction,
                detected: r.entangled,
            });
            r
        }
        Command::Multiqubit { input, partition } => {
            let file = load_state(input, tol)?;
            let mut r = AnalysisReport::new("multiqubit", describe(Some(input), &file), tol);
            let StateFile::MultiQubit(q) = file else {
                return Err(Error::Unsupported("`multiqubit` needs a multiqubit state file".into()));
            };
            let p = Bipartition::new(q.qubits(), partition)?;
            let b = bipartition_report(&q, &p)?;
            r.entangled = b.pt_min_eigenvalue < -tol || b.realigned_trace_norm > 1.0 + tol;
            r.bipartition = Some(b);
            r
        }
    };
    let stdout = match cli.common.format {
        Format::Json => to_json_pretty(&report)? + "\n",
        Format::Text => render_text(&report),
    };
    Ok(Outcome {
        stdout,
        code: report.exit_code(),
    })
}

fn flag(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn verdict(violated: bool) -> &'static str {
    if violated {
        "VIOLATED"
    } else {
        "ok"
    }
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let i = &r.input;
    let unit = if i.kind == "bipartite" { "d" } else { "qubits" };
    match &i.path {
        Some(p) => writeln!(s, "input: {p} ({}, {unit} = {})", i.kind, i.dimension),
        None => writeln!(s, "state: {}, {unit} = {}", i.kind, i.dimension),
    }
    .unwrap();
    if let Some(out) = &r.output {
        writeln!(s, "written: {out}").unwrap();
    }
    if let (Some(sym), Some(pi)) = (r.symmetric, r.permutationally_invariant) {
        writeln!(s, "symmetric: {}  permutationally invariant: {}", flag(sym), flag(pi)).unwrap();
    }
    if let Some(c) = &r.criteria {
        let v = &c.verdicts;
        let rows = [
            ("PPT: min eigenvalue of partial transpose", c.ppt_min_eigenvalue, v.ppt),
            ("CCNR: trace norm of realignment", c.ccnr_trace_norm, v.ccnr),
            ("min <A (x) A> over observables", c.observable_min_value, v.observable_positivity),
            ("min eigenvalue of eta", c.eta_min_eigenvalue, v.expectation_matrix),
            ("min eigenvalue of correlation matrix", c.corr_min_eigenvalue, v.correlation_matrix),
            ("covariance: ||C||_1^2 - bound", c.covariance_lhs - c.covariance_rhs, v.covariance),
        ];
        for (name, value, violated) in rows {
            writeln!(s, "  {name:<42} {value:>14.6e}  {}", verdict(violated)).unwrap();
        }
    }
    if let Some(coeffs) = &r.schmidt_coefficients {
        let list: Vec<String> = coeffs.iter().map(|c| format!("{c:.6e}")).collect();
        writeln!(s, "schmidt coefficients: {}", list.join(" ")).unwrap();
        writeln!(s, "  sum: {:.12}", coeffs.iter().sum::<f64>()).unwrap();
    }
    if let Some(w) = &r.witness {
        writeln!(s, "witness ({}, {} terms, {} restarts, seed {})", w.kind, w.kept_terms, w.restarts, r.seed.unwrap_or_default()).unwrap();
        writeln!(s, "  constant: {:.10}", w.constant).unwrap();
        writeln!(s, "  Tr(M rho): {:.10}", w.operator_expectation).unwrap();
        writeln!(s, "  <W>: {:.6e}", w.value).unwrap();
    }
    if let Some(b) = &r.bipartition {
        writeln!(s, "partition: {:?} | {:?}", b.left, b.right).unwrap();
        writeln!(s, "  min eigenvalue of partial transpose: {:.6e}", b.pt_min_eigenvalue).unwrap();
        writeln!(s, "  trace norm of realignment: {:.12}", b.realigned_trace_norm).unwrap();
    }
    if r.command != "builtin" {
        let line = if r.entangled {
            "entanglement detected"
        } else {
            "no entanglement detected"
        };
        writeln!(s, "verdict: {line}").unwrap();
    }
    s
}

/// Parses `args`, runs the command and maps errors to exit code 1.
/// Returns the exit code together with stdout and stderr text.
pub fn main_with_args<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), text)
            } else {
                (code, text, String::new())
            };
        }
    };
    match run(&cli) {
        Ok(o) => (o.code, o.stdout, String::new()),
        Err(e) => (EXIT_ERROR, String::new(), format!("error: {e}\n")),
    }
}
