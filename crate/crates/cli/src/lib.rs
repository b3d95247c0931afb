//! `crf`: file-based command-line surface over the causal-frames library.
//!
//! Every command prints a deterministic JSON run report to stdout and exits
//! 0 when all numerical checks pass, 1 on a numerical failure, 2 on a usage
//! or file-format error. The default tolerance can be overridden with the
//! `CAUSAL_FRAMES_TOL` environment variable.

use causal_frames::frames::{check_consistency, extract_frame, time_reverse, FrameGenerator};
use causal_frames::gravity::{
    causal_order, find_switch_point, worldline_event, Branch, CausalRelation, Party,
    SchwarzschildParams,
};
use causal_frames::inequality::{
    eval_i1, paper_strategy, seesaw_optimize, SeesawConfig, StrategySpec,
};
use causal_frames::io::{
    ProcessData, ProcessFile, StateFile, StrategyFile, UnitariesFile,
};
use causal_frames::process::{
    correlations, induced_map, reduced_process, ProcessMatrix, ProcessVector,
};
use causal_frames::tensor::{C64, CMat};
use causal_frames::zoo;
use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "crf",
    about = "process matrices, causal reference frames, and causal inequalities",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the validity battery on a process file.
    Validate { file: PathBuf },
    /// Rank-one and unitarity purity certificate.
    Purity { file: PathBuf },
    /// Induced global map at given party unitaries.
    Induced {
        file: PathBuf,
        #[arg(long)]
        unitaries: PathBuf,
    },
    /// Extract one party's causal frame at fixed other-party unitaries.
    Frames {
        file: PathBuf,
        #[arg(long)]
        party: String,
        #[arg(long)]
        fixed: PathBuf,
    },
    /// Pairwise frame-product consistency over random unitary samples.
    Consistency {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time-reverse a pure process.
    Reverse {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Outcome probabilities for a strategy and past state.
    Probs {
        file: PathBuf,
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value = "uniform")]
        state: String,
    },
    /// Evaluate the causal inequality I1.
    Inequality {
        file: PathBuf,
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value = "uniform")]
        state: String,
    },
    /// Seesaw minimisation of I1 over instruments.
    Seesaw {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        max_sweeps: usize,
        #[arg(long, default_value = "uniform")]
        state: String,
    },
    /// Emit a zoo process (`list` to enumerate identifiers).
    Zoo {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        parties: usize,
    },
    /// Branch-dependent causal order of the gravitational switch.
    Gravity {
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        height: f64,
        #[arg(long)]
        tau: Option<f64>,
        /// Search for a parameter point with opposite branch orders.
        #[arg(long)]
        search: bool,
    },
}

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
}

impl RunReport {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

type CResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn tolerance() -> f64 {
    std::env::var("CAUSAL_FRAMES_TOL")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .unwrap_or(causal_frames::DEFAULT_TOL)
}

struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Self {
            hasher: Sha256::new(),
        }
    }

    fn read(&mut self, path: &Path) -> CResult<String> {
        let bytes = std::fs::read(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update(&bytes);
        String::from_utf8(bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn note(&mut self, text: &str) {
        self.hasher.update(text.as_bytes());
    }

    fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

fn load_process(inputs: &mut Inputs, path: &Path) -> CResult<ProcessData> {
    let text = inputs.read(path)?;
    let file = ProcessFile::from_json(&text)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    file.decode()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_vector(inputs: &mut Inputs, path: &Path) -> CResult<ProcessVector> {
    match load_process(inputs, path)? {
        ProcessData::Vector(v) => Ok(v),
        ProcessData::Matrix(_) => Err(usage(format!(
            "{}: expected kind `vector`",
            path.display()
        ))),
    }
}

fn load_strategy(inputs: &mut Inputs, spec: &str) -> CResult<StrategySpec> {
    if spec == "paper" {
        inputs.note("strategy:paper");
        return Ok(paper_strategy());
    }
    let text = inputs.read(Path::new(spec))?;
    StrategyFile::from_json(&text)
        .and_then(|f| f.decode())
        .map_err(|e| usage(format!("{spec}: {e}")))
}

fn uniform_state(dim: usize) -> CMat {
    CMat::from_element(dim, dim, C64::new(1.0 / dim as f64, 0.0))
}

fn load_state(inputs: &mut Inputs, spec: &str, dim: usize) -> CResult<CMat> {
    if spec == "uniform" {
        inputs.note("state:uniform");
        return Ok(uniform_state(dim));
    }
    let text = inputs.read(Path::new(spec))?;
    StateFile::from_json(&text)
        .and_then(|f| f.decode())
        .map_err(|e| usage(format!("{spec}: {e}")))
}

/// Full process vector in → reduced three-party matrix with the past
/// contracted against `state`; already-reduced matrices pass through.
fn reduced_input(
    inputs: &mut Inputs,
    path: &Path,
    state: &str,
) -> CResult<(ProcessMatrix, CMat)> {
    match load_process(inputs, path)? {
        ProcessData::Matrix(m) if m.p_dim() == 1 && m.f_dim() == 1 => {
            inputs.note("state:trivial");
            Ok((m, CMat::identity(1, 1)))
        }
        ProcessData::Matrix(_) => Err(usage(format!(
            "{}: matrix input must be a reduced process (trivial P and F)",
            path.display()
        ))),
        ProcessData::Vector(v) => {
            let rho = load_state(inputs, state, v.p_dim())?;
            let red = reduced_process(&v, &rho)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok((red, CMat::identity(1, 1)))
        }
    }
}

fn matrix_json(m: &CMat) -> serde_json::Value {
    let data: Vec<[f64; 2]> = (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
        .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
        .collect();
    serde_json::json!({ "rows": m.nrows(), "cols": m.ncols(), "data": data })
}

fn write_output(path: &Path, text: &str) -> CResult<()> {
    std::fs::write(path, text)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn relation_name(r: CausalRelation) -> &'static str {
    match r {
        CausalRelation::BBeforeA => "B<A",
        CausalRelation::ABeforeB => "A<B",
        CausalRelation::Spacelike => "spacelike",
    }
}

pub fn execute(cli: Cli) -> CResult<RunReport> {
    let tol = tolerance();
    let mut inputs = Inputs::new();
    match cli.command {
        Command::Validate { file } => {
            let process = load_process(&mut inputs, &file)?;
            let report = match &process {
                ProcessData::Vector(v) => v.validate_with_tol(tol),
                ProcessData::Matrix(m) => m.validate_with_tol(tol),
            }
            .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(RunReport {
                command: format!("validate {}", file.display()),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::json!({
                    "psd_margin": report.psd_margin,
                    "worst_normalization_residual": report.worst_normalization_residual,
                    "witness": report.witness,
                }),
                checks: vec![Check {
                    name: "valid-process".into(),
                    pass: report.verdict,
                    value: report.worst_normalization_residual,
                }],
            })
        }
        Command::Purity { file } => {
            let process = load_process(&mut inputs, &file)?;
            let report = match &process {
                ProcessData::Vector(v) => v.is_pure(),
                ProcessData::Matrix(m) => m.is_pure(),
            }
            .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(RunReport {
                command: format!("purity {}", file.display()),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::json!({
                    "pure": report.pure,
                    "second_eigenvalue": report.second_eigenvalue,
                    "unitarity_residual": report.unitarity_residual,
                }),
                checks: vec![Check {
                    name: "pure-process".into(),
                    pass: report.pure,
                    value: report.unitarity_residual,
                }],
            })
        }
        Command::Induced { file, unitaries } => {
            let w = load_vector(&mut inputs, &file)?;
            let text = inputs.read(&unitaries)?;
            let named = UnitariesFile::from_json(&text)
                .and_then(|f| f.decode())
                .map_err(|e| usage(format!("{}: {e}", unitaries.display())))?;
            let mut ops = Vec::with_capacity(w.parties().len());
            for p in w.parties() {
                let (_, u) = named
                    .iter()
                    .find(|(name, _)| name == &p.name)
                    .ok_or_else(|| usage(format!("no unitary for party `{}`", p.name)))?;
                ops.push(u.clone());
            }
            let g = induced_map(&w, &ops).map_err(|e| CliError::Numerical(e.to_string()))?;
            let residual = g.unitarity_residual();
            Ok(RunReport {
                command: format!("induced {}", file.display()),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::json!({ "global_map": matrix_json(g.entries()) }),
                checks: vec![Check {
                    name: "induced-map-unitary".into(),
                    pass: residual <= tol,
                    value: residual,
                }],
            })
        }
        Command::Frames { file, party, fixed } => {
            let w = load_vector(&mut inputs, &file)?;
            let text = inputs.read(&fixed)?;
            let named = UnitariesFile::from_json(&text)
                .and_then(|f| f.decode())
                .map_err(|e| usage(format!("{}: {e}", fixed.display())))?;
            let mut ops = Vec::new();
            for p in w.parties() {
                if p.name == party {
                    continue;
                }
                let (_, u) = named
                    .iter()
                    .find(|(name, _)| name == &p.name)
                    .ok_or_else(|| usage(format!("no unitary for party `{}`", p.name)))?;
                ops.push(u.clone());
            }
            let frame = extract_frame(&w, &party, &ops)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(RunReport {
                command: format!("frames {} --party {party}", file.display()),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::json!({
                    "env_dim": frame.env_dim,
                    "past": matrix_json(frame.pi_op.entries()),
                    "future": matrix_json(frame.phi_op.entries()),
                }),
                checks: vec![Check {
                    name: "frame-reconstruction".into(),
                    pass: frame.residual <= 1e-8,
                    value: frame.residual,
                }],
            })
        }
        Command::Consistency {
            file,
            samples,
            seed,
        } => {
            let w = load_vector(&mut inputs, &file)?;
            let generators: Vec<FrameGenerator> = w
                .parties()
                .iter()
                .map(|p| FrameGenerator::new(&w, p.name.clone()))
                .collect();
            let report = check_consistency(&generators, samples, seed)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(RunReport {
                command: format!("consistency {} --samples {samples}", file.display()),
                inputs_digest: inputs.digest(),
                seed: Some(seed),
                tolerance: report.tolerance,
                results: serde_json::json!({
                    "max_residual": report.max_residual,
                    "samples": report.samples,
                }),
                checks: vec![Check {
                    name: "frames-consistent".into(),
                    pass: report.consistent,
                    value: report.max_residual,
                }],
            })
        }
        Command::Reverse { file, output } => {
            let w = load_vector(&mut inputs, &file)?;
            let reversed = time_reverse(&w)
                .map_err(|e| CliError::Numerical(e.to_string()))?
                .phase_normalized();
            let text = ProcessFile::from_vector(&reversed)
                .to_json()
                .map_err(|e| usage(e.to_string()))?;
            write_output(&output, &text)?;
            Ok(RunReport {
                command: format!("reverse {} -o {}", file.display(), output.display()),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::json!({ "output": output.display().to_string() }),
                checks: vec![],
            })
        }
        Command::Probs {
            file,
            strategy,
            state,
        } => {
            let strategy_spec = load_strategy(&mut inputs, &strategy)?;
            let (w, rho) = reduced_input(&mut inputs, &file, &state)?;
            let t = correlations(&w, &strategy_spec, &rho)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let mut table = serde_json::Map::new();
            let settings: Vec<usize> = t.setting_arities().to_vec();
            let outcomes: Vec<usize> = t.outcome_arities().to_vec();
            let mut xs: Vec<Vec<usize>> = vec![vec![]];
            for &s in &settings {
                xs = xs
                    .into_iter()
                    .flat_map(|prefix| {
                        (0..s).map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v);
                            p
                        })
                    })
                    .collect();
            }
            let mut aa: Vec<Vec<usize>> = vec![vec![]];
            for &o in &outcomes {
                aa = aa
                    .into_iter()
                    .flat_map(|prefix| {
                        (0..o).map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v);
                            p
                        })
                    })
                    .collect();
            }
            for x in &xs {
                for a in &aa {
                    let key = format!(
                        "p({}|{})",
                        a.iter().map(|v| v.to_string()).collect::<String>(),
                        x.iter().map(|v| v.to_string()).collect::<String>()
                    );
                    table.insert(key, serde_json::json!(t.prob(a, x)));
                }
            }
            let resid = t.worst_normalization_residual;
            Ok(RunReport {
                command: format!("probs {}", file.display()),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::Value::Object(table),
                checks: vec![Check {
                    name: "normalized".into(),
                    pass: resid <= tol.max(1e-9) * 100.0,
                    value: resid,
                }],
            })
        }
        Command::Inequality {
            file,
            strategy,
            state,
        } => {
            let strategy_spec = load_strategy(&mut inputs, &strategy)?;
            let (w, rho) = reduced_input(&mut inputs, &file, &state)?;
            let t = correlations(&w, &strategy_spec, &rho)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let i1 = eval_i1(&t).map_err(|e| CliError::Numerical(e.to_string()))?;
            let resid = t.worst_normalization_residual;
            Ok(RunReport {
                command: format!("inequality {}", file.display()),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::json!({ "I1": i1 }),
                checks: vec![Check {
                    name: "normalized".into(),
                    pass: resid <= tol.max(1e-9) * 100.0,
                    value: resid,
                }],
            })
        }
        Command::Seesaw {
            file,
            restarts,
            seed,
            max_sweeps,
            state,
        } => {
            let (w, _) = reduced_input(&mut inputs, &file, &state)?;
            let config = SeesawConfig {
                restarts,
                max_sweeps,
                seed,
                ..Default::default()
            };
            let outcome =
                seesaw_optimize(&w, &config).map_err(|e| CliError::Numerical(e.to_string()))?;
            let monotone = outcome
                .best
                .trace
                .windows(2)
                .all(|p| p[1] <= p[0] + 1e-9);
            Ok(RunReport {
                command: format!("seesaw {} --restarts {restarts}", file.display()),
                inputs_digest: inputs.digest(),
                seed: Some(seed),
                tolerance: tol,
                results: serde_json::json!({
                    "best_value": outcome.best.value,
                    "restart_values": outcome.restart_values,
                    "trace": outcome.best.trace,
                    "converged": outcome.best.converged,
                }),
                checks: vec![Check {
                    name: "trace-monotone".into(),
                    pass: monotone,
                    value: outcome.best.value,
                }],
            })
        }
        Command::Zoo {
            name,
            output,
            seed,
            parties,
        } => {
            if name == "list" {
                return Ok(RunReport {
                    command: "zoo list".into(),
                    inputs_digest: inputs.digest(),
                    seed: None,
                    tolerance: tol,
                    results: serde_json::json!({ "names": zoo::zoo_names() }),
                    checks: vec![],
                });
            }
            let w = match name.as_str() {
                "switch" => zoo::quantum_switch()
                    .map_err(|e| CliError::Numerical(e.to_string()))?
                    .0,
                "bw" => zoo::bw_process().map_err(|e| CliError::Numerical(e.to_string()))?,
                "bw-reverse" => {
                    zoo::bw_reverse().map_err(|e| CliError::Numerical(e.to_string()))?
                }
                "causal-chain" => {
                    use rand::SeedableRng;
                    inputs.note(&format!("chain:{seed}:{parties}"));
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    let links: Vec<CMat> = (0..=parties)
                        .map(|_| causal_frames::tensor::haar_unitary(4, &mut rng))
                        .collect();
                    zoo::causal_chain(&links, 2, 2)
                        .map_err(|e| CliError::Numerical(e.to_string()))?
                }
                other => return Err(usage(format!("unknown zoo process `{other}`"))),
            };
            let w = w.phase_normalized();
            let text = ProcessFile::from_vector(&w)
                .to_json()
                .map_err(|e| usage(e.to_string()))?;
            if let Some(path) = &output {
                write_output(path, &text)?;
            }
            Ok(RunReport {
                command: format!("zoo {name}"),
                inputs_digest: inputs.digest(),
                seed: Some(seed),
                tolerance: tol,
                results: serde_json::json!({
                    "written": output.as_ref().map(|p| p.display().to_string()),
                    "parties": w.parties().len(),
                    "dimension": w.vector().dim(),
                }),
                checks: vec![],
            })
        }
        Command::Gravity {
            mass,
            radius,
            height,
            tau,
            search,
        } => {
            if search {
                let point = find_switch_point(radius, height)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                inputs.note(&format!("gravity-search:{radius}:{height}"));
                return Ok(RunReport {
                    command: "gravity --search".into(),
                    inputs_digest: inputs.digest(),
                    seed: None,
                    tolerance: tol,
                    results: serde_json::json!({
                        "mass_kg": point.params.mass,
                        "radius_m": point.params.radius,
                        "height_m": point.params.height,
                        "tau_star_s": point.tau_star,
                        "orders": [relation_name(point.orders.0), relation_name(point.orders.1)],
                    }),
                    checks: vec![Check {
                        name: "orders-opposite".into(),
                        pass: point.orders
                            == (CausalRelation::BBeforeA, CausalRelation::ABeforeB),
                        value: point.tau_star,
                    }],
                });
            }
            let mass = mass.ok_or_else(|| usage("--mass required unless --search"))?;
            let tau = tau.ok_or_else(|| usage("--tau required unless --search"))?;
            let p = SchwarzschildParams::new(mass, radius, height)
                .map_err(|e| usage(e.to_string()))?;
            let orders = causal_order(tau, &p).map_err(|e| CliError::Numerical(e.to_string()))?;
            inputs.note(&format!("gravity:{mass}:{radius}:{height}:{tau}"));
            let mut events = Vec::new();
            for branch in [Branch::One, Branch::Two] {
                for party in [Party::A, Party::B] {
                    let e = worldline_event(party, tau, branch, &p)
                        .map_err(|e| CliError::Numerical(e.to_string()))?;
                    events.push(serde_json::json!({
                        "branch": match branch { Branch::One => 1, Branch::Two => 2 },
                        "party": match party { Party::A => "A", Party::B => "B" },
                        "t": e.t,
                        "z": e.z,
                    }));
                }
            }
            Ok(RunReport {
                command: "gravity".into(),
                inputs_digest: inputs.digest(),
                seed: None,
                tolerance: tol,
                results: serde_json::json!({
                    "branch_orders": [relation_name(orders.0), relation_name(orders.1)],
                    "events": events,
                    "schwarzschild_radius_m": p.schwarzschild_radius(),
                }),
                checks: vec![],
            })
        }
    }
}

/// Parses, executes, prints the report, and maps the outcome to the exit
/// code contract.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through this path, too
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serialises")
            );
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_NUMERICAL
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            EXIT_NUMERICAL
        }
    }
}
