//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqsl_core::entanglement::{concurrence, generalized_concurrence, ConcurrenceNorm};
use cqsl_core::lrb::{
    connected_correlator, lrb_commutator_bound, lrb_time_bound, max_connected_correlator, ordering_check,
    spin_observable, LrbInputs,
};
use cqsl_core::optimize::{
    example1_scan, minimize_overlap_orbit, spectral_lower_bound, two_step_minimize, Example1Axis, Example1Params,
    GridAxis, OrbitConfig,
};
use cqsl_core::qstate::{bell_diagonal, bell_state};
use cqsl_core::speedlimit::{csl_bracket, csl_time, qsl_report, CslConfig, CslMode, HamiltonianStats};
use cqsl_core::BellDiagonalSpec;
use serde::Serialize;

use crate::error::{CliError, EXIT_OK, EXIT_USAGE};
use crate::report::*;
use crate::state_io::{read_state, LoadedState, StateFile};
use crate::surface;
use crate::verify::{verify_suite, Suite, VerifyConfig};

/// Directory for reports when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "CQSL_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "cqsl", version, about = "Concurrence speed limits for two-qubit states")]
pub struct Cli {
    /// Report file; defaults to $CQSL_OUTPUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Optimizer restarts per direction.
    #[arg(long, default_value_t = 32, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    /// Tolerance override, KEY=VALUE with KEY one of: gradient, margin.
    #[arg(long = "tol", global = true, value_parser = parse_tolerance)]
    pub tolerances: Vec<(TolKey, f64)>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolKey {
    /// Orbit optimizer gradient-norm tolerance.
    Gradient,
    /// Violation threshold of the verify suites.
    Margin,
}

fn parse_tolerance(s: &str) -> Result<(TolKey, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VALUE")?;
    let key = match k {
        "gradient" => TolKey::Gradient,
        "margin" => TolKey::Margin,
        other => return Err(format!("unknown tolerance '{other}' (expected gradient or margin)")),
    };
    let value: f64 = v.parse().map_err(|e| format!("bad tolerance value '{v}': {e}"))?;
    if !(value > 0.0 && value.is_finite()) {
        return Err(format!("tolerance must be positive, got {value}"));
    }
    Ok((key, value))
}

/// Exactly `N` comma-separated numbers.
fn float_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {}", parts.len()));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|e| format!("bad number '{p}': {e}"))?;
    }
    Ok(out)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wootters concurrence of a two-qubit state.
    Concurrence {
        #[arg(long)]
        state: PathBuf,
    },
    /// Generalized concurrence of a pure bipartite state.
    GenConcurrence {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = NormArg::Regularized)]
        norm: NormArg,
    },
    /// Write a Bell state or a Bell-diagonal mixture as a state file.
    Bell {
        /// 0..3 for Φ+, Φ-, Ψ+, Ψ-.
        #[arg(long, conflicts_with = "weights", required_unless_present = "weights")]
        index: Option<usize>,
        /// Four comma-separated weights on (Φ+, Φ-, Ψ+, Ψ-).
        #[arg(long, value_parser = float_list::<4>)]
        weights: Option<[f64; 4]>,
    },
    /// Extremize Tr((U_A⊗U_B) ρ (U_A⊗U_B)^H σ) over local unitaries.
    OrbitMin(OrbitMinArgs),
    /// Rearrangement lower bound over all unitaries.
    SpectralBound {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
    },
    /// Mandelstam-Tamm, Margolus-Levitin and combined speed limits.
    Qsl {
        #[arg(long)]
        delta_h: f64,
        #[arg(long)]
        mean_h: f64,
        /// Multiplies the reported times.
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Concurrence speed limit.
    Csl(CslArgs),
    /// Sample the worked-example objective on a grid (CSV by default).
    Scan(ScanArgs),
    /// Connected correlator for spin observables, or its maximum.
    Correlator(CorrelatorArgs),
    /// Lieb-Robinson time and commutator bounds.
    Lrb(LrbArgs),
    /// Compare the Lieb-Robinson time with the concurrence speed limit.
    Ordering(OrderingArgs),
    /// Run a Monte Carlo verification suite.
    Verify {
        /// spectral, orbit, correlator, transform or symmetric-example.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Haar samples per instance for the orbit suite.
        #[arg(long, default_value_t = 10_000)]
        haar_samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Regularized,
    Unregularized,
}

#[derive(Debug, Args)]
pub struct OrbitMinArgs {
    #[arg(long)]
    pub sigma: PathBuf,
    /// Fixed target state; omit to run the two-step search over Bell-diagonal
    /// targets of concurrence `--concurrence`.
    #[arg(long, required_unless_present = "concurrence", conflicts_with = "concurrence")]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub concurrence: Option<f64>,
    /// Restrict to U⊗U.
    #[arg(long, conflicts_with = "concurrence")]
    pub symmetric: bool,
    /// Two-step search only: targets must carry σ's spectrum.
    #[arg(long, requires = "concurrence")]
    pub enforce_spectrum: bool,
    /// Fail with exit 1 when the gradient test is not met.
    #[arg(long)]
    pub require_converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    PureAngle,
    OverlapSurrogate,
}

#[derive(Debug, Args)]
pub struct CslArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub concurrence: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Also report the time to the farthest family member.
    #[arg(long)]
    pub bracket: bool,
    #[arg(long)]
    pub enforce_spectrum: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value = "b2")]
    pub x: String,
    #[arg(long, default_value_t = 0.0)]
    pub x_start: f64,
    #[arg(long, default_value_t = 0.125)]
    pub x_end: f64,
    #[arg(long, default_value_t = 11)]
    pub x_points: usize,
    #[arg(long, default_value = "b3")]
    pub y: String,
    #[arg(long, default_value_t = 0.0)]
    pub y_start: f64,
    #[arg(long, default_value_t = 0.125)]
    pub y_end: f64,
    #[arg(long, default_value_t = 11)]
    pub y_points: usize,
    /// Override a base parameter, NAME=VALUE (p1, r2, r3, b2, b3, e1, alpha, beta, gamma).
    #[arg(long = "set", value_parser = parse_param)]
    pub set: Vec<(Example1Axis, f64)>,
}

fn parse_param(s: &str) -> Result<(Example1Axis, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let axis = Example1Axis::parse(k).ok_or_else(|| format!("unknown parameter '{k}'"))?;
    let value: f64 = v.parse().map_err(|e| format!("bad value '{v}': {e}"))?;
    Ok((axis, value))
}

fn parse_axis(name: &str) -> Result<Example1Axis, CliError> {
    Example1Axis::parse(name).ok_or_else(|| CliError::Usage(format!("unknown scan axis '{name}'")))
}

#[derive(Debug, Args)]
pub struct CorrelatorArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Observable on A as THETA,PHI of its Bloch direction.
    #[arg(long, value_parser = float_list::<2>, required_unless_present = "maximize")]
    pub a: Option<[f64; 2]>,
    #[arg(long, value_parser = float_list::<2>, required_unless_present = "maximize")]
    pub b: Option<[f64; 2]>,
    /// Maximize |correlator| over spin observables (pure states).
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub maximize: bool,
}

#[derive(Debug, Args)]
pub struct LrbConstants {
    #[arg(long)]
    pub c2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub r_offset: f64,
    #[arg(long)]
    pub v_lr: f64,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub distance: f64,
}

impl LrbConstants {
    fn inputs(&self) -> Result<LrbInputs, CliError> {
        Ok(LrbInputs::new(self.c2, self.r_offset, self.v_lr, self.a, self.distance)?)
    }
}

#[derive(Debug, Args)]
pub struct LrbArgs {
    #[command(flatten)]
    pub constants: LrbConstants,
    /// |u₂| for the time bound.
    #[arg(long, required_unless_present = "time")]
    pub correlator: Option<f64>,
    /// Time at which to evaluate the commutator bound.
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OrderingArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub concurrence: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[command(flatten)]
    pub constants: LrbConstants,
    /// Required when the target family is mixed.
    #[arg(long)]
    pub correlator: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

/// Rendered output of one subcommand.
pub enum Output {
    Json(String),
    Csv(String),
}

fn json<T: Serialize>(value: &T) -> Output {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    Output::Json(s)
}

impl Cli {
    fn orbit_config(&self) -> OrbitConfig {
        let mut cfg = OrbitConfig {
            restarts: self.restarts as usize,
            seed: self.seed,
            ..OrbitConfig::default()
        };
        if let Some(t) = self.tolerance(TolKey::Gradient) {
            cfg.gradient_tol = t;
        }
        cfg
    }

    fn tolerance(&self, key: TolKey) -> Option<f64> {
        self.tolerances.iter().rev().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn csl_config(&self, mode: ModeArg, state: &LoadedState, enforce: bool) -> Result<CslConfig, CliError> {
        let mode = match mode {
            ModeArg::Auto => CslMode::auto(&state.density()?),
            ModeArg::PureAngle => CslMode::PureAngle,
            ModeArg::OverlapSurrogate => CslMode::OverlapSurrogate,
        };
        Ok(CslConfig {
            mode,
            orbit: self.orbit_config(),
            enforce_spectrum: enforce,
        })
    }

    pub fn command_name(&self) -> &'static str {
        match &self.command {
            Command::Concurrence { .. } => "concurrence",
            Command::GenConcurrence { .. } => "gen-concurrence",
            Command::Bell { .. } => "bell",
            Command::OrbitMin(_) => "orbit-min",
            Command::SpectralBound { .. } => "spectral-bound",
            Command::Qsl { .. } => "qsl",
            Command::Csl(_) => "csl",
            Command::Scan(_) => "scan",
            Command::Correlator(_) => "correlator",
            Command::Lrb(_) => "lrb",
            Command::Ordering(_) => "ordering",
            Command::Verify { .. } => "verify",
        }
    }

    fn format(&self) -> Result<Format, CliError> {
        let default = match self.command {
            Command::Scan(_) => Format::Csv,
            _ => Format::Json,
        };
        let f = self.format.unwrap_or(default);
        let csv_ok = matches!(self.command, Command::Scan(_) | Command::Verify { .. });
        if f == Format::Csv && !csv_ok {
            return Err(CliError::Usage(format!(
                "csv output is available for scan and verify, not {}",
                self.command_name()
            )));
        }
        Ok(f)
    }

    /// Runs the subcommand and renders its report.
    pub fn execute(&self) -> Result<Output, CliError> {
        let format = self.format()?;
        Ok(match &self.command {
            Command::Concurrence { state } => {
                let rho = read_state(state)?.density()?;
                let c = concurrence(&rho)?;
                json(&ConcurrenceReport {
                    command: "concurrence",
                    value: c.value,
                    r_eigenvalues: c.r_eigenvalues,
                })
            }
            Command::GenConcurrence { state, norm } => {
                let loaded = read_state(state)?;
                let (psi, dims) = loaded
                    .pure_vector()
                    .ok_or(CliError::Compute(cqsl_core::Error::NotPure))?;
                let (norm, label) = match norm {
                    NormArg::Regularized => (ConcurrenceNorm::Regularized, "regularized"),
                    NormArg::Unregularized => (ConcurrenceNorm::Unregularized, "unregularized"),
                };
                json(&GenConcurrenceReport {
                    command: "gen-concurrence",
                    value: generalized_concurrence(&psi, dims, norm)?,
                    norm: label,
                    dims: [dims.0, dims.1],
                })
            }
            Command::Bell { index, weights } => {
                let rho = match (index, weights) {
                    (Some(k), _) => bell_state(*k)?,
                    (None, Some(w)) => bell_diagonal(&BellDiagonalSpec::new(*w)?),
                    (None, None) => unreachable!("clap requires one of --index/--weights"),
                };
                json(&StateFile::from_density(&rho))
            }
            Command::OrbitMin(args) => self.orbit_min(args)?,
            Command::SpectralBound { rho, sigma } => {
                let b = spectral_lower_bound(&read_state(rho)?.density()?, &read_state(sigma)?.density()?)?;
                json(&SpectralBoundReport {
                    command: "spectral-bound",
                    value: b.value,
                    rho_spectrum_ascending: b.rho_spectrum_ascending,
                    sigma_spectrum_descending: b.sigma_spectrum_descending,
                })
            }
            Command::Qsl { delta_h, mean_h, hbar } => {
                if !(*hbar > 0.0 && hbar.is_finite()) {
                    return Err(CliError::Usage(format!("hbar must be positive, got {hbar}")));
                }
                let r = qsl_report(&HamiltonianStats::new(*delta_h, *mean_h)?)?;
                json(&QslJson {
                    command: "qsl",
                    delta_h: *delta_h,
                    mean_h: *mean_h,
                    hbar: *hbar,
                    mandelstam_tamm: r.mandelstam_tamm.map(|t| t * hbar),
                    margolus_levitin: r.margolus_levitin.map(|t| t * hbar),
                    combined: r.combined * hbar,
                    bound_type: r.binding.as_str(),
                })
            }
            Command::Csl(args) => {
                let loaded = read_state(&args.state)?;
                let cfg = self.csl_config(args.mode, &loaded, args.enforce_spectrum)?;
                let rho = loaded.density()?;
                let (fast, slow) = if args.bracket {
                    let (f, s) = csl_bracket(&rho, args.concurrence, args.omega, &cfg)?;
                    (f, Some(s))
                } else {
                    (csl_time(&rho, args.concurrence, args.omega, &cfg)?, None)
                };
                json(&CslReport {
                    command: "csl",
                    target_concurrence: args.concurrence,
                    result: (&fast).into(),
                    slow: slow.as_ref().map(Into::into),
                })
            }
            Command::Scan(args) => {
                let mut base = Example1Params::default();
                for (axis, v) in &args.set {
                    base.set(*axis, *v);
                }
                let x = GridAxis::new(parse_axis(&args.x)?, args.x_start, args.x_end, args.x_points);
                let y = GridAxis::new(parse_axis(&args.y)?, args.y_start, args.y_end, args.y_points);
                let table = example1_scan(&base, x, y)?;
                match format {
                    Format::Csv => Output::Csv(surface::surface_csv(&table)),
                    Format::Json => json(&ScanReport::from(&table)),
                }
            }
            Command::Correlator(args) => self.correlator(args)?,
            Command::Lrb(args) => {
                let inputs = args.constants.inputs()?;
                json(&LrbReport {
                    command: "lrb",
                    inputs: (&inputs).into(),
                    correlator: args.correlator,
                    t_lrb: args.correlator.map(|u| lrb_time_bound(u.abs(), &inputs)).transpose()?,
                    time: args.time,
                    commutator_bound: args.time.map(|t| lrb_commutator_bound(&inputs, t)),
                })
            }
            Command::Ordering(args) => {
                let loaded = read_state(&args.state)?;
                let cfg = self.csl_config(args.mode, &loaded, false)?;
                let inputs = args.constants.inputs()?;
                let r = ordering_check(
                    &loaded.density()?,
                    args.concurrence,
                    args.omega,
                    &inputs,
                    args.correlator,
                    &cfg,
                )?;
                json(&OrderingJson::from(&r))
            }
            Command::Verify {
                suite,
                trials,
                haar_samples,
            } => {
                let suite: Suite = suite.parse()?;
                let cfg = VerifyConfig {
                    orbit: self.orbit_config(),
                    haar_samples: *haar_samples,
                    tolerance: self.tolerance(TolKey::Margin),
                    ..VerifyConfig::new(*trials as usize, self.seed)
                };
                let report = verify_suite(suite, &cfg)?;
                match format {
                    Format::Csv => Output::Csv(surface::trials_csv(&report)),
                    Format::Json => json(&report),
                }
            }
        })
    }

    fn orbit_min(&self, args: &OrbitMinArgs) -> Result<Output, CliError> {
        let sigma = read_state(&args.sigma)?.density()?;
        let cfg = self.orbit_config();
        let mut report = match (&args.target, args.concurrence) {
            (Some(target), _) => {
                let target = read_state(target)?.density()?;
                let r = minimize_overlap_orbit(&target, &sigma, args.symmetric, &cfg)?;
                let r = if args.require_converged {
                    r.require_converged(cfg.gradient_tol)?
                } else {
                    r
                };
                OrbitMinReport::new(&r, self.seed)
            }
            (None, Some(c)) => {
                let r = two_step_minimize(&sigma, c, args.enforce_spectrum, &cfg)?;
                let orbit = if args.require_converged {
                    r.orbit.clone().require_converged(cfg.gradient_tol)?
                } else {
                    r.orbit.clone()
                };
                let mut report = OrbitMinReport::new(&orbit, self.seed);
                report.two_step = Some(TwoStepJson::new(c, args.enforce_spectrum, &r.min_spec, &r.max_spec, &r.candidates));
                report
            }
            (None, None) => unreachable!("clap requires --target or --concurrence"),
        };
        report.command = "orbit-min";
        Ok(json(&report))
    }

    fn correlator(&self, args: &CorrelatorArgs) -> Result<Output, CliError> {
        let loaded = read_state(&args.state)?;
        if args.maximize {
            let (psi, dims) = loaded
                .pure_vector()
                .ok_or(CliError::Compute(cqsl_core::Error::NotPure))?;
            if dims != (2, 2) {
                return Err(CliError::Compute(cqsl_core::Error::DimensionMismatch {
                    expected: 4,
                    found: dims.0 * dims.1,
                }));
            }
            let r = max_connected_correlator(&psi, self.restarts as usize, self.seed)?;
            return Ok(json(&CorrelatorReport::maximized(&r)));
        }
        let (a, b) = match (&args.a, &args.b) {
            (Some(a), Some(b)) => (a, b),
            _ => unreachable!("clap requires --a and --b without --maximize"),
        };
        let oa = spin_observable(a[0], a[1]);
        let ob = spin_observable(b[0], b[1]);
        let value = connected_correlator(&loaded.density()?, &oa, &ob)?;
        Ok(json(&CorrelatorReport {
            command: "correlator",
            value,
            maximized: false,
            angles: [a[0], a[1], b[0], b[1]],
            observable_a: (&oa).into(),
            observable_b: (&ob).into(),
            converged: None,
        }))
    }
}

/// Where the report goes: `--output`, else the output directory from the
/// environment, else stdout (`None`).
pub fn resolve_output(explicit: Option<&Path>, env_dir: Option<OsString>, command: &str, ext: &str) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    env_dir
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(format!("{command}.{ext}")))
}

fn write_output(cli: &Cli, out: &Output) -> Result<(), CliError> {
    let (text, ext) = match out {
        Output::Json(s) => (s, "json"),
        Output::Csv(s) => (s, "csv"),
    };
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV);
    match resolve_output(cli.output.as_deref(), env_dir, cli.command_name(), ext) {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
        Some(path) => {
            let wrap = |source| CliError::Write {
                path: path.display().to_string(),
                source,
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(wrap)?;
            }
            fs::write(&path, text).map_err(wrap)
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.execute().and_then(|out| write_output(&cli, &out)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
