//! Monte Carlo verification suites.
//!
//! Each trial draws its own generator from `(seed, trial index)`, so trials
//! are independent of one another and of evaluation order.

use std::fmt::Write as _;
use std::str::FromStr;

use cqsl_core::entanglement::{concurrence_transform_check, pure_concurrence};
use cqsl_core::linalg::random::{
    haar_unitary_with_rng, random_density_matrix_with_rng, random_pure_state_with_rng, random_sl2c_matrix,
    seeded_rng, uniform, SeededRng,
};
use cqsl_core::linalg::{kron, ComplexMatrix};
use cqsl_core::lrb::max_connected_correlator;
use cqsl_core::optimize::{
    classify_stationary, minimize_overlap_orbit, spectral_lower_bound, Classification, Example1Params,
    OrbitConfig, OrbitObjective,
};
use cqsl_core::qstate::bell_diagonal;
use cqsl_core::{BellDiagonalSpec, DensityMatrix, Sl2cParams};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Spectral,
    Orbit,
    Correlator,
    Transform,
    SymmetricExample,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Spectral,
        Suite::Orbit,
        Suite::Correlator,
        Suite::Transform,
        Suite::SymmetricExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectral => "spectral",
            Suite::Orbit => "orbit",
            Suite::Correlator => "correlator",
            Suite::Transform => "transform",
            Suite::SymmetricExample => "symmetric-example",
        }
    }

    /// Margins below `-tolerance` count as violations.
    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Spectral | Suite::Orbit => 1e-9,
            Suite::Correlator => 1e-6,
            Suite::Transform => 1e-7,
            Suite::SymmetricExample => 1e-5,
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub orbit: OrbitConfig,
    /// Haar samples per instance in the orbit suite.
    pub haar_samples: usize,
    /// Overrides the suite's own tolerance.
    pub tolerance: Option<f64>,
}

impl VerifyConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            orbit: OrbitConfig::default(),
            haar_samples: 10_000,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    /// First 16 hex digits of the SHA-256 of the trial inputs.
    pub inputs_digest: String,
    pub bound: f64,
    pub sampled: f64,
    pub margin: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub command: &'static str,
    pub suite: &'static str,
    pub seed: u64,
    pub tolerance: f64,
    pub n_trials: usize,
    pub n_violations: usize,
    pub worst_margin: f64,
    pub trials: Vec<TrialRecord>,
}

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: usize) -> SeededRng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(index as u64);
    rng
}

fn digest(parts: &[&[f64]]) -> String {
    let mut h = Sha256::new();
    for part in parts {
        for v in *part {
            h.update(v.to_le_bytes());
        }
    }
    h.finalize()[..8].iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn matrix_floats(m: &ComplexMatrix) -> Vec<f64> {
    m.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
}

struct Outcome {
    inputs: Vec<f64>,
    bound: f64,
    sampled: f64,
    margin: f64,
    /// Extra pass condition beyond the margin test.
    extra_ok: bool,
}

fn random_state(rng: &mut SeededRng) -> Result<DensityMatrix, CliError> {
    let rank = 1 + (uniform(rng, 0.0, 4.0) as usize).min(3);
    Ok(random_density_matrix_with_rng((2, 2), rank, rng)?)
}

/// Bell-diagonal state carrying the spectrum of `rho`.
fn bell_diagonal_with_spectrum(rho: &DensityMatrix) -> Result<DensityMatrix, CliError> {
    let ev = rho.eigenvalues();
    let mut p = [0.0; 4];
    for (slot, v) in p.iter_mut().zip(&ev) {
        *slot = v.max(0.0);
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    Ok(bell_diagonal(&BellDiagonalSpec::new(p)?))
}

fn spectral_trial(rng: &mut SeededRng, cfg: &VerifyConfig, index: usize) -> Result<Outcome, CliError> {
    let rho = random_state(rng)?;
    let sigma = random_state(rng)?;
    let target = bell_diagonal_with_spectrum(&rho)?;
    let bound = spectral_lower_bound(&target, &sigma)?.value;
    let orbit_cfg = OrbitConfig {
        seed: cfg.seed.wrapping_add(index as u64),
        ..cfg.orbit
    };
    let sampled = minimize_overlap_orbit(&target, &sigma, false, &orbit_cfg)?.min_value;
    Ok(Outcome {
        inputs: [matrix_floats(target.matrix()), matrix_floats(sigma.matrix())].concat(),
        bound,
        sampled,
        margin: sampled - bound,
        extra_ok: true,
    })
}

fn orbit_trial(rng: &mut SeededRng, cfg: &VerifyConfig, index: usize) -> Result<Outcome, CliError> {
    let target = random_state(rng)?;
    let sigma = random_state(rng)?;
    let orbit_cfg = OrbitConfig {
        seed: cfg.seed.wrapping_add(index as u64),
        ..cfg.orbit
    };
    let r = minimize_overlap_orbit(&target, &sigma, false, &orbit_cfg)?;
    let objective = OrbitObjective::new(&target, &sigma)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..cfg.haar_samples {
        let w = kron(&haar_unitary_with_rng(2, rng), &haar_unitary_with_rng(2, rng));
        let v = objective.eval_unitary(&w);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(Outcome {
        inputs: [matrix_floats(target.matrix()), matrix_floats(sigma.matrix())].concat(),
        bound: r.min_value,
        sampled: lo,
        margin: (lo - r.min_value).min(r.max_value - hi),
        extra_ok: true,
    })
}

fn correlator_trial(rng: &mut SeededRng, cfg: &VerifyConfig, index: usize) -> Result<Outcome, CliError> {
    let psi = random_pure_state_with_rng(4, rng);
    let c = pure_concurrence(&psi)?;
    let r = max_connected_correlator(&psi, cfg.orbit.restarts.min(16), cfg.seed.wrapping_add(index as u64))?;
    Ok(Outcome {
        inputs: psi.iter().flat_map(|z| [z.re, z.im]).collect(),
        bound: c,
        sampled: r.value,
        margin: -(r.value - c).abs(),
        extra_ok: true,
    })
}

fn transform_trial(rng: &mut SeededRng) -> Result<Outcome, CliError> {
    let rho = random_state(rng)?;
    let a = Sl2cParams::from_matrix(random_sl2c_matrix(rng))?;
    let b = Sl2cParams::from_matrix(random_sl2c_matrix(rng))?;
    let check = concurrence_transform_check(&rho, &a, &b)?;
    Ok(Outcome {
        inputs: [
            matrix_floats(rho.matrix()),
            matrix_floats(a.matrix()),
            matrix_floats(b.matrix()),
        ]
        .concat(),
        bound: check.rhs,
        sampled: check.lhs,
        margin: -(check.lhs - check.rhs).abs(),
        extra_ok: true,
    })
}

/// Random point on the degenerate branch of the worked example.
pub fn random_branch_point(rng: &mut SeededRng) -> Example1Params {
    let e1 = uniform(rng, 0.25, 0.9);
    let rest = 1.0 - e1;
    let b2 = uniform(rng, 0.0, rest / 2.0);
    let b3 = uniform(rng, 0.0, rest / 2.0);
    Example1Params::degenerate_branch(
        uniform(rng, 0.0, 0.5),
        uniform(rng, 0.0, 0.5),
        b2,
        b3,
        e1,
        uniform(rng, 0.0, std::f64::consts::TAU),
        uniform(rng, 0.0, std::f64::consts::TAU),
    )
}

fn symmetric_example_trial(rng: &mut SeededRng) -> Result<Outcome, CliError> {
    let p = random_branch_point(rng);
    let f = p.angle_objective()?;
    let report = classify_stationary(&f, &[p.alpha, p.beta, p.gamma])?;
    Ok(Outcome {
        inputs: vec![p.p1, p.r2, p.r3, p.b2, p.b3, p.e1, p.alpha, p.beta, p.gamma],
        bound: 0.0,
        sampled: report.gradient_norm,
        margin: -report.gradient_norm,
        extra_ok: report.classification == Classification::Degenerate,
    })
}

pub fn verify_suite(suite: Suite, cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let tol = cfg.tolerance.unwrap_or(suite.tolerance());
    let mut trials = Vec::with_capacity(cfg.trials);
    for index in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, index);
        let out = match suite {
            Suite::Spectral => spectral_trial(&mut rng, cfg, index)?,
            Suite::Orbit => orbit_trial(&mut rng, cfg, index)?,
            Suite::Correlator => correlator_trial(&mut rng, cfg, index)?,
            Suite::Transform => transform_trial(&mut rng)?,
            Suite::SymmetricExample => symmetric_example_trial(&mut rng)?,
        };
        trials.push(TrialRecord {
            index,
            inputs_digest: digest(&[&out.inputs]),
            bound: out.bound,
            sampled: out.sampled,
            margin: out.margin,
            ok: out.margin >= -tol && out.extra_ok,
        });
    }
    let n_violations = trials.iter().filter(|t| !t.ok).count();
    let worst_margin = trials.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);
    Ok(VerificationReport {
        command: "verify",
        suite: suite.name(),
        seed: cfg.seed,
        tolerance: tol,
        n_trials: cfg.trials,
        n_violations,
        worst_margin,
        trials,
    })
}
