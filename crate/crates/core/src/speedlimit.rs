//! Quantum speed limits in units with ħ = 1.
//!
//! [`qsl_combined`] is the larger of the Mandelstam-Tamm and Margolus-Levitin
//! times. [`csl_time`] and [`csl_bracket`] turn the overlap extrema of a
//! fixed-concurrence family into times for a Hamiltonian with rate `ω`,
//! `t = arccos(√F)/ω`.

use core::f64::consts::FRAC_PI_2;

use crate::entanglement::schmidt_state;
use crate::error::{Error, Result};
use crate::optimize::{minimize_overlap_orbit, two_step_minimize, OrbitConfig};
use crate::qstate::{BellDiagonalSpec, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianStats {
    /// Energy standard deviation.
    pub delta_h: f64,
    /// Mean energy above the ground state.
    pub mean_h: f64,
}

impl HamiltonianStats {
    pub fn new(delta_h: f64, mean_h: f64) -> Result<Self> {
        if !delta_h.is_finite() || !mean_h.is_finite() || delta_h < 0.0 || mean_h < 0.0 {
            return Err(Error::BadHamiltonianStats);
        }
        if delta_h == 0.0 && mean_h == 0.0 {
            return Err(Error::BothZero);
        }
        Ok(Self { delta_h, mean_h })
    }
}

/// `π/(2ΔH)`, or `None` when `ΔH = 0`.
pub fn mandelstam_tamm(stats: &HamiltonianStats) -> Option<f64> {
    (stats.delta_h > 0.0).then(|| FRAC_PI_2 / stats.delta_h)
}

/// `π/(2⟨H⟩)`, or `None` when `⟨H⟩ = 0`.
pub fn margolus_levitin(stats: &HamiltonianStats) -> Option<f64> {
    (stats.mean_h > 0.0).then(|| FRAC_PI_2 / stats.mean_h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundType {
    MandelstamTamm,
    MargolusLevitin,
}

impl BoundType {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundType::MandelstamTamm => "mandelstam_tamm",
            BoundType::MargolusLevitin => "margolus_levitin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslReport {
    pub mandelstam_tamm: Option<f64>,
    pub margolus_levitin: Option<f64>,
    pub combined: f64,
    /// The branch attaining the maximum; Mandelstam-Tamm on ties.
    pub binding: BoundType,
}

pub fn qsl_report(stats: &HamiltonianStats) -> Result<QslReport> {
    let stats = HamiltonianStats::new(stats.delta_h, stats.mean_h)?;
    let mt = mandelstam_tamm(&stats);
    let ml = margolus_levitin(&stats);
    let (combined, binding) = match (mt, ml) {
        (Some(a), Some(b)) if b > a => (b, BoundType::MargolusLevitin),
        (Some(a), _) => (a, BoundType::MandelstamTamm),
        (None, Some(b)) => (b, BoundType::MargolusLevitin),
        (None, None) => return Err(Error::BothZero),
    };
    Ok(QslReport {
        mandelstam_tamm: mt,
        margolus_levitin: ml,
        combined,
        binding,
    })
}

/// `max(π/(2ΔH), π/(2⟨H⟩))`, skipping a branch whose denominator is zero.
pub fn qsl_combined(stats: &HamiltonianStats) -> Result<f64> {
    qsl_report(stats).map(|r| r.combined)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslMode {
    /// Pure initial state against the pure states of the target concurrence.
    PureAngle,
    /// Purity-normalized overlap against Bell-diagonal targets. This is a
    /// surrogate distance, not the Bures angle.
    OverlapSurrogate,
}

impl CslMode {
    /// `PureAngle` for pure states, `OverlapSurrogate` otherwise.
    pub fn auto(initial: &DensityMatrix) -> Self {
        if initial.is_pure(PURITY_TOL) {
            CslMode::PureAngle
        } else {
            CslMode::OverlapSurrogate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CslMode::PureAngle => "pure_angle",
            CslMode::OverlapSurrogate => "overlap_surrogate",
        }
    }
}

const PURITY_TOL: f64 = 1e-9;

/// Fidelities this close to 1 are treated as identical states.
const IDENTICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CslConfig {
    pub mode: CslMode,
    pub orbit: OrbitConfig,
    /// Surrogate mode only: restrict the targets to arrangements of the
    /// initial spectrum.
    pub enforce_spectrum: bool,
}

impl CslConfig {
    pub fn new(mode: CslMode) -> Self {
        Self {
            mode,
            orbit: OrbitConfig::default(),
            enforce_spectrum: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CslResult {
    pub t_lower: f64,
    /// `arccos(√F)` before division by `ω`.
    pub distance_used: f64,
    /// Fidelity-like quantity `F` the angle was taken from.
    pub fidelity: f64,
    pub omega: f64,
    pub mode: CslMode,
    pub converged: bool,
}

impl CslResult {
    pub fn is_surrogate(&self) -> bool {
        self.mode == CslMode::OverlapSurrogate
    }
}

/// Fidelities of the nearest and farthest family members.
struct FamilyExtrema {
    nearest: f64,
    farthest: f64,
    converged: bool,
}

fn family_extrema(initial: &DensityMatrix, target: f64, omega: f64, cfg: &CslConfig) -> Result<FamilyExtrema> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::BadOmega(omega));
    }
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::BadConcurrence(target));
    }
    initial.require_two_qubit()?;
    match cfg.mode {
        CslMode::PureAngle => {
            if !initial.is_pure(PURITY_TOL) {
                return Err(Error::NotPure);
            }
            let member = DensityMatrix::from_pure(&schmidt_state(target)?, (2, 2))?;
            let r = minimize_overlap_orbit(&member, initial, false, &cfg.orbit)?;
            Ok(FamilyExtrema {
                nearest: r.max_value,
                farthest: r.min_value,
                converged: r.converged,
            })
        }
        CslMode::OverlapSurrogate => {
            let r = two_step_minimize(initial, target, cfg.enforce_spectrum, &cfg.orbit)?;
            let p0 = initial.purity();
            let norm = |spec: &BellDiagonalSpec| libm::sqrt(p0 * spec.purity());
            Ok(FamilyExtrema {
                nearest: r.orbit.max_value / norm(&r.max_spec),
                farthest: r.orbit.min_value / norm(&r.min_spec),
                converged: r.orbit.converged,
            })
        }
    }
}

fn angle(fidelity: f64) -> f64 {
    let f = fidelity.clamp(0.0, 1.0);
    if f >= 1.0 - IDENTICAL_TOL {
        0.0
    } else {
        libm::acos(libm::sqrt(f))
    }
}

fn result(fidelity: f64, omega: f64, mode: CslMode, converged: bool) -> CslResult {
    let d = angle(fidelity);
    CslResult {
        t_lower: d / omega,
        distance_used: d,
        fidelity,
        omega,
        mode,
        converged,
    }
}

/// Lower bound on the time to reach concurrence `target` from `initial`,
/// measured to the nearest member of the target family.
pub fn csl_time(initial: &DensityMatrix, target: f64, omega: f64, cfg: &CslConfig) -> Result<CslResult> {
    let e = family_extrema(initial, target, omega, cfg)?;
    Ok(result(e.nearest, omega, cfg.mode, e.converged))
}

/// Times to the nearest and to the farthest member of the target family.
pub fn csl_bracket(
    initial: &DensityMatrix,
    target: f64,
    omega: f64,
    cfg: &CslConfig,
) -> Result<(CslResult, CslResult)> {
    let e = family_extrema(initial, target, omega, cfg)?;
    Ok((
        result(e.nearest, omega, cfg.mode, e.converged),
        result(e.farthest, omega, cfg.mode, e.converged),
    ))
}
