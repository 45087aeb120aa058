//! Connected correlators and the Lieb-Robinson time bound.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::entanglement::schmidt_state;
use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, pauli, ComplexMatrix, Subsystem, C64};
use crate::nelder_mead::{self, NelderMeadConfig};
use crate::qstate::DensityMatrix;
use crate::speedlimit::{csl_time, CslConfig, CslMode, CslResult};
use crate::tolerance::Tolerances;

/// Constants of the Lieb-Robinson bound. There are no defaults; every
/// value is model dependent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrbInputs {
    pub c2: f64,
    pub r_offset: f64,
    pub v_lr: f64,
    /// Decay rate used by [`lrb_commutator_bound`].
    pub a: f64,
    /// Distance `d(X, Y)` between the supports.
    pub distance: f64,
}

impl LrbInputs {
    pub fn new(c2: f64, r_offset: f64, v_lr: f64, a: f64, distance: f64) -> Result<Self> {
        let s = Self {
            c2,
            r_offset,
            v_lr,
            a,
            distance,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.c2, self.r_offset, self.v_lr, self.a, self.distance];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadLrbInputs("constants must be finite"));
        }
        if self.c2 <= 0.0 {
            return Err(Error::BadLrbInputs("c2 must be positive"));
        }
        if self.v_lr <= 0.0 {
            return Err(Error::BadLrbInputs("v_lr must be positive"));
        }
        if self.a <= 0.0 {
            return Err(Error::BadLrbInputs("a must be positive"));
        }
        if self.distance < 0.0 {
            return Err(Error::BadLrbInputs("distance must be non-negative"));
        }
        Ok(())
    }
}

fn check_observable(m: &ComplexMatrix) -> Result<()> {
    if m.dim() != 2 || !m.is_finite() || !m.is_hermitian(Tolerances::DEFAULT.structural) {
        return Err(Error::NotHermitianObservable);
    }
    Ok(())
}

/// `Tr((A⊗B)ρ) - Tr(A ρ_A) Tr(B ρ_B)`.
pub fn connected_correlator(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_observable(a)?;
    check_observable(b)?;
    rho.require_two_qubit()?;
    let m = rho.matrix();
    let joint = kron(a, b).trace_product(m).re;
    let ra = partial_trace(m, Subsystem::First, (2, 2))?;
    let rb = partial_trace(m, Subsystem::Second, (2, 2))?;
    Ok(joint - a.trace_product(&ra).re * b.trace_product(&rb).re)
}

/// `n̂·σ` with `n̂ = (sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn spin_observable(theta: f64, phi: f64) -> ComplexMatrix {
    let [x, y, z] = pauli();
    let (st, ct) = (libm::sin(theta), libm::cos(theta));
    let (sp, cp) = (libm::sin(phi), libm::cos(phi));
    &(&x.scale_real(st * cp) + &y.scale_real(st * sp)) + &z.scale_real(ct)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorResult {
    /// Largest `|connected_correlator|` found.
    pub value: f64,
    pub observable_a: ComplexMatrix,
    pub observable_b: ComplexMatrix,
    /// `(θ_A, φ_A, θ_B, φ_B)`.
    pub angles: [f64; 4],
    pub converged: bool,
}

/// Connected correlator of a pure state for spin observables, in closed
/// form from the Bloch vectors and correlation tensor.
struct PureCorrelator {
    bloch_a: [f64; 3],
    bloch_b: [f64; 3],
    tensor: [[f64; 3]; 3],
}

impl PureCorrelator {
    fn new(psi: &[C64]) -> Result<Self> {
        let rho = DensityMatrix::from_pure(psi, (2, 2))?;
        let m = rho.matrix();
        let p = pauli();
        let ra = partial_trace(m, Subsystem::First, (2, 2))?;
        let rb = partial_trace(m, Subsystem::Second, (2, 2))?;
        let bloch_a = [0, 1, 2].map(|i| p[i].trace_product(&ra).re);
        let bloch_b = [0, 1, 2].map(|i| p[i].trace_product(&rb).re);
        let tensor = [0, 1, 2].map(|i| [0, 1, 2].map(|j| kron(&p[i], &p[j]).trace_product(m).re));
        Ok(Self {
            bloch_a,
            bloch_b,
            tensor,
        })
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let dir = |t: f64, f: f64| [libm::sin(t) * libm::cos(f), libm::sin(t) * libm::sin(f), libm::cos(t)];
        let na = dir(x[0], x[1]);
        let nb = dir(x[2], x[3]);
        let dot = |u: &[f64; 3], v: &[f64; 3]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        let joint: f64 = (0..3)
            .map(|i| (0..3).map(|j| na[i] * self.tensor[i][j] * nb[j]).sum::<f64>())
            .sum();
        joint - dot(&na, &self.bloch_a) * dot(&nb, &self.bloch_b)
    }
}

/// Maximizes `|connected_correlator|` of a pure two-qubit state over spin
/// observables `n̂_A·σ`, `n̂_B·σ`, by multi-start Nelder-Mead seeded from an
/// angle grid.
pub fn max_connected_correlator(psi: &[C64], restarts: usize, seed: u64) -> Result<CorrelatorResult> {
    if restarts == 0 {
        return Err(Error::BadRestarts);
    }
    if psi.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: psi.len(),
        });
    }
    let corr = PureCorrelator::new(psi)?;
    let objective = |x: &[f64]| -libm::fabs(corr.eval(x));

    // theta in [0, π], phi in [0, 2π); the seed only rotates the phi grid.
    let g: usize = 5;
    let shift = (seed % 97) as f64 / 97.0 * (2.0 * PI / g as f64);
    let mut starts: Vec<(f64, Vec<f64>)> = Vec::with_capacity(g.pow(4));
    for idx in 0..g.pow(4) {
        let k = [idx % g, (idx / g) % g, (idx / g / g) % g, idx / g / g / g];
        let x = vec![
            PI * (k[0] as f64 + 0.5) / g as f64,
            shift + 2.0 * PI * k[1] as f64 / g as f64,
            PI * (k[2] as f64 + 0.5) / g as f64,
            shift + 2.0 * PI * k[3] as f64 / g as f64,
        ];
        starts.push((objective(&x), x));
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));

    let cfg = NelderMeadConfig::default();
    let mut best: Option<nelder_mead::NelderMeadResult> = None;
    let mut converged = false;
    for (_, x0) in starts.iter().take(restarts) {
        let run = nelder_mead::minimize(objective, x0, &cfg);
        converged |= run.converged;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let x = &best.x;
    Ok(CorrelatorResult {
        value: -best.value,
        observable_a: spin_observable(x[0], x[1]),
        observable_b: spin_observable(x[2], x[3]),
        angles: [x[0], x[1], x[2], x[3]],
        converged,
    })
}

/// `exp(-a (d - v t))`.
pub fn lrb_commutator_bound(inputs: &LrbInputs, t: f64) -> f64 {
    libm::exp(-inputs.a * (inputs.distance - inputs.v_lr * t))
}

/// `(ln|u| - ln c₂ + R) / v_LR`. May be negative, which is a vacuous bound.
pub fn lrb_time_bound(correlator_abs: f64, inputs: &LrbInputs) -> Result<f64> {
    inputs.validate()?;
    if !(correlator_abs > 0.0) || !correlator_abs.is_finite() {
        return Err(Error::ZeroCorrelator);
    }
    Ok((libm::log(correlator_abs) - libm::log(inputs.c2) + inputs.r_offset) / inputs.v_lr)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    pub csl: CslResult,
    pub t_csl: f64,
    /// Raw bound, possibly negative.
    pub t_lrb_raw: f64,
    /// `max(t_lrb_raw, 0)`.
    pub t_lrb: f64,
    pub correlator: f64,
    /// Whether the correlator came from the caller.
    pub correlator_supplied: bool,
    pub holds: bool,
    pub target_concurrence: f64,
    pub omega: f64,
    pub inputs: LrbInputs,
}

/// Compares the Lieb-Robinson time with the concurrence speed limit.
///
/// Without a supplied correlator, the target is the pure state of the given
/// concurrence and its maximal connected correlator is used; that needs
/// pure-angle mode.
pub fn ordering_check(
    initial: &DensityMatrix,
    target: f64,
    omega: f64,
    inputs: &LrbInputs,
    correlator: Option<f64>,
    cfg: &CslConfig,
) -> Result<OrderingReport> {
    inputs.validate()?;
    let csl = csl_time(initial, target, omega, cfg)?;
    let (u, supplied) = match correlator {
        Some(u) => (u.abs(), true),
        None => {
            if cfg.mode != CslMode::PureAngle {
                return Err(Error::BadLrbInputs("a correlator value is required for mixed targets"));
            }
            let psi = schmidt_state(target)?;
            (max_connected_correlator(&psi, cfg.orbit.restarts, cfg.orbit.seed)?.value, false)
        }
    };
    let raw = lrb_time_bound(u, inputs)?;
    let t_lrb = raw.max(0.0);
    Ok(OrderingReport {
        t_csl: csl.t_lower,
        csl,
        t_lrb_raw: raw,
        t_lrb,
        correlator: u,
        correlator_supplied: supplied,
        holds: t_lrb >= csl.t_lower,
        target_concurrence: target,
        omega,
        inputs: *inputs,
    })
}
