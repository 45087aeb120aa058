//! JSON reports, one struct per subcommand. Field order is the output order.

use cqsl_core::linalg::ComplexMatrix;
use cqsl_core::lrb::{CorrelatorResult, LrbInputs, OrderingReport};
use cqsl_core::optimize::{LocalPair, OrbitOptResult, SurfaceTable};
use cqsl_core::speedlimit::CslResult;
use cqsl_core::{BellDiagonalSpec, LocalUnitaryParams};
use serde::Serialize;

use crate::state_io::matrix_parts;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let (re, im) = matrix_parts(m);
        Self { re, im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnglesJson {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl From<LocalUnitaryParams> for AnglesJson {
    fn from(p: LocalUnitaryParams) -> Self {
        Self {
            alpha: p.alpha,
            beta: p.beta,
            theta: p.theta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairJson {
    pub a: AnglesJson,
    pub b: AnglesJson,
}

impl From<LocalPair> for PairJson {
    fn from(p: LocalPair) -> Self {
        Self {
            a: p.a.into(),
            b: p.b.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceReport {
    pub command: &'static str,
    pub value: f64,
    pub r_eigenvalues: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenConcurrenceReport {
    pub command: &'static str,
    pub value: f64,
    pub norm: &'static str,
    pub dims: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitMinReport {
    pub command: &'static str,
    pub symmetric: bool,
    pub min_value: f64,
    pub max_value: f64,
    pub argmin: PairJson,
    pub argmax: PairJson,
    pub n_restarts: usize,
    pub converged: bool,
    pub min_gradient_norm: f64,
    pub max_gradient_norm: f64,
    pub seed: u64,
    /// Present for the two-step search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_step: Option<TwoStepJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoStepJson {
    pub target_concurrence: f64,
    pub enforce_spectrum: bool,
    pub min_spec: [f64; 4],
    pub max_spec: [f64; 4],
    pub candidates: Vec<[f64; 4]>,
}

impl OrbitMinReport {
    pub fn new(r: &OrbitOptResult, seed: u64) -> Self {
        Self {
            command: "orbit-min",
            symmetric: r.symmetric,
            min_value: r.min_value,
            max_value: r.max_value,
            argmin: r.argmin.into(),
            argmax: r.argmax.into(),
            n_restarts: r.n_restarts,
            converged: r.converged,
            min_gradient_norm: r.min_gradient_norm,
            max_gradient_norm: r.max_gradient_norm,
            seed,
            two_step: None,
        }
    }
}

impl TwoStepJson {
    pub fn new(target: f64, enforce: bool, min: &BellDiagonalSpec, max: &BellDiagonalSpec, all: &[BellDiagonalSpec]) -> Self {
        Self {
            target_concurrence: target,
            enforce_spectrum: enforce,
            min_spec: min.weights(),
            max_spec: max.weights(),
            candidates: all.iter().map(|s| s.weights()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralBoundReport {
    pub command: &'static str,
    pub value: f64,
    pub rho_spectrum_ascending: Vec<f64>,
    pub sigma_spectrum_descending: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QslJson {
    pub command: &'static str,
    pub delta_h: f64,
    pub mean_h: f64,
    pub hbar: f64,
    pub mandelstam_tamm: Option<f64>,
    pub margolus_levitin: Option<f64>,
    pub combined: f64,
    pub bound_type: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CslJson {
    pub t_lower: f64,
    pub distance_used: f64,
    pub fidelity: f64,
    pub omega: f64,
    pub mode: &'static str,
    pub surrogate: bool,
    pub converged: bool,
}

impl From<&CslResult> for CslJson {
    fn from(r: &CslResult) -> Self {
        Self {
            t_lower: r.t_lower,
            distance_used: r.distance_used,
            fidelity: r.fidelity,
            omega: r.omega,
            mode: r.mode.as_str(),
            surrogate: r.is_surrogate(),
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CslReport {
    pub command: &'static str,
    pub target_concurrence: f64,
    pub result: CslJson,
    /// Farthest family member, with `--bracket`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slow: Option<CslJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub command: &'static str,
    pub axes: [String; 2],
    pub rows: Vec<[f64; 3]>,
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl From<&SurfaceTable> for ScanReport {
    fn from(s: &SurfaceTable) -> Self {
        Self {
            command: "scan",
            axes: s.axis_names.clone(),
            rows: s.rows.clone(),
            min: s.min,
            max: s.max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelatorReport {
    pub command: &'static str,
    pub value: f64,
    pub maximized: bool,
    pub angles: [f64; 4],
    pub observable_a: MatrixJson,
    pub observable_b: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
}

impl CorrelatorReport {
    pub fn maximized(r: &CorrelatorResult) -> Self {
        Self {
            command: "correlator",
            value: r.value,
            maximized: true,
            angles: r.angles,
            observable_a: (&r.observable_a).into(),
            observable_b: (&r.observable_b).into(),
            converged: Some(r.converged),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LrbInputsJson {
    pub c2: f64,
    pub r_offset: f64,
    pub v_lr: f64,
    pub a: f64,
    pub distance: f64,
}

impl From<&LrbInputs> for LrbInputsJson {
    fn from(i: &LrbInputs) -> Self {
        Self {
            c2: i.c2,
            r_offset: i.r_offset,
            v_lr: i.v_lr,
            a: i.a,
            distance: i.distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrbReport {
    pub command: &'static str,
    pub inputs: LrbInputsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlator: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_lrb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutator_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingJson {
    pub command: &'static str,
    pub t_csl: f64,
    pub t_lrb: f64,
    pub t_lrb_raw: f64,
    pub holds: bool,
    pub correlator: f64,
    pub correlator_supplied: bool,
    pub target_concurrence: f64,
    pub omega: f64,
    pub csl: CslJson,
    pub inputs: LrbInputsJson,
}

impl From<&OrderingReport> for OrderingJson {
    fn from(r: &OrderingReport) -> Self {
        Self {
            command: "ordering",
            t_csl: r.t_csl,
            t_lrb: r.t_lrb,
            t_lrb_raw: r.t_lrb_raw,
            holds: r.holds,
            correlator: r.correlator,
            correlator_supplied: r.correlator_supplied,
            target_concurrence: r.target_concurrence,
            omega: r.omega,
            csl: (&r.csl).into(),
            inputs: (&r.inputs).into(),
        }
    }
}
