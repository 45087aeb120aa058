//! Overlap extremization over local-unitary orbits.
//!
//! The objective throughout is the Hilbert-Schmidt overlap
//! `f(U_A, U_B) = Tr((U_A⊗U_B) ρ (U_A⊗U_B)^H σ)` with SU(2) factors given by
//! [`su2`](crate::qstate::su2) angles. Orbits are searched by multi-start Nelder-Mead seeded
//! from a coarse angle grid. [`two_step_minimize`] adds the outer search over
//! Bell-diagonal targets of fixed concurrence, and [`spectral_lower_bound`]
//! gives the rearrangement bound that holds for any unitary, local or not.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::seq::index::sample;

use crate::entanglement::bell_diagonal_concurrence;
use crate::error::{Error, Result};
use crate::linalg::random::seeded_rng;
use crate::linalg::{hermitian_eig, ComplexMatrix, C64, ZERO};
use crate::nelder_mead::{self, NelderMeadConfig};
use crate::qstate::{bell_diagonal, local_unitary, BellDiagonalSpec, DensityMatrix, LocalUnitaryParams};
use crate::tolerance::Tolerances;

/// `Tr(ρσ)`.
pub fn overlap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(rho.matrix().trace_product(sigma.matrix()).re)
}

/// SU(2) angles for both parties.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalPair {
    pub a: LocalUnitaryParams,
    pub b: LocalUnitaryParams,
}

impl LocalPair {
    pub fn symmetric(p: LocalUnitaryParams) -> Self {
        Self { a: p, b: p }
    }

    fn from_angles(x: &[f64]) -> Self {
        match x.len() {
            3 => Self::symmetric(LocalUnitaryParams::from_slice(x)),
            6 => Self {
                a: LocalUnitaryParams::from_slice(&x[..3]),
                b: LocalUnitaryParams::from_slice(&x[3..]),
            },
            n => panic!("expected 3 or 6 angles, got {n}"),
        }
    }

    pub fn unitary(&self) -> ComplexMatrix {
        local_unitary(self.a, self.b)
    }

    fn canonical(self) -> Self {
        Self {
            a: self.a.canonical(),
            b: self.b.canonical(),
        }
    }
}

/// Settings for [`minimize_overlap_orbit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitConfig {
    /// Nelder-Mead runs per direction (minimum and maximum).
    pub restarts: usize,
    pub seed: u64,
    /// Grid points per angle axis used to seed the restarts.
    pub grid_points: usize,
    /// Points drawn from the `grid_points^6` grid in the asymmetric case.
    pub asymmetric_grid_samples: usize,
    pub nelder_mead: NelderMeadConfig,
    pub gradient_tol: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
            grid_points: 5,
            asymmetric_grid_samples: 1024,
            nelder_mead: NelderMeadConfig::default(),
            gradient_tol: Tolerances::DEFAULT.gradient,
        }
    }
}

impl OrbitConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitOptResult {
    pub min_value: f64,
    pub max_value: f64,
    pub argmin: LocalPair,
    pub argmax: LocalPair,
    pub symmetric: bool,
    pub n_restarts: usize,
    /// True when at least one restart on each side ended with gradient
    /// norm below the configured tolerance.
    pub converged: bool,
    pub min_gradient_norm: f64,
    pub max_gradient_norm: f64,
}

impl OrbitOptResult {
    /// Turns a soft convergence failure into [`Error::NoConvergence`].
    pub fn require_converged(self, tol: f64) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                gradient_norm: self.min_gradient_norm.max(self.max_gradient_norm),
                tolerance: tol,
            })
        }
    }
}

type M4 = [[C64; 4]; 4];

fn to_array4(m: &ComplexMatrix) -> M4 {
    core::array::from_fn(|i| core::array::from_fn(|j| m[(i, j)]))
}

fn su2_entries(x: &[f64]) -> [[C64; 2]; 2] {
    let (s, c) = libm::sincos(x[2]);
    let ea = C64::from_polar(1.0, x[0]);
    let eb = C64::from_polar(1.0, x[1]);
    [[ea * c, eb * s], [-eb.conj() * s, ea.conj() * c]]
}

/// The orbit overlap as a function of 3 (symmetric) or 6 angles.
#[derive(Debug, Clone)]
pub struct OrbitObjective {
    target: M4,
    sigma: M4,
}

impl OrbitObjective {
    pub fn new(target: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        target.require_two_qubit()?;
        sigma.require_two_qubit()?;
        Ok(Self {
            target: to_array4(target.matrix()),
            sigma: to_array4(sigma.matrix()),
        })
    }

    pub fn eval_pair(&self, pair: &LocalPair) -> f64 {
        self.eval_unitary(&pair.unitary())
    }

    pub fn eval_unitary(&self, w: &ComplexMatrix) -> f64 {
        self.eval_w(&to_array4(w))
    }

    /// Allocation-free evaluation; this is the optimizer's inner loop.
    pub fn eval(&self, angles: &[f64]) -> f64 {
        let a = su2_entries(&angles[..3]);
        let b = match angles.len() {
            3 => a,
            6 => su2_entries(&angles[3..]),
            n => panic!("expected 3 or 6 angles, got {n}"),
        };
        let w: M4 = core::array::from_fn(|i| core::array::from_fn(|j| a[i / 2][j / 2] * b[i % 2][j % 2]));
        self.eval_w(&w)
    }

    fn eval_w(&self, w: &M4) -> f64 {
        // f = sum_{i,l} sigma_li (W T W^H)_il
        let mut total = 0.0;
        for i in 0..4 {
            let mut wt = [ZERO; 4];
            for (j, wij) in w[i].iter().enumerate() {
                for k in 0..4 {
                    wt[k] += wij * self.target[j][k];
                }
            }
            for l in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += wt[k] * w[l][k].conj();
                }
                total += (acc * self.sigma[l][i]).re;
            }
        }
        total
    }
}

/// Extremizes `Tr((U_A⊗U_B) target (U_A⊗U_B)^H σ)` over SU(2)⊗SU(2), or over
/// `U⊗U` when `symmetric` is set.
///
/// Convergence is soft: the result is always returned, with `converged`
/// reporting whether the gradient test passed.
pub fn minimize_overlap_orbit(
    target: &DensityMatrix,
    sigma: &DensityMatrix,
    symmetric: bool,
    cfg: &OrbitConfig,
) -> Result<OrbitOptResult> {
    if cfg.restarts == 0 {
        return Err(Error::BadRestarts);
    }
    let objective = OrbitObjective::new(target, sigma)?;
    let dim = if symmetric { 3 } else { 6 };
    let seeds = seed_points(dim, cfg);
    let mut graded: Vec<(f64, &Vec<f64>)> = seeds.iter().map(|x| (objective.eval(x), x)).collect();
    graded.sort_by(|a, b| a.0.total_cmp(&b.0));

    let k = cfg.restarts.min(graded.len());
    let low: Vec<&Vec<f64>> = graded.iter().take(k).map(|g| g.1).collect();
    let high: Vec<&Vec<f64>> = graded.iter().rev().take(k).map(|g| g.1).collect();

    let (min_x, min_value, min_grad) = best_of(&low, |x| objective.eval(x), cfg);
    let (max_x, neg_max, max_grad) = best_of(&high, |x| -objective.eval(x), cfg);

    let tol = cfg.gradient_tol;
    Ok(OrbitOptResult {
        min_value,
        max_value: -neg_max,
        argmin: LocalPair::from_angles(&min_x).canonical(),
        argmax: LocalPair::from_angles(&max_x).canonical(),
        symmetric,
        n_restarts: k,
        converged: min_grad <= tol && max_grad <= tol,
        min_gradient_norm: min_grad,
        max_gradient_norm: max_grad,
    })
}

/// Runs Nelder-Mead from every start; returns the best point, its value and
/// the smallest end-point gradient norm over all restarts.
fn best_of(
    starts: &[&Vec<f64>],
    f: impl Fn(&[f64]) -> f64,
    cfg: &OrbitConfig,
) -> (Vec<f64>, f64, f64) {
    let mut best_x = starts[0].clone();
    let mut best_v = f64::INFINITY;
    let mut best_grad = f64::INFINITY;
    for start in starts {
        let run = nelder_mead::minimize(&f, start, &cfg.nelder_mead);
        let g = gradient_norm(&f, &run.x, GRADIENT_STEP);
        best_grad = best_grad.min(g);
        if run.value < best_v {
            best_v = run.value;
            best_x = run.x;
        }
    }
    (best_x, best_v, best_grad)
}

fn seed_points(dim: usize, cfg: &OrbitConfig) -> Vec<Vec<f64>> {
    let g = cfg.grid_points.max(1);
    let axis = |slot: usize, k: usize| -> f64 {
        // (alpha, beta) cover [0, 2π) without the duplicate endpoint;
        // theta covers [0, π/2] inclusive.
        if slot % 3 == 2 {
            if g == 1 {
                FRAC_PI_4
            } else {
                FRAC_PI_2 * k as f64 / (g - 1) as f64
            }
        } else {
            2.0 * PI * k as f64 / g as f64
        }
    };
    let total = g.pow(dim as u32);
    let decode = |mut idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for (slot, v) in x.iter_mut().enumerate() {
            *v = axis(slot, idx % g);
            idx /= g;
        }
        x
    };
    if dim == 3 || total <= cfg.asymmetric_grid_samples {
        (0..total).map(decode).collect()
    } else {
        let mut rng = seeded_rng(cfg.seed);
        let mut picks = sample(&mut rng, total, cfg.asymmetric_grid_samples).into_vec();
        picks.sort_unstable();
        picks.into_iter().map(decode).collect()
    }
}

const GRADIENT_STEP: f64 = 1e-5;

fn gradient(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn gradient_norm(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    libm::sqrt(gradient(f, x, h).iter().map(|g| g * g).sum())
}

/// Output of [`two_step_minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStepResult {
    /// Global extrema; `argmin`/`argmax` refer to `min_spec`/`max_spec`.
    pub orbit: OrbitOptResult,
    pub min_spec: BellDiagonalSpec,
    pub max_spec: BellDiagonalSpec,
    /// Bell-diagonal targets visited by the outer step.
    pub candidates: Vec<BellDiagonalSpec>,
}

/// Outer minimization over Bell-diagonal targets with concurrence `target`,
/// inner minimization over the local-unitary orbit of each.
///
/// With `λ = (1+C)/2` the admissible weight vectors form a polytope whose
/// vertices are the permutations of `(λ, 1-λ, 0, 0)`. The inner minimum is
/// concave in the weights (a minimum of linear functions) and the inner
/// maximum convex, so both outer extrema sit on those vertices. With
/// `enforce_spectrum` the candidates are instead the arrangements of σ's
/// own spectrum, which must already have concurrence `target`.
pub fn two_step_minimize(
    sigma: &DensityMatrix,
    target: f64,
    enforce_spectrum: bool,
    cfg: &OrbitConfig,
) -> Result<TwoStepResult> {
    if !(0.0..=1.0).contains(&target) || !target.is_finite() {
        return Err(Error::BadConcurrence(target));
    }
    sigma.require_two_qubit()?;
    let candidates = if enforce_spectrum {
        spectrum_candidates(sigma, target)?
    } else {
        vertex_candidates(target)
    };

    let mut best: Option<(OrbitOptResult, BellDiagonalSpec, BellDiagonalSpec)> = None;
    let mut all_converged = true;
    for (i, spec) in candidates.iter().enumerate() {
        let inner_cfg = OrbitConfig {
            seed: cfg.seed.wrapping_add(i as u64),
            ..*cfg
        };
        let r = minimize_overlap_orbit(&bell_diagonal(spec), sigma, false, &inner_cfg)?;
        all_converged &= r.converged;
        best = Some(match best {
            None => (r, *spec, *spec),
            Some((mut acc, mut lo, mut hi)) => {
                if r.min_value < acc.min_value {
                    acc.min_value = r.min_value;
                    acc.argmin = r.argmin;
                    acc.min_gradient_norm = r.min_gradient_norm;
                    lo = *spec;
                }
                if r.max_value > acc.max_value {
                    acc.max_value = r.max_value;
                    acc.argmax = r.argmax;
                    acc.max_gradient_norm = r.max_gradient_norm;
                    hi = *spec;
                }
                (acc, lo, hi)
            }
        });
    }
    let (mut orbit, min_spec, max_spec) = best.expect("candidate list is never empty");
    orbit.converged = all_converged;
    Ok(TwoStepResult {
        orbit,
        min_spec,
        max_spec,
        candidates,
    })
}

fn vertex_candidates(target: f64) -> Vec<BellDiagonalSpec> {
    let lambda = 0.5 * (1.0 + target);
    distinct_arrangements([lambda, 1.0 - lambda, 0.0, 0.0])
        .into_iter()
        .map(|p| BellDiagonalSpec::new(p).expect("vertex weights are a distribution"))
        .collect()
}

fn spectrum_candidates(sigma: &DensityMatrix, target: f64) -> Result<Vec<BellDiagonalSpec>> {
    let ev = sigma.eigenvalues();
    let mut p = [0.0; 4];
    for (slot, v) in p.iter_mut().zip(&ev) {
        *slot = v.max(0.0);
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let spec = BellDiagonalSpec::new(p).map_err(|_| Error::InfeasibleSpectrum { target })?;
    if (bell_diagonal_concurrence(&spec) - target).abs() > Tolerances::DEFAULT.functional {
        return Err(Error::InfeasibleSpectrum { target });
    }
    Ok(distinct_arrangements(p)
        .into_iter()
        .map(|q| BellDiagonalSpec::new(q).expect("permutation of a distribution"))
        .collect())
}

/// All orderings of `p`, with near-equal entries (1e-12) treated as equal.
fn distinct_arrangements(p: [f64; 4]) -> Vec<[f64; 4]> {
    let mut out: Vec<[f64; 4]> = Vec::new();
    for perm in permutations4() {
        let q = [p[perm[0]], p[perm[1]], p[perm[2]], p[perm[3]]];
        let seen = out
            .iter()
            .any(|r| r.iter().zip(&q).all(|(a, b)| (a - b).abs() <= 1e-12));
        if !seen {
            out.push(q);
        }
    }
    out
}

/// The 24 permutations of `0..4` in lexicographic order.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Rearrangement lower bound on `min_U Tr(U ρ U^H σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBound {
    pub value: f64,
    pub rho_spectrum_ascending: Vec<f64>,
    pub sigma_spectrum_descending: Vec<f64>,
}

/// `Σ_i λ↑_i(ρ) λ↓_i(σ)`.
///
/// `|u_ij|^2` of any unitary is doubly stochastic, a linear functional over
/// the Birkhoff polytope is minimized at a permutation, and pairing ascending
/// with descending spectra is the minimizing permutation.
pub fn spectral_lower_bound(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<SpectralBound> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let asc = hermitian_eig(rho.matrix())?.values;
    let mut desc = hermitian_eig(sigma.matrix())?.values;
    desc.reverse();
    let value = asc.iter().zip(&desc).map(|(a, b)| a * b).sum::<f64>();
    Ok(SpectralBound {
        value,
        rho_spectrum_ascending: asc,
        sigma_spectrum_descending: desc,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Min,
    Max,
    Saddle,
    Degenerate,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Min => "min",
            Classification::Max => "max",
            Classification::Saddle => "saddle",
            Classification::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryPointReport {
    pub point: Vec<f64>,
    pub gradient_norm: f64,
    pub hessian_eigenvalues: Vec<f64>,
    pub classification: Classification,
}

const HESSIAN_STEP: f64 = 1e-4;

/// Finite-difference gradient (step 1e-5) and Hessian (step 1e-4) at `point`,
/// classified by Hessian eigenvalue signs. Any eigenvalue with magnitude
/// below the degeneracy tolerance makes the point degenerate.
pub fn classify_stationary(
    objective: impl Fn(&[f64]) -> f64,
    point: &[f64],
) -> Result<StationaryPointReport> {
    let checked = |x: &[f64]| -> Result<f64> {
        let v = objective(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::ObjectiveNotFinite)
        }
    };
    let n = point.len();
    let f0 = checked(point)?;
    let mut probe = point.to_vec();

    let mut grad = vec![0.0; n];
    for i in 0..n {
        probe[i] = point[i] + GRADIENT_STEP;
        let up = checked(&probe)?;
        probe[i] = point[i] - GRADIENT_STEP;
        let down = checked(&probe)?;
        probe[i] = point[i];
        grad[i] = (up - down) / (2.0 * GRADIENT_STEP);
    }

    let h = HESSIAN_STEP;
    let mut hess = ComplexMatrix::zeros(n);
    for i in 0..n {
        probe[i] = point[i] + h;
        let up = checked(&probe)?;
        probe[i] = point[i] - h;
        let down = checked(&probe)?;
        probe[i] = point[i];
        hess[(i, i)] = ((up - 2.0 * f0 + down) / (h * h)).into();
        for j in (i + 1)..n {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                probe[i] = point[i] + si * h;
                probe[j] = point[j] + sj * h;
                let v = checked(&probe);
                probe[i] = point[i];
                probe[j] = point[j];
                v
            };
            let hij = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?)
                / (4.0 * h * h);
            hess[(i, j)] = hij.into();
            hess[(j, i)] = hij.into();
        }
    }
    let eig = hermitian_eig(&hess)?.values;
    let tol = Tolerances::DEFAULT.degeneracy;
    let classification = if eig.iter().any(|l| l.abs() < tol) {
        Classification::Degenerate
    } else if eig.iter().all(|&l| l > 0.0) {
        Classification::Min
    } else if eig.iter().all(|&l| l < 0.0) {
        Classification::Max
    } else {
        Classification::Saddle
    };
    Ok(StationaryPointReport {
        point: point.to_vec(),
        gradient_norm: libm::sqrt(grad.iter().map(|g| g * g).sum()),
        hessian_eigenvalues: eig,
        classification,
    })
}

/// Parameters of the symmetric separable example.
///
/// The initial state is `σ = diag(p1, r2, r3, 1-p1-r2-r3)` in the
/// computational basis; the target is Bell-diagonal with weights
/// `(b1, b2, b3, e1)` on `(Φ+, Φ-, Ψ+, Ψ-)` where `b1 = 1 - b2 - b3 - e1`,
/// rotated by `U⊗U` with `U = su2(alpha, beta, gamma)`. This assignment of
/// symbols is an inference, not something fixed by an external source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1Params {
    pub p1: f64,
    pub r2: f64,
    pub r3: f64,
    pub b2: f64,
    pub b3: f64,
    pub e1: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Coordinates of [`Example1Params`] that can be scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example1Axis {
    P1,
    R2,
    R3,
    B2,
    B3,
    E1,
    Alpha,
    Beta,
    Gamma,
}

impl Example1Axis {
    pub fn name(self) -> &'static str {
        match self {
            Example1Axis::P1 => "p1",
            Example1Axis::R2 => "r2",
            Example1Axis::R3 => "r3",
            Example1Axis::B2 => "b2",
            Example1Axis::B3 => "b3",
            Example1Axis::E1 => "e1",
            Example1Axis::Alpha => "alpha",
            Example1Axis::Beta => "beta",
            Example1Axis::Gamma => "gamma",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "p1" => Example1Axis::P1,
            "r2" => Example1Axis::R2,
            "r3" => Example1Axis::R3,
            "b2" => Example1Axis::B2,
            "b3" => Example1Axis::B3,
            "e1" => Example1Axis::E1,
            "alpha" => Example1Axis::Alpha,
            "beta" => Example1Axis::Beta,
            "gamma" => Example1Axis::Gamma,
            _ => return None,
        })
    }
}

impl Default for Example1Params {
    /// Figure-analog configuration: `e1 = 0.75`, `r2 = 0.2`, `r3 = 0.1`.
    fn default() -> Self {
        Self {
            p1: 0.35,
            r2: 0.2,
            r3: 0.1,
            b2: 0.05,
            b3: 0.05,
            e1: 0.75,
            alpha: 0.0,
            beta: 0.0,
            gamma: PI / 8.0,
        }
    }
}

impl Example1Params {
    /// A point with `sin²(2γ) = 1` and `r2 + r3 = 1/2`, where the angle
    /// dependence of the objective cancels.
    pub fn degenerate_branch(p1: f64, r2: f64, b2: f64, b3: f64, e1: f64, alpha: f64, beta: f64) -> Self {
        Self {
            p1,
            r2,
            r3: 0.5 - r2,
            b2,
            b3,
            e1,
            alpha,
            beta,
            gamma: FRAC_PI_4,
        }
    }

    pub fn get(&self, axis: Example1Axis) -> f64 {
        match axis {
            Example1Axis::P1 => self.p1,
            Example1Axis::R2 => self.r2,
            Example1Axis::R3 => self.r3,
            Example1Axis::B2 => self.b2,
            Example1Axis::B3 => self.b3,
            Example1Axis::E1 => self.e1,
            Example1Axis::Alpha => self.alpha,
            Example1Axis::Beta => self.beta,
            Example1Axis::Gamma => self.gamma,
        }
    }

    pub fn set(&mut self, axis: Example1Axis, v: f64) {
        match axis {
            Example1Axis::P1 => self.p1 = v,
            Example1Axis::R2 => self.r2 = v,
            Example1Axis::R3 => self.r3 = v,
            Example1Axis::B2 => self.b2 = v,
            Example1Axis::B3 => self.b3 = v,
            Example1Axis::E1 => self.e1 = v,
            Example1Axis::Alpha => self.alpha = v,
            Example1Axis::Beta => self.beta = v,
            Example1Axis::Gamma => self.gamma = v,
        }
    }

    pub fn sigma(&self) -> Result<DensityMatrix> {
        DensityMatrix::computational_diagonal([self.p1, self.r2, self.r3, 1.0 - self.p1 - self.r2 - self.r3])
    }

    pub fn bell_spec(&self) -> Result<BellDiagonalSpec> {
        BellDiagonalSpec::new([1.0 - self.b2 - self.b3 - self.e1, self.b2, self.b3, self.e1])
    }

    pub fn unitary_params(&self) -> LocalUnitaryParams {
        LocalUnitaryParams::new(self.alpha, self.beta, self.gamma)
    }

    /// The trace objective, evaluated from the matrices.
    pub fn objective(&self) -> Result<f64> {
        let sigma = self.sigma()?;
        let target = bell_diagonal(&self.bell_spec()?);
        Ok(OrbitObjective::new(&target, &sigma)?.eval_pair(&LocalPair::symmetric(self.unitary_params())))
    }

    /// The objective as a function of `(alpha, beta, gamma)` with the
    /// weights held fixed.
    pub fn angle_objective(&self) -> Result<impl Fn(&[f64]) -> f64> {
        let objective = OrbitObjective::new(&bell_diagonal(&self.bell_spec()?), &self.sigma()?)?;
        Ok(move |x: &[f64]| objective.eval(x))
    }
}

/// An evenly spaced grid axis, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub param: Example1Axis,
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(param: Example1Axis, start: f64, end: f64, points: usize) -> Self {
        Self {
            param,
            start,
            end,
            points,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.points == 1 {
            self.start
        } else {
            self.start + (self.end - self.start) * k as f64 / (self.points - 1) as f64
        }
    }

    fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::BadGrid("axis needs at least one point"));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::BadGrid("axis bounds must be finite"));
        }
        if self.end < self.start {
            return Err(Error::BadGrid("axis end precedes start"));
        }
        Ok(())
    }
}

/// A sample of the objective on a two-axis grid; rows are `(x, y, value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceTable {
    pub axis_names: [String; 2],
    pub rows: Vec<[f64; 3]>,
    pub min: [f64; 3],
    pub max: [f64; 3],
}

/// Evaluates the example objective on the product grid `x × y`, all other
/// parameters taken from `base`.
pub fn example1_scan(base: &Example1Params, x: GridAxis, y: GridAxis) -> Result<SurfaceTable> {
    x.validate()?;
    y.validate()?;
    if x.param == y.param {
        return Err(Error::BadGrid("axes must differ"));
    }
    let mut rows = Vec::with_capacity(x.points * y.points);
    for i in 0..x.points {
        for j in 0..y.points {
            let mut p = *base;
            p.set(x.param, x.value(i));
            p.set(y.param, y.value(j));
            let v = match p.objective() {
                Ok(v) => v,
                Err(Error::BadProbabilityVector(_)) => {
                    return Err(Error::BadGrid("grid leaves the probability simplex"))
                }
                Err(e) => return Err(e),
            };
            rows.push([x.value(i), y.value(j), v]);
        }
    }
    let pick = |better: fn(f64, f64) -> bool| {
        rows.iter()
            .copied()
            .reduce(|a, b| if better(b[2], a[2]) { b } else { a })
            .expect("grid is non-empty")
    };
    let min = pick(|a, b| a < b);
    let max = pick(|a, b| a > b);
    Ok(SurfaceTable {
        axis_names: [String::from(x.param.name()), String::from(y.param.name())],
        rows,
        min,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{self, seeded_rng, uniform};
    use crate::linalg::{kron, ONE, ZERO};
    use crate::qstate::bell_state;

    fn ket00() -> DensityMatrix {
        DensityMatrix::from_pure(&[ONE, ZERO, ZERO, ZERO], (2, 2)).unwrap()
    }

    fn quick() -> OrbitConfig {
        OrbitConfig {
            restarts: 8,
            ..OrbitConfig::default()
        }
    }

    #[test]
    fn overlap_examples() {
        let mm = DensityMatrix::maximally_mixed((2, 2));
        let rho = random::random_density_matrix((2, 2), 3, 1).unwrap();
        assert!((overlap(&rho, &mm).unwrap() - 0.25).abs() < 1e-15);
        assert!(overlap(&bell_state(0).unwrap(), &bell_state(1).unwrap()).unwrap().abs() < 1e-15);
        let purity: f64 = rho.eigenvalues().iter().map(|l| l * l).sum();
        assert!((overlap(&rho, &rho).unwrap() - purity).abs() < 1e-12);
        assert_eq!(overlap(&rho, &mm).unwrap(), overlap(&mm, &rho).unwrap());
        assert!(overlap(&rho, &DensityMatrix::maximally_mixed((3, 3))).is_err());
    }

    #[test]
    fn maximally_mixed_orbit_is_flat() {
        let target = random::random_density_matrix((2, 2), 4, 2).unwrap();
        let mm = DensityMatrix::maximally_mixed((2, 2));
        let r = minimize_overlap_orbit(&target, &mm, false, &quick()).unwrap();
        assert!((r.min_value - 0.25).abs() < 1e-12);
        assert!((r.max_value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bell_versus_product_bracket() {
        let r = minimize_overlap_orbit(&bell_state(0).unwrap(), &ket00(), false, &OrbitConfig::default()).unwrap();
        assert!(r.min_value.abs() < 1e-6, "{r:?}");
        assert!((r.max_value - 0.5).abs() < 1e-6, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn self_overlap_maximum_at_identity() {
        let spec = BellDiagonalSpec::new([0.7, 0.1, 0.1, 0.1]).unwrap();
        let rho = bell_diagonal(&spec);
        let r = minimize_overlap_orbit(&rho, &rho, false, &quick()).unwrap();
        assert!((r.max_value - 0.52).abs() < 1e-9);
        let at_identity = OrbitObjective::new(&rho, &rho).unwrap().eval_pair(&LocalPair::default());
        assert!((at_identity - 0.52).abs() < 1e-12);
    }

    #[test]
    fn zero_restarts_rejected() {
        let cfg = OrbitConfig {
            restarts: 0,
            ..OrbitConfig::default()
        };
        assert_eq!(
            minimize_overlap_orbit(&ket00(), &ket00(), true, &cfg).unwrap_err(),
            Error::BadRestarts
        );
    }

    #[test]
    fn optimizer_brackets_random_samples() {
        let mut rng = seeded_rng(21);
        for inst in 0..3u64 {
            let t = random::random_density_matrix((2, 2), 2, 100 + inst).unwrap();
            let s = random::random_density_matrix((2, 2), 3, 200 + inst).unwrap();
            let r = minimize_overlap_orbit(&t, &s, false, &OrbitConfig::with_seed(inst)).unwrap();
            let obj = OrbitObjective::new(&t, &s).unwrap();
            for _ in 0..2000 {
                let ua = random::haar_unitary_with_rng(2, &mut rng);
                let ub = random::haar_unitary_with_rng(2, &mut rng);
                let v = obj.eval_unitary(&kron(&ua, &ub));
                assert!(r.min_value <= v + 1e-12 && v <= r.max_value + 1e-12);
            }
        }
    }

    #[test]
    fn two_step_pure_product_to_bell() {
        let r = two_step_minimize(&ket00(), 1.0, false, &quick()).unwrap();
        assert_eq!(r.candidates.len(), 4);
        assert!(r.orbit.min_value.abs() < 1e-6);
        assert!((r.orbit.max_value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn two_step_infeasible_spectrum() {
        let mm = DensityMatrix::maximally_mixed((2, 2));
        assert!(matches!(
            two_step_minimize(&mm, 0.3, true, &quick()),
            Err(Error::InfeasibleSpectrum { .. })
        ));
        assert!(two_step_minimize(&mm, 1.5, false, &quick()).is_err());
    }

    #[test]
    fn two_step_with_matched_spectrum() {
        let sigma = bell_diagonal(&BellDiagonalSpec::new([0.7, 0.1, 0.1, 0.1]).unwrap());
        let r = two_step_minimize(&sigma, 0.4, true, &quick()).unwrap();
        assert_eq!(r.candidates.len(), 4);
        assert!(r.orbit.min_value <= 0.52 + 1e-12);
        assert!((r.orbit.max_value - 0.52).abs() < 1e-9);
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(vertex_candidates(1.0).len(), 4);
        assert_eq!(vertex_candidates(0.0).len(), 6);
        assert_eq!(vertex_candidates(0.4).len(), 12);
        for spec in vertex_candidates(0.4) {
            assert!((bell_diagonal_concurrence(&spec) - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn spectral_bound_examples() {
        let mm = DensityMatrix::maximally_mixed((2, 2));
        assert!((spectral_lower_bound(&mm, &mm).unwrap().value - 0.25).abs() < 1e-15);
        let p = bell_state(0).unwrap();
        assert!(spectral_lower_bound(&p, &ket00()).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn spectral_bound_equals_permutation_minimum() {
        let perms = permutations4();
        assert_eq!(perms.len(), 24);
        for seed in 0..200 {
            let rho = random::random_density_matrix((2, 2), 4, seed).unwrap();
            let sigma = random::random_density_matrix((2, 2), 4, seed + 500).unwrap();
            let b = spectral_lower_bound(&rho, &sigma).unwrap();
            let lr = rho.eigenvalues();
            let ls = sigma.eigenvalues();
            let brute = perms
                .iter()
                .map(|p| (0..4).map(|i| lr[p[i]] * ls[i]).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            assert!((b.value - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn classify_simple_quadratics() {
        let r = classify_stationary(|x| x[0] * x[0] + x[1] * x[1], &[0.0, 0.0]).unwrap();
        assert_eq!(r.classification, Classification::Min);
        assert!(r.gradient_norm < 1e-12);
        let r = classify_stationary(|x| x[0] * x[0] - x[1] * x[1], &[0.0, 0.0]).unwrap();
        assert_eq!(r.classification, Classification::Saddle);
        let r = classify_stationary(|x| -(x[0] * x[0]) - 2.0 * x[1] * x[1], &[0.0, 0.0]).unwrap();
        assert_eq!(r.classification, Classification::Max);
        let r = classify_stationary(|x| x[0] * x[0], &[0.0, 0.0]).unwrap();
        assert_eq!(r.classification, Classification::Degenerate);
        assert_eq!(
            classify_stationary(|x| 1.0 / x[0], &[0.0]).unwrap_err(),
            Error::ObjectiveNotFinite
        );
    }

    #[test]
    fn example1_degenerate_branch_is_stationary() {
        let mut rng = seeded_rng(3);
        for _ in 0..50 {
            let e1 = uniform(&mut rng, 0.5, 0.8);
            let b2 = uniform(&mut rng, 0.0, (1.0 - e1) / 2.0);
            let b3 = uniform(&mut rng, 0.0, (1.0 - e1) / 2.0);
            let p = Example1Params::degenerate_branch(
                uniform(&mut rng, 0.0, 0.5),
                uniform(&mut rng, 0.0, 0.5),
                b2,
                b3,
                e1,
                uniform(&mut rng, 0.0, 2.0 * PI),
                uniform(&mut rng, 0.0, 2.0 * PI),
            );
            let f = p.angle_objective().unwrap();
            let r = classify_stationary(&f, &[p.alpha, p.beta, p.gamma]).unwrap();
            assert!(r.gradient_norm < 1e-5, "{r:?}");
            assert_eq!(r.classification, Classification::Degenerate);
        }
    }

    #[test]
    fn example1_scan_shapes() {
        let base = Example1Params::default();
        let one = example1_scan(
            &base,
            GridAxis::new(Example1Axis::B2, 0.05, 0.05, 1),
            GridAxis::new(Example1Axis::B3, 0.05, 0.05, 1),
        )
        .unwrap();
        assert_eq!(one.rows.len(), 1);
        assert!((one.rows[0][2] - base.objective().unwrap()).abs() < 1e-15);

        let flat = Example1Params {
            p1: 0.25,
            r2: 0.25,
            r3: 0.25,
            ..base
        };
        let s = example1_scan(
            &flat,
            GridAxis::new(Example1Axis::B2, 0.0, 0.1, 3),
            GridAxis::new(Example1Axis::B3, 0.0, 0.1, 3),
        )
        .unwrap();
        assert!(s.rows.iter().all(|r| (r[2] - 0.25).abs() < 1e-14));

        let bad = example1_scan(
            &base,
            GridAxis::new(Example1Axis::B2, 0.0, 0.5, 3),
            GridAxis::new(Example1Axis::B3, 0.0, 0.5, 3),
        );
        assert!(matches!(bad, Err(Error::BadGrid(_))));
        assert!(example1_scan(
            &base,
            GridAxis::new(Example1Axis::B2, 0.0, 0.1, 0),
            GridAxis::new(Example1Axis::B3, 0.0, 0.1, 2),
        )
        .is_err());
    }
}
