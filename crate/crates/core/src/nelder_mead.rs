//! Derivative-free Nelder-Mead simplex minimization.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    pub max_evals: usize,
    /// Stop when the spread of simplex values drops below this.
    pub f_tol: f64,
    /// ... and every vertex lies within this distance of the best one.
    pub x_tol: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Number of times to rebuild the simplex around the best point after
    /// convergence; guards against collapsed simplices.
    pub restarts: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-15,
            x_tol: 1e-9,
            initial_step: 0.25,
            restarts: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub fn minimize<F>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let mut best = x0.to_vec();
    let mut best_value = f(&best);
    let mut evals = 1;
    let mut converged = false;
    let mut step = cfg.initial_step;
    for _ in 0..=cfg.restarts {
        let budget = cfg.max_evals.saturating_sub(evals);
        if budget == 0 {
            break;
        }
        let run = run_simplex(&mut f, &best, best_value, step, budget, cfg);
        evals += run.evals;
        let improved = run.value < best_value;
        if run.value <= best_value {
            best = run.x;
            best_value = run.value;
        }
        converged = run.converged;
        if converged && !improved {
            break;
        }
        step = (step * 0.1).max(cfg.x_tol * 10.0);
    }
    NelderMeadResult {
        x: best,
        value: best_value,
        evals,
        converged,
    }
}

fn run_simplex<F>(
    f: &mut F,
    x0: &[f64],
    f0: f64,
    step: f64,
    budget: usize,
    cfg: &NelderMeadConfig,
) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    values.push(f0);
    let mut evals = 0;
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        values.push(f(&v));
        simplex.push(v);
        evals += 1;
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut converged = false;

    while evals < budget {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (ib, iw, isw) = (order[0], order[n], order[n - 1]);

        let spread = values[iw] - values[ib];
        let radius = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[ib])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= cfg.f_tol && radius <= cfg.x_tol {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &k in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[k]) {
                *c += x / n as f64;
            }
        }

        for j in 0..n {
            trial[j] = centroid[j] + REFLECT * (centroid[j] - simplex[iw][j]);
        }
        let fr = f(&trial);
        evals += 1;

        if fr < values[ib] {
            for j in 0..n {
                trial2[j] = centroid[j] + EXPAND * (trial[j] - centroid[j]);
            }
            let fe = f(&trial2);
            evals += 1;
            if fe < fr {
                simplex[iw].copy_from_slice(&trial2);
                values[iw] = fe;
            } else {
                simplex[iw].copy_from_slice(&trial);
                values[iw] = fr;
            }
            continue;
        }
        if fr < values[isw] {
            simplex[iw].copy_from_slice(&trial);
            values[iw] = fr;
            continue;
        }

        // contraction, outside if the reflection beat the worst point
        let outside = fr < values[iw];
        for j in 0..n {
            trial2[j] = if outside {
                centroid[j] + CONTRACT * (trial[j] - centroid[j])
            } else {
                centroid[j] + CONTRACT * (simplex[iw][j] - centroid[j])
            };
        }
        let fc = f(&trial2);
        evals += 1;
        if fc < fr.min(values[iw]) {
            simplex[iw].copy_from_slice(&trial2);
            values[iw] = fc;
            continue;
        }

        let best = simplex[ib].clone();
        for &k in &order[1..] {
            for j in 0..n {
                simplex[k][j] = best[j] + SHRINK * (simplex[k][j] - best[j]);
            }
            values[k] = f(&simplex[k]);
            evals += 1;
        }
    }

    let ib = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("simplex is non-empty");
    NelderMeadResult {
        x: simplex[ib].clone(),
        value: values[ib],
        evals,
        converged,
    }
}
