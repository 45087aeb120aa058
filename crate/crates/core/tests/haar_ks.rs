//! Kolmogorov-Smirnov checks on the Haar sampler.
//!
//! For Haar-distributed U(2) both the determinant phase (over 2π) and
//! `|u_00|²` are uniform on [0, 1).

use cqsl_core::linalg::random::{haar_unitary_with_rng, seeded_rng};

const N: usize = 10_000;
/// Two-sided critical value at p = 0.01.
const D_CRIT_COEFF: f64 = 1.628;

fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let lo = x - i as f64 / n;
            let hi = (i + 1) as f64 / n - x;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

fn samples(seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = seeded_rng(seed);
    let mut phases = Vec::with_capacity(N);
    let mut weights = Vec::with_capacity(N);
    for _ in 0..N {
        let u = haar_unitary_with_rng(2, &mut rng);
        let det = u.determinant_2x2();
        phases.push(det.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU);
        weights.push(u[(0, 0)].norm_sqr());
    }
    (phases, weights)
}

#[test]
fn determinant_phase_is_uniform() {
    let d = ks_uniform(samples(2024).0);
    let crit = D_CRIT_COEFF / (N as f64).sqrt();
    assert!(d < crit, "D = {d}, critical {crit}");
}

#[test]
fn first_entry_weight_is_uniform() {
    let d = ks_uniform(samples(77).1);
    let crit = D_CRIT_COEFF / (N as f64).sqrt();
    assert!(d < crit, "D = {d}, critical {crit}");
}

#[test]
fn ks_statistic_detects_a_skewed_sample() {
    let skewed: Vec<f64> = (0..N).map(|i| ((i as f64 + 0.5) / N as f64).powi(2)).collect();
    assert!(ks_uniform(skewed) > D_CRIT_COEFF / (N as f64).sqrt());
}
