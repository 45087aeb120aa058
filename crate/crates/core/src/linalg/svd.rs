use alloc::vec::Vec;

use super::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 60;

/// Singular values, descending, by one-sided (Hestenes) Jacobi.
///
/// Columns are orthogonalized pairwise; the singular values are the final
/// column norms. Small singular values come out with absolute error of order
/// `eps * |A|`, without the square-root amplification of a Gram-matrix route.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).collect()).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for k in 0..n {
                    let a = cols[i][k];
                    let b = cols[j][k] * phase.conj();
                    cols[i][k] = a * c - b * s;
                    cols[j][k] = a * s + b * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| libm::sqrt(c.iter().map(|z| z.norm_sqr()).sum::<f64>()))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, random};

    #[test]
    fn matches_gram_eigenvalues() {
        for seed in 0..200 {
            let mut rng = random::seeded_rng(seed);
            let a = random::ginibre_square(4, &mut rng);
            let sv = singular_values(&a);
            let gram = &a.adjoint() * &a;
            let mut ev = hermitian_eig(&gram.hermitian_part()).unwrap().values;
            ev.reverse();
            for (s, e) in sv.iter().zip(&ev) {
                assert!((s * s - e).abs() < 1e-10 * (1.0 + e.abs()));
            }
        }
    }

    #[test]
    fn rank_one_has_exact_zeros() {
        let v = random::random_pure_state(4, 3);
        let w = random::random_pure_state(4, 4);
        let m = ComplexMatrix::from_fn(4, |i, j| v[i] * w[j].conj());
        let sv = singular_values(&m);
        assert!((sv[0] - 1.0).abs() < 1e-14);
        assert!(sv[1..].iter().all(|&s| s < 1e-14), "{sv:?}");
    }
}
