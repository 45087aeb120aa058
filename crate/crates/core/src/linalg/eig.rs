use alloc::vec::Vec;

use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `m = V diag(λ) V^H` of a Hermitian matrix.
///
/// Eigenvalues are ascending; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V diag(f(λ)) V^H`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn column(&self, k: usize) -> Vec<C64> {
        let n = self.values.len();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    hermitian_eig_with(m, &Tolerances::DEFAULT)
}

/// Cyclic complex Jacobi.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary on column `q`, then zeroes it with a real Givens rotation.
pub fn hermitian_eig_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEig> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.hermitian_defect();
    if defect > tol.structural {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let threshold = f64::EPSILON * f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // stable: equal eigenvalues keep their sweep order
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;

    // column q *= conj(phase), row q *= phase: a_pq becomes |a_pq|
    for k in 0..n {
        a[(k, q)] *= phase.conj();
    }
    for k in 0..n {
        a[(q, k)] *= phase;
    }
    for k in 0..n {
        v[(k, q)] *= phase.conj();
    }
    a[(p, q)] = C64::new(mag, 0.0);
    a[(q, p)] = C64::new(mag, 0.0);

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    // a <- J^T a J with J = [[c, s], [-s, c]] on (p, q)
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_with(m, &Tolerances::DEFAULT)
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-psd_clamp, 0)` are treated as zero.
pub fn psd_sqrt_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig_with(m, tol)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -tol.psd_clamp {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|l| libm::sqrt(l.max(0.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random;

    fn random_hermitian(seed: u64, n: usize) -> ComplexMatrix {
        let mut rng = random::seeded_rng(seed);
        random::ginibre_square(n, &mut rng).hermitian_part()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(e.values, [1.0; 4]);
    }

    #[test]
    fn diagonal_input_sorts_ascending() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0, 0.0])).unwrap();
        assert_eq!(e.values, [0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn reconstruction_and_orthonormality_on_random_hermitian() {
        for seed in 0..1000 {
            let h = random_hermitian(seed, 4);
            let e = hermitian_eig(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) < 1e-10, "seed {seed}");
            let vhv = &e.vectors.adjoint() * &e.vectors;
            assert!(vhv.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn larger_dimensions_converge() {
        for n in [1, 2, 3, 5, 8, 16] {
            let h = random_hermitian(n as u64, n);
            let e = hermitian_eig(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let s = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 1.0, 0.0, 9.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 1.0, 0.0, 3.0])) < 1e-15);
        let id = psd_sqrt(&ComplexMatrix::identity(4)).unwrap();
        assert!(id.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn sqrt_squares_back_on_random_psd() {
        for seed in 0..1000 {
            let rank = 1 + (seed as usize % 4);
            let m = random::random_density_matrix((2, 2), rank, seed).unwrap().into_matrix();
            let s = psd_sqrt(&m).unwrap();
            assert!((&s * &s).max_abs_diff(&m) < 1e-9, "seed {seed}");
            assert!(s.is_hermitian(1e-12));
        }
    }

    #[test]
    fn sqrt_clamps_tiny_negatives_and_rejects_real_ones() {
        let tiny = ComplexMatrix::from_real_diag(&[1.0, -1e-9]);
        let s = psd_sqrt(&tiny).unwrap();
        assert_eq!(s[(1, 1)].re, 0.0);
        let bad = ComplexMatrix::from_real_diag(&[1.0, -1e-6]);
        assert!(matches!(psd_sqrt(&bad), Err(Error::NotPsd { .. })));
    }
}
