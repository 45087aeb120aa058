//! Seeded random states and unitaries.
//!
//! Density matrices come from the induced Ginibre measure
//! `G G^H / Tr(G G^H)` with `G` of shape `dim x rank`; Haar unitaries from a
//! QR decomposition of a square Ginibre matrix whose `R` has positive real
//! diagonal. Every generator takes either a seed or an explicit RNG.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{vec_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts each N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// A `rows x cols` Ginibre matrix, row-major.
pub fn ginibre_rect<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<C64> {
    (0..rows * cols).map(|_| complex_normal(rng)).collect()
}

pub fn ginibre_square<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre_rect(dim, dim, rng);
    ComplexMatrix::from_fn(dim, |i, j| g[i * dim + j])
}

pub fn random_density_matrix(dims: (usize, usize), rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_matrix_with_rng(dims, rank, &mut seeded_rng(seed))
}

pub fn random_density_matrix_with_rng<R: Rng + ?Sized>(
    dims: (usize, usize),
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let dim = dims.0 * dims.1;
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let g = ginibre_rect(dim, rank, rng);
    let mut m = ComplexMatrix::from_fn(dim, |i, j| {
        (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum()
    });
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr).hermitian_part();
    Ok(DensityMatrix::from_matrix_unchecked(m, dims))
}

pub fn random_pure_state(dim: usize, seed: u64) -> Vec<C64> {
    random_pure_state_with_rng(dim, &mut seeded_rng(seed))
}

pub fn random_pure_state_with_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let mut v = ginibre_rect(dim, 1, rng);
    let n = vec_norm(&v);
    for z in &mut v {
        *z /= n;
    }
    v
}

pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with_rng(dim, &mut seeded_rng(seed))
}

/// Gram-Schmidt QR (with one reorthogonalization pass) of a Ginibre matrix.
/// The implied `R` has positive real diagonal, which makes `Q` Haar.
pub fn haar_unitary_with_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre_rect(dim, dim, rng);
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g[i * dim + j]).collect())
        .collect();
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..dim {
                    let qk = cols[k][i];
                    cols[j][i] -= proj * qk;
                }
            }
        }
        let n = vec_norm(&cols[j]);
        for z in &mut cols[j] {
            *z /= n;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random element of SL(2,C): a 2x2 Ginibre matrix divided by a square root
/// of its determinant.
pub fn random_sl2c_matrix<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    loop {
        let g = ginibre_square(2, rng);
        let det = g.determinant_2x2();
        if det.norm() > 1e-6 {
            return g.scale(C64::new(1.0, 0.0) / det.sqrt());
        }
    }
}

/// Uniform angle in `[lo, hi)`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
