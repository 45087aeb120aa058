//! Concurrence of two-qubit states and the pure-state generalization.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, psd_sqrt, singular_values, vec_norm, ComplexMatrix, Subsystem, C64,
};
use crate::qstate::{sl2c_unnormalized, spin_flip, BellDiagonalSpec, DensityMatrix, Sl2cParams};
use crate::tolerance::Tolerances;

/// Wootters concurrence together with the R-matrix spectrum it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Eigenvalues of `sqrt(sqrt(ρ) ρ̃ sqrt(ρ))`, descending.
    pub r_eigenvalues: [f64; 4],
}

/// `max(0, λ1 - λ2 - λ3 - λ4)`.
///
/// The λ are the eigenvalues of `R = sqrt(sqrt(ρ) ρ̃ sqrt(ρ))`. Since
/// `sqrt(ρ̃)` is the spin flip of `sqrt(ρ)`, they equal the singular values of
/// `sqrt(ρ) sqrt(ρ̃)`, which keeps the small ones accurate for nearly pure states.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    rho.require_two_qubit()?;
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let sqrt_flipped = spin_flip(&DensityMatrix::from_matrix_unchecked(sqrt_rho.clone(), (2, 2)))?;
    let sv = singular_values(&(&sqrt_rho * sqrt_flipped.matrix()));
    let mut lambdas = [0.0; 4];
    lambdas.copy_from_slice(&sv);
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult {
        value,
        r_eigenvalues: lambdas,
    })
}

/// Same quantity through the eigenvalues of the Hermitian matrix
/// `sqrt(ρ) ρ̃ sqrt(ρ)`. Square roots of tiny eigenvalues limit its accuracy
/// to about 1e-8 on pure states.
pub fn concurrence_via_hermitian_similarity(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    rho.require_two_qubit()?;
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let flipped = spin_flip(rho)?;
    let m = (&(&sqrt_rho * flipped.matrix()) * &sqrt_rho).hermitian_part();
    let eig = hermitian_eig(&m)?;
    let mut lambdas = [0.0; 4];
    for (slot, mu) in lambdas.iter_mut().zip(eig.values.iter().rev()) {
        *slot = libm::sqrt(mu.max(0.0));
    }
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult {
        value,
        r_eigenvalues: lambdas,
    })
}

/// `max(0, 2 max_i p_i - 1)`.
pub fn bell_diagonal_concurrence(spec: &BellDiagonalSpec) -> f64 {
    (2.0 * spec.max_weight() - 1.0).max(0.0)
}

/// Normalization convention for [`generalized_concurrence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConcurrenceNorm {
    /// `sqrt(d/(d-1) (1 - Tr ρ_M²))`, equal to 1 on maximally entangled states.
    #[default]
    Regularized,
    /// `sqrt(2 (1 - Tr ρ_M²))`.
    Unregularized,
}

/// Pure-state concurrence from the purity of the smaller marginal.
pub fn generalized_concurrence(psi: &[C64], dims: (usize, usize), norm: ConcurrenceNorm) -> Result<f64> {
    let (da, db) = dims;
    if psi.len() != da * db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: psi.len(),
        });
    }
    let d_min = da.min(db);
    if d_min < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: d_min,
        });
    }
    let n = vec_norm(psi);
    if (n - 1.0).abs() > Tolerances::DEFAULT.structural {
        return Err(Error::NotNormalized { norm: n });
    }
    let keep = if da <= db {
        Subsystem::First
    } else {
        Subsystem::Second
    };
    let reduced = partial_trace(&ComplexMatrix::outer(psi), keep, dims)?;
    let purity = reduced.trace_product(&reduced).re;
    let linear_entropy = (1.0 - purity).max(0.0);
    let factor = match norm {
        ConcurrenceNorm::Regularized => d_min as f64 / (d_min as f64 - 1.0),
        ConcurrenceNorm::Unregularized => 2.0,
    };
    Ok(libm::sqrt(factor * linear_entropy))
}

/// Both sides of the SL(2,C) rule `C(ρ') = C(ρ) |det A| |det B| / Tr((A⊗B)ρ(A⊗B)^H)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformCheck {
    /// Concurrence of the transformed, renormalized state.
    pub lhs: f64,
    /// The rule's prediction from `C(ρ)`.
    pub rhs: f64,
}

pub fn concurrence_transform_check(
    rho: &DensityMatrix,
    a: &Sl2cParams,
    b: &Sl2cParams,
) -> Result<TransformCheck> {
    let (image, trace) = sl2c_unnormalized(rho, a, b)?;
    let transformed =
        DensityMatrix::from_matrix_unchecked(image.scale_real(1.0 / trace).hermitian_part(), (2, 2));
    let lhs = concurrence(&transformed)?.value;
    let scale = a.determinant().norm() * b.determinant().norm() / trace;
    let rhs = concurrence(rho)?.value * scale;
    Ok(TransformCheck { lhs, rhs })
}

/// Concurrence of a pure two-qubit vector, `2 |ad - bc|`.
pub fn pure_concurrence(psi: &[C64]) -> Result<f64> {
    if psi.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: psi.len(),
        });
    }
    Ok((2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm()).min(1.0))
}

/// Schmidt-form vector `cos t |00> + sin t |11>` with concurrence `c`.
pub fn schmidt_state(c: f64) -> Result<Vec<C64>> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::BadConcurrence(c));
    }
    let t = 0.5 * libm::asin(c);
    let (s, co) = libm::sincos(t);
    Ok(alloc::vec![
        C64::new(co, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
    ])
}
