//! Tolerances shared by the whole crate.

/// Numerical thresholds. [`Tolerances::DEFAULT`] is used by every
/// operation that does not take an explicit record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity, unit trace, orthonormality and similar structural checks.
    pub structural: f64,
    /// Functional identities such as `S*S = m` or moment equality.
    pub functional: f64,
    /// Eigenvalues above `-psd_clamp` are clamped to zero before a square root.
    pub psd_clamp: f64,
    /// Smallest admissible normalization trace.
    pub normalization: f64,
    /// Gradient norm below which an optimizer restart counts as converged.
    pub gradient: f64,
    /// Hessian eigenvalues with magnitude below this are treated as zero.
    pub degeneracy: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        structural: 1e-10,
        functional: 1e-9,
        psd_clamp: 1e-8,
        normalization: 1e-12,
        gradient: 1e-7,
        degeneracy: 1e-6,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
