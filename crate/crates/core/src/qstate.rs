//! Density matrices, the Bell basis and the local-operation factories.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, pauli, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::tolerance::Tolerances;

/// Hermitian, positive semidefinite, unit-trace operator on a bipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: (usize, usize),
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace at the structural tolerance.
    pub fn new(mat: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        let tol = Tolerances::DEFAULT.structural;
        if dims.0 * dims.1 != mat.dim() {
            return Err(Error::DimensionMismatch {
                expected: dims.0 * dims.1,
                found: mat.dim(),
            });
        }
        let eig = hermitian_eig(&mat)?;
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::BadTrace { trace });
        }
        if eig.values[0] < -tol {
            return Err(Error::NotPsd {
                min_eigenvalue: eig.values[0],
            });
        }
        Ok(Self { mat, dims })
    }

    /// Wraps a matrix the caller has already validated.
    pub fn from_matrix_unchecked(mat: ComplexMatrix, dims: (usize, usize)) -> Self {
        debug_assert_eq!(dims.0 * dims.1, mat.dim());
        Self { mat, dims }
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn from_pure(psi: &[C64], dims: (usize, usize)) -> Result<Self> {
        if psi.len() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                expected: dims.0 * dims.1,
                found: psi.len(),
            });
        }
        let norm = vec_norm(psi);
        if (norm - 1.0).abs() > Tolerances::DEFAULT.structural {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            mat: ComplexMatrix::outer(psi),
            dims,
        })
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let d = dims.0 * dims.1;
        Self {
            mat: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
            dims,
        }
    }

    /// Two-qubit state diagonal in the computational basis.
    pub fn computational_diagonal(weights: [f64; 4]) -> Result<Self> {
        check_probabilities(&weights)?;
        Ok(Self {
            mat: ComplexMatrix::from_real_diag(&weights),
            dims: (2, 2),
        })
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self {
            mat: kron(&a.mat, &b.mat),
            dims: (a.dim(), b.dim()),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == (2, 2)
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.mat)
            .map(|e| e.values)
            .expect("density matrix is Hermitian")
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }

    /// `u rho u^H` for a unitary `u`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self {
            mat: self.mat.conjugate_by(u).hermitian_part(),
            dims: self.dims,
        }
    }

    /// Dominant eigenvector; for a pure state this is the state vector up to phase.
    pub fn leading_vector(&self) -> Vec<C64> {
        let e = hermitian_eig(&self.mat).expect("density matrix is Hermitian");
        e.column(self.dim() - 1)
    }

    pub(crate) fn require_two_qubit(&self) -> Result<()> {
        if self.is_two_qubit() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: 4,
                found: self.dim(),
            })
        }
    }
}

/// Angles of an SU(2) element, see [`su2`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalUnitaryParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl LocalUnitaryParams {
    pub const IDENTITY: Self = Self {
        alpha: 0.0,
        beta: 0.0,
        theta: 0.0,
    };

    pub fn new(alpha: f64, beta: f64, theta: f64) -> Self {
        Self { alpha, beta, theta }
    }

    pub fn from_slice(x: &[f64]) -> Self {
        Self::new(x[0], x[1], x[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.alpha, self.beta, self.theta]
    }

    /// Same matrix with `alpha, beta` in `[0, 2π)` and `theta` in `[0, π/2]`.
    ///
    /// A negative `cos θ` is absorbed into `alpha`, a negative `sin θ` into `beta`.
    pub fn canonical(self) -> Self {
        let (s, c) = libm::sincos(self.theta);
        let mut alpha = self.alpha;
        let mut beta = self.beta;
        if c < 0.0 {
            alpha += PI;
        }
        if s < 0.0 {
            beta += PI;
        }
        let theta = libm::atan2(s.abs(), c.abs()).clamp(0.0, FRAC_PI_2);
        Self {
            alpha: wrap_angle(alpha),
            beta: wrap_angle(beta),
            theta,
        }
    }
}

fn wrap_angle(x: f64) -> f64 {
    let tau = 2.0 * PI;
    let r = x - tau * libm::floor(x / tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// `[[e^{iα} cos θ, e^{iβ} sin θ], [-e^{-iβ} sin θ, e^{-iα} cos θ]]`.
pub fn su2(p: LocalUnitaryParams) -> ComplexMatrix {
    let (s, c) = libm::sincos(p.theta);
    let ea = C64::from_polar(1.0, p.alpha);
    let eb = C64::from_polar(1.0, p.beta);
    ComplexMatrix::from_2x2([[ea * c, eb * s], [-eb.conj() * s, ea.conj() * c]])
}

/// `su2(a) ⊗ su2(b)`.
pub fn local_unitary(a: LocalUnitaryParams, b: LocalUnitaryParams) -> ComplexMatrix {
    kron(&su2(a), &su2(b))
}

/// A 2x2 complex matrix with unit determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2cParams {
    m: ComplexMatrix,
}

impl Sl2cParams {
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::from_2x2(entries))
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
        let det = m.determinant_2x2();
        if (det - ONE).norm() > Tolerances::DEFAULT.structural {
            return Err(Error::NotUnitDeterminant {
                det_re: det.re,
                det_im: det.im,
            });
        }
        Ok(Self { m })
    }

    /// Rescales an invertible matrix by `1/sqrt(det)`.
    pub fn normalized(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
        let det = m.determinant_2x2();
        if det.norm() <= Tolerances::DEFAULT.normalization {
            return Err(Error::NotUnitDeterminant {
                det_re: det.re,
                det_im: det.im,
            });
        }
        Self::from_matrix(m.scale(ONE / det.sqrt()))
    }

    pub fn identity() -> Self {
        Self {
            m: ComplexMatrix::identity(2),
        }
    }

    pub fn from_su2(p: LocalUnitaryParams) -> Self {
        Self { m: su2(p) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn determinant(&self) -> C64 {
        self.m.determinant_2x2()
    }
}

/// Bell weights `(p1, p2, p3, p4)` on `(Φ+, Φ-, Ψ+, Ψ-)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalSpec {
    p: [f64; 4],
}

impl BellDiagonalSpec {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        check_probabilities(&p)?;
        Ok(Self { p })
    }

    pub fn weights(&self) -> [f64; 4] {
        self.p
    }

    pub fn max_weight(&self) -> f64 {
        self.p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn purity(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }
}

fn check_probabilities(p: &[f64; 4]) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0 || *x > 1.0) {
        return Err(Error::BadProbabilityVector("entries must lie in [0, 1]"));
    }
    if (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::BadProbabilityVector("entries must sum to 1"));
    }
    Ok(())
}

/// Bell vectors in the order `Φ+, Φ-, Ψ+, Ψ-`.
pub fn bell_vector(index: usize) -> Result<[C64; 4]> {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    Ok(match index {
        0 => [s, ZERO, ZERO, s],
        1 => [s, ZERO, ZERO, -s],
        2 => [ZERO, s, s, ZERO],
        3 => [ZERO, s, -s, ZERO],
        _ => return Err(Error::BadBellIndex(index)),
    })
}

pub fn bell_state(index: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(&bell_vector(index)?, (2, 2))
}

/// `Σ p_i |B_i><B_i|`.
pub fn bell_diagonal(spec: &BellDiagonalSpec) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for (k, &w) in spec.weights().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = bell_vector(k).expect("index < 4");
        m = &m + &ComplexMatrix::outer(&v).scale_real(w);
    }
    DensityMatrix::from_matrix_unchecked(m, (2, 2))
}

/// `(σy ⊗ σy) ρ* (σy ⊗ σy)`, conjugation in the computational basis.
pub fn spin_flip(rho: &DensityMatrix) -> Result<DensityMatrix> {
    rho.require_two_qubit()?;
    let [_, y, _] = pauli();
    let yy = kron(&y, &y);
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;
    Ok(DensityMatrix::from_matrix_unchecked(flipped, (2, 2)))
}

/// Same unitary orbit iff `Tr(r1^k) = Tr(r2^k)` for `k = 1..n`.
pub fn unitary_equivalent(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<bool> {
    unitary_equivalent_with(r1, r2, Tolerances::DEFAULT.functional)
}

pub fn unitary_equivalent_with(r1: &DensityMatrix, r2: &DensityMatrix, tol: f64) -> Result<bool> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch {
            expected: r1.dim(),
            found: r2.dim(),
        });
    }
    let n = r1.dim();
    let (a, b) = (r1.matrix(), r2.matrix());
    let mut pa = a.clone();
    let mut pb = b.clone();
    for k in 1..=n {
        if k > 1 {
            pa = &pa * a;
            pb = &pb * b;
        }
        if (pa.trace() - pb.trace()).norm() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(A⊗B) ρ (A⊗B)^H`, renormalized to unit trace.
pub fn sl2c_transform(rho: &DensityMatrix, a: &Sl2cParams, b: &Sl2cParams) -> Result<DensityMatrix> {
    let (m, trace) = sl2c_unnormalized(rho, a, b)?;
    Ok(DensityMatrix::from_matrix_unchecked(
        m.scale_real(1.0 / trace).hermitian_part(),
        (2, 2),
    ))
}

/// Unnormalized image and its trace.
pub(crate) fn sl2c_unnormalized(
    rho: &DensityMatrix,
    a: &Sl2cParams,
    b: &Sl2cParams,
) -> Result<(ComplexMatrix, f64)> {
    rho.require_two_qubit()?;
    let ab = kron(a.matrix(), b.matrix());
    let m = rho.matrix().conjugate_by(&ab);
    let trace = m.trace().re;
    if trace <= Tolerances::DEFAULT.normalization {
        return Err(Error::DegenerateNormalization { trace });
    }
    Ok((m, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{self, seeded_rng, uniform};

    fn basis(k: usize) -> [C64; 4] {
        let mut v = [ZERO; 4];
        v[k] = ONE;
        v
    }

    #[test]
    fn su2_special_values() {
        assert!(su2(LocalUnitaryParams::IDENTITY).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let u = su2(LocalUnitaryParams::new(FRAC_PI_2, 0.0, 0.0));
        let want = ComplexMatrix::from_2x2([[C64::new(0.0, 1.0), ZERO], [ZERO, C64::new(0.0, -1.0)]]);
        assert!(u.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn su2_is_special_unitary() {
        let mut rng = seeded_rng(11);
        for _ in 0..1000 {
            let p = LocalUnitaryParams::new(
                uniform(&mut rng, -10.0, 10.0),
                uniform(&mut rng, -10.0, 10.0),
                uniform(&mut rng, -10.0, 10.0),
            );
            let u = su2(p);
            assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
            assert!((u.determinant_2x2() - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn bell_diagonal_special_specs() {
        let pure = bell_diagonal(&BellDiagonalSpec::new([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert!(pure.matrix().max_abs_diff(bell_state(0).unwrap().matrix()) < 1e-15);
        let mixed = bell_diagonal(&BellDiagonalSpec::new([0.25; 4]).unwrap());
        assert!(mixed
            .matrix()
            .max_abs_diff(DensityMatrix::maximally_mixed((2, 2)).matrix())
            < 1e-15);
    }

    #[test]
    fn bell_diagonal_spectrum_is_weights() {
        let rho = bell_diagonal(&BellDiagonalSpec::new([0.7, 0.1, 0.1, 0.1]).unwrap());
        let e = rho.eigenvalues();
        for (got, want) in e.iter().zip([0.1, 0.1, 0.1, 0.7]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(BellDiagonalSpec::new([0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(BellDiagonalSpec::new([0.5, 0.4, 0.0, 0.0]).is_err());
        assert!(bell_state(4).is_err());
    }

    #[test]
    fn spin_flip_examples() {
        let singlet = bell_state(3).unwrap();
        assert!(spin_flip(&singlet).unwrap().matrix().max_abs_diff(singlet.matrix()) < 1e-15);
        let zz = DensityMatrix::from_pure(&basis(0), (2, 2)).unwrap();
        let oo = DensityMatrix::from_pure(&basis(3), (2, 2)).unwrap();
        assert!(spin_flip(&zz).unwrap().matrix().max_abs_diff(oo.matrix()) < 1e-15);
        let mm = DensityMatrix::maximally_mixed((2, 2));
        assert!(spin_flip(&mm).unwrap().matrix().max_abs_diff(mm.matrix()) < 1e-15);
        let qutrits = DensityMatrix::maximally_mixed((3, 3));
        assert!(spin_flip(&qutrits).is_err());
    }

    #[test]
    fn spin_flip_is_an_involution() {
        for seed in 0..200 {
            let rho = random::random_density_matrix((2, 2), 4, seed).unwrap();
            let back = spin_flip(&spin_flip(&rho).unwrap()).unwrap();
            assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn canonical_keeps_matrix() {
        let mut rng = seeded_rng(5);
        for _ in 0..500 {
            let p = LocalUnitaryParams::new(
                uniform(&mut rng, -20.0, 20.0),
                uniform(&mut rng, -20.0, 20.0),
                uniform(&mut rng, -20.0, 20.0),
            );
            let c = p.canonical();
            assert!((0.0..2.0 * PI).contains(&c.alpha));
            assert!((0.0..2.0 * PI).contains(&c.beta));
            assert!((0.0..=FRAC_PI_2).contains(&c.theta));
            assert!(su2(p).max_abs_diff(&su2(c)) < 1e-12);
        }
    }

    #[test]
    fn unitary_equivalence_examples() {
        let rho = random::random_density_matrix((2, 2), 4, 1).unwrap();
        for seed in 0..100 {
            let u = random::haar_unitary(4, seed);
            assert!(unitary_equivalent(&rho, &rho.conjugate_by(&u)).unwrap());
        }
        let pure = bell_state(0).unwrap();
        let mm = DensityMatrix::maximally_mixed((2, 2));
        assert!(!unitary_equivalent(&pure, &mm).unwrap());
        assert!(unitary_equivalent(&pure, &DensityMatrix::maximally_mixed((3, 3))).is_err());
    }

    #[test]
    fn shared_spectrum_different_bases_are_equivalent() {
        let spectrum = ComplexMatrix::from_real_diag(&[0.5, 0.3, 0.15, 0.05]);
        let d = DensityMatrix::from_matrix_unchecked(spectrum, (2, 2));
        let a = d.conjugate_by(&random::haar_unitary(4, 100));
        let b = d.conjugate_by(&random::haar_unitary(4, 200));
        assert!(unitary_equivalent(&a, &b).unwrap());
        let other = DensityMatrix::from_matrix_unchecked(
            ComplexMatrix::from_real_diag(&[0.5, 0.3, 0.1, 0.1]),
            (2, 2),
        );
        assert!(!unitary_equivalent(&a, &other).unwrap());
    }

    #[test]
    fn sl2c_identity_and_diagonal_boost() {
        let rho = random::random_density_matrix((2, 2), 3, 7).unwrap();
        let id = Sl2cParams::identity();
        assert!(sl2c_transform(&rho, &id, &id).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-14);

        let boost = |s: f64| {
            let s = C64::new(s, 0.0);
            let a = Sl2cParams::new([[s, ZERO], [ZERO, ONE / s]]).unwrap();
            sl2c_transform(&DensityMatrix::maximally_mixed((2, 2)), &a, &a).unwrap()
        };
        let want = ComplexMatrix::from_real_diag(&[256.0 / 289.0, 16.0 / 289.0, 16.0 / 289.0, 1.0 / 289.0]);
        assert!(boost(2.0).matrix().max_abs_diff(&want) < 1e-15);
        let want = ComplexMatrix::from_real_diag(&[16.0 / 25.0, 4.0 / 25.0, 4.0 / 25.0, 1.0 / 25.0]);
        assert!(boost(core::f64::consts::SQRT_2).matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn sl2c_output_is_a_state() {
        let mut rng = seeded_rng(8);
        for seed in 0..200 {
            let rho = random::random_density_matrix((2, 2), 1 + seed as usize % 4, seed).unwrap();
            let a = Sl2cParams::from_matrix(random::random_sl2c_matrix(&mut rng)).unwrap();
            let b = Sl2cParams::from_matrix(random::random_sl2c_matrix(&mut rng)).unwrap();
            let out = sl2c_transform(&rho, &a, &b).unwrap();
            assert!(DensityMatrix::new(out.into_matrix(), (2, 2)).is_ok());
        }
    }

    #[test]
    fn sl2c_rejects_bad_determinant_and_degenerate_images() {
        assert!(Sl2cParams::new([[ONE, ZERO], [ZERO, C64::new(2.0, 0.0)]]).is_err());
        let n = Sl2cParams::normalized(ComplexMatrix::from_2x2([[ONE, ZERO], [ZERO, C64::new(4.0, 0.0)]]))
            .unwrap();
        assert!((n.determinant() - ONE).norm() < 1e-15);
        // A kills |1>, so it annihilates |11><11|; det A = 1 is kept with a huge partner entry.
        let big = C64::new(1e9, 0.0);
        let a = Sl2cParams::new([[big, ZERO], [ZERO, ONE / big]]).unwrap();
        let oo = DensityMatrix::from_pure(&basis(3), (2, 2)).unwrap();
        assert!(matches!(
            sl2c_transform(&oo, &a, &a),
            Err(Error::DegenerateNormalization { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(4), (2, 2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diag(&[1.5, -0.5]), (2, 1)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(4).scale_real(0.25), (2, 3)).is_err());
        assert!(DensityMatrix::from_pure(&[ONE, ONE], (2, 1)).is_err());
    }
}
