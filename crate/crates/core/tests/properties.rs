use cqsl_core::entanglement::{
    bell_diagonal_concurrence, concurrence, concurrence_transform_check, pure_concurrence,
};
use cqsl_core::linalg::random::{
    haar_unitary, random_density_matrix, random_pure_state, random_sl2c_matrix, seeded_rng,
};
use cqsl_core::linalg::{hermitian_eig, kron, partial_trace, ComplexMatrix, Subsystem};
use cqsl_core::optimize::{spectral_lower_bound, OrbitObjective};
use cqsl_core::qstate::{bell_diagonal, local_unitary, unitary_equivalent};
use cqsl_core::{BellDiagonalSpec, DensityMatrix, LocalUnitaryParams, Sl2cParams};
use proptest::prelude::*;

fn angles() -> impl Strategy<Value = LocalUnitaryParams> {
    (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::FRAC_PI_2)
        .prop_map(|(a, b, t)| LocalUnitaryParams::new(a, b, t))
}

fn state() -> impl Strategy<Value = DensityMatrix> {
    (1usize..=4, any::<u64>()).prop_map(|(rank, seed)| random_density_matrix((2, 2), rank, seed).unwrap())
}

fn bell_spec() -> impl Strategy<Value = BellDiagonalSpec> {
    prop::array::uniform4(0.0..1.0f64).prop_filter_map("non-zero weights", |w| {
        let t: f64 = w.iter().sum();
        (t > 1e-6).then(|| {
            let p = [w[0] / t, w[1] / t, w[2] / t, 1.0 - (w[0] + w[1] + w[2]) / t];
            BellDiagonalSpec::new(p.map(|x| x.max(0.0))).ok()
        })?
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn concurrence_in_unit_interval(rho in state()) {
        let c = concurrence(&rho).unwrap().value;
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(rho in state(), a in angles(), b in angles()) {
        let moved = rho.conjugate_by(&local_unitary(a, b));
        let c0 = concurrence(&rho).unwrap().value;
        let c1 = concurrence(&moved).unwrap().value;
        prop_assert!((c0 - c1).abs() < 1e-8, "{} vs {}", c0, c1);
    }

    #[test]
    fn bell_diagonal_closed_form(spec in bell_spec()) {
        let c = concurrence(&bell_diagonal(&spec)).unwrap().value;
        prop_assert!((c - bell_diagonal_concurrence(&spec)).abs() < 1e-9);
    }

    #[test]
    fn partial_traces_preserve_trace(rho in state()) {
        for keep in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(rho.matrix(), keep, (2, 2)).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.is_hermitian(1e-12));
        }
    }

    #[test]
    fn unitary_orbit_keeps_spectrum(rho in state(), seed in any::<u64>()) {
        let moved = rho.conjugate_by(&haar_unitary(4, seed));
        prop_assert!(unitary_equivalent(&rho, &moved).unwrap());
        let (a, b) = (rho.eigenvalues(), moved.eigenvalues());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn eigen_reconstruction(rho in state()) {
        let e = hermitian_eig(rho.matrix()).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn spectral_bound_below_every_orbit_point(rho in state(), sigma in state(), seed in any::<u64>()) {
        let bound = spectral_lower_bound(&rho, &sigma).unwrap().value;
        let u = haar_unitary(4, seed);
        let moved = rho.conjugate_by(&u);
        let v = moved.matrix().trace_product(sigma.matrix()).re;
        prop_assert!(v >= bound - 1e-12, "{} < {}", v, bound);
    }

    #[test]
    fn orbit_objective_matches_matrix_formula(rho in state(), sigma in state(), a in angles(), b in angles()) {
        let obj = OrbitObjective::new(&rho, &sigma).unwrap();
        let x = [a.alpha, a.beta, a.theta, b.alpha, b.beta, b.theta];
        let direct = rho.conjugate_by(&local_unitary(a, b)).matrix().trace_product(sigma.matrix()).re;
        prop_assert!((obj.eval(&x) - direct).abs() < 1e-13);
    }

    #[test]
    fn pure_concurrence_matches_mixed_formula(seed in any::<u64>()) {
        let psi = random_pure_state(4, seed);
        let rho = DensityMatrix::from_pure(&psi, (2, 2)).unwrap();
        let c = concurrence(&rho).unwrap().value;
        prop_assert!((c - pure_concurrence(&psi).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn sl2c_transform_rule(rho in state(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = Sl2cParams::from_matrix(random_sl2c_matrix(&mut rng)).unwrap();
        let b = Sl2cParams::from_matrix(random_sl2c_matrix(&mut rng)).unwrap();
        let check = concurrence_transform_check(&rho, &a, &b).unwrap();
        prop_assert!((check.lhs - check.rhs).abs() < 1e-7, "{:?}", check);
    }
}

#[test]
fn kron_of_unitaries_is_unitary() {
    let u = kron(&haar_unitary(2, 1), &haar_unitary(2, 2));
    let prod = &u * &u.adjoint();
    assert!(prod.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
}
