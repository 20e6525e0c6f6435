use mmlab_core::classical::{action_direct, turning_points};
use mmlab_core::conditions::{
    born_jordan_condition, commutator, condition_commutator_sum, heisenberg_condition, modified_condition,
    AmplitudeSource,
};
use mmlab_core::eigen::jacobi_eigh;
use mmlab_core::potential::PolynomialPotential;
use mmlab_core::spectral::{
    hermiticity_defect, momentum_from_position, transition_frequencies, PhysicalConstants, SpectralSystem,
};
use mmlab_core::{CMatrix, Complex64, RMatrix};
use proptest::prelude::*;

/// Hermitian `X` with random entries and a nondecreasing spectrum.
fn hermitian_system() -> impl Strategy<Value = (SpectralSystem, CMatrix)> {
    (3usize..9).prop_flat_map(|n| {
        (
            prop::collection::vec(0.1f64..2.0, n),
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n),
            0.5f64..2.0,
        )
            .prop_map(move |(gaps, raw, mass)| {
                let mut energies = Vec::with_capacity(n);
                let mut e = 0.0;
                for g in gaps {
                    e += g;
                    energies.push(e);
                }
                let constants = PhysicalConstants::new(mass, 1.0, 1.0).unwrap();
                let system = SpectralSystem::new(constants, energies).unwrap();
                let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(raw[i * n + j].0, raw[i * n + j].1));
                let x = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
                (system, x)
            })
    })
}

fn phases(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(0.0f64..std::f64::consts::TAU, n)
        .prop_map(|v| v.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn condition_forms_agree_on_hermitian_input((system, x) in hermitian_system()) {
        let freqs = transition_frequencies(&system);
        let m = system.constants.mass;
        let size = system.size();
        let scale = m * x.iter().map(|v| v.norm_sqr()).sum::<f64>() * freqs.matrix().amax();
        for alpha_max in 1..size {
            for n in 0..size - alpha_max {
                let h = heisenberg_condition(AmplitudeSource::Matrix(&x), n, m, &freqs, alpha_max).unwrap();
                let bj = born_jordan_condition(&x, &freqs, m, n, alpha_max).unwrap();
                let md = modified_condition(&x, &freqs, m, n, alpha_max).unwrap();
                prop_assert!((h - md).abs() <= 1e-12 * scale.max(1.0));
                prop_assert!((bj - md).abs() <= 1e-12 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn rephasing_leaves_conditions_unchanged(
        (system, x) in hermitian_system(),
        seed_phases in phases(9),
    ) {
        let freqs = transition_frequencies(&system);
        let m = system.constants.mass;
        let size = system.size();
        let p = momentum_from_position(&x, &freqs, m).unwrap();
        let u = &seed_phases[..size];
        let rot = |a: &CMatrix| CMatrix::from_fn(size, size, |i, j| u[i] * a[(i, j)] * u[j].conj());
        let (x2, p2) = (rot(&x), rot(&p));
        let c1 = commutator(&x, &p).unwrap();
        let c2 = commutator(&x2, &p2).unwrap();
        for n in 0..size {
            prop_assert!((c1[(n, n)] - c2[(n, n)]).norm() <= 1e-12 * c1.norm().max(1.0));
        }
        for n in 0..size - 1 {
            let a = born_jordan_condition(&x, &freqs, m, n, 1).unwrap();
            let b = born_jordan_condition(&x2, &freqs, m, n, 1).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            let a = modified_condition(&x, &freqs, m, n, 1).unwrap();
            let b = modified_condition(&x2, &freqs, m, n, 1).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn commutator_is_traceless((system, x) in hermitian_system()) {
        let freqs = transition_frequencies(&system);
        let p = momentum_from_position(&x, &freqs, system.constants.mass).unwrap();
        let c = commutator(&x, &p).unwrap();
        prop_assert!(c.trace().norm() <= 1e-12 * x.norm() * p.norm());
        // summing every band reproduces the full diagonal entry
        let full = condition_commutator_sum(&x, &p, 0, system.size() - 1).unwrap();
        prop_assert!((full - c[(0, 0)]).norm() <= 1e-12 * x.norm() * p.norm());
    }

    #[test]
    fn momentum_inherits_hermiticity((system, x) in hermitian_system()) {
        let freqs = transition_frequencies(&system);
        let p = momentum_from_position(&x, &freqs, system.constants.mass).unwrap();
        prop_assert!(hermiticity_defect(&p).unwrap() <= 1e-14);
        for i in 0..system.size() {
            prop_assert!(p[(i, i)].norm() == 0.0);
        }
    }

    #[test]
    fn frequencies_obey_ritz_combination((system, _) in hermitian_system()) {
        let f = transition_frequencies(&system);
        let n = system.size();
        for a in 0..n {
            prop_assert_eq!(f.get(a, a), 0.0);
            for b in 0..n {
                prop_assert_eq!(f.get(a, b), -f.get(b, a));
                for c in 0..n {
                    prop_assert!((f.get(a, b) + f.get(b, c) - f.get(a, c)).abs() <= 1e-12 * f.matrix().amax());
                }
            }
        }
    }

    #[test]
    fn eigensolver_diagonalizes(raw in prop::collection::vec(-5.0f64..5.0, 1..=100)) {
        let n = (raw.len() as f64).sqrt() as usize;
        let m = RMatrix::from_fn(n, n, |i, j| raw[i * n + j]);
        let s = (&m + m.transpose()) * 0.5;
        let eig = jacobi_eigh(&s).unwrap();
        let scale = s.norm().max(1.0);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.vectors;
        let residual = &s * v - v * RMatrix::from_diagonal(&nalgebra_vector(&eig.values));
        prop_assert!(residual.norm() <= 1e-11 * scale);
        prop_assert!((v.transpose() * v - RMatrix::identity(n, n)).norm() <= 1e-11 * n as f64);
    }

    #[test]
    fn turning_points_bound_the_motion(
        c2 in 0.1f64..2.0,
        c4 in 0.0f64..0.5,
        c1 in -0.5f64..0.5,
        excess in 0.01f64..10.0,
    ) {
        let v = PolynomialPotential::new(vec![0.0, c1, c2, 0.0, c4]).unwrap();
        let (_, vmin) = v.minimum();
        let e = vmin + excess;
        let (a, b) = turning_points(&v, e, 1.0).unwrap();
        prop_assert!(a < b);
        let tol = 1e-9 * e.abs().max(excess);
        prop_assert!((v.value(a) - e).abs() <= tol);
        prop_assert!((v.value(b) - e).abs() <= tol);
        prop_assert!(v.value(0.5 * (a + b)) < e);
        // J(E) is strictly increasing
        let j1 = action_direct(&v, e, 1.0).unwrap();
        let j2 = action_direct(&v, e + 0.01 * excess, 1.0).unwrap();
        prop_assert!(j2 > j1);
    }
}

fn nalgebra_vector(v: &[f64]) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_column_slice(v)
}
