//! Property tests for the algebraic invariants: exponential inverses,
//! tensor associativity, phase-distance symmetry, rotation group laws,
//! displacement composition, and classical-map isometry.

use num_complex::Complex64;
use proptest::prelude::*;

use spintop::boson::{displacement, FockMode};
use spintop::classical::{KickedTopMap, SpherePoint};
use spintop::linalg::{
    distance_up_to_global_phase, matrix_exponential, tensor_product, ComplexMatrix,
};
use spintop::spin::{carrier_rotation, measure_jz, spin_coherent_state, Axis, SpinRegister, Targets};

fn anti_hermitian(dim: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim, dim);
    let mut it = entries.iter().cycle();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let &(re, im) = it.next().unwrap();
            let z = Complex64::new(re, im);
            g[(i, j)] = z;
            g[(j, i)] = -z.conj();
        }
        let &(_, im) = it.next().unwrap();
        g[(i, i)] = Complex64::new(0.0, im);
    }
    g
}

fn small_matrix(dim: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    let mut it = entries.iter().cycle();
    for i in 0..dim {
        for j in 0..dim {
            let &(re, im) = it.next().unwrap();
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exponential_inverse_pairs_cancel(
        dim in 2usize..10,
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
    ) {
        let g = anti_hermitian(dim, &entries);
        let forward = matrix_exponential(&g).unwrap();
        let backward = matrix_exponential(&g.scale(Complex64::new(-1.0, 0.0))).unwrap();
        let product = forward.mul(&backward).unwrap();
        prop_assert!(product.max_entry_distance(&ComplexMatrix::identity(dim)) < 1e-10);
        prop_assert!(forward.unitarity_defect() < 1e-10);
    }

    #[test]
    fn tensor_product_associates(
        a_raw in prop::collection::vec((-4i32..=4, -4i32..=4), 4),
        b_raw in prop::collection::vec((-4i32..=4, -4i32..=4), 9),
        c_raw in prop::collection::vec((-4i32..=4, -4i32..=4), 4),
    ) {
        // Dyadic entries keep every complex product exact, so associativity
        // holds entry for entry with no rounding slack.
        let half = |raw: &[(i32, i32)]| -> Vec<(f64, f64)> {
            raw.iter().map(|&(re, im)| (re as f64 / 2.0, im as f64 / 2.0)).collect()
        };
        let a = small_matrix(2, &half(&a_raw));
        let b = small_matrix(3, &half(&b_raw));
        let c = small_matrix(2, &half(&c_raw));
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn phase_distance_symmetry_and_phase_invariance(
        entries_u in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        entries_v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        phase in 0.0f64..std::f64::consts::TAU,
    ) {
        let u = matrix_exponential(&anti_hermitian(3, &entries_u)).unwrap();
        let v = matrix_exponential(&anti_hermitian(3, &entries_v)).unwrap();
        let duv = distance_up_to_global_phase(&u, &v).unwrap();
        let dvu = distance_up_to_global_phase(&v, &u).unwrap();
        prop_assert!((duv - dvu).abs() < 1e-10);
        let rotated = u.scale(Complex64::from_polar(1.0, phase));
        prop_assert!(distance_up_to_global_phase(&u, &rotated).unwrap() < 1e-12);
    }

    #[test]
    fn rotations_compose_additively(
        n in 1usize..5,
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
    ) {
        let reg = SpinRegister::symmetric(n).unwrap();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let ra = carrier_rotation(&reg, axis, alpha, &Targets::All).unwrap();
            let rb = carrier_rotation(&reg, axis, beta, &Targets::All).unwrap();
            let direct = carrier_rotation(&reg, axis, alpha + beta, &Targets::All).unwrap();
            prop_assert!(ra.mul(&rb).unwrap().max_entry_distance(&direct) < 1e-10);
        }
    }

    #[test]
    fn rotations_preserve_norm(
        n in 1usize..6,
        angle in -6.0f64..6.0,
        theta in 0.0f64..std::f64::consts::PI,
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let reg = SpinRegister::symmetric(n).unwrap();
        let state = spin_coherent_state(&reg, theta, phi).unwrap();
        let rot = carrier_rotation(&reg, Axis::X, angle, &Targets::All).unwrap();
        let moved = rot.apply(state.vector()).unwrap();
        prop_assert!((moved.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn displacement_composition_up_to_phase(
        re1 in -0.6f64..0.6, im1 in -0.6f64..0.6,
        re2 in -0.6f64..0.6, im2 in -0.6f64..0.6,
    ) {
        let mode = FockMode::new(32).unwrap();
        let b1 = Complex64::new(re1, im1);
        let b2 = Complex64::new(re2, im2);
        let lhs = displacement(&mode, b1).unwrap().mul(&displacement(&mode, b2).unwrap()).unwrap();
        let phase = Complex64::from_polar(1.0, (b1 * b2.conj()).im);
        let rhs = displacement(&mode, b1 + b2).unwrap().scale(phase);
        let trusted = mode.dim() / 3;
        for i in 0..trusted {
            for j in 0..trusted {
                prop_assert!((lhs[(i, j)] - rhs[(i, j)]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn classical_steps_stay_on_the_sphere(
        theta in 0.01f64..3.13,
        phi in 0.0f64..std::f64::consts::TAU,
        kappa in -4.0f64..4.0,
        p in -3.2f64..3.2,
    ) {
        let map = KickedTopMap::new(kappa, p);
        let mut pt = SpherePoint::from_angles(theta, phi);
        for _ in 0..200 {
            pt = map.step(pt);
            let (x, y, z) = pt.coords();
            prop_assert!(((x * x + y * y + z * z).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jz_sampling_is_reproducible(
        n in 1usize..5,
        theta in 0.1f64..3.0,
        phi in 0.0f64..std::f64::consts::TAU,
        seed in any::<u64>(),
    ) {
        let reg = SpinRegister::symmetric(n).unwrap();
        let state = spin_coherent_state(&reg, theta, phi).unwrap();
        let a = measure_jz(&state, seed, 64).unwrap();
        let b = measure_jz(&state, seed, 64).unwrap();
        prop_assert_eq!(a, b);
    }
}
