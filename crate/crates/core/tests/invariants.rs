mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use diskmodes::field_state::{angular_momentum_mode, energy_mode, FieldState};
use diskmodes::special_functions::{bessel_eval, bessel_j};
use diskmodes::spectrum::{build_spectrum, Boundary, DiskConfig, ModeIndex, RobinSpectrum};
use diskmodes::symmetry::{apply_su2, apply_u1, charge_mode_form, Axis, KernelCoefficients};

fn spectrum(lambda: f64, mass: f64) -> RobinSpectrum {
    build_spectrum(&DiskConfig {
        radius: 1.3,
        mass,
        boundary: Boundary::Robin { lambda },
        l_max: 3,
        n_max: 3,
    })
    .unwrap()
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::One), Just(Axis::Two), Just(Axis::Three)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_matches_quadrature_oracle(order in -20i32..=20, x in 0.0f64..120.0) {
        let got = bessel_j(order, x).unwrap();
        let want = common::bessel_j(order, x);
        prop_assert!((got - want).abs() < 1e-13, "J_{order}({x}) = {got} vs {want}");
    }

    #[test]
    fn bessel_derivative_matches_oracle(order in 0i32..=20, x in 0.0f64..60.0) {
        let e = bessel_eval(order, x).unwrap();
        prop_assert!((e.derivative - common::bessel_j_prime(order, x)).abs() < 1e-13);
    }

    #[test]
    fn robin_roots_solve_their_equation(lambda in -30.0f64..0.0, l in 0i32..=3, n in 1u32..=3) {
        let s = spectrum(lambda, 0.5);
        let x = s.entry(ModeIndex::new(l, n)).x;
        let e = bessel_eval(l, x).unwrap();
        let scale = (x * e.derivative).abs().max((lambda * e.value).abs()).max(1.0);
        prop_assert!((x * e.derivative - lambda * e.value).abs() < 1e-12 * scale);
    }

    #[test]
    fn evolution_composes(seed in any::<u64>(), t1 in -20.0f64..20.0, t2 in -20.0f64..20.0) {
        let s = spectrum(-1.0, 0.7);
        let state = FieldState::random(s.truncation(), seed);
        let once = state.evolve(&s, t1 + t2);
        let twice = state.evolve(&s, t1).evolve(&s, t2);
        prop_assert!(once.distance(&twice) < 1e-12 * (1.0 + state.norm_sqr().sqrt()));
    }

    #[test]
    fn evolution_conserves_charges(seed in any::<u64>(), t in -50.0f64..50.0) {
        let s = spectrum(-2.0, 1.1);
        let state = FieldState::random(s.truncation(), seed);
        let later = state.evolve(&s, t);
        let e = energy_mode(&s, &state);
        prop_assert!((energy_mode(&s, &later) - e).abs() < 1e-12 * e);
        let l = angular_momentum_mode(&state);
        prop_assert!((angular_momentum_mode(&later) - l).abs() < 1e-12 * e);
        let c = KernelCoefficients::random_valid(s.truncation(), seed ^ 0x5eed);
        let q = charge_mode_form(&s, &c, &state);
        let q_later = charge_mode_form(&s, &c, &later);
        prop_assert!((q - q_later).abs() < 1e-11 * (1.0 + q.abs()) * e);
    }

    #[test]
    fn pair_rotations_preserve_energy_and_norm(
        seed in any::<u64>(),
        l in 1i32..=3,
        n in 1u32..=3,
        axis in axis(),
        angle in -7.0f64..7.0,
    ) {
        let s = spectrum(-1.0, 1.0);
        let state = FieldState::random(s.truncation(), seed);
        let rotated = apply_su2(&state, l, n, axis, angle, &s).unwrap();
        let e = energy_mode(&s, &state);
        prop_assert!((energy_mode(&s, &rotated) - e).abs() < 1e-13 * e);
        prop_assert!((rotated.norm_sqr() - state.norm_sqr()).abs() < 1e-13 * state.norm_sqr());
        let back = apply_su2(&rotated, l, n, axis, -angle, &s).unwrap();
        prop_assert!(back.distance(&state) < 1e-13 * (1.0 + state.norm_sqr().sqrt()));
    }

    #[test]
    fn phase_rotation_touches_one_mode(seed in any::<u64>(), l in -3i32..=3, n in 1u32..=3, angle in -7.0f64..7.0) {
        let s = spectrum(-1.0, 1.0);
        let state = FieldState::random(s.truncation(), seed);
        let mode = ModeIndex::new(l, n);
        let rotated = apply_u1(&state, mode, angle, &s).unwrap();
        for idx in s.truncation().indices() {
            let want = if idx == mode {
                state.amplitude(idx) * Complex64::from_polar(1.0, -angle)
            } else {
                state.amplitude(idx)
            };
            prop_assert!((rotated.amplitude(idx) - want).norm() < 1e-15 * (1.0 + want.norm()));
        }
    }
}
