//! Spectrum, normalization and synthesis against frozen reference values.

mod common;

use num_complex::Complex64;

use diskmodes::field_state::{analyze, synthesize, FieldState};
use diskmodes::io::{parse_state, to_json, StateFile};
use diskmodes::numerics::QuadratureGrid;
use diskmodes::spectrum::{build_spectrum, robin_roots, Boundary, DiskConfig, ModeIndex};
use diskmodes::{ModeBasis, RunConfig};

fn robin_minus_one(l_max: u32, n_max: u32, mass: f64) -> DiskConfig {
    DiskConfig {
        radius: 1.0,
        mass,
        boundary: Boundary::Robin { lambda: -1.0 },
        l_max,
        n_max,
    }
}

#[test]
fn robin_roots_and_norms_match_reference() {
    let s = build_spectrum(&robin_minus_one(4, 4, 1.0)).unwrap();
    for (l, (roots, norms)) in common::ROBIN_MINUS_ONE_ROOTS
        .iter()
        .zip(&common::ROBIN_MINUS_ONE_NORMS)
        .enumerate()
    {
        for (n, (&x, &norm)) in roots.iter().zip(norms).enumerate() {
            for sign in [1, -1] {
                let e = s.entry(ModeIndex::new(sign * l as i32, n as u32 + 1));
                assert!(
                    (e.x - x).abs() <= 2e-15 * x,
                    "x({l},{}) = {} vs {x}",
                    n + 1,
                    e.x
                );
                assert!(
                    (e.norm - norm).abs() <= 1e-13 * norm,
                    "norm({l},{}) = {} vs {norm}",
                    n + 1,
                    e.norm
                );
                assert!((e.omega - (x * x + 1.0).sqrt()).abs() <= 1e-15 * e.omega);
            }
        }
    }
}

#[test]
fn classic_bessel_zeros() {
    let d = robin_roots(0, Boundary::Dirichlet, 1).unwrap()[0];
    assert!((d - common::FIRST_DIRICHLET_ZERO).abs() < 1e-15);
    let neumann = robin_roots(1, Boundary::Robin { lambda: 0.0 }, 1).unwrap()[0];
    assert!((neumann - common::FIRST_NEUMANN_ROOT_L1).abs() < 1e-15);
}

#[test]
fn radius_rescales_wavenumbers_only() {
    let unit = build_spectrum(&robin_minus_one(3, 3, 0.0)).unwrap();
    let wide = build_spectrum(&DiskConfig {
        radius: 2.5,
        ..robin_minus_one(3, 3, 0.0)
    })
    .unwrap();
    for (a, b) in unit.entries().iter().zip(wide.entries()) {
        assert_eq!(a.x, b.x);
        assert!((a.k - 2.5 * b.k).abs() < 1e-14 * a.k);
        assert!((a.norm - 2.5 * b.norm).abs() < 1e-13 * a.norm);
    }
}

#[test]
fn single_mode_profile_matches_reference() {
    let s = build_spectrum(&robin_minus_one(1, 2, 0.0)).unwrap();
    let basis = ModeBasis::new(s, QuadratureGrid::new(1.0, 32, 12).unwrap()).unwrap();
    let state = FieldState::zeros(basis.truncation())
        .with_amplitude(ModeIndex::new(0, 1), Complex64::new(1.0, 0.0));
    // synthesized values at the nodes are a real combination of modes; the
    // mode itself is real for l = 0, so φ(r) = 2 Re(a φ_{0,1}) / sqrt(2ω)
    let omega = basis.spectrum().omega(ModeIndex::new(0, 1));
    for (r, want) in common::SINGLE_MODE_PROFILE {
        let phi = basis.mode_eval(ModeIndex::new(0, 1), r, 0.3).unwrap();
        let got = 2.0 * phi.re / (2.0 * omega).sqrt();
        assert!((got - want).abs() < 1e-13, "r = {r}: {got} vs {want}");
    }
    let f = synthesize(&basis, &state, 0.0).unwrap();
    let grid = basis.grid();
    for (p, (r, _)) in grid.nodes().enumerate() {
        let phi = basis.mode_eval(ModeIndex::new(0, 1), r, 0.0).unwrap();
        assert!((f.phi[p] - 2.0 * phi.re / (2.0 * omega).sqrt()).abs() < 1e-13);
    }
}

#[test]
fn state_files_survive_a_round_trip() {
    let s = build_spectrum(&robin_minus_one(2, 3, 1.0)).unwrap();
    let state = FieldState::random(s.truncation(), 42).rebase(&s, 0.75);
    let text = to_json(&StateFile::new(&state)).unwrap();
    let back = parse_state(&text, s.truncation()).unwrap();
    assert_eq!(back.amplitudes(), state.amplitudes());
    assert_eq!(back.t0(), state.t0());
}

#[test]
fn sparse_state_round_trip_at_defaults() {
    let cfg = RunConfig::default();
    let s = build_spectrum(&cfg.disk()).unwrap();
    let grid = cfg.grid(&s).unwrap();
    let basis = ModeBasis::new(s, grid).unwrap();
    let state = FieldState::random_sparse(basis.truncation(), cfg.seed, 40).unwrap();
    let f = synthesize(&basis, &state, 2.2).unwrap();
    let back = analyze(&basis, &f, state.t0()).unwrap().state;
    // 3.0e-15 when recorded
    assert!(back.distance(&state) < 1e-8, "{}", back.distance(&state));
}
