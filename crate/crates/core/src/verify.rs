//! Invariant suites behind the `verify` command.
//!
//! Every check records its residual and tolerance. Checks marked
//! `expect_violation` pass when the residual exceeds the tolerance: they
//! confirm that something which should fail does.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig, Suite};
use crate::field_state::{
    analyze, angular_momentum_integral, angular_momentum_mode, energy_integral, energy_mode,
    hamilton_residuals, solution_certificate, synthesize, EnergyForm, FieldError, FieldState,
};
use crate::fock_quantum::{
    algebra_report, broken_degeneracy_check, conjugation_report, heisenberg_conservation,
    ConjugationCase, FockError, IdentityCheck, SectorSpace,
};
use crate::mode_basis::{BasisError, EdgeCompatiblePolynomial, ModeBasis};
use crate::special_functions::BesselError;
use crate::spectrum::{build_spectrum, DiskConfig, ModeIndex, RobinSpectrum, SpectrumError};
use crate::symmetry::{
    apply_su2, apply_u1, charge_bilocal_integral, charge_mode_form, charge_mode_form_complex,
    counterexample_transform, flow_commutation_defect, generator_values, Axis, BilocalKernel,
    KernelCoefficients, KernelKind, KernelMatrices, MixingVariant, SymmetryError, Transform,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("{0}")]
    Unsupported(String),
}

/// Checks of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<IdentityCheck>,
}

/// Result of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub config: DiskConfig,
    pub grid_r: usize,
    pub grid_theta: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = (&Suite, &IdentityCheck)> {
        self.suites
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| (&s.suite, c)))
            .filter(|(_, c)| !c.passed)
    }
}

const MODE_TOL: f64 = 1e-12;
const QUADRATURE_TOL: f64 = 1e-6;

/// Number of random states the field suite samples.
pub const FIELD_SAMPLES: u64 = 20;
/// Number of random coefficient sets the symmetry suite samples.
pub const COEFFICIENT_SAMPLES: u64 = 5;
/// Truncation cap for the double-quadrature charge check.
pub const BILOCAL_TRUNCATION: u32 = 3;

struct Context {
    cfg: RunConfig,
    basis: ModeBasis,
}

impl Context {
    fn spectrum(&self) -> &RobinSpectrum {
        self.basis.spectrum()
    }

    fn seed(&self, offset: u64) -> u64 {
        self.cfg.seed.wrapping_add(offset)
    }

    fn random_state(&self, offset: u64) -> FieldState {
        FieldState::random(self.basis.truncation(), self.seed(offset))
    }
}

fn basis_for(cfg: &RunConfig, disk: DiskConfig) -> Result<ModeBasis, VerifyError> {
    let spectrum = build_spectrum(&disk)?;
    let run = RunConfig {
        l_max: disk.l_max,
        n_max: disk.n_max,
        ..cfg.clone()
    };
    let grid = run.grid(&spectrum)?;
    Ok(ModeBasis::new(spectrum, grid)?)
}

fn relative(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Runs `cfg.suite`.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport, VerifyError> {
    let disk = cfg.disk();
    disk.validate()?;
    let basis = basis_for(cfg, disk)?;
    let (grid_r, grid_theta) = (basis.grid().n_r(), basis.grid().n_theta());
    let ctx = Context {
        cfg: cfg.clone(),
        basis,
    };
    let mut suites = Vec::new();
    for suite in cfg.suite.expand() {
        let checks = match suite {
            Suite::Spectrum => spectrum_suite(&ctx)?,
            Suite::Basis => basis_suite(&ctx)?,
            Suite::Field => field_suite(&ctx)?,
            Suite::Symmetry => symmetry_suite(&ctx)?,
            Suite::Fock => fock_suite(&ctx)?,
            Suite::All => unreachable!("expanded above"),
        };
        suites.push(SuiteReport {
            suite,
            passed: checks.iter().all(|c| c.passed),
            checks,
        });
    }
    Ok(VerifyReport {
        suite: cfg.suite,
        seed: cfg.seed,
        config: disk,
        grid_r,
        grid_theta,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

fn spectrum_suite(ctx: &Context) -> Result<Vec<IdentityCheck>, VerifyError> {
    let s = ctx.spectrum();
    let trunc = s.truncation();
    let mut mirror: f64 = 0.0;
    for idx in trunc.indices() {
        let (a, b) = (s.entry(idx), s.entry(idx.flipped()));
        mirror = mirror.max((a.x - b.x).abs()).max((a.norm - b.norm).abs());
    }
    let mut dispersion: f64 = 0.0;
    let mu = s.config().mass;
    for e in s.entries() {
        dispersion = dispersion.max(relative(
            e.omega * e.omega,
            e.k * e.k + mu * mu,
            e.omega * e.omega,
        ));
    }
    Ok(vec![
        IdentityCheck::new("root residual / bound", s.worst_residual_ratio()?, 1.0),
        IdentityCheck::new(
            "roots outside their Dirichlet-zero interval",
            s.interlacing_violations()? as f64,
            0.0,
        ),
        IdentityCheck::new("x and norm equal for l and -l", mirror, 0.0),
        IdentityCheck::new(
            "omega^2 = k^2 + mu^2 (relative)",
            dispersion,
            4.0 * f64::EPSILON,
        ),
        IdentityCheck::new(
            "near-degenerate roots across |l|",
            s.near_degeneracies().len() as f64,
            0.0,
        ),
    ])
}

fn basis_suite(ctx: &Context) -> Result<Vec<IdentityCheck>, VerifyError> {
    let b = &ctx.basis;
    let trunc = b.truncation();
    let gram = b.gram_matrix();
    let mut robin: f64 = 0.0;
    let mut weighted: f64 = 0.0;
    let mut conjugate: f64 = 0.0;
    let radius = ctx.cfg.radius;
    for idx in trunc.indices() {
        let (e1, e2) = b.edge_defects(idx)?;
        robin = robin.max(e1);
        weighted = weighted.max(e2);
        for (r, theta) in [(0.3 * radius, 0.4), (0.77 * radius, 2.9), (radius, -1.2)] {
            let plus = b.mode_eval(idx, r, theta)?;
            let minus = b.mode_eval(idx.flipped(), r, theta)?;
            let want = plus.conj() * idx.parity();
            conjugate = conjugate.max((minus - want).norm() / plus.norm().max(1.0));
        }
    }
    let mut checks = vec![
        IdentityCheck::new(
            "Gram matrix - identity (max entry)",
            gram.max_deviation,
            1e-9,
        ),
        IdentityCheck::new("edge condition of every mode (relative)", robin, 1e-9),
        IdentityCheck::new(
            "edge condition of r * mode with lambda + 1 (relative)",
            weighted,
            1e-9,
        ),
        IdentityCheck::new("phi(-l) = (-1)^l conj(phi(l))", conjugate, 1e-14),
    ];
    if let Some(test) = EdgeCompatiblePolynomial::new(ctx.cfg.boundary, radius) {
        let mut residuals = Vec::new();
        for n_max in [4, 8, 12] {
            let disk = DiskConfig {
                l_max: ctx.cfg.l_max.min(2),
                n_max,
                ..ctx.cfg.disk()
            };
            let run = RunConfig {
                grid_r: None,
                grid_theta: None,
                ..ctx.cfg.clone()
            };
            let basis = basis_for(&run, disk)?;
            residuals.push(basis.completeness_residual(|r, theta| test.eval(r, theta)));
        }
        let worst_ratio = residuals
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max);
        checks.push(IdentityCheck::new(
            "completeness residual ratio across n_max 4, 8, 12 (must fall)",
            worst_ratio,
            1.0,
        ));
    }
    Ok(checks)
}

fn field_suite(ctx: &Context) -> Result<Vec<IdentityCheck>, VerifyError> {
    let b = &ctx.basis;
    let s = ctx.spectrum();
    let mut round_trip: f64 = 0.0;
    let mut reality: f64 = 0.0;
    for i in 0..FIELD_SAMPLES {
        let state = ctx.random_state(i).evolve(s, 0.1 * i as f64);
        let t = 0.37 * i as f64;
        let f = synthesize(b, &state, t)?;
        let scale = f
            .phi
            .iter()
            .chain(&f.pi)
            .map(|v| v.abs())
            .fold(1.0, f64::max);
        reality = reality.max(f.max_imaginary / scale);
        round_trip = round_trip.max(analyze(b, &f, state.t0())?.state.distance(&state));
    }

    let mut energy_gap: f64 = 0.0;
    let mut l_gap: f64 = 0.0;
    let mut mode_drift: f64 = 0.0;
    let mut quad_drift: f64 = 0.0;
    let mut hamilton: f64 = 0.0;
    let mut certificate: f64 = 0.0;
    let times = [0.0, 0.9, 2.3, 4.1, 7.7];
    for i in 0..3 {
        let state = ctx.random_state(100 + i);
        let e = energy_mode(s, &state);
        let l = angular_momentum_mode(&state);
        let l_scale: f64 = state
            .truncation()
            .indices()
            .zip(state.amplitudes())
            .map(|(idx, a)| idx.l.abs() as f64 * a.norm_sqr())
            .sum();
        let f = synthesize(b, &state, 0.3)?;
        let wb = energy_integral(b, &f, EnergyForm::WithBoundary)?.value;
        let bulk = energy_integral(b, &f, EnergyForm::Bulk)?.value;
        energy_gap = energy_gap
            .max(relative(wb, e, e))
            .max(relative(bulk, e, e))
            .max(relative(wb, bulk, e));
        l_gap = l_gap.max(relative(
            angular_momentum_integral(b, &f)?.value,
            l,
            l_scale,
        ));

        let generators0 = generator_values(&state);
        let mut evolved = state.clone();
        for _ in 0..100 {
            evolved = evolved.evolve(s, 0.05);
        }
        let generators1 = generator_values(&evolved);
        mode_drift = mode_drift
            .max(relative(energy_mode(s, &evolved), e, e))
            .max(relative(angular_momentum_mode(&evolved), l, l_scale));
        for (g0, g1) in generators0.iter().zip(&generators1) {
            mode_drift = mode_drift
                .max(relative(g1.number, g0.number, state.norm_sqr()))
                .max((g1.flip - g0.flip).norm() / state.norm_sqr());
        }
        for &t in &times {
            let ft = synthesize(b, &state, t)?;
            quad_drift = quad_drift
                .max(relative(
                    energy_integral(b, &ft, EnergyForm::WithBoundary)?.value,
                    e,
                    e,
                ))
                .max(relative(
                    angular_momentum_integral(b, &ft)?.value,
                    l,
                    l_scale,
                ));
        }

        let (r1, r2) = hamilton_residuals(b, &state, 0.41)?;
        hamilton = hamilton.max(r1).max(r2);
        certificate = certificate.max(solution_certificate(b, |t| state.evolve(s, t), &times)?);
    }
    Ok(vec![
        IdentityCheck::new(
            "analyze(synthesize(a)) - a, 20 random states",
            round_trip,
            1e-8,
        ),
        IdentityCheck::new(
            "imaginary part of synthesized fields (relative)",
            reality,
            MODE_TOL,
        ),
        IdentityCheck::new(
            "energy: edge-term, bulk and mode forms pairwise (relative)",
            energy_gap,
            QUADRATURE_TOL,
        ),
        IdentityCheck::new(
            "angular momentum: integral vs mode form (relative)",
            l_gap,
            QUADRATURE_TOL,
        ),
        IdentityCheck::new(
            "H, L, N, Q drift over 100 evolve steps (relative)",
            mode_drift,
            MODE_TOL,
        ),
        IdentityCheck::new(
            "H, L integrals at 5 times vs initial (relative)",
            quad_drift,
            QUADRATURE_TOL,
        ),
        IdentityCheck::new(
            "Hamilton equations, projected residual (relative)",
            hamilton,
            1e-9,
        ),
        IdentityCheck::new(
            "solution certificate of an evolved state",
            certificate,
            1e-8,
        ),
    ])
}

fn symmetry_suite(ctx: &Context) -> Result<Vec<IdentityCheck>, VerifyError> {
    let b = &ctx.basis;
    let s = ctx.spectrum();
    let trunc = b.truncation();
    let state = ctx.random_state(200);
    let e = energy_mode(s, &state);
    let l = angular_momentum_mode(&state);

    let h_pick = charge_mode_form(s, &KernelCoefficients::energy(trunc), &state);
    let l_pick = charge_mode_form(s, &KernelCoefficients::angular_momentum(trunc), &state);
    let mut hermitian: f64 = 0.0;
    let mut conserved: f64 = 0.0;
    for i in 0..COEFFICIENT_SAMPLES {
        let c = KernelCoefficients::random_valid(trunc, ctx.seed(300 + i));
        let st = ctx.random_state(400 + i);
        let q = charge_mode_form_complex(s, &c, &st);
        let scale = charge_scale(s, &c, &st);
        hermitian = hermitian.max(q.im.abs() / scale);
        for t in [0.5, 3.3, 11.0] {
            conserved = conserved.max(relative(
                charge_mode_form(s, &c, &st.evolve(s, t)),
                q.re,
                scale,
            ));
        }
    }

    // double quadrature at a reduced truncation
    let reduced = DiskConfig {
        l_max: ctx.cfg.l_max.min(BILOCAL_TRUNCATION),
        n_max: ctx.cfg.n_max.min(BILOCAL_TRUNCATION),
        ..ctx.cfg.disk()
    };
    let small = basis_for(
        &RunConfig {
            grid_r: None,
            grid_theta: None,
            ..ctx.cfg.clone()
        },
        reduced,
    )?;
    let mut bilocal: f64 = 0.0;
    let mut edge: f64 = 0.0;
    for i in 0..3 {
        let c = KernelCoefficients::random_valid(small.truncation(), ctx.seed(500 + i));
        let st = FieldState::random(small.truncation(), ctx.seed(600 + i));
        let m = KernelMatrices::build(&small, &c)?;
        let want = charge_mode_form(small.spectrum(), &c, &st);
        let got = charge_bilocal_integral(&small, &m, &st, 0.25 * i as f64)?;
        bilocal = bilocal.max(relative(got, want, charge_scale(small.spectrum(), &c, &st)));
        let kernel = BilocalKernel::new(&small, &c)?;
        for kind in [KernelKind::G, KernelKind::HOverR1, KernelKind::F] {
            edge =
                edge.max(kernel.edge_defect(kind, 0.7 + i as f64, (0.45 * ctx.cfg.radius, 1.9))?);
        }
    }

    // genuine symmetries
    let mut sym_cert: f64 = 0.0;
    let mut sym_flow: f64 = 0.0;
    let mut sym_energy: f64 = 0.0;
    let times = [0.0, 0.6, 1.9, 3.4];
    let l0 = ctx.cfg.l_max.min(1) as i32;
    let rotations: Vec<Transform> = if l0 > 0 {
        [Axis::One, Axis::Two, Axis::Three]
            .into_iter()
            .map(|axis| Transform::PairRotation {
                l: l0,
                n: 1,
                axis,
                angle: 0.9,
            })
            .collect()
    } else {
        Vec::new()
    };
    let transforms: Vec<Transform> = std::iter::once(Transform::Phase {
        mode: ModeIndex::new(0, 1),
        angle: 1.3,
    })
    .chain(rotations)
    .collect();
    for t in &transforms {
        let mapped = |time: f64| -> FieldState {
            let at = state.evolve(s, time);
            match *t {
                Transform::Phase { mode, angle } => apply_u1(&at, mode, angle, s),
                Transform::PairRotation { l, n, axis, angle } => {
                    apply_su2(&at, l, n, axis, angle, s)
                }
                Transform::FrozenMixing { .. } => unreachable!("not a symmetry"),
            }
            .expect("transform modes lie in the truncation")
        };
        sym_cert = sym_cert.max(solution_certificate(b, mapped, &times)?);
        sym_flow = sym_flow.max(flow_commutation_defect(s, &state, t, 1.7)?);
        sym_energy = sym_energy.max(relative(energy_mode(s, &t.apply(s, &state)?), e, e));
    }

    // the two-frequency mixing: conserved generator, not a symmetry
    let (first, second) = mixing_pair(s)?;
    let dw = (s.omega(second) - s.omega(first)).abs();
    let span = 1.0 / dw;
    let mix_times: Vec<f64> = (0..5).map(|i| span * i as f64 / 4.0).collect();
    let alpha = std::f64::consts::FRAC_PI_2;
    let excited = FieldState::zeros(trunc)
        .with_amplitude(first, Complex64::new(1.0, 0.0))
        .with_amplitude(second, Complex64::new(0.0, 1.0));
    let mixed = |time: f64| {
        counterexample_transform(
            s,
            &excited.evolve(s, time),
            first,
            second,
            MixingVariant::Plus,
            alpha,
            time,
        )
        .expect("pair lies in the truncation")
    };
    let mix_cert = solution_certificate(b, mixed, &mix_times)?;
    let energies: Vec<f64> = mix_times
        .iter()
        .map(|&t| energy_mode(s, &mixed(t)))
        .collect();
    let e_lo = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let e_hi = energies.iter().cloned().fold(0.0, f64::max);

    Ok(vec![
        IdentityCheck::new(
            "energy-selecting coefficients give H (relative)",
            relative(h_pick, e, e),
            MODE_TOL,
        ),
        IdentityCheck::new(
            "angular-momentum-selecting coefficients give L",
            relative(l_pick, l, e),
            MODE_TOL,
        ),
        IdentityCheck::new(
            "imaginary part of the mode-form charge (relative)",
            hermitian,
            MODE_TOL,
        ),
        IdentityCheck::new("charge drift under evolve (relative)", conserved, MODE_TOL),
        IdentityCheck::new(
            "double-quadrature charge vs mode form (relative, reduced truncation)",
            bilocal,
            QUADRATURE_TOL,
        ),
        IdentityCheck::new("kernel edge conditions g, h/r1, f/(r1 r2)", edge, 1e-9),
        IdentityCheck::new(
            "U(1) and SU(2) images: solution certificate",
            sym_cert,
            1e-8,
        ),
        IdentityCheck::new(
            "U(1) and SU(2) images: flow commutation",
            sym_flow,
            MODE_TOL,
        ),
        IdentityCheck::new(
            "U(1) and SU(2) images: energy (relative)",
            sym_energy,
            1e-14,
        ),
        IdentityCheck::violated(
            format!(
                "two-frequency mixing ({},{})-({},{}) is not a symmetry: solution certificate",
                first.l, first.n, second.l, second.n
            ),
            mix_cert,
            0.05,
        ),
        IdentityCheck::violated(
            "two-frequency mixing changes the energy between snapshots (relative)",
            (e_hi - e_lo) / e_hi,
            1e-3,
        ),
    ])
}

/// Sum of the absolute values of the mode-form terms.
fn charge_scale(s: &RobinSpectrum, c: &KernelCoefficients, state: &FieldState) -> f64 {
    let trunc = state.truncation();
    let a = state.amplitudes();
    trunc
        .indices()
        .enumerate()
        .map(|(p, idx)| {
            let w = s.omega(idx);
            let q = trunc.flipped_position(p);
            (c.alpha_plus(idx).norm() * w * (a[p].norm() * a[q].norm()))
                + (c.alpha_minus(idx) * w + c.beta(idx)).abs() * a[p].norm_sqr()
        })
        .sum::<f64>()
        .max(f64::MIN_POSITIVE)
}

/// Lowest radial mode and the highest one kept (or `(1, 1)` when only one
/// radial mode is kept). The energy of a mixed pair varies by at most
/// `Δω / ω`, so the widest gap makes the failure easiest to see.
fn mixing_pair(s: &RobinSpectrum) -> Result<(ModeIndex, ModeIndex), VerifyError> {
    let trunc = s.truncation();
    let first = ModeIndex::new(0, 1);
    let second = if trunc.n_max >= 2 {
        ModeIndex::new(0, trunc.n_max)
    } else if trunc.l_max >= 1 {
        ModeIndex::new(1, 1)
    } else {
        return Err(VerifyError::Unsupported(
            "the mixing check needs two modes of different frequency".into(),
        ));
    };
    Ok((first, second))
}

fn fock_suite(ctx: &Context) -> Result<Vec<IdentityCheck>, VerifyError> {
    const CAP: usize = 6;
    let s = ctx.spectrum();
    if s.truncation().l_max == 0 {
        return Err(VerifyError::Unsupported(
            "the fock suite needs l_max >= 1".into(),
        ));
    }
    let plus = ModeIndex::new(1, 1);
    let pair = SectorSpace::from_spectrum(s, &[plus, plus.flipped()], CAP)?;
    let mut checks = algebra_report(&pair)?;
    checks.push(broken_degeneracy_check(&pair, plus, 1e-3)?);

    let alpha = 0.7;
    let cases = [
        ("N", ConjugationCase::Number(plus)),
        (
            "T1",
            ConjugationCase::Pair {
                l: 1,
                n: 1,
                axis: Axis::One,
            },
        ),
        (
            "T2",
            ConjugationCase::Pair {
                l: 1,
                n: 1,
                axis: Axis::Two,
            },
        ),
        (
            "T3",
            ConjugationCase::Pair {
                l: 1,
                n: 1,
                axis: Axis::Three,
            },
        ),
    ];
    for (name, case) in cases {
        let o = conjugation_report(&pair, case, alpha)?;
        checks.push(IdentityCheck::new(
            format!("exp(i a {name}) a exp(-i a {name}) closed form"),
            o.deviation,
            1e-10,
        ));
        checks.push(IdentityCheck::new(
            format!("exp(i a {name}) unitary"),
            o.unitarity,
            MODE_TOL,
        ));
        checks.push(IdentityCheck::new(
            format!("exp(i a {name}) leaves the vacuum fixed"),
            o.vacuum_shift,
            0.0,
        ));
    }

    let (first, second) = mixing_pair(s)?;
    let distinct = SectorSpace::from_spectrum(s, &[first, second], CAP)?;
    for (name, variant) in [("Q+", MixingVariant::Plus), ("Q-", MixingVariant::Minus)] {
        let t = 0.9;
        let o = conjugation_report(
            &distinct,
            ConjugationCase::Mixing {
                first,
                second,
                variant,
                t,
            },
            alpha,
        )?;
        checks.push(IdentityCheck::new(
            format!("exp(i a {name}(t)) a exp(-i a {name}(t)) closed form"),
            o.deviation,
            1e-10,
        ));
        checks.push(IdentityCheck::new(
            format!("exp(i a {name}(t)) unitary"),
            o.unitarity,
            MODE_TOL,
        ));
        let mut worst: f64 = 0.0;
        let mut vacuum: f64 = 0.0;
        for t in [0.0, 0.9, 4.2] {
            let (r, v) = heisenberg_conservation(&distinct, first, second, variant, t)?;
            worst = worst.max(r);
            vacuum = vacuum.max(v);
        }
        checks.push(IdentityCheck::new(
            format!("i d{name}/dt + [{name}, H] = 0 (relative)"),
            worst,
            MODE_TOL,
        ));
        checks.push(IdentityCheck::new(
            format!("<0|{name}(t)|0> = 0"),
            vacuum,
            0.0,
        ));
    }
    Ok(checks)
}
