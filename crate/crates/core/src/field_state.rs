//! Classical phase-space points in mode coordinates.
//!
//! A [`FieldState`] holds amplitudes `a(l,n)` referred to a time `t0`; the
//! field at time `t` is
//! `φ = Σ (2ω)^{-1/2} [e^{-iω(t-t0)} φ_{l,n} a + c.c.]` and
//! `π = r ∂_t φ`. Evolution is exact: moving the reference time multiplies
//! each amplitude by a phase.

use num_complex::Complex64;
use rand::{seq::index::sample, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mode_basis::{BasisError, Channel, ModeBasis};
use crate::numerics::{pairwise_sum, QuadratureGrid};
use crate::spectrum::{ModeIndex, RobinSpectrum, Truncation};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20190531;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("expected {expected} amplitudes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite amplitude at (l = {l}, n = {n})")]
    NonFinite { l: i32, n: u32 },
    #[error("state truncation {state:?} does not match basis truncation {basis:?}")]
    TruncationMismatch {
        state: Truncation,
        basis: Truncation,
    },
    #[error("field samples were taken on a different grid than the basis uses")]
    GridMismatch,
    #[error("field samples carry no r = R ring, needed for the boundary term")]
    MissingBoundaryRing,
    #[error("cannot excite {requested} modes out of {available}")]
    TooManyExcited { requested: usize, available: usize },
    #[error("at least one sample time is required")]
    NoTimes,
    #[error(transparent)]
    Basis(#[from] BasisError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    truncation: Truncation,
    amplitudes: Vec<Complex64>,
    t0: f64,
}

impl FieldState {
    pub fn zeros(truncation: Truncation) -> Self {
        Self {
            truncation,
            amplitudes: vec![Complex64::new(0.0, 0.0); truncation.len()],
            t0: 0.0,
        }
    }

    pub fn from_amplitudes(
        truncation: Truncation,
        amplitudes: Vec<Complex64>,
        t0: f64,
    ) -> Result<Self, FieldError> {
        if amplitudes.len() != truncation.len() {
            return Err(FieldError::Length {
                expected: truncation.len(),
                got: amplitudes.len(),
            });
        }
        if let Some(p) = amplitudes
            .iter()
            .position(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            let idx = truncation.index_at(p);
            return Err(FieldError::NonFinite { l: idx.l, n: idx.n });
        }
        if !t0.is_finite() {
            return Err(FieldError::NonFinite { l: 0, n: 0 });
        }
        Ok(Self {
            truncation,
            amplitudes,
            t0,
        })
    }

    /// Complex Gaussian amplitudes (unit mean square) on every mode.
    pub fn random(truncation: Truncation, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amplitudes = (0..truncation.len()).map(|_| gaussian(&mut rng)).collect();
        Self {
            truncation,
            amplitudes,
            t0: 0.0,
        }
    }

    /// Complex Gaussian amplitudes on `excited` modes chosen at random.
    pub fn random_sparse(
        truncation: Truncation,
        seed: u64,
        excited: usize,
    ) -> Result<Self, FieldError> {
        if excited > truncation.len() {
            return Err(FieldError::TooManyExcited {
                requested: excited,
                available: truncation.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = sample(&mut rng, truncation.len(), excited).into_vec();
        chosen.sort_unstable();
        let mut state = Self::zeros(truncation);
        for p in chosen {
            state.amplitudes[p] = gaussian(&mut rng);
        }
        Ok(state)
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Amplitude of `idx`, zero outside the truncation.
    pub fn amplitude(&self, idx: ModeIndex) -> Complex64 {
        self.truncation
            .position(idx)
            .map_or(Complex64::new(0.0, 0.0), |p| self.amplitudes[p])
    }

    /// Copy with `a(idx)` replaced. Panics outside the truncation.
    pub fn with_amplitude(mut self, idx: ModeIndex, value: Complex64) -> Self {
        let p = self
            .truncation
            .position(idx)
            .unwrap_or_else(|| panic!("{idx:?} outside the truncation"));
        self.amplitudes[p] = value;
        self
    }

    pub fn with_amplitudes(mut self, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), self.amplitudes.len());
        self.amplitudes = amplitudes;
        self
    }

    /// `a ↦ e^{-iωΔt} a`, `t0 ↦ t0 + Δt`.
    pub fn evolve(&self, spectrum: &RobinSpectrum, dt: f64) -> Self {
        let omegas = spectrum.omegas();
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&omegas)
            .map(|(a, w)| a * Complex64::from_polar(1.0, -w * dt))
            .collect();
        Self {
            truncation: self.truncation,
            amplitudes,
            t0: self.t0 + dt,
        }
    }

    /// Same trajectory, amplitudes referred to time `t`.
    pub fn rebase(&self, spectrum: &RobinSpectrum, t: f64) -> Self {
        let mut out = self.evolve(spectrum, t - self.t0);
        out.t0 = t;
        out
    }

    /// Max-norm distance between amplitude vectors (reference times ignored).
    pub fn distance(&self, other: &FieldState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise_sum(
            &self
                .amplitudes
                .iter()
                .map(|a| a.norm_sqr())
                .collect::<Vec<_>>(),
        )
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Field samples at one time on a quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub grid: QuadratureGrid,
    pub timestamp: f64,
    /// `φ` per node, radial-major.
    pub phi: Vec<f64>,
    /// `π = r ∂_t φ` per node.
    pub pi: Vec<f64>,
    /// `φ(R, θ_j)` on the edge ring, when sampled.
    pub boundary_phi: Option<Vec<f64>>,
    /// Largest imaginary part discarded while synthesising.
    pub max_imaginary: f64,
}

impl FieldGrid {
    /// Samples without an edge ring.
    pub fn from_samples(grid: QuadratureGrid, timestamp: f64, phi: Vec<f64>, pi: Vec<f64>) -> Self {
        Self {
            grid,
            timestamp,
            phi,
            pi,
            boundary_phi: None,
            max_imaginary: 0.0,
        }
    }

    /// `π / r` per node.
    pub fn velocity(&self) -> Vec<f64> {
        let nt = self.grid.n_theta();
        self.pi
            .iter()
            .enumerate()
            .map(|(p, v)| v / self.grid.radial_nodes()[p / nt])
            .collect()
    }
}

fn check_state(basis: &ModeBasis, state: &FieldState) -> Result<(), FieldError> {
    if state.truncation != basis.truncation() {
        return Err(FieldError::TruncationMismatch {
            state: state.truncation,
            basis: basis.truncation(),
        });
    }
    Ok(())
}

fn check_grid(basis: &ModeBasis, fields: &FieldGrid) -> Result<(), FieldError> {
    let n = basis.grid().n_nodes();
    if !basis.grid().same_layout(&fields.grid) || fields.phi.len() != n || fields.pi.len() != n {
        return Err(FieldError::GridMismatch);
    }
    Ok(())
}

/// Coefficients `w` with `Σ w_m φ_m = Σ conj(c_m) conj(φ_m)`, using
/// `conj(φ_{l,n}) = (-1)^l φ_{-l,n}`.
fn conjugate_image(trunc: Truncation, c: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); c.len()];
    for (p, idx) in trunc.indices().enumerate() {
        out[trunc.flipped_position(p)] = c[p].conj() * idx.parity();
    }
    out
}

fn real_part(basis: &ModeBasis, c: &[Complex64], channel: Channel) -> (Vec<f64>, f64) {
    let trunc = basis.truncation();
    let direct = basis.reconstruct(c, channel);
    let mirror = basis.reconstruct(&conjugate_image(trunc, c), channel);
    let mut worst: f64 = 0.0;
    let values = direct
        .iter()
        .zip(&mirror)
        .map(|(a, b)| {
            let s = a + b;
            worst = worst.max(s.im.abs());
            s.re
        })
        .collect();
    (values, worst)
}

/// `a e^{-iω(t-t0)} / sqrt(2ω)` per mode.
fn positive_frequency(basis: &ModeBasis, state: &FieldState, t: f64) -> Vec<Complex64> {
    let omegas = basis.spectrum().omegas();
    state
        .amplitudes
        .iter()
        .zip(&omegas)
        .map(|(a, w)| a * Complex64::from_polar(1.0, -w * (t - state.t0)) / (2.0 * w).sqrt())
        .collect()
}

/// `φ` and `π` on the basis grid at time `t`, plus the edge ring.
pub fn synthesize(basis: &ModeBasis, state: &FieldState, t: f64) -> Result<FieldGrid, FieldError> {
    check_state(basis, state)?;
    let omegas = basis.spectrum().omegas();
    let z = positive_frequency(basis, state, t);
    let (phi, im_phi) = real_part(basis, &z, Channel::Value);
    let dz: Vec<Complex64> = z
        .iter()
        .zip(&omegas)
        .map(|(z, w)| z * Complex64::new(0.0, -w))
        .collect();
    let (velocity, im_vel) = real_part(basis, &dz, Channel::Value);
    let grid = basis.grid().clone();
    let nt = grid.n_theta();
    let pi = velocity
        .iter()
        .enumerate()
        .map(|(p, v)| v * grid.radial_nodes()[p / nt])
        .collect();
    let trunc = basis.truncation();
    let edge_direct = basis.reconstruct_edge(&z);
    let edge_mirror = basis.reconstruct_edge(&conjugate_image(trunc, &z));
    let mut im_edge: f64 = 0.0;
    let boundary_phi = edge_direct
        .iter()
        .zip(&edge_mirror)
        .map(|(a, b)| {
            let s = a + b;
            im_edge = im_edge.max(s.im.abs());
            s.re
        })
        .collect();
    Ok(FieldGrid {
        grid,
        timestamp: t,
        phi,
        pi,
        boundary_phi: Some(boundary_phi),
        max_imaginary: im_phi.max(im_vel).max(im_edge),
    })
}

/// Amplitudes recovered from sampled fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    /// Amplitudes referred to the requested reference time.
    pub state: FieldState,
    /// `‖φ - Pφ‖² + ‖π/r - P(π/r)‖²`, the power outside the truncation.
    pub residual_power: f64,
}

/// `a(l,n) = ∫ r dr dθ (sqrt(2ω)/2) e^{iω(t - t_ref)} φ*_{l,n} [φ + (i/ω) π/r]`.
pub fn analyze(basis: &ModeBasis, fields: &FieldGrid, t_ref: f64) -> Result<Analysis, FieldError> {
    check_grid(basis, fields)?;
    let omegas = basis.spectrum().omegas();
    let velocity = fields.velocity();
    let c_phi = basis.project_real(&fields.phi);
    let c_vel = basis.project_real(&velocity);
    let dt = fields.timestamp - t_ref;
    let amplitudes = c_phi
        .iter()
        .zip(&c_vel)
        .zip(&omegas)
        .map(|((p, v), w)| {
            (p + Complex64::new(0.0, 1.0 / w) * v)
                * ((2.0 * w).sqrt() / 2.0)
                * Complex64::from_polar(1.0, w * dt)
        })
        .collect();
    let residual_power = leakage(basis, &fields.phi, &c_phi) + leakage(basis, &velocity, &c_vel);
    Ok(Analysis {
        state: FieldState {
            truncation: basis.truncation(),
            amplitudes,
            t0: t_ref,
        },
        residual_power,
    })
}

/// `‖u - Σ c_m φ_m‖²` over the grid.
fn leakage(basis: &ModeBasis, values: &[f64], coefficients: &[Complex64]) -> f64 {
    let rebuilt = basis.reconstruct(coefficients, Channel::Value);
    let sq: Vec<f64> = values
        .iter()
        .zip(&rebuilt)
        .map(|(v, p)| (Complex64::new(*v, 0.0) - p).norm_sqr())
        .collect();
    basis.grid().integrate_values(&sq).max(0.0)
}

/// `Σ ω |a|²`.
pub fn energy_mode(spectrum: &RobinSpectrum, state: &FieldState) -> f64 {
    let omegas = spectrum.omegas();
    let terms: Vec<f64> = state
        .amplitudes
        .iter()
        .zip(&omegas)
        .map(|(a, w)| w * a.norm_sqr())
        .collect();
    pairwise_sum(&terms)
}

/// `Σ l |a|²`.
pub fn angular_momentum_mode(state: &FieldState) -> f64 {
    let terms: Vec<f64> = state
        .truncation
        .indices()
        .zip(&state.amplitudes)
        .map(|(idx, a)| idx.l as f64 * a.norm_sqr())
        .collect();
    pairwise_sum(&terms)
}

/// Which integral representation of the energy to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyForm {
    /// Gradient-squared density plus the `-½ λ ∮ φ²` edge term.
    WithBoundary,
    /// `½ (π/r)² - ½ φ (Δ - μ²) φ` with a spectral Laplacian.
    Bulk,
}

/// A quadrature value with an estimate of its error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn estimate(grid: &QuadratureGrid, density: &[f64], extra: f64) -> Estimate {
    let weights = grid.measure_weights();
    let terms: Vec<f64> = weights.iter().zip(density).map(|(w, d)| w * d).collect();
    let value = pairwise_sum(&terms);
    let magnitude = pairwise_sum(&terms.iter().map(|t| t.abs()).collect::<Vec<_>>());
    let rounding = f64::EPSILON * magnitude * (terms.len() as f64).log2().max(1.0);
    Estimate {
        value,
        error: rounding + extra,
    }
}

/// Field energy from grid samples.
///
/// Derivatives come from the projection of `φ` on the basis: `∂_r` through
/// the analytic `J'`, `∂_θ` and `Δ - μ²` spectrally. The error estimate adds
/// the rounding bound of the node sum to the power `φ` leaks outside the
/// truncation, scaled by the largest `ω²`.
pub fn energy_integral(
    basis: &ModeBasis,
    fields: &FieldGrid,
    form: EnergyForm,
) -> Result<Estimate, FieldError> {
    check_grid(basis, fields)?;
    let spectrum = basis.spectrum();
    let cfg = spectrum.config();
    let trunc = basis.truncation();
    let velocity = fields.velocity();
    let c = basis.project_real(&fields.phi);
    let omegas = spectrum.omegas();
    let w_max = omegas.iter().cloned().fold(0.0, f64::max);
    let leak = leakage(basis, &fields.phi, &c).sqrt() * w_max * w_max;
    match form {
        EnergyForm::WithBoundary => {
            let ring = fields
                .boundary_phi
                .as_ref()
                .ok_or(FieldError::MissingBoundaryRing)?;
            let d_r = basis.reconstruct(&c, Channel::RadialDerivative);
            let c_theta: Vec<Complex64> = trunc
                .indices()
                .zip(&c)
                .map(|(idx, c)| c * Complex64::new(0.0, idx.l as f64))
                .collect();
            let d_theta = basis.reconstruct(&c_theta, Channel::Value);
            let nt = fields.grid.n_theta();
            let mu2 = cfg.mass * cfg.mass;
            let density: Vec<f64> = (0..fields.phi.len())
                .map(|p| {
                    let r = fields.grid.radial_nodes()[p / nt];
                    let ang = d_theta[p].re / r;
                    0.5 * (velocity[p] * velocity[p]
                        + d_r[p].re * d_r[p].re
                        + ang * ang
                        + mu2 * fields.phi[p] * fields.phi[p])
                })
                .collect();
            let mut e = estimate(&fields.grid, &density, leak);
            let lambda = spectrum.boundary().lambda().unwrap_or(0.0);
            let sq: Vec<f64> = ring.iter().map(|v| v * v).collect();
            e.value -= 0.5 * lambda * fields.grid.integrate_ring(&sq);
            Ok(e)
        }
        EnergyForm::Bulk => {
            let scaled: Vec<Complex64> = c.iter().zip(&omegas).map(|(c, w)| c * (w * w)).collect();
            // -(Δ - μ²) φ
            let minus_kg = basis.reconstruct(&scaled, Channel::Value);
            let density: Vec<f64> = (0..fields.phi.len())
                .map(|p| 0.5 * velocity[p] * velocity[p] + 0.5 * fields.phi[p] * minus_kg[p].re)
                .collect();
            Ok(estimate(&fields.grid, &density, leak))
        }
    }
}

/// `-∫ r dr dθ (π/r) ∂_θ φ`, with `∂_θ` taken spectrally.
pub fn angular_momentum_integral(
    basis: &ModeBasis,
    fields: &FieldGrid,
) -> Result<Estimate, FieldError> {
    check_grid(basis, fields)?;
    let trunc = basis.truncation();
    let velocity = fields.velocity();
    let c = basis.project_real(&fields.phi);
    let c_theta: Vec<Complex64> = trunc
        .indices()
        .zip(&c)
        .map(|(idx, c)| c * Complex64::new(0.0, idx.l as f64))
        .collect();
    let d_theta = basis.reconstruct(&c_theta, Channel::Value);
    let density: Vec<f64> = velocity
        .iter()
        .zip(&d_theta)
        .map(|(v, d)| -v * d.re)
        .collect();
    let leak = leakage(basis, &fields.phi, &c).sqrt() * trunc.l_max as f64;
    Ok(estimate(&fields.grid, &density, leak))
}

/// Largest distance between the amplitudes analysed from
/// `trajectory(t)` sampled at each `t` in `times` and those analysed at the
/// first time, all referred to time zero.
///
/// A family of states that describes one solution gives round-off; a family
/// that does not gives the size of the mismatch.
pub fn solution_certificate<F>(
    basis: &ModeBasis,
    trajectory: F,
    times: &[f64],
) -> Result<f64, FieldError>
where
    F: Fn(f64) -> FieldState,
{
    let (&first, rest) = times.split_first().ok_or(FieldError::NoTimes)?;
    let reference = analyze(basis, &synthesize(basis, &trajectory(first), first)?, 0.0)?.state;
    let mut worst: f64 = 0.0;
    for &t in rest {
        let a = analyze(basis, &synthesize(basis, &trajectory(t), t)?, 0.0)?.state;
        worst = worst.max(a.distance(&reference));
    }
    Ok(worst)
}

/// Residuals of `∂_t φ = π/r` and `∂_t(π/r) = (Δ - μ²) φ` at time `t`:
/// the max amplitude of each projected difference over the max amplitude of
/// the projected right-hand side.
///
/// Time derivatives are sixth-order central differences of synthesised
/// snapshots, so this checks the synthesis against the equations of motion
/// rather than against itself.
pub fn hamilton_residuals(
    basis: &ModeBasis,
    state: &FieldState,
    t: f64,
) -> Result<(f64, f64), FieldError> {
    let omegas = basis.spectrum().omegas();
    let w_max = omegas.iter().cloned().fold(0.0, f64::max);
    let h = 0.02 / w_max;
    const STENCIL: [(f64, f64); 6] = [
        (-3.0, -1.0 / 60.0),
        (-2.0, 3.0 / 20.0),
        (-1.0, -3.0 / 4.0),
        (1.0, 3.0 / 4.0),
        (2.0, -3.0 / 20.0),
        (3.0, 1.0 / 60.0),
    ];
    let n = basis.grid().n_nodes();
    let mut d_phi = vec![0.0; n];
    let mut d_vel = vec![0.0; n];
    for (shift, weight) in STENCIL {
        let snap = synthesize(basis, state, t + shift * h)?;
        let vel = snap.velocity();
        for p in 0..n {
            d_phi[p] += weight * snap.phi[p] / h;
            d_vel[p] += weight * vel[p] / h;
        }
    }
    let now = synthesize(basis, state, t)?;
    let vel = now.velocity();
    let c_phi = basis.project_real(&now.phi);
    let kg: Vec<Complex64> = c_phi
        .iter()
        .zip(&omegas)
        .map(|(c, w)| -c * (w * w))
        .collect();
    let kg_phi = basis.reconstruct(&kg, Channel::Value);
    let first: Vec<f64> = d_phi.iter().zip(&vel).map(|(d, v)| d - v).collect();
    let second: Vec<f64> = d_vel.iter().zip(&kg_phi).map(|(d, k)| d - k.re).collect();
    let max_abs = |c: Vec<Complex64>| c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let vel_scale = max_abs(basis.project_real(&vel)).max(f64::MIN_POSITIVE);
    let kg_scale = kg
        .iter()
        .map(|v| v.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    Ok((
        max_abs(basis.project_real(&first)) / vel_scale,
        max_abs(basis.project_real(&second)) / kg_scale,
    ))
}
