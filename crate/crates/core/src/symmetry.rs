//! Bilocal conserved charges and the finite transformations they generate.
//!
//! A charge is parameterised by [`KernelCoefficients`] `(α₊, α₋, β)` over the
//! truncation. Its kernels are
//!
//! - `g(1;2) = Σ α₊ φ_m(1) φ_m(2) + Σ α₋ φ_m(1) φ_{-m}(2)`
//! - `h(1;2)/r₁ = i Σ β φ_m(1) φ_{-m}(2)`
//! - `f(1;2) = r₁ r₂ Σ α ω² (same products)`,
//!
//! with `φ_{-m}` short for `φ_{-l,n}`. In mode space the charge reduces to
//! `Σ α₊ (-1)^l ω a*(m) a(-m) + Σ (α₋ ω + β) (-1)^l |a(m)|²`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field_state::{synthesize, FieldError, FieldState};
use crate::mode_basis::{BasisError, ModeBasis};
use crate::numerics::pairwise_sum;
use crate::spectrum::{Boundary, ModeIndex, RobinSpectrum, Truncation};

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("kernel coefficients violate {} constraint(s): {}", .0.len(), list(.0))]
    InvalidCoefficients(Vec<Violation>),
    #[error("coefficient table covers {coefficients:?}, basis covers {basis:?}")]
    TruncationMismatch {
        coefficients: Truncation,
        basis: Truncation,
    },
    #[error("the paired rotation needs l > 0, got l = {0}")]
    NonPositiveOrder(i32),
    #[error("mode {0:?} is outside the truncation")]
    UnknownMode(ModeIndex),
    #[error("modes {first:?} and {second:?} share the frequency {omega}; the mixing needs distinct frequencies")]
    DegeneratePair {
        first: ModeIndex,
        second: ModeIndex,
        omega: f64,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One broken constraint, reported at the non-negative `l` of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("conj(alpha_plus({l},{n})) != alpha_plus({},{n})", -l)]
    AlphaPlusConjugation { l: i32, n: u32 },
    #[error("alpha_minus({l},{n}) != alpha_minus({},{n})", -l)]
    AlphaMinusSymmetry { l: i32, n: u32 },
    #[error("beta({l},{n}) != -beta({},{n})", -l)]
    BetaAntisymmetry { l: i32, n: u32 },
    #[error("non-finite coefficient at ({l},{n})")]
    NonFinite { l: i32, n: u32 },
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// `(α₊, α₋, β)` over a truncation, stored by truncation position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCoefficients {
    truncation: Truncation,
    alpha_plus: Vec<Complex64>,
    alpha_minus: Vec<f64>,
    beta: Vec<f64>,
}

impl KernelCoefficients {
    pub fn zeros(truncation: Truncation) -> Self {
        let len = truncation.len();
        Self {
            truncation,
            alpha_plus: vec![Complex64::new(0.0, 0.0); len],
            alpha_minus: vec![0.0; len],
            beta: vec![0.0; len],
        }
    }

    /// `α₋(l,n) = (-1)^l`; the charge is the energy.
    pub fn energy(truncation: Truncation) -> Self {
        let mut c = Self::zeros(truncation);
        for (p, idx) in truncation.indices().enumerate() {
            c.alpha_minus[p] = idx.parity();
        }
        c
    }

    /// `β(l,n) = (-1)^l l`; the charge is the angular momentum.
    pub fn angular_momentum(truncation: Truncation) -> Self {
        let mut c = Self::zeros(truncation);
        for (p, idx) in truncation.indices().enumerate() {
            c.beta[p] = idx.parity() * idx.l as f64;
        }
        c
    }

    /// Uniform random coefficients in `[-1, 1]` satisfying every constraint.
    pub fn random_valid(truncation: Truncation, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = Self::zeros(truncation);
        for (p, idx) in truncation.indices().enumerate() {
            if idx.l < 0 {
                continue;
            }
            let q = truncation.flipped_position(p);
            let re: f64 = rng.random_range(-1.0..=1.0);
            let im: f64 = if idx.l == 0 {
                0.0
            } else {
                rng.random_range(-1.0..=1.0)
            };
            c.alpha_plus[p] = Complex64::new(re, im);
            c.alpha_plus[q] = Complex64::new(re, -im);
            let am: f64 = rng.random_range(-1.0..=1.0);
            c.alpha_minus[p] = am;
            c.alpha_minus[q] = am;
            if idx.l > 0 {
                let b: f64 = rng.random_range(-1.0..=1.0);
                c.beta[p] = b;
                c.beta[q] = -b;
            }
        }
        c
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    fn position(&self, idx: ModeIndex) -> Result<usize, SymmetryError> {
        self.truncation
            .position(idx)
            .ok_or(SymmetryError::UnknownMode(idx))
    }

    pub fn alpha_plus(&self, idx: ModeIndex) -> Complex64 {
        self.truncation
            .position(idx)
            .map_or(Complex64::new(0.0, 0.0), |p| self.alpha_plus[p])
    }

    pub fn alpha_minus(&self, idx: ModeIndex) -> f64 {
        self.truncation
            .position(idx)
            .map_or(0.0, |p| self.alpha_minus[p])
    }

    pub fn beta(&self, idx: ModeIndex) -> f64 {
        self.truncation.position(idx).map_or(0.0, |p| self.beta[p])
    }

    pub fn set_alpha_plus(
        &mut self,
        idx: ModeIndex,
        value: Complex64,
    ) -> Result<(), SymmetryError> {
        let p = self.position(idx)?;
        self.alpha_plus[p] = value;
        Ok(())
    }

    pub fn set_alpha_minus(&mut self, idx: ModeIndex, value: f64) -> Result<(), SymmetryError> {
        let p = self.position(idx)?;
        self.alpha_minus[p] = value;
        Ok(())
    }

    pub fn set_beta(&mut self, idx: ModeIndex, value: f64) -> Result<(), SymmetryError> {
        let p = self.position(idx)?;
        self.beta[p] = value;
        Ok(())
    }

    /// Every constraint violation, in truncation order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (p, idx) in self.truncation.indices().enumerate() {
            let (l, n) = (idx.l, idx.n);
            let (ap, am, b) = (self.alpha_plus[p], self.alpha_minus[p], self.beta[p]);
            if ![ap.re, ap.im, am, b].iter().all(|v| v.is_finite()) {
                out.push(Violation::NonFinite { l, n });
                continue;
            }
            if l < 0 {
                continue;
            }
            let q = self.truncation.flipped_position(p);
            let (apq, amq, bq) = (self.alpha_plus[q], self.alpha_minus[q], self.beta[q]);
            if !(close(ap.re, apq.re) && close(ap.im, -apq.im)) {
                out.push(Violation::AlphaPlusConjugation { l, n });
            }
            if !close(am, amq) {
                out.push(Violation::AlphaMinusSymmetry { l, n });
            }
            if !close(b, -bq) {
                out.push(Violation::BetaAntisymmetry { l, n });
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), SymmetryError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(SymmetryError::InvalidCoefficients(v))
        }
    }

    /// `self + s * other`, for linearity checks.
    pub fn add_scaled(&self, other: &KernelCoefficients, s: f64) -> Self {
        let mut out = self.clone();
        for p in 0..out.alpha_plus.len() {
            out.alpha_plus[p] += other.alpha_plus[p] * s;
            out.alpha_minus[p] += other.alpha_minus[p] * s;
            out.beta[p] += other.beta[p] * s;
        }
        out
    }
}

/// Mode form of the charge as a complex number; its imaginary part is
/// round-off for valid coefficients.
pub fn charge_mode_form_complex(
    spectrum: &RobinSpectrum,
    coefficients: &KernelCoefficients,
    state: &FieldState,
) -> Complex64 {
    let trunc = state.truncation();
    let omegas = spectrum.omegas();
    let a = state.amplitudes();
    let mut re = Vec::with_capacity(2 * trunc.len());
    let mut im = Vec::with_capacity(2 * trunc.len());
    for (p, idx) in trunc.indices().enumerate() {
        let sign = idx.parity();
        let w = omegas[p];
        let q = trunc.flipped_position(p);
        let flip = coefficients.alpha_plus[p] * (sign * w) * a[p].conj() * a[q];
        let diag =
            (coefficients.alpha_minus[p] * w + coefficients.beta[p]) * sign * a[p].norm_sqr();
        re.push(flip.re);
        re.push(diag);
        im.push(flip.im);
    }
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
}

/// Real mode form of the charge.
pub fn charge_mode_form(
    spectrum: &RobinSpectrum,
    coefficients: &KernelCoefficients,
    state: &FieldState,
) -> f64 {
    charge_mode_form_complex(spectrum, coefficients, state).re
}

/// `N_{l,n} = |a(l,n)|²` and `Q_{l,n} = a*(l,n) a(-l,n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorValue {
    pub l: i32,
    pub n: u32,
    pub number: f64,
    pub flip: Complex64,
}

pub fn generator_values(state: &FieldState) -> Vec<GeneratorValue> {
    let trunc = state.truncation();
    let a = state.amplitudes();
    trunc
        .indices()
        .enumerate()
        .map(|(p, idx)| GeneratorValue {
            l: idx.l,
            n: idx.n,
            number: a[p].norm_sqr(),
            flip: a[p].conj() * a[trunc.flipped_position(p)],
        })
        .collect()
}

/// Which bilocal kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// `g(1;2)`
    G,
    /// `h(1;2) / r₁`
    HOverR1,
    /// `f(1;2)`
    F,
}

/// Point-pair evaluators for the kernels of a validated coefficient set.
#[derive(Debug, Clone, Copy)]
pub struct BilocalKernel<'a> {
    basis: &'a ModeBasis,
    coefficients: &'a KernelCoefficients,
}

impl<'a> BilocalKernel<'a> {
    pub fn new(
        basis: &'a ModeBasis,
        coefficients: &'a KernelCoefficients,
    ) -> Result<Self, SymmetryError> {
        if coefficients.truncation != basis.truncation() {
            return Err(SymmetryError::TruncationMismatch {
                coefficients: coefficients.truncation,
                basis: basis.truncation(),
            });
        }
        coefficients.validate()?;
        Ok(Self {
            basis,
            coefficients,
        })
    }

    /// Kernel value at `((r₁, θ₁), (r₂, θ₂))`, both points in the disk.
    pub fn eval(
        &self,
        kind: KernelKind,
        p1: (f64, f64),
        p2: (f64, f64),
    ) -> Result<f64, SymmetryError> {
        let radius = self.basis.spectrum().config().radius;
        for r in [p1.0, p2.0] {
            if !(0.0..=radius * (1.0 + 1e-14)).contains(&r) {
                return Err(BasisError::OutsideDisk { r, radius }.into());
            }
        }
        Ok(self.eval_complex(kind, p1, p2)?.re)
    }

    /// Full complex double sum, evaluated even slightly outside the disk.
    fn eval_complex(
        &self,
        kind: KernelKind,
        p1: (f64, f64),
        p2: (f64, f64),
    ) -> Result<Complex64, SymmetryError> {
        let trunc = self.basis.truncation();
        let spectrum = self.basis.spectrum();
        let c = self.coefficients;
        let mut total = Complex64::new(0.0, 0.0);
        for (p, idx) in trunc.indices().enumerate() {
            let q = trunc.flipped_position(p);
            let (ap, am, b) = (c.alpha_plus[p], c.alpha_minus[p], c.beta[p]);
            let (use_plus, use_pair) = match kind {
                KernelKind::G | KernelKind::F => (ap != Complex64::new(0.0, 0.0), am != 0.0),
                KernelKind::HOverR1 => (false, b != 0.0),
            };
            if !use_plus && !use_pair {
                continue;
            }
            let m1 = self.basis.eval_unchecked(idx, p1.0, p1.1)?;
            let m2 = self.basis.eval_unchecked(idx, p2.0, p2.1)?;
            let f2 = self.basis.eval_unchecked(trunc.index_at(q), p2.0, p2.1)?;
            let term = match kind {
                KernelKind::G => ap * m1 * m2 + am * m1 * f2,
                KernelKind::F => {
                    let w = spectrum.omega(idx);
                    (ap * m1 * m2 + am * m1 * f2) * (w * w)
                }
                KernelKind::HOverR1 => Complex64::new(0.0, b) * m1 * f2,
            };
            total += term;
        }
        if kind == KernelKind::F {
            total *= p1.0 * p2.0;
        }
        Ok(total)
    }

    /// Largest imaginary part of the kernel at a point pair; zero up to
    /// round-off when the coefficients obey their constraints.
    pub fn imaginary_part(
        &self,
        kind: KernelKind,
        p1: (f64, f64),
        p2: (f64, f64),
    ) -> Result<f64, SymmetryError> {
        Ok(self.eval_complex(kind, p1, p2)?.im.abs())
    }

    /// Edge defect of the kernel in its first argument at `r₁ = R`,
    /// `|∂_{r₁} K - (λ/R) K|` relative to the kernel scale, with `∂_{r₁}`
    /// from a sixth-order central difference of step `10⁻³ R` straddling the
    /// edge. For `f` the probe is applied to `f/(r₁ r₂)`. Dirichlet disks
    /// report `|K(R)|` relative to the scale.
    pub fn edge_defect(
        &self,
        kind: KernelKind,
        theta1: f64,
        p2: (f64, f64),
    ) -> Result<f64, SymmetryError> {
        let radius = self.basis.spectrum().config().radius;
        let profile = |r: f64| -> Result<f64, SymmetryError> {
            let v = self.eval_complex(kind, (r, theta1), p2)?.re;
            Ok(if kind == KernelKind::F {
                v / (r * p2.0)
            } else {
                v
            })
        };
        let h = 1e-3 * radius;
        const STENCIL: [(f64, f64); 6] = [
            (-3.0, -1.0 / 60.0),
            (-2.0, 3.0 / 20.0),
            (-1.0, -3.0 / 4.0),
            (1.0, 3.0 / 4.0),
            (2.0, -3.0 / 20.0),
            (3.0, 1.0 / 60.0),
        ];
        let mut d = 0.0;
        let mut scale: f64 = 0.0;
        for (s, w) in STENCIL {
            let v = profile(radius + s * h)?;
            scale = scale.max(v.abs());
            d += w * v / h;
        }
        let value = profile(radius)?;
        scale = scale
            .max(value.abs())
            .max(radius * d.abs())
            .max(f64::MIN_POSITIVE);
        Ok(match self.basis.spectrum().boundary() {
            Boundary::Robin { lambda } => (d - lambda / radius * value).abs() * radius / scale,
            Boundary::Dirichlet => value.abs() / scale,
        })
    }
}

/// Kernel values on every node pair of the basis grid, built once per
/// coefficient set.
#[derive(Debug, Clone)]
pub struct KernelMatrices {
    nodes: usize,
    /// `g(p, q)`, row-major.
    g: Vec<f64>,
    /// `Σ α ω² φ φ = -(Δ₁ - μ²) g`, row-major.
    kg: Vec<f64>,
    /// `h(p; q) / r_p`, row-major.
    h: Vec<f64>,
    /// Largest imaginary part dropped while assembling.
    pub max_imaginary: f64,
}

impl KernelMatrices {
    pub fn build(
        basis: &ModeBasis,
        coefficients: &KernelCoefficients,
    ) -> Result<Self, SymmetryError> {
        BilocalKernel::new(basis, coefficients)?;
        let trunc = basis.truncation();
        let spectrum = basis.spectrum();
        let nodes = basis.grid().n_nodes();
        let zero = Complex64::new(0.0, 0.0);
        let mut g = vec![zero; nodes * nodes];
        let mut kg = vec![zero; nodes * nodes];
        let mut h = vec![zero; nodes * nodes];
        let samples: Vec<Vec<Complex64>> =
            trunc.indices().map(|idx| basis.mode_samples(idx)).collect();
        let omegas = spectrum.omegas();
        let c = coefficients;
        for p in 0..trunc.len() {
            let q = trunc.flipped_position(p);
            let (ap, am, b) = (c.alpha_plus[p], c.alpha_minus[p], c.beta[p]);
            let w2 = omegas[p] * omegas[p];
            let s = &samples[p];
            let f = &samples[q];
            if ap != zero {
                for i in 0..nodes {
                    let left = ap * s[i];
                    let row = i * nodes;
                    for j in 0..nodes {
                        let v = left * s[j];
                        g[row + j] += v;
                        kg[row + j] += v * w2;
                    }
                }
            }
            if am != 0.0 {
                for (i, si) in s.iter().enumerate() {
                    let left = si * am;
                    let row = i * nodes;
                    for j in 0..nodes {
                        let v = left * f[j];
                        g[row + j] += v;
                        kg[row + j] += v * w2;
                    }
                }
            }
            if b != 0.0 {
                for (i, si) in s.iter().enumerate() {
                    let left = si * Complex64::new(0.0, b);
                    let row = i * nodes;
                    for j in 0..nodes {
                        h[row + j] += left * f[j];
                    }
                }
            }
        }
        let max_imaginary = g
            .iter()
            .chain(&kg)
            .chain(&h)
            .map(|v| v.im.abs())
            .fold(0.0, f64::max);
        let real = |v: Vec<Complex64>| v.into_iter().map(|z| z.re).collect();
        Ok(Self {
            nodes,
            g: real(g),
            kg: real(kg),
            h: real(h),
            max_imaginary,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

/// Double quadrature of
/// `½ (π/r)₁ (π/r)₂ g - ½ φ₁ φ₂ (Δ₁ - μ²) g + φ₁ (π/r)₂ h/r₁`
/// over the synthesised fields of `state` at time `t`.
pub fn charge_bilocal_integral(
    basis: &ModeBasis,
    matrices: &KernelMatrices,
    state: &FieldState,
    t: f64,
) -> Result<f64, SymmetryError> {
    let fields = synthesize(basis, state, t)?;
    let n = matrices.nodes;
    if fields.phi.len() != n {
        return Err(FieldError::GridMismatch.into());
    }
    let v = fields.velocity();
    let phi = &fields.phi;
    let w = basis.grid().measure_weights();
    let mut inner = vec![0.0; n];
    let mut outer = vec![0.0; n];
    for p in 0..n {
        let row = p * n;
        for q in 0..n {
            inner[q] = w[q]
                * (0.5 * v[p] * v[q] * matrices.g[row + q]
                    + 0.5 * phi[p] * phi[q] * matrices.kg[row + q]
                    + phi[p] * v[q] * matrices.h[row + q]);
        }
        outer[p] = w[p] * pairwise_sum(&inner);
    }
    Ok(pairwise_sum(&outer))
}

/// Rotation axis of the paired `SU(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    One,
    Two,
    Three,
}

/// Sign choice of the time-dependent mixing between two frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingVariant {
    Plus,
    Minus,
}

/// An amplitude-space map acting on the amplitudes as stored, whatever
/// their reference time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    /// `a(mode) ↦ e^{-iα} a(mode)`.
    Phase { mode: ModeIndex, angle: f64 },
    /// Rotation of the `(±l, n)` pair about `axis`.
    PairRotation {
        l: i32,
        n: u32,
        axis: Axis,
        angle: f64,
    },
    /// The two-frequency mixing with its clock frozen at `time`.
    FrozenMixing {
        first: ModeIndex,
        second: ModeIndex,
        variant: MixingVariant,
        angle: f64,
        time: f64,
    },
}

impl Transform {
    pub fn apply(
        &self,
        spectrum: &RobinSpectrum,
        state: &FieldState,
    ) -> Result<FieldState, SymmetryError> {
        let trunc = state.truncation();
        let pos = |idx: ModeIndex| trunc.position(idx).ok_or(SymmetryError::UnknownMode(idx));
        let mut a = state.amplitudes().to_vec();
        match *self {
            Transform::Phase { mode, angle } => {
                let p = pos(mode)?;
                a[p] *= Complex64::from_polar(1.0, -angle);
            }
            Transform::PairRotation { l, n, axis, angle } => {
                if l <= 0 {
                    return Err(SymmetryError::NonPositiveOrder(l));
                }
                let p = pos(ModeIndex::new(l, n))?;
                let m = pos(ModeIndex::new(-l, n))?;
                let (s, c) = (0.5 * angle).sin_cos();
                let (ap, am) = (a[p], a[m]);
                let i = Complex64::new(0.0, 1.0);
                match axis {
                    Axis::One => {
                        a[p] = ap * c - i * s * am;
                        a[m] = am * c - i * s * ap;
                    }
                    Axis::Two => {
                        a[p] = ap * c - am * s;
                        a[m] = am * c + ap * s;
                    }
                    Axis::Three => {
                        a[p] = ap * Complex64::from_polar(1.0, -0.5 * angle);
                        a[m] = am * Complex64::from_polar(1.0, 0.5 * angle);
                    }
                }
            }
            Transform::FrozenMixing {
                first,
                second,
                variant,
                angle,
                time,
            } => {
                let p1 = pos(first)?;
                let p2 = pos(second)?;
                let (w1, w2) = (spectrum.omega(first), spectrum.omega(second));
                if (w1 - w2).abs() <= 1e-12 * w1.max(w2) {
                    return Err(SymmetryError::DegeneratePair {
                        first,
                        second,
                        omega: w1,
                    });
                }
                let (s, c) = (0.5 * angle).sin_cos();
                let e = Complex64::from_polar(1.0, (w2 - w1) * time);
                let (a1, a2) = (a[p1], a[p2]);
                match variant {
                    MixingVariant::Plus => {
                        let mi = Complex64::new(0.0, -s);
                        a[p1] = a1 * c + mi * e * a2;
                        a[p2] = a2 * c + mi * e.conj() * a1;
                    }
                    MixingVariant::Minus => {
                        a[p1] = a1 * c - e * a2 * s;
                        a[p2] = a2 * c + e.conj() * a1 * s;
                    }
                }
            }
        }
        Ok(state.clone().with_amplitudes(a))
    }
}

/// `ã(l₀,n₀) = e^{-iα} a(l₀,n₀)`.
pub fn apply_u1(
    state: &FieldState,
    mode: ModeIndex,
    angle: f64,
    spectrum: &RobinSpectrum,
) -> Result<FieldState, SymmetryError> {
    Transform::Phase { mode, angle }.apply(spectrum, state)
}

/// Finite `SU(2)` rotation of the `(±l₀, n₀)` pair.
pub fn apply_su2(
    state: &FieldState,
    l: i32,
    n: u32,
    axis: Axis,
    angle: f64,
    spectrum: &RobinSpectrum,
) -> Result<FieldState, SymmetryError> {
    Transform::PairRotation { l, n, axis, angle }.apply(spectrum, state)
}

/// Two-frequency mixing at time `t`, applied to the amplitudes referred to
/// time zero; the result keeps the input's reference time.
pub fn counterexample_transform(
    spectrum: &RobinSpectrum,
    state: &FieldState,
    first: ModeIndex,
    second: ModeIndex,
    variant: MixingVariant,
    angle: f64,
    t: f64,
) -> Result<FieldState, SymmetryError> {
    let at_zero = state.rebase(spectrum, 0.0);
    let mixed = Transform::FrozenMixing {
        first,
        second,
        variant,
        angle,
        time: t,
    }
    .apply(spectrum, &at_zero)?;
    Ok(mixed.rebase(spectrum, state.t0()))
}

/// `‖evolve(T(s), Δt) - T(evolve(s, Δt))‖` in the amplitude max norm.
pub fn flow_commutation_defect(
    spectrum: &RobinSpectrum,
    state: &FieldState,
    transform: &Transform,
    dt: f64,
) -> Result<f64, SymmetryError> {
    let a = transform.apply(spectrum, state)?.evolve(spectrum, dt);
    let b = transform.apply(spectrum, &state.evolve(spectrum, dt))?;
    Ok(a.distance(&b))
}
