//! Orthonormal disk modes `φ_{l,n}(r, θ) = 𝒩_{l,n} i^l e^{ilθ} J_l(k_{l,n} r)`.
//!
//! A [`ModeBasis`] owns its spectrum and one quadrature grid. Radial profiles
//! are tabulated per `(|l|, n)` on the radial nodes at construction, so
//! `±l` share storage and the conjugation parity
//! `φ_{-l,n} = (-1)^l φ*_{l,n}` holds exactly on the grid.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{pairwise_sum, pairwise_sum_complex, QuadratureError, QuadratureGrid};
use crate::special_functions::{bessel_eval, BesselError};
use crate::spectrum::{Boundary, ModeIndex, RobinSpectrum, Truncation};

#[derive(Debug, Error)]
pub enum BasisError {
    #[error(
        "normalisation undefined for l = {order}, x = {x}: λ² + x² - l² = {discriminant:e}, J_l(x) = {value:e}"
    )]
    InconsistentNormalization {
        order: i32,
        x: f64,
        discriminant: f64,
        value: f64,
    },
    #[error("point r = {r} lies outside the disk of radius {radius}")]
    OutsideDisk { r: f64, radius: f64 },
    #[error("mode {0:?} is outside the truncation")]
    UnknownMode(ModeIndex),
    #[error("grid radius {grid} does not match the disk radius {disk}")]
    RadiusMismatch { grid: f64, disk: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Bessel(#[from] BesselError),
}

/// Normalisation `𝒩_{l,n}` making the mode unit-norm on the disk.
///
/// Robin: `k / sqrt(π (λ² + x² - l²) J_l(x)²)`. Dirichlet:
/// `1 / (sqrt(π) R |J'_l(x)|)`.
pub fn normalization(
    order: i32,
    x: f64,
    boundary: Boundary,
    radius: f64,
) -> Result<f64, BasisError> {
    let b = bessel_eval(order, x)?;
    let norm = match boundary {
        Boundary::Robin { lambda } => {
            let l = order as f64;
            let discriminant = lambda * lambda + x * x - l * l;
            if discriminant <= 0.0 || b.value.abs() <= 1e-14 {
                return Err(BasisError::InconsistentNormalization {
                    order,
                    x,
                    discriminant,
                    value: b.value,
                });
            }
            (x / radius) / (std::f64::consts::PI * discriminant * b.value * b.value).sqrt()
        }
        Boundary::Dirichlet => {
            if b.derivative.abs() <= 1e-14 {
                return Err(BasisError::InconsistentNormalization {
                    order,
                    x,
                    discriminant: 0.0,
                    value: b.value,
                });
            }
            1.0 / (std::f64::consts::PI.sqrt() * radius * b.derivative.abs())
        }
    };
    if !norm.is_finite() || norm <= 0.0 {
        return Err(BasisError::InconsistentNormalization {
            order,
            x,
            discriminant: f64::NAN,
            value: b.value,
        });
    }
    Ok(norm)
}

/// `i^l`.
pub fn phase(l: i32) -> Complex64 {
    match l.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `J_l = (-1)^l J_{|l|}` sign for negative orders.
fn order_sign(l: i32) -> f64 {
    if l < 0 && l % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

/// Which radial profile a reconstruction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Value,
    RadialDerivative,
}

/// Gram matrix of the basis under the grid's quadrature.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub matrix: DMatrix<Complex64>,
    pub max_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct ModeBasis {
    spectrum: RobinSpectrum,
    grid: QuadratureGrid,
    /// `J_{|l|}(k r_i)` per `(|l|, n)` row, radial node `i`.
    radial: Vec<Vec<f64>>,
    /// `k J'_{|l|}(k r_i)`.
    radial_deriv: Vec<Vec<f64>>,
    /// `J_{|l|}(x)` and `k J'_{|l|}(x)` at `r = R`.
    edge: Vec<(f64, f64)>,
    /// `e^{ilθ_j}` per `l + l_max`, angular node `j`.
    angular: Vec<Vec<Complex64>>,
}

impl ModeBasis {
    pub fn new(spectrum: RobinSpectrum, grid: QuadratureGrid) -> Result<Self, BasisError> {
        let cfg = *spectrum.config();
        if (grid.radius() - cfg.radius).abs() > 1e-14 * cfg.radius {
            return Err(BasisError::RadiusMismatch {
                grid: grid.radius(),
                disk: cfg.radius,
            });
        }
        grid.check_resolution(cfg.l_max, spectrum.x_max())?;
        let mut radial = Vec::new();
        let mut radial_deriv = Vec::new();
        let mut edge = Vec::new();
        for m in 0..=cfg.l_max {
            for n in 1..=cfg.n_max {
                let idx = ModeIndex::new(m as i32, n);
                let k = spectrum.k(idx);
                let mut vals = Vec::with_capacity(grid.n_r());
                let mut ders = Vec::with_capacity(grid.n_r());
                for &r in grid.radial_nodes() {
                    let b = bessel_eval(m as i32, k * r)?;
                    vals.push(b.value);
                    ders.push(k * b.derivative);
                }
                radial.push(vals);
                radial_deriv.push(ders);
                let b = bessel_eval(m as i32, k * cfg.radius)?;
                edge.push((b.value, k * b.derivative));
            }
        }
        let l_max = cfg.l_max as i32;
        let angular = (-l_max..=l_max)
            .map(|l| {
                (0..grid.n_theta())
                    .map(|j| grid.harmonic(l as i64, j))
                    .collect()
            })
            .collect();
        Ok(Self {
            spectrum,
            grid,
            radial,
            radial_deriv,
            edge,
            angular,
        })
    }

    pub fn spectrum(&self) -> &RobinSpectrum {
        &self.spectrum
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn truncation(&self) -> Truncation {
        self.spectrum.truncation()
    }

    fn row(&self, idx: ModeIndex) -> usize {
        idx.l.unsigned_abs() as usize * self.truncation().n_max as usize + (idx.n - 1) as usize
    }

    fn check_mode(&self, idx: ModeIndex) -> Result<(), BasisError> {
        if self.truncation().contains(idx) {
            Ok(())
        } else {
            Err(BasisError::UnknownMode(idx))
        }
    }

    /// Complex prefactor `𝒩 i^l` times the negative-order sign.
    fn prefactor(&self, idx: ModeIndex) -> Complex64 {
        phase(idx.l) * (self.spectrum.norm(idx) * order_sign(idx.l))
    }

    /// `φ_{l,n}(r, θ)`; `r` must lie in `[0, R]`.
    pub fn mode_eval(&self, idx: ModeIndex, r: f64, theta: f64) -> Result<Complex64, BasisError> {
        self.check_mode(idx)?;
        let radius = self.spectrum.config().radius;
        if !(0.0..=radius * (1.0 + 1e-14)).contains(&r) {
            return Err(BasisError::OutsideDisk { r, radius });
        }
        self.eval_unchecked(idx, r, theta)
    }

    /// Same as [`mode_eval`](Self::mode_eval) without the disk check, for
    /// finite-difference probes that straddle the edge.
    pub(crate) fn eval_unchecked(
        &self,
        idx: ModeIndex,
        r: f64,
        theta: f64,
    ) -> Result<Complex64, BasisError> {
        let k = self.spectrum.k(idx);
        let j = bessel_eval(idx.l.abs(), k * r)?.value;
        Ok(self.prefactor(idx) * Complex64::from_polar(j, idx.l as f64 * theta))
    }

    /// `∂_r φ_{l,n}(r, θ)` from the analytic Bessel derivative.
    pub fn mode_radial_derivative(
        &self,
        idx: ModeIndex,
        r: f64,
        theta: f64,
    ) -> Result<Complex64, BasisError> {
        self.check_mode(idx)?;
        let radius = self.spectrum.config().radius;
        if !(0.0..=radius * (1.0 + 1e-14)).contains(&r) {
            return Err(BasisError::OutsideDisk { r, radius });
        }
        let k = self.spectrum.k(idx);
        let d = k * bessel_eval(idx.l.abs(), k * r)?.derivative;
        Ok(self.prefactor(idx) * Complex64::from_polar(d, idx.l as f64 * theta))
    }

    /// Edge defects of mode `idx` at `r = R`, `θ = 0`: for `g = φ` with
    /// parameter `λ`, and `g = r φ` with `λ + 1`, the value
    /// `|R g' - λ g| / max(|g|, |R g'|, |λ g|)`. Dirichlet modes report
    /// `|φ(R)| / |R ∂_r φ(R)|` for both.
    pub fn edge_defects(&self, idx: ModeIndex) -> Result<(f64, f64), BasisError> {
        self.check_mode(idx)?;
        let radius = self.spectrum.config().radius;
        let norm = self.spectrum.norm(idx);
        let (j, dj) = self.edge[self.row(idx)];
        let value = norm * j;
        let deriv = norm * dj;
        match self.spectrum.boundary() {
            Boundary::Robin { lambda } => {
                let defect = |g: f64, dg: f64, lam: f64| {
                    let scale = g
                        .abs()
                        .max((radius * dg).abs())
                        .max((lam * g).abs())
                        .max(f64::MIN_POSITIVE);
                    (radius * dg - lam * g).abs() / scale
                };
                Ok((
                    defect(value, deriv, lambda),
                    defect(radius * value, value + radius * deriv, lambda + 1.0),
                ))
            }
            Boundary::Dirichlet => {
                let d = value.abs() / (radius * deriv).abs().max(f64::MIN_POSITIVE);
                Ok((d, d))
            }
        }
    }

    /// Value of mode at grid node `(i, j)` from the cache.
    pub fn node_value(&self, idx: ModeIndex, i: usize, j: usize) -> Complex64 {
        let l_max = self.truncation().l_max as i32;
        self.prefactor(idx)
            * self.radial[self.row(idx)][i]
            * self.angular[(idx.l + l_max) as usize][j]
    }

    /// All node values of one mode, radial-major.
    pub fn mode_samples(&self, idx: ModeIndex) -> Vec<Complex64> {
        let (nr, nt) = (self.grid.n_r(), self.grid.n_theta());
        (0..nr)
            .flat_map(|i| (0..nt).map(move |j| (i, j)))
            .map(|(i, j)| self.node_value(idx, i, j))
            .collect()
    }

    /// Mode values on the `r = R` ring.
    pub fn edge_samples(&self, idx: ModeIndex) -> Vec<Complex64> {
        let l_max = self.truncation().l_max as i32;
        let pre = self.prefactor(idx) * self.edge[self.row(idx)].0;
        self.angular[(idx.l + l_max) as usize]
            .iter()
            .map(|a| pre * a)
            .collect()
    }

    /// `⟨φ_m | u⟩` for every mode `m`, by quadrature over the grid.
    pub fn project(&self, values: &[Complex64]) -> Vec<Complex64> {
        let trunc = self.truncation();
        let (nr, nt) = (self.grid.n_r(), self.grid.n_theta());
        assert_eq!(values.len(), nr * nt, "node count mismatch");
        let l_max = trunc.l_max as i32;
        let dt = self.grid.angular_weight();
        // angular stage: U[l][i] = Σ_j Δθ e^{-ilθ_j} u_ij
        let mut angular_moments =
            vec![vec![Complex64::new(0.0, 0.0); nr]; (2 * l_max + 1) as usize];
        let mut terms = vec![Complex64::new(0.0, 0.0); nt];
        for (li, moments) in angular_moments.iter_mut().enumerate() {
            let table = &self.angular[li];
            for (i, slot) in moments.iter_mut().enumerate() {
                let row = &values[i * nt..(i + 1) * nt];
                for j in 0..nt {
                    terms[j] = row[j] * table[j].conj() * dt;
                }
                *slot = pairwise_sum_complex(&terms);
            }
        }
        // radial stage
        let weights: Vec<f64> = self
            .grid
            .radial_nodes()
            .iter()
            .zip(self.grid.radial_weights())
            .map(|(r, w)| r * w)
            .collect();
        let mut radial_terms = vec![Complex64::new(0.0, 0.0); nr];
        trunc
            .indices()
            .map(|idx| {
                let prof = &self.radial[self.row(idx)];
                let moments = &angular_moments[(idx.l + l_max) as usize];
                for i in 0..nr {
                    radial_terms[i] = moments[i] * (weights[i] * prof[i]);
                }
                self.prefactor(idx).conj() * pairwise_sum_complex(&radial_terms)
            })
            .collect()
    }

    pub fn project_real(&self, values: &[f64]) -> Vec<Complex64> {
        let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.project(&complex)
    }

    /// `Σ_m c_m φ_m` (or its radial derivative) on the grid nodes.
    pub fn reconstruct(&self, coefficients: &[Complex64], channel: Channel) -> Vec<Complex64> {
        let trunc = self.truncation();
        assert_eq!(
            coefficients.len(),
            trunc.len(),
            "coefficient count mismatch"
        );
        let (nr, nt) = (self.grid.n_r(), self.grid.n_theta());
        let l_max = trunc.l_max as i32;
        let profiles = match channel {
            Channel::Value => &self.radial,
            Channel::RadialDerivative => &self.radial_deriv,
        };
        // B[l][i] = Σ_n c_{l,n} 𝒩 i^l J_l(k r_i)
        let mut radial_sums = vec![vec![Complex64::new(0.0, 0.0); nr]; (2 * l_max + 1) as usize];
        for (pos, idx) in trunc.indices().enumerate() {
            let c = coefficients[pos];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let pre = self.prefactor(idx) * c;
            let prof = &profiles[self.row(idx)];
            let sums = &mut radial_sums[(idx.l + l_max) as usize];
            for i in 0..nr {
                sums[i] += pre * prof[i];
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); nr * nt];
        for (li, sums) in radial_sums.iter().enumerate() {
            let table = &self.angular[li];
            for i in 0..nr {
                let s = sums[i];
                if s == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &mut out[i * nt..(i + 1) * nt];
                for j in 0..nt {
                    row[j] += s * table[j];
                }
            }
        }
        out
    }

    /// `Σ_m c_m φ_m(R, θ_j)` on the boundary ring.
    pub fn reconstruct_edge(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        let trunc = self.truncation();
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.n_theta()];
        for (pos, idx) in trunc.indices().enumerate() {
            let c = coefficients[pos];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.edge_samples(idx)) {
                *o += c * v;
            }
        }
        out
    }

    /// `⟨φ_a | φ_b⟩` for all mode pairs, and its max deviation from identity.
    ///
    /// The tensor rule factorises into a radial Gauss sum times the angular
    /// sum of `e^{i(l_b - l_a)θ}`, both accumulated pairwise.
    pub fn gram_matrix(&self) -> GramMatrix {
        let trunc = self.truncation();
        let size = trunc.len();
        let l_max = trunc.l_max as i32;
        let dt = self.grid.angular_weight();
        let angular_sums: Vec<Complex64> = (-2 * l_max..=2 * l_max)
            .map(|m| {
                let terms: Vec<Complex64> = (0..self.grid.n_theta())
                    .map(|j| self.grid.harmonic(m as i64, j) * dt)
                    .collect();
                pairwise_sum_complex(&terms)
            })
            .collect();
        let rw: Vec<f64> = self
            .grid
            .radial_nodes()
            .iter()
            .zip(self.grid.radial_weights())
            .map(|(r, w)| r * w)
            .collect();
        let mut matrix = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
        let mut max_deviation: f64 = 0.0;
        let mut terms = vec![0.0; rw.len()];
        for a in 0..size {
            let ia = trunc.index_at(a);
            let pa = &self.radial[self.row(ia)];
            for b in 0..size {
                let ib = trunc.index_at(b);
                let pb = &self.radial[self.row(ib)];
                for i in 0..rw.len() {
                    terms[i] = rw[i] * pa[i] * pb[i];
                }
                let radial = pairwise_sum(&terms);
                let ang = angular_sums[(ib.l - ia.l + 2 * l_max) as usize];
                let g = self.prefactor(ia).conj() * self.prefactor(ib) * ang * radial;
                matrix[(a, b)] = g;
                let target = if a == b { 1.0 } else { 0.0 };
                max_deviation = max_deviation.max((g - target).norm());
            }
        }
        GramMatrix {
            matrix,
            max_deviation,
        }
    }

    /// `‖u - P u‖` in the grid's `L²` norm, `P` the projector on the truncated
    /// span.
    pub fn completeness_residual<F: Fn(f64, f64) -> f64>(&self, test_function: F) -> f64 {
        let values: Vec<f64> = self
            .grid
            .nodes()
            .map(|(r, t)| test_function(r, t))
            .collect();
        let coeffs = self.project_real(&values);
        let rebuilt = self.reconstruct(&coeffs, Channel::Value);
        let sq: Vec<f64> = values
            .iter()
            .zip(&rebuilt)
            .map(|(v, p)| (Complex64::new(*v, 0.0) - p).norm_sqr())
            .collect();
        self.grid.integrate_values(&sq).max(0.0).sqrt()
    }

    /// Closure evaluating a superposition `Σ c_m φ_m` anywhere in the disk.
    pub fn superposition<'a>(
        &'a self,
        terms: &'a [(ModeIndex, Complex64)],
    ) -> impl Fn(f64, f64) -> Complex64 + 'a {
        move |r, t| {
            terms
                .iter()
                .map(|(idx, c)| c * self.eval_unchecked(*idx, r, t).unwrap_or_default())
                .sum()
        }
    }
}

/// Smooth profile `(1 + c r²) + r (1 + d r²) cos θ` satisfying the edge
/// condition, with components in `l = 0` and `l = ±1` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCompatiblePolynomial {
    c: f64,
    d: f64,
}

impl EdgeCompatiblePolynomial {
    /// `None` for the isolated `λ ∈ {2, 3}` where the construction degenerates.
    pub fn new(boundary: Boundary, radius: f64) -> Option<Self> {
        let r2 = radius * radius;
        match boundary {
            Boundary::Robin { lambda } => {
                if (2.0 - lambda).abs() < 1e-12 || (3.0 - lambda).abs() < 1e-12 {
                    return None;
                }
                Some(Self {
                    c: lambda / ((2.0 - lambda) * r2),
                    d: (lambda - 1.0) / ((3.0 - lambda) * r2),
                })
            }
            Boundary::Dirichlet => Some(Self {
                c: -1.0 / r2,
                d: -1.0 / r2,
            }),
        }
    }

    pub fn eval(&self, r: f64, theta: f64) -> f64 {
        (1.0 + self.c * r * r) + r * (1.0 + self.d * r * r) * theta.cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_spectrum, DiskConfig};

    fn basis(l: u32, n: u32, boundary: Boundary) -> ModeBasis {
        let cfg = DiskConfig {
            radius: 1.0,
            mass: 0.5,
            boundary,
            l_max: l,
            n_max: n,
        };
        let s = build_spectrum(&cfg).unwrap();
        let grid = QuadratureGrid::new(1.0, 64, 4 * l as usize + 8).unwrap();
        ModeBasis::new(s, grid).unwrap()
    }

    #[test]
    fn origin_value_of_radial_mode() {
        let b = basis(2, 2, Boundary::Robin { lambda: -1.0 });
        let idx = ModeIndex::new(0, 1);
        let v = b.mode_eval(idx, 0.0, 1.234).unwrap();
        assert_eq!(v, Complex64::new(b.spectrum().norm(idx), 0.0));
    }

    #[test]
    fn phase_convention() {
        let b = basis(2, 2, Boundary::Robin { lambda: -1.0 });
        let idx = ModeIndex::new(2, 1);
        let v = b.mode_eval(idx, 0.3, 0.0).unwrap();
        assert!(v.im.abs() < 1e-15);
        assert!(v.re < 0.0);
    }

    #[test]
    fn conjugation_parity() {
        let b = basis(3, 3, Boundary::Robin { lambda: -2.5 });
        let mut state = 17u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let r = next();
            let t = next() * std::f64::consts::TAU;
            for idx in b.truncation().indices() {
                let a = b.mode_eval(idx, r, t).unwrap();
                let c = b.mode_eval(idx.flipped(), r, t).unwrap();
                assert!((c - a.conj() * idx.parity()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_points_outside_the_disk() {
        let b = basis(1, 1, Boundary::Dirichlet);
        assert!(matches!(
            b.mode_eval(ModeIndex::new(0, 1), 1.1, 0.0),
            Err(BasisError::OutsideDisk { .. })
        ));
        assert!(matches!(
            b.mode_eval(ModeIndex::new(2, 1), 0.5, 0.0),
            Err(BasisError::UnknownMode(_))
        ));
    }

    #[test]
    fn normalisation_is_even_in_order() {
        let bd = Boundary::Robin { lambda: -1.0 };
        let x = 4.612559973363119;
        assert_eq!(
            normalization(3, x, bd, 1.0).unwrap(),
            normalization(-3, x, bd, 1.0).unwrap()
        );
    }

    #[test]
    fn normalisation_matches_fixture() {
        let bd = Boundary::Robin { lambda: -1.0 };
        let n = normalization(2, 3.518324392875923, bd, 1.0).unwrap();
        assert!((n - 1.4205052555829303).abs() < 1e-13);
    }

    #[test]
    fn dirichlet_normalisation_is_the_robin_limit() {
        let d = normalization(0, 2.404825557695773, Boundary::Dirichlet, 1.0).unwrap();
        let bd = Boundary::Robin { lambda: -1e4 };
        let x = crate::spectrum::robin_roots(0, bd, 1).unwrap()[0];
        let r = normalization(0, x, bd, 1.0).unwrap();
        assert!((d - r).abs() < 1e-3);
    }

    #[test]
    fn normalisation_rejects_inconsistent_inputs() {
        let bd = Boundary::Robin { lambda: 0.0 };
        // x < |l| makes λ² + x² - l² negative
        assert!(normalization(5, 1.0, bd, 1.0).is_err());
    }

    #[test]
    fn edge_conditions_hold() {
        for bd in [
            Boundary::Robin { lambda: -3.0 },
            Boundary::Robin { lambda: 0.0 },
        ] {
            let b = basis(4, 4, bd);
            for idx in b.truncation().indices() {
                let (a, c) = b.edge_defects(idx).unwrap();
                assert!(a < 1e-10 && c < 1e-10, "{idx:?}: {a:e} {c:e}");
            }
        }
    }

    #[test]
    fn gram_is_identity() {
        let b = basis(3, 4, Boundary::Robin { lambda: -1.0 });
        let g = b.gram_matrix();
        assert!(g.max_deviation < 1e-10, "{}", g.max_deviation);
    }

    #[test]
    fn basis_element_is_its_own_projection() {
        let b = basis(2, 3, Boundary::Robin { lambda: -1.0 });
        let idx = ModeIndex::new(1, 2);
        let res = b.completeness_residual(|r, t| b.mode_eval(idx, r, t).unwrap().re);
        assert!(res < 1e-10, "{res:e}");
        let terms = [
            (ModeIndex::new(0, 1), Complex64::new(0.3, 0.0)),
            (ModeIndex::new(2, 3), Complex64::new(0.1, -0.7)),
            (ModeIndex::new(-2, 3), Complex64::new(0.1, 0.7)),
        ];
        let f = b.superposition(&terms);
        let res = b.completeness_residual(|r, t| f(r, t).re);
        assert!(res < 1e-9, "{res:e}");
    }

    #[test]
    fn polynomial_satisfies_the_edge_condition() {
        for bd in [
            Boundary::Robin { lambda: -1.0 },
            Boundary::Robin { lambda: -4.0 },
            Boundary::Dirichlet,
        ] {
            let p = EdgeCompatiblePolynomial::new(bd, 1.5).unwrap();
            for &t in &[0.0, 0.7, 2.0] {
                let h = 1e-6;
                let d = (p.eval(1.5 + h, t) - p.eval(1.5 - h, t)) / (2.0 * h);
                match bd {
                    Boundary::Robin { lambda } => {
                        assert!((d - lambda / 1.5 * p.eval(1.5, t)).abs() < 1e-8)
                    }
                    Boundary::Dirichlet => assert!(p.eval(1.5, t).abs() < 1e-14),
                }
            }
        }
    }

    #[test]
    fn under_resolved_grid_is_refused() {
        let cfg = DiskConfig {
            l_max: 4,
            n_max: 2,
            ..DiskConfig::default()
        };
        let s = build_spectrum(&cfg).unwrap();
        let grid = QuadratureGrid::new(1.0, 64, 16).unwrap();
        assert!(matches!(
            ModeBasis::new(s, grid),
            Err(BasisError::Quadrature(
                QuadratureError::AngularUnderResolved { .. }
            ))
        ));
    }
}
