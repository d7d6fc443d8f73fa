use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use super::gauss::gauss_legendre;

/// Smallest radial or angular node count accepted for a disk grid.
pub const MIN_NODES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("requested {requested} Gauss nodes, allowed range is 1..={max}")]
    NodeCount { requested: usize, max: usize },
    #[error("invalid integration interval [{a}, {b}]")]
    Interval { a: f64, b: f64 },
    #[error("disk grid needs at least {min} radial and angular nodes (got {n_r} x {n_theta})")]
    TooFewNodes {
        n_r: usize,
        n_theta: usize,
        min: usize,
    },
    #[error("angular grid of {n_theta} nodes does not resolve l_max = {l_max} (need more than {needed})")]
    AngularUnderResolved {
        n_theta: usize,
        l_max: u32,
        needed: usize,
    },
    #[error("radial grid of {n_r} nodes does not resolve x_max = {x_max:.3} (need more than {needed:.1})")]
    RadialUnderResolved { n_r: usize, x_max: f64, needed: f64 },
    #[error("invalid disk radius {0}")]
    Radius(f64),
}

/// Sum with a fixed binary-tree reduction order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().fold(0.0, |acc, v| acc + v),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

pub fn pairwise_sum_complex(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n if n <= 8 => values
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum_complex(lo) + pairwise_sum_complex(hi)
        }
    }
}

/// Tensor rule for `∫_0^R dr r ∫_0^{2π} dθ`, plus the `θ`-only ring at `r = R`.
///
/// Nodes are ordered radial-major: node `p = i * n_theta + j` sits at
/// `(radial_nodes[i], theta_nodes[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    radius: f64,
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    theta_nodes: Vec<f64>,
}

impl QuadratureGrid {
    /// Gauss-Legendre in `r` on `[0, R]`, uniform in `θ`.
    pub fn new(radius: f64, n_r: usize, n_theta: usize) -> Result<Self, QuadratureError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(QuadratureError::Radius(radius));
        }
        if n_r < MIN_NODES || n_theta < MIN_NODES {
            return Err(QuadratureError::TooFewNodes {
                n_r,
                n_theta,
                min: MIN_NODES,
            });
        }
        let rule = gauss_legendre(n_r, 0.0, radius)?;
        let theta_nodes = (0..n_theta)
            .map(|j| 2.0 * PI * j as f64 / n_theta as f64)
            .collect();
        Ok(Self {
            radius,
            radial_nodes: rule.nodes,
            radial_weights: rule.weights,
            theta_nodes,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_r(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn n_theta(&self) -> usize {
        self.theta_nodes.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.n_r() * self.n_theta()
    }

    pub fn radial_nodes(&self) -> &[f64] {
        &self.radial_nodes
    }

    /// Gauss weights for `∫_0^R dr` (without the `r` factor).
    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta_nodes
    }

    pub fn angular_weight(&self) -> f64 {
        2.0 * PI / self.n_theta() as f64
    }

    /// `e^{imθ_j}` with the angle reduced to `2π ((m j) mod N_θ) / N_θ`
    /// before evaluation, so large `m` loses no accuracy.
    pub fn harmonic(&self, m: i64, j: usize) -> Complex64 {
        let n = self.n_theta() as i64;
        let reduced = (m * j as i64).rem_euclid(n);
        Complex64::from_polar(1.0, 2.0 * PI * reduced as f64 / n as f64)
    }

    /// `(r, θ)` of node `p`.
    pub fn node(&self, p: usize) -> (f64, f64) {
        let nt = self.n_theta();
        (self.radial_nodes[p / nt], self.theta_nodes[p % nt])
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radial_nodes
            .iter()
            .flat_map(move |&r| self.theta_nodes.iter().map(move |&t| (r, t)))
    }

    /// Full measure weight `w_i r_i Δθ` of every node, radial-major.
    pub fn measure_weights(&self) -> Vec<f64> {
        let dt = self.angular_weight();
        self.radial_nodes
            .iter()
            .zip(&self.radial_weights)
            .flat_map(|(&r, &w)| std::iter::repeat_n(w * r * dt, self.n_theta()))
            .collect()
    }

    /// `∫ r dr dθ f` for node values given radial-major.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let terms: Vec<f64> = self
            .measure_weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_complex_values(&self, values: &[Complex64]) -> Complex64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let terms: Vec<Complex64> = self
            .measure_weights()
            .iter()
            .zip(values)
            .map(|(w, v)| v * *w)
            .collect();
        pairwise_sum_complex(&terms)
    }

    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let values: Vec<f64> = self.nodes().map(|(r, t)| f(r, t)).collect();
        self.integrate_values(&values)
    }

    pub fn integrate_complex<F: Fn(f64, f64) -> Complex64>(&self, f: F) -> Complex64 {
        let values: Vec<Complex64> = self.nodes().map(|(r, t)| f(r, t)).collect();
        self.integrate_complex_values(&values)
    }

    /// `∮ dθ v(R, θ)` for values sampled on the boundary ring.
    pub fn integrate_ring(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_theta());
        let dt = self.angular_weight();
        let terms: Vec<f64> = values.iter().map(|v| v * dt).collect();
        pairwise_sum(&terms)
    }

    /// Checks the node-count heuristics for a truncation with angular
    /// momenta up to `l_max` and Bessel arguments up to `x_max`.
    pub fn check_resolution(&self, l_max: u32, x_max: f64) -> Result<(), QuadratureError> {
        let needed_theta = 4 * l_max as usize + 4;
        if self.n_theta() <= needed_theta {
            return Err(QuadratureError::AngularUnderResolved {
                n_theta: self.n_theta(),
                l_max,
                needed: needed_theta,
            });
        }
        let needed_r = 2.0 * x_max / PI + 16.0;
        if (self.n_r() as f64) <= needed_r {
            return Err(QuadratureError::RadialUnderResolved {
                n_r: self.n_r(),
                x_max,
                needed: needed_r,
            });
        }
        Ok(())
    }

    /// Whether two grids share the same nodes.
    pub fn same_layout(&self, other: &QuadratureGrid) -> bool {
        self.radius == other.radius
            && self.n_r() == other.n_r()
            && self.n_theta() == other.n_theta()
    }
}

/// Grid for a truncation, refusing node counts that under-resolve it.
pub fn disk_quadrature(
    radius: f64,
    l_max: u32,
    x_max: f64,
    n_r: usize,
    n_theta: usize,
) -> Result<QuadratureGrid, QuadratureError> {
    let grid = QuadratureGrid::new(radius, n_r, n_theta)?;
    grid.check_resolution(l_max, x_max)?;
    Ok(grid)
}
