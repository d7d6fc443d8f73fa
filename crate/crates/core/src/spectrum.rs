//! Robin-Bessel root spectrum of the disk.
//!
//! The roots `x_{l,n}` solve `x J'_l(x) = λ J_l(x)` (or `J_l(x) = 0` for a
//! Dirichlet edge). They depend only on `|l|`, so each row is computed once
//! and shared between `l` and `-l`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mode_basis::{normalization, BasisError};
use crate::numerics::{refine_root, RootError};
use crate::special_functions::{bessel_eval, BesselError, ARGUMENT_CAP, ORDER_CAP};

/// Upper bound on `l_max`.
pub const L_MAX_CAP: u32 = 16;
/// Upper bound on `n_max`.
pub const N_MAX_CAP: u32 = 16;

/// Scan start; excludes the `x = 0` solution that exists when `λ = |l|`.
const SCAN_START: f64 = 1e-9;
const SCAN_STEP: f64 = std::f64::consts::PI / 8.0;
/// Cross-`|l|` root separations below this are reported.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("invalid disk configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "Robin parameter λ = {lambda} exceeds |l| = {order}: the problem has a non-oscillatory \
         (imaginary wavenumber) mode which this spectrum does not represent"
    )]
    NonOscillatory { order: i32, lambda: f64 },
    #[error(
        "found only {found} of {requested} roots for l = {order} scanning [{start:e}, {end}] in steps of {step:.4}"
    )]
    Bracketing {
        order: i32,
        found: usize,
        requested: usize,
        start: f64,
        end: f64,
        step: f64,
    },
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Edge condition at `r = R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Boundary {
    /// `∂_r φ = (λ / R) φ`.
    Robin { lambda: f64 },
    /// `φ = 0`.
    Dirichlet,
}

impl Boundary {
    pub fn lambda(&self) -> Option<f64> {
        match *self {
            Boundary::Robin { lambda } => Some(lambda),
            Boundary::Dirichlet => None,
        }
    }

    /// `x J'_l(x) - λ J_l(x)`, or `J_l(x)` for Dirichlet.
    pub fn root_function(&self, order: i32, x: f64) -> Result<f64, BesselError> {
        let b = bessel_eval(order, x)?;
        Ok(match *self {
            Boundary::Robin { lambda } => x * b.derivative - lambda * b.value,
            Boundary::Dirichlet => b.value,
        })
    }

    /// Residual bound a computed root must meet.
    pub fn residual_bound(&self, order: i32, x: f64) -> Result<f64, BesselError> {
        let b = bessel_eval(order, x)?;
        Ok(match *self {
            Boundary::Robin { lambda } => {
                1e-12 * lambda.abs().max(1.0) * b.value.abs().max((x * b.derivative).abs())
            }
            Boundary::Dirichlet => 1e-12,
        })
    }
}

/// Physical parameters and truncation of the disk problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskConfig {
    pub radius: f64,
    pub mass: f64,
    pub boundary: Boundary,
    pub l_max: u32,
    pub n_max: u32,
}

impl Default for DiskConfig {
    fn default() -> Self {
        Self {
            radius: 1.0,
            mass: 1.0,
            boundary: Boundary::Robin { lambda: -1.0 },
            l_max: 6,
            n_max: 6,
        }
    }
}

impl DiskConfig {
    pub fn validate(&self) -> Result<(), SpectrumError> {
        let bad = |msg: String| Err(SpectrumError::InvalidConfig(msg));
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if !(self.mass.is_finite() && self.mass >= 0.0) {
            return bad(format!("mass must be non-negative, got {}", self.mass));
        }
        if self.l_max > L_MAX_CAP {
            return bad(format!("l_max {} exceeds {}", self.l_max, L_MAX_CAP));
        }
        if self.n_max == 0 || self.n_max > N_MAX_CAP {
            return bad(format!("n_max {} outside 1..={}", self.n_max, N_MAX_CAP));
        }
        if let Boundary::Robin { lambda } = self.boundary {
            if !lambda.is_finite() {
                return bad(format!("Robin parameter must be finite, got {lambda}"));
            }
        }
        Ok(())
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::new(self.l_max, self.n_max)
    }
}

/// Mode label `(l, n)` with `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub l: i32,
    pub n: u32,
}

impl ModeIndex {
    pub fn new(l: i32, n: u32) -> Self {
        Self { l, n }
    }

    /// The `(-l, n)` partner.
    pub fn flipped(self) -> Self {
        Self {
            l: -self.l,
            n: self.n,
        }
    }

    /// `(-1)^l`.
    pub fn parity(self) -> f64 {
        if self.l.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Index set `|l| <= l_max`, `1 <= n <= n_max`, flattened `l`-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub l_max: u32,
    pub n_max: u32,
}

impl Truncation {
    pub fn new(l_max: u32, n_max: u32) -> Self {
        Self { l_max, n_max }
    }

    pub fn len(&self) -> usize {
        (2 * self.l_max as usize + 1) * self.n_max as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n_max == 0
    }

    pub fn contains(&self, idx: ModeIndex) -> bool {
        idx.l.unsigned_abs() <= self.l_max && idx.n >= 1 && idx.n <= self.n_max
    }

    /// Flat position of `idx`, if inside the truncation.
    pub fn position(&self, idx: ModeIndex) -> Option<usize> {
        self.contains(idx).then(|| {
            (idx.l + self.l_max as i32) as usize * self.n_max as usize + (idx.n - 1) as usize
        })
    }

    pub fn index_at(&self, position: usize) -> ModeIndex {
        let n_max = self.n_max as usize;
        ModeIndex {
            l: (position / n_max) as i32 - self.l_max as i32,
            n: (position % n_max) as u32 + 1,
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        (0..self.len()).map(|p| self.index_at(p))
    }

    /// Position of the `(-l, n)` partner of the mode at `position`.
    pub fn flipped_position(&self, position: usize) -> usize {
        let l_rows = 2 * self.l_max as usize;
        let n_max = self.n_max as usize;
        (l_rows - position / n_max) * n_max + position % n_max
    }
}

/// One row of the spectrum table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub l: i32,
    pub n: u32,
    pub x: f64,
    pub k: f64,
    pub omega: f64,
    pub norm: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct RadialRoot {
    x: f64,
    k: f64,
    omega: f64,
    norm: f64,
    residual: f64,
}

/// Two roots with different `|l|` closer than [`DEGENERACY_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearDegeneracy {
    pub first: ModeIndex,
    pub second: ModeIndex,
    pub separation: f64,
}

/// Root table over the truncation, shared between `±l`.
#[derive(Debug, Clone, PartialEq)]
pub struct RobinSpectrum {
    config: DiskConfig,
    rows: Vec<Vec<RadialRoot>>,
    near_degeneracies: Vec<NearDegeneracy>,
}

/// First `count` positive roots for order `l` under `boundary`.
pub fn robin_roots(
    order: i32,
    boundary: Boundary,
    count: usize,
) -> Result<Vec<f64>, SpectrumError> {
    if order.abs() > ORDER_CAP {
        return Err(BesselError::OrderCap {
            order,
            cap: ORDER_CAP,
        }
        .into());
    }
    if count == 0 || count > N_MAX_CAP as usize {
        return Err(SpectrumError::InvalidConfig(format!(
            "root count {count} outside 1..={N_MAX_CAP}"
        )));
    }
    let m = order.abs();
    if let Boundary::Robin { lambda } = boundary {
        if !lambda.is_finite() {
            return Err(SpectrumError::InvalidConfig(format!(
                "Robin parameter must be finite, got {lambda}"
            )));
        }
        if lambda > m as f64 {
            return Err(SpectrumError::NonOscillatory { order, lambda });
        }
    }
    let f = |x: f64| boundary.root_function(m, x);

    let mut roots = Vec::with_capacity(count);
    let mut x_prev = SCAN_START;
    let mut f_prev = f(x_prev)?;
    let mut step = 1usize;
    while roots.len() < count {
        let x = (SCAN_START + step as f64 * SCAN_STEP).min(ARGUMENT_CAP);
        let fx = f(x)?;
        if f_prev == 0.0 {
            // only reachable through underflow near the origin
            x_prev = x;
            f_prev = fx;
        } else if fx == 0.0 {
            roots.push(x);
            x_prev = x;
            f_prev = fx;
        } else if f_prev.signum() != fx.signum() {
            let mut err = None;
            let root = refine_root(
                |t| match f(t) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        f64::NAN
                    }
                },
                x_prev,
                x,
                0.0,
            );
            if let Some(e) = err {
                return Err(e.into());
            }
            roots.push(root?);
            x_prev = x;
            f_prev = fx;
        } else {
            x_prev = x;
            f_prev = fx;
        }
        if x >= ARGUMENT_CAP && roots.len() < count {
            return Err(SpectrumError::Bracketing {
                order,
                found: roots.len(),
                requested: count,
                start: SCAN_START,
                end: ARGUMENT_CAP,
                step: SCAN_STEP,
            });
        }
        step += 1;
    }
    Ok(roots)
}

/// Full spectrum table for `config`.
pub fn build_spectrum(config: &DiskConfig) -> Result<RobinSpectrum, SpectrumError> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.l_max as usize + 1);
    for m in 0..=config.l_max as i32 {
        let roots = robin_roots(m, config.boundary, config.n_max as usize)?;
        let mut row = Vec::with_capacity(roots.len());
        for x in roots {
            let k = x / config.radius;
            let omega = (k * k + config.mass * config.mass).sqrt();
            let norm = normalization(m, x, config.boundary, config.radius)?;
            let residual = config.boundary.root_function(m, x)?.abs();
            row.push(RadialRoot {
                x,
                k,
                omega,
                norm,
                residual,
            });
        }
        rows.push(row);
    }
    let near_degeneracies = find_near_degeneracies(&rows);
    Ok(RobinSpectrum {
        config: *config,
        rows,
        near_degeneracies,
    })
}

fn find_near_degeneracies(rows: &[Vec<RadialRoot>]) -> Vec<NearDegeneracy> {
    let mut out = Vec::new();
    for (m1, row1) in rows.iter().enumerate() {
        for (m2, row2) in rows.iter().enumerate().skip(m1 + 1) {
            for (i1, r1) in row1.iter().enumerate() {
                for (i2, r2) in row2.iter().enumerate() {
                    let separation = (r1.x - r2.x).abs();
                    if separation < DEGENERACY_THRESHOLD {
                        out.push(NearDegeneracy {
                            first: ModeIndex::new(m1 as i32, i1 as u32 + 1),
                            second: ModeIndex::new(m2 as i32, i2 as u32 + 1),
                            separation,
                        });
                    }
                }
            }
        }
    }
    out
}

impl RobinSpectrum {
    pub fn config(&self) -> &DiskConfig {
        &self.config
    }

    pub fn truncation(&self) -> Truncation {
        self.config.truncation()
    }

    pub fn boundary(&self) -> Boundary {
        self.config.boundary
    }

    fn root(&self, idx: ModeIndex) -> &RadialRoot {
        &self.rows[idx.l.unsigned_abs() as usize][(idx.n - 1) as usize]
    }

    /// Entry for `idx`; panics outside the truncation.
    pub fn entry(&self, idx: ModeIndex) -> ModeEntry {
        assert!(
            self.truncation().contains(idx),
            "{idx:?} outside truncation"
        );
        let r = self.root(idx);
        ModeEntry {
            l: idx.l,
            n: idx.n,
            x: r.x,
            k: r.k,
            omega: r.omega,
            norm: r.norm,
            residual: r.residual,
        }
    }

    pub fn get(&self, idx: ModeIndex) -> Option<ModeEntry> {
        self.truncation().contains(idx).then(|| self.entry(idx))
    }

    pub fn omega(&self, idx: ModeIndex) -> f64 {
        self.root(idx).omega
    }

    pub fn k(&self, idx: ModeIndex) -> f64 {
        self.root(idx).k
    }

    pub fn norm(&self, idx: ModeIndex) -> f64 {
        self.root(idx).norm
    }

    /// Roots of order `|l| = m`.
    pub fn roots(&self, m: u32) -> Vec<f64> {
        self.rows[m as usize].iter().map(|r| r.x).collect()
    }

    /// All entries in truncation order.
    pub fn entries(&self) -> Vec<ModeEntry> {
        self.truncation().indices().map(|i| self.entry(i)).collect()
    }

    /// Frequencies in truncation order.
    pub fn omegas(&self) -> Vec<f64> {
        self.truncation().indices().map(|i| self.omega(i)).collect()
    }

    pub fn x_max(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| row.iter().map(|r| r.x))
            .fold(0.0, f64::max)
    }

    pub fn near_degeneracies(&self) -> &[NearDegeneracy] {
        &self.near_degeneracies
    }

    /// Whether every stored root meets its residual bound.
    pub fn residuals_within_bound(&self) -> Result<bool, BesselError> {
        for (m, row) in self.rows.iter().enumerate() {
            for r in row {
                if r.residual > self.config.boundary.residual_bound(m as i32, r.x)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Largest `residual / bound` over the table; at most 1 when every root
    /// meets its bound.
    pub fn worst_residual_ratio(&self) -> Result<f64, BesselError> {
        let mut worst: f64 = 0.0;
        for (m, row) in self.rows.iter().enumerate() {
            for r in row {
                worst = worst.max(r.residual / self.config.boundary.residual_bound(m as i32, r.x)?);
            }
        }
        Ok(worst)
    }

    /// Roots falling outside their interval between consecutive Dirichlet
    /// zeros. For `λ < |l|` the `n`-th root lies in `(j_{l,n-1}, j_{l,n}]`
    /// with `j_{l,0} = 0`; at `λ = |l|` (only `l = 0`, `λ = 0` here) the
    /// `x = 0` solution is dropped and the window moves up by one.
    pub fn interlacing_violations(&self) -> Result<usize, SpectrumError> {
        let mut count = 0;
        for (m, row) in self.rows.iter().enumerate() {
            let shift = match self.config.boundary {
                Boundary::Robin { lambda } if lambda == m as f64 => 1,
                _ => 0,
            };
            let zeros = robin_roots(m as i32, Boundary::Dirichlet, row.len() + shift)?;
            for (i, r) in row.iter().enumerate() {
                let lo = if i + shift == 0 {
                    0.0
                } else {
                    zeros[i + shift - 1]
                };
                let hi = zeros[i + shift];
                if !(r.x > lo && r.x <= hi) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_dirichlet_zero() {
        let r = robin_roots(0, Boundary::Dirichlet, 1).unwrap();
        assert!((r[0] - 2.404825557695773).abs() < 1e-14);
    }

    #[test]
    fn first_neumann_root_order_one() {
        let r = robin_roots(1, Boundary::Robin { lambda: 0.0 }, 1).unwrap();
        assert!((r[0] - 1.841183781340659).abs() < 1e-14);
    }

    #[test]
    fn negative_order_shares_roots() {
        let b = Boundary::Robin { lambda: -2.0 };
        assert_eq!(
            robin_roots(-3, b, 5).unwrap(),
            robin_roots(3, b, 5).unwrap()
        );
    }

    #[test]
    fn first_robin_root_lambda_minus_one() {
        // the oracle fixture root, residual checked directly
        let b = Boundary::Robin { lambda: -1.0 };
        let x = robin_roots(0, b, 1).unwrap()[0];
        assert!((x - 1.2557837117945936).abs() < 1e-14);
        assert!(b.root_function(0, x).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rejects_non_oscillatory_regime() {
        let err = robin_roots(0, Boundary::Robin { lambda: 0.5 }, 3).unwrap_err();
        assert!(matches!(err, SpectrumError::NonOscillatory { .. }));
        // λ <= |l| is fine for that order
        assert!(robin_roots(2, Boundary::Robin { lambda: 1.5 }, 3).is_ok());
        let cfg = DiskConfig {
            boundary: Boundary::Robin { lambda: 0.5 },
            ..DiskConfig::default()
        };
        assert!(matches!(
            build_spectrum(&cfg),
            Err(SpectrumError::NonOscillatory { .. })
        ));
    }

    #[test]
    fn zero_mode_is_excluded() {
        // λ = l: x = 0 solves the root equation but is not part of the spectrum
        let r = robin_roots(2, Boundary::Robin { lambda: 2.0 }, 2).unwrap();
        assert!(r[0] > 1.0);
    }

    #[test]
    fn massless_frequencies_equal_wavenumbers() {
        let cfg = DiskConfig {
            mass: 0.0,
            l_max: 3,
            n_max: 3,
            ..DiskConfig::default()
        };
        let s = build_spectrum(&cfg).unwrap();
        for e in s.entries() {
            assert_eq!(e.omega, e.k);
        }
    }

    #[test]
    fn massive_frequencies_exceed_mass() {
        let cfg = DiskConfig {
            mass: 1.0,
            l_max: 3,
            n_max: 3,
            ..DiskConfig::default()
        };
        let s = build_spectrum(&cfg).unwrap();
        assert!(s.entries().iter().all(|e| e.omega >= 1.0));
    }

    #[test]
    fn config_validation() {
        let d = DiskConfig::default;
        let bad = [
            DiskConfig { radius: 0.0, ..d() },
            DiskConfig { l_max: 17, ..d() },
            DiskConfig { n_max: 0, ..d() },
            DiskConfig { mass: -1.0, ..d() },
            DiskConfig {
                boundary: Boundary::Robin { lambda: f64::NAN },
                ..d()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        assert!(d().validate().is_ok());
    }

    #[test]
    fn truncation_positions_round_trip() {
        let t = Truncation::new(3, 4);
        assert_eq!(t.len(), 28);
        for (p, idx) in t.indices().enumerate() {
            assert_eq!(t.position(idx), Some(p));
            assert_eq!(t.index_at(t.flipped_position(p)), idx.flipped());
        }
        assert_eq!(t.position(ModeIndex::new(4, 1)), None);
        assert_eq!(t.position(ModeIndex::new(0, 0)), None);
    }

    #[test]
    fn no_degeneracies_at_defaults() {
        let s = build_spectrum(&DiskConfig::default()).unwrap();
        assert!(s.near_degeneracies().is_empty());
        assert!(s.residuals_within_bound().unwrap());
    }

    #[test]
    fn roots_interlace_with_dirichlet_zeros() {
        for boundary in [
            Boundary::Robin { lambda: -10.0 },
            Boundary::Robin { lambda: -1.0 },
            Boundary::Robin { lambda: 0.0 },
            Boundary::Dirichlet,
        ] {
            let s = build_spectrum(&DiskConfig {
                boundary,
                ..DiskConfig::default()
            })
            .unwrap();
            assert_eq!(s.interlacing_violations().unwrap(), 0, "{boundary:?}");
            assert!(s.worst_residual_ratio().unwrap() <= 1.0);
        }
    }
}
