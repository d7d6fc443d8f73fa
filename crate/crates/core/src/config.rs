//! Run configuration shared by every command.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field_state::DEFAULT_SEED;
use crate::numerics::{QuadratureError, QuadratureGrid};
use crate::spectrum::{Boundary, DiskConfig, RobinSpectrum, SpectrumError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Which invariant suite `verify` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Spectrum,
    Basis,
    Field,
    Symmetry,
    Fock,
    All,
}

impl Suite {
    /// The concrete suites this one stands for, in report order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Spectrum,
                Suite::Basis,
                Suite::Field,
                Suite::Symmetry,
                Suite::Fock,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectrum => "spectrum",
            Suite::Basis => "basis",
            Suite::Field => "field",
            Suite::Symmetry => "symmetry",
            Suite::Fock => "fock",
            Suite::All => "all",
        }
    }
}

/// Disk parameters, grid size, seed and command options. Missing grid sizes
/// are chosen from the spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub radius: f64,
    pub mass: f64,
    pub boundary: Boundary,
    pub l_max: u32,
    pub n_max: u32,
    pub grid_r: Option<usize>,
    pub grid_theta: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub suite: Suite,
    /// Snapshot times for `evolve`.
    pub times: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let disk = DiskConfig::default();
        Self {
            radius: disk.radius,
            mass: disk.mass,
            boundary: disk.boundary,
            l_max: disk.l_max,
            n_max: disk.n_max,
            grid_r: None,
            grid_theta: None,
            seed: DEFAULT_SEED,
            out: None,
            suite: Suite::All,
            times: vec![0.0, 0.5, 1.0, 1.5, 2.0],
        }
    }
}

/// Radial nodes used when none are given: comfortably above the resolution
/// floor so that projections of truncated fields are exact to rounding.
pub fn default_grid_r(x_max: f64) -> usize {
    (2.0 * x_max / std::f64::consts::PI).ceil() as usize + 24
}

/// Angular nodes used when none are given.
pub fn default_grid_theta(l_max: u32) -> usize {
    4 * l_max as usize + 8
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn disk(&self) -> DiskConfig {
        DiskConfig {
            radius: self.radius,
            mass: self.mass,
            boundary: self.boundary,
            l_max: self.l_max,
            n_max: self.n_max,
        }
    }

    /// Tensor grid for the spectrum, from the configured or default sizes.
    pub fn grid(&self, spectrum: &RobinSpectrum) -> Result<QuadratureGrid, ConfigError> {
        let n_r = self
            .grid_r
            .unwrap_or_else(|| default_grid_r(spectrum.x_max()));
        let n_theta = self
            .grid_theta
            .unwrap_or_else(|| default_grid_theta(self.l_max));
        Ok(QuadratureGrid::new(self.radius, n_r, n_theta)?)
    }
}
