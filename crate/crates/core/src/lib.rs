//! Normal modes of a free scalar field on a disk with a Robin edge.
//!
//! The pipeline runs bottom-up: Bessel functions and quadrature, the root
//! spectrum, the orthonormal mode basis, classical field states and their
//! conserved quantities, the symmetry transformations and bilocal charges,
//! and finally the quantum generators on small Fock spaces.

pub mod config;
pub mod field_state;
pub mod fock_quantum;
pub mod io;
pub mod mode_basis;
pub mod numerics;
pub mod special_functions;
pub mod spectrum;
pub mod symmetry;
pub mod verify;

pub use config::{ConfigError, RunConfig, Suite};
pub use field_state::{FieldError, FieldGrid, FieldState, DEFAULT_SEED};
pub use fock_quantum::{FockError, SectorSpace};
pub use io::FormatError;
pub use mode_basis::{BasisError, ModeBasis};
pub use numerics::{QuadratureError, QuadratureGrid};
pub use special_functions::BesselError;
pub use spectrum::{
    build_spectrum, Boundary, DiskConfig, ModeIndex, RobinSpectrum, SpectrumError, Truncation,
};
pub use symmetry::{KernelCoefficients, SymmetryError};
pub use verify::{run_verify, VerifyError, VerifyReport};

/// Any error the library reports.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
