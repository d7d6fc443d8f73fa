//! Root refinement, Gauss-Legendre rules and the tensor quadrature on the disk.

mod gauss;
mod quadrature;
mod roots;

pub use gauss::{gauss_legendre, GaussLegendre, MAX_GAUSS_NODES};
pub use quadrature::{
    disk_quadrature, pairwise_sum, pairwise_sum_complex, QuadratureError, QuadratureGrid, MIN_NODES,
};
pub use roots::{refine_root, RootError, MAX_ITERATIONS};
