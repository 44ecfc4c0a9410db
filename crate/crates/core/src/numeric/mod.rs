//! Numerical building blocks: quadrature, finite-difference stencils and a
//! complex tridiagonal solver.

pub mod quadrature;
pub mod stencil;
pub mod tridiag;

pub use quadrature::{adaptive_gauss_legendre, composite_simpson, GaussLegendre};
pub use stencil::Stencil;
pub use tridiag::{solve_tridiagonal, Tridiagonal};
