//! Numerical toolkit for the sharp Hardy–Poincaré interpolation inequality on
//! Minkowski normed spaces: Bessel special functions, anisotropic norms and
//! their polars, discrete symmetrization, radial spectral problems, rigidity
//! diagnostics for the equality case, and the associated nonlinear PDE.

pub mod error;
pub mod norm;
pub mod numerics;
pub mod pde;
pub mod rearrange;
pub mod rigidity;
pub mod spectrum;
pub mod specfun;

pub use error::{Error, Result};
