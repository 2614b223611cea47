//! Shared numerical kernels: finite-difference weights on arbitrary nodes,
//! adaptive quadrature, symmetric tridiagonal eigensolving, small dense
//! symmetric linear algebra, and a banded LU factorization.
//!
//! These are deliberately small, dependency-free routines tuned for the
//! problem sizes this crate actually uses (meshes up to a few thousand nodes,
//! dense blocks up to dimension eight).

pub mod banded;
pub mod fd;
pub mod quad;
pub mod smallmat;
pub mod tridiag;
