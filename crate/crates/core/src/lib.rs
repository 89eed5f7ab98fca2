//! Exact-arithmetic construction and verification of classical orthogonal
//! polynomials in two variables through the matrix Rodrigues formula
//! `Q_n^t = w^{-1} div^{n}(Phi^{n} w)`.
//!
//! The crate is organized bottom-up:
//!
//! - [`poly`]: sparse bivariate polynomials over the rationals, matrices and
//!   exact linear algebra.
//! - [`kron`]: second-kind Kronecker powers of 2x2 matrices.
//! - [`diff`]: `nabla^{n}` / `div^{n}` and the factored-weight calculus.
//! - [`pearson`]: family data, the operator `L`, symmetry factors and the
//!   structural condition on `Phi` needed by the construction.
//! - [`moments`]: moment functionals from Pearson relations and closed forms.
//! - [`rodrigues`]: the construction itself and all verification checks.
//! - [`catalog`]: built-in families.
//! - [`report`] and [`serial`]: JSON / LaTeX / text output.

pub mod catalog;
pub mod diff;
pub mod error;
pub mod kron;
pub mod moments;
pub mod pearson;
pub mod poly;
pub mod report;
pub mod ring;
pub mod rodrigues;
pub mod serial;

pub use error::{Error, Result};
pub use poly::{monomial_vector, Axis, BiPoly, LinearSolution, Mat, Monomial, PolyMatrix, QMatrix};
pub use ring::{parse_rational, Rational, Ring};
