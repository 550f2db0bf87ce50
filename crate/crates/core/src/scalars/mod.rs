//! Exact coefficient arithmetic.

pub mod gauss;
pub mod poly;
pub mod ratfun;

pub use gauss::GaussRat;
pub use poly::{Mono, Poly, Var};
pub use ratfun::{CenterFun, ClassFun, HRat};
