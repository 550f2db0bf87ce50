//! Exact quantum differential calculus on the enveloping algebra `U(u(2)_h)`.

pub mod aext;
pub mod algebra;
pub mod cli;
pub mod error;
pub mod ncmaxwell;
pub mod quantmap;
pub mod reporacle;
pub mod sample;
pub mod scalars;
pub mod suites;
pub mod thetamat;
pub mod upbw;
pub mod whcalc;

pub use error::{Error, Result};
