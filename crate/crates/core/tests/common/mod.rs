//! Helpers shared by the integration tests.
#![allow(dead_code)]

use ncu_core::reporacle::{CMat, Rep, RepEval};

/// A value computed directly from a representation, for comparison with a symbolic image.
pub struct Numeric<F>(pub F);

impl<F: Fn(&Rep) -> ncu_core::Result<CMat>> RepEval for Numeric<F> {
    fn rep_eval(&self, r: &Rep) -> ncu_core::Result<CMat> {
        (self.0)(r)
    }
}
