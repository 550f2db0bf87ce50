//! Randomized identity suites shared by the `check` command and the acceptance tests.

use std::fmt;

use crate::algebra::Mat;
use crate::reporacle::{check_identity, default_reps};
use crate::sample;
use crate::thetamat::theta_hat;
use crate::upbw::{braid_residual, ch_residual, UPoly};
use crate::whcalc::{d_op, evaluators_agree};

/// Outcome of one identity suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub pass: bool,
    pub checked: usize,
    pub detail: String,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} checked){}",
            self.name,
            self.checked,
            if self.detail.is_empty() { String::new() } else { format!(": {}", self.detail) }
        )
    }
}

pub const SUITES: [&str; 5] = ["ch", "braid", "theta-mult", "drham", "evaluators"];

fn report(name: &'static str, checked: usize, failure: Option<String>) -> SuiteReport {
    SuiteReport { name, pass: failure.is_none(), checked, detail: failure.unwrap_or_default() }
}

/// The Cayley–Hamilton residual vanishes exactly and in every default representation.
pub fn ch() -> SuiteReport {
    let r = ch_residual();
    if !r.is_zero() {
        return report("ch", 1, Some(format!("nonzero residual {r}")));
    }
    let zero: Mat<UPoly> = Mat::zero(r.dim());
    let numeric = check_identity(&r, &zero, &default_reps(), 1e-12);
    report("ch", 1 + numeric.checked, (!numeric.pass).then(|| numeric.to_string()))
}

pub fn braid() -> SuiteReport {
    let r = braid_residual();
    report("braid", 1, (!r.is_zero()).then(|| format!("nonzero residual {r}")))
}

/// `Θ̂(ab) = Θ̂(a)Θ̂(b)` on random pairs of degree `≤ 3`.
pub fn theta_mult(seed: u64, n: usize) -> SuiteReport {
    let mut rng = sample::rng(seed);
    for _ in 0..n {
        let a = sample::element(&mut rng, 3);
        let b = sample::element(&mut rng, 3);
        if theta_hat(&(&a * &b)) != theta_hat(&a).mul(&theta_hat(&b)) {
            return report("theta-mult", n, Some(format!("a = {a}, b = {b}")));
        }
    }
    report("theta-mult", n, None)
}

/// `d² = 0` on random forms of every degree.
pub fn drham(seed: u64, n: usize) -> SuiteReport {
    let mut rng = sample::rng(seed);
    for i in 0..n {
        let w = sample::form(&mut rng, (i % 5) as u32);
        let dd = d_op(&d_op(&w));
        if !dd.is_zero() {
            return report("drham", n, Some(format!("d²({w}) = {dd}")));
        }
    }
    report("drham", n, None)
}

/// The three derivative evaluators agree on random products of degree `≤ 4`.
pub fn evaluators(seed: u64, n: usize) -> SuiteReport {
    let mut rng = sample::rng(seed);
    for _ in 0..n {
        let a = sample::product(&mut rng, 4);
        if let Some((u, s, c, t)) = evaluators_agree(&a) {
            return report("evaluators", n, Some(format!("{u:?} of {a}: sigma {s}, coproduct {c}, theta {t}")));
        }
    }
    report("evaluators", n, None)
}

/// Run one named suite, or all of them for `"all"`.
pub fn run(name: &str, seed: u64) -> Option<Vec<SuiteReport>> {
    let one = |s: &str| match s {
        "ch" => Some(ch()),
        "braid" => Some(braid()),
        "theta-mult" => Some(theta_mult(seed, 100)),
        "drham" => Some(drham(seed, 100)),
        "evaluators" => Some(evaluators(seed, 200)),
        _ => None,
    };
    if name == "all" {
        SUITES.iter().map(|s| one(s)).collect()
    } else {
        one(name).map(|r| vec![r])
    }
}
