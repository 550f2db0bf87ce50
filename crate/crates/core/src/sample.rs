//! Seeded random samples for tests and the randomized identity suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aext::AElem;
use crate::quantmap::ClassPoly;
use crate::scalars::{CenterFun, GaussRat, HRat};
use crate::upbw::{Gen, UMono, UPoly};
use crate::whcalc::Form;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut SampleRng) -> i64 {
    *[-2, -1, 1, 1, 2, 3].choose(rng).expect("nonempty")
}

/// A sparse linear combination of `1, t, x, y, z, ρ̂` with small integer coefficients.
pub fn factor(rng: &mut SampleRng) -> AElem {
    let basis = [AElem::one(), AElem::gen(Gen::T), AElem::x(), AElem::y(), AElem::z(), AElem::rho()];
    loop {
        let mut out = AElem::zero();
        for b in &basis {
            if rng.gen_bool(0.35) {
                out = &out + &b.scale(&CenterFun::int(small(rng)));
            }
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// A product of `1..=max_deg` random factors.
pub fn product(rng: &mut SampleRng, max_deg: u32) -> AElem {
    let d = rng.gen_range(1..=max_deg);
    (0..d).fold(AElem::one(), |acc, _| &acc * &factor(rng))
}

/// A sum of a few random monomials in `x, y, z` (with `t`, `ρ̂` coefficients) of degree `≤ max_deg`.
pub fn element(rng: &mut SampleRng, max_deg: u32) -> AElem {
    let n = rng.gen_range(1..=3);
    let letters = [AElem::gen(Gen::T), AElem::x(), AElem::y(), AElem::z(), AElem::rho()];
    let mut out = AElem::zero();
    for _ in 0..n {
        let d = rng.gen_range(0..=max_deg);
        let mut m = AElem::int(small(rng));
        for _ in 0..d {
            m = &m * letters.choose(rng).expect("nonempty");
        }
        out = &out + &m;
    }
    out
}

/// A polynomial element of `U(u(2)_h)` of degree `≤ max_deg`.
pub fn upoly(rng: &mut SampleRng, max_deg: u32) -> UPoly {
    let n = rng.gen_range(1..=3);
    let mut out = UPoly::zero();
    for _ in 0..n {
        let d = rng.gen_range(0..=max_deg);
        let word: Vec<Gen> = (0..d).map(|_| *Gen::ALL.choose(rng).expect("nonempty")).collect();
        out = &out + &UPoly::from_word(&word).scale(&HRat::int(small(rng)));
    }
    out
}

/// A commutative polynomial in `t, x, y, z` of degree `≤ max_deg`.
pub fn class_poly(rng: &mut SampleRng, max_deg: u32) -> ClassPoly {
    let n = rng.gen_range(1..=3);
    let mut out = ClassPoly::zero();
    for _ in 0..n {
        let d = rng.gen_range(0..=max_deg);
        let mut e = [0u16; 4];
        for _ in 0..d {
            e[rng.gen_range(0..4)] += 1;
        }
        out.add_term(UMono(e), HRat::constant(GaussRat::from_int(small(rng))));
    }
    out
}

/// A rational function of `ρ̂` with a denominator that has no rational roots.
pub fn radial_fun(rng: &mut SampleRng) -> CenterFun {
    let rho = CenterFun::rho();
    let r2 = &rho * &rho;
    let num = &(&r2.scale(&GaussRat::from_int(rng.gen_range(-2..=2))) + &rho.scale(&GaussRat::from_int(small(rng))))
        + &CenterFun::int(small(rng));
    let den = &r2.scale(&GaussRat::from_int(rng.gen_range(1..=3))) + &CenterFun::int(rng.gen_range(1..=4));
    let f = num.checked_div(&den).expect("nonzero denominator");
    if rng.gen_bool(0.5) {
        &f * &rho.powi(rng.gen_range(-2..=1)).expect("rho is invertible")
    } else {
        f
    }
}

/// A random form of exterior degree `k` with coefficients of degree `≤ 2`.
pub fn form(rng: &mut SampleRng, k: u32) -> Form {
    let mut out = Form::zero();
    for mask in 0u8..16 {
        if mask.count_ones() == k && rng.gen_bool(0.6) {
            out.add_term(mask, element(rng, 2));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = product(&mut rng(7), 4);
        let b = product(&mut rng(7), 4);
        assert_eq!(a, b);
        assert!(!radial_fun(&mut rng(1)).is_zero());
        assert_eq!(form(&mut rng(3), 2).degree().unwrap_or(2), 2);
    }
}
