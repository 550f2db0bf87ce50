use proptest::prelude::*;

use ncu_core::scalars::{CenterFun, ClassFun, GaussRat};
use ncu_core::Error;

fn rho() -> CenterFun {
    CenterFun::rho()
}

fn hb() -> CenterFun {
    CenterFun::hbar()
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, 1i64..=5, -6i64..=6, 1i64..=5).prop_map(|(a, b, c, d)| GaussRat::gauss((a, b), (c, d)))
}

/// Small polynomials in `ρ̂`, `ħ` and `t`.
fn center_poly(with_hbar: bool) -> impl Strategy<Value = CenterFun> {
    let hmax = if with_hbar { 2u32 } else { 0 };
    prop::collection::vec((-3i64..=3, 0u32..3, 0u32..=hmax, 0u32..2), 1..4).prop_map(|terms| {
        terms.into_iter().fold(CenterFun::int(0), |acc, (c, r, h, t)| {
            let m = &(&rho().powi(r as i32).unwrap() * &hb().powi(h as i32).unwrap()) * &CenterFun::t().powi(t as i32).unwrap();
            &acc + &m.scale(&GaussRat::from_int(c))
        })
    })
}

fn center_fun() -> impl Strategy<Value = CenterFun> {
    (center_poly(true), center_poly(true)).prop_filter_map("nonzero denominator", |(n, d)| n.checked_div(&d).ok())
}

/// Rational functions of `ρ̂` and `t` with ħ-free numerator and denominator, so `ħ → 0` is regular.
fn classical_fun() -> impl Strategy<Value = CenterFun> {
    (center_poly(false), center_poly(false)).prop_filter_map("nonzero denominator", |(n, d)| n.checked_div(&d).ok())
}

/// Substitution oracle for `∂_ρ̂ f = (f(ρ̂+ħ) − f(ρ̂−ħ))/2ħ`.
fn drho_oracle(f: &CenterFun) -> CenterFun {
    use ncu_core::scalars::{Poly, Var};
    let plus = f.subst(Var::Rho, &(&Poly::var(Var::Rho) + &Poly::var(Var::Hbar))).unwrap();
    let minus = f.subst(Var::Rho, &(&Poly::var(Var::Rho) - &Poly::var(Var::Hbar))).unwrap();
    &(&plus - &minus) / &(&CenterFun::int(2) * &hb())
}

#[test]
fn worked_arithmetic() {
    let a = &(&rho() * &rho()) - &(&hb() * &hb());
    assert_eq!(&a / &(&rho() - &hb()), &rho() + &hb());
    let r = rho().inv().unwrap();
    assert_eq!(&r + &r, &CenterFun::int(2) / &rho());
    assert_eq!(rho().checked_div(&CenterFun::int(0)), Err(Error::DivisionByZero));
}

#[test]
fn worked_shifts_and_differences() {
    let sq = &rho() * &rho();
    assert_eq!(sq.shift_rho(1), &(&sq + &(&CenterFun::int(2) * &(&hb() * &rho()))) + &(&hb() * &hb()));
    assert_eq!(rho().inv().unwrap().shift_rho(-1), (&rho() - &hb()).inv().unwrap());
    assert_eq!(rho().drho(), CenterFun::int(1));
    assert_eq!(rho().inv().unwrap().drho(), (&(&hb() * &hb()) - &sq).inv().unwrap());
    assert_eq!(sq.drho(), drho_oracle(&sq));
    assert_eq!(sq.drho(), &CenterFun::int(2) * &rho());
}

#[test]
fn worked_limits() {
    let cas = &(&rho() * &rho()) - &(&hb() * &hb());
    assert_eq!(cas.limit_h0().unwrap(), ClassFun(&rho() * &rho()));
    let prof = (&rho() * &cas).inv().unwrap();
    assert_eq!(prof.limit_h0().unwrap(), ClassFun(rho().powi(-3).unwrap()));
    assert!(matches!(CenterFun::two_over_h().limit_h0(), Err(Error::PoleAtZero)));
}

#[test]
fn gaussian_literals() {
    assert_eq!("3/4".parse::<GaussRat>().unwrap(), GaussRat::from_frac(3, 4));
    assert_eq!("i1/2".parse::<GaussRat>().unwrap(), GaussRat::gauss((0, 1), (1, 2)));
    assert_eq!("-i".parse::<GaussRat>().unwrap(), GaussRat::gauss((0, 1), (-1, 1)));
    assert!("1/0".parse::<GaussRat>().is_err());
    assert!("x".parse::<GaussRat>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_field_axioms(a in gauss(), b in gauss(), c in gauss()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, GaussRat::from_int(1));
        }
    }

    #[test]
    fn gauss_display_round_trip(re in -20i64..=20, d in 1i64..=9, imag in any::<bool>()) {
        let v = if imag { GaussRat::gauss((0, 1), (re, d)) } else { GaussRat::from_frac(re, d) };
        prop_assert_eq!(v.to_string().parse::<GaussRat>().unwrap(), v);
    }

    #[test]
    fn center_field_axioms(a in center_fun(), b in center_fun(), c in center_fun()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &CenterFun::int(1), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), CenterFun::int(1));
        }
    }

    #[test]
    fn shift_is_invertible(f in center_fun(), k in -3i64..=3) {
        prop_assert_eq!(f.shift_rho(k).shift_rho(-k), f);
    }

    #[test]
    fn drho_commutes_with_shifts(f in center_fun(), k in -2i64..=2) {
        prop_assert_eq!(f.shift_rho(k).drho(), f.drho().shift_rho(k));
    }

    #[test]
    fn drho_matches_substitution(f in center_fun()) {
        prop_assert_eq!(f.drho(), drho_oracle(&f));
    }

    #[test]
    fn drho_classical_limit(f in classical_fun()) {
        let lim = f.limit_h0().unwrap();
        prop_assert_eq!(f.drho().limit_h0().unwrap(), lim.d_dr());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in center_fun(), b in center_fun(), v in (1i32..5, 1i32..5, 1i32..5)) {
        use num_complex::Complex64;
        let p = [Complex64::new(v.0 as f64 * 0.37, 0.1), Complex64::new(v.1 as f64 * 1.13, -0.2), Complex64::new(0.3, v.2 as f64 * 0.21), Complex64::new(1.0, 0.0)];
        if let (Some(x), Some(y), Some(xy)) = (a.eval_complex(&p), b.eval_complex(&p), (&a * &b).eval_complex(&p)) {
            prop_assert!((x * y - xy).norm() <= 1e-9 * (1.0 + xy.norm()));
            let s = (&a + &b).eval_complex(&p).unwrap();
            prop_assert!((x + y - s).norm() <= 1e-9 * (1.0 + s.norm()));
        }
    }
}
