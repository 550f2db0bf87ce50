use num_complex::Complex64;
use proptest::prelude::*;

use ncu_core::aext::{AElem, ClassElem, SkewExpr};
use ncu_core::ncmaxwell::{
    classical_potential, distributional_pairing, div, field_from_polys, monopole, monopole_profile, monopole_residual, radial_pairing, rot,
    rotate, vector_potential, Endpoint, VecField,
};
use ncu_core::reporacle::default_reps;
use ncu_core::sample;
use ncu_core::scalars::{CenterFun, ClassFun, GaussRat};
use ncu_core::upbw::Gen;
use ncu_core::Error;

fn rho() -> CenterFun {
    CenterFun::rho()
}

fn hb() -> CenterFun {
    CenterFun::hbar()
}

/// `((ρ̂²−ħ²)/ρ̂)∂_ρ̂f + 3(f(ρ̂+ħ)(ρ̂+ħ) + f(ρ̂−ħ)(ρ̂−ħ))/(2ρ̂)`.
fn radial_div_oracle(f: &CenterFun) -> CenterFun {
    let r = rho();
    let cas = &(&r * &r) - &(&hb() * &hb());
    let first = &(&cas / &r) * &f.drho();
    let second = &(&(&f.shift_rho(1) * &(&r + &hb())) + &(&f.shift_rho(-1) * &(&r - &hb()))) * &CenterFun::int(3);
    &first + &(&second / &(&CenterFun::int(2) * &r))
}

fn radial() -> impl Strategy<Value = CenterFun> {
    any::<u64>().prop_map(|s| sample::radial_fun(&mut sample::rng(s)))
}

fn poly_field() -> impl Strategy<Value = VecField> {
    any::<u64>().prop_map(|s| {
        let mut rng = sample::rng(s);
        let p = [sample::class_poly(&mut rng, 3), sample::class_poly(&mut rng, 3), sample::class_poly(&mut rng, 3)];
        field_from_polys([&p[0], &p[1], &p[2]])
    })
}

fn classical_div(h: &VecField) -> ClassElem {
    (0..3).fold(ClassElem::zero(), |acc, k| acc.add(&h.0[k].classical_limit().unwrap().partial(Gen::from_spatial(k))))
}

fn classical_rot(h: &VecField) -> [ClassElem; 3] {
    let c = |i: usize, j: usize| {
        let a = h.0[j].classical_limit().unwrap().partial(Gen::from_spatial(i));
        let b = h.0[i].classical_limit().unwrap().partial(Gen::from_spatial(j));
        a.add(&b.mul(&ClassElem::constant(ClassFun(CenterFun::int(-1)))))
    };
    [c(1, 2), c(2, 0), c(0, 1)]
}

#[test]
fn divergence_examples() {
    assert_eq!(div(&VecField(AElem::coords())), AElem::int(3));
    let f = (&(&rho() * &rho()) + &CenterFun::int(1)).inv().unwrap();
    assert_eq!(div(&VecField::radial(&f)), AElem::central(radial_div_oracle(&f)));
    assert!(div(&monopole(&CenterFun::g())).is_zero());
}

#[test]
fn curl_examples() {
    assert!(rot(&VecField::radial(&(&rho() * &rho()))).is_zero());
    let f = (&(&rho() * &rho()) + &CenterFun::int(1)).inv().unwrap();
    assert!(rot(&VecField::radial(&f)).is_zero());
    let r = rot(&VecField([AElem::y(), AElem::zero(), AElem::zero()]));
    let lim: Vec<String> = r.0.iter().map(|c| c.classical_limit().unwrap().to_string()).collect();
    assert_eq!(lim, ["0", "0", "-1"]);
}

#[test]
fn monopole_examples() {
    let g = CenterFun::g();
    assert!(monopole_residual(&monopole_profile(&g)).unwrap().is_zero());
    assert!(!monopole_residual(&(&g / &rho().powi(3).unwrap())).unwrap().is_zero());
    let m = monopole(&g);
    assert!(div(&m).is_zero());
    assert!(rot(&m).is_zero());
    let lim = monopole_profile(&g).limit_h0().unwrap();
    assert_eq!(lim, ClassFun(&g / &rho().powi(3).unwrap()));
    assert!(monopole(&CenterFun::int(0)).is_zero());
    assert!(matches!(monopole_residual(&CenterFun::t()), Err(Error::Domain(_))));
}

#[test]
fn pairings() {
    let two = |n: i64| Endpoint::Value(GaussRat::from_int(n));
    assert_eq!(radial_pairing(&(&rho() * &rho()), &two(1), &two(2)).unwrap(), CenterFun::int(3));
    let g = CenterFun::g();
    let lorentz = (&CenterFun::int(1) + &(&rho() * &rho())).inv().unwrap();
    assert_eq!(distributional_pairing(&monopole_profile(&g), &lorentz).unwrap(), &CenterFun::int(-4) * &g);
    let bad = &(&rho() * &rho()) * &lorentz;
    assert!(matches!(distributional_pairing(&monopole_profile(&g), &bad), Err(Error::IrregularTestFunction(_))));
    let pole = rho().inv().unwrap();
    assert!(matches!(radial_pairing(&pole, &Endpoint::Zero, &two(1)), Err(Error::IrregularTestFunction(_))));
}

#[test]
fn dirac_potential() {
    let n = [GaussRat::from_int(0), GaussRat::from_int(0), GaussRat::from_int(1)];
    let g = CenterFun::g();
    let a = vector_potential(n.clone(), &g).unwrap();
    let den = &AElem::central(&rho() * &rho()) - &AElem::z().scale(&rho());
    let expect = SkewExpr::prod(vec![SkewExpr::atom(AElem::y().scale(&g)), SkewExpr::inverse(SkewExpr::atom(den)).unwrap()]);
    assert_eq!(a[0], expect);
    assert!(default_reps().iter().any(|r| r.eval_skew(&a[0]).is_ok()));

    let off = [GaussRat::from_int(1), GaussRat::from_int(1), GaussRat::from_int(0)];
    assert!(matches!(vector_potential(off, &g), Err(Error::NonUnitVector)));

    let n2 = [GaussRat::from_frac(3, 5), GaussRat::from_int(0), GaussRat::from_frac(4, 5)];
    let a2 = vector_potential(n2, &g).unwrap();
    for p in [[0.4, -1.1, 0.3], [1.5, 0.2, -0.7], [-0.6, 0.9, 1.2]] {
        let hbar = 1e-6;
        let xyz = p.map(|v| Complex64::new(v, 0.0));
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + hbar * hbar).sqrt();
        let center = [Complex64::new(0.0, 0.0), Complex64::new(r, 0.0), Complex64::new(hbar, 0.0), Complex64::new(1.5, 0.0)];
        let classical = classical_potential([0.6, 0.0, 0.8], 1.5, p);
        for k in 0..3 {
            let v = a2[k].eval_commutative(xyz, &center).unwrap();
            assert!((v - classical[k]).norm() < 1e-4, "component {k} at {p:?}: {v} vs {}", classical[k]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radial_fields_are_curl_free(f in radial()) {
        prop_assert!(rot(&VecField::radial(&f)).is_zero());
    }

    #[test]
    fn radial_divergence_matches_closed_form(f in radial()) {
        prop_assert_eq!(div(&VecField::radial(&f)), AElem::central(radial_div_oracle(&f)));
    }

    #[test]
    fn residual_vanishes_iff_divergence_does(f in radial(), k in -2i64..=2) {
        let f = if k == 0 { monopole_profile(&CenterFun::int(3)) } else { f };
        let res = monopole_residual(&f).unwrap();
        prop_assert_eq!(res.is_zero(), div(&VecField::radial(&f)).is_zero());
    }

    #[test]
    fn divergence_is_rotation_equivariant(h in poly_field()) {
        prop_assert_eq!(div(&h.rotate()), rotate(&div(&h)));
    }

    #[test]
    fn classical_limits_of_div_and_rot(h in poly_field()) {
        prop_assert_eq!(div(&h).classical_limit().unwrap(), classical_div(&h));
        let r = rot(&h);
        let expect = classical_rot(&h);
        for k in 0..3 {
            prop_assert_eq!(r.0[k].classical_limit().unwrap(), expect[k].clone());
        }
    }
}
