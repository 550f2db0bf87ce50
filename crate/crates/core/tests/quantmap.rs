use proptest::prelude::*;

use ncu_core::aext::{a_from_u, AElem, SkewExpr};
use ncu_core::quantmap::{
    alpha_central, alpha_form, alpha_fraction, alpha_inverse, alpha_operator, alpha_poly, classical_d, non_commuting_form, poisson_bracket,
    star_product, ClassForm, ClassFrac, ClassOp, ClassPoly, Classical,
};
use ncu_core::reporacle::{check_identity, default_reps, Rep};
use ncu_core::sample;
use ncu_core::scalars::{CenterFun, ClassFun, GaussRat, HRat};
use ncu_core::upbw::{Gen, UPoly};
use ncu_core::whcalc::{d_op, deriv, DMono, Form, Wrt};

fn cp(g: Gen) -> ClassPoly {
    ClassPoly::gen(g)
}

fn half_h() -> HRat {
    &HRat::h() * &HRat::constant(GaussRat::from_frac(1, 2))
}

fn class_poly(max_deg: u32) -> impl Strategy<Value = ClassPoly> {
    any::<u64>().prop_map(move |s| sample::class_poly(&mut sample::rng(s), max_deg))
}

fn linear() -> impl Strategy<Value = ClassPoly> {
    (-3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, c)| {
        [(Gen::X, a), (Gen::Y, b), (Gen::Z, c)].into_iter().fold(ClassPoly::zero(), |acc, (g, k)| &acc + &cp(g).scale(&HRat::int(k)))
    })
}

#[test]
fn symmetrization_examples() {
    assert_eq!(alpha_poly(&cp(Gen::X)), UPoly::gen(Gen::X));
    let xy = &UPoly::gen(Gen::X) * &UPoly::gen(Gen::Y);
    assert_eq!(alpha_poly(&(&cp(Gen::X) * &cp(Gen::Y))), &xy - &UPoly::gen(Gen::Z).scale(&half_h()));
    let comm = &(&alpha_poly(&cp(Gen::X)) * &alpha_poly(&cp(Gen::Y))) - &(&alpha_poly(&cp(Gen::Y)) * &alpha_poly(&cp(Gen::X)));
    assert_eq!(alpha_inverse(&comm), cp(Gen::Z).scale(&HRat::h()));
}

#[test]
fn central_quantization() {
    let r = CenterFun::rho();
    let profile = ClassFun(&CenterFun::g() / &r.powi(3).unwrap());
    assert_eq!(alpha_central(&profile), &CenterFun::g() * &r.powi(-3).unwrap());
    assert_eq!(alpha_central(&ClassFun(CenterFun::t())), CenterFun::t());
    let lorentz = ClassFun((&(&r * &r) + &CenterFun::int(1)).inv().unwrap());
    assert_eq!(alpha_central(&lorentz), (&(&r * &r) + &CenterFun::int(1)).inv().unwrap());
}

#[test]
fn right_fractions() {
    let one = Classical::poly(ClassPoly::one());
    let x = Classical::poly(cp(Gen::X));
    assert_eq!(alpha_fraction(&one, &x).unwrap(), SkewExpr::inverse(SkewExpr::atom(AElem::x())).unwrap());
    let xy = Classical::poly(&cp(Gen::X) + &cp(Gen::Y));
    let same = alpha_fraction(&xy, &xy).unwrap();
    let reps: Vec<Rep> = default_reps().into_iter().filter(|r| r.dim() % 2 == 0).collect();
    let report = check_identity(&same, &AElem::one(), &reps, 1e-10);
    assert!(report.pass, "{report}");
    let r2 = Classical::fun(ClassFun(&CenterFun::rho() * &CenterFun::rho()));
    let z = Classical::poly(cp(Gen::Z));
    let folded = alpha_fraction(&z, &r2).unwrap();
    assert_eq!(folded.as_aelem(), Some(AElem::z().scale(&CenterFun::rho().powi(-2).unwrap())));
    assert!(alpha_fraction(&one, &Classical::zero()).is_err());
}

#[test]
fn quantized_operators() {
    let a = &(&AElem::y() * &AElem::z()) + &AElem::x();
    let dx = alpha_operator(&ClassOp::partial(Gen::X)).unwrap();
    assert_eq!(dx.apply(&a).as_aelem(), Some(deriv(Wrt::X, &a)));
    let x_dy = ClassOp::term(ClassFrac::new(Classical::poly(cp(Gen::X))), DMono::gen(Gen::Y));
    let q = alpha_operator(&x_dy).unwrap();
    assert_eq!(q.apply(&a).as_aelem(), Some(&AElem::x() * &deriv(Wrt::Y, &a)));
}

#[test]
fn star_product_examples() {
    let (x, y, z) = (cp(Gen::X), cp(Gen::Y), cp(Gen::Z));
    assert_eq!(&star_product(&x, &y) - &star_product(&y, &x), z.scale(&HRat::h()));
    let f = &(&x * &y) + &z;
    assert_eq!(star_product(&ClassPoly::one(), &f), f);
    assert_eq!(star_product(&star_product(&x, &y), &z), star_product(&x, &star_product(&y, &z)));
}

#[test]
fn form_quantization() {
    let dx: ClassForm = ClassForm::from([(1u8 << Gen::X.idx(), Classical::poly(ClassPoly::one()))]);
    assert_eq!(alpha_form(&dx), Form::new(&[Gen::X], AElem::one()));
    let xy: ClassForm = ClassForm::from([(0u8, Classical::poly(&cp(Gen::X) * &cp(Gen::Y)))]);
    let expect = &(&AElem::x() * &AElem::y()) - &AElem::z().scale(half_h().get());
    assert_eq!(alpha_form(&xy), Form::new(&[], expect));
    let w = non_commuting_form();
    assert_ne!(alpha_form(&classical_d(&w)), d_op(&alpha_form(&w)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn alpha_round_trip(p in class_poly(4)) {
        prop_assert_eq!(alpha_inverse(&alpha_poly(&p)), p);
    }

    #[test]
    fn alpha_is_identity_at_h0(p in class_poly(4)) {
        let q = alpha_poly(&p).at_h0().unwrap();
        let p0 = p.at_h0().unwrap();
        let lhs: Vec<_> = q.terms().map(|(m, c)| (*m, c.clone())).collect();
        let rhs: Vec<_> = p0.terms().map(|(m, c)| (*m, c.clone())).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_associative_and_unital(a in class_poly(3), b in class_poly(3), c in class_poly(3)) {
        prop_assert_eq!(star_product(&star_product(&a, &b), &c), star_product(&a, &star_product(&b, &c)));
        prop_assert_eq!(star_product(&a, &ClassPoly::one()), a.clone());
        prop_assert_eq!(star_product(&ClassPoly::one(), &a), a);
    }

    #[test]
    fn star_commutator_is_poisson_to_first_order(f in linear(), g in linear()) {
        let comm = &star_product(&f, &g) - &star_product(&g, &f);
        let inv_h = HRat::new(CenterFun::h().inv().unwrap()).unwrap();
        prop_assert_eq!(comm.scale(&inv_h).at_h0().unwrap(), poisson_bracket(&f, &g));
    }

    #[test]
    fn quantized_products_reduce_consistently(p in class_poly(3), q in class_poly(3)) {
        let lhs = a_from_u(&alpha_poly(&star_product(&p, &q)));
        prop_assert_eq!(lhs, &a_from_u(&alpha_poly(&p)) * &a_from_u(&alpha_poly(&q)));
    }
}
