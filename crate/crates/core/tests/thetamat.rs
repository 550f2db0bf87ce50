mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use common::Numeric;
use ncu_core::aext::AElem;
use ncu_core::algebra::Mat;
use ncu_core::reporacle::{check_identity, default_reps, Rep};
use ncu_core::sample;
use ncu_core::scalars::{CenterFun, GaussRat};
use ncu_core::thetamat::{
    a_matrix, central_inverse, commuting_inverse, deriv_extract, deriv_of_inverse, theta_det_commuting, theta_det_quaternionic, theta_gen,
    theta_hat, theta_hat_rho_power, theta_hat_rho_power_central, theta_invert, CentralMat, ThetaInverse, ThetaMat,
};
use ncu_core::upbw::Gen;
use ncu_core::whcalc::{deriv, Wrt};
use ncu_core::Error;

fn c(f: CenterFun) -> AElem {
    AElem::central(f)
}

fn ih() -> AElem {
    c(CenterFun::i_hbar())
}

fn rows(r: [[AElem; 4]; 4]) -> ThetaMat {
    Mat::from_rows(r.into_iter().map(|row| row.to_vec()).collect())
}

fn element(max_deg: u32) -> impl Strategy<Value = AElem> {
    any::<u64>().prop_map(move |s| sample::element(&mut sample::rng(s), max_deg))
}

fn integer_spin_reps() -> Vec<Rep> {
    default_reps().into_iter().filter(|r| r.dim() % 2 == 1).collect()
}

#[test]
fn generator_images_as_printed() {
    let (x, y, z) = (AElem::x(), AElem::y(), AElem::z());
    let (o, p, m) = (AElem::zero(), ih(), -&ih());
    let tx = rows([
        [x.clone(), m.clone(), o.clone(), o.clone()],
        [p.clone(), x.clone(), o.clone(), o.clone()],
        [o.clone(), o.clone(), x.clone(), m.clone()],
        [o.clone(), o.clone(), p.clone(), x],
    ]);
    let ty = rows([
        [y.clone(), o.clone(), m.clone(), o.clone()],
        [o.clone(), y.clone(), o.clone(), p.clone()],
        [p.clone(), o.clone(), y.clone(), o.clone()],
        [o.clone(), m.clone(), o.clone(), y],
    ]);
    let tz = rows([
        [z.clone(), o.clone(), o.clone(), m.clone()],
        [o.clone(), z.clone(), m.clone(), o.clone()],
        [o.clone(), p.clone(), z.clone(), o.clone()],
        [p, o.clone(), o, z],
    ]);
    assert_eq!(theta_hat(&AElem::x()), tx);
    assert_eq!(theta_hat(&AElem::y()), ty);
    assert_eq!(theta_hat(&AElem::z()), tz);
    assert_eq!(theta_gen(Gen::X), tx);
    assert_eq!(theta_hat(&AElem::one()), Mat::identity(4));
    let rho = theta_hat(&AElem::rho());
    let h2 = c(&CenterFun::hbar() * &CenterFun::hbar());
    let cas = &AElem::rho().pow(2) - &h2;
    assert_eq!(theta_hat(&cas), rho.mul(&rho).sub(&Mat::scalar(4, &h2)));
}

#[test]
fn derivatives_from_first_column() {
    let d = deriv_extract(&theta_hat(&AElem::x()));
    assert_eq!(d[1], AElem::one());
    assert_eq!(d[0], AElem::x().scale(&CenterFun::i_hbar().inv().unwrap()));
    let d = deriv_extract(&theta_hat(&AElem::rho()));
    assert_eq!(d[1], AElem::x().scale(&CenterFun::rho().inv().unwrap()));
}

#[test]
fn a_matrix_relation() {
    let a = a_matrix();
    let h2_r2 = c(&(&CenterFun::hbar() * &CenterFun::hbar()) - &(&CenterFun::rho() * &CenterFun::rho()));
    let two_ih = c(&CenterFun::int(2) * &CenterFun::i_hbar());
    assert_eq!(a.mul(&a), Mat::scalar(4, &h2_r2).sub(&a.lscale(&two_ih)));
}

#[test]
fn rho_powers() {
    assert_eq!(theta_hat_rho_power(0), Mat::identity(4));
    assert_eq!(theta_hat_rho_power(1), theta_hat(&AElem::rho()));
    for p in -3..=3 {
        for q in -3..=3 {
            assert_eq!(theta_hat_rho_power(p).mul(&theta_hat_rho_power(q)), theta_hat_rho_power(p + q), "p={p} q={q}");
        }
    }
}

#[test]
fn central_inverses() {
    let rho = theta_hat_rho_power_central(1);
    assert_eq!(central_inverse(&rho).unwrap(), theta_hat_rho_power_central(-1));
    assert_eq!(central_inverse(&CentralMat::identity()).unwrap(), CentralMat::identity());
    let zero = CentralMat { alpha: CenterFun::int(0), beta: CenterFun::int(0) };
    assert!(matches!(central_inverse(&zero), Err(Error::NonInvertibleCentral)));
}

#[test]
fn determinants() {
    let h2 = c(&CenterFun::hbar() * &CenterFun::hbar());
    for u in AElem::coords() {
        let expect = (&(&u * &u) - &h2).pow(2);
        assert_eq!(theta_det_commuting(&theta_hat(&u)).unwrap(), expect);
        assert_eq!(theta_det_quaternionic(&u), expect);
    }
    let t = c(CenterFun::t());
    let shifted = c(&CenterFun::t() + &CenterFun::i_hbar());
    assert_eq!(theta_det_commuting(&theta_hat(&t)).unwrap(), shifted.pow(4));
    assert!(matches!(theta_det_commuting(&theta_hat(&AElem::rho())), Err(Error::NonCommutingEntries)));
}

#[test]
fn commuting_inverse_is_numeric_inverse() {
    let reps = integer_spin_reps();
    for u in AElem::coords() {
        let m = theta_hat(&u);
        let inv = commuting_inverse(&m).unwrap();
        let prod = Numeric(|r: &Rep| Ok(r.eval_block(&m, |a| r.eval_a(a))? * r.eval_block(&inv, |e| r.eval_skew(e))?));
        let id: ThetaMat = Mat::identity(4);
        let report = check_identity(&prod, &id, &reps, 1e-10);
        assert!(report.pass, "{u}: {report}");
    }
}

#[test]
fn inversion_dispatch() {
    assert_eq!(theta_invert(&AElem::rho()).unwrap(), ThetaInverse::Central(theta_hat_rho_power_central(-1)));
    for u in AElem::coords() {
        assert!(matches!(theta_invert(&u), Ok(ThetaInverse::Commuting(_))));
    }
    assert!(theta_invert(&c(CenterFun::t())).is_ok());
    let open = &AElem::rho() - &AElem::x();
    assert!(matches!(theta_invert(&open), Err(Error::CannotInvert(_))));
    assert!(matches!(deriv_of_inverse(&open), Err(Error::CannotInvert(_))));
}

#[test]
fn inverse_derivatives_of_central_elements() {
    let r = CenterFun::rho();
    let h = CenterFun::hbar();
    let d = deriv_of_inverse(&AElem::rho()).unwrap().map(|e| e.as_aelem().unwrap());
    let rinv = c(r.inv().unwrap());
    // ∂_t = ∂̃_t − a/(iħ), which vanishes for ρ̂⁻¹.
    assert!((&d[0] - &rinv.scale(&CenterFun::i_hbar().inv().unwrap())).is_zero());
    let expect = AElem::x().scale(&(&r * &(&(&h * &h) - &(&r * &r))).inv().unwrap());
    assert_eq!(d[1], expect);

    let t = CenterFun::t();
    let d = deriv_of_inverse(&c(t.clone())).unwrap().map(|e| e.as_aelem().unwrap());
    assert!(d[1].is_zero() && d[2].is_zero() && d[3].is_zero());
    let expect = (&CenterFun::i_hbar() * &(&t + &CenterFun::i_hbar())).inv().unwrap();
    assert_eq!(d[0], c(expect));
}

#[test]
fn inverse_derivative_has_classical_limit() {
    let d = deriv_of_inverse(&AElem::x()).unwrap();
    for (x0, y0, z0) in [(0.7, 0.2, -0.4), (1.3, -0.5, 0.9), (-2.1, 0.3, 0.6)] {
        for hbar in [1e-3, 1e-5] {
            let hb = Complex64::new(hbar, 0.0);
            let xyz = [Complex64::new(x0, 0.0), Complex64::new(y0, 0.0), Complex64::new(z0, 0.0)];
            let rho = (xyz[0] * xyz[0] + xyz[1] * xyz[1] + xyz[2] * xyz[2] + hb * hb).sqrt();
            let center = [Complex64::new(0.5, 0.0), rho, hb, Complex64::new(1.0, 0.0)];
            let v = d[1].eval_commutative(xyz, &center).unwrap();
            let classical = -1.0 / (x0 * x0);
            assert!((v - classical).norm() < 10.0 * hbar, "x={x0} hbar={hbar}: {v} vs {classical}");
        }
    }
}

#[test]
fn linear_form_matrix() {
    let al: [GaussRat; 4] = [GaussRat::from_int(2), GaussRat::from_frac(-1, 3), GaussRat::gauss((0, 1), (1, 2)), GaussRat::from_int(5)];
    let k = |i: usize| CenterFun::constant(al[i].clone());
    let a = {
        let mut a = c(&k(0) * &CenterFun::t());
        for (i, u) in AElem::coords().into_iter().enumerate() {
            a = &a + &u.scale(&k(i + 1));
        }
        a
    };
    let m = theta_hat(&a);
    let ihs = |i: usize, s: i64| c(&(&CenterFun::i_hbar() * &k(i)) * &CenterFun::int(s));
    let diag = &a + &ihs(0, 1);
    let expect = rows([
        [diag.clone(), ihs(1, -1), ihs(2, -1), ihs(3, -1)],
        [ihs(1, 1), diag.clone(), ihs(3, -1), ihs(2, 1)],
        [ihs(2, 1), ihs(3, 1), diag.clone(), ihs(1, -1)],
        [ihs(3, 1), ihs(2, -1), ihs(1, 1), diag],
    ]);
    assert_eq!(m, expect);
    assert!(theta_det_commuting(&m).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn theta_is_multiplicative(a in element(3), b in element(3)) {
        prop_assert_eq!(theta_hat(&(&a * &b)), theta_hat(&a).mul(&theta_hat(&b)));
    }

    #[test]
    fn rho_image_commutes_with_generators(k in 0usize..3) {
        let r = theta_hat(&AElem::rho());
        let u = theta_hat(&AElem::coords()[k]);
        prop_assert_eq!(r.mul(&u), u.mul(&r));
    }

    #[test]
    fn first_column_matches_derivatives(a in element(3)) {
        let d = deriv_extract(&theta_hat(&a));
        for (k, w) in [Wrt::TTilde, Wrt::X, Wrt::Y, Wrt::Z].into_iter().enumerate() {
            prop_assert_eq!(&d[k], &deriv(w, &a));
        }
    }
}
