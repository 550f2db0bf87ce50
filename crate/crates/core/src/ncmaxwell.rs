//! Noncommutative vector calculus, the monopole difference equation, the NC Dirac monopole,
//! the telescoping radial pairing and the Dirac vector potentials.

use std::fmt;

use num_traits::{One, Zero};

use crate::aext::{AElem, SkewExpr};
use crate::error::{Error, Result};
use crate::quantmap::{alpha_fraction, ClassPoly, Classical};
use crate::scalars::{CenterFun, ClassFun, GaussRat, HRat, Poly, Var};
use crate::upbw::Gen;
use crate::whcalc::{deriv, Wrt};

/// A vector field `(H_x, H_y, H_z)` with components in `A`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VecField(pub [AElem; 3]);

impl VecField {
    pub fn zero() -> Self {
        VecField([AElem::zero(), AElem::zero(), AElem::zero()])
    }

    /// `f(ρ̂)·(x, y, z)`.
    pub fn radial(f: &CenterFun) -> Self {
        VecField(AElem::coords().map(|u| u.scale(f)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(AElem::is_zero)
    }

    /// Image under the cyclic automorphism `x → y → z → x`.
    pub fn rotate(&self) -> VecField {
        let [hx, hy, hz] = &self.0;
        VecField([rotate(hz), rotate(hx), rotate(hy)])
    }
}

impl fmt::Display for VecField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// The automorphism `x → y, y → z, z → x` of `A`; it fixes the center.
pub fn rotate(a: &AElem) -> AElem {
    let [x, y, z] = AElem::coords();
    let mut out = AElem::zero();
    for (m, c) in a.terms() {
        let [p, q, r] = m.0;
        let img = &(&y.pow(p as u32) * &z.pow(q as u32)) * &x.pow(r as u32);
        out = &out + &img.scale(c);
    }
    out
}

fn spatial(k: usize) -> Wrt {
    [Wrt::X, Wrt::Y, Wrt::Z][k]
}

/// `∂_x H_x + ∂_y H_y + ∂_z H_z` with quantum derivatives.
pub fn div(h: &VecField) -> AElem {
    (0..3).fold(AElem::zero(), |acc, k| &acc + &deriv(spatial(k), &h.0[k]))
}

/// The curl with quantum derivatives.
pub fn rot(h: &VecField) -> VecField {
    let c = |i: usize, j: usize| &deriv(spatial(i), &h.0[j]) - &deriv(spatial(j), &h.0[i]);
    VecField([c(1, 2), c(2, 0), c(0, 1)])
}

fn only_rho(f: &CenterFun) -> Result<()> {
    if f.involves(Var::T) {
        return Err(Error::Domain(format!("{f} depends on t; a function of rho is required")));
    }
    Ok(())
}

/// `(ρ̂+2ħ)ψ(ρ̂+ħ) − (ρ̂−2ħ)ψ(ρ̂−ħ)` with `ψ = ρ̂f`.
pub fn monopole_residual(f: &CenterFun) -> Result<CenterFun> {
    only_rho(f)?;
    let psi = f * &CenterFun::rho();
    let two_hb = &CenterFun::int(2) * &CenterFun::hbar();
    let l = &(&CenterFun::rho() + &two_hb) * &psi.shift_rho(1);
    let r = &(&CenterFun::rho() - &two_hb) * &psi.shift_rho(-1);
    Ok(&l - &r)
}

/// `g/(ρ̂(ρ̂² − ħ²))`.
pub fn monopole_profile(g: &CenterFun) -> CenterFun {
    let rho = CenterFun::rho();
    let hb = CenterFun::hbar();
    let den = &rho * &(&(&rho * &rho) - &(&hb * &hb));
    g * &den.inv().expect("nonzero denominator")
}

/// The NC Dirac monopole `g/(ρ̂(ρ̂² − ħ²))·(x, y, z)`.
pub fn monopole(g: &CenterFun) -> VecField {
    VecField::radial(&monopole_profile(g))
}

/// An endpoint of a radial integral.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    Value(GaussRat),
    Zero,
    Infinity,
}

fn irregular(msg: String) -> Error {
    Error::IrregularTestFunction(msg)
}

fn eval_endpoint(phi: &CenterFun, e: &Endpoint) -> Result<CenterFun> {
    let at = |v: GaussRat| phi.subst(Var::Rho, &Poly::constant(v.clone())).map_err(|_| irregular(format!("{phi} has a pole at rho = {v}")));
    match e {
        Endpoint::Value(v) => at(v.clone()),
        Endpoint::Zero => at(GaussRat::zero()),
        Endpoint::Infinity => limit_at_infinity(phi),
    }
}

/// `lim_{ρ̂→∞} φ`, failing when it diverges.
pub fn limit_at_infinity(phi: &CenterFun) -> Result<CenterFun> {
    let bal = phi.degree_balance(Var::Rho);
    if bal > 0 {
        return Err(irregular(format!("{phi} diverges as rho -> infinity")));
    }
    if bal < 0 {
        return Ok(CenterFun::zero());
    }
    let lead = |p: &Poly| {
        let d = p.degree_in(Var::Rho);
        p.coeffs_in(Var::Rho).into_iter().nth(d as usize).unwrap_or_else(Poly::zero)
    };
    CenterFun::new(lead(phi.numer()), lead(phi.denom()))
}

/// `∫_a^b ∂_ρ̂(φ) dρ̂ = φ(b) − φ(a)`.
pub fn radial_pairing(phi: &CenterFun, a: &Endpoint, b: &Endpoint) -> Result<CenterFun> {
    only_rho(phi)?;
    Ok(&eval_endpoint(phi, b)? - &eval_endpoint(phi, a)?)
}

/// The pairing of the radial field `f(ρ̂)·(x, y, z)` with a radial test function `φ`,
/// returned as the coefficient `c` of `c·π`.
///
/// The integrand `Σ H_k (x_k/ρ̂)∂_ρ̂φ` against `ρ̂² dρ̂ dΩ` reduces to `4π·w·∂_ρ̂φ dρ̂` with
/// `w = Cas·f·ρ̂`, which must be constant for the integral to telescope; the result is
/// `4w·(φ(∞) − φ(0))`.
pub fn distributional_pairing(f: &CenterFun, phi: &CenterFun) -> Result<CenterFun> {
    only_rho(f)?;
    only_rho(phi)?;
    let rho = CenterFun::rho();
    let hb = CenterFun::hbar();
    let cas = &(&rho * &rho) - &(&hb * &hb);
    let w = &(&cas * f) * &rho;
    if w.involves(Var::Rho) {
        return Err(Error::Domain(format!("radial density {w} is not constant")));
    }
    let at_inf = limit_at_infinity(phi)?;
    if !at_inf.is_zero() {
        return Err(irregular(format!("{phi} tends to {at_inf} as rho -> infinity")));
    }
    let total = radial_pairing(phi, &Endpoint::Zero, &Endpoint::Infinity)?;
    Ok(&(&CenterFun::int(4) * &w) * &total)
}

/// `α_h` of the Dirac potential `(g/r)·((x,y,z)×n)/(r − (x,y,z)·n)` for a unit vector `n`,
/// as right fractions `α(g·((x,y,z)×n)_i)·α(r(r − n·(x,y,z)))⁻¹`.
pub fn vector_potential(n: [GaussRat; 3], g: &CenterFun) -> Result<[SkewExpr; 3]> {
    let norm = n.iter().fold(GaussRat::zero(), |acc, c| &acc + &(c * c));
    if !norm.is_one() {
        return Err(Error::NonUnitVector);
    }
    let gfun = ClassFun::new(g.clone())?;
    let coord = |k: usize| ClassPoly::gen(Gen::from_spatial(k));
    let hr = |c: &GaussRat| HRat::constant(c.clone());
    let mut ndotx = ClassPoly::zero();
    for k in 0..3 {
        ndotx = &ndotx + &coord(k).scale(&hr(&n[k]));
    }
    let mut den = Classical::fun(ClassFun(&CenterFun::rho() * &CenterFun::rho()));
    den.push(ClassFun::r(), ndotx.scale(&HRat::int(-1)));
    let cross = |i: usize| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        &coord(j).scale(&hr(&n[k])) - &coord(k).scale(&hr(&n[j]))
    };
    let comp = |i: usize| alpha_fraction(&Classical::term(gfun.clone(), cross(i)), &den);
    Ok([comp(0)?, comp(1)?, comp(2)?])
}

/// The classical Dirac potential at a point.
pub fn classical_potential(n: [f64; 3], g: f64, p: [f64; 3]) -> [f64; 3] {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let nd = n[0] * p[0] + n[1] * p[1] + n[2] * p[2];
    let c = [p[1] * n[2] - p[2] * n[1], p[2] * n[0] - p[0] * n[2], p[0] * n[1] - p[1] * n[0]];
    c.map(|ci| g / r * ci / (r - nd))
}

/// A polynomial field `(H_x, H_y, H_z)` from commutative polynomials via `α_h`.
pub fn field_from_polys(p: [&ClassPoly; 3]) -> VecField {
    VecField(p.map(|q| crate::aext::a_from_u(&crate::quantmap::alpha_poly(q))))
}
