//! The quantization map `α_h` from classical data to `U(u(2)_h)` and `A`, and the star product.
//!
//! `α_h` on polynomials is the symmetrization map: a commutative monomial goes to the average
//! of all distinct orderings of its letters.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;

use crate::aext::{a_from_u, AElem, SkewExpr};
use crate::error::{Error, Result};
use crate::scalars::ratfun::fmt_combination;
use crate::scalars::{CenterFun, ClassFun, GaussRat, HRat, Var};
use crate::upbw::{Gen, UMono, UPoly};
use crate::whcalc::{deriv, DMono, Form, Wrt};

/// A commutative polynomial in `t, x, y, z` with coefficients rational in `ħ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ClassPoly {
    terms: BTreeMap<UMono, HRat>,
}

impl ClassPoly {
    pub fn zero() -> Self {
        ClassPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ClassPoly::constant(HRat::one())
    }

    pub fn constant(c: HRat) -> Self {
        ClassPoly::monomial(UMono::one(), c)
    }

    pub fn gen(g: Gen) -> Self {
        ClassPoly::monomial(UMono::gen(g), HRat::one())
    }

    pub fn monomial(m: UMono, c: HRat) -> Self {
        let mut p = ClassPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: UMono, c: HRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&UMono, &HRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(UMono::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &HRat) -> ClassPoly {
        let mut out = ClassPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    /// Coefficients at `ħ = 0`, or `None` if some coefficient has a pole there.
    pub fn at_h0(&self) -> Option<ClassPoly> {
        let mut out = ClassPoly::zero();
        for (m, c) in &self.terms {
            let v = c.get().subst(Var::Hbar, &crate::scalars::Poly::zero()).ok()?;
            out.add_term(*m, HRat::new(v).ok()?);
        }
        Some(out)
    }

    /// Classical partial derivative.
    pub fn partial(&self, u: Gen) -> ClassPoly {
        let mut out = ClassPoly::zero();
        for (m, c) in &self.terms {
            let e = m.0[u.idx()];
            if e > 0 {
                let mut d = *m;
                d.0[u.idx()] -= 1;
                out.add_term(d, c * &HRat::int(e as i64));
            }
        }
        out
    }
}

impl<'a> std::ops::Add<&'a ClassPoly> for &'a ClassPoly {
    type Output = ClassPoly;
    fn add(self, o: &ClassPoly) -> ClassPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a ClassPoly> for &'a ClassPoly {
    type Output = ClassPoly;
    fn sub(self, o: &ClassPoly) -> ClassPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a ClassPoly> for &'a ClassPoly {
    type Output = ClassPoly;
    fn mul(self, o: &ClassPoly) -> ClassPoly {
        let mut out = ClassPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = UMono([m1.0[0] + m2.0[0], m1.0[1] + m2.0[1], m1.0[2] + m2.0[2], m1.0[3] + m2.0[3]]);
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for ClassPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_combination(self.terms.iter().rev().map(|(m, c)| (m.to_string(), c.get()))))
    }
}

thread_local! {
    static SYM_CACHE: RefCell<HashMap<[u16; 3], UPoly>> = RefCell::new(HashMap::new());
}

/// Symmetrization of `x^a y^b z^c`: `S(m) = Σ_l (m_l/deg)·l·S(m − e_l)`.
fn symmetrize(m: [u16; 3]) -> UPoly {
    let deg: u16 = m.iter().sum();
    if deg <= 1 {
        return UPoly::monomial(UMono([0, m[0], m[1], m[2]]), HRat::one());
    }
    if let Some(hit) = SYM_CACHE.with(|c| c.borrow().get(&m).cloned()) {
        return hit;
    }
    let mut out = UPoly::zero();
    for k in 0..3 {
        if m[k] == 0 {
            continue;
        }
        let mut rest = m;
        rest[k] -= 1;
        let w = HRat::constant(GaussRat::from_frac(m[k] as i64, deg as i64));
        out = &out + &(&UPoly::gen(Gen::from_spatial(k)) * &symmetrize(rest)).scale(&w);
    }
    SYM_CACHE.with(|c| c.borrow_mut().insert(m, out.clone()));
    out
}

/// `α_h` on a commutative monomial.
pub fn alpha_mono(m: UMono) -> UPoly {
    let t = UPoly::monomial(UMono([m.0[0], 0, 0, 0]), HRat::one());
    &t * &symmetrize(m.spatial())
}

/// `α_h(p)` by symmetrization.
pub fn alpha_poly(p: &ClassPoly) -> UPoly {
    let mut out = UPoly::zero();
    for (m, c) in p.terms() {
        out = &out + &alpha_mono(*m).scale(c);
    }
    out
}

/// `α_h⁻¹` by peeling off leading PBW terms; `α_h(m) − m` has lower degree.
pub fn alpha_inverse(p: &UPoly) -> ClassPoly {
    let mut rest = p.clone();
    let mut out = ClassPoly::zero();
    loop {
        let Some((m, c)) = rest.terms().next_back().map(|(m, c)| (*m, c.clone())) else {
            break;
        };
        out.add_term(m, c.clone());
        rest = &rest - &alpha_mono(m).scale(&c);
    }
    out
}

/// `f ⋆ g = α⁻¹(α(f)·α(g))`.
pub fn star_product(f: &ClassPoly, g: &ClassPoly) -> ClassPoly {
    alpha_inverse(&(&alpha_poly(f) * &alpha_poly(g)))
}

/// The Lie–Poisson bracket `{f, g} = Σ ε_ijk ∂_i f ∂_j g x_k`.
pub fn poisson_bracket(f: &ClassPoly, g: &ClassPoly) -> ClassPoly {
    let mut out = ClassPoly::zero();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            let s = HRat::int(crate::whcalc::levi_civita(i, j, k));
            let term = &(&f.partial(Gen::from_spatial(i)) * &g.partial(Gen::from_spatial(j))) * &ClassPoly::gen(Gen::from_spatial(k));
            out = &out + &term.scale(&s);
        }
    }
    out
}

/// `f(t, r) ↦ f(t, ρ̂)`.
pub fn alpha_central(f: &ClassFun) -> CenterFun {
    f.get().clone()
}

/// Classical data in split form `Σ f_i(t, r)·p_i(t, x, y, z)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Classical {
    terms: Vec<(ClassFun, ClassPoly)>,
}

impl Classical {
    pub fn zero() -> Self {
        Classical { terms: Vec::new() }
    }

    pub fn poly(p: ClassPoly) -> Self {
        Classical::term(ClassFun(CenterFun::one()), p)
    }

    pub fn fun(f: ClassFun) -> Self {
        Classical::term(f, ClassPoly::one())
    }

    pub fn term(f: ClassFun, p: ClassPoly) -> Self {
        let mut c = Classical::zero();
        c.push(f, p);
        c
    }

    pub fn push(&mut self, f: ClassFun, p: ClassPoly) {
        if !f.get().is_zero() && !p.is_zero() {
            self.terms.push((f, p));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &(ClassFun, ClassPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Classical) -> Classical {
        let mut out = self.clone();
        for (f, p) in &o.terms {
            out.push(f.clone(), p.clone());
        }
        out
    }

    pub fn mul(&self, o: &Classical) -> Classical {
        let mut out = Classical::zero();
        for (f1, p1) in &self.terms {
            for (f2, p2) in &o.terms {
                out.push(ClassFun(f1.get() * f2.get()), p1 * p2);
            }
        }
        out
    }

    /// Classical partial derivative, with `∂_u f(r) = (f'(r)/r)·u`.
    pub fn partial(&self, u: Gen) -> Classical {
        let mut out = Classical::zero();
        for (f, p) in &self.terms {
            out.push(f.clone(), p.partial(u));
            match u.spatial() {
                None => out.push(f.d_dt(), p.clone()),
                Some(_) => {
                    let df = f.d_dr().get() / &CenterFun::rho();
                    out.push(ClassFun(df), p * &ClassPoly::gen(u));
                }
            }
        }
        out
    }
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(a, p)| format!("({a})*({p})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `α_h` on split-form data: `Σ α(f_i)·α(p_i)`.
pub fn alpha_classical(c: &Classical) -> AElem {
    let mut out = AElem::zero();
    for (f, p) in c.terms() {
        out = &out + &a_from_u(&alpha_poly(p)).scale(&alpha_central(f));
    }
    out
}

/// The right fraction `α_h(f)·α_h(g)⁻¹`.
pub fn alpha_fraction(f: &Classical, g: &Classical) -> Result<SkewExpr> {
    let den = alpha_classical(g);
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let num = SkewExpr::atom(alpha_classical(f));
    Ok(SkewExpr::prod(vec![num, SkewExpr::inverse(SkewExpr::atom(den))?]))
}

/// A classical coefficient `num·den⁻¹`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassFrac {
    pub num: Classical,
    pub den: Option<Classical>,
}

impl ClassFrac {
    pub fn new(num: Classical) -> Self {
        ClassFrac { num, den: None }
    }

    pub fn fraction(num: Classical, den: Classical) -> Self {
        ClassFrac { num, den: Some(den) }
    }

    fn quantize(&self) -> Result<SkewExpr> {
        match &self.den {
            None => Ok(SkewExpr::atom(alpha_classical(&self.num))),
            Some(d) => alpha_fraction(&self.num, d),
        }
    }
}

/// A classical differential operator `Σ c_i·∂^{m_i}`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ClassOp {
    pub terms: Vec<(ClassFrac, DMono)>,
}

/// A quantum differential operator `Σ c_i·∂^{m_i}` with skew-field coefficients.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct QuantumOp {
    pub terms: Vec<(SkewExpr, DMono)>,
}

impl ClassOp {
    pub fn partial(u: Gen) -> Self {
        ClassOp { terms: vec![(ClassFrac::new(Classical::poly(ClassPoly::one())), DMono::gen(u))] }
    }

    pub fn term(c: ClassFrac, d: DMono) -> Self {
        ClassOp { terms: vec![(c, d)] }
    }
}

/// Quantize coefficients and replace partial derivatives by quantum ones.
///
/// `α_h(P(f)) ≠ α_h(P)(α_h(f))` in general.
pub fn alpha_operator(p: &ClassOp) -> Result<QuantumOp> {
    let terms = p.terms.iter().map(|(c, d)| Ok((c.quantize()?, *d))).collect::<Result<_>>()?;
    Ok(QuantumOp { terms })
}

/// `∂^m a`, applying the quantum derivatives one at a time.
pub fn apply_derivs(m: &DMono, a: &AElem) -> AElem {
    let mut out = a.clone();
    for g in Gen::ALL {
        for _ in 0..m.0[g.idx()] {
            out = deriv(Wrt::from_gen(g), &out);
        }
    }
    out
}

impl QuantumOp {
    pub fn apply(&self, a: &AElem) -> SkewExpr {
        let parts = self.terms.iter().map(|(c, d)| SkewExpr::prod(vec![c.clone(), SkewExpr::atom(apply_derivs(d, a))])).collect();
        SkewExpr::sum(parts)
    }
}

/// A classical differential form `Σ ω_S ⊗ c_S` keyed by the bitmask of `{dt, dx, dy, dz}`.
pub type ClassForm = BTreeMap<u8, Classical>;

/// Classical de Rham operator.
pub fn classical_d(w: &ClassForm) -> ClassForm {
    let mut out = ClassForm::new();
    for (mask, c) in w {
        for g in Gen::ALL {
            let k = g.idx();
            if mask & (1 << k) != 0 {
                continue;
            }
            let above = (mask >> (k + 1)).count_ones();
            let mut dc = c.partial(g);
            if above % 2 == 1 {
                dc = dc.mul(&Classical::poly(ClassPoly::constant(HRat::int(-1))));
            }
            let slot = out.entry(mask | (1 << k)).or_default();
            *slot = slot.add(&dc);
        }
    }
    out
}

/// `α_h(ω ⊗ f) = ω ⊗ α_h(f)`.
pub fn alpha_form(w: &ClassForm) -> Form {
    let mut out = Form::zero();
    for (mask, c) in w {
        out.add_term(*mask, alpha_classical(c));
    }
    out
}

/// `ω = 1⊗x²`, for which `α_h(dω) ≠ d(α_h(ω))`: `∂_t(x²) = −h/2` has no classical counterpart.
pub fn non_commuting_form() -> ClassForm {
    let x = ClassPoly::gen(Gen::X);
    ClassForm::from([(0u8, Classical::poly(&x * &x))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::whcalc::d_op;

    fn xp() -> ClassPoly {
        ClassPoly::gen(Gen::X)
    }
    fn yp() -> ClassPoly {
        ClassPoly::gen(Gen::Y)
    }
    fn zp() -> ClassPoly {
        ClassPoly::gen(Gen::Z)
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_poly(&xp()), UPoly::gen(Gen::X));
        let half_h = HRat::new(CenterFun::i_hbar()).unwrap();
        let expect = &(&UPoly::gen(Gen::X) * &UPoly::gen(Gen::Y)) - &UPoly::gen(Gen::Z).scale(&half_h);
        assert_eq!(alpha_poly(&(&xp() * &yp())), expect);
        let sym = &(&UPoly::gen(Gen::X) * &UPoly::gen(Gen::Y)) + &(&UPoly::gen(Gen::Y) * &UPoly::gen(Gen::X));
        assert_eq!(alpha_poly(&(&xp() * &yp())), sym.scale(&HRat::constant(GaussRat::from_frac(1, 2))));
    }

    #[test]
    fn alpha_round_trip() {
        for a in 0..3u16 {
            for b in 0..3u16 {
                for c in 0..3u16 {
                    let m = UMono([1, a, b, c]);
                    assert_eq!(alpha_inverse(&alpha_mono(m)), ClassPoly::monomial(m, HRat::one()));
                }
            }
        }
    }

    #[test]
    fn star_commutator() {
        let c = &star_product(&xp(), &yp()) - &star_product(&yp(), &xp());
        assert_eq!(c, zp().scale(&HRat::h()));
        assert_eq!(star_product(&ClassPoly::one(), &(&xp() * &zp())), &xp() * &zp());
        let l = star_product(&star_product(&xp(), &yp()), &zp());
        let r = star_product(&xp(), &star_product(&yp(), &zp()));
        assert_eq!(l, r);
    }

    #[test]
    fn fractions() {
        let x = Classical::poly(xp());
        assert!(matches!(alpha_fraction(&x, &Classical::zero()), Err(Error::ZeroDenominator)));
        let r2 = Classical::fun(ClassFun(&CenterFun::rho() * &CenterFun::rho()));
        let e = alpha_fraction(&Classical::poly(zp()), &r2).unwrap();
        let rinv2 = (&CenterFun::rho() * &CenterFun::rho()).inv().unwrap();
        assert_eq!(e.as_aelem(), Some(AElem::z().scale(&rinv2)));
    }

    #[test]
    fn operators() {
        let dx = alpha_operator(&ClassOp::partial(Gen::X)).unwrap();
        let yz = &AElem::y() * &AElem::z();
        assert_eq!(dx.apply(&yz).as_aelem(), Some(deriv(Wrt::X, &yz)));
        let xdy = ClassOp::term(ClassFrac::new(Classical::poly(xp())), DMono::gen(Gen::Y));
        let q = alpha_operator(&xdy).unwrap();
        assert_eq!(q.apply(&AElem::y()).as_aelem(), Some(AElem::x()));
    }

    #[test]
    fn form_non_identity() {
        let w = non_commuting_form();
        let lhs = alpha_form(&classical_d(&w));
        let rhs = d_op(&alpha_form(&w));
        assert_ne!(lhs, rhs);
        let dx = ClassForm::from([(2u8, Classical::poly(ClassPoly::one()))]);
        assert_eq!(alpha_form(&dx), Form::new(&[Gen::X], AElem::one()));
    }
}
