//! Reduced rational functions in the central symbols.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::poly::{gcd, Mono, Poly, Var, NVARS};
use crate::error::{Error, Result};

/// An element of `K(t, ρ̂)` over `ℚ(i)(ħ, g)`.
///
/// The fraction is always reduced and its denominator is monic in the graded-lex order,
/// so `==` decides equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CenterFun {
    num: Poly,
    den: Poly,
}

impl Default for CenterFun {
    fn default() -> Self {
        CenterFun::zero()
    }
}

impl CenterFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return CenterFun::zero();
        }
        if den.is_one() {
            return CenterFun { num, den };
        }
        let g = gcd(&num, &den);
        let (num, den) =
            if g.is_one() { (num, den) } else { (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides")) };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: Poly, den: Poly) -> Self {
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            CenterFun { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            CenterFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        CenterFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: GaussRat) -> Self {
        CenterFun::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        CenterFun::constant(GaussRat::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        CenterFun::constant(GaussRat::from_frac(n, d))
    }

    pub fn i() -> Self {
        CenterFun::constant(GaussRat::i())
    }

    pub fn var(v: Var) -> Self {
        CenterFun::from_poly(Poly::var(v))
    }

    pub fn t() -> Self {
        CenterFun::var(Var::T)
    }

    pub fn rho() -> Self {
        CenterFun::var(Var::Rho)
    }

    pub fn hbar() -> Self {
        CenterFun::var(Var::Hbar)
    }

    pub fn g() -> Self {
        CenterFun::var(Var::G)
    }

    /// The deformation parameter `h = 2iħ`.
    pub fn h() -> Self {
        CenterFun::from_poly(Poly::monomial(Mono::var(Var::Hbar, 1), GaussRat::gauss((0, 1), (2, 1))))
    }

    /// `iħ = h/2`.
    pub fn i_hbar() -> Self {
        CenterFun::from_poly(Poly::monomial(Mono::var(Var::Hbar, 1), GaussRat::i()))
    }

    /// `2/h = 1/(iħ)`, the counit of the shifted time derivative.
    pub fn two_over_h() -> Self {
        CenterFun::i_hbar().inv().expect("iħ is nonzero")
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn involves(&self, v: Var) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &CenterFun) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return CenterFun::zero();
        }
        CenterFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        if p.is_zero() || self.is_zero() {
            return CenterFun::zero();
        }
        if let Some(c) = p.as_constant() {
            return self.scale(&c);
        }
        if self.den.is_one() {
            return CenterFun { num: &self.num * p, den: Poly::one() };
        }
        let g = gcd(p, &self.den);
        if g.is_one() {
            CenterFun { num: &self.num * p, den: self.den.clone() }
        } else {
            let p = p.div_exact(&g).expect("gcd");
            let d = self.den.div_exact(&g).expect("gcd");
            Self::normalize_lc(&self.num * &p, d)
        }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.powi(-e);
        }
        Ok(CenterFun { num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
    }

    /// Substitute a polynomial for one of the symbols.
    pub fn subst(&self, v: Var, by: &Poly) -> Result<Self> {
        if !self.involves(v) {
            return Ok(self.clone());
        }
        let den = self.den.subst(v, by);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.num.subst(v, by), den))
    }

    /// `f(ρ̂) ↦ f(ρ̂ + kħ)`.
    pub fn shift_rho(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        let by = &Poly::var(Var::Rho) + &Poly::var(Var::Hbar).scale(&GaussRat::from_int(k));
        self.subst(Var::Rho, &by).expect("a shift of a nonzero polynomial is nonzero")
    }

    /// `f(t) ↦ f(t + iħ)`, the image of `t` under the Θ̂ map.
    pub fn shift_t(&self) -> Self {
        if !self.involves(Var::T) {
            return self.clone();
        }
        let by = &Poly::var(Var::T) + &Poly::var(Var::Hbar).scale(&GaussRat::i());
        self.subst(Var::T, &by).expect("a shift of a nonzero polynomial is nonzero")
    }

    /// Central difference `(f(ρ̂+ħ) − f(ρ̂−ħ)) / 2ħ`.
    pub fn drho(&self) -> Self {
        if !self.involves(Var::Rho) {
            return CenterFun::zero();
        }
        let diff = &self.shift_rho(1) - &self.shift_rho(-1);
        diff.checked_div(&(&CenterFun::int(2) * &CenterFun::hbar())).expect("ħ is nonzero")
    }

    /// Set `ħ = 0`; the `ρ̂` slot is then read as the classical radius `r`.
    pub fn limit_h0(&self) -> Result<ClassFun> {
        if !self.involves(Var::Hbar) {
            return Ok(ClassFun(self.clone()));
        }
        let zero = Poly::zero();
        let den = self.den.subst(Var::Hbar, &zero);
        if den.is_zero() {
            return Err(Error::PoleAtZero);
        }
        Ok(ClassFun(Self::reduce(self.num.subst(Var::Hbar, &zero), den)))
    }

    /// Specialize `ħ` to a Gaussian-rational value.
    pub fn specialize_hbar(&self, value: &GaussRat) -> Result<Self> {
        self.subst(Var::Hbar, &Poly::constant(value.clone()))
    }

    /// Formal partial derivative in one symbol.
    pub fn partial(&self, v: Var) -> Self {
        if !self.involves(v) {
            return CenterFun::zero();
        }
        let n = &(&self.num.partial(v) * &self.den) - &(&self.num * &self.den.partial(v));
        Self::reduce(n, &self.den * &self.den)
    }

    pub fn eval_complex(&self, point: &[Complex64; NVARS]) -> Option<Complex64> {
        let d = self.den.eval_complex(point);
        if d.norm() < 1e-300 {
            return None;
        }
        Some(self.num.eval_complex(point) / d)
    }

    pub fn fmt_with(&self, names: &[&str; NVARS]) -> String {
        let n = self.num.fmt_with(names);
        if self.den.is_one() {
            return n;
        }
        let wrap = |p: &Poly, s: String| {
            if p.num_terms() == 1
                && (p
                    .leading()
                    .map(|(m, c)| m.degree() == 0 || (c.is_one() && m.0.iter().filter(|&&e| e > 0).count() == 1))
                    .unwrap_or(true))
            {
                s
            } else {
                format!("({s})")
            }
        };
        let d = self.den.fmt_with(names);
        let num_s = if self.num.num_terms() == 1 && !n.contains('/') { n } else { format!("({n})") };
        format!("{}/{}", num_s, wrap(&self.den, d))
    }

    /// Rewrite with `h = 2iħ` as the displayed symbol (the `ħ` slot then holds `h`).
    fn in_h(&self) -> CenterFun {
        let by = Poly::var(Var::Hbar).scale(&GaussRat::gauss((0, 1), (-1, 2)));
        self.subst(Var::Hbar, &by).expect("nonzero")
    }

    /// Renders in `ħ`, or in `h = 2iħ` when that removes imaginary coefficients.
    pub fn pretty(&self) -> String {
        let a = self.fmt_with(&["t", "rho", "hbar", "g"]);
        if !self.involves(Var::Hbar) {
            return a;
        }
        let b = self.in_h();
        if b.imaginary_terms() < self.imaginary_terms() {
            b.fmt_with(&["t", "rho", "h", "g"])
        } else {
            a
        }
    }

    fn imaginary_terms(&self) -> usize {
        self.num.terms().chain(self.den.terms()).filter(|(_, c)| !c.is_real()).count()
    }

    /// Whether the value needs parentheses when used as a product factor.
    pub fn is_atomic_display(&self) -> bool {
        let s = self.pretty();
        !(s.contains(" + ") || s.contains(" - ") || s.contains('/')) || (self.num.num_terms() == 1 && self.den.is_one())
    }

    /// Degree of `num` minus degree of `den` in `v`.
    pub fn degree_balance(&self, v: Var) -> i32 {
        self.num.degree_in(v) as i32 - self.den.degree_in(v) as i32
    }
}

impl Zero for CenterFun {
    fn zero() -> Self {
        CenterFun { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for CenterFun {
    fn one() -> Self {
        CenterFun { num: Poly::one(), den: Poly::one() }
    }
}

impl<'a> Add<&'a CenterFun> for &'a CenterFun {
    type Output = CenterFun;
    fn add(self, o: &CenterFun) -> CenterFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return CenterFun { num: &self.num + &o.num, den: Poly::one() };
        }
        if self.den == o.den {
            return CenterFun::reduce(&self.num + &o.num, self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let (a_mult, b_mult) = if g.is_one() {
            (o.den.clone(), self.den.clone())
        } else {
            (o.den.div_exact(&g).expect("gcd"), self.den.div_exact(&g).expect("gcd"))
        };
        let num = &(&self.num * &a_mult) + &(&o.num * &b_mult);
        let den = &self.den * &a_mult;
        CenterFun::reduce(num, den)
    }
}

impl<'a> Sub<&'a CenterFun> for &'a CenterFun {
    type Output = CenterFun;
    fn sub(self, o: &CenterFun) -> CenterFun {
        self + &(-o)
    }
}

impl<'a> Mul<&'a CenterFun> for &'a CenterFun {
    type Output = CenterFun;
    fn mul(self, o: &CenterFun) -> CenterFun {
        if self.is_zero() || o.is_zero() {
            return CenterFun::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return CenterFun { num: &self.num * &o.num, den: Poly::one() };
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd");
        let d = o.den.div_exact(&g1).expect("gcd");
        let c = o.num.div_exact(&g2).expect("gcd");
        let b = self.den.div_exact(&g2).expect("gcd");
        CenterFun::normalize_lc(&a * &c, &b * &d)
    }
}

impl<'a> Div<&'a CenterFun> for &'a CenterFun {
    type Output = CenterFun;
    /// Panics on division by zero; use [`CenterFun::checked_div`] for a `Result`.
    fn div(self, o: &CenterFun) -> CenterFun {
        self.checked_div(o).expect("division by the zero CenterFun")
    }
}

impl Neg for &CenterFun {
    type Output = CenterFun;
    fn neg(self) -> CenterFun {
        CenterFun { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CenterFun> for CenterFun {
            type Output = CenterFun;
            fn $m(self, o: CenterFun) -> CenterFun {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for CenterFun {
    type Output = CenterFun;
    fn neg(self) -> CenterFun {
        -&self
    }
}

impl fmt::Display for CenterFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

/// Sign and body of the term `f·mono`; `mono` is empty for the unit monomial.
pub fn term_parts(f: &CenterFun, mono: &str) -> (bool, String) {
    if let Some(c) = f.as_constant() {
        return super::poly::term_body(&c, mono);
    }
    let s = f.pretty();
    let multi = s.contains(" + ") || s.contains(" - ");
    let (neg, s) = match s.strip_prefix('-') {
        Some(r) if !multi => (true, r.to_string()),
        _ => (false, s),
    };
    let s = if multi && !mono.is_empty() { format!("({s})") } else { s };
    if mono.is_empty() {
        (neg, s)
    } else {
        (neg, format!("{s}*{mono}"))
    }
}

/// Renders `Σ f_k·mono_k` in the given order.
pub fn fmt_combination<'a>(terms: impl IntoIterator<Item = (String, &'a CenterFun)>) -> String {
    let mut out = String::new();
    for (k, (mono, f)) in terms.into_iter().enumerate() {
        let (neg, body) = term_parts(f, &mono);
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// A rational function of `ħ` (and the charge symbol `g`) only.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct HRat(CenterFun);

impl HRat {
    pub fn new(f: CenterFun) -> Result<Self> {
        if f.involves(Var::T) || f.involves(Var::Rho) {
            return Err(Error::Domain(format!("{f} depends on t or rho")));
        }
        Ok(HRat(f))
    }

    pub fn zero() -> Self {
        HRat(CenterFun::zero())
    }

    pub fn one() -> Self {
        HRat(CenterFun::one())
    }

    pub fn h() -> Self {
        HRat(CenterFun::h())
    }

    pub fn int(n: i64) -> Self {
        HRat(CenterFun::int(n))
    }

    pub fn constant(c: GaussRat) -> Self {
        HRat(CenterFun::constant(c))
    }

    pub fn get(&self) -> &CenterFun {
        &self.0
    }

    pub fn into_inner(self) -> CenterFun {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl<'a> Add<&'a HRat> for &'a HRat {
    type Output = HRat;
    fn add(self, o: &HRat) -> HRat {
        HRat(&self.0 + &o.0)
    }
}

impl<'a> Sub<&'a HRat> for &'a HRat {
    type Output = HRat;
    fn sub(self, o: &HRat) -> HRat {
        HRat(&self.0 - &o.0)
    }
}

impl<'a> Mul<&'a HRat> for &'a HRat {
    type Output = HRat;
    fn mul(self, o: &HRat) -> HRat {
        HRat(&self.0 * &o.0)
    }
}

impl Neg for &HRat {
    type Output = HRat;
    fn neg(self) -> HRat {
        HRat(-&self.0)
    }
}

impl fmt::Display for HRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A classical function of `(t, r)`: the image of a [`CenterFun`] at `ħ = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ClassFun(pub CenterFun);

impl ClassFun {
    pub fn new(f: CenterFun) -> Result<Self> {
        if f.involves(Var::Hbar) {
            return Err(Error::Domain(format!("classical function {f} depends on hbar")));
        }
        Ok(ClassFun(f))
    }

    pub fn r() -> Self {
        ClassFun(CenterFun::rho())
    }

    pub fn get(&self) -> &CenterFun {
        &self.0
    }

    /// Classical derivative in `r`.
    pub fn d_dr(&self) -> ClassFun {
        ClassFun(self.0.partial(Var::Rho))
    }

    pub fn d_dt(&self) -> ClassFun {
        ClassFun(self.0.partial(Var::T))
    }
}

impl fmt::Display for ClassFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.fmt_with(&["t", "r", "hbar", "g"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho() -> CenterFun {
        CenterFun::rho()
    }
    fn hb() -> CenterFun {
        CenterFun::hbar()
    }

    #[test]
    fn factorization_division() {
        let a = &(&rho() * &rho()) - &(&hb() * &hb());
        let b = &rho() - &hb();
        assert_eq!(a.checked_div(&b).unwrap(), &rho() + &hb());
    }

    #[test]
    fn like_terms() {
        let r = rho().inv().unwrap();
        assert_eq!(&r + &r, &CenterFun::int(2) / &rho());
    }

    #[test]
    fn division_by_zero_errors() {
        assert_eq!(rho().checked_div(&CenterFun::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn shifts() {
        let sq = &rho() * &rho();
        let expect = &(&sq + &(&CenterFun::int(2) * &(&hb() * &rho()))) + &(&hb() * &hb());
        assert_eq!(sq.shift_rho(1), expect);
        assert_eq!(rho().inv().unwrap().shift_rho(-1), (&rho() - &hb()).inv().unwrap());
        assert_eq!(sq.shift_rho(0), sq);
    }

    #[test]
    fn central_difference() {
        assert_eq!(rho().drho(), CenterFun::one());
        let expect = (&(&hb() * &hb()) - &(&rho() * &rho())).inv().unwrap();
        assert_eq!(rho().inv().unwrap().drho(), expect);
        // ((ρ+ħ)² − (ρ−ħ)²)/(2ħ) by direct substitution.
        let sq = &rho() * &rho();
        let oracle = (&sq.shift_rho(1) - &sq.shift_rho(-1)).checked_div(&(&CenterFun::int(2) * &hb())).unwrap();
        assert_eq!(oracle, &CenterFun::int(2) * &rho());
        assert_eq!(sq.drho(), oracle);
    }

    #[test]
    fn classical_limit() {
        let a = &(&rho() * &rho()) - &(&hb() * &hb());
        assert_eq!(a.limit_h0().unwrap(), ClassFun(&rho() * &rho()));
        let prof = (&rho() * &a).inv().unwrap();
        assert_eq!(prof.limit_h0().unwrap(), ClassFun(rho().powi(-3).unwrap()));
        let two_over_h = &CenterFun::int(2) / &CenterFun::h();
        assert_eq!(two_over_h.limit_h0(), Err(Error::PoleAtZero));
    }

    #[test]
    fn pretty_prefers_h() {
        assert_eq!((&CenterFun::h() / &CenterFun::int(2)).pretty(), "h/2");
        let a = &(&hb() * &hb()) - &(&rho() * &rho());
        assert_eq!(a.pretty(), "-rho^2 + hbar^2");
    }
}
