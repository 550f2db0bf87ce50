//! Sparse commutative polynomials over `ℚ(i)` in the central symbols `t`, `ρ̂`, `ħ`, `g`.
//!
//! Terms are kept in a graded-lexicographic order with `ρ̂ > t > ħ > g`; the largest
//! key is the leading term. GCDs use a recursive subresultant remainder sequence.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussRat;

pub const NVARS: usize = 4;

/// The commuting symbols of the centre.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T = 0,
    Rho = 1,
    Hbar = 2,
    G = 3,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Rho, Var::T, Var::Hbar, Var::G];

    pub fn idx(self) -> usize {
        self as usize
    }
}

/// Exponent vector indexed by [`Var::idx`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; NVARS])
    }

    pub fn var(v: Var, e: u16) -> Self {
        let mut m = [0; NVARS];
        m[v.idx()] = e;
        Mono(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.idx()]
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Mono(m)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Mono) -> Mono {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(o.0.iter()) {
            *a -= *b;
        }
        Mono(m)
    }

    fn key(&self) -> (u32, u16, u16, u16, u16) {
        (self.degree(), self.0[Var::Rho.idx()], self.0[Var::T.idx()], self.0[Var::Hbar.idx()], self.0[Var::G.idx()])
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, GaussRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut p = Poly::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Mono::var(v, 1), GaussRat::one())
    }

    pub fn monomial(m: Mono, c: GaussRat) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, GaussRat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::one()).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.is_constant() {
            return self.terms.get(&Mono::one()).cloned();
        }
        None
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Mono, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Lowest exponent of `v` across the terms.
    pub fn low_degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let n = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); n + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut rest = *m;
            rest.0[v.idx()] = 0;
            out[e].add_term(rest, c.clone());
        }
        out
    }

    fn lc_in(&self, v: Var) -> Poly {
        let n = self.degree_in(v);
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == n {
                let mut rest = *m;
                rest.0[v.idx()] = 0;
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if d.is_one() {
            return Some(self.clone());
        }
        let (lm_d, lc_d) = d.leading().map(|(m, c)| (*m, c.clone()))?;
        let lc_inv = lc_d.inv()?;
        if d.is_monomial() {
            let mut q = Poly::zero();
            for (m, c) in &self.terms {
                if !lm_d.divides(m) {
                    return None;
                }
                q.add_term(m.div(&lm_d), c * &lc_inv);
            }
            return Some(q);
        }
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((lm_r, lc_r)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            if !lm_d.divides(&lm_r) {
                return None;
            }
            let tm = lm_r.div(&lm_d);
            let tc = &lc_r * &lc_inv;
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&tm), -(c * &tc));
            }
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Substitute the polynomial `by` for the symbol `v`.
    pub fn subst(&self, v: Var, by: &Poly) -> Poly {
        if !self.involves(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        // Horner in `by`.
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * by) + c;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64; NVARS]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[k].powu(e as u32);
                }
            }
            s += t;
        }
        s
    }

    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut r = *m;
            r.0[v.idx()] -= 1;
            out.add_term(r, c * &GaussRat::from_int(e as i64));
        }
        out
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&GaussRat) -> GaussRat) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part(&self, v: Var) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Render with the given symbol names, leading term first.
    pub fn fmt_with(&self, names: &[&str; NVARS]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = mono_str(m, names);
            let (neg, body) = term_body(c, &mono);
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body)
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body)
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body)
                }
            }
        }
        out
    }
}

/// Sign and body of `c·mono`, written as `n*i*mono/d` for atomic coefficients.
pub(crate) fn term_body(c: &GaussRat, mono: &str) -> (bool, String) {
    if !c.is_atomic() {
        let s = c.to_string();
        return if mono.is_empty() { (false, s) } else { (false, format!("{s}*{mono}")) };
    }
    let (r, imag) = if c.im.is_zero() { (c.re.clone(), false) } else { (c.im.clone(), true) };
    let neg = r.is_negative();
    let r = r.abs();
    let mut parts: Vec<String> = Vec::new();
    if !r.numer().is_one() || (!imag && mono.is_empty()) {
        parts.push(r.numer().to_string());
    }
    if imag {
        parts.push("i".to_string());
    }
    if !mono.is_empty() {
        parts.push(mono.to_string());
    }
    let mut body = parts.join("*");
    if !r.denom().is_one() {
        body = format!("{}/{}", body, r.denom());
    }
    (neg, body)
}

fn mono_str(m: &Mono, names: &[&str; NVARS]) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        let e = m.exp(v);
        match e {
            0 => {}
            1 => parts.push(names[v.idx()].to_string()),
            _ => parts.push(format!("{}^{}", names[v.idx()], e)),
        }
    }
    parts.join("*")
}

pub const DEFAULT_NAMES: [&str; NVARS] = ["t", "rho", "hbar", "g"];

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&DEFAULT_NAMES))
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        for (m, c) in &small.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c);
        }
        r
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return o.clone();
        }
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

/// Monic greatest common divisor (`gcd(0, 0) = 0`).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.is_monomial() || b.is_monomial() {
        return monomial_gcd(a, b);
    }
    // Pull out the common monomial factor first; it is cheap and frequent.
    let mf = monomial_gcd(a, b);
    if !mf.is_one() {
        let a = a.div_exact(&mf).expect("monomial factor");
        let b = b.div_exact(&mf).expect("monomial factor");
        return (&mf * &gcd(&a, &b)).monic();
    }
    let v = Var::ALL
        .into_iter()
        .find(|&v| a.involves(v) && b.involves(v))
        .or_else(|| Var::ALL.into_iter().find(|&v| a.involves(v) || b.involves(v)))
        .expect("non-constant operands");
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
        return c;
    }
    if gcd_degree_bound(&pa, &pb, v) == 0 {
        return c;
    }
    let g = subresultant_gcd(pa, pb, v);
    (&c * &g).monic()
}

fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut e = [u16::MAX; NVARS];
    for m in a.terms.keys().chain(b.terms.keys()) {
        for (k, x) in e.iter_mut().enumerate() {
            *x = (*x).min(m.0[k]);
        }
    }
    Poly::monomial(Mono(e), GaussRat::one())
}

/// Pseudo-remainder `lc(g)^(deg f − deg g + 1)·f mod g` in `v`.
fn prem(f: &Poly, g: &Poly, v: Var) -> Poly {
    let n = g.degree_in(v);
    let lc = g.lc_in(v);
    let mut steps = i64::from(f.degree_in(v)) - i64::from(n) + 1;
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= n {
        let d = r.degree_in(v);
        let lr = r.lc_in(v).mul_mono(&Mono::var(v, d - n));
        r = &(&r * &lc) - &(&lr * g);
        steps -= 1;
    }
    if steps > 0 {
        r = &r * &lc.pow(steps as u32);
    }
    r
}

/// Substitute small integers for every symbol except `v`.
fn specialize_except(p: &Poly, v: Var, attempt: i64) -> Poly {
    let mut out = p.clone();
    for (k, w) in Var::ALL.into_iter().enumerate() {
        if w != v {
            let value = GaussRat::from_int(3 + 4 * k as i64 + 7 * attempt);
            out = out.subst(w, &Poly::constant(value));
        }
    }
    out
}

/// An upper bound on `deg_v gcd(a, b)` from a univariate gcd at a point where neither
/// leading coefficient vanishes.
fn gcd_degree_bound(a: &Poly, b: &Poly, v: Var) -> u16 {
    let bound = a.degree_in(v).min(b.degree_in(v));
    for attempt in 0..3 {
        let (sa, sb) = (specialize_except(a, v, attempt), specialize_except(b, v, attempt));
        if sa.degree_in(v) != a.degree_in(v) || sb.degree_in(v) != b.degree_in(v) {
            continue;
        }
        let (mut f, mut g) = if sa.degree_in(v) >= sb.degree_in(v) { (sa, sb) } else { (sb, sa) };
        while !g.is_zero() {
            let r = prem(&f, &g, v).monic();
            f = g;
            g = r;
        }
        return f.degree_in(v);
    }
    bound
}

/// Subresultant remainder sequence for polynomials primitive in `v`.
fn subresultant_gcd(a: Poly, b: Poly, v: Var) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    let mut lc_prev = Poly::one();
    let mut h = Poly::one();
    loop {
        let d = f.degree_in(v) - g.degree_in(v);
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return g.primitive_part(v).monic();
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        let scale = &lc_prev * &h.pow(d as u32);
        f = g;
        g = r.div_exact(&scale).expect("subresultant division is exact");
        lc_prev = f.lc_in(v);
        h = match d {
            0 => h,
            1 => lc_prev.clone(),
            _ => lc_prev.pow(d as u32).div_exact(&h.pow(d as u32 - 1)).expect("subresultant division is exact"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho() -> Poly {
        Poly::var(Var::Rho)
    }
    fn hb() -> Poly {
        Poly::var(Var::Hbar)
    }
    fn t() -> Poly {
        Poly::var(Var::T)
    }
    fn c(n: i64) -> Poly {
        Poly::constant(GaussRat::from_int(n))
    }

    #[test]
    fn gcd_of_products() {
        let p = &(&rho() - &hb()) * &(&rho() + &t());
        let q = &(&rho() - &hb()) * &(&(&rho() * &rho()) + &c(1));
        let g = gcd(&p, &q);
        assert_eq!(g, &rho() - &hb());
    }

    #[test]
    fn gcd_trivariate_common_factor() {
        let common = &(&rho() - &(&hb() * &t())) + &c(1);
        let p = &common * &(&(&(&rho() * &rho()) * &t()) + &hb());
        let q = &common * &(&(&t() * &(&hb() * &hb())) - &(&rho() * &c(3)));
        assert_eq!(gcd(&p, &q), common.monic());
        let r = &(&(&rho() * &t()) * &(&hb() * &hb())) - &(&t() * &hb());
        assert!(gcd(&p, &(&r + &c(2))).is_one());
    }

    #[test]
    fn gcd_coprime_and_monomial() {
        let p = &rho() + &hb();
        let q = &rho() - &hb();
        assert!(gcd(&p, &q).is_one());
        let m = &rho() * &(&rho() * &hb());
        let r = &(&rho() * &hb()) + &(&rho() * &t());
        assert_eq!(gcd(&m, &r), rho());
    }

    #[test]
    fn exact_division() {
        let a = &(&rho() * &rho()) - &(&hb() * &hb());
        let q = a.div_exact(&(&rho() - &hb())).unwrap();
        assert_eq!(q, &rho() + &hb());
        assert!(a.div_exact(&(&rho() + &t())).is_none());
    }

    #[test]
    fn substitution() {
        let sq = &rho() * &rho();
        let shifted = sq.subst(Var::Rho, &(&rho() + &hb()));
        let expect = &(&sq + &(&c(2) * &(&rho() * &hb()))) + &(&hb() * &hb());
        assert_eq!(shifted, expect);
    }

    #[test]
    fn display_order() {
        let p = &(&rho() * &rho()) - &(&hb() * &hb());
        assert_eq!(p.to_string(), "rho^2 - hbar^2");
    }
}
