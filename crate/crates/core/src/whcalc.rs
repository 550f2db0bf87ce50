//! The quantum Weyl–Heisenberg algebra over `A`: derivative polynomials, the permutation
//! map `σ`, the counit, coproducts, derivative evaluators and the de Rham operator.
//!
//! Derivative polynomials store `∂_t`; the shifted derivative is `∂̃_t = ∂_t + 2/h`.
//! Permutation relations for spatial `u, v`:
//! `∂_v u − u∂_v = (h/2)(δ_uv ∂̃_t + ε_vuw ∂_w)` and `∂̃_t u − u∂̃_t = −(h/2)∂_u`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::One;

use crate::aext::{AElem, AMono};
use crate::scalars::{CenterFun, HRat, Var};
use crate::thetamat::{deriv_extract, theta_central, theta_hat};
use crate::upbw::{mono_string, Gen};

/// Exponents of `∂_t^a ∂_x^b ∂_y^c ∂_z^d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DMono(pub [u16; 4]);

impl DMono {
    pub fn one() -> Self {
        DMono([0; 4])
    }

    pub fn gen(g: Gen) -> Self {
        let mut e = [0; 4];
        e[g.idx()] = 1;
        DMono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &DMono) -> DMono {
        DMono([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }

    fn key(&self) -> (u32, [u16; 4]) {
        (self.degree(), self.0)
    }
}

impl PartialOrd for DMono {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for DMono {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key().cmp(&o.key())
    }
}

impl fmt::Display for DMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = mono_string(&self.0, &["∂_t", "∂_x", "∂_y", "∂_z"]);
        f.write_str(if s.is_empty() { "1" } else { &s })
    }
}

fn half_h() -> HRat {
    HRat::new(CenterFun::i_hbar()).expect("iħ is an HRat")
}

fn two_over_h() -> HRat {
    HRat::new(CenterFun::two_over_h()).expect("2/h is an HRat")
}

/// A polynomial in the commuting derivatives with coefficients rational in `ħ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DPoly {
    terms: BTreeMap<DMono, HRat>,
}

impl DPoly {
    pub fn zero() -> Self {
        DPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        DPoly::constant(HRat::one())
    }

    pub fn constant(c: HRat) -> Self {
        DPoly::monomial(DMono::one(), c)
    }

    pub fn monomial(m: DMono, c: HRat) -> Self {
        let mut p = DPoly::zero();
        p.add_term(m, c);
        p
    }

    /// `∂_g`; for `g = t` this is the unshifted time derivative.
    pub fn gen(g: Gen) -> Self {
        DPoly::monomial(DMono::gen(g), HRat::one())
    }

    /// `∂̃_t = ∂_t + 2/h`.
    pub fn shifted_t() -> Self {
        &DPoly::gen(Gen::T) + &DPoly::constant(two_over_h())
    }

    /// The column generators `E = (∂̃_t, ∂_x, ∂_y, ∂_z)`.
    pub fn e(k: usize) -> Self {
        if k == 0 {
            DPoly::shifted_t()
        } else {
            DPoly::gen(Gen::ALL[k])
        }
    }

    pub fn add_term(&mut self, m: DMono, c: HRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DMono, &HRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &HRat) -> DPoly {
        let mut out = DPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> DPoly {
        (0..e).fold(DPoly::one(), |acc, _| &acc * self)
    }

    /// The counit: the constant term.
    pub fn counit(&self) -> HRat {
        self.terms.get(&DMono::one()).cloned().unwrap_or_default()
    }

    /// `[D, u]` for a spatial letter `u`, a derivation of the commutative algebra `D`.
    pub fn bracket_letter(&self, u: usize) -> DPoly {
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            for k in 0..4 {
                let e = m.0[k];
                if e == 0 {
                    continue;
                }
                let mut rest = *m;
                rest.0[k] -= 1;
                let factor = DPoly::monomial(rest, c * &HRat::int(e as i64));
                out = &out + &(&factor * &gen_bracket(k, u));
            }
        }
        out
    }
}

/// `[∂_k, u]` for `k ∈ {t, x, y, z}` (as indices 0..4) and a spatial letter `u`.
fn gen_bracket(k: usize, u: usize) -> DPoly {
    let hh = half_h();
    if k == 0 {
        // [∂_t, u] = [∂̃_t, u] = −(h/2)∂_u
        return DPoly::gen(Gen::from_spatial(u)).scale(&-&hh);
    }
    let v = k - 1;
    if v == u {
        return DPoly::shifted_t().scale(&hh);
    }
    let w = 3 - u - v;
    let sign = levi_civita(v, u, w);
    DPoly::gen(Gen::from_spatial(w)).scale(&(&hh * &HRat::int(sign)))
}

pub(crate) fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

impl<'a> std::ops::Add<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn add(self, o: &DPoly) -> DPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn sub(self, o: &DPoly) -> DPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn mul(self, o: &DPoly) -> DPoly {
        let mut out = DPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, &CenterFun)> =
            self.terms.iter().rev().map(|(m, c)| (if m.degree() == 0 { String::new() } else { m.to_string() }, c.get())).collect();
        f.write_str(&crate::scalars::ratfun::fmt_combination(terms))
    }
}

/// Normal-ordered element `Σ a_k ⊗ D_k` of the Weyl–Heisenberg algebra.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WHElem {
    terms: BTreeMap<DMono, AElem>,
}

impl WHElem {
    pub fn zero() -> Self {
        WHElem { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, d: DMono, a: AElem) {
        if a.is_zero() {
            return;
        }
        let e = self.terms.entry(d).or_default();
        *e = &*e + &a;
        if e.is_zero() {
            self.terms.remove(&d);
        }
    }

    /// `a ⊗ D`.
    pub fn tensor(a: &AElem, d: &DPoly) -> WHElem {
        let mut out = WHElem::zero();
        for (m, c) in d.terms() {
            out.add_term(*m, a.scale(c.get()));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DMono, &AElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &WHElem) -> WHElem {
        let mut out = self.clone();
        for (d, a) in &o.terms {
            out.add_term(*d, a.clone());
        }
        out
    }

    /// `b · self`.
    pub fn left_mul(&self, b: &AElem) -> WHElem {
        let mut out = WHElem::zero();
        for (d, a) in &self.terms {
            out.add_term(*d, b * a);
        }
        out
    }

    /// `self · D` (derivatives commute among themselves).
    pub fn right_mul(&self, p: &DPoly) -> WHElem {
        let mut out = WHElem::zero();
        for (d, a) in &self.terms {
            for (m, c) in p.terms() {
                out.add_term(d.mul(m), a.scale(c.get()));
            }
        }
        out
    }

    /// Apply the counit to the derivative factors.
    pub fn counit(&self) -> AElem {
        self.terms.get(&DMono::one()).cloned().unwrap_or_default()
    }
}

impl fmt::Display for WHElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(d, a)| format!("({a})⊗{d}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

thread_local! {
    static PUSH_CACHE: RefCell<HashMap<(DMono, AMono), Rc<WHElem>>> = RefCell::new(HashMap::new());
}

/// `D · m` in normal order for a derivative monomial and a basis monomial of `A`.
fn push_mono(d: DMono, m: AMono) -> Rc<WHElem> {
    if d.degree() == 0 || m.degree() == 0 {
        let mut w = WHElem::zero();
        w.add_term(d, AElem::monomial(m, CenterFun::one()));
        return Rc::new(w);
    }
    if let Some(hit) = PUSH_CACHE.with(|c| c.borrow().get(&(d, m)).cloned()) {
        return hit;
    }
    // m = l·w with l the first letter: D·l·w = l·(D·w) + [D, l]·w.
    let l = (0..3).find(|&k| m.0[k] > 0).expect("nonconstant monomial");
    let mut rest = m;
    rest.0[l] -= 1;
    let letter = AElem::monomial(AMono::spatial(l), CenterFun::one());
    let mut out = push_mono(d, rest).left_mul(&letter);
    let br = DPoly::monomial(d, HRat::one()).bracket_letter(l);
    for (dm, c) in br.terms() {
        for (dd, a) in push_mono(*dm, rest).terms() {
            out.add_term(*dd, a.scale(c.get()));
        }
    }
    let out = Rc::new(out);
    PUSH_CACHE.with(|c| c.borrow_mut().insert((d, m), out.clone()));
    out
}

/// Rewrite a derivative polynomial in the column generators `E`, as `(exponents, coeff)`.
fn to_e_basis(d: &DPoly) -> Vec<([u16; 4], HRat)> {
    // ∂_t = E₀ − 2/h
    let shift = -&two_over_h();
    let mut acc: BTreeMap<[u16; 4], HRat> = BTreeMap::new();
    for (m, c) in d.terms() {
        let a = m.0[0] as u64;
        for k in 0..=a {
            let binom = num_integer::binomial(a, k) as i64;
            let pw = shift.get().powi((a - k) as i32).expect("nonnegative power");
            let coeff = c * &HRat::new(&pw * &CenterFun::int(binom)).expect("hbar only");
            let e = [k as u16, m.0[1], m.0[2], m.0[3]];
            let slot = acc.entry(e).or_default();
            *slot = &*slot + &coeff;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `E^β · f` in normal order for a central `f`.
fn push_e_mono(beta: [u16; 4], f: &CenterFun) -> WHElem {
    let deg: u16 = beta.iter().sum();
    if deg == 0 {
        return WHElem::tensor(&AElem::central(f.clone()), &DPoly::one());
    }
    let k = (0..4).find(|&k| beta[k] > 0).expect("nonzero exponent");
    if deg == 1 {
        // E_k f = Σ_j Θ̂(f)_{kj} E_j
        let th = theta_central(f);
        let mut out = WHElem::zero();
        for j in 0..4 {
            out = out.add(&WHElem::tensor(&th.entry(k, j), &DPoly::e(j)));
        }
        return out;
    }
    let mut rest = beta;
    rest[k] -= 1;
    let inner = push_e_mono(rest, f);
    let ek = DPoly::e(k);
    let mut out = WHElem::zero();
    for (d, b) in inner.terms() {
        let pushed = sigma_push(&ek, b);
        out = out.add(&pushed.right_mul(&DPoly::monomial(*d, HRat::one())));
    }
    out
}

/// `D · f` in normal order for a central `f`.
fn push_central(d: &DPoly, f: &CenterFun) -> WHElem {
    if f.as_constant().is_some() {
        return WHElem::tensor(&AElem::central(f.clone()), d);
    }
    let mut out = WHElem::zero();
    for (e, c) in to_e_basis(d) {
        let w = push_e_mono(e, f);
        for (dm, a) in w.terms() {
            out.add_term(*dm, a.scale(c.get()));
        }
    }
    out
}

/// `σ(D ⊗ a)`: the normal-ordered form of `D·a`.
pub fn sigma_push(d: &DPoly, a: &AElem) -> WHElem {
    let mut out = WHElem::zero();
    for (m, f) in a.terms() {
        for (dm, c) in d.terms() {
            // D·(m·f) = (D·m)·f
            let w = push_mono(*dm, *m);
            for (d2, b) in w.terms() {
                let pushed = push_central(&DPoly::monomial(*d2, c.clone()), f);
                out = out.add(&pushed.left_mul(b));
            }
        }
    }
    out
}

/// The counit on `D`.
pub fn counit(d: &DPoly) -> HRat {
    d.counit()
}

/// Which derivative to apply; `TTilde` is the shifted time derivative.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Wrt {
    T,
    TTilde,
    X,
    Y,
    Z,
}

impl Wrt {
    pub const UNSHIFTED: [Wrt; 4] = [Wrt::T, Wrt::X, Wrt::Y, Wrt::Z];

    pub fn gen(self) -> Gen {
        match self {
            Wrt::T | Wrt::TTilde => Gen::T,
            Wrt::X => Gen::X,
            Wrt::Y => Gen::Y,
            Wrt::Z => Gen::Z,
        }
    }

    pub fn from_gen(g: Gen) -> Wrt {
        [Wrt::T, Wrt::X, Wrt::Y, Wrt::Z][g.idx()]
    }

    pub fn parse(s: &str) -> Option<Wrt> {
        match s {
            "t" => Some(Wrt::T),
            "ttilde" => Some(Wrt::TTilde),
            "x" => Some(Wrt::X),
            "y" => Some(Wrt::Y),
            "z" => Some(Wrt::Z),
            _ => None,
        }
    }
}

fn shift_result(u: Wrt, a: &AElem, unshifted: AElem) -> AElem {
    if u == Wrt::TTilde {
        &unshifted + &a.scale(&CenterFun::two_over_h())
    } else {
        unshifted
    }
}

/// Quantum partial derivative by permutation and counit.
pub fn deriv(u: Wrt, a: &AElem) -> AElem {
    let d = DPoly::gen(u.gen());
    shift_result(u, a, sigma_push(&d, a).counit())
}

/// Quantum derivative of a central element:
/// `∂_u f = (u/ρ̂)(f₊ − f₋)/2ħ`, `∂̃_t f = (f₊(ρ̂+ħ) + f₋(ρ̂−ħ))/(2iħρ̂)` with `f± = f(t+iħ, ρ̂±ħ)`.
pub fn deriv_central(u: Wrt, f: &CenterFun) -> AElem {
    if f.as_constant().is_some() {
        return if u == Wrt::TTilde { AElem::central(f * &CenterFun::two_over_h()) } else { AElem::zero() };
    }
    let st = f.shift_t();
    let (fp, fm) = if f.involves(Var::Rho) { (st.shift_rho(1), st.shift_rho(-1)) } else { (st.clone(), st) };
    let rho = CenterFun::rho();
    let hb = CenterFun::hbar();
    match u {
        Wrt::X | Wrt::Y | Wrt::Z => {
            if !f.involves(Var::Rho) {
                return AElem::zero();
            }
            let k = u.gen().spatial().expect("spatial");
            let c = (&fp - &fm).checked_div(&(&(&CenterFun::int(2) * &hb) * &rho)).expect("nonzero");
            AElem::monomial(AMono::spatial(k), c)
        }
        Wrt::TTilde | Wrt::T => {
            let num = &(&fp * &(&rho + &hb)) + &(&fm * &(&rho - &hb));
            let den = &(&CenterFun::int(2) * &CenterFun::i_hbar()) * &rho;
            let tt = num.checked_div(&den).expect("nonzero");
            if u == Wrt::TTilde {
                AElem::central(tt)
            } else {
                AElem::central(&tt - &(f * &CenterFun::two_over_h()))
            }
        }
    }
}

/// One term `c · D₁ ⊗ D₂` of a coproduct, with `None` standing for the unit.
pub type CoTerm = (HRat, Option<Gen>, Option<Gen>);

/// `Δ(∂_u)` in the additive-multiplicative form.
pub fn coprod(u: Gen) -> Vec<CoTerm> {
    let hh = half_h();
    let mut out: Vec<CoTerm> = vec![(HRat::one(), Some(u), None), (HRat::one(), None, Some(u))];
    match u.spatial() {
        None => {
            out.push((hh.clone(), Some(Gen::T), Some(Gen::T)));
            for g in Gen::SPATIAL {
                out.push((-&hh, Some(g), Some(g)));
            }
        }
        Some(k) => {
            out.push((hh.clone(), Some(Gen::T), Some(u)));
            out.push((hh.clone(), Some(u), Some(Gen::T)));
            let (a, b) = ((k + 1) % 3, (k + 2) % 3);
            out.push((hh.clone(), Some(Gen::from_spatial(a)), Some(Gen::from_spatial(b))));
            out.push((-&hh, Some(Gen::from_spatial(b)), Some(Gen::from_spatial(a))));
        }
    }
    out
}

/// A tensor in `D ⊗ D`.
pub type DTensor = BTreeMap<(DMono, DMono), HRat>;

fn tensor_add(t: &mut DTensor, k: (DMono, DMono), c: HRat) {
    let e = t.entry(k).or_default();
    *e = &*e + &c;
    if e.is_zero() {
        t.remove(&k);
    }
}

fn gen_mono(g: Option<Gen>) -> DMono {
    g.map(DMono::gen).unwrap_or_default()
}

/// `Δ(∂_u)` as a tensor in `D ⊗ D`.
pub fn coprod_tensor(u: Gen) -> DTensor {
    let mut t = DTensor::new();
    for (c, a, b) in coprod(u) {
        tensor_add(&mut t, (gen_mono(a), gen_mono(b)), c);
    }
    t
}

/// `Δ(D)` for any derivative polynomial, extended multiplicatively.
pub fn coprod_poly(d: &DPoly) -> DTensor {
    let mut out = DTensor::new();
    for (m, c) in d.terms() {
        let mut acc = DTensor::new();
        acc.insert((DMono::one(), DMono::one()), c.clone());
        for g in Gen::ALL {
            for _ in 0..m.0[g.idx()] {
                let mut next = DTensor::new();
                for ((a1, b1), c1) in &acc {
                    for ((a2, b2), c2) in coprod_tensor(g) {
                        tensor_add(&mut next, (a1.mul(&a2), b1.mul(&b2)), c1 * &c2);
                    }
                }
                acc = next;
            }
        }
        for (k, v) in acc {
            tensor_add(&mut out, k, v);
        }
    }
    out
}

/// `Δ(E_k)` in the multiplicative form `(h/2) Σ ± E_i ⊗ E_j`, written in the stored basis.
pub fn coprod_shifted(k: usize) -> DTensor {
    let hh = half_h();
    let mut pairs: Vec<(i64, usize, usize)> = Vec::new();
    if k == 0 {
        pairs.push((1, 0, 0));
        for j in 1..4 {
            pairs.push((-1, j, j));
        }
    } else {
        pairs.push((1, 0, k));
        pairs.push((1, k, 0));
        let (a, b) = (k % 3 + 1, (k + 1) % 3 + 1);
        pairs.push((1, a, b));
        pairs.push((-1, b, a));
    }
    let mut out = DTensor::new();
    for (s, i, j) in pairs {
        let c = &hh * &HRat::int(s);
        for (m1, c1) in DPoly::e(i).terms() {
            for (m2, c2) in DPoly::e(j).terms() {
                tensor_add(&mut out, (*m1, *m2), &(&c * c1) * c2);
            }
        }
    }
    out
}

/// `(ε ⊗ id)` or `(id ⊗ ε)` applied to a tensor.
pub fn counit_left(t: &DTensor) -> DPoly {
    let mut out = DPoly::zero();
    for ((a, b), c) in t {
        if a.degree() == 0 {
            out.add_term(*b, c.clone());
        }
    }
    out
}

pub fn counit_right(t: &DTensor) -> DPoly {
    let mut out = DPoly::zero();
    for ((a, b), c) in t {
        if b.degree() == 0 {
            out.add_term(*a, c.clone());
        }
    }
    out
}

/// A tensor in `D ⊗ D ⊗ D`.
pub type DTensor3 = BTreeMap<(DMono, DMono, DMono), HRat>;

fn tensor3_add(t: &mut DTensor3, k: (DMono, DMono, DMono), c: HRat) {
    let e = t.entry(k).or_default();
    *e = &*e + &c;
    if e.is_zero() {
        t.remove(&k);
    }
}

/// `(Δ ⊗ id)Δ(∂_u)`.
pub fn coassoc_left(u: Gen) -> DTensor3 {
    let mut out = DTensor3::new();
    for ((a, b), c) in coprod_tensor(u) {
        for ((a1, a2), c1) in coprod_poly(&DPoly::monomial(a, HRat::one())) {
            tensor3_add(&mut out, (a1, a2, b), &c * &c1);
        }
    }
    out
}

/// `(id ⊗ Δ)Δ(∂_u)`.
pub fn coassoc_right(u: Gen) -> DTensor3 {
    let mut out = DTensor3::new();
    for ((a, b), c) in coprod_tensor(u) {
        for ((b1, b2), c1) in coprod_poly(&DPoly::monomial(b, HRat::one())) {
            tensor3_add(&mut out, (a, b1, b2), &c * &c1);
        }
    }
    out
}

/// The operator matrix `Θ`: row `i`, column `j` holds `±E_k` following the pattern of `Θ̂`.
pub fn theta_operator() -> [[DPoly; 4]; 4] {
    let mut out: [[DPoly; 4]; 4] = Default::default();
    for k in 0..4 {
        let p = crate::thetamat::q_pattern(k);
        for i in 0..4 {
            for j in 0..4 {
                if p[i][j] != 0 {
                    out[i][j] = DPoly::e(k).scale(&HRat::int(p[i][j] as i64));
                }
            }
        }
    }
    out
}

/// `Δ(Θ) − (h/2)·Θ ⊗̇ Θ`, entrywise; zero when the coproduct is compatible with `Θ`.
pub fn theta_coprod_defect() -> Vec<DTensor> {
    let th = theta_operator();
    let hh = half_h();
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let mut t = coprod_poly(&th[i][j]);
            for k in 0..4 {
                for (m1, c1) in th[i][k].terms() {
                    for (m2, c2) in th[k][j].terms() {
                        tensor_add(&mut t, (*m1, *m2), -&(&(&hh * c1) * c2));
                    }
                }
            }
            out.push(t);
        }
    }
    out
}

thread_local! {
    static COPROD_CACHE: RefCell<HashMap<AMono, Rc<[AElem; 4]>>> = RefCell::new(HashMap::new());
}

fn apply_opt(d: Option<Gen>, a: &AElem, derivs: &[AElem; 4]) -> AElem {
    match d {
        None => a.clone(),
        Some(g) => derivs[g.idx()].clone(),
    }
}

/// `(∂_t, ∂_x, ∂_y, ∂_z)` of a basis monomial by the coproduct rule, peeling one letter at a time.
fn coprod_derivs_mono(m: AMono) -> Rc<[AElem; 4]> {
    if m.degree() == 0 {
        return Rc::new([AElem::zero(), AElem::zero(), AElem::zero(), AElem::zero()]);
    }
    if let Some(hit) = COPROD_CACHE.with(|c| c.borrow().get(&m).cloned()) {
        return hit;
    }
    let l = (0..3).find(|&k| m.0[k] > 0).expect("nonconstant");
    let mut rest = m;
    rest.0[l] -= 1;
    let letter = AElem::monomial(AMono::spatial(l), CenterFun::one());
    let mut ld = [AElem::zero(), AElem::zero(), AElem::zero(), AElem::zero()];
    ld[l + 1] = AElem::one();
    let rest_a = AElem::monomial(rest, CenterFun::one());
    let rd = coprod_derivs_mono(rest);
    let out = Gen::ALL.map(|u| {
        let mut acc = AElem::zero();
        for (c, d1, d2) in coprod(u) {
            let left = apply_opt(d1, &letter, &ld);
            if left.is_zero() {
                continue;
            }
            let right = apply_opt(d2, &rest_a, &rd);
            acc = &acc + &(&left * &right).scale(c.get());
        }
        acc
    });
    let out = Rc::new(out);
    COPROD_CACHE.with(|c| c.borrow_mut().insert(m, out.clone()));
    out
}

/// `(∂_t, ∂_x, ∂_y, ∂_z)` of `a` by the coproduct rule: each term `m·f` splits as `m ⊗ f`.
pub fn coprod_derivs(a: &AElem) -> [AElem; 4] {
    let mut out = [AElem::zero(), AElem::zero(), AElem::zero(), AElem::zero()];
    for (m, f) in a.terms() {
        let ma = AElem::monomial(*m, CenterFun::one());
        let md = coprod_derivs_mono(*m);
        let fa = AElem::central(f.clone());
        let fd = Wrt::UNSHIFTED.map(|w| deriv_central(w, f));
        for u in Gen::ALL {
            for (c, d1, d2) in coprod(u) {
                let left = apply_opt(d1, &ma, &md);
                if left.is_zero() {
                    continue;
                }
                let right = apply_opt(d2, &fa, &fd);
                out[u.idx()] = &out[u.idx()] + &(&left * &right).scale(c.get());
            }
        }
    }
    out
}

/// `∂_u(ab)` from `Δ(∂_u)` and the derivatives of `a` and `b`.
pub fn deriv_via_coprod(u: Wrt, a: &AElem, b: &AElem) -> AElem {
    let (da, db) = (coprod_derivs(a), coprod_derivs(b));
    let mut acc = AElem::zero();
    for (c, d1, d2) in coprod(u.gen()) {
        let left = apply_opt(d1, a, &da);
        if left.is_zero() {
            continue;
        }
        acc = &acc + &(&left * &apply_opt(d2, b, &db)).scale(c.get());
    }
    shift_result(u, &(a * b), acc)
}

/// `∂_u a` by the coproduct evaluator.
pub fn deriv_coprod(u: Wrt, a: &AElem) -> AElem {
    let d = coprod_derivs(a);
    shift_result(u, a, d[u.gen().idx()].clone())
}

/// `∂_u a` read from the first column of `Θ̂(a)`.
pub fn deriv_theta(u: Wrt, a: &AElem) -> AElem {
    let col = deriv_extract(&theta_hat(a));
    match u {
        Wrt::TTilde => col[0].clone(),
        Wrt::T => &col[0] - &a.scale(&CenterFun::two_over_h()),
        _ => col[u.gen().idx()].clone(),
    }
}

/// `u ∘ v` from the fundamental-module product table.
pub fn circ(u: Gen, v: Gen) -> AElem {
    let half = CenterFun::frac(1, 2);
    match (u.spatial(), v.spatial()) {
        (None, _) => AElem::gen(v).scale(&half),
        (_, None) => AElem::gen(u).scale(&half),
        (Some(a), Some(b)) if a == b => AElem::gen(Gen::T).scale(&-&half),
        (Some(a), Some(b)) => {
            let c = 3 - a - b;
            AElem::gen(Gen::from_spatial(c)).scale(&half.scale(&crate::scalars::GaussRat::from_int(levi_civita(a, b, c))))
        }
    }
}

/// `∂_u` of an element linear in the generators (classical action on generators).
fn deriv_linear(u: Gen, a: &AElem) -> AElem {
    let c = match u.spatial() {
        None => a.coeff(&AMono::one()).partial(Var::T),
        Some(k) => a.coeff(&AMono::spatial(k)),
    };
    AElem::central(c)
}

/// `∂_u(ab) = ∂_u(a)b + a∂_u(b) + h∂_u(a∘b)` for generators `a, b`.
pub fn h_leibniz(u: Gen, a: Gen, b: Gen) -> AElem {
    let (ea, eb) = (AElem::gen(a), AElem::gen(b));
    let da = deriv_linear(u, &ea);
    let db = deriv_linear(u, &eb);
    let dc = deriv_linear(u, &circ(a, b)).scale(&CenterFun::h());
    &(&(&da * &eb) + &(&ea * &db)) + &dc
}

/// A differential form `Σ ω_S ⊗ a_S`, keyed by the bitmask `S ⊂ {dt, dx, dy, dz}`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Form {
    terms: BTreeMap<u8, AElem>,
}

impl Form {
    pub fn zero() -> Self {
        Form { terms: BTreeMap::new() }
    }

    /// `du₁∧…∧du_k ⊗ a` with the differentials given in any order.
    pub fn new(diffs: &[Gen], a: AElem) -> Self {
        let mut f = Form::zero();
        let mut mask = 0u8;
        let mut sign = 1i64;
        for g in diffs {
            match wedge_sign(mask, g.idx()) {
                None => return Form::zero(),
                Some(s) => {
                    sign *= s;
                    mask |= 1 << g.idx();
                }
            }
        }
        f.add_term(mask, a.scale(&CenterFun::int(sign)));
        f
    }

    pub fn add_term(&mut self, mask: u8, a: AElem) {
        if a.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_default();
        *e = &*e + &a;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut out = self.clone();
        for (m, a) in &o.terms {
            out.add_term(*m, a.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u8, &AElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.count_ones())
    }
}

/// Sign of `ω_S ∧ du_k` relative to the sorted basis monomial, or `None` if `k ∈ S`.
fn wedge_sign(mask: u8, k: usize) -> Option<i64> {
    if mask & (1 << k) != 0 {
        return None;
    }
    let above = (mask >> (k + 1)).count_ones();
    Some(if above % 2 == 0 { 1 } else { -1 })
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = ["dt", "dx", "dy", "dz"];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, a)| {
                let w: Vec<&str> = (0..4).filter(|k| m & (1 << k) != 0).map(|k| names[k]).collect();
                let w = if w.is_empty() { "1".to_string() } else { w.join("∧") };
                format!("{w}⊗({a})")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `d(ω ⊗ a) = Σ_u ω∧du ⊗ ∂_u(a)`.
pub fn d_op(w: &Form) -> Form {
    let mut out = Form::zero();
    for (mask, a) in w.terms() {
        for g in Gen::ALL {
            if let Some(s) = wedge_sign(*mask, g.idx()) {
                let da = deriv(Wrt::from_gen(g), a);
                out.add_term(mask | (1 << g.idx()), da.scale(&CenterFun::int(s)));
            }
        }
    }
    out
}

/// All five derivatives `(∂_t, ∂̃_t, ∂_x, ∂_y, ∂_z)` from one evaluator.
pub type DerivSet = [AElem; 5];

pub const ALL_WRT: [Wrt; 5] = [Wrt::T, Wrt::TTilde, Wrt::X, Wrt::Y, Wrt::Z];

fn with_shifted(a: &AElem, d: [AElem; 4]) -> DerivSet {
    let [dt, dx, dy, dz] = d;
    let tt = &dt + &a.scale(&CenterFun::two_over_h());
    [dt, tt, dx, dy, dz]
}

/// Derivatives by permutation and counit.
pub fn derivs_sigma(a: &AElem) -> DerivSet {
    with_shifted(a, Wrt::UNSHIFTED.map(|u| deriv(u, a)))
}

/// Derivatives by the coproduct rule.
pub fn derivs_coprod(a: &AElem) -> DerivSet {
    with_shifted(a, coprod_derivs(a))
}

/// Derivatives from the first column of `Θ̂(a)`.
pub fn derivs_theta(a: &AElem) -> DerivSet {
    let [tt, dx, dy, dz] = deriv_extract(&theta_hat(a));
    let dt = &tt - &a.scale(&CenterFun::two_over_h());
    [dt, tt, dx, dy, dz]
}

/// Check that all three evaluators agree on `a`, returning the first mismatch as
/// `(direction, σ value, coproduct value, Θ̂ value)`.
pub fn evaluators_agree(a: &AElem) -> Option<(Wrt, AElem, AElem, AElem)> {
    let (s, c, t) = (derivs_sigma(a), derivs_coprod(a), derivs_theta(a));
    for k in 0..5 {
        if s[k] != c[k] || s[k] != t[k] {
            return Some((ALL_WRT[k], s[k].clone(), c[k].clone(), t[k].clone()));
        }
    }
    None
}
