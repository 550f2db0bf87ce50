//! The enveloping algebra `U(u(2)_h)` in PBW normal form.
//!
//! Relations: `[x,y] = hz`, `[y,z] = hx`, `[z,x] = hy`, `t` central, with `h = 2iħ`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::algebra::{Mat, Ring};
use crate::scalars::ratfun::fmt_combination;
use crate::scalars::{CenterFun, GaussRat, HRat, Mono, Poly, Var};

/// A generator of `U(u(2)_h)`, ordered `t < x < y < z`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    T,
    X,
    Y,
    Z,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::T, Gen::X, Gen::Y, Gen::Z];
    pub const SPATIAL: [Gen; 3] = [Gen::X, Gen::Y, Gen::Z];

    pub fn idx(self) -> usize {
        self as usize
    }

    /// Index among `x, y, z`; `None` for `t`.
    pub fn spatial(self) -> Option<usize> {
        match self {
            Gen::T => None,
            g => Some(g as usize - 1),
        }
    }

    pub fn from_spatial(k: usize) -> Gen {
        Gen::SPATIAL[k]
    }

    pub fn name(self) -> &'static str {
        ["t", "x", "y", "z"][self.idx()]
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `h` as a polynomial in `ħ`.
pub(crate) fn h_poly() -> Poly {
    Poly::monomial(Mono::var(Var::Hbar, 1), GaussRat::gauss((0, 1), (2, 1)))
}

/// Exponents of `x^a y^b z^c`.
pub(crate) type SpatialMono = [u16; 3];

/// Normal-ordered `Σ c·x^a y^b z^c` with coefficients polynomial in `ħ` (and later `ρ̂`).
pub(crate) type SpatialSum = Vec<(SpatialMono, Poly)>;

/// `[u, v]` for spatial indices `u > v`, as `(coefficient sign, letter)`: the result is `sign·h·letter`.
fn bracket_desc(u: usize, v: usize) -> (i64, usize) {
    match (u, v) {
        (1, 0) => (-1, 2), // [y,x] = -hz
        (2, 1) => (-1, 0), // [z,y] = -hx
        (2, 0) => (1, 1),  // [z,x] = hy
        _ => unreachable!("bracket_desc expects u > v"),
    }
}

fn accumulate(acc: &mut BTreeMap<SpatialMono, Poly>, m: SpatialMono, c: &Poly) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(m).or_insert_with(Poly::zero);
    *e = &*e + c;
    if e.is_zero() {
        acc.remove(&m);
    }
}

thread_local! {
    static LETTER_CACHE: RefCell<HashMap<(SpatialMono, usize), Rc<SpatialSum>>> = RefCell::new(HashMap::new());
    static MONO_CACHE: RefCell<HashMap<(SpatialMono, SpatialMono), Rc<SpatialSum>>> = RefCell::new(HashMap::new());
}

/// Normal form of `x^a y^b z^c · letter`.
pub(crate) fn spatial_times_letter(m: SpatialMono, letter: usize) -> Rc<SpatialSum> {
    if let Some(hit) = LETTER_CACHE.with(|c| c.borrow().get(&(m, letter)).cloned()) {
        return hit;
    }
    let last = (0..3).rev().find(|&k| m[k] > 0);
    let result: SpatialSum = match last {
        Some(k) if k > letter => {
            // w·k·L = (w·L)·k + w·[k, L]
            let mut w = m;
            w[k] -= 1;
            let mut acc = BTreeMap::new();
            for (mm, c) in spatial_times_letter(w, letter).iter() {
                for (m2, c2) in spatial_times_letter(*mm, k).iter() {
                    accumulate(&mut acc, *m2, &(c * c2));
                }
            }
            let (sign, j) = bracket_desc(k, letter);
            let hc = h_poly().scale(&GaussRat::from_int(sign));
            for (mm, c) in spatial_times_letter(w, j).iter() {
                accumulate(&mut acc, *mm, &(c * &hc));
            }
            acc.into_iter().collect()
        }
        _ => {
            let mut out = m;
            out[letter] += 1;
            vec![(out, Poly::one())]
        }
    };
    let result = Rc::new(result);
    LETTER_CACHE.with(|c| c.borrow_mut().insert((m, letter), result.clone()));
    result
}

/// Normal form of the product of two spatial PBW monomials.
pub(crate) fn spatial_mul(a: SpatialMono, b: SpatialMono) -> Rc<SpatialSum> {
    if b == [0, 0, 0] {
        return Rc::new(vec![(a, Poly::one())]);
    }
    if let Some(hit) = MONO_CACHE.with(|c| c.borrow().get(&(a, b)).cloned()) {
        return hit;
    }
    // Peel the last letter of b: a·(b'·L) = (a·b')·L.
    let k = (0..3).rev().find(|&k| b[k] > 0).expect("nonzero monomial");
    let mut b1 = b;
    b1[k] -= 1;
    let mut acc = BTreeMap::new();
    for (m, c) in spatial_mul(a, b1).iter() {
        for (m2, c2) in spatial_times_letter(*m, k).iter() {
            accumulate(&mut acc, *m2, &(c * c2));
        }
    }
    let result: Rc<SpatialSum> = Rc::new(acc.into_iter().collect());
    MONO_CACHE.with(|c| c.borrow_mut().insert((a, b), result.clone()));
    result
}

/// PBW monomial `t^a x^b y^c z^d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UMono(pub [u16; 4]);

impl UMono {
    pub fn one() -> Self {
        UMono([0; 4])
    }

    pub fn gen(g: Gen) -> Self {
        let mut e = [0; 4];
        e[g.idx()] = 1;
        UMono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn spatial(&self) -> SpatialMono {
        [self.0[1], self.0[2], self.0[3]]
    }

    fn key(&self) -> (u32, [u16; 4]) {
        (self.degree(), self.0)
    }
}

impl PartialOrd for UMono {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for UMono {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key().cmp(&o.key())
    }
}

impl fmt::Display for UMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mono_string(&self.0, &["t", "x", "y", "z"]))
    }
}

/// `a*b^2*c`-style rendering; empty for the unit monomial.
pub(crate) fn mono_string(exps: &[u16], names: &[&str]) -> String {
    let mut parts = Vec::new();
    for (e, n) in exps.iter().zip(names) {
        match e {
            0 => {}
            1 => parts.push(n.to_string()),
            _ => parts.push(format!("{n}^{e}")),
        }
    }
    parts.join("*")
}

/// An element of `U(u(2)_h)` in PBW normal form with coefficients rational in `ħ`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly {
    terms: BTreeMap<UMono, HRat>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(HRat::one())
    }

    pub fn constant(c: HRat) -> Self {
        UPoly::monomial(UMono::one(), c)
    }

    pub fn gen(g: Gen) -> Self {
        UPoly::monomial(UMono::gen(g), HRat::one())
    }

    pub fn monomial(m: UMono, c: HRat) -> Self {
        let mut p = UPoly::zero();
        p.add_term(m, c);
        p
    }

    /// The quadratic Casimir `x² + y² + z²`.
    pub fn casimir() -> Self {
        let mut p = UPoly::zero();
        for k in 0..3 {
            let mut e = [0; 4];
            e[k + 1] = 2;
            p.add_term(UMono(e), HRat::one());
        }
        p
    }

    pub fn add_term(&mut self, m: UMono, c: HRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&UMono, &HRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &HRat) -> Self {
        let mut out = UPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Normal form of a word of generators.
    pub fn from_word(word: &[Gen]) -> Self {
        word.iter().fold(UPoly::one(), |acc, g| &acc * &UPoly::gen(*g))
    }

    /// Specialize `ħ` to zero; `None` when a coefficient has a pole there.
    pub fn at_h0(&self) -> Option<UPoly> {
        let mut out = UPoly::zero();
        for (m, c) in &self.terms {
            let v = c.get().limit_h0().ok()?;
            out.add_term(*m, HRat::new(v.0).ok()?);
        }
        Some(out)
    }
}

/// Normal form of the product of a word of generators.
pub fn pbw_normalize(word: &[Gen]) -> UPoly {
    UPoly::from_word(word)
}

/// Bilinear extension of [`pbw_normalize`].
pub fn u_mul(p: &UPoly, q: &UPoly) -> UPoly {
    p * q
}

impl<'a> std::ops::Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        let mut out = UPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let c = c1 * c2;
                let t = m1.0[0] + m2.0[0];
                for (s, p) in spatial_mul(m1.spatial(), m2.spatial()).iter() {
                    let coeff = HRat::new(c.get().mul_poly(p)).expect("structure constants depend on hbar only");
                    out.add_term(UMono([t, s[0], s[1], s[2]]), coeff);
                }
            }
        }
        out
    }
}

impl<'a> std::ops::Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl std::ops::Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Ring for UPoly {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn one() -> Self {
        UPoly::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, &CenterFun)> = self.terms.iter().rev().map(|(m, c)| (m.to_string(), c.get())).collect();
        f.write_str(&fmt_combination(terms))
    }
}

/// Square matrix over `U(u(2)_h)`.
pub type UMat = Mat<UPoly>;

fn lin(t: i64, x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> UPoly {
    let c = |re: i64, im: i64| HRat::constant(GaussRat::gauss((re, 1), (im, 1)));
    let mut p = UPoly::zero();
    p.add_term(UMono::gen(Gen::T), c(t, 0));
    p.add_term(UMono::gen(Gen::X), c(x.0, x.1));
    p.add_term(UMono::gen(Gen::Y), c(y.0, y.1));
    p.add_term(UMono::gen(Gen::Z), c(z.0, z.1));
    p
}

/// The generating matrix `N = [[t − iz, −ix − y], [−ix + y, t + iz]]`.
pub fn gen_matrix_n() -> UMat {
    Mat::from_rows(vec![
        vec![lin(1, (0, 0), (0, 0), (0, -1)), lin(0, (0, -1), (-1, 0), (0, 0))],
        vec![lin(0, (0, -1), (1, 0), (0, 0)), lin(1, (0, 0), (0, 0), (0, 1))],
    ])
}

/// `N² − (2t+h)N + (t² + Cas + ht)I`.
pub fn ch_residual() -> UMat {
    let n = gen_matrix_n();
    let t = UPoly::gen(Gen::T);
    let h = UPoly::constant(HRat::h());
    let lin_coeff = &(&t + &t) + &h;
    let const_coeff = &(&(&t * &t) + &UPoly::casimir()) + &(&h * &t);
    n.mul(&n).sub(&n.lscale(&lin_coeff)).add(&Mat::scalar(2, &const_coeff))
}

/// The flip `P` on `C² ⊗ C²`.
pub fn flip() -> UMat {
    Mat::from_fn(4, |r, c| {
        let (i, j) = (r / 2, r % 2);
        if c == j * 2 + i {
            UPoly::one()
        } else {
            UPoly::zero()
        }
    })
}

/// `P N₁ P N₁ − N₁ P N₁ P − h(P N₁ − N₁ P)` with `N₁ = N ⊗ I`.
pub fn braid_residual() -> UMat {
    let p = flip();
    let n1 = gen_matrix_n().kron(&Mat::identity(2));
    let pn = p.mul(&n1);
    let np = n1.mul(&p);
    let h = UPoly::constant(HRat::h());
    pn.mul(&pn).sub(&np.mul(&np)).sub(&pn.sub(&np).lscale(&h))
}
