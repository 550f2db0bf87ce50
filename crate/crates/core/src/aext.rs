//! The extended algebra `A = (U(su(2)_h) ⊗ K(t,ρ̂)) / ⟨x² + y² + z² − ρ̂² + ħ²⟩`.
//!
//! Elements are kept in the basis `x^a y^b z^c` with `c ≤ 1`; `t`, `ρ̂` and all other
//! central data live in the [`CenterFun`] coefficients.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::reporacle::{default_reps, Rep};
use crate::scalars::ratfun::fmt_combination;
use crate::scalars::{CenterFun, ClassFun, GaussRat, Mono, Poly, Var};
use crate::upbw::{mono_string, spatial_mul, Gen, SpatialMono, SpatialSum, UPoly};
use num_traits::{One, Zero};

/// Basis monomial `x^a y^b z^c` with `c ≤ 1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AMono(pub [u16; 3]);

impl AMono {
    pub fn one() -> Self {
        AMono([0; 3])
    }

    pub fn spatial(k: usize) -> Self {
        let mut e = [0; 3];
        e[k] = 1;
        AMono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn key(&self) -> (u32, [u16; 3]) {
        (self.degree(), self.0)
    }
}

impl PartialOrd for AMono {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for AMono {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key().cmp(&o.key())
    }
}

impl fmt::Display for AMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mono_string(&self.0, &["x", "y", "z"]))
    }
}

/// `ρ̂² − ħ²`, the value of the Casimir in `A`.
pub(crate) fn casimir_value() -> Poly {
    &Poly::monomial(Mono::var(Var::Rho, 2), GaussRat::one()) - &Poly::monomial(Mono::var(Var::Hbar, 2), GaussRat::one())
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
    static REDUCE_CACHE: RefCell<HashMap<SpatialMono, Rc<SpatialSum>>> = RefCell::new(HashMap::new());
    static AMUL_CACHE: RefCell<HashMap<(SpatialMono, SpatialMono), Rc<SpatialSum>>> = RefCell::new(HashMap::new());
}

/// Rewrite `x^a y^b z^c` with `c ≥ 2` using `z² = (ρ̂² − ħ²) − x² − y²`.
fn reduce_z(m: SpatialMono) -> Rc<SpatialSum> {
    if m[2] <= 1 {
        return Rc::new(vec![(m, Poly::one())]);
    }
    if let Some(hit) = REDUCE_CACHE.with(|c| c.borrow().get(&m).cloned()) {
        return hit;
    }
    let mut base = m;
    base[2] -= 2;
    let mut acc = BTreeMap::new();
    let cas = casimir_value();
    for (mm, c) in reduce_z(base).iter() {
        accumulate(&mut acc, *mm, &(c * &cas));
    }
    for sq in [[2, 0, 0], [0, 2, 0]] {
        for (mm, c) in spatial_mul(base, sq).iter() {
            for (m2, c2) in reduce_z(*mm).iter() {
                accumulate(&mut acc, *m2, &-&(c * c2));
            }
        }
    }
    let out: Rc<SpatialSum> = Rc::new(acc.into_iter().collect());
    REDUCE_CACHE.with(|c| c.borrow_mut().insert(m, out.clone()));
    out
}

/// Canonical-form product of two basis monomials of `A`.
fn amono_mul(a: SpatialMono, b: SpatialMono) -> Rc<SpatialSum> {
    if let Some(hit) = AMUL_CACHE.with(|c| c.borrow().get(&(a, b)).cloned()) {
        return hit;
    }
    let mut acc = BTreeMap::new();
    for (m, c) in spatial_mul(a, b).iter() {
        for (m2, c2) in reduce_z(*m).iter() {
            accumulate(&mut acc, *m2, &(c * c2));
        }
    }
    let out: Rc<SpatialSum> = Rc::new(acc.into_iter().collect());
    AMUL_CACHE.with(|c| c.borrow_mut().insert((a, b), out.clone()));
    out
}

/// An element of `A` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AElem {
    terms: BTreeMap<AMono, CenterFun>,
}

impl AElem {
    pub fn zero() -> Self {
        AElem { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        AElem::central(CenterFun::one())
    }

    pub fn central(f: CenterFun) -> Self {
        AElem::monomial(AMono::one(), f)
    }

    pub fn int(n: i64) -> Self {
        AElem::central(CenterFun::int(n))
    }

    pub fn monomial(m: AMono, f: CenterFun) -> Self {
        assert!(m.0[2] <= 1, "basis monomials have z-degree at most 1");
        let mut a = AElem::zero();
        a.add_term(m, f);
        a
    }

    /// A generator; `t` is central and lands in the coefficient field.
    pub fn gen(g: Gen) -> Self {
        match g.spatial() {
            None => AElem::central(CenterFun::t()),
            Some(k) => AElem::monomial(AMono::spatial(k), CenterFun::one()),
        }
    }

    pub fn x() -> Self {
        AElem::gen(Gen::X)
    }

    pub fn y() -> Self {
        AElem::gen(Gen::Y)
    }

    pub fn z() -> Self {
        AElem::gen(Gen::Z)
    }

    pub fn rho() -> Self {
        AElem::central(CenterFun::rho())
    }

    /// The coordinate vector `(x, y, z)`.
    pub fn coords() -> [AElem; 3] {
        [AElem::x(), AElem::y(), AElem::z()]
    }

    pub fn add_term(&mut self, m: AMono, f: CenterFun) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &f;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Terms in increasing graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&AMono, &CenterFun)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &AMono) -> CenterFun {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when the element is purely central.
    pub fn as_central(&self) -> Option<CenterFun> {
        match self.terms.len() {
            0 => Some(CenterFun::zero()),
            1 => self.terms.get(&AMono::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, f: &CenterFun) -> AElem {
        if f.is_zero() {
            return AElem::zero();
        }
        let mut out = AElem::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * f);
        }
        out
    }

    pub fn pow(&self, e: u32) -> AElem {
        let mut acc = AElem::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&CenterFun) -> Result<CenterFun>) -> Result<AElem> {
        let mut out = AElem::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    pub fn specialize_hbar(&self, v: &GaussRat) -> Result<AElem> {
        self.try_map_coeffs(|c| c.specialize_hbar(v))
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.values().any(|c| c.involves(v))
    }

    pub fn commutator(&self, o: &AElem) -> AElem {
        &(self * o) - &(o * self)
    }

    /// The image of the element in the classical limit `A₀`.
    pub fn classical_limit(&self) -> Result<ClassElem> {
        let mut out = ClassElem::zero();
        for (m, c) in &self.terms {
            out.add_term(m.0, c.limit_h0()?.0);
        }
        Ok(out)
    }
}

/// Quotient map `U(u(2)_h) → A`.
pub fn a_from_u(p: &UPoly) -> AElem {
    let mut out = AElem::zero();
    for (m, c) in p.terms() {
        let tpow = CenterFun::t().powi(m.0[0] as i32).expect("nonnegative power");
        let coeff = c.get() * &tpow;
        for (s, poly) in reduce_z(m.spatial()).iter() {
            out.add_term(AMono(*s), coeff.mul_poly(poly));
        }
    }
    out
}

/// Canonical-form product in `A`.
pub fn a_mul(a: &AElem, b: &AElem) -> AElem {
    a * b
}

impl<'a> std::ops::Mul<&'a AElem> for &'a AElem {
    type Output = AElem;
    fn mul(self, o: &AElem) -> AElem {
        if self.is_zero() || o.is_zero() {
            return AElem::zero();
        }
        if let Some(f) = self.as_central() {
            return o.scale(&f);
        }
        if let Some(f) = o.as_central() {
            return self.scale(&f);
        }
        // Group by output monomial: Σ_{(m1,m2)} c1·c2·poly.
        let mut acc: BTreeMap<AMono, CenterFun> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let c = c1 * c2;
                for (s, poly) in amono_mul(m1.0, m2.0).iter() {
                    let v = c.mul_poly(poly);
                    let e = acc.entry(AMono(*s)).or_default();
                    *e = &*e + &v;
                }
            }
        }
        AElem { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl<'a> std::ops::Add<&'a AElem> for &'a AElem {
    type Output = AElem;
    fn add(self, o: &AElem) -> AElem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a AElem> for &'a AElem {
    type Output = AElem;
    fn sub(self, o: &AElem) -> AElem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl std::ops::Neg for &AElem {
    type Output = AElem;
    fn neg(self) -> AElem {
        AElem { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<AElem> for AElem {
            type Output = AElem;
            fn $m(self, o: AElem) -> AElem {
                std::ops::$tr::$m(&self, &o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::Neg for AElem {
    type Output = AElem;
    fn neg(self) -> AElem {
        -&self
    }
}

impl Ring for AElem {
    fn zero() -> Self {
        AElem::zero()
    }
    fn one() -> Self {
        AElem::one()
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
        AElem::is_zero(self)
    }
}

impl fmt::Display for AElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, &CenterFun)> = self.terms.iter().rev().map(|(m, c)| (m.to_string(), c)).collect();
        f.write_str(&fmt_combination(terms))
    }
}

/// An element of the classical limit `A₀`: commuting `x, y, z` with `x² + y² + z² = r²`,
/// stored in the same basis as [`AElem`] with coefficients in `(t, r)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ClassElem {
    terms: BTreeMap<[u16; 3], CenterFun>,
}

impl ClassElem {
    pub fn zero() -> Self {
        ClassElem { terms: BTreeMap::new() }
    }

    pub fn constant(f: ClassFun) -> Self {
        let mut c = ClassElem::zero();
        c.add_term([0, 0, 0], f.0);
        c
    }

    pub fn coord(k: usize) -> Self {
        let mut e = [0; 3];
        e[k] = 1;
        let mut c = ClassElem::zero();
        c.add_term(e, CenterFun::one());
        c
    }

    /// Adds `f·x^a y^b z^c`, eliminating `z²` when `c ≥ 2`.
    pub fn add_term(&mut self, m: [u16; 3], f: CenterFun) {
        if f.is_zero() {
            return;
        }
        if m[2] >= 2 {
            let mut base = m;
            base[2] -= 2;
            let r2 = &CenterFun::rho() * &CenterFun::rho();
            self.add_term(base, &f * &r2);
            let mut bx = base;
            bx[0] += 2;
            self.add_term(bx, -&f);
            let mut by = base;
            by[1] += 2;
            self.add_term(by, -&f);
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e = &*e + &f;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16; 3], &CenterFun)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &ClassElem) -> ClassElem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn mul(&self, o: &ClassElem) -> ClassElem {
        let mut out = ClassElem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term([m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]], c1 * c2);
            }
        }
        out
    }

    /// Classical partial derivative; spatial derivatives act on `r` through `∂_u r = u/r`.
    pub fn partial(&self, u: Gen) -> ClassElem {
        let mut out = ClassElem::zero();
        for (m, c) in &self.terms {
            match u.spatial() {
                None => out.add_term(*m, c.partial(Var::T)),
                Some(k) => {
                    if m[k] > 0 {
                        let mut d = *m;
                        d[k] -= 1;
                        out.add_term(d, c.scale(&GaussRat::from_int(m[k] as i64)));
                    }
                    let dr = c.partial(Var::Rho);
                    if !dr.is_zero() {
                        let mut up = *m;
                        up[k] += 1;
                        out.add_term(up, &dr / &CenterFun::rho());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ClassElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let renamed: Vec<(String, CenterFun)> =
            self.terms.iter().rev().map(|(m, c)| (mono_string(m, &["x", "y", "z"]), c.clone())).collect();
        let mut out = fmt_combination(renamed.iter().map(|(m, c)| (m.clone(), c)));
        // The radius slot prints as `rho`; classical data use `r`.
        out = out.replace("rho", "r");
        f.write_str(&out)
    }
}

/// A lazily represented element of the skew field of fractions of `A`.
#[derive(Clone, PartialEq, Debug)]
pub enum SkewExpr {
    Atom(AElem),
    Sum(Vec<SkewExpr>),
    Prod(Vec<SkewExpr>),
    Inv(Box<SkewExpr>),
}

impl SkewExpr {
    pub fn atom(a: AElem) -> Self {
        SkewExpr::Atom(a)
    }

    /// A sum with nested sums flattened and atoms collected.
    pub fn sum(parts: Vec<SkewExpr>) -> Self {
        let mut atoms = AElem::zero();
        let mut rest = Vec::new();
        for p in parts {
            match p {
                SkewExpr::Atom(a) => atoms = &atoms + &a,
                SkewExpr::Sum(v) => match SkewExpr::sum(v) {
                    SkewExpr::Atom(a) => atoms = &atoms + &a,
                    SkewExpr::Sum(w) => rest.extend(w),
                    other => rest.push(other),
                },
                other => rest.push(other),
            }
        }
        if !atoms.is_zero() || rest.is_empty() {
            rest.insert(0, SkewExpr::Atom(atoms));
        }
        if rest.len() == 1 {
            rest.pop().expect("one part")
        } else {
            SkewExpr::Sum(rest)
        }
    }

    /// A product with nested products flattened, adjacent atoms multiplied and zero absorbing.
    pub fn prod(parts: Vec<SkewExpr>) -> Self {
        let mut out: Vec<SkewExpr> = Vec::new();
        let mut flat = Vec::new();
        for p in parts {
            match p {
                SkewExpr::Prod(v) => flat.extend(v),
                other => flat.push(other),
            }
        }
        for p in flat {
            match (out.last_mut(), p) {
                (Some(SkewExpr::Atom(prev)), SkewExpr::Atom(a)) => *prev = &*prev * &a,
                (_, p) => out.push(p),
            }
        }
        if out.iter().any(|p| matches!(p, SkewExpr::Atom(a) if a.is_zero())) {
            return SkewExpr::Atom(AElem::zero());
        }
        if out.len() > 1 {
            out.retain(|p| !matches!(p, SkewExpr::Atom(a) if *a == AElem::one()));
        }
        match out.len() {
            0 => SkewExpr::Atom(AElem::one()),
            1 => out.pop().expect("one part"),
            _ => SkewExpr::Prod(out),
        }
    }

    /// The inverse, certified by the default representations.
    pub fn inverse(e: SkewExpr) -> Result<SkewExpr> {
        SkewExpr::inverse_in(e, &default_reps())
    }

    /// The inverse, certified nonzero in at least one of `reps`; central atoms fold to a
    /// reciprocal coefficient.
    pub fn inverse_in(e: SkewExpr, reps: &[Rep]) -> Result<SkewExpr> {
        if let SkewExpr::Atom(a) = &e {
            if a.is_zero() {
                return Err(Error::SingularInverse("zero operand".into()));
            }
            if let Some(f) = a.as_central() {
                return Ok(SkewExpr::Atom(AElem::central(f.inv()?)));
            }
        }
        let certified = reps.iter().any(|r| r.eval_skew(&e).map(|m| r.is_invertible(&m)).unwrap_or(false));
        if !certified {
            return Err(Error::SingularInverse(format!("{e} is singular in every sampled representation")));
        }
        Ok(SkewExpr::Inv(Box::new(e)))
    }

    /// The element when the tree contains no inverse node.
    pub fn as_aelem(&self) -> Option<AElem> {
        match self {
            SkewExpr::Atom(a) => Some(a.clone()),
            SkewExpr::Sum(v) => v.iter().try_fold(AElem::zero(), |acc, e| Some(&acc + &e.as_aelem()?)),
            SkewExpr::Prod(v) => v.iter().try_fold(AElem::one(), |acc, e| Some(&acc * &e.as_aelem()?)),
            SkewExpr::Inv(_) => None,
        }
    }

    /// Evaluate with `x, y, z` treated as commuting scalars: `(x, y, z, t, ρ̂, ħ, g) ↦ point`.
    pub fn eval_commutative(
        &self,
        xyz: [num_complex::Complex64; 3],
        center: &[num_complex::Complex64; 4],
    ) -> Option<num_complex::Complex64> {
        use num_complex::Complex64;
        match self {
            SkewExpr::Atom(a) => {
                let mut s = Complex64::new(0.0, 0.0);
                for (m, c) in a.terms() {
                    let mut v = c.eval_complex(center)?;
                    for k in 0..3 {
                        v *= xyz[k].powi(m.0[k] as i32);
                    }
                    s += v;
                }
                Some(s)
            }
            SkewExpr::Sum(v) => v.iter().try_fold(Complex64::new(0.0, 0.0), |acc, e| Some(acc + e.eval_commutative(xyz, center)?)),
            SkewExpr::Prod(v) => v.iter().try_fold(Complex64::new(1.0, 0.0), |acc, e| Some(acc * e.eval_commutative(xyz, center)?)),
            SkewExpr::Inv(e) => {
                let v = e.eval_commutative(xyz, center)?;
                if v.norm() < 1e-300 {
                    None
                } else {
                    Some(1.0 / v)
                }
            }
        }
    }
}

impl fmt::Display for SkewExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkewExpr::Atom(a) => write!(f, "({a})"),
            SkewExpr::Sum(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            SkewExpr::Prod(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            SkewExpr::Inv(e) => write!(f, "inv({e})"),
        }
    }
}
