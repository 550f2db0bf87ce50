//! The multiplicative matrix map `Θ̂ = iħΘ` and its inversion.
//!
//! The first column of `Θ̂(a)` is `iħ·(∂̃_t a, ∂_x a, ∂_y a, ∂_z a)`. Central elements map
//! into the commutative algebra `K(t,ρ̂)[A]`, where
//! `A = [[0,x,y,z],[−x,0,z,−y],[−y,−z,0,x],[−z,y,−x,0]]` satisfies `A² = (ħ²−ρ̂²)I − 2iħA`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::aext::{AElem, AMono, SkewExpr};
use crate::algebra::{Mat, Ring};
use crate::error::{Error, Result};
use crate::scalars::{CenterFun, GaussRat, Var};
use crate::upbw::Gen;

/// A 4×4 matrix over `A`.
pub type ThetaMat = Mat<AElem>;

fn central(f: CenterFun) -> AElem {
    AElem::central(f)
}

/// The matrix `A`.
pub fn a_matrix() -> ThetaMat {
    let (x, y, z) = (AElem::x(), AElem::y(), AElem::z());
    let o = AElem::zero();
    Mat::from_rows(vec![
        vec![o.clone(), x.clone(), y.clone(), z.clone()],
        vec![-&x, o.clone(), z.clone(), -&y],
        vec![-&y, -&z, o.clone(), x.clone()],
        vec![-&z, y, -&x, o],
    ])
}

/// `Θ̂` of a generator: `Θ̂(t) = (t+iħ)I` and `Θ̂(u) = Q(u, iħe_u)` for spatial `u`.
pub fn theta_gen(g: Gen) -> ThetaMat {
    match g.spatial() {
        None => Mat::scalar(4, &central(&CenterFun::t() + &CenterFun::i_hbar())),
        Some(k) => {
            let mut w = [AElem::gen(g), AElem::zero(), AElem::zero(), AElem::zero()];
            w[k + 1] = central(CenterFun::i_hbar());
            q_matrix(&w)
        }
    }
}

/// Sign pattern of `w_k` in `Q(w) = [[w0,−w1,−w2,−w3],[w1,w0,−w3,w2],[w2,w3,w0,−w1],[w3,−w2,w1,w0]]`.
pub fn q_pattern(k: usize) -> [[i8; 4]; 4] {
    const Q: [[(usize, i8); 4]; 4] = [
        [(0, 1), (1, -1), (2, -1), (3, -1)],
        [(1, 1), (0, 1), (3, -1), (2, 1)],
        [(2, 1), (3, 1), (0, 1), (1, -1)],
        [(3, 1), (2, -1), (1, 1), (0, 1)],
    ];
    let mut out = [[0i8; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            if Q[i][j].0 == k {
                out[i][j] = Q[i][j].1;
            }
        }
    }
    out
}

/// `Q(w)` for a vector of four entries.
pub fn q_matrix(w: &[AElem; 4]) -> ThetaMat {
    let mut m = Mat::zero(4);
    for k in 0..4 {
        let p = q_pattern(k);
        for i in 0..4 {
            for j in 0..4 {
                match p[i][j] {
                    1 => m.set(i, j, w[k].clone()),
                    -1 => m.set(i, j, -&w[k]),
                    _ => {}
                }
            }
        }
    }
    m
}

/// An element `αI + βA` of `K(t,ρ̂)[A]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CentralMat {
    pub alpha: CenterFun,
    pub beta: CenterFun,
}

impl CentralMat {
    pub fn identity() -> Self {
        CentralMat { alpha: CenterFun::one(), beta: CenterFun::zero() }
    }

    pub fn to_mat(&self) -> ThetaMat {
        let mut m = a_matrix().lscale(&central(self.beta.clone()));
        for i in 0..4 {
            m.set(i, i, central(self.alpha.clone()));
        }
        m
    }

    /// Product using `A² = (ħ² − ρ̂²)I − 2iħA`.
    pub fn mul(&self, o: &CentralMat) -> CentralMat {
        let bb = &self.beta * &o.beta;
        let a2_const = &(&CenterFun::hbar() * &CenterFun::hbar()) - &(&CenterFun::rho() * &CenterFun::rho());
        let two_ih = &CenterFun::int(2) * &CenterFun::i_hbar();
        CentralMat {
            alpha: &(&self.alpha * &o.alpha) + &(&bb * &a2_const),
            beta: &(&(&self.alpha * &o.beta) + &(&self.beta * &o.alpha)) - &(&bb * &two_ih),
        }
    }

    /// `(i,j)` entry of `αI + βA`.
    pub fn entry(&self, i: usize, j: usize) -> AElem {
        if i == j {
            return central(self.alpha.clone());
        }
        if self.beta.is_zero() {
            return AElem::zero();
        }
        a_matrix().get(i, j).scale(&self.beta)
    }
}

impl fmt::Display for CentralMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*I + ({})*A", self.alpha, self.beta)
    }
}

/// `Θ̂(f) = f(Θ̂(t), Θ̂(ρ̂))` for a central `f`, in the closed form
/// `α = (f₊(ρ̂+ħ) + f₋(ρ̂−ħ))/2ρ̂`, `β = −i(f₊ − f₋)/2ρ̂`, `f± = f(t+iħ, ρ̂±ħ)`.
pub fn theta_central(f: &CenterFun) -> CentralMat {
    if !f.involves(Var::Rho) {
        return CentralMat { alpha: f.shift_t(), beta: CenterFun::zero() };
    }
    let st = f.shift_t();
    let fp = st.shift_rho(1);
    let fm = st.shift_rho(-1);
    let rho = CenterFun::rho();
    let hb = CenterFun::hbar();
    let two_rho = &CenterFun::int(2) * &rho;
    let alpha = (&(&fp * &(&rho + &hb)) + &(&fm * &(&rho - &hb))).checked_div(&two_rho).expect("rho is nonzero");
    let beta = (&fp - &fm).scale(&GaussRat::gauss((0, 1), (-1, 1))).checked_div(&two_rho).expect("rho is nonzero");
    CentralMat { alpha, beta }
}

/// `Θ̂(ρ̂^p) = ((ρ̂+ħ)^{p+1} + (ρ̂−ħ)^{p+1})/2ρ̂ · I − i((ρ̂+ħ)^p − (ρ̂−ħ)^p)/2ρ̂ · A`.
pub fn theta_hat_rho_power_central(p: i32) -> CentralMat {
    let rho = CenterFun::rho();
    let hb = CenterFun::hbar();
    let rp = &rho + &hb;
    let rm = &rho - &hb;
    let pw = |b: &CenterFun, e: i32| b.powi(e).expect("rho ± hbar is nonzero");
    let two_rho = &CenterFun::int(2) * &rho;
    let alpha = &(&pw(&rp, p + 1) + &pw(&rm, p + 1)) / &two_rho;
    let beta = (&(&pw(&rp, p) - &pw(&rm, p)) / &two_rho).scale(&GaussRat::gauss((0, 1), (-1, 1)));
    CentralMat { alpha, beta }
}

pub fn theta_hat_rho_power(p: i32) -> ThetaMat {
    theta_hat_rho_power_central(p).to_mat()
}

thread_local! {
    static MONO_THETA: RefCell<HashMap<AMono, ThetaMat>> = RefCell::new(HashMap::new());
}

fn theta_mono(m: AMono) -> ThetaMat {
    if let Some(hit) = MONO_THETA.with(|c| c.borrow().get(&m).cloned()) {
        return hit;
    }
    let mut acc: ThetaMat = Mat::identity(4);
    for (k, g) in Gen::SPATIAL.into_iter().enumerate() {
        let gm = theta_gen(g);
        for _ in 0..m.0[k] {
            acc = acc.mul(&gm);
        }
    }
    MONO_THETA.with(|c| c.borrow_mut().insert(m, acc.clone()));
    acc
}

/// `Θ̂(a)`, extended from the generator images by multiplicativity.
pub fn theta_hat(a: &AElem) -> ThetaMat {
    let mut out: ThetaMat = Mat::zero(4);
    for (m, f) in a.terms() {
        let tm = theta_mono(*m);
        let term = if f.as_constant().is_some() { tm.lscale(&central(f.clone())) } else { theta_central(f).to_mat().mul(&tm) };
        out = out.add(&term);
    }
    out
}

/// `(∂̃_t a, ∂_x a, ∂_y a, ∂_z a)` read off the first column of `Θ̂(a)`.
pub fn deriv_extract(m: &ThetaMat) -> [AElem; 4] {
    let inv = CenterFun::two_over_h();
    let col = m.column(0);
    [col[0].scale(&inv), col[1].scale(&inv), col[2].scale(&inv), col[3].scale(&inv)]
}

/// Inverse of `αI + βA` inside `K(t,ρ̂)[A]`.
pub fn central_inverse(m: &CentralMat) -> Result<CentralMat> {
    // (αI + βA)(γI + δA) = I with A² = (ħ²−ρ̂²)I − 2iħA.
    let two_ih = &CenterFun::int(2) * &CenterFun::i_hbar();
    let rho2_h2 = &(&CenterFun::rho() * &CenterFun::rho()) - &(&CenterFun::hbar() * &CenterFun::hbar());
    let (a, b) = (&m.alpha, &m.beta);
    let norm = &(&(a * a) - &(&two_ih * &(a * b))) + &(&(b * b) * &rho2_h2);
    if norm.is_zero() {
        return Err(Error::NonInvertibleCentral);
    }
    let gamma = (a - &(&two_ih * b)).checked_div(&norm)?;
    let delta = (-b).checked_div(&norm)?;
    Ok(CentralMat { alpha: gamma, beta: delta })
}

/// Recognize `αI + βA`.
pub fn as_central_form(m: &ThetaMat) -> Option<CentralMat> {
    let alpha = m.get(0, 0).as_central()?;
    let beta = m.get(0, 1).coeff(&AMono::spatial(0));
    let cm = CentralMat { alpha, beta };
    if &cm.to_mat() == m {
        Some(cm)
    } else {
        None
    }
}

/// Whether all sixteen entries pairwise commute.
pub fn entries_commute(m: &ThetaMat) -> bool {
    let e: Vec<&AElem> = m.entries().collect();
    let noncentral: Vec<&AElem> = e.into_iter().filter(|a| a.as_central().is_none()).collect();
    for i in 0..noncentral.len() {
        for j in i + 1..noncentral.len() {
            if noncentral[i] != noncentral[j] && !noncentral[i].commutator(noncentral[j]).is_zero() {
                return false;
            }
        }
    }
    true
}

fn minor(m: &ThetaMat, row: usize, col: usize) -> Vec<Vec<AElem>> {
    (0..m.dim()).filter(|&i| i != row).map(|i| (0..m.dim()).filter(|&j| j != col).map(|j| m.get(i, j).clone()).collect()).collect()
}

fn det_rows(rows: &[Vec<AElem>]) -> AElem {
    let n = rows.len();
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = AElem::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<AElem>> =
            rows[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = &rows[0][j] * &det_rows(&sub);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Determinant of a matrix with pairwise commuting entries, by cofactor expansion.
pub fn theta_det_commuting(m: &ThetaMat) -> Result<AElem> {
    if !entries_commute(m) {
        return Err(Error::NonCommutingEntries);
    }
    let rows: Vec<Vec<AElem>> = (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j).clone()).collect()).collect();
    Ok(det_rows(&rows))
}

/// `ħ⁴(∂̃_t a² + ∂_x a² + ∂_y a² + ∂_z a²)²`, the quaternionic-norm form of `det Θ̂(a)`.
pub fn theta_det_quaternionic(a: &AElem) -> AElem {
    let d = deriv_extract(&theta_hat(a));
    let s = d.iter().fold(AElem::zero(), |acc, w| &acc + &(w * w));
    let h4 = CenterFun::hbar().powi(4).expect("positive power");
    (&s * &s).scale(&h4)
}

/// A matrix over the skew field of fractions.
pub type SkewMat = Mat<SkewExpr>;

/// Adjugate inverse `cofactorᵀ · det⁻¹` for pairwise commuting entries.
pub fn commuting_inverse(m: &ThetaMat) -> Result<SkewMat> {
    let det = theta_det_commuting(m)?;
    if det.is_zero() {
        return Err(Error::SingularDeterminant);
    }
    let det_inv = SkewExpr::inverse(SkewExpr::atom(det)).map_err(|_| Error::SingularDeterminant)?;
    let mut out = Mat::zero(4);
    for i in 0..4 {
        for j in 0..4 {
            let c = det_rows(&minor(m, j, i));
            let c = if (i + j) % 2 == 0 { c } else { -&c };
            out.set(i, j, SkewExpr::prod(vec![SkewExpr::atom(c), det_inv.clone()]));
        }
    }
    Ok(out)
}

/// Inverse of `Θ̂(a)` in one of the supported cases.
#[derive(Clone, Debug, PartialEq)]
pub enum ThetaInverse {
    Central(CentralMat),
    Commuting(SkewMat),
}

impl ThetaInverse {
    pub fn to_skew(&self) -> SkewMat {
        match self {
            ThetaInverse::Central(c) => c.to_mat().map(|a| SkewExpr::atom(a.clone())),
            ThetaInverse::Commuting(m) => m.clone(),
        }
    }
}

/// `Θ̂(a)⁻¹`, trying the central subalgebra first and commuting entries second.
pub fn theta_invert(a: &AElem) -> Result<ThetaInverse> {
    let m = theta_hat(a);
    if let Some(c) = as_central_form(&m) {
        return central_inverse(&c).map(ThetaInverse::Central);
    }
    if entries_commute(&m) {
        return commuting_inverse(&m).map(ThetaInverse::Commuting);
    }
    Err(Error::CannotInvert(format!("Θ̂({a}) is neither in K(t,rho)[A] nor has pairwise commuting entries")))
}

/// `(∂̃_t, ∂_x, ∂_y, ∂_z)` of `a⁻¹`, read from the first column of `Θ̂(a)⁻¹`.
pub fn deriv_of_inverse(a: &AElem) -> Result<[SkewExpr; 4]> {
    let inv = theta_invert(a)?.to_skew();
    let s = SkewExpr::atom(AElem::central(CenterFun::two_over_h()));
    let col = inv.column(0);
    Ok([0, 1, 2, 3].map(|k| SkewExpr::prod(vec![s.clone(), col[k].clone()])))
}

/// `Θ̂` of a skew-field expression, extended through `Θ̂(a⁻¹) = Θ̂(a)⁻¹`.
pub fn theta_skew(e: &SkewExpr) -> Result<SkewMat> {
    match e {
        SkewExpr::Atom(a) => Ok(theta_hat(a).map(|v| SkewExpr::atom(v.clone()))),
        SkewExpr::Sum(v) => v.iter().try_fold(Mat::zero(4), |acc: SkewMat, p| Ok(acc.add(&theta_skew(p)?))),
        SkewExpr::Prod(v) => v.iter().try_fold(Mat::identity(4), |acc: SkewMat, p| Ok(acc.mul(&theta_skew(p)?))),
        SkewExpr::Inv(inner) => match inner.as_aelem() {
            Some(a) => Ok(theta_invert(&a)?.to_skew()),
            None => Err(Error::CannotInvert(format!("{inner} contains a nested inverse"))),
        },
    }
}

/// `(∂̃_t, ∂_x, ∂_y, ∂_z)` of a skew-field expression from the first column of its `Θ̂` image.
pub fn deriv_skew(e: &SkewExpr) -> Result<[SkewExpr; 4]> {
    let m = theta_skew(e)?;
    let s = SkewExpr::atom(AElem::central(CenterFun::two_over_h()));
    let col = m.column(0);
    Ok([0, 1, 2, 3].map(|k| SkewExpr::prod(vec![s.clone(), col[k].clone()])))
}

impl Ring for SkewExpr {
    fn zero() -> Self {
        SkewExpr::atom(AElem::zero())
    }
    fn one() -> Self {
        SkewExpr::atom(AElem::one())
    }
    fn add(&self, o: &Self) -> Self {
        match (self.as_aelem(), o.as_aelem()) {
            (Some(a), Some(b)) => SkewExpr::atom(&a + &b),
            _ => SkewExpr::sum(vec![self.clone(), o.clone()]),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        match (self.as_aelem(), o.as_aelem()) {
            (Some(a), Some(b)) => SkewExpr::atom(&a * &b),
            _ => SkewExpr::prod(vec![self.clone(), o.clone()]),
        }
    }
    fn neg(&self) -> Self {
        match self.as_aelem() {
            Some(a) => SkewExpr::atom(-&a),
            None => SkewExpr::prod(vec![SkewExpr::atom(AElem::int(-1)), self.clone()]),
        }
    }
    fn is_zero(&self) -> bool {
        matches!(self, SkewExpr::Atom(a) if a.is_zero())
    }
}
