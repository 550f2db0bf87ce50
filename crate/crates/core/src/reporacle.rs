//! Numeric oracle: spin-`j` matrix representations of `U(u(2)_h)` and its extensions.
//!
//! `x = −2ħJ_x`, `y = 2ħJ_y`, `z = −2ħJ_z` with `ħ = h/2i`; at `j = 1/2`, `h = 1`
//! these are the matrices `(i/2)σ_x`, `−(i/2)σ_y`, `(i/2)σ_z`. Central symbols act as
//! scalars: `t ↦ t₀`, `ρ̂ ↦ √(Cas + ħ²)` (principal branch), `g ↦ g₀`.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::aext::{AElem, SkewExpr};
use crate::algebra::Mat;
use crate::error::{Error, Result};
use crate::scalars::CenterFun;
use crate::upbw::UPoly;

pub type CMat = DMatrix<Complex64>;

/// Tolerance on the defining relations of a constructed representation.
pub const RELATION_TOL: f64 = 1e-12;

/// Relative singular-value threshold below which a matrix counts as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A finite-dimensional representation with numeric values for every central symbol.
#[derive(Clone, Debug)]
pub struct Rep {
    /// Twice the spin.
    pub j2: u32,
    pub t0: Complex64,
    pub hval: Complex64,
    pub hbar: Complex64,
    pub rho: Complex64,
    pub g: Complex64,
    pub x: CMat,
    pub y: CMat,
    pub z: CMat,
}

/// `(J_x, J_y, J_z)` for spin `j2/2` in the basis `m = j, j−1, …, −j`.
pub fn spin_matrices(j2: u32) -> (CMat, CMat, CMat) {
    let d = j2 as usize + 1;
    let j = j2 as f64 / 2.0;
    let m = |k: usize| j - k as f64;
    let mut jp = CMat::zeros(d, d);
    for k in 1..d {
        // J₊|m⟩ = √(j(j+1) − m(m+1)) |m+1⟩, with |m+1⟩ at index k−1.
        let mk = m(k);
        jp[(k - 1, k)] = c((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5, 0.0);
    let jy = (&jp - &jm) * c(0.0, -0.5);
    let jz = CMat::from_fn(d, d, |r, s| if r == s { c(m(r), 0.0) } else { c(0.0, 0.0) });
    (jx, jy, jz)
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

impl Rep {
    /// The spin-`j2/2` representation at `t = t0` and deformation parameter `hval`.
    pub fn new(j2: u32, t0: Complex64, hval: Complex64) -> Result<Rep> {
        if hval.norm() == 0.0 {
            return Err(Error::Domain("h must be nonzero".into()));
        }
        let hbar = hval / c(0.0, 2.0);
        let (jx, jy, jz) = spin_matrices(j2);
        let x = &jx * (hbar * -2.0);
        let y = &jy * (hbar * 2.0);
        let z = &jz * (hbar * -2.0);
        Rep::from_matrices(j2, t0, hval, x, y, z)
    }

    /// Wrap given generator images, checking the brackets and choosing the `ρ̂` branch.
    pub fn from_matrices(j2: u32, t0: Complex64, hval: Complex64, x: CMat, y: CMat, z: CMat) -> Result<Rep> {
        let hbar = hval / c(0.0, 2.0);
        let comm = |a: &CMat, b: &CMat| a * b - b * a;
        for (name, lhs, rhs) in
            [("[x,y] = hz", comm(&x, &y), &z * hval), ("[y,z] = hx", comm(&y, &z), &x * hval), ("[z,x] = hy", comm(&z, &x), &y * hval)]
        {
            let err = max_abs(&(lhs - rhs));
            if err > RELATION_TOL {
                return Err(Error::RelationViolation(format!("{name} off by {err:.3e}")));
            }
        }
        let cas = &x * &x + &y * &y + &z * &z;
        let d = x.nrows();
        let cas0 = cas[(0, 0)];
        let scalar_err = max_abs(&(&cas - CMat::identity(d, d) * cas0));
        if scalar_err > RELATION_TOL {
            return Err(Error::RelationViolation(format!("Casimir is not scalar (off by {scalar_err:.3e})")));
        }
        let rho = (cas0 + hbar * hbar).sqrt();
        Ok(Rep { j2, t0, hval, hbar, rho, g: c(1.0, 0.0), x, y, z })
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn label(&self) -> String {
        let j = if self.j2 % 2 == 0 { format!("{}", self.j2 / 2) } else { format!("{}/2", self.j2) };
        format!("j={j} h={} t0={}", self.hval, self.t0)
    }

    /// Values of `(t, ρ̂, ħ, g)` in the order of the central symbols.
    pub fn center_point(&self) -> [Complex64; 4] {
        [self.t0, self.rho, self.hbar, self.g]
    }

    pub fn eval_center(&self, f: &CenterFun) -> Result<Complex64> {
        f.eval_complex(&self.center_point())
            .ok_or_else(|| Error::SingularInverse(format!("central denominator of {f} vanishes in {}", self.label())))
    }

    fn identity(&self) -> CMat {
        CMat::identity(self.dim(), self.dim())
    }

    fn spatial_power(&self, cache: &mut HashMap<[u16; 3], CMat>, m: [u16; 3]) -> CMat {
        if let Some(v) = cache.get(&m) {
            return v.clone();
        }
        let mut acc = self.identity();
        for (k, g) in [&self.x, &self.y, &self.z].into_iter().enumerate() {
            for _ in 0..m[k] {
                acc = &acc * g;
            }
        }
        cache.insert(m, acc.clone());
        acc
    }

    pub fn eval_a(&self, a: &AElem) -> Result<CMat> {
        let mut cache = HashMap::new();
        let mut out = CMat::zeros(self.dim(), self.dim());
        for (m, f) in a.terms() {
            let s = self.eval_center(f)?;
            out += self.spatial_power(&mut cache, m.0) * s;
        }
        Ok(out)
    }

    pub fn eval_u(&self, p: &UPoly) -> Result<CMat> {
        let mut cache = HashMap::new();
        let mut out = CMat::zeros(self.dim(), self.dim());
        for (m, f) in p.terms() {
            let s = self.eval_center(f.get())? * self.t0.powu(m.0[0] as u32);
            out += self.spatial_power(&mut cache, m.spatial()) * s;
        }
        Ok(out)
    }

    pub fn eval_skew(&self, e: &SkewExpr) -> Result<CMat> {
        match e {
            SkewExpr::Atom(a) => self.eval_a(a),
            SkewExpr::Sum(v) => {
                let mut acc = CMat::zeros(self.dim(), self.dim());
                for p in v {
                    acc += self.eval_skew(p)?;
                }
                Ok(acc)
            }
            SkewExpr::Prod(v) => {
                let mut acc = self.identity();
                for p in v {
                    acc = acc * self.eval_skew(p)?;
                }
                Ok(acc)
            }
            SkewExpr::Inv(inner) => self.inverse(&self.eval_skew(inner)?),
        }
    }

    /// Block matrix image of a matrix over a represented ring.
    pub fn eval_block<T>(&self, m: &Mat<T>, f: impl Fn(&T) -> Result<CMat>) -> Result<CMat>
    where
        T: crate::algebra::Ring,
    {
        let (n, d) = (m.dim(), self.dim());
        let mut out = CMat::zeros(n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                let b = f(m.get(i, j))?;
                out.view_mut((i * d, j * d), (d, d)).copy_from(&b);
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self, m: &CMat) -> bool {
        let sv = m.clone().singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        max > 0.0 && min > SINGULAR_TOL * max.max(1.0)
    }

    pub fn inverse(&self, m: &CMat) -> Result<CMat> {
        if !self.is_invertible(m) {
            return Err(Error::SingularInverse(format!("singular matrix in {}", self.label())));
        }
        m.clone().try_inverse().ok_or_else(|| Error::SingularInverse(format!("singular matrix in {}", self.label())))
    }
}

/// Anything the oracle can map to a complex matrix.
pub trait RepEval {
    fn rep_eval(&self, r: &Rep) -> Result<CMat>;
}

impl RepEval for AElem {
    fn rep_eval(&self, r: &Rep) -> Result<CMat> {
        r.eval_a(self)
    }
}

impl RepEval for UPoly {
    fn rep_eval(&self, r: &Rep) -> Result<CMat> {
        r.eval_u(self)
    }
}

impl RepEval for SkewExpr {
    fn rep_eval(&self, r: &Rep) -> Result<CMat> {
        r.eval_skew(self)
    }
}

impl RepEval for CenterFun {
    fn rep_eval(&self, r: &Rep) -> Result<CMat> {
        Ok(CMat::identity(r.dim(), r.dim()) * r.eval_center(self)?)
    }
}

impl RepEval for Mat<AElem> {
    fn rep_eval(&self, r: &Rep) -> Result<CMat> {
        r.eval_block(self, |a| r.eval_a(a))
    }
}

impl RepEval for Mat<UPoly> {
    fn rep_eval(&self, r: &Rep) -> Result<CMat> {
        r.eval_block(self, |a| r.eval_u(a))
    }
}

impl RepEval for CMat {
    fn rep_eval(&self, _r: &Rep) -> Result<CMat> {
        Ok(self.clone())
    }
}

/// The grid `j ∈ {1/2, 1, 3/2}`, `h ∈ {1, 1/3, i/2}`, `t₀ ∈ {0, 1}`.
pub fn default_reps() -> Vec<Rep> {
    let mut out = Vec::new();
    for j2 in [1, 2, 3] {
        for hval in [c(1.0, 0.0), c(1.0 / 3.0, 0.0), c(0.0, 0.5)] {
            for t0 in [c(0.0, 0.0), c(1.0, 0.0)] {
                out.push(Rep::new(j2, t0, hval).expect("standard spin matrices satisfy the relations"));
            }
        }
    }
    out
}

/// Outcome of a numeric identity check.
#[derive(Clone, Debug)]
pub struct Report {
    pub pass: bool,
    /// Largest scaled difference over the representations that could be evaluated.
    pub max_err: f64,
    /// Representations in which either side could not be evaluated.
    pub failures: Vec<String>,
    pub checked: usize,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (max err {:.2e} over {} reps", if self.pass { "pass" } else { "FAIL" }, self.max_err, self.checked)?;
        if !self.failures.is_empty() {
            write!(f, "; {} failed: {}", self.failures.len(), self.failures.join("; "))?;
        }
        write!(f, ")")
    }
}

/// Compare `lhs` and `rhs` in every representation; the error is
/// `max|lhs − rhs| / max(1, max|lhs|, max|rhs|)`.
pub fn check_identity(lhs: &dyn RepEval, rhs: &dyn RepEval, reps: &[Rep], tol: f64) -> Report {
    let mut max_err: f64 = 0.0;
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in reps {
        match (lhs.rep_eval(r), rhs.rep_eval(r)) {
            (Ok(a), Ok(b)) => {
                if a.shape() != b.shape() {
                    failures.push(format!("{}: shape mismatch", r.label()));
                    continue;
                }
                let scale = 1f64.max(max_abs(&a)).max(max_abs(&b));
                let err = max_abs(&(a - b)) / scale;
                checked += 1;
                if err > tol {
                    failures.push(format!("{}: err {err:.2e}", r.label()));
                }
                max_err = max_err.max(err);
            }
            (Err(e), _) | (_, Err(e)) => failures.push(format!("{}: {e}", r.label())),
        }
    }
    Report { pass: failures.is_empty() && checked > 0, max_err, failures, checked }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upbw::{ch_residual, Gen};

    #[test]
    fn pauli_case() {
        let r = Rep::new(1, c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let half_i = c(0.0, 0.5);
        assert!((r.x[(0, 1)] - half_i).norm() < 1e-15 && (r.x[(1, 0)] - half_i).norm() < 1e-15);
        assert!((r.y[(0, 1)] - c(-0.5, 0.0)).norm() < 1e-15 && (r.y[(1, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((r.z[(0, 0)] - half_i).norm() < 1e-15 && (r.z[(1, 1)] + half_i).norm() < 1e-15);
    }

    #[test]
    fn radius_branch() {
        for r in default_reps() {
            let d = r.dim();
            let cas = &r.x * &r.x + &r.y * &r.y + &r.z * &r.z;
            let lhs = CMat::identity(d, d) * (r.rho * r.rho);
            assert!(max_abs(&(cas + CMat::identity(d, d) * (r.hbar * r.hbar) - lhs)) < 1e-12);
        }
    }

    #[test]
    fn corrupted_relation_rejected() {
        let r = Rep::new(1, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let bad_z = &r.z * c(2.0, 0.0);
        let res = Rep::from_matrices(1, r.t0, r.hval, r.x.clone(), r.y.clone(), bad_z);
        assert!(matches!(res, Err(Error::RelationViolation(_))));
    }

    #[test]
    fn ch_residual_numeric() {
        let reps = default_reps();
        let zero = Mat::<UPoly>::zero(2);
        assert!(check_identity(&ch_residual(), &zero, &reps, 1e-12).pass);
        let xy = &UPoly::gen(Gen::X) * &UPoly::gen(Gen::Y);
        let yx = &UPoly::gen(Gen::Y) * &UPoly::gen(Gen::X);
        let lhs = &xy - &yx;
        let rhs = UPoly::gen(Gen::Z).scale(&crate::scalars::HRat::h());
        assert!(check_identity(&lhs, &rhs, &reps, 1e-12).pass);
    }
}
