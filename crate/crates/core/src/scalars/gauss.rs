//! Gaussian rationals `ℚ(i)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact element `re + im·i` of `ℚ(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        GaussRat::new(BigRational::new(BigInt::from(n), BigInt::from(d)), BigRational::zero())
    }

    pub fn gauss(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRat::new(BigRational::new(BigInt::from(re.0), BigInt::from(re.1)), BigRational::new(BigInt::from(im.0), BigInt::from(im.1)))
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussRat::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// True when printing needs no surrounding parentheses inside a product.
    pub fn is_atomic(&self) -> bool {
        self.re.is_zero() || self.im.is_zero()
    }

    /// Leading sign used for pretty printing: negative real part, or zero real part and
    /// negative imaginary part.
    pub fn looks_negative(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_negative()
        } else {
            self.re.is_negative() && (self.im.is_zero())
        }
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::new(&self.re * &o.re, BigRational::zero());
        }
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("division of a Gaussian rational by zero")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, o: GaussRat) -> GaussRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, o: &GaussRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, o: &GaussRat) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, o: &GaussRat) {
        *self = &*self * o;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    /// `3/2`, `-i`, `2/3*i`, `(1+2*i)`; parseable by the expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rat(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = if self.im.is_negative() { format!("-{}", im_part(&-self.im.clone())) } else { format!("+{}", im_part(&self.im)) };
                write!(f, "({}{})", fmt_rat(&self.re), im)
            }
        }
    }
}

/// Error produced when a literal is not of the form `p/q`, `ip/q`, `i*p/q` or `p/q*i`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a Gaussian-rational literal: {0:?}")]
pub struct GaussParseError(pub String);

impl FromStr for GaussRat {
    type Err = GaussParseError;

    /// Accepts the CLI forms `p/q` and `ip/q` (plus `i*p/q`, `p/q*i`, `-ip/q`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GaussParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.as_str()),
        };
        let (imag, num) = if let Some(r) = body.strip_prefix("i*") {
            (true, r)
        } else if let Some(r) = body.strip_prefix('i') {
            (true, r)
        } else if let Some(r) = body.strip_suffix("*i") {
            (true, r)
        } else {
            (false, body)
        };
        let value: BigRational = if num.is_empty() && imag {
            BigRational::one()
        } else {
            let mut parts = num.splitn(2, '/');
            let n: BigInt = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
            let d: BigInt = match parts.next() {
                Some(d) => d.parse().map_err(|_| err())?,
                None => BigInt::one(),
            };
            if d.is_zero() {
                return Err(err());
            }
            BigRational::new(n, d)
        };
        let value = if neg { -value } else { value };
        Ok(if imag { GaussRat::new(BigRational::zero(), value) } else { GaussRat::new(value, BigRational::zero()) })
    }
}
