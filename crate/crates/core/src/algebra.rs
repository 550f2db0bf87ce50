//! Ring interface and square matrices over (possibly noncommutative) rings.

use std::fmt;

/// Minimal associative-ring interface shared by the algebra element types.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

/// Dense `n×n` matrix; products keep the order of entry multiplication.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    n: usize,
    e: Vec<T>,
}

impl<T: Ring> Mat<T> {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                e.push(f(i, j));
            }
        }
        Mat { n, e }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat { n, e: rows.into_iter().flatten().collect() }
    }

    pub fn zero(n: usize) -> Self {
        Mat::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// `s·I`.
    pub fn scalar(n: usize, s: &T) -> Self {
        Mat::from_fn(n, |i, j| if i == j { s.clone() } else { T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.e[i * self.n + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.e.iter()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { n: self.n, e: self.e.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Mat { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Mat { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        Mat { n: self.n, e: self.e.iter().map(|a| a.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        Mat::from_fn(n, |i, k| {
            let mut acc = T::zero();
            for j in 0..n {
                let a = self.get(i, j);
                let b = o.get(j, k);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    /// Left multiplication of every entry: `s·M`.
    pub fn lscale(&self, s: &T) -> Self {
        Mat { n: self.n, e: self.e.iter().map(|a| s.mul(a)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|a| a.is_zero())
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let (n, m) = (self.n, o.n);
        Mat::from_fn(n * m, |i, j| self.get(i / m, j / m).mul(o.get(i % m, j % m)))
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
