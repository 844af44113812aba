//! Sparse bivariate polynomials in (q1, q2).
//!
//! Terms are kept in a `BTreeMap` from exponent pairs to nonzero
//! coefficients, so equality, rendering and iteration order are canonical.
//! The zero polynomial is the empty map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Rational, Scalar};

/// One of the two position variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Q1,
    Q2,
}

/// Sparse polynomial in q1, q2 with coefficients in `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Scalar> Poly2<T> {
    pub fn zero() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(0, 0, c)
    }

    /// The monomial `c * q1^i * q2^j`; a zero coefficient yields the zero polynomial.
    pub fn monomial(i: u32, j: u32, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Poly2 { terms }
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::Q1 => Self::monomial(1, 0, T::one()),
            Var::Q2 => Self::monomial(0, 1, T::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q1^i * q2^j` (zero when the monomial is absent).
    pub fn coeff(&self, i: u32, j: u32) -> T {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    /// Iterate terms in canonical (i, j) order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match v {
                Var::Q1 => i,
                Var::Q2 => j,
            })
            .max()
    }

    fn insert_add(&mut self, key: (u32, u32), c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            Some(prev) => {
                let sum = prev + c;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative.
    pub fn diff(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::Q1 => {
                    if i > 0 {
                        out.insert_add((i - 1, j), c.clone() * T::from_integer(i as i64));
                    }
                }
                Var::Q2 => {
                    if j > 0 {
                        out.insert_add((i, j - 1), c.clone() * T::from_integer(j as i64));
                    }
                }
            }
        }
        out
    }

    /// Antiderivative in `v` with zero constant of integration.
    pub fn integrate(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::Q1 => {
                    let n = T::from_integer((i + 1) as i64);
                    out.insert_add((i + 1, j), c.clone() / n);
                }
                Var::Q2 => {
                    let n = T::from_integer((j + 1) as i64);
                    out.insert_add((i, j + 1), c.clone() / n);
                }
            }
        }
        out
    }

    /// Drop every term containing `v`; the restriction to `v = 0`.
    pub fn restrict_zero(&self, v: Var) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| match v {
                    Var::Q1 => i == 0,
                    Var::Q2 => j == 0,
                })
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    /// Horner evaluation, exact when `T` is exact.
    pub fn eval(&self, x: &T, y: &T) -> T {
        // group by ascending q1-power; inner Horner in q2 per group
        let mut outer = T::zero();
        let mut xpow_prev: Option<(u32, T)> = None;
        let mut groups: Vec<(u32, Vec<(u32, T)>)> = Vec::new();
        for (&(i, j), c) in &self.terms {
            match groups.last_mut() {
                Some((gi, list)) if *gi == i => list.push((j, c.clone())),
                _ => groups.push((i, vec![(j, c.clone())])),
            }
        }
        for (i, list) in groups {
            // Horner in y over sparse exponents (descending)
            let mut inner = T::zero();
            let mut last_exp = 0u32;
            for (j, c) in list.into_iter().rev() {
                inner = inner * pow_scalar(y, last_exp.saturating_sub(j)) + c;
                last_exp = j;
            }
            inner = inner * pow_scalar(y, last_exp);
            let xp = match &xpow_prev {
                Some((pi, pv)) if *pi <= i => pv.clone() * pow_scalar(x, i - pi),
                _ => pow_scalar(x, i),
            };
            xpow_prev = Some((i, xp.clone()));
            outer = outer + inner * xp;
        }
        outer
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.to_f64().eval(&x, &y)
    }

    pub fn to_f64(&self) -> Poly2<f64> {
        Poly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, c.to_f64())).collect(),
        }
    }

    /// Substitute the affine map: returns `p(m(q))`.
    pub fn compose_affine(&self, map: &AffineMap<T>) -> Self {
        let x_img = Poly2 {
            terms: [
                ((1, 0), map.m[0][0].clone()),
                ((0, 1), map.m[0][1].clone()),
                ((0, 0), map.t[0].clone()),
            ]
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect(),
        };
        let y_img = Poly2 {
            terms: [
                ((1, 0), map.m[1][0].clone()),
                ((0, 1), map.m[1][1].clone()),
                ((0, 0), map.t[1].clone()),
            ]
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect(),
        };
        let max_i = self.degree_in(Var::Q1).unwrap_or(0) as usize;
        let max_j = self.degree_in(Var::Q2).unwrap_or(0) as usize;
        let mut xpows = Vec::with_capacity(max_i + 1);
        let mut ypows = Vec::with_capacity(max_j + 1);
        xpows.push(Self::constant(T::one()));
        ypows.push(Self::constant(T::one()));
        for i in 1..=max_i {
            let next = &xpows[i - 1] * &x_img;
            xpows.push(next);
        }
        for j in 1..=max_j {
            let next = &ypows[j - 1] * &y_img;
            ypows.push(next);
        }
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let term = (&xpows[i as usize] * &ypows[j as usize]).scale(c);
            out = &out + &term;
        }
        out
    }
}

impl Poly2<Rational> {
    /// Reinterpret exact coefficients in another scalar type.
    pub fn with_scalar<S: Scalar>(&self) -> Poly2<S> {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, S::from_rational(c)))
                .collect(),
        }
    }
}

fn pow_scalar<T: Scalar>(x: &T, n: u32) -> T {
    let mut acc = T::one();
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}

/// Affine substitution `q ↦ M q + t`.
#[derive(Debug, Clone)]
pub struct AffineMap<T> {
    pub m: [[T; 2]; 2],
    pub t: [T; 2],
}

impl<T: Scalar> AffineMap<T> {
    pub fn apply(&self, x: &T, y: &T) -> (T, T) {
        (
            self.m[0][0].clone() * x.clone() + self.m[0][1].clone() * y.clone() + self.t[0].clone(),
            self.m[1][0].clone() * x.clone() + self.m[1][1].clone() * y.clone() + self.t[1].clone(),
        )
    }
}

impl<T: Scalar> Add for &Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.insert_add(k, c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.insert_add(k, -c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        Poly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

impl<T: Scalar> Mul for &Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = Poly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.insert_add((i1 + i2, j1 + j2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Display for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = T::one();
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != one || (i == 0 && j == 0) {
                parts.push(format!("{mag}"));
            }
            match i {
                0 => {}
                1 => parts.push("q1".into()),
                _ => parts.push(format!("q1^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("q2".into()),
                _ => parts.push(format!("q2^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
