//! Scalar abstraction: the coefficient field of the algebra core.
//!
//! Everything exact runs over [`Rational`] (arbitrary-precision, always in
//! lowest terms with positive denominator); the numeric verification modules
//! instantiate the same code at `f64`.

use std::fmt;

use num_traits::{Num, Signed, ToPrimitive};

/// Exact rational scalar, canonical lowest-terms form.
pub type Rational = num_rational::BigRational;

/// Coefficient field for the generic core: rationals (exact) or `f64`.
pub trait Scalar: Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + 'static {
    fn from_rational(r: &Rational) -> Self;

    fn from_integer(n: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Square root within the scalar type, if one exists.
    ///
    /// Exact for rationals (`Some` only for perfect squares), and the usual
    /// floating square root for `f64` (`None` on negative input).
    fn try_sqrt(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_integer(n: i64) -> Self {
        Rational::from_integer(n.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = self.numer();
        let den = self.denom();
        let sn = num.sqrt();
        let sd = den.sqrt();
        if &(&sn * &sn) == num && &(&sd * &sd) == den {
            Some(Rational::new(sn, sd))
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_integer(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn try_sqrt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.sqrt())
        } else {
            None
        }
    }
}

/// Shorthand rational constructor, `rat(3, 4)` = 3/4.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}
