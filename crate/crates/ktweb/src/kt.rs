//! Killing two-tensors on the Euclidean plane.
//!
//! The solution space of the Killing equation in flat Cartesian coordinates
//! is six-dimensional; [`KtParams`] holds the six parameters and
//! [`SymTensorField`] the corresponding contravariant component fields
//!
//! ```text
//! K11 = b1 + 2 b4 q2 + b6 q2^2
//! K12 = b3 - b4 q1 - b5 q2 - b6 q1 q2
//! K22 = b2 + 2 b5 q1 + b6 q1^2
//! ```
//!
//! The quadratic form in momenta reads `F = Σ K^{ij} p_i p_j`, so the
//! `p1 p2` coefficient of the first integral is `2·K12`.

use std::error::Error;
use std::fmt;

use crate::poly::{Poly2, Var};
use crate::scalar::{Rational, Scalar};

/// The six parameters of a Killing two-tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtParams<T> {
    pub b1: T,
    pub b2: T,
    pub b3: T,
    pub b4: T,
    pub b5: T,
    pub b6: T,
}

impl<T: Scalar> KtParams<T> {
    pub fn new(b: [T; 6]) -> Self {
        let [b1, b2, b3, b4, b5, b6] = b;
        KtParams {
            b1,
            b2,
            b3,
            b4,
            b5,
            b6,
        }
    }

    pub fn as_array(&self) -> [T; 6] {
        [
            self.b1.clone(),
            self.b2.clone(),
            self.b3.clone(),
            self.b4.clone(),
            self.b5.clone(),
            self.b6.clone(),
        ]
    }

    /// Multiple of the metric: generates no web.
    pub fn is_trivial(&self) -> bool {
        self.b1 == self.b2
            && self.b3.is_zero()
            && self.b4.is_zero()
            && self.b5.is_zero()
            && self.b6.is_zero()
    }

    /// The explicit tensor field with the component patterns above.
    pub fn tensor(&self) -> SymTensorField<T> {
        let two = T::from_integer(2);
        let k11 = &(&Poly2::constant(self.b1.clone())
            + &Poly2::monomial(0, 1, two.clone() * self.b4.clone()))
            + &Poly2::monomial(0, 2, self.b6.clone());
        let k12 = &(&(&Poly2::constant(self.b3.clone())
            + &Poly2::monomial(1, 0, -self.b4.clone()))
            + &Poly2::monomial(0, 1, -self.b5.clone()))
            + &Poly2::monomial(1, 1, -self.b6.clone());
        let k22 = &(&Poly2::constant(self.b2.clone())
            + &Poly2::monomial(1, 0, two * self.b5.clone()))
            + &Poly2::monomial(2, 0, self.b6.clone());
        SymTensorField { k11, k12, k22 }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new([
            self.b1.clone() + other.b1.clone(),
            self.b2.clone() + other.b2.clone(),
            self.b3.clone() + other.b3.clone(),
            self.b4.clone() + other.b4.clone(),
            self.b5.clone() + other.b5.clone(),
            self.b6.clone() + other.b6.clone(),
        ])
    }

    pub fn scaled(&self, c: &T) -> Self {
        Self::new(self.as_array().map(|b| b * c.clone()))
    }

    pub fn to_f64(&self) -> KtParams<f64> {
        KtParams::new(self.as_array().map(|b| b.to_f64()))
    }
}

impl KtParams<Rational> {
    pub fn with_scalar<S: Scalar>(&self) -> KtParams<S> {
        KtParams::new(self.as_array().map(|b| S::from_rational(&b)))
    }
}

/// Symmetric contravariant 2-tensor field with polynomial components.
///
/// Only the three independent components are stored; the matrix at a point
/// is `[[K11, K12], [K12, K22]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymTensorField<T> {
    pub k11: Poly2<T>,
    pub k12: Poly2<T>,
    pub k22: Poly2<T>,
}

/// A component outside the six-parameter Killing family.
#[derive(Debug, Clone)]
pub struct NotInFamily {
    pub component: &'static str,
    pub detail: String,
}

impl fmt::Display for NotInFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not a Killing tensor: component {} {}",
            self.component, self.detail
        )
    }
}

impl Error for NotInFamily {}

impl<T: Scalar> SymTensorField<T> {
    pub fn new(k11: Poly2<T>, k12: Poly2<T>, k22: Poly2<T>) -> Self {
        SymTensorField { k11, k12, k22 }
    }

    /// Recover the six parameters by coefficient matching.
    ///
    /// Fails when any component carries a monomial outside the family
    /// pattern or the shared parameters disagree between components.
    pub fn params(&self) -> Result<KtParams<T>, NotInFamily> {
        let two = T::from_integer(2);
        let b = KtParams::new([
            self.k11.coeff(0, 0),
            self.k22.coeff(0, 0),
            self.k12.coeff(0, 0),
            self.k11.coeff(0, 1) / two.clone(),
            self.k22.coeff(1, 0) / two,
            self.k11.coeff(0, 2),
        ]);
        let rebuilt = b.tensor();
        for (name, got, want) in [
            ("K11", &self.k11, &rebuilt.k11),
            ("K12", &self.k12, &rebuilt.k12),
            ("K22", &self.k22, &rebuilt.k22),
        ] {
            if got != want {
                let diff = got - want;
                return Err(NotInFamily {
                    component: name,
                    detail: format!("differs from the Killing family pattern by {diff}"),
                });
            }
        }
        Ok(b)
    }

    /// The four independent symmetrized-derivative components of the flat
    /// Killing equation; all vanish identically iff the field is Killing.
    pub fn killing_residual(&self) -> [Poly2<T>; 4] {
        let two = Poly2::constant(T::from_integer(2));
        [
            self.k11.diff(Var::Q1),
            &self.k11.diff(Var::Q2) + &(&two * &self.k12.diff(Var::Q1)),
            &self.k22.diff(Var::Q1) + &(&two * &self.k12.diff(Var::Q2)),
            self.k22.diff(Var::Q2),
        ]
    }

    pub fn is_killing(&self) -> bool {
        self.killing_residual().iter().all(|r| r.is_zero())
    }

    /// Discriminant polynomial `(K11 - K22)^2 + 4 K12^2`; its real zeros are
    /// the points where the eigenvalues coincide (the focii of the web).
    pub fn eigen_discriminant(&self) -> Poly2<T> {
        let diff = &self.k11 - &self.k22;
        let four = Poly2::constant(T::from_integer(4));
        &(&diff * &diff) + &(&four * &(&self.k12 * &self.k12))
    }

    /// Pointwise eigenstructure of the evaluated symmetric matrix.
    pub fn eigen_at(&self, x: [f64; 2]) -> EigenData {
        let a = self.k11.eval_f64(x[0], x[1]);
        let b = self.k12.eval_f64(x[0], x[1]);
        let d = self.k22.eval_f64(x[0], x[1]);
        let disc = (a - d) * (a - d) + 4.0 * b * b;
        let half_gap = disc.max(0.0).sqrt() / 2.0;
        let mean = (a + d) / 2.0;
        let lambda1 = mean + half_gap;
        let lambda2 = mean - half_gap;
        if half_gap == 0.0 {
            return EigenData {
                lambda1,
                lambda2,
                eigenvectors: None,
            };
        }
        // (K - lambda1) has rank one; its kernel direction from the larger row
        let r1 = [b, lambda1 - a];
        let r2 = [lambda1 - d, b];
        let pick = if r1[0] * r1[0] + r1[1] * r1[1] >= r2[0] * r2[0] + r2[1] * r2[1] {
            r1
        } else {
            r2
        };
        let norm = (pick[0] * pick[0] + pick[1] * pick[1]).sqrt();
        let mut e1 = [pick[0] / norm, pick[1] / norm];
        e1 = sign_fix(e1);
        let e2 = sign_fix([-e1[1], e1[0]]);
        EigenData {
            lambda1,
            lambda2,
            eigenvectors: Some((e1, e2)),
        }
    }

    pub fn to_f64(&self) -> SymTensorField<f64> {
        SymTensorField {
            k11: self.k11.to_f64(),
            k12: self.k12.to_f64(),
            k22: self.k22.to_f64(),
        }
    }
}

fn sign_fix(v: [f64; 2]) -> [f64; 2] {
    // first nonzero coordinate positive
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        [-v[0], -v[1]]
    } else {
        v
    }
}

/// Eigenvalues (`lambda1 >= lambda2`) and, when they are distinct, the unit
/// eigenvectors with the first nonzero coordinate positive.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub lambda1: f64,
    pub lambda2: f64,
    pub eigenvectors: Option<([f64; 2], [f64; 2])>,
}

impl EigenData {
    pub fn is_degenerate(&self) -> bool {
        self.eigenvectors.is_none()
    }
}
