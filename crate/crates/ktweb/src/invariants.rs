//! Fundamental isometry invariants and the web-type classification.
//!
//! Δ1 = β6,
//! Δ2 = β6(β1+β2) − β4² − β5²,
//! Δ3 = (β6(β1−β2) − β4² + β5²)² + 4(β6β3 + β4β5)².
//!
//! Δ1 and Δ3 separate the four orbit types of nontrivial tensors; all three
//! are unchanged under the group action. Zero tests are exact over the
//! rationals, so the classification is tolerance-free.

use std::error::Error;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::kt::KtParams;
use crate::scalar::{Rational, Scalar};

/// The four separable web types plus the trivial (metric-multiple) class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WebType {
    Trivial,
    Cartesian,
    Polar,
    Parabolic,
    EllipticHyperbolic,
}

impl fmt::Display for WebType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            WebType::Trivial => "trivial",
            WebType::Cartesian => "cartesian",
            WebType::Polar => "polar",
            WebType::Parabolic => "parabolic",
            WebType::EllipticHyperbolic => "elliptic-hyperbolic",
        };
        write!(f, "{name}")
    }
}

/// The triple (Δ1, Δ2, Δ3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTriple<T> {
    pub delta1: T,
    pub delta2: T,
    pub delta3: T,
}

pub fn invariants<T: Scalar>(b: &KtParams<T>) -> InvariantTriple<T> {
    let four = T::from_integer(4);
    let b4sq = b.b4.clone() * b.b4.clone();
    let b5sq = b.b5.clone() * b.b5.clone();
    let delta1 = b.b6.clone();
    let delta2 = b.b6.clone() * (b.b1.clone() + b.b2.clone()) - b4sq.clone() - b5sq.clone();
    let x = b.b6.clone() * (b.b1.clone() - b.b2.clone()) - b4sq + b5sq;
    let y = b.b6.clone() * b.b3.clone() + b.b4.clone() * b.b5.clone();
    let delta3 = x.clone() * x + four * (y.clone() * y);
    InvariantTriple {
        delta1,
        delta2,
        delta3,
    }
}

/// Classify by exact zero tests on Δ1, Δ3; the trivial class is split off
/// first since the Δ-table applies to nontrivial tensors only.
pub fn classify(b: &KtParams<Rational>) -> WebType {
    if b.is_trivial() {
        return WebType::Trivial;
    }
    let inv = invariants(b);
    match (inv.delta1.is_zero(), inv.delta3.is_zero()) {
        (true, true) => WebType::Cartesian,
        (false, true) => WebType::Polar,
        (true, false) => WebType::Parabolic,
        (false, false) => WebType::EllipticHyperbolic,
    }
}

/// Float entry point for numeric pipelines: zero tests at relative
/// tolerance `eps` (Δ3 is degree four in the parameters, so its threshold
/// scales with the fourth power of the parameter magnitude).
pub fn classify_approx(b: &KtParams<f64>, eps: f64) -> WebType {
    let scale = b
        .as_array()
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let near_zero = |x: f64, deg: i32| x.abs() <= eps * scale.powi(deg);
    let trivial = near_zero(b.b1 - b.b2, 1)
        && near_zero(b.b3, 1)
        && near_zero(b.b4, 1)
        && near_zero(b.b5, 1)
        && near_zero(b.b6, 1);
    if trivial {
        return WebType::Trivial;
    }
    let inv = invariants(b);
    match (near_zero(inv.delta1, 1), near_zero(inv.delta3, 4)) {
        (true, true) => WebType::Cartesian,
        (false, true) => WebType::Polar,
        (true, false) => WebType::Parabolic,
        (false, false) => WebType::EllipticHyperbolic,
    }
}

/// Asked for the focal parameter of a web type that has none.
#[derive(Debug, Clone)]
pub struct WrongType {
    pub expected: WebType,
    pub found: WebType,
}

impl fmt::Display for WrongType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expected a {} tensor, found {}",
            self.expected, self.found
        )
    }
}

impl Error for WrongType {}

/// Semi-focal distance of the elliptic-hyperbolic web: `k = Δ3^(1/4) / |Δ1|`.
///
/// The focii sit at distance 2k apart; invariant under the group action and
/// under scaling of the tensor. (The literature formula √Δ3/Δ1² has the
/// dimensions of k²; the quarter-power form is validated against the
/// eigenvalue-coincidence oracle in the `webs` module.)
pub fn focal_k(b: &KtParams<Rational>) -> Result<f64, WrongType> {
    let found = classify(b);
    if found != WebType::EllipticHyperbolic {
        return Err(WrongType {
            expected: WebType::EllipticHyperbolic,
            found,
        });
    }
    let inv = invariants(b);
    Ok(inv.delta3.to_f64().sqrt().sqrt() / inv.delta1.abs().to_f64())
}
