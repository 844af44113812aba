//! Moving-frame normalization: the group element carrying a nontrivial
//! Killing tensor to its canonical form on the cross-section, and the
//! decomposition `K = ℓ1·Kc + ℓ2·g`.
//!
//! The generic cross-section is `β3 = β4 = β5 = 0`; the degenerate strata
//! use adapted cross-sections (Parabolic: β3 = β4 = 0, β1 = β2, β5 < 0;
//! Cartesian: β3 = β4 = β5 = β6 = 0, β1 ≥ β2).
//!
//! Frames are exact rational isometries whenever the normalizing rotation is
//! rational — detected by exact square roots through the half-angle chain —
//! and fall back to `f64` otherwise. The half-angle arctangent branch is
//! resolved by testing the four candidates `p3 + mπ/2` against the
//! normalization equations and the sign convention `k² = (β̃1−β̃2)/β̃6 ≥ 0`,
//! with a smallest-|p3| tie-break.

use std::error::Error;
use std::fmt;

use num_traits::{One, Zero};

use crate::invariants::{classify, WebType};
use crate::isometry::{act_on_params, Isometry, Rot2};
use crate::kt::KtParams;
use crate::scalar::{Rational, Scalar};
use crate::webs::SeparableChart;

/// A normalizing group element, exact when the rotation is rational.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Frame {
    Exact(Isometry<Rational>),
    Approx(Isometry<f64>),
}

impl Frame {
    pub fn is_exact(&self) -> bool {
        matches!(self, Frame::Exact(_))
    }

    pub fn to_f64(&self) -> Isometry<f64> {
        match self {
            Frame::Exact(g) => g.to_f64(),
            Frame::Approx(g) => g.clone(),
        }
    }

    /// (p1, p2, p3) as floats.
    pub fn parameters(&self) -> [f64; 3] {
        let g = self.to_f64();
        [g.t1, g.t2, g.angle()]
    }
}

/// Canonical form of a nontrivial tensor: the normalizing frame, the
/// parameters on the cross-section, and the scale/trivial split.
///
/// `beta_canonical = ell1 · pattern(web) + ell2 · (1,1,0,0,0,0)` with
/// patterns EH `(k²,0,0,0,0,1)`, Polar `(0,0,0,0,0,1)`, Parabolic
/// `(0,0,0,0,−1,0)`, Cartesian `(1,0,0,0,0,0)`.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition<T> {
    pub web: WebType,
    pub frame: Isometry<T>,
    pub beta_canonical: KtParams<T>,
    pub ell1: T,
    pub ell2: T,
    /// Semi-focal distance, present iff `web` is elliptic-hyperbolic.
    pub k: Option<f64>,
}

impl<T: Scalar> CanonicalDecomposition<T> {
    pub fn to_f64(&self) -> CanonicalDecomposition<f64> {
        CanonicalDecomposition {
            web: self.web,
            frame: self.frame.to_f64(),
            beta_canonical: self.beta_canonical.to_f64(),
            ell1: self.ell1.to_f64(),
            ell2: self.ell2.to_f64(),
            k: self.k,
        }
    }
}

/// Result of [`canonicalize`]: exact when the normalizing frame is rational.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Canonicalization {
    Exact(CanonicalDecomposition<Rational>),
    Approx(CanonicalDecomposition<f64>),
}

impl Canonicalization {
    pub fn web(&self) -> WebType {
        match self {
            Canonicalization::Exact(d) => d.web,
            Canonicalization::Approx(d) => d.web,
        }
    }

    pub fn frame(&self) -> Frame {
        match self {
            Canonicalization::Exact(d) => Frame::Exact(d.frame.clone()),
            Canonicalization::Approx(d) => Frame::Approx(d.frame.clone()),
        }
    }

    pub fn k(&self) -> Option<f64> {
        match self {
            Canonicalization::Exact(d) => d.k,
            Canonicalization::Approx(d) => d.k,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Canonicalization::Exact(_))
    }

    pub fn to_f64(&self) -> CanonicalDecomposition<f64> {
        match self {
            Canonicalization::Exact(d) => d.to_f64(),
            Canonicalization::Approx(d) => d.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameError {
    WrongType { expected: WebType, found: WebType },
    TrivialTensor,
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::WrongType { expected, found } => {
                write!(f, "expected a {expected} tensor, found {found}")
            }
            FrameError::TrivialTensor => write!(f, "trivial (multiple of the metric)"),
        }
    }
}

impl Error for FrameError {}

/// Exact rotation solving `x·sin 2θ + y·cos 2θ = 0` with
/// `cos 2θ = x/h`, `sin 2θ = y/h`, `h = +√(x² + y²)`, when every square
/// root in the half-angle chain is rational.
fn exact_normalizing_rotation(x: &Rational, y: &Rational) -> Option<Rot2<Rational>> {
    let h2 = x * x + y * y;
    if h2.is_zero() {
        return Some(Rot2::identity());
    }
    let h = h2.try_sqrt()?;
    let cos2 = x / &h;
    let sin2 = y / &h;
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let c = ((&one + &cos2) / &two).try_sqrt()?;
    if c.is_zero() {
        return Some(Rot2::new(Rational::zero(), one));
    }
    let s = &sin2 / &(&two * &c);
    Some(Rot2::new(c, s))
}

fn approx_normalizing_rotation(x: f64, y: f64) -> Rot2<f64> {
    Rot2::from_angle(0.5 * y.atan2(x))
}

/// The translations of the moving-frame map for a given rotation
/// (kills β̃4 and β̃5; requires β6 ≠ 0).
fn generic_translations<T: Scalar>(b: &KtParams<T>, rot: &Rot2<T>) -> (T, T) {
    let c = rot.cos().clone();
    let s = rot.sin().clone();
    let p1 = (b.b5.clone() * c.clone() - b.b4.clone() * s.clone()) / b.b6.clone();
    let p2 = (b.b4.clone() * c + b.b5.clone() * s) / b.b6.clone();
    (p1, p2)
}

/// Choose among the four branch candidates `rot · (π/2)^m`: keep those with
/// `(β̃1 − β̃2)·β̃6 ≥ 0` (so the focal square stays nonnegative), then take
/// the smallest |p3|, preferring the nonnegative angle on exact ties.
fn select_branch<T: Scalar>(
    b: &KtParams<T>,
    rot0: Rot2<T>,
    build: impl Fn(&KtParams<T>, Rot2<T>) -> Isometry<T>,
) -> Isometry<T> {
    let mut rot = rot0;
    let mut best: Option<((f64, bool), Isometry<T>)> = None;
    for _ in 0..4 {
        let g = build(b, rot.clone());
        let bt = act_on_params(&g, b);
        let gap = bt.b1.clone() - bt.b2.clone();
        let oriented = if bt.b6.is_zero() {
            !gap.is_negative()
        } else {
            !(gap * bt.b6.clone()).is_negative()
        };
        if oriented {
            let angle = g.angle();
            let key = (angle.abs(), angle < 0.0);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, g));
            }
        }
        rot = rot.quarter_turn();
    }
    best.expect("one branch satisfies the orientation convention")
        .1
}

/// Moving-frame map for the elliptic-hyperbolic stratum.
pub fn frame_eh(b: &KtParams<Rational>) -> Result<Frame, FrameError> {
    let found = classify(b);
    if found != WebType::EllipticHyperbolic {
        return Err(FrameError::WrongType {
            expected: WebType::EllipticHyperbolic,
            found,
        });
    }
    let two = Rational::from_integer(2.into());
    let x = &(&b.b6 * &(&b.b1 - &b.b2)) - &(&(&b.b4 * &b.b4) - &(&b.b5 * &b.b5));
    let y = -(&two * &(&(&b.b3 * &b.b6) + &(&b.b4 * &b.b5)));
    let build_exact = |b: &KtParams<Rational>, r: Rot2<Rational>| {
        let (p1, p2) = generic_translations(b, &r);
        Isometry::new(p1, p2, r)
    };
    match exact_normalizing_rotation(&x, &y) {
        Some(rot) => Ok(Frame::Exact(select_branch(b, rot, build_exact))),
        None => {
            let bf = b.to_f64();
            let rot = approx_normalizing_rotation(x.to_f64(), y.to_f64());
            Ok(Frame::Approx(select_branch(&bf, rot, |b, r| {
                let (p1, p2) = generic_translations(b, &r);
                Isometry::new(p1, p2, r)
            })))
        }
    }
}

/// Moving-frame map for the polar stratum. Rotation is a residual stabilizer
/// of the polar pattern, so the chart gauge fixes p3 = 0; always exact.
pub fn frame_polar(b: &KtParams<Rational>) -> Result<Frame, FrameError> {
    let found = classify(b);
    if found != WebType::Polar {
        return Err(FrameError::WrongType {
            expected: WebType::Polar,
            found,
        });
    }
    Ok(Frame::Exact(Isometry::translation(
        &b.b5 / &b.b6,
        &b.b4 / &b.b6,
    )))
}

/// Moving-frame map for the parabolic stratum: rotate (β4, β5) onto the
/// β̃5 < 0 axis, then translate onto β̃3 = 0, β̃1 = β̃2.
pub fn frame_parabolic(b: &KtParams<Rational>) -> Result<Frame, FrameError> {
    let found = classify(b);
    if found != WebType::Parabolic {
        return Err(FrameError::WrongType {
            expected: WebType::Parabolic,
            found,
        });
    }
    let rho2 = &(&b.b4 * &b.b4) + &(&b.b5 * &b.b5);
    match rho2.try_sqrt() {
        Some(rho) => Ok(Frame::Exact(parabolic_with_rotation(
            b,
            Rot2::new(-(&b.b5 / &rho), &b.b4 / &rho),
        ))),
        None => {
            let bf = b.to_f64();
            let rho = bf.b4.hypot(bf.b5);
            Ok(Frame::Approx(parabolic_with_rotation(
                &bf,
                Rot2::new(-bf.b5 / rho, bf.b4 / rho),
            )))
        }
    }
}

fn parabolic_with_rotation<T: Scalar>(b: &KtParams<T>, rot: Rot2<T>) -> Isometry<T> {
    let rotated = act_on_params(&Isometry::new(T::zero(), T::zero(), rot.clone()), b);
    let two = T::from_integer(2);
    // rotated.b4 = 0 and rotated.b5 = -ρ < 0 by construction
    let p2 = -(rotated.b3.clone() / rotated.b5.clone());
    let p1 = (rotated.b2.clone() - rotated.b1.clone()) / (two * rotated.b5.clone());
    Isometry::new(p1, p2, rot)
}

/// Moving-frame map for the Cartesian stratum: principal-axis rotation of
/// the constant tensor (translations act trivially there).
pub fn frame_cartesian(b: &KtParams<Rational>) -> Result<Frame, FrameError> {
    let found = classify(b);
    if found != WebType::Cartesian {
        return Err(FrameError::WrongType {
            expected: WebType::Cartesian,
            found,
        });
    }
    let two = Rational::from_integer(2.into());
    let x = &b.b1 - &b.b2;
    let y = -(&two * &b.b3);
    match exact_normalizing_rotation(&x, &y) {
        Some(rot) => Ok(Frame::Exact(select_branch(b, rot, |_, r| {
            Isometry::new(Rational::zero(), Rational::zero(), r)
        }))),
        None => {
            let bf = b.to_f64();
            let rot = approx_normalizing_rotation(x.to_f64(), y.to_f64());
            Ok(Frame::Approx(select_branch(&bf, rot, |_, r| {
                Isometry::new(0.0, 0.0, r)
            })))
        }
    }
}

fn decompose<T: Scalar>(
    web: WebType,
    frame: Isometry<T>,
    bt: KtParams<T>,
) -> CanonicalDecomposition<T> {
    let (ell1, ell2, k) = match web {
        WebType::EllipticHyperbolic => {
            // branch selection guarantees k² ≥ 0; clamp float rounding dust
            let k2 = (bt.b1.clone() - bt.b2.clone()) / bt.b6.clone();
            (
                bt.b6.clone(),
                bt.b2.clone(),
                Some(k2.to_f64().max(0.0).sqrt()),
            )
        }
        WebType::Polar => (bt.b6.clone(), bt.b1.clone(), None),
        WebType::Parabolic => (-bt.b5.clone(), bt.b1.clone(), None),
        WebType::Cartesian => (bt.b1.clone() - bt.b2.clone(), bt.b2.clone(), None),
        WebType::Trivial => unreachable!("trivial tensors are rejected upstream"),
    };
    CanonicalDecomposition {
        web,
        frame,
        beta_canonical: bt,
        ell1,
        ell2,
        k,
    }
}

/// Normalize a nontrivial tensor: classify, compute the moving frame, land
/// on the cross-section, and split off the trivial part.
pub fn canonicalize(b: &KtParams<Rational>) -> Result<Canonicalization, FrameError> {
    if b.is_trivial() {
        return Err(FrameError::TrivialTensor);
    }
    let web = classify(b);
    let frame = match web {
        WebType::EllipticHyperbolic => frame_eh(b)?,
        WebType::Polar => frame_polar(b)?,
        WebType::Parabolic => frame_parabolic(b)?,
        WebType::Cartesian => frame_cartesian(b)?,
        WebType::Trivial => unreachable!(),
    };
    Ok(match frame {
        Frame::Exact(g) => {
            let bt = act_on_params(&g, b);
            Canonicalization::Exact(decompose(web, g, bt))
        }
        Frame::Approx(g) => {
            let bt = act_on_params(&g, &b.to_f64());
            Canonicalization::Approx(decompose(web, g, bt))
        }
    })
}

/// The separable chart of a decomposition: the web transform composed with
/// the inverse frame, mapping chart coordinates to original Cartesian ones.
pub fn separable_map<T: Scalar>(d: &CanonicalDecomposition<T>) -> SeparableChart {
    let df = d.to_f64();
    SeparableChart::new(d.web, d.k, df.frame)
}

/// Closed-form text of the separable map, e.g.
/// `q1 = 1/2 + cosh(u)*cos(v); q2 = sinh(u)*sin(v)`.
pub fn separable_map_text<T: Scalar>(d: &CanonicalDecomposition<T>) -> String {
    let inv = d.frame.inverse();
    let k_factor = |expr: &str| -> String {
        match d.k {
            Some(k) if k != 1.0 => format!("{k}*{expr}"),
            _ => expr.to_string(),
        }
    };
    let (w1, w2) = match d.web {
        WebType::Cartesian => ("u".to_string(), "v".to_string()),
        WebType::Polar => ("u*cos(v)".to_string(), "u*sin(v)".to_string()),
        WebType::Parabolic => ("(u^2 - v^2)/2".to_string(), "u*v".to_string()),
        WebType::EllipticHyperbolic => (k_factor("cosh(u)*cos(v)"), k_factor("sinh(u)*sin(v)")),
        WebType::Trivial => unreachable!("no chart for trivial tensors"),
    };
    let c = inv.rot.cos().clone();
    let s = inv.rot.sin().clone();
    let line1 = linear_combo_text(&inv.t1, &c, &w1, &(-s.clone()), &w2);
    let line2 = linear_combo_text(&inv.t2, &s, &w1, &c, &w2);
    format!("q1 = {line1}; q2 = {line2}")
}

fn linear_combo_text<T: Scalar>(constant: &T, c1: &T, w1: &str, c2: &T, w2: &str) -> String {
    let mut out = String::new();
    let mut push = |coef: &T, body: Option<&str>| {
        if coef.is_zero() {
            return;
        }
        let neg = coef.is_negative();
        let mag = coef.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match body {
            None => out.push_str(&format!("{mag}")),
            Some(b) => {
                if mag.is_one() {
                    out.push_str(b);
                } else {
                    out.push_str(&format!("{mag}*{b}"));
                }
            }
        }
    };
    push(constant, None);
    push(c1, Some(w1));
    push(c2, Some(w2));
    if out.is_empty() {
        out.push('0');
    }
    out
}
