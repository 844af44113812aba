//! The Hamiltonian side: compatibility of a potential with a Killing tensor
//! (the Bertrand-Darboux condition), reconstruction of the integral's
//! potential term, symbolic Poisson-bracket residuals, a numeric Liouville
//! separability check, and a Störmer-Verlet conservation witness.
//!
//! Conventions: `H = ½(p1² + p2²) + V(q)` and
//! `F = Σ K^{ij} p_i p_j + U(q)`, so `{H, F} = 0` splits into the Killing
//! equation (cubic-in-p coefficients) and `dU = 2 K̂ dV` (linear ones).

use std::error::Error;
use std::fmt;

use crate::invariants::WebType;
use crate::kt::KtParams;
use crate::poly::{Poly2, Var};
use crate::scalar::{Rational, Scalar};
use crate::webs::{SeparableChart, WebError};

/// Natural Hamiltonian: kinetic part fixed as ½(p1²+p2²), plus `V`.
#[derive(Debug, Clone)]
pub struct NaturalHamiltonian {
    pub potential: Poly2<Rational>,
}

/// Quadratic first-integral candidate: `F = Σ K^{ij} p_i p_j + U`.
#[derive(Debug, Clone)]
pub struct QuadraticIntegral {
    pub kt: KtParams<Rational>,
    pub potential: Poly2<Rational>,
}

/// The two components of the one-form `K̂ dV` (with the flat metric,
/// `ω_a = K^{ab} ∂_b V`).
fn kt_dv<T: Scalar>(b: &KtParams<T>, v: &Poly2<T>) -> [Poly2<T>; 2] {
    let field = b.tensor();
    let v1 = v.diff(Var::Q1);
    let v2 = v.diff(Var::Q2);
    [
        &(&field.k11 * &v1) + &(&field.k12 * &v2),
        &(&field.k12 * &v1) + &(&field.k22 * &v2),
    ]
}

/// The single component of `d(K̂ dV)`: exact compatibility residual.
/// Zero iff a quadratic first integral with this Killing part admits `V`.
pub fn compatibility_residual<T: Scalar>(b: &KtParams<T>, v: &Poly2<T>) -> Poly2<T> {
    let [omega1, omega2] = kt_dv(b, v);
    &omega2.diff(Var::Q1) - &omega1.diff(Var::Q2)
}

/// Left-hand side of the Bertrand-Darboux PDE:
///
/// ```text
/// (V11 - V22)(β6 q1 q2 + β4 q1 + β5 q2 - β3)
///   + V12 (β6 q2² - β6 q1² + 2β4 q2 - 2β5 q1 + β1 - β2)
///   + 3 V1 (β6 q2 + β4) - 3 V2 (β6 q1 + β5)
/// ```
///
/// Identically `-d(K̂dV)`. (The classical transcriptions print the last
/// term with a plus sign, which fails on the central-potential witness and
/// on the Yatsun pair; the sign here is fixed by the compatibility oracle.)
pub fn bde_residual<T: Scalar>(b: &KtParams<T>, v: &Poly2<T>) -> Poly2<T> {
    let two = T::from_integer(2);
    let three = T::from_integer(3);
    let v1 = v.diff(Var::Q1);
    let v2 = v.diff(Var::Q2);
    let v11 = v1.diff(Var::Q1);
    let v22 = v2.diff(Var::Q2);
    let v12 = v1.diff(Var::Q2);

    let c1 = &(&(&Poly2::monomial(1, 1, b.b6.clone()) + &Poly2::monomial(1, 0, b.b4.clone()))
        + &Poly2::monomial(0, 1, b.b5.clone()))
        + &Poly2::constant(-b.b3.clone());
    let c2 = &(&(&(&(&Poly2::monomial(0, 2, b.b6.clone())
        + &Poly2::monomial(2, 0, -b.b6.clone()))
        + &Poly2::monomial(0, 1, two.clone() * b.b4.clone()))
        + &Poly2::monomial(1, 0, -(two * b.b5.clone())))
        + &Poly2::constant(b.b1.clone()))
        + &Poly2::constant(-b.b2.clone());
    let c3 = (&Poly2::monomial(0, 1, b.b6.clone()) + &Poly2::constant(b.b4.clone())).scale(&three);
    let c4 = (&Poly2::monomial(1, 0, b.b6.clone()) + &Poly2::constant(b.b5.clone())).scale(&three);

    let second = &(&(&v11 - &v22) * &c1) + &(&v12 * &c2);
    &(&second + &(&v1 * &c3)) - &(&v2 * &c4)
}

/// `V` does not satisfy the compatibility condition for the given tensor.
#[derive(Debug, Clone)]
pub struct NotCompatible {
    pub residual: Poly2<Rational>,
}

impl fmt::Display for NotCompatible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "potential incompatible with the Killing tensor; d(K dV) = {}",
            self.residual
        )
    }
}

impl Error for NotCompatible {}

/// Integrate `dU = 2 K̂ dV` by polynomial path integration (first along q1
/// at q2 = 0, then along q2), normalized to `U(0,0) = 0`. Exactness is
/// guaranteed by the compatibility precondition.
pub fn reconstruct_integral_potential(
    b: &KtParams<Rational>,
    v: &Poly2<Rational>,
) -> Result<Poly2<Rational>, NotCompatible> {
    let residual = compatibility_residual(b, v);
    if !residual.is_zero() {
        return Err(NotCompatible { residual });
    }
    let two = Poly2::constant(Rational::from_integer(2.into()));
    let [omega1, omega2] = kt_dv(b, v);
    let du1 = &two * &omega1;
    let du2 = &two * &omega2;
    let along_q1 = du1.restrict_zero(Var::Q2).integrate(Var::Q1);
    let along_q2 = du2.integrate(Var::Q2);
    Ok(&along_q1 + &along_q2)
}

/// Coefficient polynomials of `{H, F}`: the four cubic-in-momenta components
/// (the Killing residual of `F.kt`) and the two linear ones
/// (`dU − 2K̂dV`). `{H,F} ≡ 0` iff all six vanish.
pub fn bracket_residuals(
    h: &NaturalHamiltonian,
    f: &QuadraticIntegral,
) -> ([Poly2<Rational>; 4], [Poly2<Rational>; 2]) {
    let cubic = f.kt.tensor().killing_residual();
    let two = Poly2::constant(Rational::from_integer(2.into()));
    let [omega1, omega2] = kt_dv(&f.kt, &h.potential);
    let linear = [
        &f.potential.diff(Var::Q1) - &(&two * &omega1),
        &f.potential.diff(Var::Q2) - &(&two * &omega2),
    ];
    (cubic, linear)
}

pub fn bracket_vanishes(h: &NaturalHamiltonian, f: &QuadraticIntegral) -> bool {
    let (cubic, linear) = bracket_residuals(h, f);
    cubic.iter().all(|p| p.is_zero()) && linear.iter().all(|p| p.is_zero())
}

/// Numeric separability check: evaluates `S(u,v) = φ_web(u,v) · V(q(u,v))`
/// on the grid and returns the max central-difference mixed partial
/// |∂²S/∂u∂v| (step `h`). Small residual ⇔ S = C(u) + D(v), i.e. V is in
/// Liouville form in this chart.
pub fn liouville_check(
    chart: &SeparableChart,
    v: &Poly2<Rational>,
    grid: &[(f64, f64)],
    h: f64,
) -> Result<f64, WebError> {
    let margin = 10.0 * h;
    for &(u, vv) in grid {
        let dist = chart.singular_distance([u, vv]);
        if dist < margin {
            return Err(WebError::SingularGrid {
                point: [u, vv],
                distance: dist,
                required: margin,
            });
        }
    }
    let v64 = v.to_f64();
    let phi = |u: f64, vv: f64| -> f64 {
        match chart.web {
            WebType::Cartesian => 1.0,
            WebType::Polar => u * u,
            WebType::Parabolic => u * u + vv * vv,
            WebType::EllipticHyperbolic => u.cosh().powi(2) - vv.cos().powi(2),
            WebType::Trivial => unreachable!(),
        }
    };
    let s = |u: f64, vv: f64| -> f64 {
        let q = chart.to_cartesian([u, vv]);
        phi(u, vv) * v64.eval(&q[0], &q[1])
    };
    let mut max_mixed = 0.0f64;
    for &(u, vv) in grid {
        let mixed = (s(u + h, vv + h) - s(u + h, vv - h) - s(u - h, vv + h) + s(u - h, vv - h))
            / (4.0 * h * h);
        max_mixed = max_mixed.max(mixed.abs());
    }
    Ok(max_mixed)
}

/// Drift of H and F along a Störmer-Verlet trajectory of `H`.
#[derive(Debug, Clone, Copy)]
pub struct DriftReport {
    pub max_dh: f64,
    pub max_df: f64,
    /// The trajectory left f64 range; drifts are reported as +∞.
    pub diverged: bool,
}

/// Integrate Hamilton's equations for the separable `H = ½|p|² + V` with
/// the Störmer-Verlet scheme and report the max drift of H and F from
/// their initial values; O(dt²) when `{H,F} = 0` and the motion stays
/// bounded. Divergence is reported as large drift, never as an error.
pub fn verify_first_integral_numeric(
    h: &NaturalHamiltonian,
    f: &QuadraticIntegral,
    z0: [f64; 4],
    t_final: f64,
    dt: f64,
) -> DriftReport {
    assert!(dt > 0.0 && t_final >= dt, "need dt > 0 and T >= dt");
    let v = h.potential.to_f64();
    let v1 = v.diff(Var::Q1);
    let v2 = v.diff(Var::Q2);
    let kt = f.kt.to_f64().tensor();
    let u = f.potential.to_f64();

    let eval_h = |q: [f64; 2], p: [f64; 2]| -> f64 {
        0.5 * (p[0] * p[0] + p[1] * p[1]) + v.eval(&q[0], &q[1])
    };
    let eval_f = |q: [f64; 2], p: [f64; 2]| -> f64 {
        kt.k11.eval(&q[0], &q[1]) * p[0] * p[0]
            + 2.0 * kt.k12.eval(&q[0], &q[1]) * p[0] * p[1]
            + kt.k22.eval(&q[0], &q[1]) * p[1] * p[1]
            + u.eval(&q[0], &q[1])
    };

    let mut q = [z0[0], z0[1]];
    let mut p = [z0[2], z0[3]];
    let h0 = eval_h(q, p);
    let f0 = eval_f(q, p);
    let steps = (t_final / dt).round() as usize;
    let mut max_dh = 0.0f64;
    let mut max_df = 0.0f64;
    for _ in 0..steps {
        p[0] -= 0.5 * dt * v1.eval(&q[0], &q[1]);
        p[1] -= 0.5 * dt * v2.eval(&q[0], &q[1]);
        q[0] += dt * p[0];
        q[1] += dt * p[1];
        p[0] -= 0.5 * dt * v1.eval(&q[0], &q[1]);
        p[1] -= 0.5 * dt * v2.eval(&q[0], &q[1]);
        let hh = eval_h(q, p);
        let ff = eval_f(q, p);
        if !(hh.is_finite() && ff.is_finite()) {
            return DriftReport {
                max_dh: f64::INFINITY,
                max_df: f64::INFINITY,
                diverged: true,
            };
        }
        max_dh = max_dh.max((hh - h0).abs());
        max_df = max_df.max((ff - f0).abs());
    }
    DriftReport {
        max_dh,
        max_df,
        diverged: false,
    }
}

/// The Yatsun fixtures: Hamiltonian potential and first-integral data.
pub mod yatsun {
    use super::*;
    use crate::parse::parse_poly;

    /// `V = -2(q1² + q2²)² + 4 q1 (q1² + q2²) - 2(q1² + q2²)`.
    pub fn hamiltonian() -> NaturalHamiltonian {
        NaturalHamiltonian {
            potential: parse_poly(
                "-2*(q1^4 + 2*q1^2*q2^2 + q2^4) + 4*(q1^3 + q1*q2^2) - 2*(q1^2 + q2^2)",
            )
            .expect("fixture potential"),
        }
    }

    /// The quadratic integral with β = (3/4, 0, 0, 0, −1/2, 1) and
    /// `U = -3q1⁴ - 2q1²q2² + q2⁴ + 6q1³ + 2q1q2² - 3q1²`.
    pub fn integral() -> QuadraticIntegral {
        use crate::scalar::rat;
        QuadraticIntegral {
            kt: KtParams::new([
                rat(3, 4),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(-1, 2),
                rat(1, 1),
            ]),
            potential: parse_poly("-3*q1^4 - 2*q1^2*q2^2 + q2^4 + 6*q1^3 + 2*q1*q2^2 - 3*q1^2")
                .expect("fixture integral potential"),
        }
    }
}
