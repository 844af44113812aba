//! The four separable coordinate webs: forward/inverse chart transforms,
//! canonical metric/Killing-tensor pairs in separable coordinates, a
//! finite-difference Killing-equation verifier, the focal-point oracle, and
//! plot data for the confocal families.
//!
//! Chart transforms to Cartesian coordinates (before the frame):
//!
//! ```text
//! C:  q1 = u,                q2 = v
//! P:  q1 = u cos v,          q2 = u sin v          (u > 0)
//! PB: q1 = (u² - v²)/2,      q2 = u v              (u ≥ 0)
//! EH: q1 = k cosh u cos v,   q2 = k sinh u sin v   (u ≥ 0, v ∈ [0, 2π))
//! ```

use std::error::Error;
use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::invariants::WebType;
use crate::isometry::Isometry;
use crate::kt::SymTensorField;
use crate::poly::Var;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum WebError {
    /// Inverse transform evaluated at a focal or singular point of the web.
    SingularPoint {
        point: [f64; 2],
    },
    /// A grid point sits closer than the required margin to a singularity.
    SingularGrid {
        point: [f64; 2],
        distance: f64,
        required: f64,
    },
    DomainError(&'static str),
}

impl fmt::Display for WebError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WebError::SingularPoint { point } => {
                write!(
                    f,
                    "singular point of the web at ({}, {})",
                    point[0], point[1]
                )
            }
            WebError::SingularGrid {
                point,
                distance,
                required,
            } => write!(
                f,
                "grid point ({}, {}) is {distance} from a singularity (margin {required})",
                point[0], point[1]
            ),
            WebError::DomainError(msg) => write!(f, "{msg}"),
        }
    }
}

impl Error for WebError {}

/// A separable chart: web type, focal parameter (EH only), and the
/// normalizing frame mapping original coordinates to canonical ones.
#[derive(Debug, Clone)]
pub struct SeparableChart {
    pub web: WebType,
    k: f64,
    pub frame: Isometry<f64>,
}

impl SeparableChart {
    /// `k` must be supplied (positive) iff the web is elliptic-hyperbolic.
    pub fn new(web: WebType, k: Option<f64>, frame: Isometry<f64>) -> Self {
        debug_assert!(web != WebType::Trivial, "trivial tensors generate no chart");
        debug_assert_eq!(web == WebType::EllipticHyperbolic, k.is_some());
        let k = k.unwrap_or(1.0);
        debug_assert!(k > 0.0);
        SeparableChart { web, k, frame }
    }

    /// Chart with identity frame (tensor already canonical).
    pub fn canonical(web: WebType, k: Option<f64>) -> Self {
        Self::new(web, k, Isometry::identity())
    }

    pub fn k(&self) -> Option<f64> {
        (self.web == WebType::EllipticHyperbolic).then_some(self.k)
    }

    /// Chart coordinates to original Cartesian coordinates.
    pub fn to_cartesian(&self, uv: [f64; 2]) -> [f64; 2] {
        let [u, v] = uv;
        let w = match self.web {
            WebType::Cartesian => [u, v],
            WebType::Polar => [u * v.cos(), u * v.sin()],
            WebType::Parabolic => [(u * u - v * v) / 2.0, u * v],
            WebType::EllipticHyperbolic => {
                [self.k * u.cosh() * v.cos(), self.k * u.sinh() * v.sin()]
            }
            WebType::Trivial => unreachable!(),
        };
        let inv = self.frame.inverse();
        let (x, y) = inv.apply_point(&w[0], &w[1]);
        [x, y]
    }

    /// Principal-branch inverse of [`Self::to_cartesian`].
    pub fn from_cartesian(&self, q: [f64; 2]) -> Result<[f64; 2], WebError> {
        let (x, y) = self.frame.apply_point(&q[0], &q[1]);
        match self.web {
            WebType::Cartesian => Ok([x, y]),
            WebType::Polar => {
                let r = x.hypot(y);
                if r == 0.0 {
                    return Err(WebError::SingularPoint { point: q });
                }
                Ok([r, y.atan2(x).rem_euclid(TAU)])
            }
            WebType::Parabolic => {
                let z = Complex64::new(2.0 * x, 2.0 * y);
                if z.norm() == 0.0 {
                    return Err(WebError::SingularPoint { point: q });
                }
                let w = z.sqrt();
                Ok([w.re, w.im])
            }
            WebType::EllipticHyperbolic => {
                let z = Complex64::new(x / self.k, y / self.k);
                if (z - 1.0).norm() < 1e-13 || (z + 1.0).norm() < 1e-13 {
                    return Err(WebError::SingularPoint { point: q });
                }
                let w = z.acosh();
                let (u, vi) = if w.re < 0.0 {
                    (-w.re, -w.im)
                } else {
                    (w.re, w.im)
                };
                Ok([u, vi.rem_euclid(TAU)])
            }
            WebType::Trivial => unreachable!(),
        }
    }

    /// Distance from a chart point to the web's coordinate singularities.
    pub fn singular_distance(&self, uv: [f64; 2]) -> f64 {
        singular_distance(self.web, uv)
    }
}

fn singular_distance(web: WebType, uv: [f64; 2]) -> f64 {
    let [u, v] = uv;
    match web {
        WebType::Cartesian => f64::INFINITY,
        WebType::Polar => u.abs(),
        WebType::Parabolic => u.hypot(v),
        WebType::EllipticHyperbolic => {
            // singular where cosh²u = cos²v, i.e. at (0, mπ)
            let m = (v / PI).round();
            let d0 = u.hypot(v - m * PI);
            let d1 = u.hypot(v - (m - 1.0) * PI);
            let d2 = u.hypot(v - (m + 1.0) * PI);
            d0.min(d1).min(d2)
        }
        WebType::Trivial => 0.0,
    }
}

/// Closed-form canonical pair in separable coordinates: the contravariant
/// metric and canonical Killing tensor, both diagonal.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalPair {
    pub web: WebType,
    k: f64,
}

/// Evaluators for the canonical metric/Killing-tensor pair of a web.
pub fn canonical_pair(web: WebType, k: Option<f64>) -> Result<CanonicalPair, WebError> {
    if web == WebType::Trivial {
        return Err(WebError::DomainError(
            "trivial tensors have no canonical pair",
        ));
    }
    if (web == WebType::EllipticHyperbolic) != k.is_some() {
        return Err(WebError::DomainError(
            "k must be supplied exactly for the elliptic-hyperbolic web",
        ));
    }
    Ok(CanonicalPair {
        web,
        k: k.unwrap_or(1.0),
    })
}

impl CanonicalPair {
    /// Diagonal entries (g^uu, g^vv) of the contravariant metric.
    pub fn metric_contravariant(&self, u: f64, v: f64) -> [f64; 2] {
        match self.web {
            WebType::Cartesian => [1.0, 1.0],
            WebType::Polar => [1.0, 1.0 / (u * u)],
            WebType::Parabolic => {
                let d = u * u + v * v;
                [1.0 / d, 1.0 / d]
            }
            WebType::EllipticHyperbolic => {
                let d = self.k * self.k * (u.cosh().powi(2) - v.cos().powi(2));
                [1.0 / d, 1.0 / d]
            }
            WebType::Trivial => unreachable!(),
        }
    }

    /// Diagonal entries (K^uu, K^vv) of the canonical Killing tensor.
    pub fn kt_contravariant(&self, u: f64, v: f64) -> [f64; 2] {
        match self.web {
            WebType::Cartesian => [1.0, 0.0],
            WebType::Polar => [0.0, 1.0],
            WebType::Parabolic => {
                let d = u * u + v * v;
                [v * v / d, -(u * u) / d]
            }
            WebType::EllipticHyperbolic => {
                let d = self.k * self.k * (u.cosh().powi(2) - v.cos().powi(2));
                [v.cos().powi(2) / d, u.cosh().powi(2) / d]
            }
            WebType::Trivial => unreachable!(),
        }
    }

    pub fn metric_covariant(&self, u: f64, v: f64) -> [f64; 2] {
        let g = self.metric_contravariant(u, v);
        [1.0 / g[0], 1.0 / g[1]]
    }

    pub fn kt_covariant(&self, u: f64, v: f64) -> [f64; 2] {
        let g = self.metric_covariant(u, v);
        let kt = self.kt_contravariant(u, v);
        [g[0] * g[0] * kt[0], g[1] * g[1] * kt[1]]
    }
}

/// Verify the canonical pair numerically: Christoffel symbols of the
/// covariant metric by central differences (step `h`) and the covariant
/// Killing residual `K_(ab;c)` at every grid point. Returns the max
/// absolute residual, expected O(h²).
///
/// Fails with `SingularGrid` if any point is within `10·h` of a coordinate
/// singularity.
pub fn verify_canonical_pair(
    web: WebType,
    k: Option<f64>,
    grid: &[(f64, f64)],
    h: f64,
) -> Result<f64, WebError> {
    let pair = canonical_pair(web, k)?;
    let margin = 10.0 * h;
    for &(u, v) in grid {
        let dist = singular_distance(web, [u, v]);
        if dist < margin {
            return Err(WebError::SingularGrid {
                point: [u, v],
                distance: dist,
                required: margin,
            });
        }
    }
    let mut max_res = 0.0f64;
    for &(u, v) in grid {
        // first derivatives of the diagonal covariant metric and KT
        let dg = [
            central_diff(|uu, vv| pair.metric_covariant(uu, vv), u, v, h, 0),
            central_diff(|uu, vv| pair.metric_covariant(uu, vv), u, v, h, 1),
        ];
        let dk = [
            central_diff(|uu, vv| pair.kt_covariant(uu, vv), u, v, h, 0),
            central_diff(|uu, vv| pair.kt_covariant(uu, vv), u, v, h, 1),
        ];
        let g = pair.metric_covariant(u, v);
        let kt = pair.kt_covariant(u, v);
        // Γ^a_bc = ½ g^aa (∂_b g_ac + ∂_c g_ba - ∂_a g_bc)  (diagonal metric)
        let mut gam = [[[0.0f64; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let term1 = if a == c { dg[b][a] } else { 0.0 };
                    let term2 = if a == b { dg[c][a] } else { 0.0 };
                    let term3 = if b == c { dg[a][b] } else { 0.0 };
                    gam[a][b][c] = 0.5 / g[a] * (term1 + term2 - term3);
                }
            }
        }
        // K_ab;c = ∂_c K_ab - Γ^d_ca K_db - Γ^d_cb K_ad  (diagonal K)
        let covd = |a: usize, b: usize, c: usize| -> f64 {
            let lead = if a == b { dk[c][a] } else { 0.0 };
            lead - gam[b][c][a] * kt[b] - gam[a][c][b] * kt[a]
        };
        for (a, b, c) in [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)] {
            let res = covd(a, b, c) + covd(b, c, a) + covd(c, a, b);
            max_res = max_res.max(res.abs());
        }
    }
    Ok(max_res)
}

fn central_diff(f: impl Fn(f64, f64) -> [f64; 2], u: f64, v: f64, h: f64, dir: usize) -> [f64; 2] {
    let (plus, minus) = if dir == 0 {
        (f(u + h, v), f(u - h, v))
    } else {
        (f(u, v + h), f(u, v - h))
    };
    [
        (plus[0] - minus[0]) / (2.0 * h),
        (plus[1] - minus[1]) / (2.0 * h),
    ]
}

/// Real zeros of the eigenvalue discriminant inside a search box.
#[derive(Debug, Clone, PartialEq)]
pub enum FocalPoints {
    /// The discriminant vanishes identically (multiples of the metric).
    DegenerateEverywhere,
    Points(Vec<[f64; 2]>),
}

/// Find the focal points of a tensor field: grid scan for local minima of
/// the discriminant `D = (K11-K22)² + 4 K12²` followed by Newton refinement
/// on `∇D = 0`, keeping converged points with `D ≈ 0`.
pub fn focal_points<T: Scalar>(
    s: &SymTensorField<T>,
    bbox: [[f64; 2]; 2],
    n: usize,
) -> FocalPoints {
    let d = s.eigen_discriminant();
    if d.is_zero() {
        return FocalPoints::DegenerateEverywhere;
    }
    let d64 = d.to_f64();
    let d1 = d64.diff(Var::Q1);
    let d2 = d64.diff(Var::Q2);
    let h11 = d1.diff(Var::Q1);
    let h12 = d1.diff(Var::Q2);
    let h22 = d2.diff(Var::Q2);

    let [xr, yr] = bbox;
    let n = n.max(2);
    let step =
        |range: [f64; 2], i: usize| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64;
    let mut values = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = d64.eval(&step(xr, i), &step(yr, j));
        }
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));

    let mut found: Vec<[f64; 2]> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let val = values[i * n + j];
            let neighbors = [
                (i.wrapping_sub(1), j),
                (i + 1, j),
                (i, j.wrapping_sub(1)),
                (i, j + 1),
            ];
            let is_min = neighbors
                .iter()
                .all(|&(a, b)| a >= n || b >= n || values[a * n + b] >= val);
            if !is_min {
                continue;
            }
            // Newton on the gradient system
            let mut x = step(xr, i);
            let mut y = step(yr, j);
            let mut converged = false;
            for _ in 0..80 {
                let gx = d1.eval(&x, &y);
                let gy = d2.eval(&x, &y);
                let a = h11.eval(&x, &y);
                let b = h12.eval(&x, &y);
                let c = h22.eval(&x, &y);
                let det = a * c - b * b;
                if det.abs() < 1e-300 {
                    break;
                }
                let dx = (c * gx - b * gy) / det;
                let dy = (a * gy - b * gx) / det;
                x -= dx;
                y -= dy;
                if dx.hypot(dy) <= 1e-13 * (1.0 + x.hypot(y)) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                continue;
            }
            let slack = 1e-6 * (1.0 + (xr[1] - xr[0]).abs().max((yr[1] - yr[0]).abs()));
            let inside = x >= xr[0] - slack
                && x <= xr[1] + slack
                && y >= yr[0] - slack
                && y <= yr[1] + slack;
            if inside && d64.eval(&x, &y) <= 1e-12 * scale {
                found.push([x, y]);
            }
        }
    }
    found.sort_by(|p, q| p.partial_cmp(q).expect("finite focal points"));
    found.dedup_by(|p, q| (p[0] - q[0]).hypot(p[1] - q[1]) < 1e-6);
    FocalPoints::Points(found)
}

/// Which confocal family a sampled curve belongs to: fixed-u or fixed-v.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    U,
    V,
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveFamily::U => write!(f, "u"),
            CurveFamily::V => write!(f, "v"),
        }
    }
}

/// One sampled point of a coordinate curve, in original coordinates.
#[derive(Debug, Clone)]
pub struct WebPoint {
    pub family: CurveFamily,
    pub curve_index: usize,
    pub u: f64,
    pub v: f64,
    pub q1: f64,
    pub q2: f64,
}

/// Sample the two confocal families of a chart: `n_curves` fixed-u curves
/// (each with `n_samples` points along v) and vice versa, mapped through the
/// chart to original Cartesian coordinates.
pub fn web_points(chart: &SeparableChart, n_curves: usize, n_samples: usize) -> Vec<WebPoint> {
    let lin = |a: f64, b: f64, count: usize, i: usize| {
        if count <= 1 {
            a
        } else {
            a + (b - a) * i as f64 / (count - 1) as f64
        }
    };
    // per-web parameter ranges; positive-u families start off the axis
    let u_curve_value = |i: usize| match chart.web {
        WebType::Cartesian => lin(-2.0, 2.0, n_curves, i),
        WebType::Polar | WebType::Parabolic => 2.0 * (i + 1) as f64 / n_curves as f64,
        WebType::EllipticHyperbolic => 1.5 * (i + 1) as f64 / n_curves as f64,
        WebType::Trivial => unreachable!(),
    };
    let v_curve_value = |i: usize| match chart.web {
        WebType::Cartesian | WebType::Parabolic => lin(-2.0, 2.0, n_curves, i),
        WebType::Polar | WebType::EllipticHyperbolic => TAU * i as f64 / n_curves as f64,
        WebType::Trivial => unreachable!(),
    };
    let v_sample = |s: usize| match chart.web {
        WebType::Cartesian | WebType::Parabolic => lin(-2.0, 2.0, n_samples, s),
        WebType::Polar | WebType::EllipticHyperbolic => TAU * s as f64 / n_samples as f64,
        WebType::Trivial => unreachable!(),
    };
    let u_sample = |s: usize| match chart.web {
        WebType::Cartesian => lin(-2.0, 2.0, n_samples, s),
        WebType::Polar => 2.0 * (s + 1) as f64 / n_samples as f64,
        WebType::Parabolic => lin(0.0, 2.0, n_samples, s),
        WebType::EllipticHyperbolic => lin(0.0, 1.5, n_samples, s),
        WebType::Trivial => unreachable!(),
    };

    let mut out = Vec::with_capacity(2 * n_curves * n_samples);
    for i in 0..n_curves {
        let u = u_curve_value(i);
        for s in 0..n_samples {
            let v = v_sample(s);
            let [q1, q2] = chart.to_cartesian([u, v]);
            out.push(WebPoint {
                family: CurveFamily::U,
                curve_index: i,
                u,
                v,
                q1,
                q2,
            });
        }
    }
    for i in 0..n_curves {
        let v = v_curve_value(i);
        for s in 0..n_samples {
            let u = u_sample(s);
            let [q1, q2] = chart.to_cartesian([u, v]);
            out.push(WebPoint {
                family: CurveFamily::V,
                curve_index: i,
                u,
                v,
                q1,
                q2,
            });
        }
    }
    out
}

/// CSV rendering of [`web_points`] output: columns
/// `family,curve_index,u,v,q1,q2`.
pub fn web_points_csv(points: &[WebPoint]) -> String {
    let mut out = String::from("family,curve_index,u,v,q1,q2\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.family, p.curve_index, p.u, p.v, p.q1, p.q2
        ));
    }
    out
}
