//! Killing two-tensors on the Euclidean plane.
//!
//! The crate classifies a valence-two Killing tensor (equivalently, the
//! quadratic part of a first integral of a natural Hamiltonian) under the
//! orientation-preserving isometry group, computes the normalizing isometry
//! by the moving-frame method, and produces the orthogonally-separable
//! coordinate transformation together with symbolic and numeric checks.
//!
//! The exact spine works over arbitrary-precision rationals; the same core
//! is generic over a [`Scalar`] so the numeric verification paths reuse it
//! at `f64`.
//!
//! Pipeline sketch:
//!
//! ```
//! use ktweb::{parse_poly, SymTensorField, classify, canonicalize, WebType};
//!
//! let field = SymTensorField::new(
//!     parse_poly("3/4 + q2^2").unwrap(),
//!     parse_poly("1/2*q2 - q1*q2").unwrap(),
//!     parse_poly("-q1 + q1^2").unwrap(),
//! );
//! let beta = field.params().unwrap();
//! assert_eq!(classify(&beta), WebType::EllipticHyperbolic);
//! let canon = canonicalize(&beta).unwrap();
//! assert!((canon.k().unwrap() - 1.0).abs() < 1e-12);
//! ```

pub mod frames;
pub mod invariants;
pub mod isometry;
pub mod kt;
pub mod mechanics;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod webs;

pub use frames::{
    canonicalize, separable_map, separable_map_text, CanonicalDecomposition, Canonicalization,
    Frame,
};
pub use invariants::{classify, classify_approx, focal_k, invariants, InvariantTriple, WebType};
pub use isometry::{
    act_on_params, generator_matrix, orbit_dimension, pushforward_tensor, Isometry, Rot2,
};
pub use kt::{EigenData, KtParams, SymTensorField};
pub use parse::{parse_poly, ParseError};
pub use poly::{AffineMap, Poly2, Var};
pub use scalar::{rat, Rational, Scalar};
pub use webs::{
    canonical_pair, focal_points, verify_canonical_pair, web_points, web_points_csv, CanonicalPair,
    CurveFamily, FocalPoints, SeparableChart, WebError, WebPoint,
};

/// Bivariate polynomial over exact rationals — the default algebra substrate.
pub type BiPoly = Poly2<Rational>;
/// Bivariate polynomial over `f64`, for the numeric verification paths.
pub type BiPoly64 = Poly2<f64>;
/// Isometry with exact rational translation and rotation entries.
pub type IsometryQ = Isometry<Rational>;
/// Isometry over `f64`.
pub type Isometry64 = Isometry<f64>;
