//! The orientation-preserving isometry group of the plane and its action on
//! Killing-tensor parameters.
//!
//! A group element acts on points by `q̃ = R(p3) q + (p1, p2)`. Rotations are
//! carried as (cos, sin) pairs so rational rotations compose exactly; the
//! angle is recovered on demand.
//!
//! [`act_on_params`] is the induced action on the six parameters, oriented so
//! that it agrees with [`pushforward_tensor`] under the point map (the tensor
//! transformation law is the unambiguous side; the parameter formulas in the
//! literature drift by active/passive conventions).

use num_traits::Zero;

use crate::kt::{KtParams, SymTensorField};
use crate::poly::AffineMap;
use crate::scalar::{Rational, Scalar};

/// Plane rotation stored as a unit (cos, sin) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Rot2<T> {
    cos: T,
    sin: T,
}

impl<T: Scalar> Rot2<T> {
    /// Build from a unit pair; the unit-circle constraint is checked in
    /// debug builds.
    pub fn new(cos: T, sin: T) -> Self {
        let norm = cos.clone() * cos.clone() + sin.clone() * sin.clone();
        debug_assert!(
            (norm.clone() - T::one()).abs().to_f64() <= 1e-9,
            "(cos, sin) not on the unit circle: {norm}"
        );
        Rot2 { cos, sin }
    }

    pub fn identity() -> Self {
        Rot2 {
            cos: T::one(),
            sin: T::zero(),
        }
    }

    pub fn cos(&self) -> &T {
        &self.cos
    }

    pub fn sin(&self) -> &T {
        &self.sin
    }

    pub fn is_identity(&self) -> bool {
        self.cos.is_one() && self.sin.is_zero()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Rot2 {
            cos: self.cos.clone() * other.cos.clone() - self.sin.clone() * other.sin.clone(),
            sin: self.sin.clone() * other.cos.clone() + self.cos.clone() * other.sin.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        Rot2 {
            cos: self.cos.clone(),
            sin: -self.sin.clone(),
        }
    }

    /// Compose with a rotation by +π/2 (exact).
    pub fn quarter_turn(&self) -> Self {
        Rot2 {
            cos: -self.sin.clone(),
            sin: self.cos.clone(),
        }
    }

    /// Rotation from the tangent half-angle parametrization,
    /// `cos = (1 - t²)/(1 + t²)`, `sin = 2t/(1 + t²)`.
    ///
    /// For rational `t` this yields an exactly-unit rational rotation.
    pub fn from_half_tan(t: T) -> Self {
        let one = T::one();
        let t2 = t.clone() * t.clone();
        let den = one.clone() + t2.clone();
        Rot2 {
            cos: (one - t2) / den.clone(),
            sin: (t.clone() + t) / den,
        }
    }

    pub fn apply(&self, x: &T, y: &T) -> (T, T) {
        (
            self.cos.clone() * x.clone() - self.sin.clone() * y.clone(),
            self.sin.clone() * x.clone() + self.cos.clone() * y.clone(),
        )
    }

    /// Rotation angle in radians, in (-π, π].
    pub fn angle(&self) -> f64 {
        self.sin.to_f64().atan2(self.cos.to_f64())
    }

    pub fn to_f64(&self) -> Rot2<f64> {
        Rot2 {
            cos: self.cos.to_f64(),
            sin: self.sin.to_f64(),
        }
    }
}

impl Rot2<f64> {
    pub fn from_angle(theta: f64) -> Self {
        Rot2 {
            cos: theta.cos(),
            sin: theta.sin(),
        }
    }
}

/// Group element (p1, p2, p3): translation pair plus rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry<T> {
    pub t1: T,
    pub t2: T,
    pub rot: Rot2<T>,
}

impl<T: Scalar> Isometry<T> {
    pub fn new(t1: T, t2: T, rot: Rot2<T>) -> Self {
        Isometry { t1, t2, rot }
    }

    pub fn identity() -> Self {
        Isometry {
            t1: T::zero(),
            t2: T::zero(),
            rot: Rot2::identity(),
        }
    }

    pub fn translation(t1: T, t2: T) -> Self {
        Isometry {
            t1,
            t2,
            rot: Rot2::identity(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.t1.is_zero() && self.t2.is_zero() && self.rot.is_identity()
    }

    /// The rotation angle p3 in radians.
    pub fn angle(&self) -> f64 {
        self.rot.angle()
    }

    pub fn apply_point(&self, x: &T, y: &T) -> (T, T) {
        let (rx, ry) = self.rot.apply(x, y);
        (rx + self.t1.clone(), ry + self.t2.clone())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let (tx, ty) = self.apply_point(&other.t1, &other.t2);
        Isometry {
            t1: tx,
            t2: ty,
            rot: self.rot.compose(&other.rot),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.rot.inverse();
        let (tx, ty) = inv.apply(&self.t1, &self.t2);
        Isometry {
            t1: -tx,
            t2: -ty,
            rot: inv,
        }
    }

    /// The point map as an affine substitution.
    pub fn point_map(&self) -> AffineMap<T> {
        AffineMap {
            m: [
                [self.rot.cos.clone(), -self.rot.sin.clone()],
                [self.rot.sin.clone(), self.rot.cos.clone()],
            ],
            t: [self.t1.clone(), self.t2.clone()],
        }
    }

    pub fn to_f64(&self) -> Isometry<f64> {
        Isometry {
            t1: self.t1.to_f64(),
            t2: self.t2.to_f64(),
            rot: self.rot.to_f64(),
        }
    }
}

impl Isometry<f64> {
    pub fn from_angle(t1: f64, t2: f64, theta: f64) -> Self {
        Isometry {
            t1,
            t2,
            rot: Rot2::from_angle(theta),
        }
    }
}

/// Induced action of a group element on Killing-tensor parameters.
///
/// Oriented as the pushforward: `act_on_params(g, b)` equals the parameters
/// of `pushforward_tensor(g, b.tensor())`, exactly for exact scalars. The β̃2
/// line differs from the printed literature formula in the sign of its β3
/// term, which is forced by invariance of the trace.
pub fn act_on_params<T: Scalar>(g: &Isometry<T>, b: &KtParams<T>) -> KtParams<T> {
    let c = g.rot.cos.clone();
    let s = g.rot.sin.clone();
    let (p1, p2) = (g.t1.clone(), g.t2.clone());
    let two = T::from_integer(2);

    let cc = c.clone() * c.clone();
    let ss = s.clone() * s.clone();
    let cs = c.clone() * s.clone();

    let b1 = b.b1.clone() * cc.clone() - two.clone() * b.b3.clone() * cs.clone()
        + b.b2.clone() * ss.clone()
        - two.clone() * p2.clone() * (b.b4.clone() * c.clone() + b.b5.clone() * s.clone())
        + b.b6.clone() * p2.clone() * p2.clone();

    let b2 = b.b1.clone() * ss.clone()
        + two.clone() * b.b3.clone() * cs.clone()
        + b.b2.clone() * cc.clone()
        + two.clone() * p1.clone() * (b.b4.clone() * s.clone() - b.b5.clone() * c.clone())
        + b.b6.clone() * p1.clone() * p1.clone();

    let b3 = (b.b1.clone() - b.b2.clone()) * cs
        + b.b3.clone() * (cc - ss)
        + (p1.clone() * b.b4.clone() + p2.clone() * b.b5.clone()) * c.clone()
        + (p1.clone() * b.b5.clone() - p2.clone() * b.b4.clone()) * s.clone()
        - b.b6.clone() * p1.clone() * p2.clone();

    let b4 = b.b4.clone() * c.clone() + b.b5.clone() * s.clone() - b.b6.clone() * p2;
    let b5 = b.b5.clone() * c - b.b4.clone() * s - b.b6.clone() * p1;
    let b6 = b.b6.clone();

    KtParams {
        b1,
        b2,
        b3,
        b4,
        b5,
        b6,
    }
}

/// Transform the component fields as a contravariant 2-tensor under the
/// point map of `g`: `K̃(q̃) = R K(g⁻¹ q̃) Rᵀ`.
pub fn pushforward_tensor<T: Scalar>(g: &Isometry<T>, s: &SymTensorField<T>) -> SymTensorField<T> {
    let c = g.rot.cos.clone();
    let sn = g.rot.sin.clone();
    let two = T::from_integer(2);
    let cc = c.clone() * c.clone();
    let ss = sn.clone() * sn.clone();
    let cs = c * sn;

    let m11 = &(&s.k11.scale(&cc) - &s.k12.scale(&(two.clone() * cs.clone()))) + &s.k22.scale(&ss);
    let m12 = &(&s.k11.scale(&cs) + &s.k12.scale(&(cc.clone() - ss.clone()))) - &s.k22.scale(&cs);
    let m22 = &(&s.k11.scale(&ss) + &s.k12.scale(&(two * cs.clone()))) + &s.k22.scale(&cc);

    let back = g.inverse().point_map();
    SymTensorField::new(
        m11.compose_affine(&back),
        m12.compose_affine(&back),
        m22.compose_affine(&back),
    )
}

/// Rows are the three Lie-algebra generators of the induced action
/// (the two translations and the rotation), evaluated at `b`; columns are
/// ordered (β1..β6).
///
/// The translation generators are differentials of [`act_on_params`]; the
/// β2-coefficient of the first row is `+2β5` (the printed literature form
/// `−2β5` does not close as an e(2) algebra and breaks orbit-dimension
/// constancy along orbits, both of which are property-tested here).
pub fn generator_matrix(b: &KtParams<Rational>) -> [[Rational; 6]; 3] {
    let z = Rational::zero;
    let two = Rational::from_integer(2.into());
    [
        [z(), &two * &b.b5, -b.b4.clone(), z(), b.b6.clone(), z()],
        [&two * &b.b4, z(), -b.b5.clone(), b.b6.clone(), z(), z()],
        [
            -(&two * &b.b3),
            &two * &b.b3,
            &b.b1 - &b.b2,
            b.b5.clone(),
            -b.b4.clone(),
            z(),
        ],
    ]
}

/// Orbit dimension at `b`: the exact rank of the generator matrix over ℚ.
pub fn orbit_dimension(b: &KtParams<Rational>) -> usize {
    let m = generator_matrix(b);
    let mut rows: Vec<Vec<Rational>> = m.iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..6 {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        let inv = pivot_row[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &inv;
                for (cell, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    let updated = &*cell - &(&factor * p);
                    *cell = updated;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn yatsun() -> KtParams<Rational> {
        KtParams::new([
            rat(3, 4),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(-1, 2),
            rat(1, 1),
        ])
    }

    fn pythagorean_rot(t: Rational) -> Rot2<Rational> {
        Rot2::from_half_tan(t)
    }

    #[test]
    fn apply_point_cases() {
        let id = Isometry::<Rational>::identity();
        assert_eq!(
            id.apply_point(&rat(5, 7), &rat(-1, 3)),
            (rat(5, 7), rat(-1, 3))
        );

        // the Yatsun shift
        let g = Isometry::translation(rat(-1, 2), rat(0, 1));
        let (x, y) = g.apply_point(&rat(2, 1), &rat(3, 1));
        assert_eq!((x, y), (rat(3, 2), rat(3, 1)));

        // quarter rotation sends (1, 0) to (0, 1)
        let q = Isometry::new(rat(0, 1), rat(0, 1), Rot2::identity().quarter_turn());
        assert_eq!(
            q.apply_point(&rat(1, 1), &rat(0, 1)),
            (rat(0, 1), rat(1, 1))
        );
    }

    #[test]
    fn group_axioms_exact() {
        let g = Isometry::new(rat(1, 3), rat(-2, 5), pythagorean_rot(rat(1, 2)));
        let h = Isometry::new(rat(-4, 7), rat(1, 9), pythagorean_rot(rat(-2, 3)));
        let gh = g.compose(&h);
        let x = (rat(3, 11), rat(-5, 2));
        let via_composite = gh.apply_point(&x.0, &x.1);
        let (hx, hy) = h.apply_point(&x.0, &x.1);
        let via_steps = g.apply_point(&hx, &hy);
        assert_eq!(via_composite, via_steps);

        assert!(g.compose(&g.inverse()).is_identity());
        assert!(g.inverse().compose(&g).is_identity());
        assert_eq!(g.compose(&Isometry::identity()), g);

        let t = Isometry::translation(rat(2, 1), rat(-3, 1));
        assert_eq!(t.inverse(), Isometry::translation(rat(-2, 1), rat(3, 1)));
    }

    #[test]
    fn yatsun_shift_normalizes() {
        let g = Isometry::translation(rat(-1, 2), rat(0, 1));
        let b = act_on_params(&g, &yatsun());
        assert_eq!(
            b,
            KtParams::new([
                rat(3, 4),
                rat(-1, 4),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(1, 1)
            ])
        );
    }

    #[test]
    fn identity_action_is_identity() {
        let b = yatsun();
        assert_eq!(act_on_params(&Isometry::identity(), &b), b);
        assert_eq!(
            pushforward_tensor(&Isometry::identity(), &b.tensor()),
            b.tensor()
        );
    }

    #[test]
    fn metric_is_invariant() {
        let g = Isometry::new(rat(2, 3), rat(-1, 7), pythagorean_rot(rat(3, 4)));
        let metric = KtParams::new([
            rat(1, 1),
            rat(1, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
        ]);
        assert_eq!(act_on_params(&g, &metric), metric);
        assert_eq!(pushforward_tensor(&g, &metric.tensor()), metric.tensor());
    }

    #[test]
    fn action_matches_pushforward() {
        let g = Isometry::new(rat(1, 2), rat(-5, 3), pythagorean_rot(rat(2, 5)));
        let b = yatsun();
        let via_params = act_on_params(&g, &b).tensor();
        let via_tensor = pushforward_tensor(&g, &b.tensor());
        assert_eq!(via_params, via_tensor);
    }

    #[test]
    fn b6_is_invariant() {
        let g = Isometry::new(rat(7, 2), rat(1, 5), pythagorean_rot(rat(-5, 12)));
        let b = KtParams::new([
            rat(1, 2),
            rat(3, 1),
            rat(-2, 7),
            rat(4, 3),
            rat(0, 1),
            rat(-6, 5),
        ]);
        assert_eq!(act_on_params(&g, &b).b6, b.b6);
    }

    #[test]
    fn generator_rows() {
        let cart = KtParams::new([
            rat(1, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
        ]);
        let m = generator_matrix(&cart);
        assert!(m[0].iter().all(|x| x.is_zero()));
        assert!(m[1].iter().all(|x| x.is_zero()));
        assert_eq!(m[2][2], rat(1, 1));
        assert!(m[2].iter().enumerate().all(|(i, x)| i == 2 || x.is_zero()));

        let polar = KtParams::new([
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(1, 1),
        ]);
        let m = generator_matrix(&polar);
        assert_eq!(m[0][4], rat(1, 1));
        assert_eq!(m[1][3], rat(1, 1));
        assert!(m[2].iter().all(|x| x.is_zero()));

        let trivial = KtParams::new([
            rat(5, 2),
            rat(5, 2),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
        ]);
        assert!(generator_matrix(&trivial)
            .iter()
            .flatten()
            .all(|x| x.is_zero()));
    }

    #[test]
    fn orbit_dimensions() {
        let cart = KtParams::new([
            rat(1, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
        ]);
        assert_eq!(orbit_dimension(&cart), 1);
        let polar = KtParams::new([
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(1, 1),
        ]);
        assert_eq!(orbit_dimension(&polar), 2);
        assert_eq!(orbit_dimension(&yatsun()), 3);
        let trivial = KtParams::new([
            rat(1, 1),
            rat(1, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
        ]);
        assert_eq!(orbit_dimension(&trivial), 0);
    }

    fn random_rat(rng: &mut rand_chacha::ChaCha8Rng) -> Rational {
        use rand::Rng;
        rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
    }

    fn random_isometry(rng: &mut rand_chacha::ChaCha8Rng) -> Isometry<Rational> {
        Isometry::new(
            random_rat(rng),
            random_rat(rng),
            pythagorean_rot(random_rat(rng)),
        )
    }

    #[test]
    fn random_compose_inverse_roundtrips() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let g = random_isometry(&mut rng);
            let h = random_isometry(&mut rng);
            let gh = g.compose(&h);
            for _ in 0..10 {
                let x = (random_rat(&mut rng), random_rat(&mut rng));
                let (hx, hy) = h.apply_point(&x.0, &x.1);
                assert_eq!(gh.apply_point(&x.0, &x.1), g.apply_point(&hx, &hy));
                let inv = g.inverse();
                let (gx, gy) = g.apply_point(&x.0, &x.1);
                assert_eq!(inv.apply_point(&gx, &gy), x);
            }
        }
    }

    #[test]
    fn action_composes_and_preserves_orbit_dimension() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let g = random_isometry(&mut rng);
            let h = random_isometry(&mut rng);
            let b = KtParams::new(std::array::from_fn(|_| random_rat(&mut rng)));
            let stepwise = act_on_params(&g, &act_on_params(&h, &b));
            let composite = act_on_params(&g.compose(&h), &b);
            assert_eq!(stepwise, composite);
            assert_eq!(orbit_dimension(&act_on_params(&g, &b)), orbit_dimension(&b));
        }
    }

    #[test]
    fn float_action_matches_pushforward_closely() {
        // general angles: agreement to rounding, coefficient by coefficient
        let g = Isometry::from_angle(0.37, -1.21, 0.83);
        let b = yatsun().to_f64();
        let via_params = act_on_params(&g, &b).tensor();
        let via_tensor = pushforward_tensor(&g, &b.tensor());
        for (p, t) in [
            (&via_params.k11, &via_tensor.k11),
            (&via_params.k12, &via_tensor.k12),
            (&via_params.k22, &via_tensor.k22),
        ] {
            let diff = p - t;
            for (_, c) in diff.terms() {
                assert!(c.abs() <= 1e-12, "coefficient gap {c}");
            }
        }
    }
}
