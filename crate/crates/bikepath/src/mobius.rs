//! Real projective line and Möbius (fractional linear) maps.
//!
//! Parameters live on the projective line as homogeneous pairs `[p : q]`,
//! which keeps every construction division-free and therefore exact in
//! rational mode. Equality is always the cross-multiplication test
//! `p1*q2 == p2*q1`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Homogeneous coordinate `[p : q]` on the real projective line;
/// `[1 : 0]` is the point at infinity.
#[derive(Clone, Debug)]
pub struct ProjectiveParam<S> {
    p: S,
    q: S,
}

impl<S: Scalar> ProjectiveParam<S> {
    pub fn new(p: S, q: S) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::InvalidInput(
                "projective parameter [0 : 0] is undefined".into(),
            ));
        }
        Ok(ProjectiveParam { p, q })
    }

    pub(crate) fn new_unchecked(p: S, q: S) -> Self {
        debug_assert!(!(p.is_zero() && q.is_zero()));
        ProjectiveParam { p, q }
    }

    /// The finite parameter `t`, as `[t : 1]`.
    pub fn finite(t: S) -> Self {
        ProjectiveParam { p: t, q: S::one() }
    }

    pub fn infinity() -> Self {
        ProjectiveParam {
            p: S::one(),
            q: S::zero(),
        }
    }

    pub fn from_int(t: i64) -> Self {
        Self::finite(S::from_int(t))
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    pub fn p(&self) -> &S {
        &self.p
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    /// Value as a float; infinity maps to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        if self.q.is_zero() {
            f64::INFINITY
        } else {
            self.p.to_f64() / self.q.to_f64()
        }
    }

    /// Mode-aware equality: exact cross-multiplication in rational mode,
    /// relative comparison of the cross products in float mode.
    pub fn eq_within(&self, other: &Self, tol: f64) -> bool {
        let lhs = self.p.clone() * other.q.clone();
        let rhs = other.p.clone() * self.q.clone();
        let scale_sq = (self.p.clone() * self.p.clone() + self.q.clone() * self.q.clone())
            * (other.p.clone() * other.p.clone() + other.q.clone() * other.q.clone());
        (lhs - rhs).is_zero_vs_scale_sq(&scale_sq, tol)
    }
}

impl<S: Scalar> PartialEq for ProjectiveParam<S> {
    fn eq(&self, other: &Self) -> bool {
        self.p.clone() * other.q.clone() == other.p.clone() * self.q.clone()
    }
}

/// Möbius map `[p : q] ↦ [a p + b q : c p + d q]`, stored as the matrix
/// `[[a, b], [c, d]]` up to scale. The determinant is nonzero by
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusMap<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> MobiusMap<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self> {
        let map = MobiusMap { a, b, c, d };
        if map.det().is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: S::one(),
            b: S::zero(),
            c: S::zero(),
            d: S::one(),
        }
    }

    pub fn det(&self) -> S {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> S {
        self.a.clone() + self.d.clone()
    }

    /// `trace^2 / det`; invariant under conjugation and rescaling.
    pub fn conjugacy_invariant(&self) -> S {
        let t = self.trace();
        t.clone() * t / self.det()
    }

    /// True when the map is a scalar multiple of the identity, i.e. fixes
    /// every point.
    pub fn is_projective_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn apply(&self, t: &ProjectiveParam<S>) -> ProjectiveParam<S> {
        ProjectiveParam::new_unchecked(
            self.a.clone() * t.p().clone() + self.b.clone() * t.q().clone(),
            self.c.clone() * t.p().clone() + self.d.clone() * t.q().clone(),
        )
    }

    /// Matrix product `self * other`; applies `other` first:
    /// `compose(M, N).apply(t) == M.apply(N.apply(t))`.
    pub fn compose(&self, other: &Self) -> Self {
        MobiusMap {
            a: self.a.clone() * other.a.clone() + self.b.clone() * other.c.clone(),
            b: self.a.clone() * other.b.clone() + self.b.clone() * other.d.clone(),
            c: self.c.clone() * other.a.clone() + self.d.clone() * other.c.clone(),
            d: self.c.clone() * other.b.clone() + self.d.clone() * other.d.clone(),
        }
    }

    /// Adjugate; the inverse up to the (nonzero) determinant factor, which a
    /// projective map may drop.
    pub fn adjugate(&self) -> Self {
        MobiusMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// The unique map (up to scale) sending `t_i` to `u_i` for three pairwise
    /// distinct parameters with pairwise distinct images. Built by composing
    /// the division-free maps that send each triple to `(0, 1, ∞)`, so the
    /// result is exact in rational mode.
    pub fn fit(pairs: &[(ProjectiveParam<S>, ProjectiveParam<S>); 3]) -> Result<Self> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if pairs[i].0 == pairs[j].0 {
                    return Err(Error::DegenerateFit(format!(
                        "source parameters {i} and {j} coincide"
                    )));
                }
                if pairs[i].1 == pairs[j].1 {
                    return Err(Error::DegenerateFit(format!(
                        "image parameters {i} and {j} coincide"
                    )));
                }
            }
        }
        let to_standard = |z1: &ProjectiveParam<S>,
                           z2: &ProjectiveParam<S>,
                           z3: &ProjectiveParam<S>| {
            // Sends (z1, z2, z3) to (0, 1, ∞): the matrix form of
            // t ↦ ((t - z1)(z2 - z3)) / ((t - z3)(z2 - z1)).
            let k1 = z2.p().clone() * z3.q().clone() - z3.p().clone() * z2.q().clone();
            let k2 = z2.p().clone() * z1.q().clone() - z1.p().clone() * z2.q().clone();
            MobiusMap {
                a: z1.q().clone() * k1.clone(),
                b: -(z1.p().clone() * k1),
                c: z3.q().clone() * k2.clone(),
                d: -(z3.p().clone() * k2),
            }
        };
        let m_src = to_standard(&pairs[0].0, &pairs[1].0, &pairs[2].0);
        let m_img = to_standard(&pairs[0].1, &pairs[1].1, &pairs[2].1);
        let map = m_img.adjugate().compose(&m_src);
        if map.det().is_zero() {
            return Err(Error::DegenerateFit("fitted map is singular".into()));
        }
        Ok(map)
    }

    /// Entries divided by the largest-magnitude entry, then converted to
    /// floats. Keeps huge rational matrices representable.
    pub fn normalized_f64(&self) -> [[f64; 2]; 2] {
        let entries = [&self.a, &self.b, &self.c, &self.d];
        let mut largest = self.a.abs();
        for e in &entries[1..] {
            let mag = e.abs();
            if mag > largest {
                largest = mag;
            }
        }
        let norm = |e: &S| (e.clone() / largest.clone()).to_f64();
        [[norm(&self.a), norm(&self.b)], [norm(&self.c), norm(&self.d)]]
    }

    /// Fixed points, i.e. real projective solutions of
    /// `c t^2 + (d - a) t - b = 0`. Root values require a square root and are
    /// returned as floats; the quadratic coefficients and the discriminant
    /// stay in the scalar field, and the root count is decided from the exact
    /// discriminant sign in rational mode.
    pub fn fixed_points(&self) -> FixedPoints<S> {
        let coeff_a = self.c.clone();
        let coeff_b = self.d.clone() - self.a.clone();
        let coeff_c = -self.b.clone();
        // (d - a)^2 + 4 b c == trace^2 - 4 det
        let trace = self.trace();
        let discriminant = trace.clone() * trace - S::from_int(4) * self.det();

        if self.is_projective_identity() {
            return FixedPoints {
                all_fixed: true,
                quadratic: (coeff_a, coeff_b, coeff_c),
                discriminant,
                points: Vec::new(),
            };
        }

        let m = self.normalized_f64();
        let a = m[1][0];
        let b = m[1][1] - m[0][0];
        let c = -m[0][1];
        let mut points = Vec::new();
        if coeff_a.is_zero() {
            // Degree drops: ∞ is always fixed.
            points.push(ProjectiveParam::<f64>::infinity());
            if !coeff_b.is_zero() {
                points.push(ProjectiveParam::new_unchecked(-c, b));
            }
        } else {
            let disc_sign = if discriminant.is_zero() {
                0
            } else if discriminant > S::zero() {
                1
            } else {
                -1
            };
            if disc_sign == 0 {
                points.push(ProjectiveParam::new_unchecked(-b, 2.0 * a));
            } else if disc_sign > 0 {
                let s = (b * b - 4.0 * a * c).max(0.0).sqrt();
                points.push(ProjectiveParam::new_unchecked(-b + s, 2.0 * a));
                points.push(ProjectiveParam::new_unchecked(-b - s, 2.0 * a));
            }
        }
        FixedPoints {
            all_fixed: false,
            quadratic: (coeff_a, coeff_b, coeff_c),
            discriminant,
            points,
        }
    }

    pub fn to_f64(&self) -> MobiusMap<f64> {
        MobiusMap {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
            d: self.d.to_f64(),
        }
    }
}

/// Result of a fixed-point computation.
#[derive(Clone, Debug)]
pub struct FixedPoints<S> {
    /// The map is projectively the identity: every parameter is fixed.
    pub all_fixed: bool,
    /// Coefficients `(A, B, C)` of the fixed-point equation
    /// `A t^2 + B t + C = 0` in the scalar field.
    pub quadratic: (S, S, S),
    /// `trace^2 - 4 det`; its sign separates two, one, or no real fixed
    /// points.
    pub discriminant: S,
    /// Real fixed points as float parameters (empty when `all_fixed`).
    pub points: Vec<ProjectiveParam<f64>>,
}

impl<S: Scalar> FixedPoints<S> {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn map(a: i64, b: i64, c: i64, d: i64) -> MobiusMap<Rational> {
        MobiusMap::new(r(a, 1), r(b, 1), r(c, 1), r(d, 1)).unwrap()
    }

    fn fin(t: i64) -> ProjectiveParam<Rational> {
        ProjectiveParam::from_int(t)
    }

    #[test]
    fn singular_matrix_is_rejected() {
        assert!(matches!(
            MobiusMap::new(r(1, 1), r(2, 1), r(2, 1), r(4, 1)),
            Err(Error::SingularMap)
        ));
    }

    #[test]
    fn apply_examples() {
        let id = MobiusMap::<Rational>::identity();
        assert_eq!(id.apply(&fin(3)), fin(3));

        let inv = map(0, 1, 1, 0); // t ↦ 1/t
        assert_eq!(inv.apply(&fin(5)), ProjectiveParam::new(r(1, 1), r(5, 1)).unwrap());

        let double = map(2, 0, 0, 1); // t ↦ 2t fixes ∞
        assert_eq!(double.apply(&ProjectiveParam::infinity()), ProjectiveParam::infinity());
    }

    #[test]
    fn projective_equality_is_scale_free() {
        let a = ProjectiveParam::new(r(2, 1), r(4, 1)).unwrap();
        let b = ProjectiveParam::new(r(1, 1), r(2, 1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, fin(1));
    }

    #[test]
    fn fit_identity_and_inversion() {
        let id = MobiusMap::fit(&[
            (fin(0), fin(0)),
            (fin(1), fin(1)),
            (ProjectiveParam::infinity(), ProjectiveParam::infinity()),
        ])
        .unwrap();
        assert!(id.is_projective_identity());

        let inv = MobiusMap::fit(&[
            (fin(0), ProjectiveParam::infinity()),
            (fin(1), fin(1)),
            (ProjectiveParam::infinity(), fin(0)),
        ])
        .unwrap();
        // Proportional to [[0,1],[1,0]]: applies as t ↦ 1/t.
        assert_eq!(inv.apply(&fin(7)), ProjectiveParam::new(r(1, 1), r(7, 1)).unwrap());
        assert!(inv.a.is_zero() && inv.d.is_zero());
    }

    #[test]
    fn fit_translation_predicts_fourth_point() {
        let shift = MobiusMap::fit(&[
            (fin(0), fin(1)),
            (fin(1), fin(2)),
            (ProjectiveParam::infinity(), ProjectiveParam::infinity()),
        ])
        .unwrap();
        // Held-out fourth point: 2 ↦ 3.
        assert_eq!(shift.apply(&fin(2)), fin(3));
    }

    #[test]
    fn fit_rejects_coincident_points() {
        let result = MobiusMap::fit(&[(fin(0), fin(1)), (fin(0), fin(2)), (fin(1), fin(3))]);
        assert!(matches!(result, Err(Error::DegenerateFit(_))));
        let result = MobiusMap::fit(&[(fin(0), fin(1)), (fin(1), fin(1)), (fin(2), fin(3))]);
        assert!(matches!(result, Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn fixed_points_hyperbolic_parabolic_elliptic() {
        // t ↦ 2t fixes 0 and ∞.
        let fps = map(2, 0, 0, 1).fixed_points();
        assert_eq!(fps.count(), 2);
        assert!(fps.discriminant > Rational::new(0, 1));
        assert!(fps.points.iter().any(|t| t.is_infinity()));
        assert!(fps.points.iter().any(|t| !t.is_infinity() && t.to_f64() == 0.0));

        // Translation t ↦ t + 1 fixes only ∞ (parabolic).
        let fps = map(1, 1, 0, 1).fixed_points();
        assert_eq!(fps.count(), 1);
        assert!(fps.discriminant.is_zero());
        assert!(fps.points[0].is_infinity());

        // Quarter-turn t ↦ -1/t has no real fixed point.
        let fps = map(0, -1, 1, 0).fixed_points();
        assert_eq!(fps.count(), 0);
        assert!(fps.discriminant < Rational::new(0, 1));
    }

    #[test]
    fn identity_signals_every_point_fixed() {
        let fps = map(3, 0, 0, 3).fixed_points();
        assert!(fps.all_fixed);
        assert!(fps.points.is_empty());
    }

    #[test]
    fn conjugacy_invariant_examples() {
        assert_eq!(MobiusMap::<Rational>::identity().conjugacy_invariant(), r(4, 1));
        // (2 + 1)^2 / 2 = 9/2
        assert_eq!(map(2, 0, 0, 1).conjugacy_invariant(), r(9, 2));
        // Parabolic: trace^2/det = 4.
        assert_eq!(map(1, 1, 0, 1).conjugacy_invariant(), r(4, 1));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let m = map(2, 1, 1, 1);
        let n = map(0, -1, 1, 3);
        let t = ProjectiveParam::new(r(5, 3), r(1, 1)).unwrap();
        assert_eq!(m.compose(&n).apply(&t), m.apply(&n.apply(&t)));
    }
}
