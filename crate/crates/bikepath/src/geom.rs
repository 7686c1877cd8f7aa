//! Planar primitives: points, displacement vectors, signed areas, parallelism.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

/// A displacement between points.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point {
            x: S::zero(),
            y: S::zero(),
        }
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point {
            x: self.x.to_f64(),
            y: self.y.to_f64(),
        }
    }
}

impl<S: Scalar> Vector<S> {
    pub fn new(x: S, y: S) -> Self {
        Vector { x, y }
    }

    pub fn zero() -> Self {
        Vector {
            x: S::zero(),
            y: S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Squared Euclidean norm; stays in the scalar field.
    pub fn norm_sq(&self) -> S {
        self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone()
    }

    pub fn scale(&self, factor: &S) -> Vector<S> {
        Vector {
            x: self.x.clone() * factor.clone(),
            y: self.y.clone() * factor.clone(),
        }
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector {
            x: self.x.to_f64(),
            y: self.y.to_f64(),
        }
    }
}

impl<S: Scalar> Sub for &Point<S> {
    type Output = Vector<S>;
    fn sub(self, rhs: &Point<S>) -> Vector<S> {
        Vector {
            x: self.x.clone() - rhs.x.clone(),
            y: self.y.clone() - rhs.y.clone(),
        }
    }
}

impl<S: Scalar> Add<&Vector<S>> for &Point<S> {
    type Output = Point<S>;
    fn add(self, rhs: &Vector<S>) -> Point<S> {
        Point {
            x: self.x.clone() + rhs.x.clone(),
            y: self.y.clone() + rhs.y.clone(),
        }
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;
    fn add(self, rhs: &Vector<S>) -> Vector<S> {
        Vector {
            x: self.x.clone() + rhs.x.clone(),
            y: self.y.clone() + rhs.y.clone(),
        }
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;
    fn sub(self, rhs: &Vector<S>) -> Vector<S> {
        Vector {
            x: self.x.clone() - rhs.x.clone(),
            y: self.y.clone() - rhs.y.clone(),
        }
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;
    fn neg(self) -> Vector<S> {
        Vector {
            x: -self.x.clone(),
            y: -self.y.clone(),
        }
    }
}

impl<S: Scalar> Mul<&S> for &Vector<S> {
    type Output = Vector<S>;
    fn mul(self, rhs: &S) -> Vector<S> {
        self.scale(rhs)
    }
}

/// Cross product `u.x * v.y - u.y * v.x`.
pub fn cross<S: Scalar>(u: &Vector<S>, v: &Vector<S>) -> S {
    u.x.clone() * v.y.clone() - u.y.clone() * v.x.clone()
}

/// Dot product.
pub fn dot<S: Scalar>(u: &Vector<S>, v: &Vector<S>) -> S {
    u.x.clone() * v.x.clone() + u.y.clone() * v.y.clone()
}

/// Outcome of a parallelism test. A zero vector is parallel to everything by
/// convention and sets the `degenerate` flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParallelCheck {
    pub parallel: bool,
    pub degenerate: bool,
}

/// Tests `u ∥ v` via the cross product: exact in rational mode, and
/// `|cross| <= tol * |u| * |v|` in float mode.
pub fn parallel_check<S: Scalar>(u: &Vector<S>, v: &Vector<S>, tol: f64) -> ParallelCheck {
    if u.is_zero() || v.is_zero() {
        return ParallelCheck {
            parallel: true,
            degenerate: true,
        };
    }
    let c = cross(u, v);
    let scale_sq = u.norm_sq() * v.norm_sq();
    ParallelCheck {
        parallel: c.is_zero_vs_scale_sq(&scale_sq, tol),
        degenerate: false,
    }
}

/// Convenience wrapper around [`parallel_check`] returning only the verdict.
pub fn is_parallel<S: Scalar>(u: &Vector<S>, v: &Vector<S>, tol: f64) -> bool {
    parallel_check(u, v, tol).parallel
}

/// Signed area of the polygon with the given vertices, by the shoelace sum
/// `1/2 Σ (x_i y_{i+1} - x_{i+1} y_i)` with cyclic indices. Positive for
/// counterclockwise orientation.
pub fn shoelace_area<S: Scalar>(vertices: &[Point<S>]) -> Result<S> {
    if vertices.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "shoelace area needs at least 3 points, got {}",
            vertices.len()
        )));
    }
    let mut twice = S::zero();
    for i in 0..vertices.len() {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % vertices.len()];
        twice = twice + (a.x.clone() * b.y.clone() - b.x.clone() * a.y.clone());
    }
    Ok(twice * S::from_ratio(1, 2))
}

/// Signed area of the triangle `abc`.
pub fn triangle_area<S: Scalar>(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> S {
    let u = b - a;
    let v = c - a;
    cross(&u, &v) * S::from_ratio(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, DEFAULT_TOL};

    fn pt(n1: i64, d1: i64, n2: i64, d2: i64) -> Point<Rational> {
        Point::new(Rational::new(n1, d1), Rational::new(n2, d2))
    }

    #[test]
    fn shoelace_unit_square() {
        let ccw = vec![pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(1, 1, 1, 1), pt(0, 1, 1, 1)];
        assert_eq!(shoelace_area(&ccw).unwrap(), Rational::new(1, 1));
        let cw: Vec<_> = ccw.iter().rev().cloned().collect();
        assert_eq!(shoelace_area(&cw).unwrap(), Rational::new(-1, 1));
    }

    #[test]
    fn shoelace_right_triangle() {
        // Oracle: area = base * height / 2 = 2 * 2 / 2 = 2.
        let tri = vec![pt(0, 1, 0, 1), pt(2, 1, 0, 1), pt(0, 1, 2, 1)];
        assert_eq!(shoelace_area(&tri).unwrap(), Rational::new(2, 1));
    }

    #[test]
    fn shoelace_rejects_short_input() {
        let two = vec![pt(0, 1, 0, 1), pt(1, 1, 0, 1)];
        assert!(shoelace_area(&two).is_err());
    }

    #[test]
    fn parallel_examples() {
        let u = Vector::new(Rational::new(1, 1), Rational::new(2, 1));
        let v = Vector::new(Rational::new(2, 1), Rational::new(4, 1));
        assert!(is_parallel(&u, &v, DEFAULT_TOL));

        let u = Vector::new(Rational::new(1, 1), Rational::new(0, 1));
        let v = Vector::new(Rational::new(0, 1), Rational::new(1, 1));
        assert!(!is_parallel(&u, &v, DEFAULT_TOL));

        // cross = 2 * (-3/5) - (-1) * (6/5) = 0
        let u = Vector::new(Rational::new(2, 1), Rational::new(-1, 1));
        let v = Vector::new(Rational::new(6, 5), Rational::new(-3, 5));
        assert!(is_parallel(&u, &v, DEFAULT_TOL));
    }

    #[test]
    fn zero_vector_is_degenerate_parallel() {
        let z = Vector::<Rational>::zero();
        let v = Vector::new(Rational::new(1, 1), Rational::new(1, 1));
        let check = parallel_check(&z, &v, DEFAULT_TOL);
        assert!(check.parallel && check.degenerate);
    }

    #[test]
    fn float_parallel_uses_relative_tolerance() {
        let u = Vector::new(1.0f64, 1.0);
        let v = Vector::new(2.0f64, 2.0 + 1e-13);
        assert!(is_parallel(&u, &v, 1e-10));
        let w = Vector::new(2.0f64, 2.1);
        assert!(!is_parallel(&u, &w, 1e-10));
    }

    #[test]
    fn point_vector_arithmetic_is_exact() {
        let a = pt(1, 3, 2, 7);
        let b = pt(5, 6, -1, 7);
        let d = &b - &a;
        assert_eq!(&(&a + &d), &b);
    }
}
