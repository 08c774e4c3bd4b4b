//! Planar points and the boundary parametrization of pieces.

use std::ops::{Add, Mul, Sub};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> S {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> S {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> S {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn dist(self, o: Self) -> S {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn lerp(self, o: Self, t: S) -> Self {
        self + (o - self) * t
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    /// Counterclockwise rotation by `theta`.
    pub fn rotated(self, theta: S) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn cast<T: Scalar>(self) -> Point2<T> {
        Point2::new(T::lit(self.x.to_f64_lossy()), T::lit(self.y.to_f64_lossy()))
    }
}

impl<S: Scalar> Add for Point2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<S: Scalar> Sub for Point2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<S: Scalar> Mul<S> for Point2<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

/// Counterclockwise angle in `[0, 2π)` turning `from` onto `to`.
pub fn ccw_angle<S: Scalar>(from: Point2<S>, to: Point2<S>) -> S {
    let a = from.cross(to).atan2(from.dot(to));
    if a < S::zero() {
        a + S::TAU()
    } else {
        a
    }
}

/// Absolute tolerance for comparing boundary positions on a piece of the
/// given linear scale.
pub fn position_eps<S: Scalar>(scale: S) -> S {
    S::lit(1e-9).max(S::epsilon() * S::lit(256.0) * (S::one() + scale))
}
