//! Points, circles and radial profiles in the plane.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn unit(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self * rhs.x, self * rhs.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// The circle `‖x − center‖ = radius`, the support of one impulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    center: Vec2,
    radius: f64,
}

impl Circle {
    pub fn new(center: Vec2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidRadius(radius));
        }
        if !center.is_finite() {
            return Err(Error::InvalidCenter(center.x, center.y));
        }
        Ok(Self { center, radius })
    }

    pub fn centered(radius: f64) -> Result<Self> {
        Self::new(Vec2::ZERO, radius)
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The point at angle `theta` on the circle.
    pub fn point_at(&self, theta: f64) -> Vec2 {
        self.center + self.radius * Vec2::unit(theta)
    }

    /// The same circle moved by `by`.
    pub fn shifted(&self, by: Vec2) -> Self {
        Self {
            center: self.center + by,
            radius: self.radius,
        }
    }

    pub fn circumference(&self) -> f64 {
        std::f64::consts::TAU * self.radius
    }
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function radial about `center`, given by its profile on `[lo, hi]`.
///
/// The profile is zero outside the support; `hi` may be infinite.
#[derive(Clone)]
pub struct RadialProfile {
    lo: f64,
    hi: f64,
    center: Vec2,
    profile: RadialFn,
}

impl RadialProfile {
    pub fn new<F>(lo: f64, hi: f64, center: Vec2, profile: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lo >= 0.0 && lo < hi) || lo.is_infinite() {
            return Err(Error::InvalidInterval { a: lo, b: hi });
        }
        if !center.is_finite() {
            return Err(Error::InvalidCenter(center.x, center.y));
        }
        Ok(Self {
            lo,
            hi,
            center,
            profile: Arc::new(profile),
        })
    }

    /// `exp(−πρ²)` about the origin, its own two-dimensional Fourier transform.
    pub fn gaussian() -> Self {
        Self::new(0.0, f64::INFINITY, Vec2::ZERO, |rho| {
            (-std::f64::consts::PI * rho * rho).exp()
        })
        .expect("static support is valid")
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    /// Profile value at radius `rho`; zero outside the support.
    pub fn eval(&self, rho: f64) -> f64 {
        if rho < self.lo || rho > self.hi {
            0.0
        } else {
            (self.profile)(rho)
        }
    }

    /// Value at a point of the plane, through `‖x − center‖`.
    pub fn eval_at(&self, x: Vec2) -> f64 {
        self.eval((x - self.center).norm())
    }
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("support", &(self.lo, self.hi))
            .field("center", &self.center)
            .finish_non_exhaustive()
    }
}
