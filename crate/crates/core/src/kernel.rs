//! The closed-form convolution of two circle impulses and an independent
//! evaluation of it through the zeros of `Φ(θ) = ρ − Ψ(θ)`.
//!
//! Endpoints of the support carry an integrable `1/sqrt` singularity. They
//! evaluate to `f64::INFINITY` and are reported explicitly by [`SupportClass`],
//! so nothing silently integrates across them.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{Circle, RadialProfile, Vec2};
use crate::special::QuadratureRule;

/// Where a radius `ρ ≥ 0` falls relative to the annulus of support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SupportClass {
    /// `ρ = 0`.
    Origin,
    /// `0 < ρ < |R1 − R2|`.
    BelowSupport,
    /// `ρ = |R1 − R2|`.
    LowerEndpoint,
    /// `|R1 − R2| < ρ < R1 + R2`.
    Interior,
    /// `ρ = R1 + R2`.
    UpperEndpoint,
    /// `ρ > R1 + R2`.
    AboveSupport,
}

/// Everything needed to evaluate `δ_C1 * δ_C2`: both radii and `b1 + b2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvKernel {
    r1: f64,
    r2: f64,
    center_sum: Vec2,
}

impl ConvKernel {
    /// Kernel for two circles concentric at the origin.
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        Self::with_center(r1, r2, Vec2::ZERO)
    }

    pub fn with_center(r1: f64, r2: f64, center_sum: Vec2) -> Result<Self> {
        for r in [r1, r2] {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidRadius(r));
            }
        }
        if !center_sum.is_finite() {
            return Err(Error::InvalidCenter(center_sum.x, center_sum.y));
        }
        Ok(Self { r1, r2, center_sum })
    }

    pub fn from_circles(c1: &Circle, c2: &Circle) -> Self {
        Self {
            r1: c1.radius(),
            r2: c2.radius(),
            center_sum: c1.center() + c2.center(),
        }
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn center_sum(&self) -> Vec2 {
        self.center_sum
    }

    /// The same radii with both circles moved to the origin.
    pub fn concentric(&self) -> Self {
        Self {
            center_sum: Vec2::ZERO,
            ..*self
        }
    }

    /// `(|R1 − R2|, R1 + R2)`.
    pub fn support_interval(&self) -> (f64, f64) {
        ((self.r1 - self.r2).abs(), self.r1 + self.r2)
    }

    /// Support in the squared radius `u = ρ²`.
    pub fn support_sq(&self) -> (f64, f64) {
        let d = self.r1 - self.r2;
        let s = self.r1 + self.r2;
        (d * d, s * s)
    }

    /// The total mass `4π² R1 R2`, the product of the two circumferences.
    pub fn expected_mass(&self) -> f64 {
        4.0 * PI * PI * self.r1 * self.r2
    }

    /// Radius where the profile reaches its interior minimum of 2.
    pub fn minimum_radius(&self) -> f64 {
        self.r1.hypot(self.r2)
    }

    /// Exact floating-point classification of `rho`.
    pub fn classify(&self, rho: f64) -> SupportClass {
        let (lo, hi) = self.support_interval();
        if rho == 0.0 {
            SupportClass::Origin
        } else if rho < lo {
            SupportClass::BelowSupport
        } else if rho == lo {
            SupportClass::LowerEndpoint
        } else if rho < hi {
            SupportClass::Interior
        } else if rho == hi {
            SupportClass::UpperEndpoint
        } else {
            SupportClass::AboveSupport
        }
    }

    /// The profile of `δ_C1 * δ_C2` at distance `rho` from `b1 + b2`.
    ///
    /// Endpoints, and the origin when `R1 = R2`, give `f64::INFINITY`.
    pub fn eval(&self, rho: f64) -> f64 {
        match self.classify(rho) {
            SupportClass::Interior => self.density_sq(rho * rho),
            SupportClass::BelowSupport | SupportClass::AboveSupport => 0.0,
            SupportClass::LowerEndpoint | SupportClass::UpperEndpoint => f64::INFINITY,
            SupportClass::Origin => {
                if self.r1 == self.r2 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    // 4 R1 R2 / sqrt((u − a)(b − u)) with u = ρ²; caller guarantees a < u < b.
    pub(crate) fn density_sq(&self, u: f64) -> f64 {
        let (a, b) = self.support_sq();
        4.0 * self.r1 * self.r2 / ((u - a) * (b - u)).sqrt()
    }

    /// Value of the convolution at a point of the plane.
    pub fn eval_2d(&self, x: Vec2) -> f64 {
        self.eval((x - self.center_sum).norm())
    }

    /// `Ψ(θ)` for this kernel's radii.
    pub fn psi(&self, theta: f64) -> f64 {
        psi(theta, self.r1, self.r2)
    }

    /// `Φ(θ) = ρ − Ψ(θ)`.
    pub fn phi(&self, rho: f64, theta: f64) -> f64 {
        rho - self.psi(theta)
    }

    /// `Φ′(θ) = −R1 R2 sin θ / Ψ(θ)`; NaN where `Ψ` vanishes.
    pub fn phi_prime(&self, theta: f64) -> f64 {
        let psi = self.psi(theta);
        if psi == 0.0 {
            return f64::NAN;
        }
        -self.r1 * self.r2 * theta.sin() / psi
    }

    /// Evaluates the profile by locating the two zeros of `Φ` and summing
    /// `1/|Φ′|` over them, without using the closed form.
    ///
    /// The zero in `(0, π)` is found by bisection to width `tol`; the second
    /// is its reflection `2π − θ₁`.
    pub fn eval_via_roots(&self, rho: f64, tol: f64) -> Result<f64> {
        let class = self.classify(rho);
        if class != SupportClass::Interior {
            return Err(Error::NotInterior { class, rho });
        }
        let theta1 = self.interior_root(rho, tol);
        let theta2 = TAU - theta1;
        let weight = 1.0 / self.phi_prime(theta1).abs() + 1.0 / self.phi_prime(theta2).abs();
        Ok(self.r1 * self.r2 / rho * weight)
    }

    /// The zero of `Φ` in `(0, π)` for an interior `rho`.
    ///
    /// `Ψ` increases strictly on `(0, π)`, so `Φ` changes sign exactly once.
    pub fn interior_root(&self, rho: f64, tol: f64) -> f64 {
        const EDGE: f64 = 1e-12;
        let (mut lo, mut hi) = (EDGE, PI - EDGE);
        // ρ within rounding of an endpoint can leave the inset bracket empty
        if self.phi(rho, lo) <= 0.0 {
            lo = 0.0;
        }
        if self.phi(rho, hi) >= 0.0 {
            hi = PI;
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.phi(rho, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `∫ eval(ρ) 2πρ dρ` over the plane, by the Chebyshev rule in `u = ρ²`.
    ///
    /// The weight absorbs both endpoint singularities, so any `n ≥ 1` is
    /// exact up to rounding.
    pub fn total_mass(&self, n: usize) -> Result<f64> {
        let (a, b) = self.support_sq();
        let rule = QuadratureRule::chebyshev_singular(a, b, n)?;
        // ∫ f(ρ) 2πρ dρ = π ∫ f(√u) du
        Ok(PI * rule.apply(|u| self.density_sq(u) * ((u - a) * (b - u)).sqrt()))
    }

    /// The profile as a [`RadialProfile`] about `b1 + b2`.
    pub fn profile(&self) -> RadialProfile {
        let (lo, hi) = self.support_interval();
        let k = *self;
        RadialProfile::new(lo, hi, self.center_sum, move |rho| k.eval(rho))
            .expect("kernel support is a valid interval")
    }
}

/// `Ψ(θ) = (R1² + R2² − 2 R1 R2 cos θ)^½`, the distance between the points at
/// angle 0 on one circle and `θ` on the other.
///
/// Written as `((R1 − R2)² + 4 R1 R2 sin²(θ/2))^½` so `Ψ(0) = |R1 − R2|`
/// exactly.
pub fn psi(theta: f64, r1: f64, r2: f64) -> f64 {
    let d = r1 - r2;
    let s = (0.5 * theta).sin();
    (d * d + 4.0 * r1 * r2 * s * s).sqrt()
}
