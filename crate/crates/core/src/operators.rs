//! A single circle impulse acting on functions: the pairing `⟨f δ_C, φ⟩`,
//! multiplication `f δ_C`, and convolution `f * δ_C`.
//!
//! Convolution keeps the arclength weighting `R dθ`, so `f * δ_C` of a
//! constant `c` is `2πR c`. [`circle_mean`] divides that back out.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Circle, Vec2};
use crate::special::periodic_trapezoid;

// in units of grid cells
const EDGE_SLACK: f64 = 1e-9;

type PlaneFn = Arc<dyn Fn(Vec2) -> f64 + Send + Sync>;
type AngleFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A circle impulse weighted by an angular density, `f δ_C`.
///
/// The density is taken against arclength `ds = R dθ`.
#[derive(Clone)]
pub struct RingMeasure {
    circle: Circle,
    density: AngleFn,
}

impl RingMeasure {
    pub fn new<F>(circle: Circle, density: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            circle,
            density: Arc::new(density),
        }
    }

    /// The bare impulse `δ_C`.
    pub fn uniform(circle: Circle) -> Self {
        Self::new(circle, |_| 1.0)
    }

    pub fn circle(&self) -> &Circle {
        &self.circle
    }

    pub fn density(&self, theta: f64) -> f64 {
        (self.density)(theta)
    }

    /// `∫₀^{2π} density(θ) R dθ` with `n` trapezoid nodes.
    pub fn total_mass(&self, n: usize) -> f64 {
        self.circle.radius() * periodic_trapezoid(|t| self.density(t), n)
    }
}

impl fmt::Debug for RingMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingMeasure")
            .field("circle", &self.circle)
            .finish_non_exhaustive()
    }
}

/// Row-major samples on a regular grid. Row `j` is `y = origin.y + j·spacing`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    pub origin: Vec2,
    pub spacing: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl SampledGrid {
    pub fn new(origin: Vec2, spacing: f64, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid("need at least 2x2 samples".into()));
        }
        if values.len() != nx * ny {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {nx}x{ny} grid",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("values must be finite".into()));
        }
        Ok(Self {
            origin,
            spacing,
            nx,
            ny,
            values,
        })
    }

    /// Samples `f` on the grid `origin + (i, j)·spacing`.
    pub fn from_fn<F>(origin: Vec2, spacing: f64, nx: usize, ny: usize, f: F) -> Result<Self>
    where
        F: Fn(Vec2) -> f64 + Sync,
    {
        let values = (0..nx * ny)
            .into_par_iter()
            .map(|idx| f(grid_point(origin, spacing, idx % nx, idx / nx)))
            .collect();
        Self::new(origin, spacing, nx, ny, values)
    }

    pub fn point(&self, i: usize, j: usize) -> Vec2 {
        grid_point(self.origin, self.spacing, i, j)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Bilinear interpolation; `None` outside the sampled rectangle.
    ///
    /// Points within `1e-9` cells of the boundary count as on it.
    pub fn interpolate(&self, p: Vec2) -> Option<f64> {
        let fx = (p.x - self.origin.x) / self.spacing;
        let fy = (p.y - self.origin.y) / self.spacing;
        let max_x = (self.nx - 1) as f64;
        let max_y = (self.ny - 1) as f64;
        let inside = |f: f64, max: f64| f >= -EDGE_SLACK && f <= max + EDGE_SLACK;
        if !(inside(fx, max_x) && inside(fy, max_y)) {
            return None;
        }
        let (fx, fy) = (fx.clamp(0.0, max_x), fy.clamp(0.0, max_y));
        let i = (fx.floor() as usize).min(self.nx - 2);
        let j = (fy.floor() as usize).min(self.ny - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let v00 = self.get(i, j);
        let v10 = self.get(i + 1, j);
        let v01 = self.get(i, j + 1);
        let v11 = self.get(i + 1, j + 1);
        Some((1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11))
    }
}

fn grid_point(origin: Vec2, spacing: f64, i: usize, j: usize) -> Vec2 {
    Vec2::new(origin.x + i as f64 * spacing, origin.y + j as f64 * spacing)
}

/// A real function on the plane, given either as a closure or as samples.
///
/// Sampled fields interpolate bilinearly and are NaN off the grid.
#[derive(Clone)]
pub enum Field2D {
    Analytic(PlaneFn),
    Sampled(SampledGrid),
}

impl Field2D {
    pub fn analytic<F>(f: F) -> Self
    where
        F: Fn(Vec2) -> f64 + Send + Sync + 'static,
    {
        Self::Analytic(Arc::new(f))
    }

    pub fn eval(&self, p: Vec2) -> f64 {
        match self {
            Self::Analytic(f) => f(p),
            Self::Sampled(g) => g.interpolate(p).unwrap_or(f64::NAN),
        }
    }

    pub fn grid(&self) -> Option<&SampledGrid> {
        match self {
            Self::Analytic(_) => None,
            Self::Sampled(g) => Some(g),
        }
    }

    /// Pointwise product with another field, as a closure.
    pub fn product(&self, other: &Field2D) -> Field2D {
        let (a, b) = (self.clone(), other.clone());
        Field2D::analytic(move |p| a.eval(p) * b.eval(p))
    }
}

impl fmt::Debug for Field2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Analytic(_) => f.write_str("Field2D::Analytic(..)"),
            Self::Sampled(g) => f.debug_tuple("Field2D::Sampled").field(g).finish(),
        }
    }
}

/// `⟨m, φ⟩ = ∫₀^{2π} density(θ) φ(b + R e(θ)) R dθ` with `n` nodes.
pub fn pair_with_test(m: &RingMeasure, phi: &Field2D, n: usize) -> f64 {
    let c = m.circle();
    c.radius() * periodic_trapezoid(|t| m.density(t) * phi.eval(c.point_at(t)), n)
}

/// `f δ_C` as a ring measure: the density is `f` read off the circle,
/// `θ ↦ f(b + R e(θ))`. For `f` radial about `b` this is the constant `f̃(R)`.
pub fn restrict_to_circle(f: &Field2D, c: &Circle) -> RingMeasure {
    let f = f.clone();
    let circle = *c;
    RingMeasure::new(circle, move |t| f.eval(circle.point_at(t)))
}

/// `(f * δ_C)(x) = ∫₀^{2π} f(x − b + R e(θ)) R dθ` for the circle of radius
/// `R` about `b`. For `b = 0` the integral runs over the circle of radius `R`
/// about `x`.
pub fn circle_average(f: &Field2D, c: &Circle, x: Vec2, n: usize) -> f64 {
    let at = x - c.center();
    let r = c.radius();
    r * periodic_trapezoid(|t| f.eval(at + r * Vec2::unit(t)), n)
}

/// [`circle_average`] divided by the circumference: the plain mean of `f`
/// over the circle.
pub fn circle_mean(f: &Field2D, c: &Circle, x: Vec2, n: usize) -> f64 {
    circle_average(f, c, x, n) / (TAU * c.radius())
}

/// `f * δ_C` on every sample point of `f`'s grid whose circle stays inside
/// the grid. The result is the cropped sub-grid; circle points between
/// samples are interpolated bilinearly.
pub fn circle_average_field(f: &Field2D, c: &Circle, n: usize) -> Result<Field2D> {
    let grid = f
        .grid()
        .ok_or_else(|| Error::InvalidGrid("circle_average_field needs a sampled field".into()))?;
    let h = grid.spacing;
    let r = c.radius();
    let shift = -c.center();
    // sample k is usable when every circle point p + shift ± R stays on the grid
    let span = |shift: f64, count: usize| -> Option<(usize, usize)> {
        let lo = ((r - shift) / h - EDGE_SLACK).ceil().max(0.0);
        let hi = (((count - 1) as f64 * h - r - shift) / h + EDGE_SLACK).floor();
        (hi >= lo + 1.0).then(|| (lo as usize, (hi as usize).min(count - 1)))
    };
    let (i0, i1) = span(shift.x, grid.nx).ok_or_else(|| clipped(c, grid))?;
    let (j0, j1) = span(shift.y, grid.ny).ok_or_else(|| clipped(c, grid))?;
    let nx = i1 - i0 + 1;
    let ny = j1 - j0 + 1;
    let origin = grid.point(i0, j0);
    let values: Vec<f64> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..nx).map(move |i| circle_average(f, c, grid_point(origin, h, i, j), n))
        })
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(clipped(c, grid));
    }
    Ok(Field2D::Sampled(SampledGrid::new(
        origin, h, nx, ny, values,
    )?))
}

fn clipped(c: &Circle, g: &SampledGrid) -> Error {
    Error::GridClipped(format!(
        "circle of radius {} about {} does not fit inside a {}x{} grid at spacing {}",
        c.radius(),
        c.center(),
        g.nx,
        g.ny,
        g.spacing
    ))
}
