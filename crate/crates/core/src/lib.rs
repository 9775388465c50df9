//! Convolution of two circle impulses in the plane.
//!
//! For circles `C1`, `C2` with radii `R1`, `R2` and centers `b1`, `b2`, the
//! convolution `δ_C1 * δ_C2` is radial about `b1 + b2` with profile
//!
//! ```text
//!             4 R1 R2
//! ---------------------------------------      |R1 - R2| < ρ < R1 + R2
//! sqrt((ρ² - (R1-R2)²) ((R1+R2)² - ρ²))
//! ```
//!
//! and zero elsewhere. The crate evaluates that profile ([`kernel`]), checks
//! it against an independent root-finding path, against its Hankel transform
//! ([`hankel`]) and against brute-force Monte Carlo and grid convolutions
//! ([`oracle`]). [`operators`] covers multiplication and convolution of a
//! function with a single circle impulse.
//!
//! ```
//! use ringconv::{Circle, ConvKernel, Vec2};
//!
//! let c1 = Circle::new(Vec2::new(1.0, 0.0), 2.0)?;
//! let c2 = Circle::new(Vec2::new(0.0, 2.0), 3.0)?;
//! let k = ConvKernel::from_circles(&c1, &c2);
//!
//! // the profile bottoms out at exactly 2 where ρ² = R1² + R2²
//! let x = Vec2::new(1.0 + 13f64.sqrt(), 2.0);
//! assert!((k.eval_2d(x) - 2.0).abs() < 1e-12);
//! # Ok::<(), ringconv::Error>(())
//! ```
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod cli;
mod error;
pub mod geometry;
pub mod hankel;
pub mod kernel;
pub mod operators;
pub mod oracle;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{Circle, RadialProfile, Vec2};
pub use kernel::{ConvKernel, SupportClass};
pub use special::{bessel_j0, QuadratureRule, WeightKind};
