//! Order-zero Hankel transform of radial profiles,
//! `𝓗f(r) = 2π ∫₀^∞ f(ρ) J₀(2πrρ) ρ dρ`, and the transform-side identities
//! for circle impulses and their convolution.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::RadialProfile;
use crate::kernel::{psi, ConvKernel};
use crate::special::{bessel_j0, periodic_trapezoid, QuadratureRule, WeightKind};

/// Transform values on a set of frequency radii.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelResult {
    pub r_values: Vec<f64>,
    pub values: Vec<f64>,
    pub node_count: usize,
}

/// Hankel transform of `profile` at frequency radius `r`.
///
/// How the rule is read depends on its kind:
///
/// * `GaussLegendre` on `[a, b]` integrates in `ρ` directly.
/// * `ChebyshevSingular` on `(a, b)` integrates in `u = ρ²`; the profile is
///   multiplied by `sqrt((u − a)(b − u))` to cancel the rule's weight. This
///   is exact in structure for profiles with inverse square-root edges, such
///   as the circle convolution.
/// * `PeriodicTrapezoid` is angular and is rejected.
pub fn hankel_transform(profile: &RadialProfile, r: f64, rule: &QuadratureRule) -> Result<f64> {
    let (lo, hi) = profile.support();
    let (a, b) = rule.interval();
    match rule.kind() {
        WeightKind::GaussLegendre => {
            if b <= lo || a >= hi {
                return Err(outside(a, b, lo, hi));
            }
            let k = TAU * r;
            Ok(TAU * rule.apply(|rho| profile.eval(rho) * bessel_j0(k * rho) * rho))
        }
        WeightKind::ChebyshevSingular => {
            let (ra, rb) = (a.max(0.0).sqrt(), b.max(0.0).sqrt());
            if rb <= lo || ra >= hi {
                return Err(outside(ra, rb, lo, hi));
            }
            let k = TAU * r;
            // 2π ∫ f(ρ) J₀(2πrρ) ρ dρ = π ∫ f(√u) J₀(2πr√u) du
            Ok(PI
                * rule.apply(|u| {
                    let rho = u.sqrt();
                    profile.eval(rho) * ((u - a) * (b - u)).sqrt() * bessel_j0(k * rho)
                }))
        }
        WeightKind::PeriodicTrapezoid => Err(Error::InvalidRule(
            "a periodic rule cannot integrate a radial profile",
        )),
    }
}

fn outside(rule_lo: f64, rule_hi: f64, support_lo: f64, support_hi: f64) -> Error {
    Error::OutsideSupport {
        rule_lo,
        rule_hi,
        support_lo,
        support_hi,
    }
}

/// Transform at each of `r_values`; evaluated in parallel, order-independent.
pub fn hankel_sweep(
    profile: &RadialProfile,
    r_values: &[f64],
    rule: &QuadratureRule,
) -> Result<HankelResult> {
    let values = r_values
        .par_iter()
        .map(|&r| hankel_transform(profile, r, rule))
        .collect::<Result<Vec<_>>>()?;
    Ok(HankelResult {
        r_values: r_values.to_vec(),
        values,
        node_count: rule.len(),
    })
}

/// `2πR J₀(2πrR)`, the radial Fourier transform of one circle impulse.
pub fn hankel_of_circle(radius: f64, r: f64) -> f64 {
    TAU * radius * bessel_j0(TAU * r * radius)
}

/// Hankel transform of the closed-form convolution profile, computed with an
/// `n`-node Chebyshev rule on `[(R1 − R2)², (R1 + R2)²]` in `u = ρ²`.
///
/// Should equal `(2π)² R1 R2 J₀(2πR1r) J₀(2πR2r)`.
pub fn hankel_of_conv(k: &ConvKernel, r: f64, n: usize) -> Result<f64> {
    let (a, b) = k.support_sq();
    let rule = QuadratureRule::chebyshev_singular(a, b, n)?;
    hankel_transform(&k.concentric().profile(), r, &rule)
}

/// The right-hand side `(2π)² R1 R2 J₀(2πR1r) J₀(2πR2r)`.
pub fn conv_transform_closed_form(k: &ConvKernel, r: f64) -> f64 {
    hankel_of_circle(k.r1(), r) * hankel_of_circle(k.r2(), r)
}

/// Both sides of the product formula
/// `J₀(2πR1r) J₀(2πR2r) = (1/2π) ∫₀^{2π} J₀(2πr Ψ(θ)) dθ`,
/// with the angular integral taken by an `n`-point periodic trapezoid rule.
pub fn neumann_product_check(r1: f64, r2: f64, r: f64, n: usize) -> (f64, f64) {
    let k = TAU * r;
    let lhs = periodic_trapezoid(|theta| bessel_j0(k * psi(theta, r1, r2)), n) / TAU;
    let rhs = bessel_j0(k * r1) * bessel_j0(k * r2);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;

    fn gauss_rule() -> QuadratureRule {
        QuadratureRule::gauss_legendre(0.0, 6.0, 160).unwrap()
    }

    #[test]
    fn gaussian_is_fixed_point() {
        let g = RadialProfile::gaussian();
        let rule = gauss_rule();
        for i in 0..=30 {
            let r = i as f64 * 0.1;
            let h = hankel_transform(&g, r, &rule).unwrap();
            assert!((h - (-PI * r * r).exp()).abs() < 1e-8, "r={r}");
        }
    }

    #[test]
    fn kernel_profile_at_zero_is_mass() {
        let k = ConvKernel::new(1.0, 1.0).unwrap();
        let (a, b) = k.support_sq();
        let rule = QuadratureRule::chebyshev_singular(a, b, 64).unwrap();
        let h = hankel_transform(&k.profile(), 0.0, &rule).unwrap();
        assert!((h - 4.0 * PI * PI).abs() < 1e-10);
    }

    #[test]
    fn kernel_profile_at_point_seven() {
        let k = ConvKernel::new(1.0, 1.0).unwrap();
        let h = hankel_of_conv(&k, 0.7, 256).unwrap();
        let j = bessel_j0(TAU * 0.7);
        assert!((h - 4.0 * PI * PI * j * j).abs() < 1e-8);
    }

    #[test]
    fn circle_transform_examples() {
        assert!((hankel_of_circle(1.0, 0.0) - TAU).abs() < 1e-15);
        assert!(hankel_of_circle(1.0, 2.404825557695773 / TAU).abs() < 1e-9);
        assert!((hankel_of_circle(3.0, 0.0) - 3.0 * TAU).abs() < 1e-14);
    }

    #[test]
    fn conv_transform_examples() {
        let k = ConvKernel::new(2.0, 3.0).unwrap();
        let h0 = hankel_of_conv(&k, 0.0, 256).unwrap();
        assert!((h0 - 24.0 * PI * PI).abs() < 1e-9);
        let h = hankel_of_conv(&k, 0.25, 256).unwrap();
        let expect = 4.0 * PI * PI * 6.0 * bessel_j0(PI) * bessel_j0(1.5 * PI);
        assert!((h - expect).abs() < 1e-8);

        let k = ConvKernel::new(1.0, 1.0).unwrap();
        let h = hankel_of_conv(&k, 1.0, 256).unwrap();
        let j = bessel_j0(TAU);
        assert!((h - 4.0 * PI * PI * j * j).abs() < 1e-8);
    }

    #[test]
    fn conv_transform_ignores_center() {
        let k = ConvKernel::with_center(2.0, 3.0, Vec2::new(4.0, -1.0)).unwrap();
        let a = hankel_of_conv(&k, 0.3, 64).unwrap();
        let b = hankel_of_conv(&k.concentric(), 0.3, 64).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn neumann_examples() {
        let (l, r) = neumann_product_check(1.0, 2.0, 0.0, 16);
        assert!((l - 1.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-15);

        // degenerate second circle: Ψ ≡ R1
        let (l, r) = neumann_product_check(1.3, 1e-300, 0.4, 16);
        assert!((l - bessel_j0(TAU * 0.4 * 1.3)).abs() < 1e-14);
        assert!((l - r).abs() < 1e-14);

        let (l, r) = neumann_product_check(1.0, 2.0, 0.3, 4096);
        assert!((l - r).abs() < 1e-10);
        // independent doubled-resolution trapezoid
        let (l2, _) = neumann_product_check(1.0, 2.0, 0.3, 8192);
        assert!((l - l2).abs() < 1e-13);
    }

    #[test]
    fn rejects_disjoint_or_angular_rules() {
        let k = ConvKernel::new(2.0, 3.0).unwrap();
        let far = QuadratureRule::gauss_legendre(6.0, 9.0, 8).unwrap();
        assert!(matches!(
            hankel_transform(&k.profile(), 0.1, &far),
            Err(Error::OutsideSupport { .. })
        ));
        let far = QuadratureRule::chebyshev_singular(36.0, 81.0, 8).unwrap();
        assert!(hankel_transform(&k.profile(), 0.1, &far).is_err());
        let ang = QuadratureRule::periodic_trapezoid(8).unwrap();
        assert!(matches!(
            hankel_transform(&k.profile(), 0.1, &ang),
            Err(Error::InvalidRule(_))
        ));
    }

    #[test]
    fn sweep_matches_pointwise() {
        let g = RadialProfile::gaussian();
        let rule = gauss_rule();
        let rs: Vec<f64> = (0..20).map(|i| i as f64 * 0.15).collect();
        let sweep = hankel_sweep(&g, &rs, &rule).unwrap();
        assert_eq!(sweep.node_count, 160);
        for (r, v) in rs.iter().zip(&sweep.values) {
            assert_eq!(*v, hankel_transform(&g, *r, &rule).unwrap());
        }
    }
}
