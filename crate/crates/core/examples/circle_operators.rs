//! Multiplying a function by a circle impulse, and convolving one with it.

use ringconv::operators::{
    circle_average, circle_average_field, circle_mean, pair_with_test, restrict_to_circle, Field2D,
    RingMeasure, SampledGrid,
};
use ringconv::{Circle, Vec2};

fn main() -> ringconv::Result<()> {
    let c = Circle::new(Vec2::new(0.5, -0.5), 1.0)?;

    // f δ_C paired with φ is δ_C paired with f φ
    let f = Field2D::analytic(|p| 1.0 + p.x * p.y);
    let phi = Field2D::analytic(|p| (-p.norm_sq()).exp());
    let ring = restrict_to_circle(&f, &c);
    println!("<f d_C, phi> = {:.15}", pair_with_test(&ring, &phi, 512));
    println!(
        "<d_C, f phi> = {:.15}",
        pair_with_test(&RingMeasure::uniform(c), &f.product(&phi), 512)
    );

    // harmonic functions equal their circle means; a shifted circle moves
    // the evaluation point by its center
    let harmonic = Field2D::analytic(|p| p.x * p.x - p.y * p.y + 3.0 * p.y);
    let x = Vec2::new(0.2, 0.7);
    let at = x - c.center();
    println!(
        "mean {:.15} vs value {:.15}",
        circle_mean(&harmonic, &c, x, 64),
        harmonic.eval(at)
    );
    println!(
        "average (not normalised) {:.6}",
        circle_average(&harmonic, &c, x, 64)
    );

    // the same operator on a sampled field, cropped to where circles fit
    let grid = SampledGrid::from_fn(Vec2::new(-2.0, -2.0), 0.1, 41, 41, |p| p.x + 2.0 * p.y)?;
    let averaged = circle_average_field(&Field2D::Sampled(grid), &Circle::centered(0.5)?, 128)?;
    let g = averaged.grid().expect("sampled");
    println!("cropped to {} x {} from {}", g.nx, g.ny, g.origin);
    let p = g.point(g.nx / 2 + 5, g.ny / 2 + 3);
    println!(
        "at {p}: {:.12} (2π r (x + 2y) = {:.12})",
        averaged.eval(p),
        std::f64::consts::PI * (p.x + 2.0 * p.y)
    );
    Ok(())
}
