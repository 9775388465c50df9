//! Convolves two Gaussian-smoothed rings with an FFT and reads off the
//! radial profile.
//!
//! cargo run --release --example mollified_grid

use ringconv::oracle::{build_mollified_ring, grid_conv, grid_conv_check, GridSpec};
use ringconv::{Circle, Vec2};

fn main() -> ringconv::Result<()> {
    let c1 = Circle::new(Vec2::new(0.5, 0.0), 1.0)?;
    let c2 = Circle::centered(1.5)?;
    let grid = GridSpec::new(8.0, 0.02)?;
    let eps = 0.08;

    let a = build_mollified_ring(&c1, grid, eps)?;
    let b = build_mollified_ring(&c2, grid, eps)?;
    println!("ring masses {:.10} and {:.10}", a.mass(), b.mass());
    let conv = grid_conv(&a, &b)?;
    println!(
        "convolution mass {:.10}, centered at {}",
        conv.mass(),
        conv.center
    );

    let report = grid_conv_check(&c1, &c2, grid, eps)?;
    println!(
        "{:>7}  {:>9}  {:>9}  {:>9}",
        "rho", "grid", "smoothed", "exact"
    );
    for s in report.samples.iter().step_by(10) {
        println!(
            "{:>7.3}  {:>9.4}  {:>9.4}  {:>9.4}",
            s.rho, s.grid, s.smoothed, s.closed_form
        );
    }
    println!(
        "max relative error {:.2e} on [{:.2}, {:.2}]",
        report.max_rel_error, report.trimmed.0, report.trimmed.1
    );
    Ok(())
}
