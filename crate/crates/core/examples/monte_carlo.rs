//! Samples uniform points on two shifted circles, histograms the distance of
//! their sum from b1 + b2 and compares it with the closed form.
//!
//! cargo run --release --example monte_carlo

use ringconv::oracle::{mc_conv_histogram_in, mc_radiality_check, BinRange};
use ringconv::{Circle, ConvKernel, Vec2};

fn main() -> ringconv::Result<()> {
    let c1 = Circle::new(Vec2::new(1.0, 0.0), 2.0)?;
    let c2 = Circle::new(Vec2::new(0.0, 2.0), 3.0)?;
    let k = ConvKernel::from_circles(&c1, &c2);
    let samples = 2_000_000;

    let h = mc_conv_histogram_in(&c1, &c2, samples, BinRange::new(1.0, 5.0, 20)?, 42)?;
    println!(
        "{:>6}  {:>9}  {:>9}  {:>8}",
        "rho", "estimate", "exact", "counts"
    );
    for i in 0..h.bins() {
        let mid = h.midpoint(i);
        println!(
            "{mid:>6.2}  {:>9.4}  {:>9.4}  {:>8}",
            h.density(i),
            k.eval(mid),
            h.counts[i]
        );
    }
    println!(
        "outside the bins: {} below, {} above",
        h.underflow, h.overflow
    );

    let s = mc_radiality_check(&c1, &c2, samples, 8, 42)?;
    println!("sector counts about {}: {:?}", s.center, s.counts);
    println!("within 4 sigma of uniform: {}", s.within_sigma(4.0));
    Ok(())
}
