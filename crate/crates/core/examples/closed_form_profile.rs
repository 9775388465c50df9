//! Prints the convolution profile of two circles and where it is special.
//!
//! cargo run --example closed_form_profile -- 2 3

use ringconv::{ConvKernel, SupportClass};

fn main() -> ringconv::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("radius"));
    let r1 = args.next().unwrap_or(2.0);
    let r2 = args.next().unwrap_or(3.0);
    let k = ConvKernel::new(r1, r2)?;
    let (lo, hi) = k.support_interval();

    println!("R1 = {r1}, R2 = {r2}");
    println!(
        "support ({lo}, {hi}), minimum 2 at rho = {}",
        k.minimum_radius()
    );
    println!(
        "mass {} (4 pi^2 R1 R2 = {})",
        k.total_mass(64)?,
        k.expected_mass()
    );
    println!();
    println!("{:>8}  {:>14}  class", "rho", "value");
    for i in 0..=24 {
        let rho = (hi + 1.0) * i as f64 / 24.0;
        println!("{rho:>8.4}  {:>14.6}  {:?}", k.eval(rho), k.classify(rho));
    }
    for rho in [lo, k.minimum_radius(), hi] {
        let class = k.classify(rho);
        assert_ne!(class, SupportClass::BelowSupport);
        println!("{rho:>8.4}  {:>14.6}  {class:?}", k.eval(rho));
    }
    Ok(())
}
