//! The radial Fourier transform of the convolution is the product of the
//! transforms of the two circles. Also transforms a Gaussian back onto
//! itself.

use ringconv::hankel::{conv_transform_closed_form, hankel_of_conv, hankel_sweep};
use ringconv::{ConvKernel, QuadratureRule, RadialProfile};

fn main() -> ringconv::Result<()> {
    let k = ConvKernel::new(2.0, 3.0)?;
    println!("{:>5}  {:>20}  {:>20}", "r", "numeric", "product");
    for i in 0..=10 {
        let r = 0.2 * i as f64;
        println!(
            "{r:>5.2}  {:>20.14}  {:>20.14}",
            hankel_of_conv(&k, r, 256)?,
            conv_transform_closed_form(&k, r)
        );
    }

    let rule = QuadratureRule::gauss_legendre(0.0, 6.0, 160)?;
    let r: Vec<f64> = (0..=6).map(|i| 0.5 * i as f64).collect();
    let g = hankel_sweep(&RadialProfile::gaussian(), &r, &rule)?;
    for (r, v) in g.r_values.iter().zip(&g.values) {
        let want = (-std::f64::consts::PI * r * r).exp();
        println!(
            "gaussian r={r:.1}: {v:.15} (error {:.1e})",
            (v - want).abs()
        );
    }
    Ok(())
}
