//! J0 across both evaluation branches, and the three quadrature rules.

use ringconv::oracle::bessel::{j0_integral, J0_ZEROS};
use ringconv::special::periodic_trapezoid;
use ringconv::{bessel_j0, QuadratureRule};

fn main() -> ringconv::Result<()> {
    println!("{:>6}  {:>22}  {:>9}", "x", "J0(x)", "vs integral");
    for x in [0.0, 1.0, 5.0, 11.9, 12.1, 20.0, 50.0] {
        let v = bessel_j0(x);
        println!(
            "{x:>6}  {v:>22.17}  {:>9.1e}",
            (v - j0_integral(x, 256)).abs()
        );
    }
    for z in J0_ZEROS {
        println!("J0({z}) = {:.2e}", bessel_j0(z));
    }

    // ∫ u (dx / sqrt((x-a)(b-x))) over [1, 4] is π (a + b) / 2
    let cheb = QuadratureRule::chebyshev_singular(1.0, 4.0, 8)?;
    println!(
        "chebyshev: {} vs {}",
        cheb.apply(|x| x),
        std::f64::consts::PI * 2.5
    );

    let gl = QuadratureRule::gauss_legendre(0.0, 1.0, 10)?;
    println!(
        "gauss-legendre: {} vs {}",
        gl.apply(|x| x.powi(19)),
        1.0 / 20.0
    );

    let trap = periodic_trapezoid(|t| (3.0 * t).cos().powi(2), 16);
    println!("trapezoid: {trap} vs {}", std::f64::consts::PI);
    Ok(())
}
