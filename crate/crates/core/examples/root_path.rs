//! Evaluates the profile a second way: locate the angles where the distance
//! between the two circle points equals rho, and weight by the derivative.

use ringconv::ConvKernel;

fn main() -> ringconv::Result<()> {
    let k = ConvKernel::new(1.3, 2.1)?;
    let (lo, hi) = k.support_interval();
    println!(
        "{:>8}  {:>10}  {:>18}  {:>18}  {:>9}",
        "rho", "theta1", "closed form", "roots", "rel diff"
    );
    for i in 1..10 {
        let rho = lo + (hi - lo) * i as f64 / 10.0;
        let theta = k.interior_root(rho, 1e-14);
        let direct = k.eval(rho);
        let roots = k.eval_via_roots(rho, 1e-14)?;
        println!(
            "{rho:>8.4}  {theta:>10.6}  {direct:>18.14}  {roots:>18.14}  {:>9.2e}",
            ((roots - direct) / direct).abs()
        );
    }
    // the root path has no meaning outside the open support
    println!("{}", k.eval_via_roots(hi, 1e-14).unwrap_err());
    Ok(())
}
