//! J0(2πR1r) J0(2πR2r) as an angular average of J0 at the law-of-cosines
//! distance. The trapezoid rule converges geometrically once the node count
//! passes the oscillation frequency.

use ringconv::hankel::neumann_product_check;

fn main() {
    let (r1, r2, r) = (2.0, 3.0, 1.5);
    for n in [8, 16, 32, 64, 128, 4096] {
        let (lhs, rhs) = neumann_product_check(r1, r2, r, n);
        println!(
            "n = {n:>4}: {lhs:>22.17} vs {rhs:>22.17}  error {:.1e}",
            (lhs - rhs).abs()
        );
    }
}
