//! Reference `J₀` values computed without the evaluator in `special`.

use std::f64::consts::TAU;

/// Power series `Σ (−1)^k (x/2)^{2k} / (k!)²` with every term built from
/// scratch and a fixed 80 terms. Good to about 1e-14 for `|x| ≤ 8`; loses
/// digits to cancellation beyond that.
pub fn j0_long_series(x: f64) -> f64 {
    let half = 0.5 * x;
    (0..80)
        .map(|k| {
            let t = (1..=k).fold(1.0, |t, j| t * half * half / (j as f64 * j as f64));
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// `J₀(x) = (1/2π) ∫₀^{2π} cos(x sin θ) dθ` by the periodic trapezoid rule
/// with `nodes` points; exact to rounding once `nodes` is well above `|x|`.
pub fn j0_integral(x: f64, nodes: usize) -> f64 {
    (0..nodes)
        .map(|j| (x * (TAU * j as f64 / nodes as f64).sin()).cos())
        .sum::<f64>()
        / nodes as f64
}

/// First five zeros of `J₀`, to 17 significant digits.
pub const J0_ZEROS: [f64; 5] = [
    2.404_825_557_695_773,
    5.520_078_110_286_311,
    8.653_727_912_911_013,
    11.791_534_439_014_281,
    14.930_917_708_487_786,
];

/// Bisects `f` on `[lo, hi]` (which must bracket a sign change) to width `tol`.
pub fn bisect_zero<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let flo = f(lo);
    if flo * f(hi) > 0.0 {
        return None;
    }
    let lo_positive = flo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
