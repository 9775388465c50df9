use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::geometry::{Circle, Vec2};
use crate::kernel::ConvKernel;
use crate::special::QuadratureRule;

/// Square sampling window: side `extent`, `round(extent / spacing)` points a side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub extent: f64,
    pub spacing: f64,
}

impl GridSpec {
    pub fn new(extent: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if !(extent.is_finite() && extent >= 2.0 * spacing) {
            return Err(Error::InvalidGrid(format!(
                "extent {extent} must cover at least two samples"
            )));
        }
        Ok(Self { extent, spacing })
    }

    pub fn points(&self) -> usize {
        (self.extent / self.spacing).round() as usize
    }
}

/// A circle impulse smoothed by a Gaussian of width `epsilon` across the ring,
/// `(1/(√(2π) ε)) exp(−(‖x − b‖ − R)² / 2ε²)`, sampled on an `n × n` grid
/// centered on the circle's center.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifiedGrid {
    pub center: Vec2,
    pub radius: f64,
    pub spacing: f64,
    pub epsilon: f64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl MollifiedGrid {
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.spacing
    }

    /// Offset of sample `i` along either axis from the center.
    pub fn offset(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * (self.n - 1) as f64) * self.spacing
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n + i]
    }

    /// `Σ values · spacing²`, close to `2πR`.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spacing * self.spacing
    }

    pub fn peak(&self) -> f64 {
        1.0 / ((TAU).sqrt() * self.epsilon)
    }
}

/// Samples the mollified ring for `c`.
///
/// Needs `epsilon ≥ 2 · spacing` and the ring plus `5ε` inside the window.
pub fn build_mollified_ring(c: &Circle, grid: GridSpec, epsilon: f64) -> Result<MollifiedGrid> {
    let h = grid.spacing;
    if epsilon.is_nan() || epsilon < 2.0 * h {
        return Err(Error::Unresolved {
            epsilon,
            spacing: h,
        });
    }
    let n = grid.points();
    let half = 0.5 * (n - 1) as f64 * h;
    if c.radius() + 5.0 * epsilon > half {
        return Err(Error::GridClipped(format!(
            "ring of radius {} with padding {} exceeds half-width {half}",
            c.radius(),
            5.0 * epsilon
        )));
    }
    let r = c.radius();
    let peak = 1.0 / (TAU.sqrt() * epsilon);
    let inv = 1.0 / (2.0 * epsilon * epsilon);
    let mid = 0.5 * (n - 1) as f64;
    let mut values = vec![0.0; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        let y = (j as f64 - mid) * h;
        for (i, v) in row.iter_mut().enumerate() {
            let x = (i as f64 - mid) * h;
            let d = x.hypot(y) - r;
            *v = peak * (-d * d * inv).exp();
        }
    });
    Ok(MollifiedGrid {
        center: c.center(),
        radius: r,
        spacing: h,
        epsilon,
        n,
        values,
    })
}

/// Linear convolution of two mollified rings, on an `n × n` window centered
/// at `b1 + b2`. Sample `j` along an axis sits at offset `(j − n/2) · spacing`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvGrid {
    pub center: Vec2,
    pub spacing: f64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl ConvGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n + i]
    }

    pub fn offset(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.spacing
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spacing * self.spacing
    }

    /// Annular averages about the center, annuli of width `bin_width`.
    ///
    /// Each entry is `(mean radius of the samples, mean value, sample count)`;
    /// empty annuli are skipped.
    pub fn radial_profile(&self, bin_width: f64) -> Vec<(f64, f64, usize)> {
        let h = self.spacing;
        let half = (self.n / 2) as f64;
        let max_rho = h * half * std::f64::consts::SQRT_2;
        let bins = (max_rho / bin_width) as usize + 1;
        let mut sum_rho = vec![0.0; bins];
        let mut sum_val = vec![0.0; bins];
        let mut count = vec![0usize; bins];
        for j in 0..self.n {
            let dy = j as f64 - half;
            for i in 0..self.n {
                let dx = i as f64 - half;
                let rho = h * dx.hypot(dy);
                let k = ((rho / bin_width) as usize).min(bins - 1);
                sum_rho[k] += rho;
                sum_val[k] += self.get(i, j);
                count[k] += 1;
            }
        }
        (0..bins)
            .filter(|&k| count[k] > 0)
            .map(|k| {
                let c = count[k] as f64;
                (sum_rho[k] / c, sum_val[k] / c, count[k])
            })
            .collect()
    }
}

fn fft_rows(data: &mut [Complex<f64>], n: usize, fft: &Arc<dyn Fft<f64>>) {
    data.par_chunks_mut(n).for_each_init(
        || vec![Complex::default(); fft.get_inplace_scratch_len()],
        |scratch, row| fft.process_with_scratch(row, scratch),
    );
}

fn transpose(data: &mut [Complex<f64>], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

fn fft2(data: &mut [Complex<f64>], n: usize, fft: &Arc<dyn Fft<f64>>) {
    fft_rows(data, n, fft);
    transpose(data, n);
    fft_rows(data, n, fft);
    transpose(data, n);
}

/// `(m1 * m2)(x) ≈ h² Σ m1[i] m2[j − i]` by 2D FFT.
///
/// The transform is circular over the `n × n` window; the result is read on
/// the window centered at `b1 + b2`, which is exact as long as the Minkowski
/// sum of the two rings (plus mollifier tails) fits in that window.
pub fn grid_conv(a: &MollifiedGrid, b: &MollifiedGrid) -> Result<ConvGrid> {
    if a.n != b.n || a.spacing != b.spacing {
        return Err(Error::InvalidGrid(
            "both rings must share grid size and spacing".into(),
        ));
    }
    let n = a.n;
    let h = a.spacing;
    let reach = a.radius + b.radius + 5.0 * (a.epsilon + b.epsilon);
    let room = (n / 2).min(n - 1 - n / 2) as f64 * h;
    if reach > room {
        return Err(Error::GridClipped(format!(
            "convolution support radius {reach} exceeds window half-width {room}"
        )));
    }

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let to_complex = |v: &[f64]| v.iter().map(|&x| Complex::new(x, 0.0)).collect::<Vec<_>>();
    let mut fa = to_complex(&a.values);
    let mut fb = to_complex(&b.values);
    fft2(&mut fa, n, &forward);
    fft2(&mut fb, n, &forward);
    fa.par_iter_mut()
        .zip(fb.par_iter())
        .for_each(|(x, y)| *x *= *y);
    fft2(&mut fa, n, &inverse);

    // circular index k holds linear index m ≡ k (mod n); window sample j
    // corresponds to m = j + n − 1 − n/2
    let scale = h * h / (n * n) as f64;
    let shift = n - 1 - n / 2;
    let mut values = vec![0.0; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        let src = (j + shift) % n;
        for (i, v) in row.iter_mut().enumerate() {
            *v = fa[src * n + (i + shift) % n].re * scale;
        }
    });
    Ok(ConvGrid {
        center: a.center + b.center,
        spacing: h,
        n,
        values,
    })
}

/// The closed-form profile convolved with the mollifiers: the exact radial
/// profile of the convolution of two mollified rings.
///
/// A mollified ring is `∫ g_ε(s) δ_{C(R+s)} ds`, so the convolution is the
/// closed form averaged over both radii. In `S = R1' + R2'` and
/// `D = R1' − R2'` the two Gaussians decouple (each of width `√2 ε`) and
/// `S = ρ + t²`, `D = ρ sin φ` remove both square-root singularities.
pub fn mollified_profile(r1: f64, r2: f64, epsilon: f64, rho: f64) -> f64 {
    const NODES: usize = 96;
    const WINDOW: f64 = 12.0;
    if rho <= 0.0 {
        return f64::NAN;
    }
    let width = std::f64::consts::SQRT_2 * epsilon;
    let reach = WINDOW * width;
    let norm = 1.0 / ((TAU).sqrt() * width);
    let gauss = |x: f64| norm * (-0.5 * (x / width) * (x / width)).exp();
    let (s0, d0) = (r1 + r2, r1 - r2);

    let s_hi = s0 + reach;
    if s_hi <= rho {
        return 0.0;
    }
    let t_lo = (s0 - reach - rho).max(0.0).sqrt();
    let t_hi = (s_hi - rho).sqrt();
    let d_lo = (d0 - reach).max(-rho);
    let d_hi = (d0 + reach).min(rho);
    if d_lo >= d_hi {
        return 0.0;
    }
    let phi_lo = (d_lo / rho).clamp(-1.0, 1.0).asin();
    let phi_hi = (d_hi / rho).clamp(-1.0, 1.0).asin();

    let t_rule = QuadratureRule::gauss_legendre(t_lo, t_hi, NODES).expect("t window is nonempty");
    let phi_rule =
        QuadratureRule::gauss_legendre(phi_lo, phi_hi, NODES).expect("phi window is nonempty");
    t_rule.apply(|t| {
        let s = rho + t * t;
        let gs = gauss(s - s0);
        if gs == 0.0 {
            return 0.0;
        }
        let outer = 2.0 * gs / (s + rho).sqrt();
        outer
            * phi_rule.apply(|phi| {
                let d = rho * phi.sin();
                gauss(d - d0) * (s * s - d * d)
            })
    })
}

/// One annulus of the grid convolution next to its two references.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub rho: f64,
    pub grid: f64,
    /// [`mollified_profile`] at `rho`.
    pub smoothed: f64,
    /// The unsmoothed closed form at `rho`.
    pub closed_form: f64,
}

/// Outcome of [`grid_conv_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridConvReport {
    pub epsilon: f64,
    pub spacing: f64,
    /// `[|R1 − R2| + 5ε, R1 + R2 − 5ε]`, the radii that are compared.
    pub trimmed: (f64, f64),
    pub samples: Vec<ProfileSample>,
    /// Largest relative error against the smoothed closed form on `trimmed`.
    pub max_rel_error: f64,
    pub grid_mass: f64,
    pub expected_mass: f64,
}

impl GridConvReport {
    pub fn mass_rel_error(&self) -> f64 {
        (self.grid_mass - self.expected_mass).abs() / self.expected_mass
    }

    /// Largest relative error against the unsmoothed closed form on `[lo, hi]`.
    pub fn max_rel_error_vs_closed_form(&self, lo: f64, hi: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.rho >= lo && s.rho <= hi)
            .map(|s| ((s.grid - s.closed_form) / s.closed_form).abs())
            .fold(0.0, f64::max)
    }
}

/// Convolves two mollified rings on a grid and compares the radial profile
/// about `b1 + b2` with the mollified closed form.
pub fn grid_conv_check(
    c1: &Circle,
    c2: &Circle,
    grid: GridSpec,
    epsilon: f64,
) -> Result<GridConvReport> {
    let m1 = build_mollified_ring(c1, grid, epsilon)?;
    let m2 = build_mollified_ring(c2, grid, epsilon)?;
    let conv = grid_conv(&m1, &m2)?;
    let k = ConvKernel::from_circles(c1, c2);
    let (lo, hi) = k.support_interval();
    let trimmed = (lo + 5.0 * epsilon, hi - 5.0 * epsilon);

    let profile = conv.radial_profile(grid.spacing);
    let samples: Vec<ProfileSample> = profile
        .par_iter()
        .filter(|(rho, _, _)| *rho >= trimmed.0 && *rho <= trimmed.1)
        .map(|&(rho, value, _)| ProfileSample {
            rho,
            grid: value,
            smoothed: mollified_profile(k.r1(), k.r2(), epsilon, rho),
            closed_form: k.eval(rho),
        })
        .collect();
    let max_rel_error = samples
        .iter()
        .map(|s| ((s.grid - s.smoothed) / s.smoothed).abs())
        .fold(0.0, f64::max);
    Ok(GridConvReport {
        epsilon,
        spacing: grid.spacing,
        trimmed,
        samples,
        max_rel_error,
        grid_mass: conv.mass(),
        expected_mass: 4.0 * PI * PI * k.r1() * k.r2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(r: f64, extent: f64, h: f64, eps: f64) -> MollifiedGrid {
        let c = Circle::centered(r).unwrap();
        build_mollified_ring(&c, GridSpec::new(extent, h).unwrap(), eps).unwrap()
    }

    #[test]
    fn ring_mass_and_peak() {
        let m = ring(2.0, 5.0, 0.01, 0.05);
        assert!((m.mass() / (TAU * 2.0) - 1.0).abs() < 1e-3);
        // the sample nearest radius 2 on the x axis
        let i = (0..m.n).min_by(|&a, &b| {
            (m.offset(a) - 2.0)
                .abs()
                .total_cmp(&(m.offset(b) - 2.0).abs())
        });
        let i = i.unwrap();
        let j = m.n / 2;
        let p = Vec2::new(m.offset(i), m.offset(j));
        let d = p.norm() - 2.0;
        let expect = m.peak() * (-d * d / (2.0 * 0.05 * 0.05)).exp();
        assert!((m.get(i, j) - expect).abs() < 1e-12 * m.peak());
        assert!(expect > 0.99 * m.peak());
    }

    #[test]
    fn ring_tail_is_small() {
        let m = ring(1.0, 3.0, 0.01, 0.05);
        for i in 0..m.n {
            for j in 0..m.n {
                let r = m.offset(i).hypot(m.offset(j));
                if (r - 1.0).abs() >= 5.0 * 0.05 {
                    assert!(m.get(i, j) < 4e-6 * m.peak());
                }
            }
        }
    }

    #[test]
    fn ring_preconditions() {
        let c = Circle::centered(2.0).unwrap();
        let g = GridSpec::new(6.0, 0.03).unwrap();
        assert!(matches!(
            build_mollified_ring(&c, g, 0.05),
            Err(Error::Unresolved { .. })
        ));
        let g = GridSpec::new(4.2, 0.01).unwrap();
        assert!(matches!(
            build_mollified_ring(&c, g, 0.05),
            Err(Error::GridClipped(_))
        ));
        assert!(GridSpec::new(1.0, 0.0).is_err());
    }

    #[test]
    fn conv_mass_multiplies() {
        let a = ring(0.5, 5.0, 0.02, 0.06);
        let b = ring(1.0, 5.0, 0.02, 0.06);
        let c = grid_conv(&a, &b).unwrap();
        assert!((c.mass() - a.mass() * b.mass()).abs() < 1e-9 * c.mass());
    }

    #[test]
    fn conv_commutes_bitwise() {
        let c1 = Circle::new(Vec2::new(0.3, 0.0), 0.6).unwrap();
        let c2 = Circle::new(Vec2::new(0.0, -0.2), 0.9).unwrap();
        let g = GridSpec::new(5.0, 0.02).unwrap();
        let a = build_mollified_ring(&c1, g, 0.05).unwrap();
        let b = build_mollified_ring(&c2, g, 0.05).unwrap();
        let ab = grid_conv(&a, &b).unwrap();
        let ba = grid_conv(&b, &a).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn conv_rejects_clipped_support() {
        let a = ring(1.0, 3.0, 0.02, 0.05);
        let b = ring(1.0, 3.0, 0.02, 0.05);
        assert!(matches!(grid_conv(&a, &b), Err(Error::GridClipped(_))));
        let c = ring(1.0, 3.2, 0.02, 0.05);
        assert!(grid_conv(&a, &c).is_err());
    }

    #[test]
    fn conv_of_point_like_grids_shifts_correctly() {
        // a single spike at the center convolved with a ring reproduces it
        let b = ring(0.5, 3.0, 0.02, 0.05);
        let mut a = b.clone();
        a.radius = 0.0;
        a.values.iter_mut().for_each(|v| *v = 0.0);
        let n = a.n;
        // n even: pick the sample just right/above the geometric center
        let mid = n / 2;
        a.values[mid * n + mid] = 1.0 / (a.spacing * a.spacing);
        let c = grid_conv(&a, &b).unwrap();
        // spike sits at offset +h/2 from the center in each axis; so does
        // every sample of b relative to its own grid, which lines up with c
        for j in 0..n {
            for i in 0..n {
                let expect = {
                    let ox = c.offset(i) - a.offset(mid);
                    let oy = c.offset(j) - a.offset(mid);
                    let d = ox.hypot(oy) - 0.5;
                    b.peak() * (-d * d / (2.0 * 0.05 * 0.05)).exp()
                };
                assert!((c.get(i, j) - expect).abs() < 1e-9, "({i},{j})");
            }
        }
    }

    #[test]
    fn mollified_profile_converges_and_tends_to_closed_form() {
        let k = ConvKernel::new(2.0, 3.0).unwrap();
        for &rho in &[1.4, 2.5, 13f64.sqrt(), 4.5] {
            let a = mollified_profile(2.0, 3.0, 0.05, rho);
            let b = mollified_profile(2.0, 3.0, 1e-4, rho);
            assert!(((b - k.eval(rho)) / k.eval(rho)).abs() < 1e-5, "rho {rho}");
            assert!(((a - k.eval(rho)) / k.eval(rho)).abs() < 0.05);
        }
        // total mass of the smoothed profile
        let rule = QuadratureRule::gauss_legendre(0.5, 5.6, 400).unwrap();
        let m = rule.apply(|r| mollified_profile(2.0, 3.0, 0.05, r) * TAU * r);
        assert!((m / k.expected_mass() - 1.0).abs() < 1e-3, "{m}");
    }

    #[test]
    fn small_grid_check_agrees() {
        let c1 = Circle::centered(0.6).unwrap();
        let c2 = Circle::centered(1.0).unwrap();
        let r = grid_conv_check(&c1, &c2, GridSpec::new(5.0, 0.01).unwrap(), 0.05).unwrap();
        assert!(r.max_rel_error < 0.05, "{}", r.max_rel_error);
        assert!(r.mass_rel_error() < 5e-3);
        assert!(!r.samples.is_empty());
    }
}
