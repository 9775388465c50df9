use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;

use super::rng::{chunk_rng, chunks};
use crate::error::{Error, Result};
use crate::geometry::{Circle, Vec2};

/// Equal-width bins on `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinRange {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl BinRange {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
            return Err(Error::InvalidInterval { a: lo, b: hi });
        }
        if bins == 0 {
            return Err(Error::InvalidGrid("need at least one bin".into()));
        }
        Ok(Self { lo, hi, bins })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }
}

/// Counts of sampled radii `ρ = ‖p − (b1 + b2)‖`.
///
/// Samples below or above the binned range land in `underflow` / `overflow`;
/// `min_rho` and `max_rho` are the extreme sampled radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    pub total_samples: u64,
    /// `4π² R1 R2`, the total mass of the convolution.
    pub mass_scale: f64,
    pub min_rho: f64,
    pub max_rho: f64,
}

impl RadialHistogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }

    /// Planar density estimate in bin `i`: the bin's share of the mass spread
    /// over the annulus `π(e₁² − e₀²)`.
    pub fn density(&self, i: usize) -> f64 {
        let (e0, e1) = (self.edges[i], self.edges[i + 1]);
        self.counts[i] as f64 / self.total_samples as f64 * self.mass_scale
            / (PI * (e1 * e1 - e0 * e0))
    }
}

#[derive(Clone)]
struct Tally {
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
    min_rho: f64,
    max_rho: f64,
}

impl Tally {
    fn new(bins: usize) -> Self {
        Self {
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
            min_rho: f64::INFINITY,
            max_rho: f64::NEG_INFINITY,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.min_rho = self.min_rho.min(other.min_rho);
        self.max_rho = self.max_rho.max(other.max_rho);
        self
    }
}

/// Offset of a uniformly sampled sum of points from `b1 + b2`: `R1 e(θ₁) + R2 e(θ₂)`.
///
/// The centers drop out algebraically, so the offset is formed without them.
fn sample_offset<R: Rng>(rng: &mut R, r1: f64, r2: f64) -> Vec2 {
    let t1 = rng.random::<f64>() * TAU;
    let t2 = rng.random::<f64>() * TAU;
    r1 * Vec2::unit(t1) + r2 * Vec2::unit(t2)
}

/// Histogram of `ρ` over `[0, 1.1 (R1 + R2)]`.
pub fn mc_conv_histogram(
    c1: &Circle,
    c2: &Circle,
    samples: usize,
    bins: usize,
    seed: u64,
) -> Result<RadialHistogram> {
    let range = BinRange::new(0.0, 1.1 * (c1.radius() + c2.radius()), bins)?;
    mc_conv_histogram_in(c1, c2, samples, range, seed)
}

/// Histogram of `ρ` for `samples` independent draws of `θ₁, θ₂`.
///
/// Bit-identical for a given `(seed, samples, range)` regardless of thread
/// count.
pub fn mc_conv_histogram_in(
    c1: &Circle,
    c2: &Circle,
    samples: usize,
    range: BinRange,
    seed: u64,
) -> Result<RadialHistogram> {
    if samples == 0 {
        return Err(Error::InvalidGrid("need at least one sample".into()));
    }
    let (r1, r2) = (c1.radius(), c2.radius());
    let width = range.width();
    let tally = chunks(samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(chunk, n)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut t = Tally::new(range.bins);
            for _ in 0..n {
                let rho = sample_offset(&mut rng, r1, r2).norm();
                t.min_rho = t.min_rho.min(rho);
                t.max_rho = t.max_rho.max(rho);
                if rho < range.lo {
                    t.underflow += 1;
                } else if rho >= range.hi {
                    t.overflow += 1;
                } else {
                    let i = (((rho - range.lo) / width) as usize).min(range.bins - 1);
                    t.counts[i] += 1;
                }
            }
            t
        })
        .reduce(|| Tally::new(range.bins), Tally::merge);

    let edges = (0..=range.bins)
        .map(|i| range.lo + i as f64 * width)
        .collect();
    Ok(RadialHistogram {
        edges,
        counts: tally.counts,
        underflow: tally.underflow,
        overflow: tally.overflow,
        total_samples: samples as u64,
        mass_scale: 4.0 * PI * PI * r1 * r2,
        min_rho: tally.min_rho,
        max_rho: tally.max_rho,
    })
}

/// Sample counts per angular sector about `b1 + b2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorCounts {
    pub center: Vec2,
    pub counts: Vec<u64>,
    pub total_samples: u64,
}

impl SectorCounts {
    pub fn expected(&self) -> f64 {
        self.total_samples as f64 / self.counts.len() as f64
    }

    /// Largest `|count − expected|` over sectors.
    pub fn max_deviation(&self) -> f64 {
        let e = self.expected();
        self.counts
            .iter()
            .map(|&c| (c as f64 - e).abs())
            .fold(0.0, f64::max)
    }

    /// Whether every sector lies within `k` Poisson standard deviations.
    pub fn within_sigma(&self, k: f64) -> bool {
        self.max_deviation() <= k * self.expected().sqrt()
    }
}

/// Bins sample angles about `b1 + b2` into `sectors` equal sectors.
pub fn mc_radiality_check(
    c1: &Circle,
    c2: &Circle,
    samples: usize,
    sectors: usize,
    seed: u64,
) -> Result<SectorCounts> {
    if sectors == 0 {
        return Err(Error::InvalidGrid("need at least one sector".into()));
    }
    let (r1, r2) = (c1.radius(), c2.radius());
    let width = TAU / sectors as f64;
    let counts = chunks(samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(chunk, n)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut counts = vec![0u64; sectors];
            for _ in 0..n {
                let d = sample_offset(&mut rng, r1, r2);
                let mut angle = d.y.atan2(d.x);
                if angle < 0.0 {
                    angle += TAU;
                }
                counts[((angle / width) as usize).min(sectors - 1)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; sectors],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(SectorCounts {
        center: c1.center() + c2.center(),
        counts,
        total_samples: samples as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ConvKernel;

    fn circles(r1: f64, r2: f64) -> (Circle, Circle) {
        (Circle::centered(r1).unwrap(), Circle::centered(r2).unwrap())
    }

    #[test]
    fn no_mass_outside_support() {
        let (c1, c2) = circles(2.0, 3.0);
        let h = mc_conv_histogram(&c1, &c2, 200_000, 110, 1).unwrap();
        let w = h.edges[1] - h.edges[0];
        for i in 0..h.bins() {
            if h.edges[i + 1] < 1.0 - w || h.edges[i] > 5.0 + w {
                assert_eq!(h.counts[i], 0, "bin {i}");
            }
        }
        assert!(h.min_rho >= 1.0 - 1e-12 && h.max_rho <= 5.0 + 1e-12);
        assert_eq!(
            h.counts.iter().sum::<u64>() + h.underflow + h.overflow,
            200_000
        );
    }

    #[test]
    fn density_near_minimum_is_two() {
        let (c1, c2) = circles(2.0, 3.0);
        let range = BinRange::new(1.0, 5.0, 40).unwrap();
        let h = mc_conv_histogram_in(&c1, &c2, 2_000_000, range, 11).unwrap();
        let target = 13f64.sqrt();
        let i = ((target - 1.0) / range.width()) as usize;
        assert!((h.density(i) - 2.0).abs() < 0.05, "{}", h.density(i));
    }

    #[test]
    fn unit_circles_at_rho_one() {
        let (c1, c2) = circles(1.0, 1.0);
        let range = BinRange::new(0.95, 1.05, 1).unwrap();
        let h = mc_conv_histogram_in(&c1, &c2, 4_000_000, range, 5).unwrap();
        let k = ConvKernel::new(1.0, 1.0).unwrap();
        let rel = (h.density(0) - k.eval(1.0)) / k.eval(1.0);
        assert!(rel.abs() < 0.01, "rel {rel}");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (c1, c2) = circles(1.5, 0.7);
        let a = mc_conv_histogram(&c1, &c2, 300_000, 50, 9).unwrap();
        let b = mc_conv_histogram(&c1, &c2, 300_000, 50, 9).unwrap();
        assert_eq!(a, b);
        let c = mc_conv_histogram(&c1, &c2, 300_000, 50, 10).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let (c1, c2) = circles(1.0, 2.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_conv_histogram(&c1, &c2, 500_000, 64, 3).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn histogram_ignores_centers() {
        let (c1, c2) = circles(2.0, 3.0);
        let s1 = c1.shifted(Vec2::new(1.0, 0.0));
        let s2 = c2.shifted(Vec2::new(0.0, 2.0));
        let a = mc_conv_histogram(&c1, &c2, 100_000, 30, 4).unwrap();
        let b = mc_conv_histogram(&s1, &s2, 100_000, 30, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sectors_uniform() {
        let (c1, c2) = circles(2.0, 3.0);
        let s = mc_radiality_check(&c1, &c2, 1_000_000, 16, 2).unwrap();
        assert!(s.within_sigma(4.0));
        let s1 = c1.shifted(Vec2::new(1.0, 0.0));
        let s2 = c2.shifted(Vec2::new(0.0, 2.0));
        let t = mc_radiality_check(&s1, &s2, 1_000_000, 16, 2).unwrap();
        assert_eq!(t.center, Vec2::new(1.0, 2.0));
        assert!(t.within_sigma(4.0));
        let one = mc_radiality_check(&c1, &c2, 1000, 1, 2).unwrap();
        assert_eq!(one.counts, vec![1000]);
        assert!(mc_radiality_check(&c1, &c2, 1000, 0, 2).is_err());
    }

    #[test]
    fn bad_inputs() {
        let (c1, c2) = circles(1.0, 1.0);
        assert!(mc_conv_histogram(&c1, &c2, 0, 10, 1).is_err());
        assert!(mc_conv_histogram(&c1, &c2, 10, 0, 1).is_err());
        assert!(BinRange::new(2.0, 1.0, 4).is_err());
    }
}
