//! Command-line surface: profile and surface emitters plus one command per
//! family of checks.
//!
//! Check commands print one `PASS`/`FAIL` line per check and return exit code
//! 0 when everything passes, 1 otherwise. Invalid configurations return 2.
//! Artifacts are assembled in memory and written in one go, so a failing run
//! never leaves a half-written file behind.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Circle, RadialProfile, Vec2};
use crate::hankel::{
    conv_transform_closed_form, hankel_of_conv, hankel_transform, neumann_product_check,
};
use crate::kernel::ConvKernel;
use crate::operators::{circle_average, pair_with_test, restrict_to_circle, Field2D, RingMeasure};
use crate::oracle::bessel::{bisect_zero, j0_integral, j0_long_series, J0_ZEROS};
use crate::oracle::{
    grid_conv_check, mc_conv_histogram_in, mc_radiality_check, BinRange, GridSpec,
};
use crate::special::{bessel_j0, QuadratureRule};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// CSV of the radial profile over [0, R1+R2+1]
    Profile,
    /// CSV grid or PGM image of the convolution around b1+b2
    Surface,
    /// Monte Carlo histogram, leakage and radiality checks
    McCheck,
    /// Mollified-ring grid convolution check
    GridCheck,
    /// Hankel transform identity and Gaussian round trip
    HankelCheck,
    /// Bessel product formula and J0 accuracy
    NeumannCheck,
    /// Total mass against 4π² R1 R2
    MassCheck,
    /// Root-finding path against the closed form, interior minimum
    RootsCheck,
    /// Circle averaging, restriction and pairing identities
    CircleAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Pgm,
}

/// One run of the tool. Unset knobs fall back to per-command defaults.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "ringconv",
    version,
    about = "Convolution of two circle impulses: profiles, surfaces and checks",
    allow_negative_numbers = true
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    pub r1: f64,
    #[arg(long, default_value_t = 3.0, value_parser = positive)]
    pub r2: f64,
    /// Center of the first circle, as x,y
    #[arg(long, default_value = "0,0", value_parser = parse_vec2, allow_hyphen_values = true)]
    pub b1: Vec2,
    /// Center of the second circle, as x,y
    #[arg(long, default_value = "0,0", value_parser = parse_vec2, allow_hyphen_values = true)]
    pub b2: Vec2,

    /// Monte Carlo samples [default: 10000000]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Histogram bins [default: 200]
    #[arg(long)]
    pub bins: Option<usize>,
    /// Quadrature nodes [default: per command]
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Mollifier width [default: 0.05]
    #[arg(long, value_parser = positive)]
    pub epsilon: Option<f64>,
    /// Sample spacing [default: 0.01, surface 0.05]
    #[arg(long, value_parser = positive)]
    pub spacing: Option<f64>,
    /// Side of the square window [default: 12]
    #[arg(long, value_parser = positive)]
    pub extent: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Artifact path; profile and surface write to stdout without it
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| "expected two numbers as x,y".to_string())?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    let v = Vec2::new(x, y);
    if v.is_finite() {
        Ok(v)
    } else {
        Err("coordinates must be finite".into())
    }
}

/// A rejected configuration, naming the flag at fault.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid value for {flag}: {message}")]
pub struct ConfigError {
    pub flag: &'static str,
    pub message: String,
}

fn bad(flag: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        flag,
        message: message.into(),
    }
}

impl RunConfig {
    /// Defaults: R1 = 2, R2 = 3, both circles at the origin.
    pub fn new(command: Command) -> Self {
        Self::parse_from(["ringconv", command.to_possible_value().unwrap().get_name()])
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(10_000_000)
    }

    pub fn bins(&self) -> usize {
        self.bins.unwrap_or(200)
    }

    pub fn nodes(&self) -> usize {
        self.nodes.unwrap_or(match self.command {
            Command::NeumannCheck => 4096,
            Command::MassCheck => 64,
            _ => 256,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(0.05)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing.unwrap_or(match self.command {
            Command::Surface => 0.05,
            _ => 0.01,
        })
    }

    pub fn extent(&self) -> f64 {
        self.extent.unwrap_or(12.0)
    }

    pub fn kernel(&self) -> ConvKernel {
        ConvKernel::with_center(self.r1, self.r2, self.b1 + self.b2)
            .expect("validated radii and centers")
    }

    fn circles(&self) -> (Circle, Circle) {
        (
            Circle::new(self.b1, self.r1).expect("validated"),
            Circle::new(self.b2, self.r2).expect("validated"),
        )
    }

    /// Range checks on every knob, before any computation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (flag, v) in [("--r1", self.r1), ("--r2", self.r2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(flag, format!("radius must be positive, got {v}")));
            }
        }
        for (flag, v) in [("--b1", self.b1), ("--b2", self.b2)] {
            if !v.is_finite() {
                return Err(bad(flag, "center must be finite"));
            }
        }
        for (flag, v) in [
            ("--samples", self.samples),
            ("--bins", self.bins),
            ("--nodes", self.nodes),
        ] {
            if v == Some(0) {
                return Err(bad(flag, "must be at least 1"));
            }
        }
        for (flag, v) in [
            ("--epsilon", self.epsilon),
            ("--spacing", self.spacing),
            ("--extent", self.extent),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(bad(flag, format!("must be positive, got {v}")));
                }
            }
        }
        if self.format == Format::Pgm && self.command != Command::Surface {
            return Err(bad("--format", "pgm output is only available for surface"));
        }
        match self.command {
            Command::Surface | Command::GridCheck if self.extent() < 2.0 * self.spacing() => {
                Err(bad("--extent", "must span at least two samples"))
            }
            Command::GridCheck if self.epsilon() < 2.0 * self.spacing() => Err(bad(
                "--epsilon",
                format!("must be at least twice --spacing ({})", self.spacing()),
            )),
            Command::GridCheck => {
                let need = 2.0 * (self.r1 + self.r2 + 10.0 * self.epsilon());
                if self.extent() < need {
                    Err(bad(
                        "--extent",
                        format!("convolution support needs at least {need}"),
                    ))
                } else {
                    Ok(())
                }
            }
            Command::Profile if self.spacing() > self.r1 + self.r2 + 1.0 => {
                Err(bad("--spacing", "larger than the profile range"))
            }
            _ => Ok(()),
        }
    }

    /// Configuration recorded in artifact headers.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "r1={} r2={} b1={} b2={} seed={}",
            self.r1, self.r2, self.b1, self.b2, self.seed
        );
        match self.command {
            Command::Profile => write!(s, " spacing={}", self.spacing()),
            Command::Surface => write!(s, " extent={} spacing={}", self.extent(), self.spacing()),
            _ => Ok(()),
        }
        .unwrap();
        s
    }
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// `inf` for positive infinity.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Collects check results and renders the report lines.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    failed: usize,
}

impl Report {
    /// Records `error < tol` for the named check.
    pub fn check(&mut self, name: &str, error: f64, tol: f64, detail: impl AsRef<str>) {
        let pass = error < tol;
        if !pass {
            self.failed += 1;
        }
        let detail = detail.as_ref();
        let mut line = format!(
            "{} {name}: error={} tol={}",
            if pass { "PASS" } else { "FAIL" },
            fmt_short(error),
            fmt_short(tol)
        );
        if !detail.is_empty() {
            write!(line, " ({detail})").unwrap();
        }
        self.lines.push(line);
    }

    /// Records a yes/no check.
    pub fn assert(&mut self, name: &str, ok: bool, detail: impl AsRef<str>) {
        if !ok {
            self.failed += 1;
        }
        let mut line = format!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !detail.as_ref().is_empty() {
            write!(line, " ({})", detail.as_ref()).unwrap();
        }
        self.lines.push(line);
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }
}

fn fmt_short(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

/// Runs `config`, writing report lines (or the artifact, when no output path
/// is set for profile and surface) to `out`. Returns the process exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> io::Result<i32> {
    if let Err(e) = config.validate() {
        writeln!(out, "error: {e}")?;
        return Ok(EXIT_CONFIG);
    }
    let (artifact, report) = match config.command {
        Command::Profile => (Some(profile_csv(config)), None),
        Command::Surface => (Some(surface(config)), None),
        Command::McCheck => mc_check(config),
        Command::GridCheck => match grid_check(config) {
            Ok(r) => r,
            Err(e) => {
                writeln!(out, "error: {e}")?;
                return Ok(EXIT_CONFIG);
            }
        },
        Command::HankelCheck => hankel_check(config),
        Command::NeumannCheck => (None, Some(neumann_check(config))),
        Command::MassCheck => (None, Some(mass_check(config))),
        Command::RootsCheck => (None, Some(roots_check(config))),
        Command::CircleAverage => (None, Some(circle_average_check(config))),
    };

    if let Some(artifact) = artifact {
        match &config.output {
            Some(path) => std::fs::write(path, artifact)?,
            None if report.is_none() => out.write_all(artifact.as_bytes())?,
            None => {}
        }
    }
    match report {
        Some(report) => {
            for line in report.lines() {
                writeln!(out, "{line}")?;
            }
            Ok(if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
        None => Ok(EXIT_PASS),
    }
}

/// Radii sampled by `profile`: a uniform grid plus the two endpoints and the
/// interior minimum.
pub fn profile_radii(k: &ConvKernel, spacing: f64) -> Vec<f64> {
    let (lo, hi) = k.support_interval();
    let end = hi + 1.0;
    let steps = (end / spacing).ceil() as usize;
    let mut radii: Vec<f64> = (0..=steps)
        .map(|i| (i as f64 * spacing).min(end))
        .chain([lo, hi, k.minimum_radius()])
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

fn profile_csv(config: &RunConfig) -> String {
    let k = config.kernel();
    let mut s = String::from("rho,value\n");
    for rho in profile_radii(&k, config.spacing()) {
        writeln!(s, "{},{}", fmt17(rho), fmt17(k.eval(rho))).unwrap();
    }
    s
}

fn surface(config: &RunConfig) -> String {
    let k = config.kernel();
    let c = k.center_sum();
    let h = config.spacing();
    let m = ((config.extent() / h).round() as usize).max(1);
    let mid = 0.5 * (m - 1) as f64;
    let coord = |i: usize| (i as f64 - mid) * h;
    // row 0 is the top of the image
    let mut values = Vec::with_capacity(m * m);
    for row in 0..m {
        let y = c.y + coord(m - 1 - row);
        for col in 0..m {
            values.push((
                c.x + coord(col),
                y,
                k.eval_2d(Vec2::new(c.x + coord(col), y)),
            ));
        }
    }
    match config.format {
        Format::Csv => {
            let mut s = String::from("x,y,value\n");
            for (x, y, v) in &values {
                writeln!(s, "{},{},{}", fmt17(*x), fmt17(*y), fmt17(*v)).unwrap();
            }
            s
        }
        Format::Pgm => {
            let clip = percentile_clip(values.iter().map(|v| v.2), 0.99);
            let mut s = format!(
                "P2\n# ringconv surface {} clip={}\n{m} {m}\n255\n",
                config.describe(),
                fmt17(clip)
            );
            for row in values.chunks(m) {
                for chunk in row.chunks(16) {
                    let line: Vec<String> = chunk
                        .iter()
                        .map(|v| gray_level(v.2, clip).to_string())
                        .collect();
                    s.push_str(&line.join(" "));
                    s.push('\n');
                }
            }
            s
        }
    }
}

/// Nearest-rank quantile `q` of the finite values.
pub fn percentile_clip(values: impl Iterator<Item = f64>, q: f64) -> f64 {
    let mut finite: Vec<f64> = values.filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return 0.0;
    }
    finite.sort_by(f64::total_cmp);
    let rank = ((q * finite.len() as f64).ceil() as usize).clamp(1, finite.len());
    finite[rank - 1]
}

/// Linear map of `[0, clip]` onto `0..=255`; larger values (and infinity)
/// saturate.
pub fn gray_level(v: f64, clip: f64) -> u8 {
    if clip <= 0.0 || v <= 0.0 {
        return 0;
    }
    (v.min(clip) / clip * 255.0).round() as u8
}

fn mc_check(config: &RunConfig) -> (Option<String>, Option<Report>) {
    let mut report = Report::default();
    let k = config.kernel();
    let (lo, hi) = k.support_interval();
    let (c1, c2) = config.circles();
    let concentric = (
        Circle::centered(config.r1).expect("validated"),
        Circle::centered(config.r2).expect("validated"),
    );
    let samples = config.samples();
    let range = BinRange::new(lo, hi, config.bins()).expect("validated");
    let width = range.width();

    let shifted = mc_conv_histogram_in(&c1, &c2, samples, range, config.seed).expect("validated");
    let base = mc_conv_histogram_in(&concentric.0, &concentric.1, samples, range, config.seed)
        .expect("validated");

    let trim = 0.05 * (hi - lo);
    let mut worst: f64 = 0.0;
    let mut csv = String::from("rho_lo,rho_hi,count,density,closed_form\n");
    for i in 0..shifted.bins() {
        let mid = shifted.midpoint(i);
        let exact = k.eval(mid);
        let density = shifted.density(i);
        writeln!(
            csv,
            "{},{},{},{},{}",
            fmt17(shifted.edges[i]),
            fmt17(shifted.edges[i + 1]),
            shifted.counts[i],
            fmt17(density),
            fmt17(exact)
        )
        .unwrap();
        if mid >= lo + trim && mid <= hi - trim {
            worst = worst.max(((density - exact) / exact).abs());
        }
    }
    report.check(
        "mc-density",
        worst,
        0.02,
        format!(
            "max relative error over bins centered in [{}, {}]",
            lo + trim,
            hi - trim
        ),
    );
    report.assert(
        "mc-zero-leakage",
        shifted.min_rho >= lo - width && shifted.max_rho <= hi + width,
        format!(
            "sampled rho in [{}, {}]",
            fmt17(shifted.min_rho),
            fmt17(shifted.max_rho)
        ),
    );

    const SECTORS: usize = 16;
    for (name, (a, b)) in [("concentric", concentric), ("shifted", (c1, c2))] {
        let s = mc_radiality_check(&a, &b, samples, SECTORS, config.seed).expect("validated");
        report.check(
            &format!("mc-radiality-{name}"),
            s.max_deviation() / s.expected().sqrt(),
            4.0,
            format!("max sector deviation in Poisson sigmas about {}", s.center),
        );
    }
    report.assert(
        "mc-shift-identity",
        shifted == base,
        "histograms for shifted and concentric centers are identical",
    );
    (Some(csv), Some(report))
}

fn grid_check(config: &RunConfig) -> crate::Result<(Option<String>, Option<Report>)> {
    let (c1, c2) = config.circles();
    let spec = GridSpec::new(config.extent(), config.spacing())?;
    let r = grid_conv_check(&c1, &c2, spec, config.epsilon())?;
    let mut report = Report::default();
    report.check(
        "grid-profile",
        r.max_rel_error,
        0.05,
        format!(
            "max relative error vs smoothed closed form on [{}, {}]",
            r.trimmed.0, r.trimmed.1
        ),
    );
    report.check(
        "grid-mass",
        r.mass_rel_error(),
        0.005,
        format!(
            "grid mass {} vs {}",
            fmt17(r.grid_mass),
            fmt17(r.expected_mass)
        ),
    );
    let mut csv = String::from("rho,grid,smoothed,closed_form\n");
    for s in &r.samples {
        writeln!(
            csv,
            "{},{},{},{}",
            fmt17(s.rho),
            fmt17(s.grid),
            fmt17(s.smoothed),
            fmt17(s.closed_form)
        )
        .unwrap();
    }
    Ok((Some(csv), Some(report)))
}

fn hankel_check(config: &RunConfig) -> (Option<String>, Option<Report>) {
    let k = config.kernel();
    let n = config.nodes();
    let scale = k.expected_mass();
    let mut worst: f64 = 0.0;
    let mut csv = String::from("r,numeric,closed_form\n");
    for i in 0..=40 {
        let r = i as f64 * 0.05;
        let numeric = hankel_of_conv(&k, r, n).expect("validated");
        let exact = conv_transform_closed_form(&k, r);
        worst = worst.max((numeric - exact).abs());
        writeln!(csv, "{},{},{}", fmt17(r), fmt17(numeric), fmt17(exact)).unwrap();
    }
    let mut report = Report::default();
    report.check(
        "hankel-conv-identity",
        worst / scale,
        1e-8,
        format!("sup over 41 r in [0, 2] relative to (2π)² R1 R2, n = {n}"),
    );
    report.check(
        "hankel-self-inverse",
        gaussian_round_trip(),
        1e-6,
        "Gaussian transformed twice, sup over r in [0, 3]",
    );
    (Some(csv), Some(report))
}

/// Sup-norm error of transforming `exp(−πρ²)` twice, over `r ∈ [0, 3]`.
pub fn gaussian_round_trip() -> f64 {
    const CUTOFF: f64 = 6.0;
    let rule = QuadratureRule::gauss_legendre(0.0, CUTOFF, 160).expect("static rule");
    let once: Vec<f64> = rule
        .nodes()
        .iter()
        .map(|&r| hankel_transform(&RadialProfile::gaussian(), r, &rule).expect("static rule"))
        .collect();
    // the first transform, tabulated on the rule's own nodes
    let nodes = rule.nodes().to_vec();
    let table: Vec<(f64, f64)> = nodes.into_iter().zip(once).collect();
    (0..=60)
        .map(|i| {
            let rho = i as f64 * 0.05;
            let back = TAU
                * table
                    .iter()
                    .zip(rule.weights())
                    .map(|(&(r, v), &w)| w * v * bessel_j0(TAU * r * rho) * r)
                    .sum::<f64>();
            (back - (-PI * rho * rho).exp()).abs()
        })
        .fold(0.0, f64::max)
}

fn neumann_check(config: &RunConfig) -> Report {
    let n = config.nodes();
    let mut report = Report::default();
    let r_max = 50.0 / (TAU * (config.r1 + config.r2));
    let worst = (0..=40)
        .map(|i| {
            let (l, r) = neumann_product_check(config.r1, config.r2, r_max * i as f64 / 40.0, n);
            (l - r).abs()
        })
        .fold(0.0, f64::max);
    report.check(
        "neumann-product",
        worst,
        1e-10,
        format!("41 r with 2πr(R1+R2) ≤ 50, n = {n}"),
    );

    let series_err = (0..=800)
        .map(|i| {
            let x = i as f64 * 0.01;
            (bessel_j0(x) - j0_long_series(x)).abs()
        })
        .fold(0.0, f64::max);
    report.check(
        "j0-series",
        series_err,
        1e-10,
        "against 80-term series on [0, 8]",
    );
    let wide_err = (0..=5000)
        .map(|i| {
            let x = i as f64 * 0.01;
            (bessel_j0(x) - j0_integral(x, 256)).abs()
        })
        .fold(0.0, f64::max);
    report.check(
        "j0-wide",
        wide_err,
        1e-10,
        "against the integral form on [0, 50]",
    );
    let zero_err = J0_ZEROS
        .iter()
        .map(|&z| {
            let found = bisect_zero(|x| j0_integral(x, 256), z - 0.1, z + 0.1, 1e-14)
                .expect("tabulated zero is bracketed");
            bessel_j0(found).abs().max((found - z).abs())
        })
        .fold(0.0, f64::max);
    report.check("j0-zeros", zero_err, 1e-10, "first five zeros");
    report
}

fn mass_check(config: &RunConfig) -> Report {
    let k = config.kernel();
    let n = config.nodes();
    let mass = k.total_mass(n).expect("validated");
    let expected = k.expected_mass();
    let mut report = Report::default();
    report.check(
        "mass",
        (mass - expected).abs() / expected,
        1e-12,
        format!(
            "computed {} expected 4π² R1 R2 = {}, n = {n}",
            fmt17(mass),
            fmt17(expected)
        ),
    );
    report
}

fn roots_check(config: &RunConfig) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = Report::default();

    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let k = random_kernel(&mut rng);
        let (lo, hi) = k.support_interval();
        let rho = lo + (hi - lo) * rng.random_range(1e-6..1.0 - 1e-6);
        if k.classify(rho) != crate::SupportClass::Interior {
            continue;
        }
        let via = k.eval_via_roots(rho, 1e-13).expect("interior");
        let direct = k.eval(rho);
        worst = worst.max(((via - direct) / direct).abs());
    }
    report.check(
        "roots-agree",
        worst,
        1e-9,
        "1000 random interior triples, radii in [0.1, 5]",
    );

    let mut worst: f64 = 0.0;
    let mut strict = true;
    let configured = config.kernel();
    for k in std::iter::once(configured).chain((0..100).map(|_| random_kernel(&mut rng))) {
        let rho = k.minimum_radius();
        let v = k.eval(rho);
        worst = worst.max((v - 2.0).abs());
        strict &= k.eval(rho * 1.01) > v && k.eval(rho * 0.99) > v;
    }
    report.check(
        "interior-minimum",
        worst,
        1e-12,
        "value 2 at ρ² = R1² + R2²",
    );
    report.assert("interior-minimum-strict", strict, "larger at ±1% of ρ");
    report
}

fn random_kernel(rng: &mut ChaCha8Rng) -> ConvKernel {
    ConvKernel::new(rng.random_range(0.1..5.0), rng.random_range(0.1..5.0)).expect("positive radii")
}

fn circle_average_check(config: &RunConfig) -> Report {
    let n = config.nodes();
    let c = Circle::centered(config.r1).expect("validated");
    let x = config.b1 + Vec2::new(0.7, -0.3);
    let r = config.r1;
    let mut report = Report::default();

    let constant = Field2D::analytic(|_| 1.0);
    let linear = Field2D::analytic(|p| p.x);
    let square = Field2D::analytic(|p| p.norm_sq());
    let err = [
        (circle_average(&constant, &c, x, n) - TAU * r).abs(),
        (circle_average(&linear, &c, x, n) - TAU * r * x.x).abs(),
        (circle_average(&square, &c, x, n) - TAU * r * (x.norm_sq() + r * r)).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    report.check(
        "circle-average-analytic",
        err,
        1e-10,
        format!("constant, x1, |x|², n = {n}"),
    );

    let radial = Field2D::analytic(|p| (-p.norm_sq()).exp() + p.norm());
    let ring = restrict_to_circle(&radial, &c);
    let expect = (-r * r).exp() + r;
    let err = (0..1000)
        .map(|j| (ring.density(TAU * j as f64 / 1000.0) - expect).abs())
        .fold(0.0, f64::max);
    report.check(
        "radial-restriction",
        err,
        1e-12,
        "density equals profile at R",
    );

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (f, phi) = random_smooth_pair(&mut rng);
        let lhs = pair_with_test(&restrict_to_circle(&f, &c), &phi, 1024);
        // different node counts, so the two sides are independent quadratures
        let rhs = pair_with_test(&RingMeasure::uniform(c), &f.product(&phi), 768);
        worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
    }
    report.check(
        "pairing-identity",
        worst,
        1e-10,
        "20 random smooth pairs, n = 1024 and 768",
    );
    report
}

/// A random smooth function and a random smooth test function.
pub fn random_smooth_pair<R: Rng>(rng: &mut R) -> (Field2D, Field2D) {
    let a: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
    let b: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
    let f = Field2D::analytic(move |p| a[0] + a[1] * (a[2] * p.x).sin() + a[3] * p.x * p.y);
    let phi = Field2D::analytic(move |p| {
        (2.5 + b[0] * (b[1] * p.y).cos()).abs() * (-(p.norm_sq()) / (1.0 + b[2] * b[2])).exp()
            + b[3] * b[3]
            + 0.1
    });
    (f, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let cfg =
            RunConfig::try_parse_from(std::iter::once("ringconv").chain(args.iter().copied()))
                .unwrap();
        let mut out = Vec::new();
        let code = run(&cfg, &mut out).unwrap();
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn fmt17_matches_printf_g() {
        assert_eq!(fmt17(0.0), "0");
        assert_eq!(fmt17(2.0), "2");
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(13f64.sqrt()), "3.6055512754639891");
        assert_eq!(fmt17(f64::INFINITY), "inf");
        assert_eq!(fmt17(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt17(1e20), "1e+20");
        assert_eq!(fmt17(-2.5), "-2.5");
        assert_eq!(fmt17(4.0 * PI * PI), "39.478417604357432");
    }

    #[test]
    fn defaults_match_reference_figure() {
        let c = RunConfig::new(Command::Profile);
        assert_eq!((c.r1, c.r2), (2.0, 3.0));
        assert_eq!((c.b1, c.b2), (Vec2::ZERO, Vec2::ZERO));
        assert_eq!(c.spacing(), 0.01);
        assert_eq!(RunConfig::new(Command::NeumannCheck).nodes(), 4096);
    }

    #[test]
    fn profile_has_collapse_point_zero_branch_and_inf() {
        let (code, csv) = run_args(&["profile", "--r1", "2", "--r2", "3"]);
        assert_eq!(code, 0);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("rho,value"));
        let rows: Vec<(f64, String)> = lines
            .map(|l| {
                let (r, v) = l.split_once(',').unwrap();
                (r.parse().unwrap(), v.to_string())
            })
            .collect();
        let at = |rho: f64| rows.iter().find(|(r, _)| (*r - rho).abs() < 1e-6).unwrap();
        let v: f64 = at(3.605551).1.parse().unwrap();
        assert!((v - 2.0).abs() < 1e-3);
        assert_eq!(at(1.0).1, "inf");
        assert_eq!(at(5.0).1, "inf");
        for (r, v) in &rows {
            if *r < 1.0 || *r > 5.0 {
                assert_eq!(v, "0");
            }
        }
        assert!((rows.last().unwrap().0 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn negative_radius_names_flag() {
        let err = RunConfig::try_parse_from(["ringconv", "profile", "--r1", "2", "--r2", "-1"])
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("--r2"));

        let mut cfg = RunConfig::new(Command::Profile);
        cfg.r2 = -1.0;
        let mut out = Vec::new();
        assert_eq!(run(&cfg, &mut out).unwrap(), EXIT_CONFIG);
        assert!(String::from_utf8(out).unwrap().contains("--r2"));
    }

    #[test]
    fn validation_catches_knobs() {
        let mut cfg = RunConfig::new(Command::GridCheck);
        cfg.epsilon = Some(0.01);
        assert_eq!(cfg.validate().unwrap_err().flag, "--epsilon");
        let mut cfg = RunConfig::new(Command::GridCheck);
        cfg.extent = Some(8.0);
        assert_eq!(cfg.validate().unwrap_err().flag, "--extent");
        let mut cfg = RunConfig::new(Command::McCheck);
        cfg.samples = Some(0);
        assert_eq!(cfg.validate().unwrap_err().flag, "--samples");
        let mut cfg = RunConfig::new(Command::Profile);
        cfg.format = Format::Pgm;
        assert_eq!(cfg.validate().unwrap_err().flag, "--format");
    }

    #[test]
    fn centers_parse_with_negatives() {
        let cfg =
            RunConfig::try_parse_from(["ringconv", "surface", "--b1", "-1.5,2", "--b2", "0,-3"])
                .unwrap();
        assert_eq!(cfg.b1, Vec2::new(-1.5, 2.0));
        assert_eq!(cfg.b2, Vec2::new(0.0, -3.0));
        assert!(RunConfig::try_parse_from(["ringconv", "surface", "--b1", "1"]).is_err());
    }

    #[test]
    fn mass_check_passes() {
        let (code, out) = run_args(&["mass-check", "--r1", "1", "--r2", "1"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("PASS mass"));
        assert!(out.contains("39.47841760435743"));
    }

    #[test]
    fn pgm_header_and_range() {
        let (code, pgm) = run_args(&["surface", "--format", "pgm", "--spacing", "0.1"]);
        assert_eq!(code, 0);
        let mut lines = pgm.lines();
        assert_eq!(lines.next(), Some("P2"));
        assert!(lines
            .next()
            .unwrap()
            .starts_with("# ringconv surface r1=2 r2=3"));
        assert_eq!(lines.next(), Some("120 120"));
        assert_eq!(lines.next(), Some("255"));
        let px: Vec<u32> = lines
            .flat_map(|l| l.split(' '))
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(px.len(), 120 * 120);
        assert!(px.iter().all(|&v| v <= 255));
        assert!(px.contains(&255) && px.contains(&0));
    }

    #[test]
    fn clip_and_gray() {
        let v = (1..=100).map(f64::from).chain([f64::INFINITY]);
        assert_eq!(percentile_clip(v, 0.99), 99.0);
        assert_eq!(gray_level(f64::INFINITY, 10.0), 255);
        assert_eq!(gray_level(5.0, 10.0), 128);
        assert_eq!(gray_level(0.0, 10.0), 0);
        assert_eq!(percentile_clip(std::iter::empty(), 0.99), 0.0);
    }

    #[test]
    fn failing_report_exit_code() {
        let mut r = Report::default();
        r.check("x", 2.0, 1.0, "");
        assert!(!r.passed());
        assert!(r.lines()[0].starts_with("FAIL x"));
    }
}
