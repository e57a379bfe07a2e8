//! Synthetic degradations `T_s` at severity `s ∈ [0, 1]`. Severity 0 is the
//! identity for every kind, and strength grows monotonically with `s`.

use rand_distr::{Distribution, StandardNormal};

use super::{bilinear_resize, ImagePlane};
use crate::rng::seeded;
use crate::{Error, Result};

/// A degradation strength in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Severity(f64);

impl Severity {
    pub const ZERO: Severity = Severity(0.0);

    pub fn new(v: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&v) {
            Ok(Severity(v))
        } else {
            Err(Error::InvalidSeverity(v))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Severity {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Severity::new(v)
    }
}

/// Maps severity to physical strength for each degradation kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegradationConfig {
    /// Blur sigma (pixels) at severity 1.
    pub blur_sigma_max: f64,
    /// Noise standard deviation at severity 1.
    pub noise_std_max: f64,
    /// Fraction of each dimension removed by the resample round trip at
    /// severity 1.
    pub max_downscale: f64,
}

impl Default for DegradationConfig {
    fn default() -> Self {
        Self {
            blur_sigma_max: 5.0,
            noise_std_max: 0.2,
            max_downscale: 0.75,
        }
    }
}

impl DegradationConfig {
    pub fn blur(&self, p: &ImagePlane, severity: Severity) -> ImagePlane {
        gaussian_blur_sigma(p, severity.get() * self.blur_sigma_max)
    }

    pub fn noise(&self, p: &ImagePlane, severity: Severity, seed: u64) -> ImagePlane {
        let std = severity.get() * self.noise_std_max;
        if std == 0.0 {
            return p.clone();
        }
        let mut rng = seeded(seed);
        let data = p
            .data()
            .iter()
            .map(|&v| {
                let z: f64 = StandardNormal.sample(&mut rng);
                (v + std * z).clamp(0.0, 1.0)
            })
            .collect();
        ImagePlane::new(p.height(), p.width(), data).expect("noise keeps plane valid")
    }

    pub fn resample(&self, p: &ImagePlane, severity: Severity) -> ImagePlane {
        let factor = 1.0 - self.max_downscale * severity.get();
        let shrink = |d: usize| ((d as f64 * factor).round() as usize).clamp(1, d);
        let (h, w) = (shrink(p.height()), shrink(p.width()));
        if h == p.height() && w == p.width() {
            return p.clone();
        }
        bilinear_resize(&bilinear_resize(p, h, w), p.height(), p.width())
    }
}

/// Normalized 1-D Gaussian taps of radius `ceil(3σ)`; `[1]` for σ = 0.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / total).collect()
}

/// Mirror index without repeating the edge sample (`d c b | a b c d | c b a`).
fn reflect(i: i64, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as i64 - 1);
    let m = i.rem_euclid(period);
    (if m >= n as i64 { period - m } else { m }) as usize
}

fn convolve_rows(data: &[f64], height: usize, width: usize, kernel: &[f64]) -> Vec<f64> {
    let radius = (kernel.len() / 2) as i64;
    let mut out = Vec::with_capacity(data.len());
    for y in 0..height {
        let row = &data[y * width..(y + 1) * width];
        for x in 0..width as i64 {
            let acc = kernel
                .iter()
                .enumerate()
                .map(|(k, &wgt)| wgt * row[reflect(x + k as i64 - radius, width)])
                .sum();
            out.push(acc);
        }
    }
    out
}

fn transpose(data: &[f64], height: usize, width: usize) -> Vec<f64> {
    let mut out = vec![0.0; data.len()];
    for y in 0..height {
        for x in 0..width {
            out[x * height + y] = data[y * width + x];
        }
    }
    out
}

/// Separable Gaussian blur with reflect padding.
pub fn gaussian_blur_sigma(p: &ImagePlane, sigma: f64) -> ImagePlane {
    if sigma <= 0.0 {
        return p.clone();
    }
    let kernel = gaussian_kernel(sigma);
    let (h, w) = (p.height(), p.width());
    let rows = convolve_rows(p.data(), h, w, &kernel);
    let cols = convolve_rows(&transpose(&rows, h, w), w, h, &kernel);
    ImagePlane::new(h, w, transpose(&cols, w, h)).expect("blur keeps plane valid")
}

/// Gaussian blur with `σ = 5·severity` pixels.
pub fn gaussian_blur(p: &ImagePlane, severity: Severity) -> ImagePlane {
    DegradationConfig::default().blur(p, severity)
}

/// Additive Gaussian noise with `std = 0.2·severity`, clipped to `[0, 1]`.
pub fn gaussian_noise(p: &ImagePlane, severity: Severity, seed: u64) -> ImagePlane {
    DegradationConfig::default().noise(p, severity, seed)
}

/// Bilinear downscale by `1 − 0.75·severity` and back up to the original
/// size.
pub fn resample_degrade(p: &ImagePlane, severity: Severity) -> ImagePlane {
    DegradationConfig::default().resample(p, severity)
}
