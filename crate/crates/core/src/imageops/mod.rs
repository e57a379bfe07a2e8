//! Single-plane image numerics: resizing and cropping protocols, synthetic
//! degradations, Haar wavelets and weight averaging.

mod degrade;
mod resize;
mod swa;
mod wavelet;

pub use degrade::{
    gaussian_blur, gaussian_blur_sigma, gaussian_kernel, gaussian_noise, resample_degrade,
    DegradationConfig, Severity,
};
pub use resize::{bilinear_resize, resize_short_side};
pub use swa::{swa_average, WeightSnapshot};
pub use wavelet::{haar_dwt2, haar_idwt2, WaveletQuad};

use rand::Rng;

use crate::rng::seeded;
use crate::{Error, Result};

/// Row-major grayscale plane, values nominally in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePlane {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl ImagePlane {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidPlane(format!(
                "dimensions must be positive, got {height}x{width}"
            )));
        }
        if data.len() != height * width {
            return Err(Error::InvalidPlane(format!(
                "{} values for a {height}x{width} plane",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPlane("non-finite pixel".into()));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::new(height, width, vec![value; height * width])
    }

    pub fn from_fn(height: usize, width: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(f(y, x));
            }
        }
        Self::new(height, width, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Sum of squares, with Neumaier compensation.
    pub fn energy(&self) -> f64 {
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for v in &self.data {
            let term = v * v;
            let t = sum + term;
            carry += if sum.abs() >= term.abs() {
                (sum - t) + term
            } else {
                (term - t) + sum
            };
            sum = t;
        }
        sum + carry
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn crop(&self, rect: CropRect) -> Result<ImagePlane> {
        if rect.top + rect.height > self.height || rect.left + rect.width > self.width {
            return Err(Error::CropTooLarge {
                h: self.height,
                w: self.width,
                crop_h: rect.top + rect.height,
                crop_w: rect.left + rect.width,
            });
        }
        ImagePlane::from_fn(rect.height, rect.width, |y, x| {
            self.get(rect.top + y, rect.left + x)
        })
    }

    /// Largest absolute pixel difference.
    pub fn max_abs_diff(&self, other: &ImagePlane) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Peak signal-to-noise ratio in dB for unit peak; infinite for identical
/// planes.
pub fn psnr(a: &ImagePlane, b: &ImagePlane) -> Result<f64> {
    if a.height != b.height || a.width != b.width {
        return Err(Error::LengthMismatch {
            left: a.data.len(),
            right: b.data.len(),
        });
    }
    let mse = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.data.len() as f64;
    Ok(if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CropRect {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

fn check_fit(h: usize, w: usize, crop_h: usize, crop_w: usize) -> Result<()> {
    if crop_h > h || crop_w > w || crop_h == 0 || crop_w == 0 {
        return Err(Error::CropTooLarge {
            h,
            w,
            crop_h,
            crop_w,
        });
    }
    Ok(())
}

pub fn center_crop(h: usize, w: usize, crop_h: usize, crop_w: usize) -> Result<CropRect> {
    check_fit(h, w, crop_h, crop_w)?;
    Ok(CropRect {
        top: (h - crop_h) / 2,
        left: (w - crop_w) / 2,
        height: crop_h,
        width: crop_w,
    })
}

/// `n` crops with top-left corners uniform over all in-bounds positions.
pub fn random_crops(
    h: usize,
    w: usize,
    crop_h: usize,
    crop_w: usize,
    n: usize,
    seed: u64,
) -> Result<Vec<CropRect>> {
    check_fit(h, w, crop_h, crop_w)?;
    let mut rng = seeded(seed);
    Ok((0..n)
        .map(|_| CropRect {
            top: rng.random_range(0..=h - crop_h),
            left: rng.random_range(0..=w - crop_w),
            height: crop_h,
            width: crop_w,
        })
        .collect())
}

/// Mean of per-patch scores.
pub fn aggregate_patch_scores(scores: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyList);
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}
