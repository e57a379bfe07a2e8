//! Single-level orthonormal 2-D Haar transform.
//!
//! For each 2×2 block `[a b; c d]`:
//! `LL = (a+b+c+d)/2`, `LH = (a−b+c−d)/2`, `HL = (a+b−c−d)/2`,
//! `HH = (a−b−c+d)/2`. The transform is its own inverse up to re-interleaving,
//! and preserves energy.

use super::ImagePlane;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct WaveletQuad {
    pub ll: ImagePlane,
    pub lh: ImagePlane,
    pub hl: ImagePlane,
    pub hh: ImagePlane,
}

impl WaveletQuad {
    pub fn new(ll: ImagePlane, lh: ImagePlane, hl: ImagePlane, hh: ImagePlane) -> Result<Self> {
        let dims = |p: &ImagePlane| (p.height(), p.width());
        if [&lh, &hl, &hh].iter().any(|p| dims(p) != dims(&ll)) {
            return Err(Error::InvalidPlane(
                "sub-bands must share dimensions".into(),
            ));
        }
        Ok(Self { ll, lh, hl, hh })
    }

    pub fn energy(&self) -> f64 {
        self.ll.energy() + self.lh.energy() + self.hl.energy() + self.hh.energy()
    }

    pub fn bands(&self) -> [(&'static str, &ImagePlane); 4] {
        [
            ("ll", &self.ll),
            ("lh", &self.lh),
            ("hl", &self.hl),
            ("hh", &self.hh),
        ]
    }
}

pub fn haar_dwt2(p: &ImagePlane) -> Result<WaveletQuad> {
    let (h, w) = (p.height(), p.width());
    if h % 2 != 0 || w % 2 != 0 {
        return Err(Error::OddDimensions {
            height: h,
            width: w,
        });
    }
    let (bh, bw) = (h / 2, w / 2);
    let mut bands = [
        Vec::with_capacity(bh * bw),
        Vec::with_capacity(bh * bw),
        Vec::with_capacity(bh * bw),
        Vec::with_capacity(bh * bw),
    ];
    for y in 0..bh {
        for x in 0..bw {
            let a = p.get(2 * y, 2 * x);
            let b = p.get(2 * y, 2 * x + 1);
            let c = p.get(2 * y + 1, 2 * x);
            let d = p.get(2 * y + 1, 2 * x + 1);
            bands[0].push((a + b + c + d) / 2.0);
            bands[1].push((a - b + c - d) / 2.0);
            bands[2].push((a + b - c - d) / 2.0);
            bands[3].push((a - b - c + d) / 2.0);
        }
    }
    let [ll, lh, hl, hh] = bands.map(|data| ImagePlane::new(bh, bw, data));
    WaveletQuad::new(ll?, lh?, hl?, hh?)
}

pub fn haar_idwt2(q: &WaveletQuad) -> ImagePlane {
    let (bh, bw) = (q.ll.height(), q.ll.width());
    let (h, w) = (2 * bh, 2 * bw);
    let mut data = vec![0.0; h * w];
    for y in 0..bh {
        for x in 0..bw {
            let (ll, lh, hl, hh) = (
                q.ll.get(y, x),
                q.lh.get(y, x),
                q.hl.get(y, x),
                q.hh.get(y, x),
            );
            data[2 * y * w + 2 * x] = (ll + lh + hl + hh) / 2.0;
            data[2 * y * w + 2 * x + 1] = (ll - lh + hl - hh) / 2.0;
            data[(2 * y + 1) * w + 2 * x] = (ll + lh - hl - hh) / 2.0;
            data[(2 * y + 1) * w + 2 * x + 1] = (ll - lh - hl + hh) / 2.0;
        }
    }
    ImagePlane::new(h, w, data).expect("idwt keeps plane valid")
}
