//! Score-stratified uniform sampling, tail oversampling, and construction of
//! clean/degraded image pairs for severity-adaptive ranking.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::imageops::{DegradationConfig, ImagePlane, Severity};
use crate::rng::seeded;
use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 10;

/// Equal-width score strata over `[0, 1]` and an optional draw sequence.
///
/// Bins are right-open except the last, which also holds score 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StratifiedPlan {
    bin_edges: Vec<f64>,
    bins: Vec<Vec<String>>,
    draws: Vec<(usize, String)>,
}

impl StratifiedPlan {
    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn bins(&self) -> &[Vec<String>] {
        &self.bins
    }

    /// `(bin index, item id)` per draw, in draw order.
    pub fn draws(&self) -> &[(usize, String)] {
        &self.draws
    }

    pub fn num_bins(&self) -> usize {
        self.bins.len()
    }

    /// Bin holding `score`; interior edges belong to the higher bin.
    pub fn bin_of(&self, score: f64) -> Option<usize> {
        if !(0.0..=1.0).contains(&score) {
            return None;
        }
        let b = self.bins.len();
        let mut idx = ((score * b as f64).floor() as usize).min(b - 1);
        // guard against floor() landing one bin off around an edge
        while idx + 1 < b && score >= self.bin_edges[idx + 1] {
            idx += 1;
        }
        while idx > 0 && score < self.bin_edges[idx] {
            idx -= 1;
        }
        Some(idx)
    }

    /// Draw sequence as `draw_index,bin,item_id` CSV.
    pub fn draws_csv(&self) -> String {
        let mut out = String::from("draw_index,bin,item_id\n");
        for (i, (bin, id)) in self.draws.iter().enumerate() {
            out.push_str(&format!("{i},{bin},{id}\n"));
        }
        out
    }
}

/// Assigns each item to one of `num_bins` equal-width strata.
pub fn build_strata(items: &[(String, f64)], num_bins: usize) -> Result<StratifiedPlan> {
    if num_bins == 0 {
        return Err(Error::InvalidParameter("num_bins must be >= 1".into()));
    }
    let bin_edges = (0..=num_bins).map(|i| i as f64 / num_bins as f64).collect();
    let mut plan = StratifiedPlan {
        bin_edges,
        bins: vec![Vec::new(); num_bins],
        draws: Vec::new(),
    };
    for (id, score) in items {
        let bin = plan.bin_of(*score).ok_or_else(|| Error::ScoreOutOfRange {
            id: id.clone(),
            score: *score,
        })?;
        plan.bins[bin].push(id.clone());
    }
    Ok(plan)
}

/// `n` draws with replacement: a non-empty stratum uniformly at random, then
/// an item uniformly within it.
pub fn draw(plan: &StratifiedPlan, n: usize, seed: u64) -> Result<StratifiedPlan> {
    let occupied: Vec<usize> = (0..plan.bins.len())
        .filter(|&b| !plan.bins[b].is_empty())
        .collect();
    if occupied.is_empty() {
        return Err(Error::AllBinsEmpty);
    }
    let mut rng = seeded(seed);
    let draws = (0..n)
        .map(|_| {
            let bin = occupied[rng.random_range(0..occupied.len())];
            let members = &plan.bins[bin];
            (bin, members[rng.random_range(0..members.len())].clone())
        })
        .collect();
    Ok(StratifiedPlan {
        draws,
        ..plan.clone()
    })
}

/// Repeats items scoring strictly below `low` or strictly above `high`
/// `factor` times. Replicas follow their original and carry `#k` suffixes.
pub fn tail_oversample(
    items: &[(String, f64)],
    low: f64,
    high: f64,
    factor: usize,
) -> Result<Vec<(String, f64)>> {
    if factor == 0 {
        return Err(Error::InvalidParameter("factor must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(items.len());
    for (id, score) in items {
        out.push((id.clone(), *score));
        if *score < low || *score > high {
            out.extend((1..factor).map(|k| (format!("{id}#{k}"), *score)));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegradationKind {
    GaussianBlur,
    GaussianNoise,
    Resample,
}

impl DegradationKind {
    pub const ALL: [DegradationKind; 3] = [
        DegradationKind::GaussianBlur,
        DegradationKind::GaussianNoise,
        DegradationKind::Resample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DegradationKind::GaussianBlur => "gaussian_blur",
            DegradationKind::GaussianNoise => "gaussian_noise",
            DegradationKind::Resample => "resample",
        }
    }
}

impl fmt::Display for DegradationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DegradationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        match norm.as_str() {
            "gaussian_blur" | "blur" => Ok(DegradationKind::GaussianBlur),
            "gaussian_noise" | "noise" => Ok(DegradationKind::GaussianNoise),
            "resample" => Ok(DegradationKind::Resample),
            _ => Err(Error::InvalidParameter(format!(
                "unknown degradation `{s}`; valid kinds: gaussian_blur, gaussian_noise, resample"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegradationSpec {
    pub kind: DegradationKind,
    pub severity: Severity,
    pub seed: u64,
}

impl DegradationSpec {
    pub fn new(kind: DegradationKind, severity: f64, seed: u64) -> Result<Self> {
        Ok(Self {
            kind,
            severity: Severity::new(severity)?,
            seed,
        })
    }

    pub fn apply(&self, p: &ImagePlane) -> ImagePlane {
        self.apply_with(&DegradationConfig::default(), p)
    }

    pub fn apply_with(&self, cfg: &DegradationConfig, p: &ImagePlane) -> ImagePlane {
        match self.kind {
            DegradationKind::GaussianBlur => cfg.blur(p, self.severity),
            DegradationKind::GaussianNoise => cfg.noise(p, self.severity, self.seed),
            DegradationKind::Resample => cfg.resample(p, self.severity),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SsarPair {
    pub item_id: String,
    pub clean: ImagePlane,
    pub degraded: ImagePlane,
    pub kind: DegradationKind,
    pub severity: f64,
}

/// Every image crossed with every degradation spec, image-major.
pub fn make_ssar_pairs(
    images: &[(String, ImagePlane)],
    specs: &[DegradationSpec],
) -> Vec<SsarPair> {
    images
        .iter()
        .flat_map(|(id, clean)| {
            specs.iter().map(move |spec| SsarPair {
                item_id: id.clone(),
                clean: clean.clone(),
                degraded: spec.apply(clean),
                kind: spec.kind,
                severity: spec.severity.get(),
            })
        })
        .collect()
}
