//! Finite-difference validation of the analytic loss gradients.
//!
//! Each check draws random inputs away from the non-smooth points of the
//! loss (the `|x| = w` seam and `x = 0` kink of WingLoss, the SSAR hinge
//! point, tied ground truth in the rank loss), compares the analytic
//! gradient with central differences, and reports the worst norm-wise
//! relative error.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::losses::{self, FocalParams, RankedPair, RankedPairBatch};
use crate::metrics::ScoreSeries;
use crate::rng::{seeded, SeededRng};
use crate::{Error, LossResult, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossKind {
    Mse,
    PearsonCorr,
    MseCorr,
    PairwiseRank,
    CorrComposite,
    FocalLabelSmoothing,
    ConqueritTotal,
    Wing,
    Coreface,
    Ssar,
}

impl LossKind {
    pub const ALL: [LossKind; 10] = [
        LossKind::Mse,
        LossKind::PearsonCorr,
        LossKind::MseCorr,
        LossKind::PairwiseRank,
        LossKind::CorrComposite,
        LossKind::FocalLabelSmoothing,
        LossKind::ConqueritTotal,
        LossKind::Wing,
        LossKind::Coreface,
        LossKind::Ssar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LossKind::Mse => "mse",
            LossKind::PearsonCorr => "pearson_corr",
            LossKind::MseCorr => "mse_corr",
            LossKind::PairwiseRank => "pairwise_rank",
            LossKind::CorrComposite => "corr_composite",
            LossKind::FocalLabelSmoothing => "focal_label_smoothing",
            LossKind::ConqueritTotal => "conquerit_total",
            LossKind::Wing => "wing",
            LossKind::Coreface => "coreface",
            LossKind::Ssar => "ssar",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|k| k.name()).collect()
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown loss `{s}`; valid names: {}",
                    Self::names().join(", ")
                ))
            })
    }
}

/// Central differences of `f` at `x` with step `h`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `‖a − b‖₂ / max(‖a‖₂, ‖b‖₂)`, zero when both vanish.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &mut dyn Iterator<Item = f64>| v.map(|x| x * x).sum::<f64>().sqrt();
    let diff = norm(&mut a.iter().zip(b).map(|(x, y)| x - y));
    let scale = norm(&mut a.iter().copied()).max(norm(&mut b.iter().copied()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradcheckConfig {
    pub points: usize,
    pub step: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for GradcheckConfig {
    fn default() -> Self {
        Self {
            points: 100,
            step: 1e-6,
            tolerance: 1e-5,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradcheckOutcome {
    pub loss: LossKind,
    pub points: usize,
    pub max_rel_error: f64,
    pub tolerance: f64,
}

impl GradcheckOutcome {
    pub fn passed(&self) -> bool {
        self.max_rel_error < self.tolerance
    }
}

/// Loss weights used by the suite.
const MSE_CORR_ALPHA: f64 = 0.7;
const COMPOSITE_ALPHA: f64 = 0.6;
const CONQUERIT_LAMBDA: f64 = 0.5;
const COREFACE_ALPHA: f64 = 1.0;
const COREFACE_BETA: f64 = 0.5;
const SSAR_LAMBDA: f64 = 0.5;
const FOCAL: FocalParams = FocalParams {
    epsilon: 0.0,
    gamma: 2.0,
    scale: 1.5,
    seed: 0,
};
/// Minimum distance kept from kinks and seams.
const CLEARANCE: f64 = 2e-3;

enum Point {
    Series(ScoreSeries),
    Pairs(RankedPairBatch),
}

impl Point {
    fn preds(&self) -> Vec<f64> {
        match self {
            Point::Series(s) => s.preds(),
            Point::Pairs(b) => b.flat_preds(),
        }
    }
}

fn eval(kind: LossKind, point: &Point, preds: &[f64]) -> Result<LossResult> {
    let series = |p: &Point| match p {
        Point::Series(s) => s.with_preds(preds),
        Point::Pairs(_) => unreachable!("series loss on pair batch"),
    };
    let (w, e) = (losses::WING_W, losses::WING_EPSILON);
    match kind {
        LossKind::Mse => losses::mse_loss(&series(point)?),
        LossKind::PearsonCorr => losses::pearson_corr_loss(&series(point)?),
        LossKind::MseCorr => losses::mse_corr_loss(&series(point)?, MSE_CORR_ALPHA),
        LossKind::PairwiseRank => losses::pairwise_rank_loss(&series(point)?),
        LossKind::CorrComposite => losses::corr_composite_loss(&series(point)?, COMPOSITE_ALPHA),
        LossKind::FocalLabelSmoothing => {
            losses::focal_label_smoothing_loss(&series(point)?, &FOCAL)
        }
        LossKind::ConqueritTotal => {
            losses::conquerit_total_loss(&series(point)?, COMPOSITE_ALPHA, CONQUERIT_LAMBDA, &FOCAL)
        }
        LossKind::Wing => losses::wing_loss(&series(point)?, w, e),
        LossKind::Coreface => {
            losses::coreface_loss(&series(point)?, COREFACE_ALPHA, COREFACE_BETA, w, e)
        }
        LossKind::Ssar => match point {
            Point::Pairs(b) => losses::ssar_loss(&b.with_flat_preds(preds)?, SSAR_LAMBDA),
            Point::Series(_) => unreachable!("ssar on series"),
        },
    }
}

/// Residual whose magnitude avoids 0 and the wing seam, half inside it.
fn wing_residual(rng: &mut SeededRng) -> f64 {
    let w = losses::WING_W;
    let magnitude = if rng.random_bool(0.5) {
        rng.random_range(CLEARANCE..w - CLEARANCE)
    } else {
        rng.random_range(w + CLEARANCE..0.5)
    };
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

fn random_point(kind: LossKind, rng: &mut SeededRng) -> Result<Point> {
    let n = rng.random_range(3..=8);
    if kind == LossKind::Ssar {
        let mut pairs = Vec::with_capacity(n);
        while pairs.len() < n {
            let p = RankedPair {
                pred_clean: rng.random_range(0.0..1.0),
                pred_degraded: rng.random_range(0.0..1.0),
                severity: rng.random_range(0.0..=1.0),
            };
            let hinge = p.pred_degraded - p.pred_clean + SSAR_LAMBDA * p.severity;
            if hinge.abs() > CLEARANCE {
                pairs.push(p);
            }
        }
        return Ok(Point::Pairs(RankedPairBatch::new(pairs)?));
    }
    // distinct ground truth with clear gaps keeps rank-loss signs fixed
    let mut gt: Vec<f64> = Vec::with_capacity(n);
    while gt.len() < n {
        let g = rng.random_range(0.0..1.0);
        if gt.iter().all(|h: &f64| (h - g).abs() > CLEARANCE) {
            gt.push(g);
        }
    }
    let pred: Vec<f64> = match kind {
        LossKind::Wing | LossKind::Coreface => gt.iter().map(|g| g + wing_residual(rng)).collect(),
        _ => (0..n).map(|_| rng.random_range(0.0..1.0)).collect(),
    };
    Ok(Point::Series(ScoreSeries::from_vectors(&pred, &gt)?))
}

/// Worst relative gradient error of one loss over `cfg.points` random inputs.
pub fn check_loss(kind: LossKind, cfg: &GradcheckConfig) -> Result<GradcheckOutcome> {
    let mut rng = seeded(cfg.seed ^ (kind as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.points {
        let point = random_point(kind, &mut rng)?;
        let preds = point.preds();
        let analytic = eval(kind, &point, &preds)?;
        let numeric = central_difference(
            |x| eval(kind, &point, x).map(|r| r.value).unwrap_or(f64::NAN),
            &preds,
            cfg.step,
        );
        let err = relative_error(&analytic.grad, &numeric);
        worst = if err.is_nan() {
            f64::INFINITY
        } else {
            worst.max(err)
        };
    }
    Ok(GradcheckOutcome {
        loss: kind,
        points: cfg.points,
        max_rel_error: worst,
        tolerance: cfg.tolerance,
    })
}

pub fn check_all(cfg: &GradcheckConfig) -> Result<Vec<GradcheckOutcome>> {
    LossKind::ALL.iter().map(|&k| check_loss(k, cfg)).collect()
}
