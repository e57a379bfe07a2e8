//! Loss functions for MOS regression, each returning its value and the
//! gradient with respect to the predictions.
//!
//! Composite losses are built from their components, so their gradients are
//! the same weighted sums as their values.

use crate::metrics::ScoreSeries;
use crate::rng;
use crate::{Error, Result};

/// WingLoss threshold used by the CoReFace recipe.
pub const WING_W: f64 = 0.03;
/// WingLoss curvature used by the CoReFace recipe.
pub const WING_EPSILON: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct LossResult {
    pub value: f64,
    /// `∂value/∂prediction`, one entry per prediction.
    pub grad: Vec<f64>,
}

impl LossResult {
    fn zero(n: usize) -> Self {
        Self {
            value: 0.0,
            grad: vec![0.0; n],
        }
    }

    pub fn scaled(&self, a: f64) -> LossResult {
        LossResult {
            value: a * self.value,
            grad: self.grad.iter().map(|g| a * g).collect(),
        }
    }

    /// `a·self + b·other`, value and gradient alike.
    pub fn combine(&self, a: f64, other: &LossResult, b: f64) -> LossResult {
        debug_assert_eq!(self.grad.len(), other.grad.len());
        LossResult {
            value: a * self.value + b * other.value,
            grad: self
                .grad
                .iter()
                .zip(&other.grad)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }
}

fn non_empty(s: &ScoreSeries) -> Result<()> {
    if s.is_empty() {
        Err(Error::EmptySeries)
    } else {
        Ok(())
    }
}

fn check_weight(name: &str, v: f64, unit_interval: bool) -> Result<()> {
    let ok = v.is_finite() && v >= 0.0 && (!unit_interval || v <= 1.0);
    if ok {
        Ok(())
    } else if unit_interval {
        Err(Error::InvalidParameter(format!(
            "{name} = {v} must lie in [0, 1]"
        )))
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {v} must be >= 0"
        )))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be > 0")))
    }
}

/// Mean squared error.
pub fn mse_loss(s: &ScoreSeries) -> Result<LossResult> {
    non_empty(s)?;
    let n = s.len() as f64;
    let mut out = LossResult::zero(s.len());
    for (g, item) in out.grad.iter_mut().zip(s.items()) {
        let diff = item.gt - item.pred;
        out.value += diff * diff;
        *g = -2.0 * diff / n;
    }
    out.value /= n;
    Ok(out)
}

/// `1 − Pearson(gt, pred)`, in `[0, 2]`.
pub fn pearson_corr_loss(s: &ScoreSeries) -> Result<LossResult> {
    if s.len() < 2 {
        return Err(Error::TooFewItems {
            needed: 2,
            got: s.len(),
        });
    }
    let pred = s.preds();
    let gt = s.gts();
    let n = pred.len() as f64;
    let mp = pred.iter().sum::<f64>() / n;
    let mg = gt.iter().sum::<f64>() / n;
    let dp: Vec<f64> = pred.iter().map(|p| p - mp).collect();
    let dg: Vec<f64> = gt.iter().map(|g| g - mg).collect();
    let spp: f64 = dp.iter().map(|d| d * d).sum();
    let sgg: f64 = dg.iter().map(|d| d * d).sum();
    let spg: f64 = dp.iter().zip(&dg).map(|(a, b)| a * b).sum();
    if spp == 0.0 {
        return Err(Error::DegenerateVariance {
            what: "predictions",
        });
    }
    if sgg == 0.0 {
        return Err(Error::DegenerateVariance {
            what: "ground truth",
        });
    }
    let norm = (spp * sgg).sqrt();
    let r = spg / norm;
    // dr/dp_i = dg_i/norm − r·dp_i/spp; centering terms cancel since Σdg = 0.
    let grad = dp
        .iter()
        .zip(&dg)
        .map(|(p, g)| -(g / norm - r * p / spp))
        .collect();
    Ok(LossResult {
        value: 1.0 - r,
        grad,
    })
}

/// `MSE + α·(1 − Pearson)`.
pub fn mse_corr_loss(s: &ScoreSeries, alpha: f64) -> Result<LossResult> {
    check_weight("alpha", alpha, false)?;
    let mse = mse_loss(s)?;
    if alpha == 0.0 {
        return Ok(mse);
    }
    let corr = pearson_corr_loss(s)?;
    Ok(mse.combine(1.0, &corr, alpha))
}

/// Numerically stable `ln(1 + e^z)`.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Logistic pairwise ranking loss, averaged over all ordered pairs `i ≠ j`:
/// `ln(1 + exp(−(p_i − p_j)·sign(g_i − g_j)))`.
///
/// Pairs with tied ground truth contribute `ln 2` and no gradient.
pub fn pairwise_rank_loss(s: &ScoreSeries) -> Result<LossResult> {
    if s.len() < 2 {
        return Err(if s.is_empty() {
            Error::EmptySeries
        } else {
            Error::TooFewItems { needed: 2, got: 1 }
        });
    }
    let pred = s.preds();
    let gt = s.gts();
    let n = pred.len();
    let pairs = (n * (n - 1)) as f64;
    let mut out = LossResult::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let sij = sign(gt[i] - gt[j]);
            let z = -(pred[i] - pred[j]) * sij;
            out.value += softplus(z);
            if sij != 0.0 {
                let dz = sigmoid(z) / pairs;
                out.grad[i] -= sij * dz;
                out.grad[j] += sij * dz;
            }
        }
    }
    out.value /= pairs;
    Ok(out)
}

/// `α·(1 − Pearson) + (1 − α)·rank loss`, `α ∈ [0, 1]`.
pub fn corr_composite_loss(s: &ScoreSeries, alpha: f64) -> Result<LossResult> {
    check_weight("alpha", alpha, true)?;
    if alpha == 1.0 {
        return pearson_corr_loss(s);
    }
    let rank = pairwise_rank_loss(s)?;
    if alpha == 0.0 {
        return Ok(rank);
    }
    let plcc = pearson_corr_loss(s)?;
    Ok(plcc.combine(alpha, &rank, 1.0 - alpha))
}

/// Parameters of the focal label-smoothing regression loss.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FocalParams {
    /// Label smoothing strength; targets become `gt + ε·N(0,1)`.
    pub epsilon: f64,
    /// Focusing exponent on `(1 − e^{−d²})`.
    pub gamma: f64,
    pub scale: f64,
    /// Seed for the smoothing noise, one standard normal per item in order.
    pub seed: u64,
}

impl Default for FocalParams {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            gamma: 0.0,
            scale: 1.0,
            seed: 0,
        }
    }
}

/// Smoothed targets for `s` under `params`; exact ground truth when ε = 0.
pub fn smoothed_targets(s: &ScoreSeries, params: &FocalParams) -> Vec<f64> {
    let gt = s.gts();
    if params.epsilon == 0.0 {
        return gt;
    }
    let noise = rng::standard_normals(params.seed, gt.len());
    gt.iter()
        .zip(noise)
        .map(|(g, z)| g + params.epsilon * z)
        .collect()
}

/// Mean of `scale·(1 − e^{−d²})^γ·d²` with `d = pred − smoothed target`.
/// The smoothed targets are constants for the gradient.
pub fn focal_label_smoothing_loss(s: &ScoreSeries, params: &FocalParams) -> Result<LossResult> {
    non_empty(s)?;
    check_weight("epsilon", params.epsilon, false)?;
    check_weight("gamma", params.gamma, false)?;
    check_positive("scale", params.scale)?;
    let targets = smoothed_targets(s, params);
    let n = s.len() as f64;
    let mut out = LossResult::zero(s.len());
    for ((g, item), target) in out.grad.iter_mut().zip(s.items()).zip(targets) {
        let d = item.pred - target;
        let m = d * d;
        let focus = -(-m).exp_m1(); // 1 − e^{−m}
        let weight = focus.powf(params.gamma);
        out.value += params.scale * weight * m;
        if m > 0.0 {
            // d/dm [focus^γ·m] = γ·focus^{γ−1}·e^{−m}·m + focus^γ
            let focal_term = if params.gamma == 0.0 {
                0.0
            } else {
                params.gamma * focus.powf(params.gamma - 1.0) * (-m).exp() * m
            };
            *g = params.scale * (focal_term + weight) * 2.0 * d / n;
        }
    }
    out.value /= n;
    Ok(out)
}

/// `λ·corr_composite(α) + (1 − λ)·focal_label_smoothing`.
pub fn conquerit_total_loss(
    s: &ScoreSeries,
    alpha: f64,
    lambda: f64,
    focal: &FocalParams,
) -> Result<LossResult> {
    check_weight("lambda", lambda, true)?;
    if lambda == 1.0 {
        return corr_composite_loss(s, alpha);
    }
    let smooth = focal_label_smoothing_loss(s, focal)?;
    if lambda == 0.0 {
        return Ok(smooth);
    }
    let corr = corr_composite_loss(s, alpha)?;
    Ok(corr.combine(lambda, &smooth, 1.0 - lambda))
}

/// The constant that joins the two WingLoss branches at `|x| = w`.
pub fn wing_constant(w: f64, epsilon: f64) -> f64 {
    w - w * (w / epsilon).ln_1p()
}

/// Per-residual WingLoss value and derivative, `x = pred − gt`.
pub fn wing(x: f64, w: f64, epsilon: f64) -> (f64, f64) {
    let a = x.abs();
    if a < w {
        (w * (a / epsilon).ln_1p(), w / (epsilon + a) * sign(x))
    } else {
        (a - wing_constant(w, epsilon), sign(x))
    }
}

/// Mean WingLoss: logarithmic below `w`, linear above, continuous at `w`.
pub fn wing_loss(s: &ScoreSeries, w: f64, epsilon: f64) -> Result<LossResult> {
    non_empty(s)?;
    check_positive("w", w)?;
    check_positive("epsilon", epsilon)?;
    let n = s.len() as f64;
    let mut out = LossResult::zero(s.len());
    for (g, item) in out.grad.iter_mut().zip(s.items()) {
        let (v, d) = wing(item.pred - item.gt, w, epsilon);
        out.value += v;
        *g = d / n;
    }
    out.value /= n;
    Ok(out)
}

/// `α·WingLoss + β·(1 − Pearson)`.
pub fn coreface_loss(
    s: &ScoreSeries,
    alpha: f64,
    beta: f64,
    w: f64,
    epsilon: f64,
) -> Result<LossResult> {
    check_weight("alpha", alpha, false)?;
    check_weight("beta", beta, false)?;
    let wing = wing_loss(s, w, epsilon)?;
    if beta == 0.0 {
        return Ok(wing.scaled(alpha));
    }
    let plcc = pearson_corr_loss(s)?;
    if alpha == 0.0 {
        return Ok(plcc.scaled(beta));
    }
    Ok(wing.combine(alpha, &plcc, beta))
}

/// Predictions for one clean image and its degraded version.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankedPair {
    pub pred_clean: f64,
    pub pred_degraded: f64,
    pub severity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedPairBatch {
    pairs: Vec<RankedPair>,
}

impl RankedPairBatch {
    pub fn new(pairs: Vec<RankedPair>) -> Result<Self> {
        for p in &pairs {
            if !(0.0..=1.0).contains(&p.severity) {
                return Err(Error::InvalidSeverity(p.severity));
            }
            if !p.pred_clean.is_finite() || !p.pred_degraded.is_finite() {
                return Err(Error::InvalidParameter(
                    "pair predictions must be finite".into(),
                ));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[RankedPair] {
        &self.pairs
    }

    /// Predictions interleaved as `[clean_0, degraded_0, clean_1, ...]`.
    pub fn flat_preds(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .flat_map(|p| [p.pred_clean, p.pred_degraded])
            .collect()
    }

    /// Same severities, predictions taken from an interleaved vector.
    pub fn with_flat_preds(&self, preds: &[f64]) -> Result<Self> {
        if preds.len() != 2 * self.pairs.len() {
            return Err(Error::LengthMismatch {
                left: preds.len(),
                right: 2 * self.pairs.len(),
            });
        }
        Self::new(
            self.pairs
                .iter()
                .zip(preds.chunks_exact(2))
                .map(|(p, c)| RankedPair {
                    pred_clean: c[0],
                    pred_degraded: c[1],
                    severity: p.severity,
                })
                .collect(),
        )
    }
}

/// Severity-adaptive margin hinge,
/// `mean(max(0, −(clean − degraded) + λ·s))`.
///
/// The gradient is interleaved like [`RankedPairBatch::flat_preds`].
pub fn ssar_loss(batch: &RankedPairBatch, lambda: f64) -> Result<LossResult> {
    if batch.pairs.is_empty() {
        return Err(Error::EmptyBatch);
    }
    check_positive("lambda", lambda)?;
    let n = batch.pairs.len() as f64;
    let mut out = LossResult::zero(2 * batch.pairs.len());
    for (k, p) in batch.pairs.iter().enumerate() {
        let hinge = -(p.pred_clean - p.pred_degraded) + lambda * p.severity;
        if hinge > 0.0 {
            out.value += hinge;
            out.grad[2 * k] = -1.0 / n;
            out.grad[2 * k + 1] = 1.0 / n;
        }
    }
    out.value /= n;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn series(pred: &[f64], gt: &[f64]) -> ScoreSeries {
        ScoreSeries::from_vectors(pred, gt).unwrap()
    }

    #[test]
    fn mse_examples() {
        let s = series(&[0.1, 0.7], &[0.1, 0.7]);
        let r = mse_loss(&s).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.grad, vec![0.0, 0.0]);
        let r = mse_loss(&series(&[0.5], &[0.0])).unwrap();
        assert_eq!(r.value, 0.25);
        assert_eq!(r.grad, vec![1.0]);
        let gt = [0.1, 0.2, 0.3, 0.4];
        let pred: Vec<f64> = gt.iter().map(|g| g + 0.1).collect();
        assert_abs_diff_eq!(
            mse_loss(&series(&pred, &gt)).unwrap().value,
            0.01,
            epsilon = 1e-15
        );
        assert!(matches!(
            mse_loss(&series(&[], &[])),
            Err(Error::EmptySeries)
        ));
    }

    #[test]
    fn pearson_loss_examples() {
        let s = series(&[0.1, 0.5, 0.8], &[0.1, 0.5, 0.8]);
        assert_abs_diff_eq!(pearson_corr_loss(&s).unwrap().value, 0.0, epsilon = 1e-15);
        let gt = [-0.3, 0.1, 0.2];
        let pred: Vec<f64> = gt.iter().map(|g| -g).collect();
        assert_abs_diff_eq!(
            pearson_corr_loss(&series(&pred, &gt)).unwrap().value,
            2.0,
            epsilon = 1e-15
        );
        // 1 − numpy.corrcoef([.2,.4,.9],[.1,.5,.8])[0,1]
        let s = series(&[0.2, 0.4, 0.9], &[0.1, 0.5, 0.8]);
        assert_abs_diff_eq!(
            pearson_corr_loss(&s).unwrap().value,
            0.052303372313218466,
            epsilon = 1e-14
        );
        let s = series(&[0.3, 0.3, 0.3], &[0.1, 0.5, 0.8]);
        assert!(matches!(
            pearson_corr_loss(&s),
            Err(Error::DegenerateVariance { .. })
        ));
    }

    #[test]
    fn mse_corr_composition() {
        let s = series(&[0.2, 0.4, 0.9], &[0.1, 0.5, 0.8]);
        assert_eq!(mse_corr_loss(&s, 0.0).unwrap(), mse_loss(&s).unwrap());
        let mse = mse_loss(&s).unwrap();
        let corr = pearson_corr_loss(&s).unwrap();
        let both = mse_corr_loss(&s, 1.0).unwrap();
        assert_abs_diff_eq!(both.value, mse.value + corr.value, epsilon = 1e-15);
        for i in 0..3 {
            assert_abs_diff_eq!(both.grad[i], mse.grad[i] + corr.grad[i], epsilon = 1e-15);
        }
        let same = series(&[0.1, 0.4], &[0.1, 0.4]);
        assert_abs_diff_eq!(
            mse_corr_loss(&same, 3.0).unwrap().value,
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rank_loss_examples() {
        let s = series(&[0.5; 4], &[0.1, 0.2, 0.3, 0.4]);
        assert_abs_diff_eq!(
            pairwise_rank_loss(&s).unwrap().value,
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        let s = series(&[20.0, 0.0], &[1.0, 0.0]);
        assert_abs_diff_eq!(
            pairwise_rank_loss(&s).unwrap().value,
            2.061153620314381e-9,
            epsilon = 1e-20
        );
        let s = series(&[1.0, 0.0], &[0.0, 1.0]);
        assert_abs_diff_eq!(
            pairwise_rank_loss(&s).unwrap().value,
            1.3132616875182228,
            epsilon = 1e-14
        );
        // stable for huge gaps
        let s = series(&[-1000.0, 1000.0], &[1.0, 0.0]);
        let r = pairwise_rank_loss(&s).unwrap();
        assert!(r.value.is_finite() && (r.value - 2000.0).abs() < 1e-9);
        // tied ground truth: ln 2, no gradient
        let s = series(&[0.9, 0.1], &[0.5, 0.5]);
        let r = pairwise_rank_loss(&s).unwrap();
        assert_abs_diff_eq!(r.value, std::f64::consts::LN_2, epsilon = 1e-15);
        assert_eq!(r.grad, vec![0.0, 0.0]);
    }

    #[test]
    fn corr_composite_endpoints() {
        let s = series(&[0.3, 0.1, 0.7, 0.6, 0.2], &[0.2, 0.3, 0.9, 0.5, 0.1]);
        assert_eq!(
            corr_composite_loss(&s, 1.0).unwrap(),
            pearson_corr_loss(&s).unwrap()
        );
        assert_eq!(
            corr_composite_loss(&s, 0.0).unwrap(),
            pairwise_rank_loss(&s).unwrap()
        );
        let mid = corr_composite_loss(&s, 0.5).unwrap().value;
        let expect =
            0.5 * (pearson_corr_loss(&s).unwrap().value + pairwise_rank_loss(&s).unwrap().value);
        assert_abs_diff_eq!(mid, expect, epsilon = 1e-15);
        assert!(corr_composite_loss(&s, 1.5).is_err());
    }

    #[test]
    fn focal_examples() {
        let s = series(&[0.2, 0.4, 0.9], &[0.1, 0.5, 0.8]);
        let neutral = FocalParams::default();
        assert_eq!(
            focal_label_smoothing_loss(&s, &neutral).unwrap(),
            mse_loss(&s).unwrap()
        );
        let same = series(&[0.2, 0.4], &[0.2, 0.4]);
        let p = FocalParams {
            gamma: 2.0,
            scale: 3.0,
            ..neutral
        };
        assert_eq!(focal_label_smoothing_loss(&same, &p).unwrap().value, 0.0);
        let one = series(&[0.5], &[0.0]);
        let p = FocalParams {
            gamma: 2.0,
            ..neutral
        };
        // (1 − e^{−0.25})²·0.25
        assert_abs_diff_eq!(
            focal_label_smoothing_loss(&one, &p).unwrap().value,
            0.01223227339245592,
            epsilon = 1e-15
        );
    }

    #[test]
    fn focal_smoothing_is_seeded() {
        let s = series(&[0.2, 0.4, 0.9], &[0.1, 0.5, 0.8]);
        let p = FocalParams {
            epsilon: 0.1,
            gamma: 1.0,
            scale: 1.0,
            seed: 42,
        };
        let a = focal_label_smoothing_loss(&s, &p).unwrap();
        let b = focal_label_smoothing_loss(&s, &p).unwrap();
        assert_eq!(a, b);
        let c = focal_label_smoothing_loss(&s, &FocalParams { seed: 43, ..p }).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn conquerit_endpoints() {
        let s = series(&[0.3, 0.1, 0.7, 0.6], &[0.2, 0.3, 0.9, 0.5]);
        let f = FocalParams {
            epsilon: 0.05,
            gamma: 2.0,
            scale: 2.0,
            seed: 9,
        };
        assert_eq!(
            conquerit_total_loss(&s, 0.4, 1.0, &f).unwrap(),
            corr_composite_loss(&s, 0.4).unwrap()
        );
        assert_eq!(
            conquerit_total_loss(&s, 0.4, 0.0, &f).unwrap(),
            focal_label_smoothing_loss(&s, &f).unwrap()
        );
    }

    #[test]
    fn wing_examples() {
        let (w, e) = (WING_W, WING_EPSILON);
        assert_eq!(
            wing_loss(&series(&[0.3, 0.6], &[0.3, 0.6]), w, e)
                .unwrap()
                .value,
            0.0
        );
        // independent evaluation: 0.03·ln(1.015), 1 − (0.03 − 0.03·ln(1.015))
        assert_abs_diff_eq!(wing_constant(w, e), 0.029553341625187482, epsilon = 1e-15);
        let inner = w * (w / e).ln_1p();
        let outer = w - wing_constant(w, e);
        assert_abs_diff_eq!(inner, 0.00044665837481251675, epsilon = 1e-16);
        assert_abs_diff_eq!(inner, outer, epsilon = 1e-15);
        assert_eq!(wing(w, w, e).0, outer);
        let r = wing_loss(&series(&[1.0], &[0.0]), w, e).unwrap();
        assert_abs_diff_eq!(r.value, 0.9704466583748125, epsilon = 1e-15);
        assert_eq!(r.grad, vec![1.0]);
        assert_eq!(wing(0.0, w, e), (0.0, 0.0));
    }

    #[test]
    fn coreface_endpoints() {
        let s = series(&[0.2, 0.4, 0.9], &[0.1, 0.5, 0.8]);
        let (w, e) = (WING_W, WING_EPSILON);
        let plcc = pearson_corr_loss(&s).unwrap();
        let r = coreface_loss(&s, 0.0, 2.0, w, e).unwrap();
        assert_eq!(r.value, 2.0 * plcc.value);
        let wing = wing_loss(&s, w, e).unwrap();
        let r = coreface_loss(&s, 3.0, 0.0, w, e).unwrap();
        assert_eq!(r.value, 3.0 * wing.value);
        let same = series(&[0.1, 0.5], &[0.1, 0.5]);
        assert_abs_diff_eq!(
            coreface_loss(&same, 1.0, 1.0, w, e).unwrap().value,
            0.0,
            epsilon = 1e-15
        );
    }

    fn batch(pairs: &[(f64, f64, f64)]) -> RankedPairBatch {
        RankedPairBatch::new(
            pairs
                .iter()
                .map(|&(c, d, s)| RankedPair {
                    pred_clean: c,
                    pred_degraded: d,
                    severity: s,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn ssar_examples() {
        let r = ssar_loss(&batch(&[(0.8, 0.5, 0.4)]), 0.5).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.grad, vec![0.0, 0.0]);
        let r = ssar_loss(&batch(&[(0.5, 0.6, 0.2)]), 0.5).unwrap();
        assert_abs_diff_eq!(r.value, 0.2, epsilon = 1e-15);
        assert_eq!(r.grad, vec![-1.0, 1.0]);
        let r = ssar_loss(&batch(&[(0.5, 0.5, 0.0)]), 0.5).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.grad, vec![0.0, 0.0]);
        assert!(matches!(
            ssar_loss(&batch(&[]), 0.5),
            Err(Error::EmptyBatch)
        ));
        assert!(RankedPairBatch::new(vec![RankedPair {
            pred_clean: 0.0,
            pred_degraded: 0.0,
            severity: 1.5
        }])
        .is_err());
    }
}
