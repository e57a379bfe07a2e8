//! Correlation metrics, the challenge score and leaderboard construction.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::{Error, Result};

/// GFLOPs ceiling for challenge submissions.
pub const FLOPS_LIMIT_G: f64 = 0.5;
/// Parameter ceiling (millions) for challenge submissions. Strict: a model
/// must have fewer parameters than this.
pub const PARAMS_LIMIT_M: f64 = 5.0;

/// One predicted/ground-truth pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredItem {
    pub id: String,
    pub pred: f64,
    pub gt: f64,
}

/// Paired predicted and ground-truth MOS values keyed by item id.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreSeries {
    items: Vec<ScoredItem>,
}

impl ScoreSeries {
    /// Builds a series, rejecting duplicate ids and non-finite values.
    pub fn new(items: Vec<ScoredItem>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(items.len());
        for item in &items {
            if !seen.insert(item.id.as_str()) {
                return Err(Error::DuplicateId(item.id.clone()));
            }
            if !item.pred.is_finite() || !item.gt.is_finite() {
                return Err(Error::NonFinite(item.id.clone()));
            }
        }
        Ok(Self { items })
    }

    /// Builds a series from parallel vectors; ids are the positional indices.
    pub fn from_vectors(pred: &[f64], gt: &[f64]) -> Result<Self> {
        if pred.len() != gt.len() {
            return Err(Error::LengthMismatch {
                left: pred.len(),
                right: gt.len(),
            });
        }
        let items = pred
            .iter()
            .zip(gt)
            .enumerate()
            .map(|(i, (&pred, &gt))| ScoredItem {
                id: i.to_string(),
                pred,
                gt,
            })
            .collect();
        Self::new(items)
    }

    pub fn items(&self) -> &[ScoredItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn preds(&self) -> Vec<f64> {
        self.items.iter().map(|i| i.pred).collect()
    }

    pub fn gts(&self) -> Vec<f64> {
        self.items.iter().map(|i| i.gt).collect()
    }

    /// Same ids and ground truth, new predictions.
    pub fn with_preds(&self, pred: &[f64]) -> Result<Self> {
        if pred.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: pred.len(),
                right: self.len(),
            });
        }
        let items = self
            .items
            .iter()
            .zip(pred)
            .map(|(item, &p)| ScoredItem {
                id: item.id.clone(),
                pred: p,
                gt: item.gt,
            })
            .collect();
        Self::new(items)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Pearson correlation of two equal-length vectors (two-pass).
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewItems {
            needed: 2,
            got: x.len(),
        });
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateVariance {
            what: "predictions",
        });
    }
    if syy == 0.0 {
        return Err(Error::DegenerateVariance {
            what: "ground truth",
        });
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties sharing the average of the ranks they span.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

/// Pearson linear correlation between predictions and ground truth.
pub fn plcc(s: &ScoreSeries) -> Result<f64> {
    pearson(&s.preds(), &s.gts())
}

/// Spearman rank correlation: Pearson correlation of the average-rank
/// transforms of both vectors.
pub fn srocc(s: &ScoreSeries) -> Result<f64> {
    pearson(&average_ranks(&s.preds()), &average_ranks(&s.gts()))
}

/// Challenge score: the mean of SROCC and PLCC.
pub fn challenge_score(srocc: f64, plcc: f64) -> f64 {
    (srocc + plcc) / 2.0
}

/// One team's published or measured results.
#[derive(Clone, Debug, PartialEq, serde::Deserialize)]
pub struct TeamResult {
    pub team: String,
    pub srocc: f64,
    pub plcc: f64,
    pub gflops: f64,
    #[serde(rename = "params_m")]
    pub params_millions: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeaderboardEntry {
    pub team: String,
    pub srocc: f64,
    pub plcc: f64,
    pub score: f64,
    pub gflops: f64,
    pub params_millions: f64,
    pub rank: usize,
}

impl LeaderboardEntry {
    pub fn flops_ok(&self) -> bool {
        self.gflops <= FLOPS_LIMIT_G
    }

    pub fn params_ok(&self) -> bool {
        self.params_millions < PARAMS_LIMIT_M
    }
}

/// Ranks entries by descending challenge score; equal scores are ordered by
/// team name.
pub fn build_leaderboard(entries: &[TeamResult]) -> Result<Vec<LeaderboardEntry>> {
    let mut seen = HashSet::new();
    for e in entries {
        if !seen.insert(e.team.as_str()) {
            return Err(Error::DuplicateTeam(e.team.clone()));
        }
    }
    let mut board: Vec<LeaderboardEntry> = entries
        .iter()
        .map(|e| LeaderboardEntry {
            team: e.team.clone(),
            srocc: e.srocc,
            plcc: e.plcc,
            score: challenge_score(e.srocc, e.plcc),
            gflops: e.gflops,
            params_millions: e.params_millions,
            rank: 0,
        })
        .collect();
    board.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.team.cmp(&b.team))
    });
    for (i, entry) in board.iter_mut().enumerate() {
        entry.rank = i + 1;
    }
    Ok(board)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn series(pred: &[f64], gt: &[f64]) -> ScoreSeries {
        ScoreSeries::from_vectors(pred, gt).unwrap()
    }

    #[test]
    fn plcc_examples() {
        let s = series(&[0.1, 0.5, 0.9], &[0.1, 0.5, 0.9]);
        assert_abs_diff_eq!(plcc(&s).unwrap(), 1.0, epsilon = 1e-15);
        let gt = [0.0, 0.3, 0.7];
        let pred: Vec<f64> = gt.iter().map(|g| 2.0 * g + 1.0).collect();
        assert_abs_diff_eq!(plcc(&series(&pred, &gt)).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(plcc(&series(&[0.0, 1.0], &[1.0, 0.0])).unwrap(), -1.0);
    }

    #[test]
    fn srocc_examples() {
        let s = series(&[0.1, 0.2, 0.3], &[0.4, 0.5, 0.6]);
        assert_abs_diff_eq!(srocc(&s).unwrap(), 1.0, epsilon = 1e-15);
        let s = series(&[0.3, 0.2, 0.1], &[0.1, 0.2, 0.3]);
        assert_abs_diff_eq!(srocc(&s).unwrap(), -1.0, epsilon = 1e-15);
        // scipy.stats.spearmanr([1,2,2,4],[1,2,3,4])
        let s = series(&[1.0, 2.0, 2.0, 4.0], &[1.0, 2.0, 3.0, 4.0]);
        assert_abs_diff_eq!(srocc(&s).unwrap(), 0.9486832980505139, epsilon = 1e-12);
    }

    #[test]
    fn average_ranks_with_ties() {
        assert_eq!(
            average_ranks(&[3.0, 1.0, 3.0, 2.0]),
            vec![3.5, 1.0, 3.5, 2.0]
        );
        assert_eq!(average_ranks(&[5.0; 3]), vec![2.0; 3]);
    }

    #[test]
    fn degenerate_and_malformed_inputs() {
        let s = series(&[0.5, 0.5, 0.5], &[0.1, 0.2, 0.3]);
        assert!(matches!(plcc(&s), Err(Error::DegenerateVariance { .. })));
        assert!(matches!(srocc(&s), Err(Error::DegenerateVariance { .. })));
        let s = series(&[0.1, 0.2], &[0.3, 0.3]);
        assert!(matches!(plcc(&s), Err(Error::DegenerateVariance { .. })));
        assert!(matches!(
            ScoreSeries::from_vectors(&[0.1], &[0.1, 0.2]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            plcc(&series(&[0.1], &[0.2])),
            Err(Error::TooFewItems { .. })
        ));
        assert!(matches!(
            ScoreSeries::from_vectors(&[f64::NAN, 0.1], &[0.1, 0.2]),
            Err(Error::NonFinite(_))
        ));
        let dup = vec![
            ScoredItem {
                id: "a".into(),
                pred: 0.1,
                gt: 0.2,
            },
            ScoredItem {
                id: "a".into(),
                pred: 0.3,
                gt: 0.4,
            },
        ];
        assert!(matches!(ScoreSeries::new(dup), Err(Error::DuplicateId(_))));
    }

    #[test]
    fn challenge_score_examples() {
        assert_abs_diff_eq!(challenge_score(0.9692, 0.9637), 0.96645, epsilon = 1e-12);
        assert_abs_diff_eq!(challenge_score(0.8334, 0.8283), 0.83085, epsilon = 1e-12);
        assert_eq!(challenge_score(1.0, 1.0), 1.0);
    }

    fn team(name: &str, srocc: f64, plcc: f64) -> TeamResult {
        TeamResult {
            team: name.into(),
            srocc,
            plcc,
            gflops: 0.1,
            params_millions: 1.0,
        }
    }

    #[test]
    fn leaderboard_ranks_and_ties() {
        let board = build_leaderboard(&[team("solo", 0.5, 0.5)]).unwrap();
        assert_eq!(board[0].rank, 1);

        let board = build_leaderboard(&[
            team("zeta", 0.8, 0.8),
            team("alpha", 0.8, 0.8),
            team("top", 0.9, 0.9),
        ])
        .unwrap();
        let order: Vec<_> = board.iter().map(|e| (e.rank, e.team.as_str())).collect();
        assert_eq!(order, vec![(1, "top"), (2, "alpha"), (3, "zeta")]);

        assert!(matches!(
            build_leaderboard(&[team("a", 0.1, 0.1), team("a", 0.2, 0.2)]),
            Err(Error::DuplicateTeam(_))
        ));
    }

    #[test]
    fn budget_flags() {
        let mut e = build_leaderboard(&[team("x", 0.5, 0.5)]).unwrap().remove(0);
        e.gflops = 0.5;
        e.params_millions = 4.9999;
        assert!(e.flops_ok() && e.params_ok());
        e.gflops = 0.5001;
        e.params_millions = 5.0;
        assert!(!e.flops_ok() && !e.params_ok());
    }
}
