use crate::{Error, Result};

/// Flattened model weights saved at a training step.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSnapshot {
    pub step: u64,
    pub weights: Vec<f64>,
}

/// Element-wise mean of the snapshots; the step is the latest input step.
pub fn swa_average(snaps: &[WeightSnapshot]) -> Result<WeightSnapshot> {
    let first = snaps.first().ok_or(Error::EmptyList)?;
    let len = first.weights.len();
    if let Some(bad) = snaps.iter().find(|s| s.weights.len() != len) {
        return Err(Error::LengthMismatch {
            left: len,
            right: bad.weights.len(),
        });
    }
    let mut sum = vec![0.0; len];
    for s in snaps {
        for (acc, w) in sum.iter_mut().zip(&s.weights) {
            *acc += w;
        }
    }
    let n = snaps.len() as f64;
    Ok(WeightSnapshot {
        step: snaps.iter().map(|s| s.step).max().unwrap_or(0),
        weights: sum.into_iter().map(|v| v / n).collect(),
    })
}
