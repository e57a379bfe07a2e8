//! Averages late training checkpoints into a single set of weights.

use fiqa_harness::imageops::{swa_average, WeightSnapshot};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // weights oscillating around an optimum at (1, -2, 0.5)
    let optimum = [1.0, -2.0, 0.5];
    let snaps: Vec<WeightSnapshot> = (0..8)
        .map(|k| WeightSnapshot {
            step: 1000 + 250 * k,
            weights: optimum
                .iter()
                .enumerate()
                .map(|(i, w)| w + 0.3 * ((k as f64 + 1.0) * (i as f64 + 1.3)).sin())
                .collect(),
        })
        .collect();
    let avg = swa_average(&snaps)?;
    println!("last snapshot {:?}", snaps.last().unwrap().weights);
    println!("SWA at step {}: {:?}", avg.step, avg.weights);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
