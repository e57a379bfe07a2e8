//! Evaluates the training losses on one batch and verifies every analytic
//! gradient against finite differences.

use fiqa_harness::gradcheck::{check_all, GradcheckConfig};
use fiqa_harness::losses::{self, FocalParams};
use fiqa_harness::ScoreSeries;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let pred = [0.31, 0.52, 0.48, 0.80, 0.66];
    let gt = [0.25, 0.55, 0.40, 0.90, 0.70];
    let s = ScoreSeries::from_vectors(&pred, &gt)?;
    let focal = FocalParams {
        epsilon: 0.1,
        gamma: 2.0,
        scale: 1.0,
        seed: 3,
    };

    let rows = [
        ("mse", losses::mse_loss(&s)?),
        ("pearson_corr", losses::pearson_corr_loss(&s)?),
        ("pairwise_rank", losses::pairwise_rank_loss(&s)?),
        ("corr_composite", losses::corr_composite_loss(&s, 0.5)?),
        (
            "focal (eps 0.1)",
            losses::focal_label_smoothing_loss(&s, &focal)?,
        ),
        (
            "wing",
            losses::wing_loss(&s, losses::WING_W, losses::WING_EPSILON)?,
        ),
    ];
    for (name, r) in &rows {
        println!("{name:<16} {:>10.6}  grad[0] {:+.5}", r.value, r.grad[0]);
    }

    let cfg = GradcheckConfig {
        points: 25,
        ..Default::default()
    };
    for o in check_all(&cfg)? {
        println!(
            "gradcheck {:<22} {:.2e} {}",
            o.loss.name(),
            o.max_rel_error,
            if o.passed() { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
