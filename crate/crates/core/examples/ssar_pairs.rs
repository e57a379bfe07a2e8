//! Generates clean/degraded training pairs and scores them with the
//! severity-aware ranking loss.

use fiqa_harness::imageops::{psnr, ImagePlane};
use fiqa_harness::losses::{ssar_loss, RankedPair, RankedPairBatch};
use fiqa_harness::sampling::{make_ssar_pairs, DegradationKind, DegradationSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let face = ImagePlane::from_fn(64, 64, |y, x| {
        let (fy, fx) = (y as f64 / 64.0, x as f64 / 64.0);
        (0.5 + 0.3 * (9.0 * fx).sin() * (7.0 * fy).cos() + 0.1 * ((x * y) % 5) as f64 / 5.0)
            .clamp(0.0, 1.0)
    })?;
    let mut specs = Vec::new();
    for kind in [
        DegradationKind::GaussianBlur,
        DegradationKind::GaussianNoise,
        DegradationKind::Resample,
    ] {
        for s in [0.2, 0.5, 0.8] {
            specs.push(DegradationSpec::new(kind, s, 17)?);
        }
    }
    let pairs = make_ssar_pairs(&[("face".to_string(), face)], &specs);

    let mut ranked = Vec::new();
    for p in &pairs {
        let db = psnr(&p.clean, &p.degraded)?;
        println!(
            "{:<14} s={:.1}  PSNR {db:6.2} dB",
            p.kind.name(),
            p.severity
        );
        // a stand-in quality model that tracks PSNR
        ranked.push(RankedPair {
            pred_clean: 1.0,
            pred_degraded: db / (db + 10.0),
            severity: p.severity,
        });
    }
    let batch = RankedPairBatch::new(ranked)?;
    for lambda in [0.1, 0.5, 1.0] {
        println!(
            "ssar_loss(lambda={lambda}) = {:.5}",
            ssar_loss(&batch, lambda)?.value
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
