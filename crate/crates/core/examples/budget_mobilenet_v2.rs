//! Counts MACs and parameters of a MobileNetV2 feature extractor and checks it
//! against the challenge budget at a few input sizes.

use std::path::Path;

use fiqa_harness::budget::{check_budget, ModelSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/mobilenet_v2.json");
    let spec = ModelSpec::from_path(path)?;
    let report = check_budget(&spec)?;
    let mut heavy = report.per_layer.clone();
    heavy.sort_by_key(|l| std::cmp::Reverse(l.macs));
    println!(
        "{}: {:.4} GFLOPs, {:.4}M params",
        report.name, report.gflops, report.params_millions
    );
    for l in heavy.iter().take(3) {
        println!(
            "  layer {:>2} {:<10} {:>12} MACs -> {}",
            l.index, l.kind, l.macs, l.out_shape
        );
    }
    for side in [160, 224, 288, 320] {
        let r = check_budget(&spec.with_resolution(side, side))?;
        let verdict = if r.within_budget() {
            "within budget"
        } else {
            "over budget"
        };
        println!("{side}x{side}: {:.4} GFLOPs, {verdict}", r.gflops);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
