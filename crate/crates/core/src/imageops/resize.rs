use super::ImagePlane;

/// Output size whose short side equals `target`, keeping the aspect ratio
/// with half-up rounding of the long side.
pub fn resize_short_side(h: usize, w: usize, target: usize) -> (usize, usize) {
    let scale_other = |other: usize, short: usize| (2 * other * target + short) / (2 * short);
    if h <= w {
        (target, scale_other(w, h))
    } else {
        (scale_other(h, w), target)
    }
}

/// Source coordinate sampled by output index `i` under half-pixel centers.
fn source_coord(i: usize, src: usize, dst: usize) -> (usize, usize, f64) {
    let pos = ((i as f64 + 0.5) * src as f64 / dst as f64 - 0.5).clamp(0.0, (src - 1) as f64);
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(src - 1);
    (lo, hi, pos - lo as f64)
}

/// Bilinear resampling with half-pixel-centered sample points
/// (align-corners off); edges are clamped.
pub fn bilinear_resize(p: &ImagePlane, height: usize, width: usize) -> ImagePlane {
    assert!(height > 0 && width > 0, "target dims must be positive");
    if height == p.height() && width == p.width() {
        return p.clone();
    }
    let cols: Vec<_> = (0..width)
        .map(|x| source_coord(x, p.width(), width))
        .collect();
    let mut data = Vec::with_capacity(height * width);
    for y in 0..height {
        let (y0, y1, fy) = source_coord(y, p.height(), height);
        for &(x0, x1, fx) in &cols {
            let top = p.get(y0, x0) * (1.0 - fx) + p.get(y0, x1) * fx;
            let bottom = p.get(y1, x0) * (1.0 - fx) + p.get(y1, x1) * fx;
            data.push(top * (1.0 - fy) + bottom * fy);
        }
    }
    ImagePlane::new(height, width, data).expect("resize keeps plane valid")
}
