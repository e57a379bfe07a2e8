//! Shape propagation, parameter and FLOP accounting for sequential model
//! specs, and the challenge compute budget check.
//!
//! FLOPs are counted as multiply-accumulates (1 MAC = 1 FLOP). Convolutions
//! and linear layers count their MACs, pooling counts `kernel²` per output
//! element, batch norm counts 2 per element (scale and shift, unfolded),
//! activations and residual adds 1 per element, and global average pooling
//! 1 per input element.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::metrics::{FLOPS_LIMIT_G, PARAMS_LIMIT_M};
use crate::{Error, Result};

/// Layer kinds accepted in model spec files.
pub const SUPPORTED_KINDS: &[&str] = &[
    "conv2d",
    "linear",
    "batch_norm",
    "activation",
    "pool",
    "global_avg_pool",
    "residual_add",
    "flatten",
];

/// A `(height, width)` pair; spec files may give a scalar for square values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Dims2Repr", into = "[usize; 2]")]
pub struct Dims2 {
    pub h: usize,
    pub w: usize,
}

impl Dims2 {
    pub const fn square(v: usize) -> Self {
        Self { h: v, w: v }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Dims2Repr {
    Scalar(usize),
    Pair([usize; 2]),
}

impl From<Dims2Repr> for Dims2 {
    fn from(r: Dims2Repr) -> Self {
        match r {
            Dims2Repr::Scalar(v) => Dims2::square(v),
            Dims2Repr::Pair([h, w]) => Dims2 { h, w },
        }
    }
}

impl From<Dims2> for [usize; 2] {
    fn from(d: Dims2) -> Self {
        [d.h, d.w]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivationKind {
    Relu,
    Relu6,
    Hswish,
    Sigmoid,
    Gelu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolKind {
    Max,
    Avg,
}

fn one() -> usize {
    1
}
fn unit() -> Dims2 {
    Dims2::square(1)
}
fn zero() -> Dims2 {
    Dims2::square(0)
}
fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LayerSpec {
    Conv2d {
        #[serde(rename = "in")]
        in_ch: usize,
        #[serde(rename = "out")]
        out_ch: usize,
        kernel: Dims2,
        #[serde(default = "unit")]
        stride: Dims2,
        #[serde(default = "zero")]
        pad: Dims2,
        #[serde(default = "one")]
        groups: usize,
        #[serde(default = "yes")]
        bias: bool,
    },
    Linear {
        #[serde(rename = "in")]
        in_features: usize,
        #[serde(rename = "out")]
        out_features: usize,
        #[serde(default = "yes")]
        bias: bool,
    },
    BatchNorm {
        channels: usize,
    },
    Activation {
        #[serde(rename = "fn")]
        func: ActivationKind,
    },
    Pool {
        op: PoolKind,
        kernel: usize,
        /// Defaults to the kernel size.
        #[serde(default)]
        stride: Option<usize>,
    },
    GlobalAvgPool {},
    /// Adds the input of the preceding `span` layers to the current tensor.
    ResidualAdd {
        span: usize,
    },
    Flatten {},
}

impl LayerSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            LayerSpec::Conv2d { .. } => "conv2d",
            LayerSpec::Linear { .. } => "linear",
            LayerSpec::BatchNorm { .. } => "batch_norm",
            LayerSpec::Activation { .. } => "activation",
            LayerSpec::Pool { .. } => "pool",
            LayerSpec::GlobalAvgPool {} => "global_avg_pool",
            LayerSpec::ResidualAdd { .. } => "residual_add",
            LayerSpec::Flatten {} => "flatten",
        }
    }

    /// Convenience constructor for a square convolution.
    pub fn conv(
        in_ch: usize,
        out_ch: usize,
        kernel: usize,
        stride: usize,
        pad: usize,
        groups: usize,
        bias: bool,
    ) -> Self {
        LayerSpec::Conv2d {
            in_ch,
            out_ch,
            kernel: Dims2::square(kernel),
            stride: Dims2::square(stride),
            pad: Dims2::square(pad),
            groups,
            bias,
        }
    }

    pub fn linear(in_features: usize, out_features: usize, bias: bool) -> Self {
        LayerSpec::Linear {
            in_features,
            out_features,
            bias,
        }
    }

    /// Learnable parameters; independent of the input shape.
    pub fn params(&self) -> u64 {
        match *self {
            LayerSpec::Conv2d {
                in_ch,
                out_ch,
                kernel,
                groups,
                bias,
                ..
            } => {
                let weights = (in_ch / groups) as u64 * (out_ch * kernel.h * kernel.w) as u64;
                weights + if bias { out_ch as u64 } else { 0 }
            }
            LayerSpec::Linear {
                in_features,
                out_features,
                bias,
            } => {
                in_features as u64 * out_features as u64
                    + if bias { out_features as u64 } else { 0 }
            }
            LayerSpec::BatchNorm { channels } => 2 * channels as u64,
            _ => 0,
        }
    }
}

/// Tensor shape between layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Spatial { c: usize, h: usize, w: usize },
    Features(usize),
}

impl Shape {
    pub fn elements(&self) -> u64 {
        match *self {
            Shape::Spatial { c, h, w } => c as u64 * h as u64 * w as u64,
            Shape::Features(n) => n as u64,
        }
    }

    fn channels(&self) -> usize {
        match *self {
            Shape::Spatial { c, .. } => c,
            Shape::Features(n) => n,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Spatial { c, h, w } => write!(f, "{c}x{h}x{w}"),
            Shape::Features(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub name: String,
    /// `[channels, height, width]`.
    pub input: [usize; 3],
    pub layers: Vec<LayerSpec>,
}

impl ModelSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let mut msg = e.to_string();
            if msg.contains("unknown variant") {
                msg.push_str(&format!(
                    " (supported layer kinds: {})",
                    SUPPORTED_KINDS.join(", ")
                ));
            }
            Error::ModelSpec(msg)
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("model spec serializes")
    }

    /// Same layers at a different input height and width.
    pub fn with_resolution(&self, height: usize, width: usize) -> Self {
        let mut m = self.clone();
        m.input[1] = height;
        m.input[2] = width;
        m
    }

    fn input_shape(&self) -> Shape {
        let [c, h, w] = self.input;
        Shape::Spatial { c, h, w }
    }
}

fn invalid(index: usize, detail: impl Into<String>) -> Error {
    Error::InvalidLayer {
        index,
        detail: detail.into(),
    }
}

fn mismatch(index: usize, detail: impl Into<String>) -> Error {
    Error::ShapeMismatch {
        index,
        detail: detail.into(),
    }
}

/// `floor((dim + 2·pad − kernel)/stride) + 1`, or `None` when below 1.
fn window_out(dim: usize, kernel: usize, stride: usize, pad: usize) -> Option<usize> {
    let padded = dim + 2 * pad;
    (padded >= kernel).then(|| (padded - kernel) / stride + 1)
}

fn spatial(index: usize, shape: Shape, kind: &str) -> Result<(usize, usize, usize)> {
    match shape {
        Shape::Spatial { c, h, w } => Ok((c, h, w)),
        Shape::Features(_) => Err(mismatch(
            index,
            format!("{kind} needs a spatial input, got {shape} features"),
        )),
    }
}

fn next_shape(index: usize, layer: &LayerSpec, shape: Shape, history: &[Shape]) -> Result<Shape> {
    match *layer {
        LayerSpec::Conv2d {
            in_ch,
            out_ch,
            kernel,
            stride,
            pad,
            groups,
            ..
        } => {
            if [
                in_ch, out_ch, kernel.h, kernel.w, stride.h, stride.w, groups,
            ]
            .contains(&0)
            {
                return Err(invalid(
                    index,
                    "conv2d sizes, strides and groups must be >= 1",
                ));
            }
            if in_ch % groups != 0 || out_ch % groups != 0 {
                return Err(invalid(
                    index,
                    format!("groups {groups} must divide in {in_ch} and out {out_ch}"),
                ));
            }
            let (c, h, w) = spatial(index, shape, "conv2d")?;
            if c != in_ch {
                return Err(mismatch(
                    index,
                    format!("conv2d expects {in_ch} input channels, got {c}"),
                ));
            }
            let oh = window_out(h, kernel.h, stride.h, pad.h);
            let ow = window_out(w, kernel.w, stride.w, pad.w);
            match (oh, ow) {
                (Some(h), Some(w)) => Ok(Shape::Spatial { c: out_ch, h, w }),
                _ => Err(Error::NonPositiveDim { index }),
            }
        }
        LayerSpec::Linear {
            in_features,
            out_features,
            ..
        } => {
            if in_features == 0 || out_features == 0 {
                return Err(invalid(index, "linear sizes must be >= 1"));
            }
            match shape {
                Shape::Features(n) if n == in_features => Ok(Shape::Features(out_features)),
                _ => Err(mismatch(
                    index,
                    format!("linear expects {in_features} features, got {shape}"),
                )),
            }
        }
        LayerSpec::BatchNorm { channels } => {
            if channels == 0 {
                return Err(invalid(index, "batch_norm channels must be >= 1"));
            }
            if shape.channels() != channels {
                return Err(mismatch(
                    index,
                    format!("batch_norm expects {channels} channels, got {shape}"),
                ));
            }
            Ok(shape)
        }
        LayerSpec::Activation { .. } => Ok(shape),
        LayerSpec::Pool { kernel, stride, .. } => {
            let stride = stride.unwrap_or(kernel);
            if kernel == 0 || stride == 0 {
                return Err(invalid(index, "pool kernel and stride must be >= 1"));
            }
            let (c, h, w) = spatial(index, shape, "pool")?;
            match (
                window_out(h, kernel, stride, 0),
                window_out(w, kernel, stride, 0),
            ) {
                (Some(h), Some(w)) => Ok(Shape::Spatial { c, h, w }),
                _ => Err(Error::NonPositiveDim { index }),
            }
        }
        LayerSpec::GlobalAvgPool {} => {
            let (c, _, _) = spatial(index, shape, "global_avg_pool")?;
            Ok(Shape::Spatial { c, h: 1, w: 1 })
        }
        LayerSpec::ResidualAdd { span } => {
            if span == 0 || span > index {
                return Err(invalid(
                    index,
                    format!("residual_add span {span} must be in 1..={index}"),
                ));
            }
            // history[i] is the input of layer i
            let skip = history[index - span];
            if skip != shape {
                return Err(mismatch(
                    index,
                    format!("residual_add joins {skip} with {shape}"),
                ));
            }
            Ok(shape)
        }
        LayerSpec::Flatten {} => Ok(Shape::Features(shape.elements() as usize)),
    }
}

/// Output shape of every layer, in order.
pub fn propagate_shapes(m: &ModelSpec) -> Result<Vec<Shape>> {
    let [c, h, w] = m.input;
    if c == 0 || h == 0 || w == 0 {
        return Err(Error::ModelSpec(format!(
            "input dims must be >= 1, got {c}x{h}x{w}"
        )));
    }
    // inputs[i] = input shape of layer i
    let mut inputs = vec![m.input_shape()];
    for (index, layer) in m.layers.iter().enumerate() {
        let out = next_shape(index, layer, inputs[index], &inputs)?;
        inputs.push(out);
    }
    Ok(inputs.split_off(1))
}

fn layer_macs(layer: &LayerSpec, input: Shape, out: Shape) -> u64 {
    match *layer {
        LayerSpec::Conv2d {
            in_ch,
            kernel,
            groups,
            ..
        } => out.elements() * (in_ch / groups) as u64 * (kernel.h * kernel.w) as u64,
        LayerSpec::Linear {
            in_features,
            out_features,
            ..
        } => in_features as u64 * out_features as u64,
        LayerSpec::Pool { kernel, .. } => (kernel * kernel) as u64 * out.elements(),
        LayerSpec::BatchNorm { .. } => 2 * out.elements(),
        LayerSpec::Activation { .. } | LayerSpec::ResidualAdd { .. } => out.elements(),
        LayerSpec::GlobalAvgPool {} => input.elements(),
        LayerSpec::Flatten {} => 0,
    }
}

/// Cost of one layer in a budget report.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerCost {
    pub index: usize,
    pub kind: &'static str,
    pub out_shape: Shape,
    pub params: u64,
    pub macs: u64,
}

pub fn layer_costs(m: &ModelSpec) -> Result<Vec<LayerCost>> {
    let outs = propagate_shapes(m)?;
    let mut input = m.input_shape();
    let mut rows = Vec::with_capacity(outs.len());
    for (index, (layer, &out)) in m.layers.iter().zip(&outs).enumerate() {
        rows.push(LayerCost {
            index,
            kind: layer.kind(),
            out_shape: out,
            params: layer.params(),
            macs: layer_macs(layer, input, out),
        });
        input = out;
    }
    Ok(rows)
}

pub fn count_params(m: &ModelSpec) -> Result<u64> {
    Ok(layer_costs(m)?.iter().map(|r| r.params).sum())
}

pub fn count_macs(m: &ModelSpec) -> Result<u64> {
    Ok(layer_costs(m)?.iter().map(|r| r.macs).sum())
}

/// Total GFLOPs (MACs / 1e9).
pub fn count_flops(m: &ModelSpec) -> Result<f64> {
    Ok(count_macs(m)? as f64 / 1e9)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BudgetReport {
    pub name: String,
    pub gflops: f64,
    pub params_millions: f64,
    pub flops_limit: f64,
    pub params_limit: f64,
    pub flops_ok: bool,
    pub params_ok: bool,
    pub per_layer: Vec<LayerCost>,
}

impl BudgetReport {
    /// Judges already-measured totals against the challenge limits.
    pub fn from_totals(name: &str, gflops: f64, params_millions: f64) -> Self {
        Self {
            name: name.to_string(),
            gflops,
            params_millions,
            flops_limit: FLOPS_LIMIT_G,
            params_limit: PARAMS_LIMIT_M,
            flops_ok: gflops <= FLOPS_LIMIT_G,
            params_ok: params_millions < PARAMS_LIMIT_M,
            per_layer: Vec::new(),
        }
    }

    pub fn within_budget(&self) -> bool {
        self.flops_ok && self.params_ok
    }

    pub fn total_macs(&self) -> u64 {
        self.per_layer.iter().map(|r| r.macs).sum()
    }

    pub fn total_params(&self) -> u64 {
        self.per_layer.iter().map(|r| r.params).sum()
    }

    /// `layer_index,kind,out_shape,params,macs`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("layer_index,kind,out_shape,params,macs\n");
        for r in &self.per_layer {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.index, r.kind, r.out_shape, r.params, r.macs
            ));
        }
        out
    }
}

impl fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model: {}", self.name)?;
        writeln!(
            f,
            "{:>5}  {:<16} {:>14} {:>12} {:>14}",
            "layer", "kind", "out_shape", "params", "macs"
        )?;
        for r in &self.per_layer {
            writeln!(
                f,
                "{:>5}  {:<16} {:>14} {:>12} {:>14}",
                r.index,
                r.kind,
                r.out_shape.to_string(),
                r.params,
                r.macs
            )?;
        }
        let verdict = |ok: bool| if ok { "ok" } else { "OVER" };
        writeln!(
            f,
            "GFLOPs: {:.4} (limit {}) {}",
            self.gflops,
            self.flops_limit,
            verdict(self.flops_ok)
        )?;
        write!(
            f,
            "Params: {:.4}M (limit < {}M) {}",
            self.params_millions,
            self.params_limit,
            verdict(self.params_ok)
        )
    }
}

pub fn check_budget(m: &ModelSpec) -> Result<BudgetReport> {
    let per_layer = layer_costs(m)?;
    let macs: u64 = per_layer.iter().map(|r| r.macs).sum();
    let params: u64 = per_layer.iter().map(|r| r.params).sum();
    let mut report = BudgetReport::from_totals(&m.name, macs as f64 / 1e9, params as f64 / 1e6);
    report.per_layer = per_layer;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(input: [usize; 3], layers: Vec<LayerSpec>) -> ModelSpec {
        ModelSpec {
            name: "t".into(),
            input,
            layers,
        }
    }

    #[test]
    fn conv_shapes() {
        let m = model([3, 32, 32], vec![LayerSpec::conv(3, 8, 3, 1, 1, 1, true)]);
        assert_eq!(
            propagate_shapes(&m).unwrap(),
            vec![Shape::Spatial { c: 8, h: 32, w: 32 }]
        );
        let m = model([3, 224, 224], vec![LayerSpec::conv(3, 8, 3, 2, 1, 1, true)]);
        assert_eq!(
            propagate_shapes(&m).unwrap(),
            vec![Shape::Spatial {
                c: 8,
                h: 112,
                w: 112
            }]
        );
    }

    #[test]
    fn pool_then_flatten() {
        let m = model(
            [1280, 7, 7],
            vec![LayerSpec::GlobalAvgPool {}, LayerSpec::Flatten {}],
        );
        assert_eq!(
            *propagate_shapes(&m).unwrap().last().unwrap(),
            Shape::Features(1280)
        );
    }

    #[test]
    fn parameter_counts() {
        let m = model([3, 32, 32], vec![LayerSpec::conv(3, 8, 3, 1, 1, 1, true)]);
        assert_eq!(count_params(&m).unwrap(), 224);
        let head = model(
            [1280, 1, 1],
            vec![
                LayerSpec::Flatten {},
                LayerSpec::linear(1280, 128, true),
                LayerSpec::linear(128, 1, true),
            ],
        );
        assert_eq!(count_params(&head).unwrap(), 164_097);
        assert_eq!(count_params(&model([3, 8, 8], vec![])).unwrap(), 0);
    }

    #[test]
    fn flop_counts() {
        let m = model([3, 32, 32], vec![LayerSpec::conv(3, 8, 3, 1, 1, 1, true)]);
        assert_eq!(count_macs(&m).unwrap(), 221_184);
        assert!((count_flops(&m).unwrap() - 2.21184e-4).abs() < 1e-18);
        let m = model(
            [1280, 1, 1],
            vec![LayerSpec::Flatten {}, LayerSpec::linear(1280, 1, false)],
        );
        assert_eq!(count_macs(&m).unwrap(), 1280);
    }

    #[test]
    fn shape_errors_name_the_layer() {
        let m = model(
            [3, 32, 32],
            vec![
                LayerSpec::conv(3, 8, 3, 1, 1, 1, true),
                LayerSpec::conv(16, 8, 3, 1, 1, 1, true),
            ],
        );
        assert!(matches!(
            propagate_shapes(&m),
            Err(Error::ShapeMismatch { index: 1, .. })
        ));
        let m = model([3, 2, 2], vec![LayerSpec::conv(3, 8, 5, 1, 0, 1, true)]);
        assert!(matches!(
            propagate_shapes(&m),
            Err(Error::NonPositiveDim { index: 0 })
        ));
        let m = model([3, 8, 8], vec![LayerSpec::conv(3, 8, 3, 1, 1, 2, true)]);
        assert!(matches!(
            propagate_shapes(&m),
            Err(Error::InvalidLayer { index: 0, .. })
        ));
        let m = model([3, 8, 8], vec![LayerSpec::linear(192, 4, true)]);
        assert!(matches!(
            propagate_shapes(&m),
            Err(Error::ShapeMismatch { index: 0, .. })
        ));
        let m = model(
            [3, 8, 8],
            vec![
                LayerSpec::conv(3, 4, 1, 1, 0, 1, false),
                LayerSpec::ResidualAdd { span: 1 },
            ],
        );
        assert!(matches!(
            propagate_shapes(&m),
            Err(Error::ShapeMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn residual_add_and_batch_norm_costs() {
        let m = model(
            [4, 8, 8],
            vec![
                LayerSpec::conv(4, 4, 3, 1, 1, 4, false),
                LayerSpec::BatchNorm { channels: 4 },
                LayerSpec::ResidualAdd { span: 2 },
            ],
        );
        let rows = layer_costs(&m).unwrap();
        assert_eq!(rows[0].macs, 256 * 9);
        assert_eq!(rows[1].macs, 512);
        assert_eq!(rows[2].macs, 256);
        assert_eq!(rows[1].params, 8);
    }

    #[test]
    fn json_spec_parsing() {
        let text = r#"{"name":"tiny","input":[3,32,32],"layers":[
            {"kind":"conv2d","in":3,"out":8,"kernel":[3,3],"stride":[1,1],"pad":[1,1],"groups":1,"bias":true},
            {"kind":"activation","fn":"relu"},
            {"kind":"pool","op":"max","kernel":2},
            {"kind":"global_avg_pool"},
            {"kind":"flatten"},
            {"kind":"linear","in":8,"out":1}
        ]}"#;
        let m = ModelSpec::from_json_str(text).unwrap();
        let shapes = propagate_shapes(&m).unwrap();
        assert_eq!(shapes[2], Shape::Spatial { c: 8, h: 16, w: 16 });
        assert_eq!(shapes[5], Shape::Features(1));
        let back = ModelSpec::from_json_str(&m.to_json_string()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn unknown_kind_lists_supported_kinds() {
        let text = r#"{"name":"x","input":[3,8,8],"layers":[{"kind":"attention","heads":4}]}"#;
        let err = ModelSpec::from_json_str(text).unwrap_err().to_string();
        assert!(err.contains("attention"), "{err}");
        for kind in SUPPORTED_KINDS {
            assert!(err.contains(kind), "{err}");
        }
    }

    #[test]
    fn report_flags_from_table_totals() {
        let ders = BudgetReport::from_totals("DERS", 0.8980, 6.0523);
        assert!(!ders.flops_ok && !ders.params_ok);
        let bit = BudgetReport::from_totals("BIT_ssvgg", 0.5120, 4.7242);
        assert!(!bit.flops_ok && bit.params_ok);
        let top = BudgetReport::from_totals("ECNU-SJTU VQA Team", 0.3313, 1.1796);
        assert!(top.flops_ok && top.params_ok);
    }
}
