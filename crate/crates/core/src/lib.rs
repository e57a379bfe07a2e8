//! Evaluation and numerical toolkit for lightweight face image quality
//! assessment (FIQA) challenges.
//!
//! The crate scores predicted MOS values against ground truth
//! ([`metrics`]), enforces compute budgets on declarative model specs
//! ([`budget`]), provides the correlation-aware and robust regression losses
//! used to train FIQA models together with their analytic gradients
//! ([`losses`], [`gradcheck`]), builds score-stratified sampling plans and
//! self-supervised degradation pairs ([`sampling`]), and carries the small
//! amount of image-plane numerics those need ([`imageops`]).
//!
//! All gradients are derivatives of the loss with respect to the
//! predictions.

pub mod budget;
pub mod cli;
mod error;
pub mod gradcheck;
pub mod imageops;
pub mod io;
pub mod losses;
pub mod metrics;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
pub use imageops::ImagePlane;
pub use losses::LossResult;
pub use metrics::ScoreSeries;
