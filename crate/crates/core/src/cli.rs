//! Command-line front end.
//!
//! Exit codes: 0 success (or within budget), 1 over budget or failed
//! gradient check, 2 input error, 3 degenerate computation.

use std::ffi::OsString;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::budget::{check_budget, ModelSpec};
use crate::gradcheck::{self, GradcheckConfig, LossKind};
use crate::imageops::{haar_dwt2, haar_idwt2, psnr, swa_average, ImagePlane, WeightSnapshot};
use crate::losses::{self, FocalParams, RankedPair, RankedPairBatch};
use crate::metrics::{self, ScoreSeries};
use crate::sampling::{self, DegradationKind, DegradationSpec};
use crate::{io as files, Error};

pub const NO_COLOR_ENV: &str = "FIQA_HARNESS_NO_COLOR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    OverBudget = 1,
    InputError = 2,
    Degenerate = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn for_error(e: &Error) -> Self {
        match e {
            Error::DegenerateVariance { .. } => ExitStatus::Degenerate,
            _ => ExitStatus::InputError,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fiqa-harness",
    version,
    about = "Scoring, budget checks, losses and data tooling for face IQA challenges"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// SROCC, PLCC and challenge score of predictions against ground truth.
    Score(ScoreArgs),
    /// Rank a results table by challenge score and flag budget violations.
    Leaderboard(LeaderboardArgs),
    /// Per-layer parameter and FLOP accounting against the compute budget.
    Budget(BudgetArgs),
    /// Evaluate one loss and its gradient on a prediction/ground-truth pair.
    LossEval(LossEvalArgs),
    /// Check analytic loss gradients against central finite differences.
    Gradcheck(GradcheckArgs),
    /// Build a score-stratified sampling plan.
    SamplePlan(SamplePlanArgs),
    /// Apply a synthetic degradation to a PGM image.
    Degrade(DegradeArgs),
    /// Single-level Haar decomposition of a PGM image.
    Dwt(DwtArgs),
    /// Average weight snapshots.
    Swa(SwaArgs),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Predictions CSV (`item_id,score`).
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth CSV (`item_id,score`).
    #[arg(long)]
    pub gt: PathBuf,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LeaderboardArgs {
    /// Results CSV (`team,srocc,plcc,gflops,params_m`).
    #[arg(long)]
    pub input: PathBuf,
    /// Write the leaderboard CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Model spec JSON.
    #[arg(long)]
    pub model: PathBuf,
    /// Override the input height and width, as `HxW` or a single size.
    #[arg(long, value_parser = parse_resolution)]
    pub resolution: Option<(usize, usize)>,
    /// Write the per-layer CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LossEvalArgs {
    /// Loss name (see `gradcheck --help` for the list).
    #[arg(long)]
    pub loss: String,
    /// Predictions CSV; for `ssar`, predictions on clean images.
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth CSV; for `ssar`, predictions on degraded images.
    #[arg(long)]
    pub gt: PathBuf,
    /// Weight α (mse_corr, corr_composite, conquerit_total, coreface).
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// CoReFace PLCC weight β.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// λ: conquerit_total mixing weight, or the ssar margin slope.
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// Focal exponent γ.
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    /// Label smoothing strength (focal losses, default 0) or WingLoss ε
    /// (wing and coreface, default 2).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// WingLoss threshold w.
    #[arg(long, default_value_t = losses::WING_W)]
    pub wing_w: f64,
    /// Focal loss scale s.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Degradation severity shared by every ssar pair.
    #[arg(long)]
    pub severity: Option<f64>,
    /// Seed for label smoothing; required when smoothing is on.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write `item_id,grad` CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    /// Loss to check, or `all` (default).
    #[arg(value_name = "LOSS", conflicts_with = "loss")]
    pub name: Option<String>,
    /// Same as the positional LOSS.
    #[arg(long)]
    pub loss: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random inputs per loss.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct SamplePlanArgs {
    /// Items CSV (`item_id,score`), scores in [0, 1].
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = sampling::DEFAULT_BINS)]
    pub bins: usize,
    /// Number of draws.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Repeat items below 0.1 or above 0.9 this many times before stratifying.
    #[arg(long, default_value_t = 1)]
    pub oversample: usize,
    /// Write the draw CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DegradeArgs {
    /// Input PGM.
    #[arg(long)]
    pub input: PathBuf,
    /// gaussian_blur, gaussian_noise or resample.
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub severity: f64,
    #[arg(long)]
    pub seed: u64,
    /// Output PGM.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DwtArgs {
    /// Input PGM with even dimensions.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory receiving ll.pgm, lh.pgm, hl.pgm, hh.pgm.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SwaArgs {
    /// Snapshot files, in step order.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("invalid resolution `{s}`, expected HxW"))
    };
    match s.split_once(['x', 'X']) {
        Some((h, w)) => Ok((parse(h)?, parse(w)?)),
        None => parse(s).map(|n| (n, n)),
    }
}

struct Styler {
    color: bool,
}

impl Styler {
    fn verdict(&self, ok: bool) -> String {
        let (text, code) = if ok { ("PASS", "32") } else { ("FAIL", "31") };
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

type CmdResult = Result<ExitStatus, Error>;

fn write_file(path: &Path, body: &str) -> Result<(), Error> {
    std::fs::write(path, body).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

fn cmd_score(args: &ScoreArgs, out: &mut dyn Write) -> CmdResult {
    let series = files::read_score_series(&args.pred, &args.gt)?;
    let srocc = metrics::srocc(&series)?;
    let plcc = metrics::plcc(&series)?;
    let score = metrics::challenge_score(srocc, plcc);
    let report = format!(
        "items {}\nSROCC {srocc:.4}\nPLCC {plcc:.4}\nScore {score:.4}\n",
        series.len()
    );
    emit(out, &report)?;
    if let Some(path) = &args.out {
        write_file(path, &report)?;
    }
    Ok(ExitStatus::Success)
}

fn cmd_leaderboard(args: &LeaderboardArgs, out: &mut dyn Write) -> CmdResult {
    let rows = files::read_team_results(&args.input)?;
    let board = metrics::build_leaderboard(&rows)?;
    let text = files::leaderboard_csv(&board);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => emit(out, &text)?,
    }
    Ok(ExitStatus::Success)
}

fn cmd_budget(args: &BudgetArgs, out: &mut dyn Write, style: &Styler) -> CmdResult {
    let mut model = ModelSpec::from_path(&args.model)?;
    if let Some((h, w)) = args.resolution {
        model = model.with_resolution(h, w);
    }
    let report = check_budget(&model)?;
    emit(
        out,
        &format!(
            "{report}\nbudget: {}\n",
            style.verdict(report.within_budget())
        ),
    )?;
    if let Some(path) = &args.out {
        write_file(path, &report.to_csv())?;
    }
    Ok(if report.within_budget() {
        ExitStatus::Success
    } else {
        ExitStatus::OverBudget
    })
}

fn eval_loss(
    args: &LossEvalArgs,
    kind: LossKind,
) -> Result<(Vec<String>, losses::LossResult), Error> {
    let series: ScoreSeries = files::read_score_series(&args.pred, &args.gt)?;
    let ids: Vec<String> = series.items().iter().map(|i| i.id.clone()).collect();
    let smoothing = args.epsilon.unwrap_or(0.0);
    let focal = || -> Result<FocalParams, Error> {
        let seed = match (smoothing > 0.0, args.seed) {
            (true, None) => {
                return Err(Error::InvalidParameter(
                    "--seed is required when --epsilon > 0 enables label smoothing".into(),
                ))
            }
            (_, seed) => seed.unwrap_or(0),
        };
        Ok(FocalParams {
            epsilon: smoothing,
            gamma: args.gamma,
            scale: args.scale,
            seed,
        })
    };
    let wing_eps = args.epsilon.unwrap_or(losses::WING_EPSILON);
    let result = match kind {
        LossKind::Mse => losses::mse_loss(&series)?,
        LossKind::PearsonCorr => losses::pearson_corr_loss(&series)?,
        LossKind::MseCorr => losses::mse_corr_loss(&series, args.alpha)?,
        LossKind::PairwiseRank => losses::pairwise_rank_loss(&series)?,
        LossKind::CorrComposite => losses::corr_composite_loss(&series, args.alpha)?,
        LossKind::FocalLabelSmoothing => losses::focal_label_smoothing_loss(&series, &focal()?)?,
        LossKind::ConqueritTotal => {
            losses::conquerit_total_loss(&series, args.alpha, args.lambda, &focal()?)?
        }
        LossKind::Wing => losses::wing_loss(&series, args.wing_w, wing_eps)?,
        LossKind::Coreface => {
            losses::coreface_loss(&series, args.alpha, args.beta, args.wing_w, wing_eps)?
        }
        LossKind::Ssar => {
            let severity = args
                .severity
                .ok_or_else(|| Error::InvalidParameter("--severity is required for ssar".into()))?;
            let batch = RankedPairBatch::new(
                series
                    .items()
                    .iter()
                    .map(|i| RankedPair {
                        pred_clean: i.pred,
                        pred_degraded: i.gt,
                        severity,
                    })
                    .collect(),
            )?;
            let r = losses::ssar_loss(&batch, args.lambda)?;
            let ids = ids
                .iter()
                .flat_map(|id| [format!("{id}:clean"), format!("{id}:degraded")])
                .collect();
            return Ok((ids, r));
        }
    };
    Ok((ids, result))
}

fn cmd_loss_eval(args: &LossEvalArgs, out: &mut dyn Write) -> CmdResult {
    let kind: LossKind = args.loss.parse()?;
    let (ids, result) = eval_loss(args, kind)?;
    emit(out, &format!("loss {kind}\nvalue {}\n", result.value))?;
    if let Some(path) = &args.out {
        let mut csv = String::from("item_id,grad\n");
        for (id, g) in ids.iter().zip(&result.grad) {
            csv.push_str(&format!("{id},{g}\n"));
        }
        write_file(path, &csv)?;
    }
    Ok(ExitStatus::Success)
}

fn cmd_gradcheck(args: &GradcheckArgs, out: &mut dyn Write, style: &Styler) -> CmdResult {
    let name = args
        .name
        .as_deref()
        .or(args.loss.as_deref())
        .unwrap_or("all");
    let kinds: Vec<LossKind> = if name == "all" {
        LossKind::ALL.to_vec()
    } else {
        vec![name.parse()?]
    };
    let cfg = GradcheckConfig {
        points: args.n,
        seed: args.seed,
        ..Default::default()
    };
    let mut all_ok = true;
    let mut text = format!(
        "gradcheck seed {} points {} step {:e} tolerance {:e}\n",
        cfg.seed, cfg.points, cfg.step, cfg.tolerance
    );
    for kind in kinds {
        let outcome = gradcheck::check_loss(kind, &cfg)?;
        all_ok &= outcome.passed();
        text.push_str(&format!(
            "{:<22} max_rel_err {:.3e}  {}\n",
            kind.name(),
            outcome.max_rel_error,
            style.verdict(outcome.passed())
        ));
    }
    emit(out, &text)?;
    Ok(if all_ok {
        ExitStatus::Success
    } else {
        ExitStatus::OverBudget
    })
}

fn cmd_sample_plan(args: &SamplePlanArgs, out: &mut dyn Write) -> CmdResult {
    if args.n == 0 {
        return Err(Error::InvalidParameter("--n must be >= 1".into()));
    }
    let items = files::read_scores(&args.input)?;
    let items = sampling::tail_oversample(&items, 0.1, 0.9, args.oversample)?;
    let plan = sampling::build_strata(&items, args.bins)?;
    let plan = sampling::draw(&plan, args.n, args.seed)?;
    let csv = plan.draws_csv();
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => emit(out, &csv)?,
    }
    Ok(ExitStatus::Success)
}

fn cmd_degrade(args: &DegradeArgs, out: &mut dyn Write) -> CmdResult {
    let kind: DegradationKind = args.kind.parse()?;
    let spec = DegradationSpec::new(kind, args.severity, args.seed)?;
    let clean = files::read_pgm(&args.input)?;
    let degraded = spec.apply(&clean);
    files::write_pgm(&args.out, &degraded)?;
    emit(
        out,
        &format!(
            "{kind} severity {} seed {} -> {}\nPSNR {:.4} dB\n",
            args.severity,
            args.seed,
            args.out.display(),
            psnr(&clean, &degraded)?
        ),
    )?;
    Ok(ExitStatus::Success)
}

/// Maps a sub-band into `[0, 1]` for storage: LL halves, details shift.
fn band_for_display(name: &str, band: &ImagePlane) -> ImagePlane {
    let map = |v: f64| if name == "ll" { v / 2.0 } else { v / 2.0 + 0.5 };
    ImagePlane::new(
        band.height(),
        band.width(),
        band.data()
            .iter()
            .map(|&v| map(v).clamp(0.0, 1.0))
            .collect(),
    )
    .expect("mapped band is valid")
}

fn cmd_dwt(args: &DwtArgs, out: &mut dyn Write) -> CmdResult {
    let plane = files::read_pgm(&args.input)?;
    let quad = haar_dwt2(&plane)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Error::Io {
        path: args.out.display().to_string(),
        source: e,
    })?;
    let mut text = format!(
        "input {}x{} energy {:.6}\n",
        plane.height(),
        plane.width(),
        plane.energy()
    );
    for (name, band) in quad.bands() {
        files::write_pgm(
            args.out.join(format!("{name}.pgm")),
            &band_for_display(name, band),
        )?;
        text.push_str(&format!("{name} energy {:.6}\n", band.energy()));
    }
    let err = haar_idwt2(&quad).max_abs_diff(&plane);
    text.push_str(&format!("round-trip max error {err:.3e}\n"));
    emit(out, &text)?;
    Ok(ExitStatus::Success)
}

fn cmd_swa(args: &SwaArgs, out: &mut dyn Write) -> CmdResult {
    let snaps = args
        .input
        .iter()
        .enumerate()
        .map(|(i, p)| {
            Ok(WeightSnapshot {
                step: i as u64,
                weights: files::read_weights(p)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let avg = swa_average(&snaps)?;
    files::write_weights(&args.out, &avg.weights)?;
    emit(
        out,
        &format!(
            "averaged {} snapshots of {} weights -> {}\n",
            snaps.len(),
            avg.weights.len(),
            args.out.display()
        ),
    )?;
    Ok(ExitStatus::Success)
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> ExitStatus {
    let style = Styler { color };
    let result = match &cli.command {
        Command::Score(a) => cmd_score(a, out),
        Command::Leaderboard(a) => cmd_leaderboard(a, out),
        Command::Budget(a) => cmd_budget(a, out, &style),
        Command::LossEval(a) => cmd_loss_eval(a, out),
        Command::Gradcheck(a) => cmd_gradcheck(a, out, &style),
        Command::SamplePlan(a) => cmd_sample_plan(a, out),
        Command::Degrade(a) => cmd_degrade(a, out),
        Command::Dwt(a) => cmd_dwt(a, out),
        Command::Swa(a) => cmd_swa(a, out),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            ExitStatus::for_error(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs the command against
/// the process's stdout and stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let no_color = std::env::var_os(NO_COLOR_ENV).is_some();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitStatus::InputError.code()
            } else {
                ExitStatus::Success.code()
            };
        }
    };
    let stdout = io::stdout();
    let color = !no_color && stdout.is_terminal();
    let mut out = stdout.lock();
    let mut err = io::stderr().lock();
    run(&cli, &mut out, &mut err, color).code()
}
