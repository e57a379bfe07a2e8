//! File formats: score and leaderboard CSV, 8-bit binary PGM planes, and
//! raw little-endian weight snapshots.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::Read;
use std::path::Path;

use crate::imageops::ImagePlane;
use crate::metrics::{LeaderboardEntry, ScoreSeries, ScoredItem, TeamResult};
use crate::{Error, Result};

fn parse_err(path: &Path, line: u64, detail: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        detail: detail.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        csv::ErrorKind::Deserialize { err, .. } => parse_err(path, line, err.to_string()),
        other => parse_err(path, line, format!("{other:?}")),
    }
}

fn open_csv(path: &Path, expected: &[&str]) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(parse_err(
            path,
            1,
            format!(
                "expected header `{}`, got `{}`",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(rdr)
}

#[derive(serde::Deserialize)]
struct ScoreRow {
    item_id: String,
    score: f64,
}

/// Reads an `item_id,score` file, preserving order.
pub fn read_scores(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>> {
    let path = path.as_ref();
    let mut rdr = open_csv(path, &["item_id", "score"])?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row: ScoreRow = record
            .deserialize(Some(&headers))
            .map_err(|e| parse_err(path, line, e.to_string()))?;
        if !row.score.is_finite() {
            return Err(parse_err(
                path,
                line,
                format!("non-finite score for `{}`", row.item_id),
            ));
        }
        if !seen.insert(row.item_id.clone()) {
            return Err(parse_err(
                path,
                line,
                format!("duplicate item_id `{}`", row.item_id),
            ));
        }
        out.push((row.item_id, row.score));
    }
    Ok(out)
}

/// Joins predictions with ground truth on `item_id`, in prediction order.
/// Every id must appear in both files.
pub fn join_scores(
    pred: &[(String, f64)],
    gt: &[(String, f64)],
    pred_name: &str,
    gt_name: &str,
) -> Result<ScoreSeries> {
    let gt_map: HashMap<&str, f64> = gt.iter().map(|(id, s)| (id.as_str(), *s)).collect();
    let mut items = Vec::with_capacity(pred.len());
    for (id, p) in pred {
        let g = gt_map.get(id.as_str()).ok_or_else(|| Error::UnmatchedId {
            id: id.clone(),
            present: pred_name.to_string(),
            missing: gt_name.to_string(),
        })?;
        items.push(ScoredItem {
            id: id.clone(),
            pred: *p,
            gt: *g,
        });
    }
    if gt.len() != pred.len() {
        let pred_ids: HashSet<&str> = pred.iter().map(|(id, _)| id.as_str()).collect();
        if let Some((id, _)) = gt.iter().find(|(id, _)| !pred_ids.contains(id.as_str())) {
            return Err(Error::UnmatchedId {
                id: id.clone(),
                present: gt_name.to_string(),
                missing: pred_name.to_string(),
            });
        }
    }
    ScoreSeries::new(items)
}

pub fn read_score_series(pred: impl AsRef<Path>, gt: impl AsRef<Path>) -> Result<ScoreSeries> {
    let (pred, gt) = (pred.as_ref(), gt.as_ref());
    join_scores(
        &read_scores(pred)?,
        &read_scores(gt)?,
        &pred.display().to_string(),
        &gt.display().to_string(),
    )
}

/// Reads `team,srocc,plcc,gflops,params_m`.
pub fn read_team_results(path: impl AsRef<Path>) -> Result<Vec<TeamResult>> {
    let path = path.as_ref();
    let mut rdr = open_csv(path, &["team", "srocc", "plcc", "gflops", "params_m"])?;
    rdr.deserialize()
        .map(|r| r.map_err(|e| csv_err(path, e)))
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `rank,team,score,srocc,plcc,gflops,params_m,flops_ok,params_ok`, scores at
/// four decimals.
pub fn leaderboard_csv(board: &[LeaderboardEntry]) -> String {
    let mut out = String::from("rank,team,score,srocc,plcc,gflops,params_m,flops_ok,params_ok\n");
    for e in board {
        out.push_str(&format!(
            "{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{},{}\n",
            e.rank,
            csv_field(&e.team),
            e.score,
            e.srocc,
            e.plcc,
            e.gflops,
            e.params_millions,
            e.flops_ok(),
            e.params_ok()
        ));
    }
    out
}

/// Parses a binary (P5) PGM with maxval ≤ 255, scaling to `[0, 1]`.
pub fn decode_pgm(bytes: &[u8]) -> Result<ImagePlane> {
    let bad = |m: &str| Error::InvalidPlane(format!("PGM: {m}"));
    let mut pos = 0;
    let mut token = || -> Result<String> {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(bad("truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            pos += 1;
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if token()? != "P5" {
        return Err(bad("not a binary graymap (P5)"));
    }
    let mut number = |what: &str| -> Result<usize> {
        token()?
            .parse()
            .map_err(|_| bad(&format!("invalid {what}")))
    };
    let width = number("width")?;
    let height = number("height")?;
    let maxval = number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(bad("only 8-bit maxval (1..=255) is supported"));
    }
    // exactly one whitespace byte separates the header from the raster
    let start = pos + 1;
    let end = start + width * height;
    if bytes.len() < end {
        return Err(bad("truncated raster"));
    }
    let data = bytes[start..end]
        .iter()
        .map(|&b| b as f64 / maxval as f64)
        .collect();
    ImagePlane::new(height, width, data)
}

/// Encodes as 8-bit P5, clamping to `[0, 1]` and rounding to 1/255.
pub fn encode_pgm(p: &ImagePlane) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", p.width(), p.height()).into_bytes();
    out.extend(
        p.data()
            .iter()
            .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    out
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<ImagePlane> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes)
}

pub fn write_pgm(path: impl AsRef<Path>, p: &ImagePlane) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(p)).map_err(|e| Error::io(path, e))
}

/// `u64` count followed by that many `f64`, all little-endian.
pub fn encode_weights(weights: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 * (weights.len() + 1));
    out.extend((weights.len() as u64).to_le_bytes());
    for w in weights {
        out.extend(w.to_le_bytes());
    }
    out
}

pub fn decode_weights(mut bytes: &[u8]) -> Result<Vec<f64>> {
    let mut word = [0u8; 8];
    bytes
        .read_exact(&mut word)
        .map_err(|_| Error::InvalidParameter("snapshot: missing length".into()))?;
    let n = u64::from_le_bytes(word) as usize;
    if bytes.len() != n.saturating_mul(8) {
        return Err(Error::InvalidParameter(format!(
            "snapshot: header says {n} values, body holds {} bytes",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn read_weights(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_weights(&bytes)
}

pub fn write_weights(path: impl AsRef<Path>, weights: &[f64]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_weights(weights)).map_err(|e| Error::io(path, e))
}
