//! Weak-admissibility scans over sampled filtrations.
//!
//! A filtration with weights w_0 ≥ … ≥ w_{d−1} is written in the chart
//! c_j = e_{d−1−j} + Σ a_ij e_i, where i runs over rows above the pivot that
//! are not pivots of another column with the same weight; Fil^w is spanned by
//! the c_j with w_j ≥ w. The a_ij are the local coordinates and are drawn
//! uniformly from Z/p^N. Row k uses ChaCha8 stream k of the seed, so rows do
//! not depend on the order they are computed in.

use crate::error::{Error, Result};
use crate::isocrystal::{Decision, FilteredIsocrystal, Isocrystal, KMatrix, WaReport, WaSearch, Witness};
use crate::linalg::Matrix;
use crate::padic::{PadicScalar, UnramifiedElement};
use num_bigint::{BigInt, RandBigInt};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Version written in CSV and JSON headers; bump when columns change.
pub const SCAN_FORMAT_VERSION: u32 = 1;

pub const CSV_COLUMNS: &str = "index,kind,coords,tN,tH,wa,exact,witness";

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub isocrystal: Isocrystal,
    pub weights: Vec<i64>,
    pub samples: usize,
    pub seed: u64,
    /// Filtrations evaluated before the samples, given as flag bases.
    pub forced: Vec<BTreeMap<i64, KMatrix>>,
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub index: usize,
    pub forced: bool,
    /// Local coordinates, empty for forced rows.
    pub coords: Vec<BigInt>,
    pub report: WaReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub total: usize,
    pub wa_true: usize,
    pub wa_false: usize,
    pub unknown: usize,
    pub exact_path: bool,
}

/// (column, row) positions of the local coordinates for weights sorted descending.
pub fn chart_positions(weights: &[i64]) -> Vec<(usize, usize)> {
    let d = weights.len();
    let mut w = weights.to_vec();
    w.sort_by(|a, b| b.cmp(a));
    let min = *w.last().expect("nonempty weights");
    let mut out = Vec::new();
    for j in 0..d {
        if w[j] == min {
            break;
        }
        for i in 0..d - 1 - j {
            let same_block = (0..d).any(|k| k != j && w[k] == w[j] && d - 1 - k == i);
            if !same_block {
                out.push((j, i));
            }
        }
    }
    out
}

/// Flags of the chart point with the given coordinates.
pub fn chart_flags(iso: &Isocrystal, weights: &[i64], coords: &[BigInt]) -> Result<BTreeMap<i64, KMatrix>> {
    let d = iso.rank();
    if weights.len() != d {
        return Err(Error::Invalid(format!("{} weights for a rank-{d} isocrystal", weights.len())));
    }
    let pos = chart_positions(weights);
    if coords.len() != pos.len() {
        return Err(Error::Invalid(format!("expected {} chart coordinates, got {}", pos.len(), coords.len())));
    }
    let f = iso.field();
    let prec = f.precision();
    let mut w = weights.to_vec();
    w.sort_by(|a, b| b.cmp(a));
    let mut cols: Vec<Vec<UnramifiedElement>> = (0..d)
        .map(|j| (0..d).map(|i| UnramifiedElement::exact_int(f, (i == d - 1 - j) as i64)).collect())
        .collect();
    for (&(j, i), a) in pos.iter().zip(coords) {
        cols[j][i] = UnramifiedElement::from_scalar(f, PadicScalar::from_int(f.prime(), a.clone(), prec));
    }
    let mut flags = BTreeMap::new();
    let mut jumps = w.clone();
    jumps.dedup();
    for &k in &jumps {
        let n = w.iter().filter(|&&x| x >= k).count();
        flags.insert(k, Matrix::from_cols(&cols[..n], d));
    }
    Ok(flags)
}

/// Uniform chart coordinates modulo p^N.
pub fn sample_coords(rng: &mut ChaCha8Rng, p: u64, prec: i64, count: usize) -> Vec<BigInt> {
    let bound = num_traits::pow(BigInt::from(p), prec.clamp(1, 64) as usize);
    (0..count).map(|_| rng.gen_bigint_range(&BigInt::from(0), &bound)).collect()
}

fn evaluate(cfg: &ScanConfig, flags: BTreeMap<i64, KMatrix>, seed: u64) -> Result<WaReport> {
    let fd = FilteredIsocrystal::new(cfg.isocrystal.clone(), cfg.weights.clone(), flags)?;
    fd.weakly_admissible_with(&WaSearch { samples: 64, seed })
}

/// Runs the scan; rows come back in sample order.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    if cfg.weights.is_empty() {
        return Err(Error::Invalid("the Hodge–Tate multiset is empty".into()));
    }
    if cfg.samples == 0 && cfg.forced.is_empty() {
        return Err(Error::Invalid("sample count must be at least 1".into()));
    }
    let iso = &cfg.isocrystal;
    let npos = chart_positions(&cfg.weights).len();
    let p = iso.prime();
    let prec = iso.field().precision();
    let mut rows = Vec::new();
    for (k, flags) in cfg.forced.iter().enumerate() {
        let report = evaluate(cfg, flags.clone(), cfg.seed)?;
        rows.push(ScanRow { index: k, forced: true, coords: Vec::new(), report });
    }
    let base = rows.len();
    let sampled: Vec<Result<ScanRow>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let coords = sample_coords(&mut rng, p, prec, npos);
            let flags = chart_flags(iso, &cfg.weights, &coords)?;
            let report = evaluate(cfg, flags, cfg.seed.wrapping_add(k as u64))?;
            Ok(ScanRow { index: base + k, forced: false, coords, report })
        })
        .collect();
    for r in sampled {
        rows.push(r?);
    }
    Ok(rows)
}

pub fn summarize(rows: &[ScanRow]) -> ScanSummary {
    let mut s = ScanSummary { total: rows.len(), exact_path: !rows.is_empty(), ..Default::default() };
    for r in rows {
        match r.report.decision {
            Decision::True => s.wa_true += 1,
            Decision::False => s.wa_false += 1,
            Decision::Unknown => s.unknown += 1,
        }
        s.exact_path &= r.report.exact_path;
    }
    s
}

/// One-cell description of a witness, free of commas.
pub fn witness_label(w: &Option<Witness>) -> String {
    match w {
        None => String::new(),
        Some(Witness::Global { t_n, t_h }) => format!("global tN={t_n} tH={t_h}"),
        Some(Witness::HodgeAboveNewton { x }) => format!("hodge-above-newton x={x}"),
        Some(Witness::Subset { components, t_n, t_h }) => {
            let c: Vec<String> = components.iter().map(|i| i.to_string()).collect();
            format!("components {} tN={t_n} tH={t_h}", c.join(" "))
        }
        Some(Witness::Subspace { basis, t_n, t_h }) => format!("subspace dim={} tN={t_n} tH={t_h}", basis.cols()),
    }
}

pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut out = format!("# isolab wa-scan v{SCAN_FORMAT_VERSION}\n{CSV_COLUMNS}\n");
    for r in rows {
        let coords: Vec<String> = r.coords.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.index,
            if r.forced { "forced" } else { "sample" },
            coords.join(";"),
            r.report.t_n,
            r.report.t_h,
            r.report.decision.as_str(),
            r.report.exact_path,
            witness_label(&r.report.witness),
        ));
    }
    out
}

pub fn to_json(rows: &[ScanRow]) -> Value {
    let s = summarize(rows);
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = crate::json::decision_to_json(&r.report);
            v["index"] = json!(r.index);
            v["kind"] = json!(if r.forced { "forced" } else { "sample" });
            v["coords"] = json!(r.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            v
        })
        .collect();
    json!({
        "format": format!("isolab wa-scan v{SCAN_FORMAT_VERSION}"),
        "rows": rows,
        "summary": summary_json(&s),
    })
}

pub fn summary_json(s: &ScanSummary) -> Value {
    json!({"total": s.total, "true": s.wa_true, "false": s.wa_false, "unknown": s.unknown, "exact_path": s.exact_path})
}
