//! Report rows and machine-readable writers (CSV and JSON).

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

/// One `solve` repetition, flattened for CSV.
#[derive(Clone, Debug, Serialize)]
pub struct SolveRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub alg: String,
    pub q: usize,
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub bound: f64,
    pub integer_value: Option<f64>,
    pub certified: bool,
    pub time_s: f64,
    pub termination: String,
}

pub const SOLVE_HEADER: [&str; 14] = [
    "instance",
    "n",
    "m",
    "k",
    "alg",
    "q",
    "iters",
    "restarts",
    "seed",
    "bound",
    "integer_value",
    "certified",
    "time_s",
    "termination",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes per-repetition rows plus one aggregate row (best values,
/// mean wall time).
pub fn write_solve_csv<W: Write>(out: W, rows: &[SolveRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SOLVE_HEADER)?;
    for r in rows {
        w.write_record([
            r.instance.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.k.to_string(),
            r.alg.clone(),
            r.q.to_string(),
            r.iters.to_string(),
            r.restarts.to_string(),
            r.seed.to_string(),
            r.bound.to_string(),
            opt(r.integer_value),
            r.certified.to_string(),
            r.time_s.to_string(),
            r.termination.clone(),
        ])?;
    }
    if rows.len() > 1 {
        let agg = aggregate(rows);
        let base = &rows[0];
        w.write_record([
            base.instance.clone(),
            base.n.to_string(),
            base.m.to_string(),
            base.k.to_string(),
            base.alg.clone(),
            base.q.to_string(),
            base.iters.to_string(),
            base.restarts.to_string(),
            base.seed.to_string(),
            agg.best_bound.to_string(),
            opt(agg.best_integer_value),
            agg.any_certified.to_string(),
            agg.mean_time_s.to_string(),
            "aggregate".to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Aggregate over the repetitions of one experiment.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub reps: usize,
    pub best_bound: f64,
    pub mean_bound: f64,
    pub best_integer_value: Option<f64>,
    pub mean_integer_value: Option<f64>,
    pub any_certified: bool,
    pub mean_time_s: f64,
}

pub fn aggregate(rows: &[SolveRow]) -> Summary {
    let reps = rows.len();
    let best_bound = rows
        .iter()
        .map(|r| r.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let mean_bound = rows.iter().map(|r| r.bound).sum::<f64>() / reps as f64;
    let ints: Vec<f64> = rows.iter().filter_map(|r| r.integer_value).collect();
    let best_integer_value = ints.iter().copied().fold(None, |acc: Option<f64>, v| {
        Some(acc.map_or(v, |a| a.max(v)))
    });
    let mean_integer_value = if ints.is_empty() {
        None
    } else {
        Some(ints.iter().sum::<f64>() / ints.len() as f64)
    };
    Summary {
        reps,
        best_bound,
        mean_bound,
        best_integer_value,
        mean_integer_value,
        any_certified: rows.iter().any(|r| r.certified),
        mean_time_s: rows.iter().map(|r| r.time_s).sum::<f64>() / reps as f64,
    }
}

/// Extra per-repetition detail that only fits the JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct JsonRun {
    #[serde(flatten)]
    pub row: SolveRow,
    pub init: String,
    pub weights: String,
    pub int_tol: f64,
    pub obj_tol: f64,
    pub restarts_used: usize,
    pub iterations_total: usize,
    pub terminations: Vec<String>,
    /// Best vertex set in the instance's original labels.
    pub vertex_set: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JsonDoc {
    pub instance: InstanceMeta,
    pub runs: Vec<JsonRun>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceMeta {
    pub name: String,
    pub n: usize,
    pub m: usize,
}

pub fn write_json<W: Write>(mut out: W, doc: &JsonDoc) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// One cell of a (q, iters) sweep grid.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub q: usize,
    pub iters: usize,
    pub bound: f64,
    pub integer_value: Option<f64>,
    pub wall_time_s: f64,
    pub termination: String,
}

pub const SWEEP_HEADER: [&str; 6] = [
    "q",
    "iters",
    "bound",
    "integer_value",
    "wall_time_s",
    "termination",
];

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.iters.to_string(),
            r.bound.to_string(),
            opt(r.integer_value),
            r.wall_time_s.to_string(),
            r.termination.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
