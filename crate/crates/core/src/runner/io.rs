//! CSV file formats. Every file starts with a fixed header line; reals are
//! written with 17 significant digits so they read back bit-identical.

use std::io::{Read, Write};

use crate::bandit::RegretTrace;
use crate::error::{Error, Result};

use super::summary::SummaryRow;

pub const TRACE_HEADER: [&str; 4] = ["run", "t", "arm", "cum_regret"];
pub const SUMMARY_HEADER: [&str; 5] = ["t", "mean", "ci_low", "ci_high", "runs"];
pub const PLOT_HEADER: [&str; 5] = ["algo", "t", "mean", "ci_low", "ci_high"];

/// `x` with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV writer with `\n` record terminators.
pub fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(false).from_reader(r)
}

fn check_header(record: Option<csv::StringRecord>, want: &[&str]) -> Result<()> {
    match record {
        Some(r) if r.iter().eq(want.iter().copied()) => Ok(()),
        Some(r) => Err(Error::Parse(format!(
            "expected header {want:?}, found {r:?}"
        ))),
        None => Err(Error::Parse("empty file".into())),
    }
}

fn field<T: std::str::FromStr>(r: &csv::StringRecord, i: usize) -> Result<T> {
    r.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad field {i} in {r:?}")))
}

pub fn write_trace<W: Write>(w: W, trace: &RegretTrace) -> Result<()> {
    let mut out = writer(w);
    out.write_record(TRACE_HEADER)?;
    for row in trace.rows() {
        out.write_record([
            trace.run_id.to_string(),
            row.t.to_string(),
            row.arm.to_string(),
            fmt_real(row.cumulative),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(SUMMARY_HEADER)?;
    for r in rows {
        out.write_record([
            r.t.to_string(),
            fmt_real(r.mean),
            fmt_real(r.ci_low),
            fmt_real(r.ci_high),
            r.runs.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_summary<R: Read>(r: R) -> Result<Vec<SummaryRow>> {
    let mut rd = reader(r);
    let mut records = rd.records();
    check_header(records.next().transpose()?, &SUMMARY_HEADER)?;
    records
        .map(|rec| {
            let rec = rec?;
            Ok(SummaryRow {
                t: field(&rec, 0)?,
                mean: field(&rec, 1)?,
                ci_low: field(&rec, 2)?,
                ci_high: field(&rec, 3)?,
                runs: field(&rec, 4)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotRow {
    pub t: u64,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl From<&SummaryRow> for PlotRow {
    fn from(r: &SummaryRow) -> Self {
        PlotRow {
            t: r.t,
            mean: r.mean,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
        }
    }
}

/// One curve of the plot-data file.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub algo: String,
    pub rows: Vec<PlotRow>,
}

impl PlotSeries {
    pub fn from_summary(algo: impl Into<String>, rows: &[SummaryRow]) -> Self {
        PlotSeries {
            algo: algo.into(),
            rows: rows.iter().map(PlotRow::from).collect(),
        }
    }
}

/// Long-format plot data: rows ordered by algorithm name, then round. All
/// series must share the same rounds.
pub fn emit_plot_data<W: Write>(w: W, series: &[PlotSeries]) -> Result<()> {
    if let Some(first) = series.first() {
        let rounds: Vec<u64> = first.rows.iter().map(|r| r.t).collect();
        for s in series {
            if !s.rows.iter().map(|r| r.t).eq(rounds.iter().copied()) {
                return Err(Error::Precondition(format!(
                    "{} and {} have different checkpoints",
                    s.algo, first.algo
                )));
            }
        }
    }
    let mut ordered: Vec<&PlotSeries> = series.iter().collect();
    ordered.sort_by(|a, b| a.algo.cmp(&b.algo));
    let mut out = writer(w);
    out.write_record(PLOT_HEADER)?;
    for s in ordered {
        let mut rows = s.rows.clone();
        rows.sort_by_key(|r| r.t);
        for r in rows {
            out.write_record([
                s.algo.clone(),
                r.t.to_string(),
                fmt_real(r.mean),
                fmt_real(r.ci_low),
                fmt_real(r.ci_high),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_plot_data<R: Read>(r: R) -> Result<Vec<PlotSeries>> {
    let mut rd = reader(r);
    let mut records = rd.records();
    check_header(records.next().transpose()?, &PLOT_HEADER)?;
    let mut series: Vec<PlotSeries> = Vec::new();
    for rec in records {
        let rec = rec?;
        let algo = rec.get(0).unwrap_or_default().to_string();
        let row = PlotRow {
            t: field(&rec, 1)?,
            mean: field(&rec, 2)?,
            ci_low: field(&rec, 3)?,
            ci_high: field(&rec, 4)?,
        };
        match series.iter_mut().find(|s| s.algo == algo) {
            Some(s) => s.rows.push(row),
            None => series.push(PlotSeries {
                algo,
                rows: vec![row],
            }),
        }
    }
    Ok(series)
}
