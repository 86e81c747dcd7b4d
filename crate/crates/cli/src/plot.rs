use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;

use osfib_core::runner::{algo_of_run_dir, emit_plot_data, read_summary, PlotSeries};
use osfib_core::Result;

use crate::{usage, Status};

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// A run directory (its metadata names the algorithm), or
    /// `NAME=PATH` where PATH is a run directory or a summary.csv.
    #[arg(long = "input", required = true, value_name = "INPUT")]
    pub inputs: Vec<String>,

    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load(input: &str) -> Result<PlotSeries> {
    let (name, path) = match input.split_once('=') {
        Some((name, path)) if !name.is_empty() => (Some(name.to_string()), PathBuf::from(path)),
        Some(_) => return Err(usage(format!("empty series name in {input:?}"))),
        None => (None, PathBuf::from(input)),
    };
    let (summary, algo) = if path.is_dir() {
        let algo = match name {
            Some(n) => n,
            None => algo_of_run_dir(&path)?,
        };
        (path.join("summary.csv"), algo)
    } else {
        let algo =
            name.ok_or_else(|| usage(format!("{input:?}: a summary file needs NAME=PATH")))?;
        (path, algo)
    };
    let rows = read_summary(BufReader::new(open(&summary)?))?;
    Ok(PlotSeries::from_summary(algo, &rows))
}

fn open(path: &Path) -> Result<File> {
    File::open(path)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

pub fn plot_data(args: PlotArgs) -> Result<Status> {
    let series = args
        .inputs
        .iter()
        .map(|i| load(i))
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<&str> = series.iter().map(|s| s.algo.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(usage(format!("series name {:?} given twice", w[0])));
    }
    let out: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    emit_plot_data(out, &series)?;
    Ok(Status::Ok)
}
