//! Result rows and their CSV form.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    /// Intermediate best-so-far checkpoint.
    Trace,
    /// Outcome of a completed run.
    Final,
    /// Outcome of a run stopped by the wall-clock guard.
    Timeout,
}

impl RowStatus {
    /// Whether the row summarises a whole run.
    pub fn is_outcome(self) -> bool {
        self != RowStatus::Trace
    }
}

/// One record per run checkpoint or run outcome. Fields that do not apply
/// to a problem are `None` and serialise as empty cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub run_id: u64,
    pub algorithm: String,
    pub problem: String,
    pub n: usize,
    pub m: Option<usize>,
    /// Absolute noise standard deviation.
    pub sigma: f64,
    pub seed: u64,
    pub evals_used: u64,
    pub evals_to_best: Option<u64>,
    pub best_true_fitness: Option<f64>,
    pub best_feasible_cost: Option<f64>,
    pub hypervolume: Option<f64>,
    pub wall_ms: Option<u64>,
    /// Instance index within its size.
    pub instance: usize,
    /// Noise level as listed in the experiment, before scaling.
    pub sigma_level: f64,
    pub budget: u64,
    pub status: RowStatus,
}

pub const RESULT_HEADER: [&str; 17] = [
    "run_id",
    "algorithm",
    "problem",
    "n",
    "m",
    "sigma",
    "seed",
    "evals_used",
    "evals_to_best",
    "best_true_fitness",
    "best_feasible_cost",
    "hypervolume",
    "wall_ms",
    "instance",
    "sigma_level",
    "budget",
    "status",
];

/// Writes `rows` as CSV with a header line.
pub fn write_results_to<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyResults);
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_results(rows: &[ResultRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyResults);
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_results_to(rows, file)
}

pub fn read_results_from<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(RESULT_HEADER.iter().copied()) {
        return Err(Error::parse("header", "not a result file"));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_results_from(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample_row() -> ResultRow {
        ResultRow {
            run_id: 3,
            algorithm: "umda".into(),
            problem: "setcover-penalty".into(),
            n: 50,
            m: Some(100),
            sigma: 0.1 + 0.2,
            seed: u64::MAX,
            evals_used: 50_000,
            evals_to_best: Some(1234),
            best_true_fitness: Some(17.0),
            best_feasible_cost: None,
            hypervolume: None,
            wall_ms: None,
            instance: 2,
            sigma_level: 1.0 / 3.0,
            budget: 50_000,
            status: RowStatus::Final,
        }
    }

    #[test]
    fn roundtrip_is_exact() {
        let mut other = sample_row();
        other.status = RowStatus::Trace;
        other.m = None;
        other.hypervolume = Some(779.999_999_1);
        let rows = vec![sample_row(), other];
        let mut buf = Vec::new();
        write_results_to(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&RESULT_HEADER.join(",")));
        assert_eq!(read_results_from(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn missing_values_are_empty_cells() {
        let mut buf = Vec::new();
        write_results_to(&[sample_row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert!(line.contains(",17.0,,,,2,"), "{line}");
    }

    #[test]
    fn empty_rows_refused() {
        assert!(matches!(
            write_results_to(&[], Vec::new()),
            Err(Error::EmptyResults)
        ));
    }

    #[test]
    fn unwritable_path_reported() {
        let err = write_results(&[sample_row()], Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
