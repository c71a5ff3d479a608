//! Tabular reports of batch statistics.
//!
//! The CSV column order is fixed; new columns are only ever appended:
//!
//! ```text
//! instance,solver,runs,completed,failed,skipped,best_energy,mean_energy,
//! best_cut,mean_cut,hit_count,success_probability,total_seconds,
//! mean_seconds_per_run,error
//! ```

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::runner::BatchStats;

pub const CSV_COLUMNS: [&str; 15] = [
    "instance",
    "solver",
    "runs",
    "completed",
    "failed",
    "skipped",
    "best_energy",
    "mean_energy",
    "best_cut",
    "mean_cut",
    "hit_count",
    "success_probability",
    "total_seconds",
    "mean_seconds_per_run",
    "error",
];

/// One `(instance, solver)` line. Statistic fields are empty when the batch failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub solver: String,
    pub runs: usize,
    pub completed: Option<usize>,
    pub failed: Option<usize>,
    pub skipped: Option<usize>,
    pub best_energy: Option<f64>,
    pub mean_energy: Option<f64>,
    pub best_cut: Option<f64>,
    pub mean_cut: Option<f64>,
    pub hit_count: Option<usize>,
    pub success_probability: Option<f64>,
    pub total_seconds: Option<f64>,
    pub mean_seconds_per_run: Option<f64>,
    pub error: Option<String>,
}

impl ReportRow {
    pub fn from_stats(instance: &str, solver: &str, runs: usize, stats: &BatchStats) -> Self {
        ReportRow {
            instance: instance.to_string(),
            solver: solver.to_string(),
            runs,
            completed: Some(stats.completed),
            failed: Some(stats.failed),
            skipped: Some(stats.skipped),
            best_energy: Some(stats.best_energy),
            mean_energy: Some(stats.mean_energy),
            best_cut: Some(stats.best_cut),
            mean_cut: Some(stats.mean_cut),
            hit_count: Some(stats.hit_count),
            success_probability: Some(stats.success_probability),
            total_seconds: Some(stats.total_seconds),
            mean_seconds_per_run: Some(stats.mean_seconds_per_run),
            error: None,
        }
    }

    pub fn failure(instance: &str, solver: &str, runs: usize, error: impl Into<String>) -> Self {
        ReportRow {
            instance: instance.to_string(),
            solver: solver.to_string(),
            runs,
            completed: None,
            failed: None,
            skipped: None,
            best_energy: None,
            mean_energy: None,
            best_cut: None,
            mean_cut: None,
            hit_count: None,
            success_probability: None,
            total_seconds: None,
            mean_seconds_per_run: None,
            error: Some(error.into()),
        }
    }

    pub fn is_failure(&self) -> bool {
        self.error.is_some()
    }
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(csv_error)?;
    }
    writer.flush().map_err(|e| Error::io("<report>", e))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ReportRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(Error::Structure(format!(
            "unexpected report columns: {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    reader.deserialize().map(|r| r.map_err(csv_error)).collect()
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Fixed-width table with completed runs, energies, `f_best` (best cut),
/// `f_avg` (mean cut), hit count, `P` and mean seconds per run.
pub fn human_table(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:<7} {:>7} {:>14} {:>14} {:>12} {:>12} {:>6} {:>9} {:>10}",
        "instance",
        "solver",
        "done",
        "best_energy",
        "mean_energy",
        "f_best",
        "f_avg",
        "hits",
        "P",
        "t(s)"
    );
    for r in rows {
        if let Some(err) = &r.error {
            let _ = writeln!(
                out,
                "{:<16} {:<7} {:>7}  failed: {err}",
                r.instance, r.solver, r.runs
            );
            continue;
        }
        let _ = writeln!(
            out,
            "{:<16} {:<7} {:>7} {:>14.4} {:>14.4} {:>12.2} {:>12.2} {:>6} {:>9.5} {:>10.5}",
            r.instance,
            r.solver,
            r.completed.unwrap_or(0),
            r.best_energy.unwrap_or(f64::NAN),
            r.mean_energy.unwrap_or(f64::NAN),
            r.best_cut.unwrap_or(f64::NAN),
            r.mean_cut.unwrap_or(f64::NAN),
            r.hit_count.unwrap_or(0),
            r.success_probability.unwrap_or(f64::NAN),
            r.mean_seconds_per_run.unwrap_or(f64::NAN),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_keeps_values_and_columns() {
        let rows = vec![
            ReportRow {
                instance: "G1".into(),
                solver: "MARS".into(),
                runs: 10,
                completed: Some(9),
                failed: Some(0),
                skipped: Some(1),
                best_energy: Some(-0.1 - 0.2),
                mean_energy: Some(-1.0 / 3.0),
                best_cut: Some(11500.0),
                mean_cut: Some(11400.25),
                hit_count: Some(2),
                success_probability: Some(2.0 / 9.0),
                total_seconds: Some(1.5),
                mean_seconds_per_run: Some(0.1),
                error: None,
            },
            ReportRow::failure("G2", "SA", 5, "boom, with a comma"),
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn rejects_foreign_columns() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
