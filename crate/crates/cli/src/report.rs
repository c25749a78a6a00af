//! CSV tables of a study.
//!
//! `study.csv` has one row per estimator replication:
//! `method,L,h_L,rep,estimate,reference,rel_error`. `summary.csv` has one
//! row per method and level: `method,L,h_L,reps,rmse,slope`, where `slope`
//! is the least-squares slope of `log rmse` against `log h_L` over all
//! levels of the method. Both are deterministic given the manifest. Wall
//! times go to `timing.csv` (`method,L,rep,wall_seconds`).

use std::io::Write;
use std::path::Path;

use jumpmc_core::mlmc::StudyTable;

fn num(v: f64) -> String {
    format!("{v}")
}

fn writer(path: &Path) -> std::io::Result<csv::Writer<std::fs::File>> {
    Ok(csv::Writer::from_writer(std::fs::File::create(path)?))
}

fn finish<W: Write>(w: csv::Writer<W>) -> std::io::Result<()> {
    w.into_inner().map_err(|e| e.into_error())?.flush()
}

pub fn write_study(table: &StudyTable, path: &Path) -> std::io::Result<()> {
    let mut w = writer(path)?;
    w.write_record(["method", "L", "h_L", "rep", "estimate", "reference", "rel_error"])?;
    for r in &table.rows {
        w.write_record([
            r.method.to_string(),
            r.level.to_string(),
            num(r.h_bar),
            r.rep.to_string(),
            num(r.estimate),
            num(r.reference),
            num(r.rel_error),
        ])?;
    }
    finish(w)
}

pub fn write_summary(table: &StudyTable, path: &Path) -> std::io::Result<()> {
    let mut w = writer(path)?;
    w.write_record(["method", "L", "h_L", "reps", "rmse", "slope"])?;
    for s in &table.summary {
        let slope = table.slope(s.method).map(num).unwrap_or_default();
        w.write_record([
            s.method.to_string(),
            s.level.to_string(),
            num(s.h_bar),
            s.reps.to_string(),
            num(s.rmse),
            slope,
        ])?;
    }
    finish(w)
}

pub fn write_timing(table: &StudyTable, path: &Path) -> std::io::Result<()> {
    let mut w = writer(path)?;
    w.write_record(["method", "L", "rep", "wall_seconds"])?;
    for r in &table.rows {
        w.write_record([
            r.method.to_string(),
            r.level.to_string(),
            r.rep.to_string(),
            num(r.wall_time.as_secs_f64()),
        ])?;
    }
    finish(w)
}
