//! CSV forms of sweep results and traces. Reals are written with 17
//! significant digits, integers as integers.

use std::path::Path;

use super::sweep::{SweepResult, SweepRow};
use crate::error::{Error, Result};
use crate::io::{read_to_string, write_atomic};
use crate::scalar::Real;
use crate::solvers::IterateTrace;

pub const SWEEP_COLUMNS: [&str; 7] = [
    "k",
    "trials",
    "successes",
    "success_rate",
    "mean_iterations",
    "mean_re",
    "mean_wall_time_s",
];

pub const TRACE_COLUMNS: [&str; 5] = [
    "iter",
    "objective",
    "rel_error",
    "residual_norm",
    "elapsed_s",
];

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn render(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn render_sweep_csv(result: &SweepResult) -> String {
    render(
        &SWEEP_COLUMNS,
        result.rows.iter().map(|r| {
            vec![
                r.k.to_string(),
                r.trials.to_string(),
                r.successes.to_string(),
                real(r.success_rate),
                real(r.mean_iterations),
                real(r.mean_re),
                real(r.mean_wall_time_s),
            ]
        }),
    )
}

pub fn render_trace_csv<T: Real>(trace: &IterateTrace<T>) -> String {
    render(
        &TRACE_COLUMNS,
        (0..trace.len()).map(|i| {
            vec![
                (i + 1).to_string(),
                real(trace.objective[i].as_f64()),
                real(trace.rel_error[i].as_f64()),
                real(trace.residual_norm[i].as_f64()),
                real(trace.elapsed_s[i]),
            ]
        }),
    )
}

pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let text = render_sweep_csv(result);
    write_atomic(path, |w| w.write_all(text.as_bytes()))
}

pub fn write_trace_csv<T: Real>(trace: &IterateTrace<T>, path: &Path) -> Result<()> {
    let text = render_trace_csv(trace);
    write_atomic(path, |w| w.write_all(text.as_bytes()))
}

fn records(text: &str, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let got = r
        .headers()
        .map_err(|e| Error::format(1, "header", e.to_string()))?;
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::format(
            1,
            "header",
            format!("expected columns {}", header.join(",")),
        ));
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| rec.map_err(|e| Error::format(i + 2, "record", e.to_string())))
        .collect()
}

fn field<V: std::str::FromStr>(
    rec: &csv::StringRecord,
    idx: usize,
    line: usize,
    name: &str,
) -> Result<V> {
    let raw = rec
        .get(idx)
        .ok_or_else(|| Error::format(line, name, "missing column"))?;
    raw.parse()
        .map_err(|_| Error::format(line, name, format!("cannot parse `{raw}`")))
}

pub fn read_sweep_csv(path: &Path) -> Result<SweepResult> {
    let text = read_to_string(path)?;
    let mut rows = Vec::new();
    for (i, rec) in records(&text, &SWEEP_COLUMNS)?.iter().enumerate() {
        let line = i + 2;
        rows.push(SweepRow {
            k: field(rec, 0, line, "k")?,
            trials: field(rec, 1, line, "trials")?,
            successes: field(rec, 2, line, "successes")?,
            success_rate: field(rec, 3, line, "success_rate")?,
            mean_iterations: field(rec, 4, line, "mean_iterations")?,
            mean_re: field(rec, 5, line, "mean_re")?,
            mean_wall_time_s: field(rec, 6, line, "mean_wall_time_s")?,
        });
    }
    Ok(SweepResult { rows })
}

pub fn read_trace_csv(path: &Path) -> Result<IterateTrace<f64>> {
    let text = read_to_string(path)?;
    let mut trace = IterateTrace::default();
    for (i, rec) in records(&text, &TRACE_COLUMNS)?.iter().enumerate() {
        let line = i + 2;
        let iter: usize = field(rec, 0, line, "iter")?;
        if iter != i + 1 {
            return Err(Error::format(
                line,
                "iter",
                format!("expected {}, found {iter}", i + 1),
            ));
        }
        trace.objective.push(field(rec, 1, line, "objective")?);
        trace.rel_error.push(field(rec, 2, line, "rel_error")?);
        trace
            .residual_norm
            .push(field(rec, 3, line, "residual_norm")?);
        trace.elapsed_s.push(field(rec, 4, line, "elapsed_s")?);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(k: usize) -> SweepRow {
        SweepRow {
            k,
            trials: 20,
            successes: 15,
            success_rate: 0.75,
            mean_iterations: 1234.5,
            mean_re: 1.0 / 3.0,
            mean_wall_time_s: 0.125,
        }
    }

    #[test]
    fn empty_result_is_header_only() {
        let text = render_sweep_csv(&SweepResult::default());
        assert_eq!(text, format!("{}\n", SWEEP_COLUMNS.join(",")));
    }

    #[test]
    fn one_row_layout() {
        let text = render_sweep_csv(&SweepResult {
            rows: vec![row(50)],
        });
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "k,trials,successes,success_rate,mean_iterations,mean_re,mean_wall_time_s"
        );
        assert!(lines[1].starts_with("50,20,15,7.5000000000000000e-1,"));
    }

    #[test]
    fn sweep_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let res = SweepResult {
            rows: vec![row(50), row(60)],
        };
        write_sweep_csv(&res, &p).unwrap();
        assert_eq!(read_sweep_csv(&p).unwrap(), res);
    }

    #[test]
    fn trace_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let mut tr = IterateTrace::<f64>::default();
        tr.push(0.5, f64::NAN, 1.0, 0.0);
        tr.push(0.25, 0.1, std::f64::consts::PI, 1e-3);
        write_trace_csv(&tr, &p).unwrap();
        let back = read_trace_csv(&p).unwrap();
        assert_eq!(back.objective, tr.objective);
        assert!(back.rel_error[0].is_nan());
        assert_eq!(back.rel_error[1], 0.1);
        assert_eq!(back.residual_norm, tr.residual_norm);
        assert_eq!(back.elapsed_s, tr.elapsed_s);
    }

    #[test]
    fn wrong_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "k,trials\n1,2\n").unwrap();
        assert!(matches!(read_sweep_csv(&p), Err(Error::Format { .. })));
    }
}
