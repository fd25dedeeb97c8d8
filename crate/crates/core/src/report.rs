//! CSV and JSON output shared by all commands.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Frozen layout identifier embedded in every emitted file.
pub const SCHEMA: &str = "biharmonic-lab/report-v1";

/// One row of a residual grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub s_or_r: f64,
    pub residual_name: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema: String,
    pub suite: String,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Formats floats with round-trip precision so re-runs are byte identical.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:?}")
    }
}

pub fn write_grid_csv<W: Write>(out: W, rows: &[GridRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| GeometryError::Numerical(format!("csv: {e}"));
    w.write_record(["schema", "s_or_r", "residual_name", "value", "pass"]).map_err(io)?;
    for r in rows {
        w.write_record([SCHEMA, &fmt_f64(r.s_or_r), &r.residual_name, &fmt_f64(r.value), if r.pass { "true" } else { "false" }])
            .map_err(io)?;
    }
    w.flush().map_err(|e| GeometryError::Numerical(format!("csv: {e}")))?;
    Ok(())
}

pub fn read_grid_csv<R: std::io::Read>(input: R) -> Result<Vec<GridRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| GeometryError::InvalidInput(format!("csv: {e}")))?;
        if rec.len() != 5 || &rec[0] != SCHEMA {
            return Err(GeometryError::InvalidInput("unexpected grid csv layout".into()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| GeometryError::InvalidInput(format!("csv number '{s}': {e}")));
        rows.push(GridRow {
            s_or_r: num(&rec[1])?,
            residual_name: rec[2].to_string(),
            value: num(&rec[3])?,
            pass: &rec[4] == "true",
        });
    }
    Ok(rows)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| GeometryError::Numerical(format!("json: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_round_trip() {
        let rows = vec![
            GridRow { s_or_r: 0.2, residual_name: "eq54".into(), value: -1.0 / 3.0, pass: false },
            GridRow { s_or_r: 1e-300, residual_name: "eq55".into(), value: f64::NAN, pass: true },
        ];
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &rows).unwrap();
        let back = read_grid_csv(buf.as_slice()).unwrap();
        assert_eq!(back[0], rows[0]);
        assert!(back[1].value.is_nan() && back[1].s_or_r == 1e-300);
    }
}
