use rayon::prelude::*;

use crate::config::SweepSpec;
use crate::format::format_g;
use crate::quantity::{run_point, Record};

/// CSV text of a finished sweep and the number of rows with flagged errors.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub csv: String,
    pub failed_rows: usize,
}

pub fn header(spec: &SweepSpec) -> String {
    let mut cols = vec!["x".to_string(), "y".to_string()];
    cols.extend(spec.quantities.iter().map(|q| q.name().to_string()));
    cols.push("err_flags".into());
    cols.join(",")
}

fn row(spec: &SweepSpec, ix: usize, iy: usize) -> (String, bool) {
    let record = match spec.point(ix, iy) {
        Ok((p, t)) => run_point(&p, t, &spec.quantities, &spec.quad),
        Err(e) => Record {
            values: vec![f64::NAN; spec.quantities.len()],
            flags: vec![format!("point:{e}").replace(',', ";")],
        },
    };
    let mut fields = vec![format_g(spec.x.value(ix)), format_g(spec.y.value(iy))];
    fields.extend(record.values.iter().map(|&v| format_g(v)));
    fields.push(record.err_flags());
    (fields.join(","), !record.flags.is_empty())
}

/// Evaluates the grid in parallel; rows are row-major with `x` fastest and
/// do not depend on the number of worker threads.
pub fn run_sweep(spec: &SweepSpec) -> SweepOutput {
    let (nx, ny) = (spec.x.steps, spec.y.steps);
    let rows: Vec<(String, bool)> = (0..nx * ny)
        .into_par_iter()
        .map(|k| row(spec, k % nx, k / nx))
        .collect();
    let mut csv = header(spec);
    csv.push('\n');
    let mut failed_rows = 0;
    for (line, failed) in rows {
        csv.push_str(&line);
        csv.push('\n');
        failed_rows += failed as usize;
    }
    SweepOutput { csv, failed_rows }
}
