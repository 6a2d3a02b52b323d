//! Record serialization: one JSON object per line, or a flat CSV.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::runner::Record;

pub fn write_ndjson<W: Write, T: Serialize>(mut out: W, items: impl IntoIterator<Item = T>) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, &item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    subset: &'a str,
    param: String,
    lower: Option<f64>,
    upper: Option<f64>,
    status: &'static str,
}

/// Columns `subset,param,lower,upper,status`; bounds are empty unless optimal.
pub fn write_csv<'a, W: Write>(out: W, records: impl IntoIterator<Item = &'a Record>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        let param = r.parameters.iter().map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(";");
        let status = match r.status {
            pidbounds_core::BoundsStatus::Optimal => "optimal",
            pidbounds_core::BoundsStatus::Infeasible => "infeasible",
            pidbounds_core::BoundsStatus::Unbounded => "unbounded",
        };
        w.serialize(CsvRow { subset: &r.subset, param, lower: r.lower, upper: r.upper, status })?;
    }
    w.flush()?;
    Ok(())
}
