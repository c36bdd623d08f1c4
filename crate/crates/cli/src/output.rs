use std::io::{self, Write};

use clap::ValueEnum;
use kreinpoly::bench::{BenchReport, BenchRow};
use kreinpoly::jobs::{ResultRecord, CSV_HEADER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    Json,
    /// Fixed columns: family,alpha,gamma,degrees,s,beta,route,value,rel_err,terms,micros.
    Csv,
    /// Just the value.
    Plain,
}

/// Writes the records; an empty slice writes nothing in any format.
pub fn write_records(w: &mut impl Write, records: &[ResultRecord], format: Format) -> io::Result<()> {
    if records.is_empty() {
        return Ok(());
    }
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *w, r)?;
                writeln!(w)?;
            }
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut *w);
            c.write_record(CSV_HEADER)?;
            for r in records {
                c.write_record(r.csv_row())?;
            }
            c.flush()?;
        }
        Format::Plain => {
            for r in records {
                match (&r.value, &r.error) {
                    (_, Some(e)) => writeln!(w, "error: {}: {}", e.kind, e.message)?,
                    (Some(v), None) => writeln!(w, "{v}")?,
                    (None, None) => writeln!(w)?,
                }
            }
        }
    }
    Ok(())
}

fn micros(row: &BenchRow) -> f64 {
    row.mean.as_secs_f64() * 1e6
}

pub fn write_bench(w: &mut impl Write, rep: &BenchReport, format: Format) -> io::Result<()> {
    let rows = rep.rows.iter().chain([&rep.quadrature]);
    match format {
        Format::Json => {
            let list: Vec<_> = rows
                .map(|r| {
                    serde_json::json!({
                        "label": r.label,
                        "mean_micros": micros(r),
                        "speedup": rep.speedup(r),
                        "value": r.value.to_string(),
                    })
                })
                .collect();
            serde_json::to_writer(&mut *w, &serde_json::json!({ "trials": rep.trials, "rows": list }))?;
            writeln!(w)
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut *w);
            c.write_record(["label", "mean_micros", "speedup", "value"])?;
            for r in rows {
                c.write_record([r.label.clone(), format!("{:.3}", micros(r)), format!("{:.3}", rep.speedup(r)), r.value.to_string()])?;
            }
            c.flush()
        }
        Format::Plain => {
            writeln!(w, "trials: {}", rep.trials)?;
            writeln!(w, "{:<12} {:>14} {:>10}  value", "route", "mean (µs)", "speedup")?;
            for r in rows {
                writeln!(w, "{:<12} {:>14.3} {:>9.2}x  {}", r.label, micros(r), rep.speedup(r), r.value)?;
            }
            Ok(())
        }
    }
}
