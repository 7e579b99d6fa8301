//! CSV input and output. Floating-point fields are written with 17 significant digits.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Read an initial datum with header `x,q0`.
pub fn read_datum_csv<R: std::io::Read>(reader: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidDatum(format!("missing column '{name}'")))
    };
    let (ix, iq) = (col("x")?, col("q0")?);
    let (mut x, mut q) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidDatum(format!("bad number on data row {}", line + 1)))
        };
        x.push(parse(ix)?);
        q.push(parse(iq)?);
    }
    Ok((x, q))
}

pub fn read_datum_file(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    read_datum_csv(std::fs::File::open(path)?)
}

/// Write a header and rows of mixed numeric/text cells.
pub fn write_table<W: Write>(writer: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_datum_csv<W: Write>(writer: W, x: &[f64], q0: &[f64]) -> Result<()> {
    write_table(writer, &["x", "q0"], x.iter().zip(q0).map(|(a, b)| vec![fmt(*a), fmt(*b)]))
}
