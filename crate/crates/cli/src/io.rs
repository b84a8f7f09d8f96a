use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Reads a series as raw little-endian binary64 or, with `csv`, as a single
/// numeric column. A non-numeric first row is treated as a header.
pub fn read_series(path: &Path, csv: bool) -> Result<Vec<f64>, CliError> {
    if csv {
        read_csv(path)
    } else {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        decode_f64s(&bytes).ok_or_else(|| {
            CliError::Data(format!(
                "{}: {} bytes is not a whole number of binary64 samples",
                path.display(),
                bytes.len()
            ))
        })
    }
}

pub fn decode_f64s(bytes: &[u8]) -> Option<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return None;
    }
    Some(
        bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect(),
    )
}

fn read_csv(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let field = record.get(0).unwrap_or("");
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if row == 0 => continue,
            Err(_) => {
                return Err(CliError::Data(format!(
                    "{}: row {}: {field:?} is not a number",
                    path.display(),
                    row + 1
                )))
            }
        }
    }
    Ok(out)
}

pub fn write_series(path: &Path, values: &[f64]) -> Result<(), CliError> {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes CSV rows to `path`, or to stdout when `path` is `None`.
pub fn write_csv(
    path: Option<&Path>,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| CliError::io(p, e))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let fail = |e: csv::Error| CliError::Data(format!("writing csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    w.flush()
        .map_err(|e| CliError::Data(format!("writing csv: {e}")))
}
