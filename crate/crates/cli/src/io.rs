use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};

use crate::Failure;

/// `-` selects standard input.
pub fn open_input(path: &str) -> Result<Box<dyn Read>, Failure> {
    if path == "-" {
        return Ok(Box::new(io::stdin().lock()));
    }
    File::open(path)
        .map(|f| Box::new(BufReader::new(f)) as Box<dyn Read>)
        .map_err(|e| Failure::Data(format!("cannot open {path}: {e}")))
}

/// `-` selects standard output.
pub fn open_output(path: &str) -> Result<Box<dyn Write>, Failure> {
    if path == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    File::create(path)
        .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
        .map_err(|e| Failure::Data(format!("cannot create {path}: {e}")))
}

/// Read one numeric column of a headed CSV.
///
/// Without an explicit `column`, an `s_stat` column is used when present and
/// a single-column file is read as is. Empty cells are skipped, which drops
/// the zero-range paths of an ensemble file.
pub fn read_sample(path: &str, column: Option<&str>) -> Result<Vec<f64>, Failure> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(open_input(path)?);
    let headers = reader
        .headers()
        .map_err(|e| Failure::Data(format!("{path}: {e}")))?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
    let index = match column {
        Some(name) => find(name).ok_or_else(|| Failure::Data(format!("{path}: no column named {name:?}")))?,
        None => match find("s_stat") {
            Some(i) => i,
            None if headers.len() == 1 => 0,
            None => {
                return Err(Failure::Data(format!(
                    "{path}: {} columns and none named s_stat; pick one with --column",
                    headers.len()
                )))
            }
        },
    };

    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Failure::Data(format!("{path}: row {row}: {e}")))?;
        let cell = record.get(index).unwrap_or("").trim();
        if cell.is_empty() {
            continue;
        }
        let v: f64 = cell
            .parse()
            .map_err(|_| Failure::Data(format!("{path}: row {row}: {cell:?} is not a number")))?;
        if !v.is_finite() {
            return Err(Failure::Data(format!("{path}: row {row}: non-finite value")));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Failure::Data(format!("{path}: no values")));
    }
    Ok(values)
}
