//! CSV ingestion and export of single series.
//!
//! Files are comma-delimited UTF-8 with a header row and `.` as the decimal
//! separator. A column is picked by header name, or by 0-based position when
//! no header matches.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{validate_series, TimeSeries};

/// Reads one numeric column of a CSV file; `-` reads standard input.
pub fn load_csv(path: impl AsRef<Path>, column: &str, period: usize) -> Result<TimeSeries> {
    let path = path.as_ref();
    if path == Path::new("-") {
        return read_csv_series(io::stdin().lock(), column, period);
    }
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })?;
    let series = read_csv_series(file, column, period)?;
    Ok(match path.file_stem() {
        Some(stem) => series.with_label(stem.to_string_lossy()),
        None => series,
    })
}

pub fn read_csv_series<R: Read>(reader: R, column: &str, period: usize) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Io(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let idx = headers
        .iter()
        .position(|h| h == column)
        .or_else(|| column.parse::<usize>().ok().filter(|&i| i < headers.len()))
        .ok_or_else(|| Error::ColumnNotFound {
            column: column.to_owned(),
            available: headers.clone(),
        })?;

    let mut values = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::ParseError {
            row,
            cell: String::new(),
            message: e.to_string(),
        })?;
        let cell = record.get(idx).unwrap_or("");
        let v: f64 = cell.parse().map_err(|_| Error::ParseError {
            row,
            cell: cell.to_owned(),
            message: format!("column `{}` is not a number", headers[idx]),
        })?;
        values.push(v);
    }
    validate_series(&values, period)
}

/// Writes `t,value` rows (1-based `t`) using the shortest representation
/// that parses back to the identical `f64`.
pub fn write_series_csv<W: Write>(writer: W, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["t", "value"]).map_err(io_err)?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([(i + 1).to_string(), v.to_string()])
            .map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_named_column() {
        let data = "date,value\n1968-01,10.5\n1968-02,11.0\n";
        let s = read_csv_series(data.as_bytes(), "value", 12).unwrap();
        assert_eq!(s.values(), &[10.5, 11.0]);
        assert_eq!(s.period(), 12);
    }

    #[test]
    fn reads_column_by_index() {
        let data = "date,value\n1968-01,10.5\n1968-02,11.0\n";
        let s = read_csv_series(data.as_bytes(), "1", 12).unwrap();
        assert_eq!(s.values(), &[10.5, 11.0]);
    }

    #[test]
    fn missing_column_lists_headers() {
        let data = "date,value\n1968-01,10.5\n";
        match read_csv_series(data.as_bytes(), "milk", 12) {
            Err(Error::ColumnNotFound { column, available }) => {
                assert_eq!(column, "milk");
                assert_eq!(available, vec!["date", "value"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_cell_reports_row() {
        let data = "date,value\n1968-01,10.5\n1968-02,n/a\n";
        match read_csv_series(data.as_bytes(), "value", 12) {
            Err(Error::ParseError { row, cell, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(cell, "n/a");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_csv("/nonexistent/series.csv", "value", 12),
            Err(Error::FileNotFound(_))
        ));
    }

    #[test]
    fn write_then_read() {
        let values = vec![0.1 + 0.2, 1e-17, -123456.789012345, 1.0 / 3.0];
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &values).unwrap();
        let back = read_csv_series(buf.as_slice(), "value", 1).unwrap();
        assert_eq!(back.values(), values.as_slice());
    }
}
