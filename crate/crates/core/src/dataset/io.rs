//! Monthly CSV extracts: one `customers_<YYYYMM>.csv` per month.

use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::schema::{CustomerRecord, Field, Value, YearMonth};
use crate::error::{Error, Result};

const MANDATORY: [&str; 3] = ["customer_id", "month", "churn_state_end"];

pub fn month_file_name(month: YearMonth) -> String {
    format!("customers_{month}.csv")
}

pub fn month_file_path(dir: &Path, month: YearMonth) -> PathBuf {
    dir.join(month_file_name(month))
}

/// Reads one monthly extract. Header order does not matter and unknown columns
/// are ignored; schema columns absent from the header load as missing values.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Vec<CustomerRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(file, path)
}

pub fn read_records<R: Read>(reader: R, path: &Path) -> Result<Vec<CustomerRecord>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();

    let position = |name: &str| headers.iter().position(|h| h == name);
    for column in MANDATORY {
        if position(column).is_none() {
            return Err(Error::MissingColumn {
                path: path.to_path_buf(),
                column,
            });
        }
    }
    let id_col = position("customer_id").unwrap_or_default();
    let month_col = position("month").unwrap_or_default();
    let columns: Vec<(Field, usize)> = Field::ALL
        .iter()
        .filter_map(|&f| position(f.name()).map(|c| (f, c)))
        .collect();

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (row, result) in rdr.records().enumerate() {
        let rec = result.map_err(csv_err)?;
        let id = rec.get(id_col).unwrap_or("").to_string();
        if id.is_empty() {
            return Err(Error::InvalidKey {
                column: "customer_id",
                value: id,
                row: row + 1,
            });
        }
        let raw_month = rec.get(month_col).unwrap_or("");
        let month: YearMonth = raw_month.parse().map_err(|_| Error::InvalidKey {
            column: "month",
            value: raw_month.to_string(),
            row: row + 1,
        })?;
        if !seen.insert((id.clone(), month)) {
            return Err(Error::DuplicateRecord {
                customer_id: id,
                month,
            });
        }
        let mut record = CustomerRecord::empty(id, month);
        for &(field, col) in &columns {
            record.set(field, rec.get(col).and_then(|raw| Value::parse(field, raw)));
        }
        out.push(record);
    }
    Ok(out)
}

/// Writes records with the canonical header; missing values become empty cells.
pub fn write_records<W: Write>(writer: W, records: &[CustomerRecord]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["customer_id", "month"];
    header.extend(Field::ALL.iter().map(|f| f.name()));
    wtr.write_record(&header)?;
    let mut cells: Vec<String> = Vec::with_capacity(header.len());
    for r in records {
        cells.clear();
        cells.push(r.customer_id.clone());
        cells.push(r.month.to_string());
        cells.extend(
            Field::ALL
                .iter()
                .map(|&f| r.get(f).map(Value::render).unwrap_or_default()),
        );
        wtr.write_record(&cells)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_csv(path: impl AsRef<Path>, records: &[CustomerRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_records(std::io::BufWriter::new(file), records).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads the given months from `dir`, failing on the first absent file.
pub fn load_months(
    dir: &Path,
    months: impl IntoIterator<Item = YearMonth>,
) -> Result<BTreeMap<YearMonth, Vec<CustomerRecord>>> {
    let mut out = BTreeMap::new();
    for month in months {
        if out.contains_key(&month) {
            continue;
        }
        let path = month_file_path(dir, month);
        if !path.exists() {
            return Err(Error::MissingMonth(month));
        }
        out.insert(month, load_csv(&path)?);
    }
    Ok(out)
}
