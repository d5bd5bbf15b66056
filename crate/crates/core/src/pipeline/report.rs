//! Report rows, CSV and markdown emission, and CSV re-parsing.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::{MetricSet, PhaseTimings};

pub const REPORT_COLUMNS: [&str; 14] = [
    "experiment_id",
    "train_month",
    "test_month",
    "sampler",
    "classifier",
    "precision",
    "recall",
    "tnr",
    "f_measure",
    "g_mean",
    "sampling_s",
    "train_s",
    "total_s",
    "status",
];

const UNDEFINED: &str = "n/a";
const ABSENT: &str = "-";
const AVERAGE: &str = "average";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment_id: String,
    pub train_month: String,
    pub test_month: String,
    pub sampler: String,
    pub classifier: String,
    pub metrics: MetricSet,
    pub timings: PhaseTimings,
    /// `None` for a successful run, otherwise the failure message.
    pub status: Option<String>,
}

impl ReportRow {
    pub fn failed(
        experiment_id: String,
        train_month: String,
        test_month: String,
        sampler: String,
        classifier: String,
        message: String,
    ) -> Self {
        Self {
            experiment_id,
            train_month,
            test_month,
            sampler,
            classifier,
            metrics: MetricSet::default(),
            timings: PhaseTimings::default(),
            status: Some(message),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status.is_none()
    }

    pub fn is_average(&self) -> bool {
        self.train_month == AVERAGE
    }

    fn status_text(&self) -> String {
        match &self.status {
            None => "ok".to_string(),
            Some(msg) => format!("failed: {msg}"),
        }
    }

    fn cells(&self) -> Vec<String> {
        let m = &self.metrics;
        let t = &self.timings;
        let metric = |v: Option<f64>| v.map_or_else(|| UNDEFINED.to_string(), |v| v.to_string());
        let time = |v: Option<f64>| v.map_or_else(|| ABSENT.to_string(), |v| v.to_string());
        vec![
            self.experiment_id.clone(),
            self.train_month.clone(),
            self.test_month.clone(),
            self.sampler.clone(),
            self.classifier.clone(),
            metric(m.precision),
            metric(m.recall),
            metric(m.tnr),
            metric(m.f_measure),
            metric(m.g_mean),
            time(t.sampling),
            time(t.training),
            time(t.total),
            self.status_text(),
        ]
    }
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v?;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// One average row per `(sampler, classifier)` over its successful rows, in
/// order of first appearance. Any undefined input makes that average undefined.
pub fn average_rows(rows: &[ReportRow]) -> Vec<ReportRow> {
    let mut groups: Vec<((String, String), Vec<&ReportRow>)> = Vec::new();
    for r in rows.iter().filter(|r| r.is_ok() && !r.is_average()) {
        let key = (r.sampler.clone(), r.classifier.clone());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|((sampler, classifier), g)| {
            let avg = |f: fn(&ReportRow) -> Option<f64>| mean_of(g.iter().map(|r| f(r)));
            let recall = avg(|r| r.metrics.recall);
            ReportRow {
                experiment_id: format!("{AVERAGE}-{sampler}-{classifier}"),
                train_month: AVERAGE.to_string(),
                test_month: ABSENT.to_string(),
                metrics: MetricSet {
                    precision: avg(|r| r.metrics.precision),
                    recall,
                    tpr: recall,
                    tnr: avg(|r| r.metrics.tnr),
                    f_measure: avg(|r| r.metrics.f_measure),
                    g_mean: avg(|r| r.metrics.g_mean),
                },
                timings: PhaseTimings {
                    sampling: avg(|r| r.timings.sampling),
                    training: avg(|r| r.timings.training),
                    total: avg(|r| r.timings.total),
                },
                sampler,
                classifier,
                status: None,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::UnknownName {
                kind: "report format",
                name: other.to_string(),
            }),
        }
    }
}

pub fn write_csv_rows<W: Write>(w: W, rows: &[ReportRow]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(REPORT_COLUMNS)?;
    for r in rows {
        wtr.write_record(r.cells())?;
    }
    wtr.flush()?;
    Ok(())
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |v| format!("{:.2}%", 100.0 * v))
}

fn ratio3(v: Option<f64>) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |v| format!("{v:.3}"))
}

fn secs(v: Option<f64>) -> String {
    v.map_or_else(|| ABSENT.to_string(), |v| format!("{v:.3}"))
}

/// Markdown table: rates as percentages to two decimals, F-measure and G-mean
/// to three.
pub fn render_markdown(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    out.push_str(
        "| experiment | train | test | sampler | classifier | precision | recall | TNR | F-measure | G-mean | sampling (s) | train (s) | total (s) | status |\n",
    );
    out.push_str("|---|---|---|---|---|---:|---:|---:|---:|---:|---:|---:|---:|---|\n");
    for r in rows {
        let m = &r.metrics;
        let t = &r.timings;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.experiment_id,
            r.train_month,
            r.test_month,
            r.sampler,
            r.classifier,
            pct(m.precision),
            pct(m.recall),
            pct(m.tnr),
            ratio3(m.f_measure),
            ratio3(m.g_mean),
            secs(t.sampling),
            secs(t.training),
            secs(t.total),
            r.status_text().replace('|', "/"),
        );
    }
    out
}

pub fn write_csv_report(path: &Path, rows: &[ReportRow]) -> Result<()> {
    emit_report(rows, ReportFormat::Csv, path)
}

pub fn emit_report(rows: &[ReportRow], format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    match format {
        ReportFormat::Csv => write_csv_rows(&mut w, rows).map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?,
        ReportFormat::Markdown => w
            .write_all(render_markdown(rows).as_bytes())
            .map_err(|e| Error::io(path, e))?,
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn parse_cell(cell: &str, missing: &str) -> Result<Option<f64>> {
    if cell == missing {
        return Ok(None);
    }
    cell.parse()
        .map(Some)
        .map_err(|_| Error::ReportFormat(format!("bad number {cell:?}")))
}

/// Parses CSV produced by [`write_csv_rows`].
pub fn read_csv_rows<R: Read>(r: R) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr
        .headers()
        .map_err(|e| Error::ReportFormat(e.to_string()))?
        .clone();
    if header.iter().ne(REPORT_COLUMNS) {
        return Err(Error::ReportFormat(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::ReportFormat(e.to_string()))?;
        let c = |i: usize| rec.get(i).unwrap_or_default();
        let recall = parse_cell(c(6), UNDEFINED)?;
        let status = match c(13) {
            "ok" => None,
            s => Some(
                s.strip_prefix("failed: ")
                    .ok_or_else(|| Error::ReportFormat(format!("bad status {s:?}")))?
                    .to_string(),
            ),
        };
        rows.push(ReportRow {
            experiment_id: c(0).to_string(),
            train_month: c(1).to_string(),
            test_month: c(2).to_string(),
            sampler: c(3).to_string(),
            classifier: c(4).to_string(),
            metrics: MetricSet {
                precision: parse_cell(c(5), UNDEFINED)?,
                recall,
                tpr: recall,
                tnr: parse_cell(c(7), UNDEFINED)?,
                f_measure: parse_cell(c(8), UNDEFINED)?,
                g_mean: parse_cell(c(9), UNDEFINED)?,
            },
            timings: PhaseTimings {
                sampling: parse_cell(c(10), ABSENT)?,
                training: parse_cell(c(11), ABSENT)?,
                total: parse_cell(c(12), ABSENT)?,
            },
            status,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(sampler: &str, p: f64, t: Option<f64>) -> ReportRow {
        ReportRow {
            experiment_id: format!("201507-201508-{sampler}-rf"),
            train_month: "201507".into(),
            test_month: "201508".into(),
            sampler: sampler.into(),
            classifier: "rf".into(),
            metrics: MetricSet::from_rates(Some(p), Some(0.3292), Some(0.9952)),
            timings: PhaseTimings {
                sampling: t,
                training: Some(1.25),
                total: Some(2.5),
            },
            status: None,
        }
    }

    #[test]
    fn one_row_csv() {
        let mut buf = Vec::new();
        write_csv_rows(&mut buf, &[row("none", 0.8383, None)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("experiment_id,train_month,test_month,sampler,classifier,precision,recall,tnr,f_measure,g_mean,sampling_s,train_s,total_s"));
        assert!(lines[1].contains(",-,1.25,2.5,"));
    }

    #[test]
    fn csv_round_trip() {
        let mut failed = ReportRow::failed(
            "x".into(),
            "201507".into(),
            "201508".into(),
            "smote".into(),
            "lr".into(),
            "only one class, with commas".into(),
        );
        failed.metrics.tnr = Some(0.5);
        let rows = vec![row("none", 0.8383, None), row("smote", 1.0 / 3.0, Some(0.1)), failed];
        let mut buf = Vec::new();
        write_csv_rows(&mut buf, &rows).unwrap();
        assert_eq!(read_csv_rows(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn markdown_column_order_and_precision() {
        let md = render_markdown(&[row("none", 0.8383, None)]);
        let header = md.lines().next().unwrap();
        let order: Vec<usize> = ["precision", "recall", "TNR", "F-measure", "G-mean"]
            .iter()
            .map(|c| header.find(c).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        let body = md.lines().nth(2).unwrap();
        assert!(body.contains("| 83.83% | 32.92% | 99.52% | 0.473 | 0.572 | - |"));
    }

    #[test]
    fn averages_are_means() {
        let rows = vec![row("none", 0.8, None), row("none", 0.6, None), row("smote", 0.5, Some(1.0))];
        let avg = average_rows(&rows);
        assert_eq!(avg.len(), 2);
        assert!((avg[0].metrics.precision.unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(avg[0].timings.sampling, None);
        assert_eq!(avg[1].metrics, rows[2].metrics);
        assert!(avg[0].is_average());
    }

    #[test]
    fn empty_table_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_report(&[], ReportFormat::Csv, dir.path().join("r.csv")).is_err());
    }
}
