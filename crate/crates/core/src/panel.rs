//! Station-indexed hourly demand panels.
//!
//! Raw trip or observation records are rounded to the nearest hour, counted
//! (or summed) per station and laid out on a gap-free hourly grid. Hours with
//! no records are present with value zero.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qboost::{FeatureKind, FeatureMatrix, FeatureSchema};

/// Timestamp layout used when writing panels.
pub const HOUR_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

const TIMESTAMP_FORMATS: &[&str] = &[
    "%Y-%m-%dT%H:%M:%S%.f",
    "%Y-%m-%d %H:%M:%S%.f",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M",
];

/// Column layout of a raw record CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputFormat {
    pub station_column: String,
    pub timestamp_column: String,
    /// Value column; when absent from the header every record counts as 1.
    pub value_column: String,
    /// Explicit chrono format string; ISO-8601 variants are tried when `None`.
    pub timestamp_format: Option<String>,
}

impl Default for InputFormat {
    fn default() -> Self {
        Self {
            station_column: "station_id".into(),
            timestamp_column: "timestamp".into(),
            value_column: "value".into(),
            timestamp_format: None,
        }
    }
}

impl InputFormat {
    fn parse_timestamp(&self, raw: &str) -> Option<NaiveDateTime> {
        let raw = raw.trim();
        match &self.timestamp_format {
            Some(fmt) => NaiveDateTime::parse_from_str(raw, fmt).ok(),
            None => TIMESTAMP_FORMATS
                .iter()
                .find_map(|fmt| NaiveDateTime::parse_from_str(raw, fmt).ok()),
        }
    }
}

/// One ingested observation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub station_id: String,
    pub timestamp: NaiveDateTime,
    pub value: f64,
}

/// Rounds to the nearest hour; exactly half past rounds up.
pub fn round_to_hour(ts: NaiveDateTime) -> NaiveDateTime {
    let floor = truncate_to_hour(ts);
    let into_hour = ts - floor;
    if into_hour >= Duration::minutes(30) {
        floor + Duration::hours(1)
    } else {
        floor
    }
}

pub fn truncate_to_hour(ts: NaiveDateTime) -> NaiveDateTime {
    ts.date()
        .and_hms_opt(ts.hour(), 0, 0)
        .expect("hour of an existing timestamp is valid")
}

/// Numeric per-station attributes joined by station id.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticCovariates {
    pub names: Vec<String>,
    /// Aligned with the panel's stations; `None` for stations absent from the
    /// covariate file.
    pub values: Vec<Option<Vec<f64>>>,
}

/// A set of hourly series sharing one contiguous time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelSeries {
    stations: Vec<String>,
    start: NaiveDateTime,
    n_hours: usize,
    values: Vec<Vec<f64>>,
    static_covariates: Option<StaticCovariates>,
}

impl PanelSeries {
    /// Builds a panel from per-station rows aligned to an hourly grid starting
    /// at `start`.
    pub fn new(stations: Vec<String>, start: NaiveDateTime, values: Vec<Vec<f64>>) -> Result<Self> {
        if stations.is_empty() {
            return Err(Error::EmptyInput("panel has no stations".into()));
        }
        if stations.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} station ids but {} value rows",
                stations.len(),
                values.len()
            )));
        }
        if truncate_to_hour(start) != start {
            return Err(Error::Data(format!("panel start {start} is not on the hour")));
        }
        let n_hours = values[0].len();
        if n_hours == 0 {
            return Err(Error::EmptyInput("panel has no hours".into()));
        }
        let mut seen = HashMap::with_capacity(stations.len());
        for (i, (id, row)) in stations.iter().zip(&values).enumerate() {
            if seen.insert(id.as_str(), i).is_some() {
                return Err(Error::Data(format!("duplicate station id {id:?}")));
            }
            if row.len() != n_hours {
                return Err(Error::Shape(format!(
                    "station {id:?} has {} hours, expected {n_hours}",
                    row.len()
                )));
            }
            if let Some(h) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Data(format!("station {id:?} has a non-finite value at hour {h}")));
            }
        }
        Ok(Self {
            stations,
            start,
            n_hours,
            values,
            static_covariates: None,
        })
    }

    pub fn stations(&self) -> &[String] {
        &self.stations
    }

    pub fn n_stations(&self) -> usize {
        self.stations.len()
    }

    pub fn start(&self) -> NaiveDateTime {
        self.start
    }

    pub fn n_hours(&self) -> usize {
        self.n_hours
    }

    /// Timestamp of grid position `h`.
    pub fn hour(&self, h: usize) -> NaiveDateTime {
        self.start + Duration::hours(h as i64)
    }

    pub fn end(&self) -> NaiveDateTime {
        self.hour(self.n_hours - 1)
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn series(&self, station: usize) -> &[f64] {
        &self.values[station]
    }

    pub fn station_index(&self, id: &str) -> Option<usize> {
        self.stations.iter().position(|s| s == id)
    }

    pub fn static_covariates(&self) -> Option<&StaticCovariates> {
        self.static_covariates.as_ref()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().flatten().sum()
    }

    /// Joins covariates by station id; stations missing from `names/rows`
    /// get `None`.
    pub fn attach_covariates(&mut self, names: Vec<String>, rows: &HashMap<String, Vec<f64>>) {
        let values = self.stations.iter().map(|s| rows.get(s).cloned()).collect();
        self.static_covariates = Some(StaticCovariates { names, values });
    }

    /// Sub-panel with the given stations, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput("station selection is empty".into()));
        }
        let stations = indices.iter().map(|&i| self.stations[i].clone()).collect();
        let values = indices.iter().map(|&i| self.values[i].clone()).collect();
        let mut out = Self::new(stations, self.start, values)?;
        out.static_covariates = self.static_covariates.as_ref().map(|c| StaticCovariates {
            names: c.names.clone(),
            values: indices.iter().map(|&i| c.values[i].clone()).collect(),
        });
        Ok(out)
    }

    /// Keeps only stations whose id is in `include`, preserving panel order.
    pub fn retain_stations(&self, include: &[String]) -> Result<Self> {
        let idx: Vec<usize> = (0..self.n_stations())
            .filter(|&i| include.iter().any(|s| s == &self.stations[i]))
            .collect();
        self.select(&idx)
    }

    /// Hours `[from, to)` of every station.
    pub fn slice_hours(&self, from: usize, to: usize) -> Result<Self> {
        if from >= to || to > self.n_hours {
            return Err(Error::InvalidParameter(format!(
                "hour range {from}..{to} outside 0..{}",
                self.n_hours
            )));
        }
        let values = self.values.iter().map(|r| r[from..to].to_vec()).collect();
        let mut out = Self::new(self.stations.clone(), self.hour(from), values)?;
        out.static_covariates = self.static_covariates.clone();
        Ok(out)
    }

    /// Grid position of `boundary` after snapping it down to the hour. The
    /// result lies in `1..n_hours`, so both sides of a split are non-empty.
    pub fn boundary_index(&self, boundary: NaiveDateTime) -> Result<usize> {
        let snapped = truncate_to_hour(boundary);
        let offset = (snapped - self.start).num_hours();
        if offset <= 0 || offset >= self.n_hours as i64 {
            return Err(Error::InvalidParameter(format!(
                "boundary {boundary} not strictly inside {}..={}",
                self.start,
                self.end()
            )));
        }
        Ok(offset as usize)
    }

    /// Writes the long-format interchange CSV `station_id,hour_iso,value`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(w, "station_id,hour_iso,value").map_err(io)?;
        for (id, row) in self.stations.iter().zip(&self.values) {
            for (h, v) in row.iter().enumerate() {
                writeln!(w, "{},{},{}", id, self.hour(h).format(HOUR_FORMAT), v).map_err(io)?;
            }
        }
        w.flush().map_err(io)
    }

    /// Reads the interchange CSV written by [`PanelSeries::write_csv`].
    /// Station order is order of first appearance; missing cells are zero.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
        let expected = ["station_id", "hour_iso", "value"];
        if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h.trim() != e) {
            return Err(Error::parse(path, 1, "expected header station_id,hour_iso,value"));
        }
        let fmt = InputFormat::default();
        let mut order: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut cells: Vec<(usize, NaiveDateTime, f64)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| csv_error(path, e))?;
            let line = rec.position().map_or(0, |p| p.line());
            let id = rec[0].trim().to_string();
            let ts = fmt
                .parse_timestamp(&rec[1])
                .ok_or_else(|| Error::parse(path, line, format!("bad timestamp {:?}", &rec[1])))?;
            let value: f64 = rec[2]
                .trim()
                .parse()
                .map_err(|_| Error::parse(path, line, format!("bad value {:?}", &rec[2])))?;
            if !value.is_finite() {
                return Err(Error::parse(path, line, "non-finite value"));
            }
            let next = order.len();
            let s = *index.entry(id.clone()).or_insert_with(|| {
                order.push(id);
                next
            });
            cells.push((s, ts, value));
        }
        if cells.is_empty() {
            return Err(Error::EmptyInput(format!("{} has no rows", path.display())));
        }
        let start = cells.iter().map(|c| c.1).min().expect("non-empty");
        let end = cells.iter().map(|c| c.1).max().expect("non-empty");
        let n_hours = (end - start).num_hours() as usize + 1;
        let mut values = vec![vec![0.0; n_hours]; order.len()];
        for (s, ts, v) in cells {
            if truncate_to_hour(ts) != ts {
                return Err(Error::Data(format!("panel timestamp {ts} is not on the hour")));
            }
            values[s][(ts - start).num_hours() as usize] = v;
        }
        Self::new(order, start, values)
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, line, format!("{other:?}")),
    }
}

/// Reads raw records and aggregates them into an hourly panel.
///
/// Each record's timestamp is rounded to the nearest hour; per-hour values
/// are record counts, or sums of the value column when the header has one.
pub fn ingest_csv(path: &Path, format: &InputFormat) -> Result<PanelSeries> {
    let records = read_records(path, format)?;
    aggregate_records(&records)
}

pub fn read_records(path: &Path, format: &InputFormat) -> Result<Vec<RawRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let station_col = col(&format.station_column).ok_or_else(|| {
        Error::parse(path, 1, format!("header lacks column {:?}", format.station_column))
    })?;
    let ts_col = col(&format.timestamp_column).ok_or_else(|| {
        Error::parse(path, 1, format!("header lacks column {:?}", format.timestamp_column))
    })?;
    let value_col = col(&format.value_column);

    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| {
            rec.get(i)
                .ok_or_else(|| Error::parse(path, line, format!("missing field {}", i + 1)))
        };
        let station_id = field(station_col)?.trim().to_string();
        if station_id.is_empty() {
            return Err(Error::parse(path, line, "empty station id"));
        }
        let raw_ts = field(ts_col)?;
        let timestamp = format
            .parse_timestamp(raw_ts)
            .ok_or_else(|| Error::parse(path, line, format!("unparseable timestamp {raw_ts:?}")))?;
        let value = match value_col {
            Some(c) => {
                let raw = field(c)?.trim();
                if raw.is_empty() {
                    1.0
                } else {
                    let v: f64 = raw
                        .parse()
                        .map_err(|_| Error::parse(path, line, format!("unparseable value {raw:?}")))?;
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::parse(path, line, format!("value {v} is not a non-negative count")));
                    }
                    v
                }
            }
            None => 1.0,
        };
        out.push(RawRecord {
            station_id,
            timestamp,
            value,
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyInput(format!("{} has no records", path.display())));
    }
    Ok(out)
}

/// Aggregates records onto the hourly grid spanning all stations.
pub fn aggregate_records(records: &[RawRecord]) -> Result<PanelSeries> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no records".into()));
    }
    let rounded: Vec<NaiveDateTime> = records.iter().map(|r| round_to_hour(r.timestamp)).collect();
    let start = *rounded.iter().min().expect("non-empty");
    let end = *rounded.iter().max().expect("non-empty");
    let n_hours = (end - start).num_hours() as usize + 1;

    let mut order: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for r in records {
        if !index.contains_key(r.station_id.as_str()) {
            index.insert(&r.station_id, order.len());
            order.push(r.station_id.clone());
        }
    }
    let mut values = vec![vec![0.0; n_hours]; order.len()];
    for (r, ts) in records.iter().zip(&rounded) {
        let s = index[r.station_id.as_str()];
        values[s][(*ts - start).num_hours() as usize] += r.value;
    }
    PanelSeries::new(order, start, values)
}

/// One station id per line; blank lines and `#` comments are skipped.
pub fn read_station_list(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push(t.to_string());
        }
    }
    Ok(out)
}

/// Covariate names and the covariate row of each station id.
pub type CovariateRows = (Vec<String>, HashMap<String, Vec<f64>>);

/// Reads `station_id,<name1>,<name2>,...`.
pub fn read_static_covariates(path: &Path) -> Result<CovariateRows> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.get(0).map(str::trim) != Some("station_id") || headers.len() < 2 {
        return Err(Error::parse(path, 1, "expected header station_id,<covariate>,..."));
    }
    let names: Vec<String> = headers.iter().skip(1).map(|h| h.trim().to_string()).collect();
    let mut rows = HashMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let vals = rec
            .iter()
            .skip(1)
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(path, line, format!("bad covariate {f:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.insert(rec[0].trim().to_string(), vals);
    }
    Ok((names, rows))
}

/// Meteorological season of a calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Season {
    Winter,
    Spring,
    Summer,
    Fall,
}

impl Season {
    pub const LABELS: [&'static str; 4] = ["winter", "spring", "summer", "fall"];

    pub fn from_month(month: u32) -> Self {
        match month {
            12 | 1 | 2 => Season::Winter,
            3..=5 => Season::Spring,
            6..=8 => Season::Summer,
            _ => Season::Fall,
        }
    }

    pub fn code(self) -> u32 {
        self as u32
    }
}

/// Names of the design-matrix columns, in order.
pub const DESIGN_COLUMNS: [&str; 8] = [
    "lag1",
    "lag24",
    "month",
    "day_of_month",
    "hour_of_day",
    "weekday",
    "season",
    "station_id",
];

pub const WEEKDAY_LABELS: [&str; 7] = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];

const MAX_LAG: usize = 24;

/// Station-hour feature table with its regression target.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub features: FeatureMatrix,
    pub target: Vec<f64>,
    /// Panel station index of each row.
    pub station: Vec<usize>,
    /// Panel hour index of each row.
    pub hour: Vec<usize>,
    /// Code-to-label dictionaries of the categorical columns.
    pub dictionaries: Vec<(String, Vec<String>)>,
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn subset(&self, rows: &[usize]) -> DesignMatrix {
        DesignMatrix {
            features: self.features.select_rows(rows),
            target: rows.iter().map(|&r| self.target[r]).collect(),
            station: rows.iter().map(|&r| self.station[r]).collect(),
            hour: rows.iter().map(|&r| self.hour[r]).collect(),
            dictionaries: self.dictionaries.clone(),
        }
    }

    /// Partitions rows into hours `< boundary` and `>= boundary`.
    pub fn split_at_hour(&self, boundary: usize) -> (DesignMatrix, DesignMatrix) {
        let (train, test): (Vec<usize>, Vec<usize>) =
            (0..self.n_rows()).partition(|&r| self.hour[r] < boundary);
        (self.subset(&train), self.subset(&test))
    }
}

/// Lagged-demand and calendar covariates for every station-hour whose
/// 24-hour lag window lies inside the panel.
pub fn build_design_matrix(panel: &PanelSeries) -> Result<DesignMatrix> {
    if panel.n_hours() <= MAX_LAG {
        return Err(Error::TooShort {
            required: MAX_LAG + 1,
            actual: panel.n_hours(),
        });
    }
    let n_stations = panel.n_stations();
    let rows_per_station = panel.n_hours() - MAX_LAG;
    let n = n_stations * rows_per_station;
    let mut cols: Vec<Vec<f64>> = (0..DESIGN_COLUMNS.len()).map(|_| Vec::with_capacity(n)).collect();
    let mut target = Vec::with_capacity(n);
    let mut station = Vec::with_capacity(n);
    let mut hour = Vec::with_capacity(n);

    // Calendar fields only depend on the hour.
    let calendar: Vec<[f64; 5]> = (MAX_LAG..panel.n_hours())
        .map(|h| {
            let ts = panel.hour(h);
            [
                ts.month() as f64,
                ts.day() as f64,
                ts.hour() as f64,
                ts.weekday().num_days_from_monday() as f64,
                Season::from_month(ts.month()).code() as f64,
            ]
        })
        .collect();

    for s in 0..n_stations {
        let y = panel.series(s);
        for h in MAX_LAG..panel.n_hours() {
            let cal = &calendar[h - MAX_LAG];
            cols[0].push(y[h - 1]);
            cols[1].push(y[h - 24]);
            for (c, v) in cal.iter().enumerate() {
                cols[2 + c].push(*v);
            }
            cols[7].push(s as f64);
            target.push(y[h]);
            station.push(s);
            hour.push(h);
        }
    }

    let schema = FeatureSchema::new(vec![
        FeatureKind::Numeric,
        FeatureKind::Numeric,
        FeatureKind::Numeric,
        FeatureKind::Numeric,
        FeatureKind::Numeric,
        FeatureKind::Categorical { cardinality: 7 },
        FeatureKind::Categorical { cardinality: 4 },
        FeatureKind::Categorical {
            cardinality: n_stations as u32,
        },
    ]);
    let names = DESIGN_COLUMNS.iter().map(|s| s.to_string()).collect();
    let features = FeatureMatrix::new(cols, names, schema)?;
    let dictionaries = vec![
        ("weekday".to_string(), WEEKDAY_LABELS.iter().map(|s| s.to_string()).collect()),
        ("season".to_string(), Season::LABELS.iter().map(|s| s.to_string()).collect()),
        ("station_id".to_string(), panel.stations().to_vec()),
    ];
    Ok(DesignMatrix {
        features,
        target,
        station,
        hour,
        dictionaries,
    })
}

/// Splits a panel into hours before and from `boundary` (snapped down to the
/// hour grid).
pub fn split_by_period(panel: &PanelSeries, boundary: NaiveDateTime) -> Result<(PanelSeries, PanelSeries)> {
    let b = panel.boundary_index(boundary)?;
    Ok((panel.slice_hours(0, b)?, panel.slice_hours(b, panel.n_hours())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn dt(d: u32, h: u32, m: u32) -> NaiveDateTime {
        NaiveDate::from_ymd_opt(2023, 1, d)
            .unwrap()
            .and_hms_opt(h, m, 0)
            .unwrap()
    }

    fn rec(id: &str, ts: NaiveDateTime) -> RawRecord {
        RawRecord {
            station_id: id.into(),
            timestamp: ts,
            value: 1.0,
        }
    }

    fn constant_panel(n_stations: usize, n_hours: usize, v: f64) -> PanelSeries {
        let ids = (0..n_stations).map(|i| format!("s{i}")).collect();
        PanelSeries::new(ids, dt(1, 0, 0), vec![vec![v; n_hours]; n_stations]).unwrap()
    }

    #[test]
    fn rounding_sends_twenty_to_nine_up() {
        let recs = vec![rec("A", dt(1, 8, 10)), rec("A", dt(1, 8, 40)), rec("A", dt(1, 9, 5))];
        let p = aggregate_records(&recs).unwrap();
        assert_eq!(p.start(), dt(1, 8, 0));
        assert_eq!(p.series(0), &[1.0, 2.0]);
    }

    #[test]
    fn half_past_rounds_up() {
        assert_eq!(round_to_hour(dt(1, 8, 30)), dt(1, 9, 0));
        assert_eq!(round_to_hour(dt(1, 8, 29)), dt(1, 8, 0));
    }

    #[test]
    fn single_midnight_record() {
        let p = aggregate_records(&[rec("A", dt(1, 0, 0))]).unwrap();
        assert_eq!(p.n_hours(), 1);
        assert_eq!(p.series(0), &[1.0]);
    }

    #[test]
    fn missing_hour_is_zero() {
        let p = aggregate_records(&[rec("A", dt(1, 0, 0)), rec("A", dt(1, 2, 0))]).unwrap();
        assert_eq!(p.series(0), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn grid_spans_all_stations() {
        let p = aggregate_records(&[rec("A", dt(1, 0, 0)), rec("B", dt(1, 3, 0))]).unwrap();
        assert_eq!(p.n_hours(), 4);
        assert_eq!(p.series(0), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.series(1), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn ingest_reports_bad_row_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trips.csv");
        std::fs::write(
            &path,
            "station_id,timestamp\nA,2023-01-01T08:10:00\nA,not-a-date\n",
        )
        .unwrap();
        match ingest_csv(&path, &InputFormat::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn ingest_sums_value_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obs.csv");
        std::fs::write(
            &path,
            "station_id,timestamp,value\nA,2023-01-01 08:10,2.5\nA,2023-01-01 08:20,1.5\nB,2023-01-01 09:00,\n",
        )
        .unwrap();
        let p = ingest_csv(&path, &InputFormat::default()).unwrap();
        assert_eq!(p.stations(), &["A".to_string(), "B".to_string()]);
        assert_eq!(p.series(0), &[4.0, 0.0]);
        assert_eq!(p.series(1), &[0.0, 1.0]);
    }

    #[test]
    fn ingest_rejects_empty_and_missing_header() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.csv");
        std::fs::write(&empty, "station_id,timestamp\n").unwrap();
        assert!(matches!(
            ingest_csv(&empty, &InputFormat::default()),
            Err(Error::EmptyInput(_))
        ));
        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "station,time\nA,2023-01-01T00:00:00\n").unwrap();
        assert!(matches!(ingest_csv(&bad, &InputFormat::default()), Err(Error::Parse { .. })));
        assert!(matches!(
            ingest_csv(&dir.path().join("nope.csv"), &InputFormat::default()),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn panel_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("panel.csv");
        let p = PanelSeries::new(
            vec!["x".into(), "y".into()],
            dt(1, 5, 0),
            vec![vec![0.1, 2.0, 1e-17], vec![-3.25, 0.0, 7.0]],
        )
        .unwrap();
        p.write_csv(&path).unwrap();
        assert_eq!(PanelSeries::read_csv(&path).unwrap(), p);
    }

    #[test]
    fn design_matrix_minimal_length() {
        let p = constant_panel(2, 25, 5.0);
        let d = build_design_matrix(&p).unwrap();
        assert_eq!(d.n_rows(), 2);
        let short = constant_panel(1, 24, 5.0);
        assert!(matches!(build_design_matrix(&short), Err(Error::TooShort { .. })));
    }

    #[test]
    fn constant_series_lags() {
        let d = build_design_matrix(&constant_panel(1, 60, 5.0)).unwrap();
        assert!(d.features.column(0).iter().all(|&v| v == 5.0));
        assert!(d.features.column(1).iter().all(|&v| v == 5.0));
    }

    #[test]
    fn season_mapping() {
        assert_eq!(Season::from_month(1), Season::Winter);
        assert_eq!(Season::from_month(4), Season::Spring);
        assert_eq!(Season::from_month(7), Season::Summer);
        assert_eq!(Season::from_month(10), Season::Fall);
        assert_eq!(Season::from_month(12), Season::Winter);
    }

    #[test]
    fn calendar_columns() {
        // 2023-01-01 was a Sunday.
        let d = build_design_matrix(&constant_panel(1, 30, 1.0)).unwrap();
        let row0 = (0..8).map(|c| d.features.column(c)[0]).collect::<Vec<_>>();
        assert_eq!(row0, vec![1.0, 1.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(d.hour[0], 24);
    }

    #[test]
    fn split_halves_and_rejects_start() {
        let p = constant_panel(1, 48, 1.0);
        let (tr, te) = split_by_period(&p, dt(2, 0, 0)).unwrap();
        assert_eq!((tr.n_hours(), te.n_hours()), (24, 24));
        assert!(split_by_period(&p, dt(1, 0, 0)).is_err());
        assert!(split_by_period(&p, dt(3, 0, 0)).is_err());
        let (tr, _) = split_by_period(&p, dt(1, 10, 45)).unwrap();
        assert_eq!(tr.n_hours(), 10);
    }

    #[test]
    fn retain_stations_preserves_order() {
        let p = constant_panel(4, 3, 0.0);
        let q = p.retain_stations(&["s3".into(), "s1".into()]).unwrap();
        assert_eq!(q.stations(), &["s1".to_string(), "s3".to_string()]);
    }
}
