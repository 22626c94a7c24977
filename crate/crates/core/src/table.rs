//! Sampled trajectories with per-row status, written as CSV or JSON.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::QwError;

/// Status of a row, the worst over its cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowFlag {
    Ok,
    Nonconvergent,
    Pole,
}

impl RowFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::Nonconvergent => "nonconvergent",
            RowFlag::Pole => "pole",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Missing(RowFlag),
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::Missing(_) => None,
        }
    }

    fn flag(self) -> RowFlag {
        match self {
            Cell::Value(_) => RowFlag::Ok,
            Cell::Missing(f) => f,
        }
    }
}

impl From<crate::Result<f64>> for Cell {
    fn from(r: crate::Result<f64>) -> Self {
        match r {
            Ok(v) if v.is_finite() => Cell::Value(v),
            Ok(_) => Cell::Missing(RowFlag::Nonconvergent),
            Err(QwError::PoleEncountered { .. } | QwError::ZeroFactor { .. }) => Cell::Missing(RowFlag::Pole),
            Err(_) => Cell::Missing(RowFlag::Nonconvergent),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::from(Ok(v))
    }
}

/// Long or wide table of sampled values.
///
/// `key_columns` leading columns identify a row (`t`, or `q, w, t` for sweeps);
/// the rest are solver routes. Within each run of rows sharing the keys before
/// `t`, `t` is strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    metadata: Vec<(String, String)>,
    columns: Vec<String>,
    key_columns: usize,
    rows: Vec<Vec<Cell>>,
}

impl TrajectoryTable {
    pub fn new(columns: Vec<String>, key_columns: usize) -> Self {
        assert!(key_columns >= 1 && key_columns <= columns.len());
        Self { metadata: Vec::new(), columns, key_columns, rows: Vec::new() }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push_row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        self.rows.push(cells);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    /// Solver-route columns, i.e. everything after the key columns.
    pub fn route_columns(&self) -> &[String] {
        &self.columns[self.key_columns..]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn flag(&self, row: usize) -> RowFlag {
        self.rows[row].iter().map(|c| c.flag()).max().unwrap_or(RowFlag::Ok)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j].value()).collect())
    }

    /// Largest `|a - b|` over rows where both columns have a value.
    pub fn max_abs_diff(&self, a: &str, b: &str) -> Option<f64> {
        let (ca, cb) = (self.column(a)?, self.column(b)?);
        ca.iter().zip(&cb).filter_map(|(x, y)| Some((x.as_ref()? - y.as_ref()?).abs())).reduce(f64::max)
    }

    /// Pairwise agreement between route columns, in column order.
    pub fn agreement(&self) -> Vec<(String, Option<f64>)> {
        let routes = self.route_columns();
        let mut out = Vec::new();
        for (i, a) in routes.iter().enumerate() {
            for b in &routes[i + 1..] {
                out.push((format!("{a}:{b}"), self.max_abs_diff(a, b)));
            }
        }
        out
    }

    /// Route columns that hold no value at all; the reason is `Nonconvergent` if any
    /// cell failed to converge, `Pole` otherwise.
    pub fn empty_routes(&self) -> Vec<(&str, RowFlag)> {
        if self.rows.is_empty() {
            return Vec::new();
        }
        (self.key_columns..self.columns.len())
            .filter(|&j| self.rows.iter().all(|r| r[j].value().is_none()))
            .map(|j| {
                let worst = self.rows.iter().map(|r| r[j].flag()).min().unwrap_or(RowFlag::Ok);
                (self.columns[j].as_str(), worst)
            })
            .collect()
    }

    /// Checks the ordering contract on the key columns.
    pub fn t_is_increasing(&self) -> bool {
        let t = self.key_columns - 1;
        self.rows.windows(2).all(|pair| {
            let same_block = pair[0][..t] == pair[1][..t];
            !same_block || matches!((pair[0][t], pair[1][t]), (Cell::Value(a), Cell::Value(b)) if a < b)
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            s.push_str(&format!("# {k}={v}\n"));
        }
        for (pair, diff) in self.agreement() {
            s.push_str(&format!("# max_abs_diff.{pair}={}\n", fmt_opt(diff)));
        }
        s.push_str(&self.columns.join(","));
        s.push_str(",flag\n");
        for (i, row) in self.rows.iter().enumerate() {
            for cell in row {
                s.push_str(&fmt_opt(cell.value()));
                s.push(',');
            }
            s.push_str(self.flag(i).as_str());
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

struct Ordered<'a, K, V>(&'a [(K, V)]);

impl<K: Serialize, V: Serialize> Serialize for Ordered<'_, K, V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for TrajectoryTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let columns: Vec<(&str, Vec<Option<f64>>)> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, name)| (name.as_str(), self.rows.iter().map(|r| r[j].value()).collect()))
            .collect();
        let flags: Vec<RowFlag> = (0..self.rows.len()).map(|i| self.flag(i)).collect();
        let agreement = self.agreement();

        let mut st = serializer.serialize_struct("TrajectoryTable", 4)?;
        st.serialize_field("metadata", &Ordered(&self.metadata))?;
        st.serialize_field("max_abs_diff", &Ordered(&agreement))?;
        st.serialize_field("columns", &Ordered(&columns))?;
        st.serialize_field("flags", &flags)?;
        st.end()
    }
}

/// `n` uniformly spaced points from `start` to `end`, both included.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (end - start) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { end } else { start + h * i as f64 }).collect()
        }
    }
}
