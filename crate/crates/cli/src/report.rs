//! One table, three renderings. JSON and CSV carry exactly the same cells;
//! the human form adds summary lines on top.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value as Json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(u64),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// `"≥k"`, used wherever a search stopped early.
    pub fn at_least(k: u64) -> Self {
        Cell::Text(format!("≥{k}"))
    }

    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(v) => Json::from(*v),
            Cell::Text(s) => Json::from(s.as_str()),
            Cell::Bool(b) => Json::from(*b),
            Cell::Null => Json::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra lines for the human rendering only.
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }

    fn human(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Null => "-".to_string(),
                        c => c.plain(),
                    })
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, h)| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([h.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for line in &self.summary {
            let _ = writeln!(out, "# {line}");
        }
        if self.rows.is_empty() {
            out.push_str("(no rows)\n");
            return out;
        }
        let line = |items: &[String]| {
            let mut s = String::new();
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = widths[i] - item.chars().count();
                if i + 1 == items.len() {
                    s.push_str(item);
                } else {
                    s.push_str(item);
                    s.extend(std::iter::repeat_n(' ', pad));
                }
            }
            s.trim_end().to_string() + "\n"
        };
        let header: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
        out.push_str(&line(&header));
        for r in &cells {
            out.push_str(&line(r));
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    obj.insert(c.to_string(), v.json());
                }
                Json::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("rows".into(), Json::Array(rows));
        let mut s = serde_json::to_string_pretty(&Json::Object(top)).expect("plain JSON values");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::plain))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(&["n", "exact", "ok"]);
        r.push(vec![12u64.into(), Cell::at_least(7), true.into()]);
        r.push(vec![15u64.into(), Cell::Null, false.into()]);
        r
    }

    #[test]
    fn csv_has_header_and_empty_nulls() {
        assert_eq!(sample().render(Format::Csv), "n,exact,ok\n12,≥7,true\n15,,false\n");
    }

    #[test]
    fn json_is_an_object_with_rows() {
        let v: Json = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["exact"], "≥7");
        assert_eq!(rows[1]["exact"], Json::Null);
        assert_eq!(rows[0]["n"], 12);
    }

    #[test]
    fn json_and_csv_carry_the_same_cells() {
        let r = sample();
        let v: Json = serde_json::from_str(&r.render(Format::Json)).unwrap();
        let text = r.render(Format::Csv);
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
        for (rec, obj) in rd.records().zip(v["rows"].as_array().unwrap()) {
            let rec = rec.unwrap();
            for (h, cell) in header.iter().zip(rec.iter()) {
                let j = &obj[h.as_str()];
                let as_text = match j {
                    Json::Null => String::new(),
                    Json::String(s) => s.clone(),
                    other => other.to_string(),
                };
                assert_eq!(as_text, cell);
            }
        }
    }

    #[test]
    fn human_aligns_columns() {
        let text = sample().render(Format::Human);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n   exact  ok");
        assert_eq!(lines[2], "15  -      false");
    }
}
