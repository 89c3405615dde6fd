//! Tabular results and their CSV, JSON and SVG renderings.

use anyhow::Result;
use slipflow::verify::{format_sig, round_sig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_sig(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) if x.is_finite() => round_sig(*x).into(),
            Cell::Num(_) => serde_json::Value::Null,
            Cell::Int(i) => (*i).into(),
            Cell::Text(s) => s.clone().into(),
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// A titled table. The first column is the abscissa when plotted.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    /// Lines written as '#' comments ahead of the CSV header.
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub log_x: bool,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Table {
        Table {
            title: title.to_string(),
            comments: vec![],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vec![],
            log_x: false,
        }
    }

    pub fn comment(mut self, line: impl Into<String>) -> Table {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Numeric values of a column; non-numeric cells become NaN.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(k) = self.columns.iter().position(|c| c == name) else {
            return vec![];
        };
        self.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.title));
        for c in &self.comments {
            out.push_str(&format!("# {c}\n"));
        }
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))?;
        }
        out.push_str(&String::from_utf8(w.into_inner()?)?);
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<serde_json::Value> = self.rows.iter().map(|r| r.iter().map(Cell::json).collect()).collect();
        let v = serde_json::json!({
            "title": self.title,
            "comments": self.comments,
            "columns": self.columns,
            "rows": rows,
        });
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    /// Polylines of every numeric column against the first.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const M: f64 = 50.0;
        const COLOURS: [&str; 6] = ["#c0392b", "#2471a3", "#229954", "#7d3c98", "#d68910", "#17202a"];
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let xs: Vec<f64> = self.rows.iter().map(|r| r[0].as_f64().map(tx).unwrap_or(f64::NAN)).collect();
        let series: Vec<(usize, Vec<f64>)> = (1..self.columns.len())
            .filter_map(|k| {
                let ys: Vec<f64> = self.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect();
                ys.iter().any(|y| y.is_finite()).then_some((k, ys))
            })
            .collect();
        let finite = |v: &mut dyn Iterator<Item = f64>| v.filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        let (x0, x1) = finite(&mut xs.iter().copied());
        let (y0, y1) = finite(&mut series.iter().flat_map(|(_, ys)| ys.iter().copied()));
        let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
        let px = |x: f64| M + (x - x0) / span(x0, x1) * (W - 2.0 * M);
        let py = |y: f64| H - M - (y - y0) / span(y0, y1) * (H - 2.0 * M);
        let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n");
        s.push_str(&format!("<rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", W - 2.0 * M, H - 2.0 * M));
        s.push_str(&format!("<text x=\"{M}\" y=\"30\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n", escape(&self.title)));
        let xl = if self.log_x { format!("log10 {}", self.columns[0]) } else { self.columns[0].clone() };
        s.push_str(&format!("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{} [{} .. {}]</text>\n", M, H - 15.0, escape(&xl), format_sig(x0), format_sig(x1)));
        s.push_str(&format!("<text x=\"5\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">y [{} .. {}]</text>\n", M - 5.0, format_sig(y0), format_sig(y1)));
        for (i, (k, ys)) in series.iter().enumerate() {
            let colour = COLOURS[i % COLOURS.len()];
            let pts: Vec<String> = xs
                .iter()
                .zip(ys)
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
                .collect();
            s.push_str(&format!("<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"/>\n", pts.join(" ")));
            s.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{colour}\">{}</text>\n",
                W - M + 4.0 - 120.0,
                M + 14.0 * (i as f64 + 1.0),
                escape(&self.columns[*k])
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
