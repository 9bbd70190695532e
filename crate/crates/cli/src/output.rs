use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Precision {
    /// Six significant digits.
    Six,
    /// Shortest round-trip representation.
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub precision: Precision,
    pub meta: bool,
}

impl Style {
    pub fn num(&self, x: f64) -> String {
        match self.precision {
            Precision::Six => sig6(x),
            Precision::Full => format!("{x}"),
        }
    }

    /// Like [`Style::num`], but at six digits shows roundoff below
    /// `1e-12 * scale` as zero.
    pub fn eig(&self, x: f64, scale: f64) -> String {
        if self.precision == Precision::Six && x.abs() < 1e-12 * scale.abs().max(1.0) {
            return "0".into();
        }
        self.num(x)
    }

    /// Rounds every float in `v` to the display precision and, unless meta
    /// output is off, attaches a `meta` object.
    pub fn finish_json(&self, mut v: Value) -> Value {
        if self.precision == Precision::Six {
            round_floats(&mut v);
        }
        if let Value::Object(map) = &mut v {
            if self.meta {
                let mut meta = Map::new();
                meta.insert("tool".into(), Value::from("zn"));
                meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
                let secs = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs());
                meta.insert("generated_unix".into(), Value::from(secs));
                map.insert("meta".into(), Value::Object(meta));
            }
        }
        v
    }
}

/// `%g`-style formatting with six significant digits.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if !(-5..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim_zeros(mantissa))
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = num.as_f64().expect("f64 number");
            if let Some(r) = sig6(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
            {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, content: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()
        }
    }
}

pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

/// Left-aligned columns separated by two spaces.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(13.191_496_5), "13.1915");
        assert_eq!(sig6(0.606_451_2), "0.606451");
        assert_eq!(sig6(-2.263_304), "-2.2633");
        assert_eq!(sig6(-3.534_650_1), "-3.53465");
        assert_eq!(sig6(14.393_551), "14.3936");
        assert_eq!(sig6(15.0), "15");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-1e-17), "-1e-17");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(9.999_999_9), "10");
    }

    #[test]
    fn roundoff_shows_as_zero() {
        let six = Style {
            precision: Precision::Six,
            meta: false,
        };
        let full = Style {
            precision: Precision::Full,
            meta: false,
        };
        assert_eq!(six.eig(-5.3e-17, 15.0), "0");
        assert_eq!(six.eig(1e-6, 15.0), "1e-6");
        assert_ne!(full.eig(-5.3e-17, 15.0), "0");
    }

    #[test]
    fn json_rounding_leaves_integers() {
        let style = Style {
            precision: Precision::Six,
            meta: false,
        };
        let v = style.finish_json(serde_json::json!({"a": 1.234_567_89, "b": [7, 2.5], "c": 30}));
        assert_eq!(v, serde_json::json!({"a": 1.23457, "b": [7, 2.5], "c": 30}));
    }

    #[test]
    fn tables() {
        let t = text_table(
            &["d", "size"],
            &[vec!["1".into(), "8".into()], vec!["30".into(), "1".into()]],
        );
        assert_eq!(t, "d   size\n1   8\n30  1\n");
        let c = csv_string(&["a", "b"], [vec!["1".into(), "x;y".into()]]);
        assert_eq!(c, "a,b\n1,x;y\n");
    }
}
