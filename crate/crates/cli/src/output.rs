//! Row formatting shared by all commands.

use crate::config::Format;

/// Fixed decimal notation with 15 significant digits.
pub fn fixed15(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000000000".into();
    }
    // scientific formatting does the correct rounding; then shift the point
    let sci = format!("{:.14e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else if exp >= 14 {
        format!("{}{}", digits, "0".repeat((exp - 14) as usize))
    } else {
        let cut = (exp + 1) as usize;
        format!("{}.{}", &digits[..cut], &digits[cut..])
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

/// Accumulates rows in one of the two output formats.
pub struct Table {
    format: Format,
    header: Vec<&'static str>,
    text: String,
}

pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
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

impl Table {
    pub fn new(format: Format, header: &[&'static str]) -> Self {
        let mut text = String::new();
        if format == Format::Csv {
            text.push_str(&header.join(","));
            text.push('\n');
        }
        Table { format, header: header.to_vec(), text }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.header.len(), "row width");
        match self.format {
            Format::Csv => {
                let parts: Vec<String> = cells
                    .iter()
                    .map(|c| match c {
                        Cell::Num(x) => fixed15(*x),
                        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                        Cell::Text(s) => s.clone(),
                        Cell::Empty => String::new(),
                    })
                    .collect();
                self.text.push_str(&parts.join(","));
            }
            Format::JsonLines => {
                // keys keep the column order of the header
                let fields: Vec<String> = self
                    .header
                    .iter()
                    .zip(cells)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(x) => serde_json::Number::from_f64(x)
                                .map_or(serde_json::Value::Null, serde_json::Value::Number),
                            Cell::Text(s) => serde_json::Value::String(s),
                            Cell::Empty => serde_json::Value::Null,
                        };
                        format!("{}:{}", serde_json::Value::from(*k), v)
                    })
                    .collect();
                self.text.push('{');
                self.text.push_str(&fields.join(","));
                self.text.push('}');
            }
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
