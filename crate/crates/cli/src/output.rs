use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::CliError;

/// 17 significant digits, enough to round-trip any f64.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub enum Cell<'a> {
    F(f64),
    U(usize),
    S(&'a str),
}

impl Cell<'_> {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => float(*x),
            Cell::U(u) => u.to_string(),
            Cell::S(s) => (*s).to_owned(),
        }
    }
}

/// CSV document: `#` comment lines, a header row, data rows, LF endings.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(config: &RunConfig) -> Self {
        let mut csv = Csv { buf: String::new() };
        csv.comment("config", config);
        csv
    }

    pub fn comment<T: Serialize + ?Sized>(&mut self, key: &str, value: &T) {
        let json = serde_json::to_string(value).expect("comment values serialize");
        let _ = writeln!(self.buf, "# {key}: {json}");
    }

    pub fn header(&mut self, columns: &[&str]) {
        self.buf.push_str(&columns.join(","));
        self.buf.push('\n');
    }

    pub fn row(&mut self, cells: &[Cell<'_>]) {
        let rendered: Vec<String> = cells.iter().map(Cell::render).collect();
        self.buf.push_str(&rendered.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Single JSON object with the effective config under `config`.
pub fn json_document<T: Serialize>(config: &RunConfig, body: &T) -> String {
    let mut map = match serde_json::to_value(body).expect("report serializes") {
        Value::Object(map) => map,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(map)).expect("json renders");
    text.push('\n');
    text
}

pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}
