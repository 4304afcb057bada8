//! Result tables, provenance records and atomic CSV/JSON writers.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use edplab_core::random::GENERATOR_ID;
use serde_json::{json, Map, Value};

/// Artifact version stamped into every metadata record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Empty,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Int(i) => json!(i),
            // Non-finite floats have no JSON form.
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i64)
            }
        }
    )*};
}
int_cell!(u64, usize, u32, i64);

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Named table with a fixed column list.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }
}

/// Provenance record written alongside every result file.
#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub command: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_owned(),
            seed,
            parameters: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "command": self.command,
            "seed": self.seed,
            "generator": GENERATOR_ID,
            "version": VERSION,
            "parameters": params,
            "notes": self.notes,
        })
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# command={}", self.command),
            format!("# seed={}", self.seed),
            format!("# generator={GENERATOR_ID}"),
            format!("# version={VERSION}"),
        ];
        lines.extend(self.parameters.iter().map(|(k, v)| format!("# param.{k}={v}")));
        lines.extend(self.notes.iter().map(|n| format!("# note={n}")));
        lines
    }
}

/// CSV text: `#` metadata lines, a header row, LF line endings.
pub fn render_csv(table: &Table, meta: &Metadata) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    for line in meta.comment_lines() {
        out.extend_from_slice(line.replace('\n', " ").as_bytes());
        out.push(b'\n');
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(&mut out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv_text))?;
    }
    w.flush()?;
    drop(w);
    Ok(out)
}

/// JSON text: one object with `metadata` and `rows`.
pub fn render_json(table: &Table, meta: &Metadata) -> anyhow::Result<Vec<u8>> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| ((*c).to_owned(), v.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({ "metadata": meta.to_json(), "table": table.name, "rows": rows });
    let mut out = serde_json::to_vec_pretty(&doc)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Writes a table into `dir`: `<name>.csv` plus a `<name>.meta.json`
/// sidecar, or a single `<name>.json`. Returns the written paths.
pub fn write_table(dir: &Path, table: &Table, meta: &Metadata, format: Format) -> anyhow::Result<Vec<PathBuf>> {
    match format {
        Format::Csv => {
            let csv_path = dir.join(format!("{}.csv", table.name));
            let meta_path = dir.join(format!("{}.meta.json", table.name));
            let mut sidecar = serde_json::to_vec_pretty(&meta.to_json())?;
            sidecar.push(b'\n');
            write_atomic(&csv_path, &render_csv(table, meta)?)?;
            write_atomic(&meta_path, &sidecar)?;
            Ok(vec![csv_path, meta_path])
        }
        Format::Json => {
            let path = dir.join(format!("{}.json", table.name));
            write_atomic(&path, &render_json(table, meta)?)?;
            Ok(vec![path])
        }
    }
}
