//! CSV output with `#` provenance headers, and reading it back.

use std::io::Write;

use serde_json::Value;
use wehrl_qpt::{ModelKind, SweepRow};

pub const SWEEP_COLUMNS: [&str; 9] = [
    "model",
    "size",
    "control_name",
    "control_value",
    "energy0",
    "gap",
    "wehrl",
    "norm_deficit",
    "nodes_used",
];

/// Float with 17 significant digits and a lowercase exponent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn tool_version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

/// Header lines: tool version, then `key: value` pairs.
pub fn write_header<W: Write>(w: &mut W, entries: &[(&str, String)]) -> std::io::Result<()> {
    writeln!(w, "# tool: {}", tool_version())?;
    for (k, v) in entries {
        writeln!(w, "# {k}: {v}")?;
    }
    Ok(())
}

pub fn write_rows<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for r in rows {
        out.write_record(&r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn sweep_record(r: &SweepRow) -> Vec<String> {
    vec![
        r.model.tag().to_string(),
        fmt_f64(r.size),
        r.control_name.clone(),
        fmt_f64(r.control_value),
        fmt_f64(r.energy0),
        r.gap.map(fmt_f64).unwrap_or_default(),
        fmt_f64(r.wehrl),
        fmt_f64(r.norm_deficit),
        r.nodes_used.to_string(),
    ]
}

/// A sweep CSV read back: header entries and rows.
#[derive(Debug, Clone)]
pub struct SweepCsv {
    pub header: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

impl SweepCsv {
    pub fn entry(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// The echoed config, if present.
    pub fn config(&self) -> Option<Result<Value, String>> {
        self.entry("config").map(|s| serde_json::from_str(s).map_err(|e| format!("config header: {e}")))
    }
}

pub fn read_sweep_csv(text: &str) -> Result<SweepCsv, String> {
    let mut header = Vec::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line[1..].trim_start().split_once(": ") {
            header.push((k.to_string(), v.to_string()));
        }
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let columns: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    if columns != SWEEP_COLUMNS {
        return Err(format!("unexpected columns {columns:?}, expected {SWEEP_COLUMNS:?}"));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let line = i + 1;
        let float = |k: usize| -> Result<f64, String> {
            rec[k].parse::<f64>().map_err(|_| format!("row {line}: bad {} '{}'", SWEEP_COLUMNS[k], &rec[k]))
        };
        rows.push(SweepRow {
            model: ModelKind::from_tag(&rec[0]).ok_or_else(|| format!("row {line}: unknown model '{}'", &rec[0]))?,
            size: float(1)?,
            control_name: rec[2].to_string(),
            control_value: float(3)?,
            energy0: float(4)?,
            gap: if rec[5].is_empty() { None } else { Some(float(5)?) },
            wehrl: float(6)?,
            norm_deficit: float(7)?,
            nodes_used: rec[8].parse().map_err(|_| format!("row {line}: bad nodes_used '{}'", &rec[8]))?,
            wall_time: 0.0,
        });
    }
    Ok(SweepCsv { header, rows })
}
