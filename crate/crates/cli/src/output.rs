//! CSV tables, number formatting and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Nine significant digits, except that a value is never rounded onto an
/// exact 0 or 1 it does not equal.
pub fn format_number(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    let collapsed = (rounded == 0.0 && v != 0.0) || (rounded.abs() == 1.0 && v.abs() != 1.0);
    let out = if collapsed { v } else { rounded };
    if out == 0.0 {
        "0".to_string()
    } else {
        out.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).map_err(CliError::runtime)?;
        for row in &self.rows {
            w.write_record(row).map_err(CliError::runtime)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::runtime(e.to_string()))?;
        String::from_utf8(bytes).map_err(CliError::runtime)
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r
            .headers()
            .map_err(CliError::validation)?
            .iter()
            .map(str::to_string)
            .collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()
            .map_err(CliError::validation)?;
        Ok(Table { header, rows })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: Option<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, config_digest: Option<String>, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            config_digest,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes `text` to `out` through a temporary sibling, so a failed write
/// leaves no partial file behind.
pub fn write_atomic(out: &Path, text: &str) -> Result<(), CliError> {
    let mut tmp = out.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(text.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, out));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::runtime(format!("{}: {e}", out.display())));
    }
    Ok(())
}

/// Writes the result to `out` with a manifest sidecar, or to standard
/// output with the manifest on standard error.
pub fn emit(text: &str, out: Option<&Path>, manifest: &RunManifest) -> Result<(), CliError> {
    let m = serde_json::to_string_pretty(manifest).map_err(CliError::runtime)?;
    match out {
        Some(path) => {
            write_atomic(path, text)?;
            write_atomic(&manifest_path(path), &(m + "\n"))
        }
        None => {
            print!("{text}");
            eprintln!("{}", serde_json::to_string(manifest).map_err(CliError::runtime)?);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_number(0.123456789123), "0.123456789");
        assert_eq!(format_number(12345.678912345), "12345.6789");
        assert_eq!(format_number(2.0), "2");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1e-12), "0.000000000001");
    }

    #[test]
    fn probabilities_do_not_collapse() {
        assert_eq!(format_number(0.99999999997), "0.99999999997");
        assert_eq!(format_number(1.0), "1");
        assert_ne!(format_number(1.0 - 1e-15), "1");
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(["x", "name"]);
        t.push(vec!["0.5".into(), "a, b".into()]);
        t.push(vec!["1".into(), "plain".into()]);
        let text = t.to_csv().unwrap();
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let back = Table::from_csv(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_csv().unwrap(), text);
    }

    #[test]
    fn manifest_sidecar_name() {
        assert_eq!(manifest_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.manifest.json"));
    }
}
