//! Deterministic CSV/JSON emission: fixed 12-significant-digit float
//! formatting and a comment header naming the config hash on every file.

use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::{Error, Result};

/// 12 significant digits, scientific notation.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        // normalize -0
        return "0.00000000000e0".to_string();
    }
    format!("{:.11e}", x)
}

/// First 16 hex digits of the SHA-256 of the canonical config text.
pub fn config_hash(canonical: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let digest = hasher.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Writes result files for one run, all carrying the same header comment.
pub struct ReportWriter {
    out_dir: PathBuf,
    header: String,
    written: Vec<PathBuf>,
}

impl ReportWriter {
    /// `label` names the experiment or preset; `hash` is the config hash.
    pub fn new(out_dir: &Path, label: &str, hash: &str) -> Result<Self> {
        fs::create_dir_all(out_dir)?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            header: format!("deltasim {label} config-sha256={hash}"),
            written: Vec::new(),
        })
    }

    pub fn header(&self) -> &str {
        &self.header
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// CSV with a leading `# ...` comment line and a column-name row.
    pub fn csv<R>(&mut self, name: &str, columns: &[&str], rows: R) -> Result<PathBuf>
    where
        R: IntoIterator<Item = Vec<String>>,
    {
        let path = self.out_dir.join(name);
        let file = fs::File::create(&path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        let mut w = std::io::BufWriter::new(file);
        writeln!(w, "# {}", self.header)?;
        writeln!(w, "{}", columns.join(","))?;
        for row in rows {
            if row.len() != columns.len() {
                return Err(Error::Validation(format!(
                    "row width {} does not match {} columns",
                    row.len(),
                    columns.len()
                )));
            }
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// JSON of the form {"comment": header, "result": payload} (the
    /// BTree key order keeps the comment first).
    pub fn json(&mut self, name: &str, payload: Value) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        let doc = serde_json::json!({
            "comment": self.header,
            "result": payload,
        });
        let text = serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::Validation(format!("serialization: {e}")))?;
        fs::write(&path, text + "\n")?;
        self.written.push(path.clone());
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_fixed_width_significands() {
        assert_eq!(format_sig(0.5), "5.00000000000e-1");
        assert_eq!(format_sig(0.8660254037844386), "8.66025403784e-1");
        assert_eq!(format_sig(-1.0), "-1.00000000000e0");
        assert_eq!(format_sig(0.0), "0.00000000000e0");
        assert_eq!(format_sig(-0.0), "0.00000000000e0");
    }

    #[test]
    fn hash_is_stable() {
        let h1 = config_hash("abc");
        let h2 = config_hash("abc");
        assert_eq!(h1, h2);
        assert_eq!(h1.len(), 16);
        assert_ne!(h1, config_hash("abd"));
    }

    #[test]
    fn files_start_with_comment_header() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = ReportWriter::new(dir.path(), "test", "deadbeef00000000").unwrap();
        let p = w
            .csv("t.csv", &["a", "b"], vec![vec!["1".to_string(), "2".to_string()]])
            .unwrap();
        let text = fs::read_to_string(p).unwrap();
        assert!(text.starts_with("# deltasim test config-sha256=deadbeef00000000\n"));
        let p = w.json("t.json", serde_json::json!({"x": 1})).unwrap();
        let text = fs::read_to_string(p).unwrap();
        assert!(text.trim_start().starts_with("{\n  \"comment\""));
    }
}
