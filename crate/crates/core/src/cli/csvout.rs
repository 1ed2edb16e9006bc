//! Deterministic CSV emission: one `#` metadata comment carrying the full
//! effective parameter set and artifact version, a header row, then rows with
//! floats at 17 significant digits.

use crate::error::Result;
use serde::Serialize;
use std::io::Write;

/// 17 significant digits, fixed scientific layout.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, command: &str, config: &impl Serialize) -> Result<Self> {
        let config_json = serde_json::to_string(config).expect("config serializes");
        writeln!(
            out,
            "# ptembed v{} command={command} config={config_json}",
            crate::VERSION
        )?;
        Ok(Self { out })
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<()> {
        writeln!(self.out, "{}", columns.join(","))?;
        Ok(())
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
