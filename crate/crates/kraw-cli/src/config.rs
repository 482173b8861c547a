//! Flat `key = value` settings files.
//!
//! ```text
//! # classifier
//! corner_width = 3.5
//! beta_max = 0.25
//! # tolerances
//! tol.overlap_max = 0.15
//! ```

use std::path::Path;

use krawtchouk::ClassifierConfig;

use crate::checks::Tolerances;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub classifier: ClassifierConfig,
    pub tol: Tolerances,
}

impl Settings {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", lineno + 1)))?;
            s.set(key.trim(), value.trim())
                .map_err(|e| CliError::Usage(format!("line {}: {e}", lineno + 1)))?;
        }
        s.classifier.validate()?;
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let c = &mut self.classifier;
        match key {
            "n_small" => c.n_small = int(value)?,
            "x_small" => c.x_small = int(value)?,
            "j_small" => c.j_small = int(value)?,
            "corner_width" => c.corner_width = real(value)?,
            "beta_max" => c.beta_max = real(value)?,
            _ => match key.strip_prefix("tol.") {
                Some(name) => *self.tol.field_mut(name).ok_or_else(|| format!("unknown tolerance `{name}`"))? = real(value)?,
                None => return Err(format!("unknown key `{key}`")),
            },
        }
        Ok(())
    }

    /// The settings as `key = value` lines, readable by [`Settings::parse`].
    pub fn render(&self) -> String {
        let c = &self.classifier;
        let mut out = format!(
            "n_small = {}\nx_small = {}\nj_small = {}\ncorner_width = {}\nbeta_max = {}\n",
            c.n_small, c.x_small, c.j_small, c.corner_width, c.beta_max
        );
        for (name, v) in self.tol.fields() {
            out.push_str(&format!("tol.{name} = {v}\n"));
        }
        out
    }
}

fn int(v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("`{v}` is not a non-negative integer"))
}

fn real(v: &str) -> Result<f64, String> {
    v.parse().map_err(|_| format!("`{v}` is not a number"))
}
