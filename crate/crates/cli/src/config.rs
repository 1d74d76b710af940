use std::path::Path;

use isopower::Bounds;

use crate::cli::{Cli, Format};
use crate::error::CliError;

pub const CONFIG_ENV: &str = "ISOPOWER_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub bounds: Bounds,
    pub format: Format,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { bounds: Bounds::default(), format: Format::Json, seed: 0 }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {value:?}")))
}

fn positive<T: Default + PartialEq>(key: &str, v: T) -> Result<T, CliError> {
    if v == T::default() {
        return Err(CliError::Usage(format!("{key} must be positive")));
    }
    Ok(v)
}

impl Config {
    /// Applies `key = value` lines; blank lines and lines starting with '#' are skipped.
    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("config line {}: expected key=value", n + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "bound-q" => self.bounds.field_order = positive(key, parse(key, value)?)?,
                "bound-ext" => self.bounds.extension_degree = positive(key, parse(key, value)?)?,
                "bound-disc" => self.bounds.discriminant = positive(key, parse(key, value)?)?,
                "bound-group" => self.bounds.group_elements = positive(key, parse(key, value)?)?,
                "seed" => self.seed = parse(key, value)?,
                "format" => {
                    self.format = match value {
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        _ => return Err(CliError::Usage(format!("unknown format {value:?}"))),
                    }
                }
                _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
            }
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, cli: &Cli) -> Result<(), CliError> {
        if let Some(v) = cli.bound_q {
            self.bounds.field_order = positive("--bound-q", v)?;
        }
        if let Some(v) = cli.bound_ext {
            self.bounds.extension_degree = positive("--bound-ext", v)?;
        }
        if let Some(v) = cli.bound_disc {
            self.bounds.discriminant = positive("--bound-disc", v)?;
        }
        if let Some(f) = cli.format {
            self.format = f;
        }
        Ok(())
    }

    /// Defaults, then the file named by ISOPOWER_CONFIG, then command-line flags.
    pub fn load(cli: &Cli) -> Result<Self, CliError> {
        let mut c = Config::default();
        if let Some(path) = std::env::var_os(CONFIG_ENV) {
            let text = std::fs::read_to_string(Path::new(&path))?;
            c.apply_file(&text)?;
        }
        c.apply_flags(cli)?;
        Ok(c)
    }
}
