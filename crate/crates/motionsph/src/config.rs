//! Settings resolution: flags > `MOTIONSPH_*` environment > TOML file > defaults.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::CliError;

pub const ENV_PREFIX: &str = "MOTIONSPH_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Significant digits of floating-point output.
    pub precision: u32,
    pub seed: u64,
    pub format: Format,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            precision: 15,
            seed: 0,
            format: Format::Json,
            t_min: motionsph_core::bounded::DEFAULT_T_MIN,
            t_max: motionsph_core::bounded::DEFAULT_T_MAX,
            points: motionsph_core::bounded::DEFAULT_POINTS,
        }
    }
}

/// Any subset of the settings, as read from one source.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub precision: Option<u32>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
}

impl Layer {
    fn apply(&self, s: &mut Settings) {
        if let Some(v) = self.precision {
            s.precision = v;
        }
        if let Some(v) = self.seed {
            s.seed = v;
        }
        if let Some(v) = self.format {
            s.format = v;
        }
        if let Some(v) = self.t_min {
            s.t_min = v;
        }
        if let Some(v) = self.t_max {
            s.t_max = v;
        }
        if let Some(v) = self.points {
            s.points = v;
        }
    }
}

pub fn parse_file(path: &Path) -> Result<Layer, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config { location: path.display().to_string(), message: e.to_string() })?;
    parse_toml(&text).map_err(|message| CliError::Config { location: path.display().to_string(), message })
}

/// Parses config text; errors carry the line and column reported by the TOML parser.
pub fn parse_toml(text: &str) -> Result<Layer, String> {
    toml::from_str(text).map_err(|e| e.to_string().trim_end().to_string())
}

pub fn parse_env(env: &HashMap<String, String>) -> Result<Layer, CliError> {
    fn get<T: FromStr>(env: &HashMap<String, String>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        let name = format!("{ENV_PREFIX}{key}");
        match env.get(&name) {
            None => Ok(None),
            Some(raw) => raw
                .trim()
                .parse()
                .map(Some)
                .map_err(|e: T::Err| CliError::Config { location: name, message: e.to_string() }),
        }
    }
    Ok(Layer {
        precision: get(env, "PRECISION")?,
        seed: get(env, "SEED")?,
        format: get(env, "FORMAT")?,
        t_min: get(env, "T_MIN")?,
        t_max: get(env, "T_MAX")?,
        points: get(env, "POINTS")?,
    })
}

/// The config file named by the flag, else by `MOTIONSPH_CONFIG`.
pub fn config_path(flag: Option<&Path>, env: &HashMap<String, String>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| env.get(&format!("{ENV_PREFIX}CONFIG")).map(PathBuf::from))
}

pub fn resolve(flags: &Layer, env: &HashMap<String, String>, file: Option<&Path>) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    if let Some(path) = file {
        parse_file(path)?.apply(&mut s);
    }
    parse_env(env)?.apply(&mut s);
    flags.apply(&mut s);
    validate(&s)?;
    Ok(s)
}

fn validate(s: &Settings) -> Result<(), CliError> {
    let bad = |m: &str| Err(CliError::Config { location: String::from("settings"), message: m.to_string() });
    if !(1..=17).contains(&s.precision) {
        return bad("precision must be between 1 and 17 significant digits");
    }
    if !(s.t_min > 0.0 && s.t_max > s.t_min && s.t_max.is_finite()) {
        return bad("probe grid needs 0 < t_min < t_max");
    }
    if s.points < 16 {
        return bad("probe grid needs at least 16 points");
    }
    Ok(())
}
