use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use qmslab_core::special::bits_for_digits;
use qmslab_core::QmsError;
use serde_json::{json, Value};

use crate::args::Global;

pub const PREC_ENV: &str = "QMSLAB_PREC_DEFAULT";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(QmsError),
    Io(String),
}

impl From<QmsError> for CliError {
    fn from(e: QmsError) -> Self {
        match e {
            QmsError::InvalidInput(m) => CliError::Usage(m),
            other => CliError::Compute(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({"error": "usage", "message": m}),
            CliError::Io(m) => json!({"error": "io", "message": m}),
            CliError::Compute(e) => json!({"error": kind_name(e), "message": e.to_string()}),
        }
    }
}

fn kind_name(e: &QmsError) -> &'static str {
    match e {
        QmsError::PrecisionExhausted { .. } => "precision-exhausted",
        QmsError::BracketNotFound { .. } => "bracket-not-found",
        QmsError::NewtonDiverged { .. } => "newton-diverged",
        QmsError::NotDivisible { .. } => "not-divisible",
        QmsError::QuadratureFailure { .. } => "quadrature-failure",
        QmsError::NodeEncountered { .. } => "node-encountered",
        QmsError::PoleError { .. } => "pole",
        QmsError::InvalidInput(_) => "invalid-input",
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Resolves every parameter from flag, config file, environment and default,
/// recording the outcome for the manifest.
pub struct Context {
    config: toml::Table,
    global: Global,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<(String, bool)>,
}

fn config_value(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Context {
    pub fn new(global: Global) -> CliResult<Self> {
        let config = match &global.config {
            Some(path) => load_config(path)?,
            None => toml::Table::new(),
        };
        Ok(Context {
            config,
            global,
            params: BTreeMap::new(),
            checks: Vec::new(),
        })
    }

    fn from_config(&self, key: &str) -> Option<String> {
        let alt = key.replace('-', "_");
        self.config.get(key).or_else(|| self.config.get(&alt)).map(config_value)
    }

    fn record(&mut self, key: &str, v: impl Display) {
        self.params.insert(key.to_owned(), Value::String(v.to_string()));
    }

    /// Flag, then config file, then `None`.
    pub fn optional<T>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => match self.from_config(key) {
                Some(raw) => Some(
                    raw.parse::<T>()
                        .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &v {
            self.record(key, v);
        }
        Ok(v)
    }

    pub fn value<T>(&mut self, key: &str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.optional(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, &default);
                Ok(default)
            }
        }
    }

    pub fn required<T>(&mut self, key: &str, flag: Option<T>) -> CliResult<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.optional(key, flag)?
            .ok_or_else(|| CliError::Usage(format!("missing required --{key}")))
    }

    pub fn flag(&mut self, key: &str, set: bool) -> CliResult<bool> {
        let v = set
            || match self.from_config(key) {
                Some(raw) => raw
                    .parse::<bool>()
                    .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))?,
                None => false,
            };
        self.params.insert(key.to_owned(), Value::Bool(v));
        Ok(v)
    }

    /// Bits from `--prec`/`--digits`, the config file, the environment, then
    /// the command's own default.
    pub fn precision(&mut self, default: u32) -> CliResult<u32> {
        let bits = if let Some(p) = self.global.prec {
            p
        } else if let Some(d) = self.global.digits {
            bits_for_digits(d)
        } else if let Some(raw) = self.from_config("prec") {
            raw.parse()
                .map_err(|e| CliError::Usage(format!("config key prec: {e}")))?
        } else if let Some(raw) = self.from_config("digits") {
            let d: u32 = raw
                .parse()
                .map_err(|e| CliError::Usage(format!("config key digits: {e}")))?;
            bits_for_digits(d)
        } else if let Ok(raw) = std::env::var(PREC_ENV) {
            raw.trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("{PREC_ENV}: {e}")))?
        } else {
            default
        };
        if !(16..=1 << 20).contains(&bits) {
            return Err(CliError::Usage(format!("precision {bits} bits is out of range")));
        }
        self.params.insert("prec".into(), json!(bits));
        Ok(bits)
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push((name.into(), pass));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, p)| *p)
    }
}

fn load_config(path: &Path) -> CliResult<toml::Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    text.parse::<toml::Table>()
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// `start:stop:count`, logarithmically spaced, both ends included.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("grid {spec:?} is not start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(a > 0.0 && b >= a && n >= 1) {
        return Err(CliError::Usage(format!("grid {spec:?} needs 0 < start <= stop and count >= 1")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let ratio = (b / a).ln();
    Ok((0..n)
        .map(|i| a * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect())
}

pub fn parse_list<T>(raw: &str, what: &str) -> CliResult<Vec<T>>
where
    T: FromStr,
    T::Err: Display,
{
    raw.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|e| CliError::Usage(format!("bad {what} entry {p:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_log_spaced() {
        let g = parse_grid("0.5:20:5").unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[0] - 0.5).abs() < 1e-15 && (g[4] - 20.0).abs() < 1e-12);
        let r1 = g[1] / g[0];
        let r2 = g[3] / g[2];
        assert!((r1 - r2).abs() < 1e-12);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("0:2:3").is_err());
        assert_eq!(parse_grid("3:3:1").unwrap(), vec![3.0]);
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list::<f64>("1, 2,3.5", "kappa").unwrap(), vec![1.0, 2.0, 3.5]);
        assert!(parse_list::<u32>("1,x", "n").is_err());
    }
}
