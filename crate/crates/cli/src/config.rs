//! Plain-text `key = value` run configuration.
//!
//! ```text
//! # comment
//! generators = power:1, exp, mul(power:2,exp), nonex:conj
//! expect_fail = nonex:conj
//! suites = all
//! regions = torus(0,2,1), sphere(0,2,0,0,1)
//! spec = 64x32x32x16
//! specs = 8x8x8x8, 16x16x16x16, 32x32x32x32
//! sides = left, right
//! seed = 7
//! window.count = 200
//! window.r = 0.5..3
//! tol.first_order = 1e-8
//! out = reports
//! ```
//!
//! Lists split on commas outside parentheses.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use hyperholo_core::{
    GeneratorSpec, QuadratureSpec, Region, SampleWindow, Side, Suite, Tolerances,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("`{key}`: cannot parse `{value}`: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },

    #[error(transparent)]
    Core(#[from] hyperholo_core::Error),

    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorEntry {
    pub text: String,
    pub spec: GeneratorSpec,
    /// Checks on this generator are expected to fail (constructed non-examples).
    pub expect_fail: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub generators: Vec<GeneratorEntry>,
    pub suites: Vec<Suite>,
    pub regions: Vec<Region>,
    pub spec: QuadratureSpec,
    pub specs: Vec<QuadratureSpec>,
    pub sides: Vec<Side>,
    pub window: SampleWindow,
    pub tolerances: Tolerances,
    pub gauss_fields: usize,
    pub gauss_degree: u32,
    pub out: PathBuf,
    pub timestamp: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s8 = QuadratureSpec::new(8, 8, 8, 8).expect("valid spec");
        Self {
            generators: Vec::new(),
            suites: Suite::ALL.to_vec(),
            regions: vec![
                Region::torus(0.0, 2.0, 1.0).expect("valid region"),
                Region::offset_sphere(hyperholo_core::Quaternion::pure(2.0, 0.0, 0.0), 1.0)
                    .expect("valid region"),
            ],
            spec: QuadratureSpec::default(),
            specs: vec![s8, s8.doubled(), s8.doubled().doubled()],
            sides: vec![Side::Left, Side::Right],
            window: SampleWindow::default(),
            tolerances: Tolerances::default(),
            gauss_fields: 20,
            gauss_degree: 3,
            out: PathBuf::from("reports"),
            timestamp: true,
        }
    }
}

/// Split on commas at parenthesis depth 0; empty items are dropped.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter()
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

fn value_error(key: &str, value: &str, reason: impl ToString) -> ConfigError {
    ConfigError::Value {
        key: key.into(),
        value: value.into(),
        reason: reason.to_string(),
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| value_error(key, value, e))
}

fn parse_range(key: &str, value: &str) -> Result<(f64, f64), ConfigError> {
    let (lo, hi) = value
        .split_once("..")
        .ok_or_else(|| value_error(key, value, "expected `lo..hi`"))?;
    Ok((parse_num(key, lo)?, parse_num(key, hi)?))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(value_error(key, value, "expected true or false")),
    }
}

pub fn parse_suites(value: &str) -> Result<Vec<Suite>, ConfigError> {
    let items = split_list(value);
    if items.iter().any(|s| s == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    let mut suites = items
        .iter()
        .map(|s| {
            s.parse::<Suite>()
                .map_err(|_| value_error("suites", s, "unknown suite"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    suites.sort();
    suites.dedup();
    Ok(suites)
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        let mut expect_fail = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            if key.trim() == "expect_fail" {
                expect_fail.extend(split_list(value));
            } else {
                config.set(key.trim(), value.trim())?;
            }
        }
        config.mark_expect_fail(&expect_fail)?;
        Ok(config)
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "generators" => {
                self.generators = split_list(value)
                    .into_iter()
                    .map(|text| {
                        let spec = text.parse::<GeneratorSpec>()?;
                        Ok(GeneratorEntry {
                            text,
                            spec,
                            expect_fail: false,
                        })
                    })
                    .collect::<Result<_, hyperholo_core::Error>>()?;
            }
            "expect_fail" => self.mark_expect_fail(&split_list(value))?,
            "suites" => self.suites = parse_suites(value)?,
            "regions" => {
                self.regions = split_list(value)
                    .iter()
                    .map(|r| r.parse::<Region>())
                    .collect::<Result<_, _>>()?;
            }
            "spec" => self.spec = value.parse()?,
            "specs" => {
                self.specs = split_list(value)
                    .iter()
                    .map(|s| s.parse::<QuadratureSpec>())
                    .collect::<Result<_, _>>()?;
            }
            "sides" => {
                self.sides = split_list(value)
                    .iter()
                    .map(|s| match s.as_str() {
                        "left" => Ok(Side::Left),
                        "right" => Ok(Side::Right),
                        _ => Err(value_error(key, s, "expected left or right")),
                    })
                    .collect::<Result<_, _>>()?;
            }
            "seed" => self.window.seed = parse_num(key, value)?,
            "window.count" => self.window.count = parse_num(key, value)?,
            "window.t" => self.window.t = parse_range(key, value)?,
            "window.r" => self.window.r = parse_range(key, value)?,
            "window.alpha" => self.window.alpha = parse_range(key, value)?,
            "window.beta" => self.window.beta = parse_range(key, value)?,
            "tol.first_order" => self.tolerances.first_order = parse_num(key, value)?,
            "tol.quadrature" => self.tolerances.quadrature = parse_num(key, value)?,
            "tol.third_order" => self.tolerances.third_order = parse_num(key, value)?,
            "tol.gauss" => self.tolerances.gauss = parse_num(key, value)?,
            "tol.equivalence" => self.tolerances.equivalence_fraction = parse_num(key, value)?,
            "gauss.fields" => self.gauss_fields = parse_num(key, value)?,
            "gauss.degree" => self.gauss_degree = parse_num(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "timestamp" => self.timestamp = parse_bool(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    fn mark_expect_fail(&mut self, texts: &[String]) -> Result<(), ConfigError> {
        for text in texts {
            let spec = text.parse::<GeneratorSpec>()?;
            let entry = self
                .generators
                .iter_mut()
                .find(|g| g.spec == spec)
                .ok_or_else(|| {
                    ConfigError::Invalid(format!(
                        "expect_fail names `{text}`, which is not in generators"
                    ))
                })?;
            entry.expect_fail = true;
        }
        Ok(())
    }

    /// Invariants every command relies on.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.generators.is_empty() {
            return Err(ConfigError::Invalid("no generators selected".into()));
        }
        if self.suites.is_empty() {
            return Err(ConfigError::Invalid("no suites selected".into()));
        }
        self.window.validate()?;
        Ok(())
    }
}
