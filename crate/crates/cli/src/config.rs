//! Run configuration: flat `key = value` pairs from a file, overridden by flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use susy_tj::params::KCouplings;
use susy_tj::presets::{bound_state_region, real_root_region, table_one};
use susy_tj::{BoundaryParams, RawParams, C64};

use crate::error::{CliError, CliResult};

/// Keys naming physical parameters, accepted by every subcommand that builds
/// a `BoundaryParams`.
pub const PARAM_KEYS: [&str; 8] = ["eta", "xi", "theta", "phi", "xi_prime", "theta_prime", "phi_prime", "epsilon"];

/// Raw coupling overrides; they bypass the angle parametrization.
pub const COUPLING_KEYS: [&str; 6] = ["c", "c1", "c2", "c_prime", "c1_prime", "c2_prime"];

/// Resolved key-value configuration, ordered by key for stable output.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("config line {}: expected key = value", n + 1)))?;
            let key = normalize_key(key.trim());
            if key.is_empty() {
                return Err(CliError::Validation(format!("config line {}: empty key", n + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(RunConfig { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(normalize_key(key), value.into());
    }

    pub fn set_default(&mut self, key: &str, value: impl Into<String>) {
        self.values.entry(normalize_key(key)).or_insert_with(|| value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> CliResult<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::Validation(format!("unknown key `{k}` for this subcommand"))),
            None => Ok(()),
        }
    }

    pub fn f64(&self, key: &str) -> CliResult<Option<f64>> {
        self.get(key)
            .map(|v| parse_number(v).map_err(|e| CliError::Validation(format!("{key}: {e}"))))
            .transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Validation(format!("{key}: expected a non-negative integer, got `{v}`"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> CliResult<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Validation(format!("{key}: expected a non-negative integer, got `{v}`"))),
        }
    }

    /// Comma-separated list of integers.
    pub fn usize_list(&self, key: &str) -> CliResult<Option<Vec<usize>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| CliError::Validation(format!("{key}: bad integer `{}`", s.trim())))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> CliResult<bool> {
        match self.get(key) {
            None => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(CliError::Validation(format!("{key}: expected true or false, got `{v}`"))),
        }
    }

    /// Physical parameters: the preset, then per-key overrides, then raw couplings.
    pub fn params(&self, default_preset: &str) -> CliResult<BoundaryParams> {
        let preset = self.get("preset").unwrap_or(default_preset);
        let mut raw = preset_params(preset)?;
        let fields: [(&str, &mut f64); 8] = [
            ("eta", &mut raw.eta),
            ("xi", &mut raw.xi),
            ("theta", &mut raw.theta),
            ("phi", &mut raw.phi),
            ("xi_prime", &mut raw.xi_prime),
            ("theta_prime", &mut raw.theta_prime),
            ("phi_prime", &mut raw.phi_prime),
            ("epsilon", &mut raw.epsilon),
        ];
        for (key, slot) in fields {
            if let Some(v) = self.f64(key)? {
                *slot = v;
            }
        }
        let mut params = BoundaryParams::new(raw)?;
        let left = self.couplings(*params.left(), ["c", "c1", "c2"])?;
        let right = self.couplings(*params.right(), ["c_prime", "c1_prime", "c2_prime"])?;
        if let Some(k) = left {
            params = params.with_left_couplings(k);
        }
        if let Some(k) = right {
            params = params.with_right_couplings(k);
        }
        Ok(params)
    }

    fn couplings(&self, base: KCouplings, keys: [&str; 3]) -> CliResult<Option<KCouplings>> {
        if keys.iter().all(|k| self.get(k).is_none()) {
            return Ok(None);
        }
        let mut k = base;
        for (key, slot) in keys.into_iter().zip([&mut k.c, &mut k.c1, &mut k.c2]) {
            if let Some(v) = self.get(key) {
                *slot = parse_complex(v).map_err(|e| CliError::Validation(format!("{key}: {e}")))?;
            }
        }
        Ok(Some(k))
    }
}

/// Flag spellings with dashes map onto the underscore keys.
fn normalize_key(key: &str) -> String {
    key.replace('-', "_")
}

pub const PRESETS: [&str; 3] = ["benchmark", "real-root", "bound-state"];

fn preset_params(name: &str) -> CliResult<RawParams> {
    match name {
        "benchmark" => Ok(table_one()),
        "real-root" => Ok(real_root_region(PI / 5.0)),
        "bound-state" => Ok(bound_state_region(0.8)),
        other => Err(CliError::Validation(format!(
            "unknown preset `{other}`, expected one of {}",
            PRESETS.join(", ")
        ))),
    }
}

/// A real number, optionally in units of `pi`: `0.3`, `-pi/4`, `2pi/3`, `2*pi/3`, `1e-3`.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s.as_str(), None),
    };
    let value = parse_factor(num)? / den.map(parse_factor).transpose()?.unwrap_or(1.0);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{text}` is not a finite number"))
    }
}

fn parse_factor(s: &str) -> Result<f64, String> {
    let bad = || format!("cannot parse `{s}` as a number");
    let Some(head) = s.strip_suffix("pi") else {
        return s.parse().map_err(|_| bad());
    };
    let head = head.strip_suffix('*').unwrap_or(head);
    let scale = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(scale * PI)
}

/// `re` or `re,im`.
pub fn parse_complex(text: &str) -> Result<C64, String> {
    match text.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse_number(re)?, parse_number(im)?)),
        None => Ok(C64::new(parse_number(text)?, 0.0)),
    }
}
