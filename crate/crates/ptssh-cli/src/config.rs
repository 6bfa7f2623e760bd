//! Flat `key = value` experiment configuration.
//!
//! A config file holds one key per line, `#` starts a comment, and keys are
//! exactly the field names below. The same text format is echoed into every
//! CSV header, so a run can be reproduced from its own output. `parse` and
//! `emit` round-trip exactly; floats are written with 17 significant digits.

use std::str::FromStr;

use ptssh::model::ProfileKind;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ConfigError {
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },

    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("config line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },

    #[error("config line {line}: invalid value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("missing required key `{key}` for command `{command}`")]
    MissingKey {
        key: &'static str,
        command: String,
    },

    #[error("keys `u` and `v` are mutually exclusive; give one")]
    HoppingOverdetermined,

    #[error("config names command `{file}` but the invoked subcommand is `{cli}`")]
    CommandMismatch { file: String, cli: String },

    #[error("{0}")]
    Invalid(String),
}

/// Every experiment knob, all optional at parse time; per-command validation
/// happens in [`ExperimentConfig::require`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub m: Option<usize>,
    pub w: Option<f64>,
    pub u: Option<f64>,
    pub v: Option<f64>,
    pub profile: Option<ProfileKind>,
    pub profile_file: Option<String>,
    pub gamma: Option<f64>,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
    pub gamma_steps: Option<usize>,
    pub m_list: Option<Vec<usize>>,
    pub u_list: Option<Vec<f64>>,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub u_steps: Option<usize>,
    pub nk: Option<usize>,
    pub tol: Option<f64>,
    pub bracket_lo: Option<f64>,
    pub bracket_hi: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<String>,
    pub svg: Option<String>,
}

/// Key order used by `emit` (and therefore by every CSV header).
const KEY_ORDER: &[&str] = &[
    "command", "m", "w", "u", "v", "profile", "profile_file", "gamma", "gamma_min", "gamma_max",
    "gamma_steps", "m_list", "u_list", "u_min", "u_max", "u_steps", "nk", "tol", "bracket_lo",
    "bracket_hi", "seed", "threads", "out", "svg",
];

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_num<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("{e}"),
    })
}

fn parse_list<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s, line))
        .collect()
}

impl ExperimentConfig {
    /// Parse config text; `line_offset` shifts diagnostics when the text is
    /// embedded elsewhere.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let stripped = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: stripped.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            seen.push(key.to_string());
            cfg.set(key, value, line)?;
        }
        Ok(cfg)
    }

    /// Apply one `key = value` assignment (also used for `--set` overrides).
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        match key {
            "command" => self.command = Some(value.to_string()),
            "m" => self.m = Some(parse_num(key, value, line)?),
            "w" => self.w = Some(parse_num(key, value, line)?),
            "u" => self.u = Some(parse_num(key, value, line)?),
            "v" => self.v = Some(parse_num(key, value, line)?),
            "profile" => {
                self.profile =
                    Some(
                        value
                            .parse::<ProfileKind>()
                            .map_err(|e| ConfigError::BadValue {
                                line,
                                key: key.to_string(),
                                reason: format!("{e}"),
                            })?,
                    )
            }
            "profile_file" => self.profile_file = Some(value.to_string()),
            "gamma" => self.gamma = Some(parse_num(key, value, line)?),
            "gamma_min" => self.gamma_min = Some(parse_num(key, value, line)?),
            "gamma_max" => self.gamma_max = Some(parse_num(key, value, line)?),
            "gamma_steps" => self.gamma_steps = Some(parse_num(key, value, line)?),
            "m_list" => self.m_list = Some(parse_list(key, value, line)?),
            "u_list" => self.u_list = Some(parse_list(key, value, line)?),
            "u_min" => self.u_min = Some(parse_num(key, value, line)?),
            "u_max" => self.u_max = Some(parse_num(key, value, line)?),
            "u_steps" => self.u_steps = Some(parse_num(key, value, line)?),
            "nk" => self.nk = Some(parse_num(key, value, line)?),
            "tol" => self.tol = Some(parse_num(key, value, line)?),
            "bracket_lo" => self.bracket_lo = Some(parse_num(key, value, line)?),
            "bracket_hi" => self.bracket_hi = Some(parse_num(key, value, line)?),
            "seed" => self.seed = Some(parse_num(key, value, line)?),
            "threads" => self.threads = Some(parse_num(key, value, line)?),
            "out" => self.out = Some(value.to_string()),
            "svg" => self.svg = Some(value.to_string()),
            other => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Canonical text form: one line per set key, in [`KEY_ORDER`].
    /// Round-trips exactly through [`ExperimentConfig::parse`].
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn emit(&self) -> String {
        self.emit_filtered(&[])
    }

    /// Config lines for the CSV header: the experiment identity only.
    /// Execution details (worker count, output paths) are omitted because
    /// they never influence the data — re-running with any `threads` value
    /// must reproduce the file bit for bit.
    pub fn emit_experiment(&self) -> String {
        self.emit_filtered(&["threads", "out", "svg"])
    }

    fn emit_filtered(&self, skip: &[&str]) -> String {
        let mut out = String::new();
        for &key in KEY_ORDER {
            if skip.contains(&key) {
                continue;
            }
            let value = match key {
                "command" => self.command.clone(),
                "m" => self.m.map(|x| x.to_string()),
                "w" => self.w.map(format_float),
                "u" => self.u.map(format_float),
                "v" => self.v.map(format_float),
                "profile" => self.profile.map(|p| p.to_string()),
                "profile_file" => self.profile_file.clone(),
                "gamma" => self.gamma.map(format_float),
                "gamma_min" => self.gamma_min.map(format_float),
                "gamma_max" => self.gamma_max.map(format_float),
                "gamma_steps" => self.gamma_steps.map(|x| x.to_string()),
                "m_list" => self.m_list.as_ref().map(|xs| {
                    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                }),
                "u_list" => self.u_list.as_ref().map(|xs| {
                    xs.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(",")
                }),
                "u_min" => self.u_min.map(format_float),
                "u_max" => self.u_max.map(format_float),
                "u_steps" => self.u_steps.map(|x| x.to_string()),
                "nk" => self.nk.map(|x| x.to_string()),
                "tol" => self.tol.map(format_float),
                "bracket_lo" => self.bracket_lo.map(format_float),
                "bracket_hi" => self.bracket_hi.map(format_float),
                "seed" => self.seed.map(|x| x.to_string()),
                "threads" => self.threads.map(|x| x.to_string()),
                "out" => self.out.clone(),
                "svg" => self.svg.clone(),
                _ => unreachable!(),
            };
            if let Some(v) = value {
                out.push_str(key);
                out.push_str(" = ");
                out.push_str(&v);
                out.push('\n');
            }
        }
        out
    }

    /// Resolve `(v, w)` from whichever of `u`/`v` was given (`w` defaults
    /// to 1).
    pub fn hoppings(&self) -> Result<(f64, f64), ConfigError> {
        let w = self.w.unwrap_or(1.0);
        match (self.u, self.v) {
            (Some(_), Some(_)) => Err(ConfigError::HoppingOverdetermined),
            (Some(u), None) => Ok((w / u, w)),
            (None, Some(v)) => Ok((v, w)),
            (None, None) => Err(ConfigError::MissingKey {
                key: "u (or v)",
                command: self.command.clone().unwrap_or_default(),
            }),
        }
    }

    pub fn require<T: Copy>(&self, field: Option<T>, key: &'static str) -> Result<T, ConfigError> {
        field.ok_or(ConfigError::MissingKey {
            key,
            command: self.command.clone().unwrap_or_default(),
        })
    }

    pub fn profile_kind(&self) -> ProfileKind {
        self.profile.unwrap_or(ProfileKind::Uniform)
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(ptssh::ep::DEFAULT_REL_TOL)
    }
}
