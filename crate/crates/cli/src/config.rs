//! `key = value` configuration files with bracketed sections.
//!
//! Parsing is strict: unknown sections and keys are rejected by name so that
//! typos cannot silently fall back to defaults. Values are kept as the
//! strings the user wrote, and resolution writes every default it applies
//! back into the config, so [`Config::render`] yields a fully explicit
//! snapshot that re-parses to the same values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use ini::Ini;

/// Sections in canonical order with their permitted keys.
pub const SCHEMA: &[(&str, &[&str])] = &[
    ("geometry", &["m", "n", "period", "grid"]),
    (
        "data",
        &[
            "kind",
            "c_star",
            "width",
            "ball_center",
            "ball_radius",
            "strip_dir",
            "strip_halfwidth",
            "envelope_sigma",
            "distribution",
            "seed",
        ],
    ),
    ("time", &["t0", "t1", "nt"]),
    (
        "experiment",
        &["p", "q", "r", "N_list", "trials", "statistic"],
    ),
    (
        "measure",
        &[
            "c_star",
            "T_list",
            "mc_samples",
            "slice_resolution",
            "trials",
            "seed",
        ],
    ),
    ("weyl", &["K_list", "d"]),
    ("output", &["out_dir"]),
];

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("config syntax error: {0}")]
    Syntax(String),
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("unknown key `{key}` in section [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("key `{0}` appears before any section header")]
    Sectionless(String),
    #[error("duplicate key `{key}` in section [{section}]")]
    Duplicate { section: String, key: String },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error("missing key `{key}` in section [{section}]")]
    MissingKey { section: String, key: String },
    #[error("invalid value for `{key}` in section [{section}]: {reason}")]
    BadValue {
        section: String,
        key: String,
        reason: String,
    },
}

fn schema_keys(section: &str) -> Option<&'static [&'static str]> {
    SCHEMA
        .iter()
        .find(|(s, _)| *s == section)
        .map(|(_, keys)| *keys)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for (name, props) in ini.iter() {
            let Some(name) = name else {
                if let Some((key, _)) = props.iter().next() {
                    return Err(ConfigError::Sectionless(key.to_string()));
                }
                continue;
            };
            let allowed =
                schema_keys(name).ok_or_else(|| ConfigError::UnknownSection(name.to_string()))?;
            let entry = sections.entry(name.to_string()).or_default();
            for (key, value) in props.iter() {
                if !allowed.contains(&key) {
                    return Err(ConfigError::UnknownKey {
                        section: name.to_string(),
                        key: key.to_string(),
                    });
                }
                if entry
                    .insert(key.to_string(), value.trim().to_string())
                    .is_some()
                {
                    return Err(ConfigError::Duplicate {
                        section: name.to_string(),
                        key: key.to_string(),
                    });
                }
            }
        }
        Ok(Self { sections })
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.sections.contains_key(section)
    }

    pub fn require_section(&self, section: &str) -> Result<(), ConfigError> {
        if self.has_section(section) {
            Ok(())
        } else {
            Err(ConfigError::MissingSection(section.to_string()))
        }
    }

    pub fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|s| s.get(key))
            .map(String::as_str)
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        debug_assert!(schema_keys(section).is_some_and(|k| k.contains(&key)));
        self.sections
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), value.into());
    }

    /// Records `value` unless the key is already present.
    pub fn set_default(&mut self, section: &str, key: &str, value: impl Into<String>) {
        if self.raw(section, key).is_none() {
            self.set(section, key, value);
        }
    }

    fn bad(section: &str, key: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::BadValue {
            section: section.to_string(),
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<T, ConfigError> {
        let raw = self
            .raw(section, key)
            .ok_or_else(|| ConfigError::MissingKey {
                section: section.to_string(),
                key: key.to_string(),
            })?;
        raw.parse()
            .map_err(|_| Self::bad(section, key, format!("cannot parse `{raw}`")))
    }

    pub fn get_opt<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(_) => self.get(section, key).map(Some),
        }
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr>(&self, section: &str, key: &str) -> Result<Vec<T>, ConfigError> {
        let raw = self
            .raw(section, key)
            .ok_or_else(|| ConfigError::MissingKey {
                section: section.to_string(),
                key: key.to_string(),
            })?;
        raw.split(',')
            .map(|item| {
                let item = item.trim();
                item.parse().map_err(|_| {
                    Self::bad(section, key, format!("cannot parse list item `{item}`"))
                })
            })
            .collect()
    }

    pub fn get_list_opt<T: FromStr>(
        &self,
        section: &str,
        key: &str,
    ) -> Result<Option<Vec<T>>, ConfigError> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(_) => self.get_list(section, key).map(Some),
        }
    }

    /// Keeps only the listed sections.
    pub fn restricted(&self, keep: &[&str]) -> Self {
        Self {
            sections: self
                .sections
                .iter()
                .filter(|(k, _)| keep.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Canonical text: sections and keys in schema order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (section, keys) in SCHEMA {
            let Some(values) = self.sections.get(*section) else {
                continue;
            };
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "[{section}]");
            for key in *keys {
                if let Some(v) = values.get(*key) {
                    let _ = writeln!(out, "{key} = {v}");
                }
            }
        }
        out
    }
}
