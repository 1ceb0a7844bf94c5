//! `key = value` config files merged under command-line flags.

use std::collections::BTreeMap;

use crate::{usage, UsageError};

pub const KEYS: &[&str] = &[
    "model",
    "quantity",
    "p",
    "lambda",
    "delta-lambda",
    "out",
    "jobs",
    "seed",
    "grid-points",
    "starts",
    "ansatz",
    "instances",
    "suite",
];

/// Option values by flag name (`delta-lambda`, not `delta_lambda`).
pub type Options = BTreeMap<String, String>;

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

/// Blank lines and `#` comments are skipped; keys may use `_` or `-`.
pub fn parse_config(text: &str) -> Result<Options, UsageError> {
    let mut out = Options::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return usage(format!("config line {}: expected key=value", n + 1));
        };
        let k = normalize(k);
        if !KEYS.contains(&k.as_str()) {
            return usage(format!("config line {}: unknown key '{k}'", n + 1));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

/// Flags win over the config file.
pub fn merge(config: Options, flags: Options) -> Options {
    let mut out = config;
    out.extend(flags);
    out
}
