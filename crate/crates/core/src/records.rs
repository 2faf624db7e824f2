//! Newline-delimited `key=value` metrics records.
//!
//! One record per line; fields are separated by single spaces; keys match
//! `[a-z_]+`; values are either plain decimals or double-quoted strings with
//! `\"` and `\\` escapes.
//!
//! ```text
//! profile="balanced" frames=200 majpe=63.25 pa_majpe=58.1
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Number(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Number(v as f64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Number(v as f64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsRecord {
    fields: Vec<(String, Value)>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty() && key.bytes().all(|b| b.is_ascii_lowercase() || b == b'_')
}

impl MetricsRecord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a field. Panics on keys outside `[a-z_]+` or non-finite
    /// numbers, both of which are programming errors.
    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        assert!(valid_key(key), "invalid record key {key:?}");
        let value = value.into();
        if let Value::Number(v) = value {
            assert!(v.is_finite(), "non-finite value for {key}");
        }
        self.fields.push((key.to_string(), value));
    }

    pub fn fields(&self) -> &[(String, Value)] {
        &self.fields
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Value::Number(v) => Some(*v),
            Value::Text(_) => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.get(key)? {
            Value::Text(s) => Some(s),
            Value::Number(_) => None,
        }
    }
}

impl fmt::Display for MetricsRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (key, value)) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match value {
                // f64 Display is the shortest decimal that round-trips and
                // never uses exponent notation.
                Value::Number(v) => write!(f, "{key}={v}")?,
                Value::Text(s) => {
                    write!(f, "{key}=\"")?;
                    for ch in s.chars() {
                        match ch {
                            '"' => f.write_str("\\\"")?,
                            '\\' => f.write_str("\\\\")?,
                            _ => write!(f, "{ch}")?,
                        }
                    }
                    f.write_str("\"")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for MetricsRecord {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let err = |message: String| Error::Parse { line: 1, message };
        let mut fields = Vec::new();
        let mut rest = line.trim_end_matches(['\n', '\r']);
        while !rest.is_empty() {
            let eq = rest
                .find('=')
                .ok_or_else(|| err(format!("missing '=' in {rest:?}")))?;
            let key = &rest[..eq];
            if !valid_key(key) {
                return Err(err(format!("invalid key {key:?}")));
            }
            rest = &rest[eq + 1..];
            let value;
            if let Some(body) = rest.strip_prefix('"') {
                let mut text = String::new();
                let mut chars = body.char_indices();
                let mut end = None;
                while let Some((i, ch)) = chars.next() {
                    match ch {
                        '\\' => match chars.next() {
                            Some((_, c @ ('"' | '\\'))) => text.push(c),
                            _ => return Err(err("bad escape".into())),
                        },
                        '"' => {
                            end = Some(i);
                            break;
                        }
                        c => text.push(c),
                    }
                }
                let end = end.ok_or_else(|| err("unterminated string".into()))?;
                value = Value::Text(text);
                rest = &body[end + 1..];
            } else {
                let stop = rest.find(' ').unwrap_or(rest.len());
                let token = &rest[..stop];
                let v: f64 = token
                    .parse()
                    .map_err(|_| err(format!("bad number {token:?}")))?;
                if !v.is_finite() || token.contains(['e', 'E', 'i', 'n', 'N', 'I']) {
                    return Err(err(format!("not a plain decimal: {token:?}")));
                }
                value = Value::Number(v);
                rest = &rest[stop..];
            }
            fields.push((key.to_string(), value));
            if let Some(r) = rest.strip_prefix(' ') {
                if r.is_empty() || r.starts_with(' ') {
                    return Err(err("fields must be separated by single spaces".into()));
                }
                rest = r;
            } else if !rest.is_empty() {
                return Err(err(format!("unexpected trailing text {rest:?}")));
            }
        }
        Ok(Self { fields })
    }
}

/// Formats a real vector as a comma-separated list of round-trip decimals.
pub fn format_vector(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    parts.join(",")
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.parse::<f64>().map_err(|_| Error::Parse {
                line: 1,
                message: format!("bad vector element {t:?}"),
            })
        })
        .collect()
}

/// Parses every non-empty line of `text` as a record, reporting 1-based
/// line numbers on failure.
pub fn parse_records(text: &str) -> Result<Vec<MetricsRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.parse::<MetricsRecord>().map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    line: i + 1,
                    message,
                },
                other => other,
            })
        })
        .collect()
}
