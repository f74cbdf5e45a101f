//! Strict reading of JSON documents into typed values.
//!
//! Documents are first parsed to a [`serde_json::Value`] (syntax errors carry a
//! line and column) and then walked by [`ObjectReader`], which rejects unknown
//! keys, wrong types and out-of-vocabulary enum strings, collecting every
//! problem as a [`ValidationIssue`] rather than stopping at the first one.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::vocab::UnknownVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IssueCode {
    NoObjective,
    DomainMismatch,
    MissingInteraction,
    BadFieldPresence,
    UnknownEnum,
    DuplicateName,
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IssueCode::NoObjective => "NoObjective",
            IssueCode::DomainMismatch => "DomainMismatch",
            IssueCode::MissingInteraction => "MissingInteraction",
            IssueCode::BadFieldPresence => "BadFieldPresence",
            IssueCode::UnknownEnum => "UnknownEnum",
            IssueCode::DuplicateName => "DuplicateName",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub code: IssueCode,
    pub path: String,
    pub message: String,
}

impl ValidationIssue {
    pub fn new(code: IssueCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        let mut path = path.into();
        if path.is_empty() {
            path.push('$');
        }
        ValidationIssue {
            code,
            path,
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.path, self.message)
    }
}

pub fn summarize_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Malformed JSON text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed JSON at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn parse_json(text: &str) -> Result<Value, SyntaxError> {
    serde_json::from_str(text).map_err(|e| SyntaxError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn join_path(parent: &str, key: &str) -> String {
    if parent.is_empty() {
        key.to_string()
    } else {
        format!("{parent}.{key}")
    }
}

pub fn index_path(parent: &str, i: usize) -> String {
    format!("{parent}[{i}]")
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// Accumulates issues while a document is walked.
#[derive(Debug, Default)]
pub struct Issues(pub Vec<ValidationIssue>);

impl Issues {
    pub fn push(&mut self, code: IssueCode, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(ValidationIssue::new(code, path, message));
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn wrong_type(&mut self, path: &str, expected: &str, got: &Value) {
        self.push(
            IssueCode::BadFieldPresence,
            path,
            format!("expected {expected}, found {}", type_name(got)),
        );
    }

    pub fn into_result<T>(self, value: Option<T>) -> Result<T, Vec<ValidationIssue>> {
        match value {
            Some(v) if self.0.is_empty() => Ok(v),
            _ => {
                let mut issues = self.0;
                if issues.is_empty() {
                    issues.push(ValidationIssue::new(
                        IssueCode::BadFieldPresence,
                        "$",
                        "invalid document",
                    ));
                }
                Err(issues)
            }
        }
    }
}

pub fn as_object<'a>(
    v: &'a Value,
    path: &str,
    issues: &mut Issues,
) -> Option<&'a Map<String, Value>> {
    match v {
        Value::Object(m) => Some(m),
        other => {
            issues.wrong_type(path, "object", other);
            None
        }
    }
}

pub fn as_array<'a>(v: &'a Value, path: &str, issues: &mut Issues) -> Option<&'a Vec<Value>> {
    match v {
        Value::Array(a) => Some(a),
        other => {
            issues.wrong_type(path, "array", other);
            None
        }
    }
}

pub fn as_str<'a>(v: &'a Value, path: &str, issues: &mut Issues) -> Option<&'a str> {
    match v {
        Value::String(s) => Some(s),
        other => {
            issues.wrong_type(path, "string", other);
            None
        }
    }
}

pub fn as_bool(v: &Value, path: &str, issues: &mut Issues) -> Option<bool> {
    match v {
        Value::Bool(b) => Some(*b),
        other => {
            issues.wrong_type(path, "boolean", other);
            None
        }
    }
}

pub fn as_u64(v: &Value, path: &str, issues: &mut Issues) -> Option<u64> {
    match v.as_u64() {
        Some(n) => Some(n),
        None => {
            issues.wrong_type(path, "non-negative integer", v);
            None
        }
    }
}

pub fn as_enum<T: FromStr<Err = UnknownVariant>>(
    v: &Value,
    path: &str,
    issues: &mut Issues,
) -> Option<T> {
    let s = as_str(v, path, issues)?;
    match s.parse() {
        Ok(t) => Some(t),
        Err(e) => {
            issues.push(IssueCode::UnknownEnum, path, e.to_string());
            None
        }
    }
}

/// Walks one JSON object, tracking which keys were consumed.
pub struct ObjectReader<'a> {
    map: &'a Map<String, Value>,
    path: String,
    allowed: Vec<&'static str>,
}

impl<'a> ObjectReader<'a> {
    pub fn new(v: &'a Value, path: &str, issues: &mut Issues) -> Option<Self> {
        as_object(v, path, issues).map(|map| ObjectReader {
            map,
            path: path.to_string(),
            allowed: Vec::new(),
        })
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn child_path(&self, key: &str) -> String {
        join_path(&self.path, key)
    }

    pub fn optional(&mut self, key: &'static str) -> Option<(&'a Value, String)> {
        self.allowed.push(key);
        self.map.get(key).map(|v| (v, join_path(&self.path, key)))
    }

    pub fn required(
        &mut self,
        key: &'static str,
        issues: &mut Issues,
    ) -> Option<(&'a Value, String)> {
        let found = self.optional(key);
        if found.is_none() {
            issues.push(
                IssueCode::BadFieldPresence,
                self.child_path(key),
                "missing required key",
            );
        }
        found
    }

    pub fn req_str(&mut self, key: &'static str, issues: &mut Issues) -> Option<&'a str> {
        let (v, p) = self.required(key, issues)?;
        as_str(v, &p, issues)
    }

    pub fn req_bool(&mut self, key: &'static str, issues: &mut Issues) -> Option<bool> {
        let (v, p) = self.required(key, issues)?;
        as_bool(v, &p, issues)
    }

    pub fn req_enum<T: FromStr<Err = UnknownVariant>>(
        &mut self,
        key: &'static str,
        issues: &mut Issues,
    ) -> Option<T> {
        let (v, p) = self.required(key, issues)?;
        as_enum(v, &p, issues)
    }

    /// Reports every key that was never asked for.
    pub fn finish(self, issues: &mut Issues) {
        for key in self.map.keys() {
            if !self.allowed.contains(&key.as_str()) {
                issues.push(
                    IssueCode::BadFieldPresence,
                    join_path(&self.path, key),
                    "unknown key",
                );
            }
        }
    }
}

/// Writes `value` as two-space indented JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("in-memory serialization cannot fail");
    out.push('\n');
    out
}
