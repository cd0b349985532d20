//! The document envelope and its canonical text form.
//!
//! A document is a JSON object with exactly the keys `conventions`, `field`,
//! `format_version`, `kind` and `payload`. Printing goes through
//! [`serde_json::Value`], whose maps are ordered, so keys always come out
//! sorted and the output is a pure function of the value.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const FORMAT_VERSION: &str = "1";

/// Tag of the frozen sign conventions: backward Leibniz rule in the base,
/// `D(a) = δa − (−1)^{|a|} φ∘a + a∘η` on cochains.
pub const CONVENTIONS: &str = "dgres-signs/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    DgCategory,
    McObject,
    LocalSystem,
    SimplicialSet,
    Functor,
    AdjunctionData,
    Report,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::DgCategory => "dg-category",
            Kind::McObject => "mc-object",
            Kind::LocalSystem => "local-system",
            Kind::SimplicialSet => "simplicial-set",
            Kind::Functor => "functor",
            Kind::AdjunctionData => "adjunction-data",
            Kind::Report => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format_version: String,
    pub conventions: String,
    pub field: String,
    pub kind: Kind,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Typed<P> {
    format_version: String,
    conventions: String,
    field: String,
    kind: Kind,
    payload: P,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{what} {found:?} is not supported (expected {expected:?})")]
    VersionMismatch { what: &'static str, found: String, expected: String },
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl FormatError {
    pub fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Invalid { path: path.into(), message: message.into() }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        FormatError::Parse { line: e.line(), column: e.column(), message }
    }
}

impl Document {
    pub fn new(field: &str, kind: Kind, payload: Value) -> Self {
        Document {
            format_version: FORMAT_VERSION.into(),
            conventions: CONVENTIONS.into(),
            field: field.into(),
            kind,
            payload,
        }
    }

    pub fn from_payload<P: Serialize>(field: &str, kind: Kind, payload: &P) -> Self {
        let payload = serde_json::to_value(payload).expect("payloads serialize");
        Document::new(field, kind, payload)
    }
}

/// Parses the envelope, checking versions before the schema so that documents
/// from other versions are reported as such.
pub fn parse(text: &str) -> Result<Document, FormatError> {
    let raw: Value = serde_json::from_str(text)?;
    for (key, expected) in [("format_version", FORMAT_VERSION), ("conventions", CONVENTIONS)] {
        if let Some(found) = raw.get(key).and_then(Value::as_str) {
            if found != expected {
                return Err(FormatError::VersionMismatch {
                    what: key,
                    found: found.into(),
                    expected: expected.into(),
                });
            }
        }
    }
    Ok(serde_json::from_str(text)?)
}

/// Parses the payload of `text` as `P`. Schema errors carry the position in
/// the original text.
pub fn parse_payload<P: DeserializeOwned>(text: &str, kind: Kind) -> Result<P, FormatError> {
    let doc = parse(text)?;
    if doc.kind != kind {
        return Err(FormatError::WrongKind { expected: kind.name(), found: doc.kind.name() });
    }
    let typed: Typed<P> = serde_json::from_str(text)?;
    Ok(typed.payload)
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn print(doc: &Document) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values print");
    s.push('\n');
    s
}
