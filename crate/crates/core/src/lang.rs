//! ISO-639-1 language codes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A two-letter lowercase ISO-639-1 language code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LangCode(String);

impl LangCode {
    pub fn new(code: &str) -> crate::Result<Self> {
        if code.len() == 2 && code.chars().all(|c| c.is_ascii_lowercase()) {
            Ok(LangCode(code.to_string()))
        } else {
            Err(Error::config(format!(
                "language code must be exactly two lowercase ASCII letters, got {code:?}"
            )))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LangCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for LangCode {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        LangCode::new(s)
    }
}

impl TryFrom<String> for LangCode {
    type Error = Error;

    fn try_from(s: String) -> crate::Result<Self> {
        LangCode::new(&s)
    }
}

impl From<LangCode> for String {
    fn from(l: LangCode) -> String {
        l.0
    }
}
