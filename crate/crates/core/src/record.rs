//! The JSON record schema shared by the CLI and the result cache.

use serde::{Deserialize, Serialize};

use crate::family::FamilySpec;

/// Which route produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Walk,
    Oracle,
    Formula,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Walk => "walk",
            Method::Oracle => "oracle",
            Method::Formula => "formula",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "walk" => Ok(Method::Walk),
            "oracle" => Ok(Method::Oracle),
            "formula" => Ok(Method::Formula),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// One computation result: exact rational fields as `"p/q"` strings, the
/// configuration sorted ascending. Append-only in the cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub family: FamilySpec,
    pub config: Vec<String>,
    pub method: Method,
    pub value: String,
    pub ratio: String,
    pub wall_time_ms: u64,
}
