use std::fmt;

use serde::Serialize;

/// Whether a claim is about membership values or only about supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Membership,
    Support,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Membership => "membership",
            Level::Support => "support",
        })
    }
}
