use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error};

/// Scalar field of the Hilbert space: real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl FieldTag {
    /// `dim_R(K) / 2`: 1/2 for the reals, 1 for the complex numbers.
    pub fn m_field(self) -> f64 {
        match self {
            FieldTag::Real => 0.5,
            FieldTag::Complex => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FieldTag::Real => "R",
            FieldTag::Complex => "C",
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "R" | "r" | "real" => Ok(FieldTag::Real),
            "C" | "c" | "complex" => Ok(FieldTag::Complex),
            other => Err(invalid(format!("unknown field `{other}` (expected R or C)"))),
        }
    }
}
