//! Scalar types, quadrature and exact-arithmetic building blocks.

pub mod dd;
pub mod exact;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod quad;

pub use dd::Dd;
pub use field::{Cx, Field};

/// Working precision for moment and determinant paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
    Exact,
}

impl std::str::FromStr for Precision {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            "exact" => Ok(Precision::Exact),
            other => Err(crate::Error::Parse(format!(
                "unknown precision tier '{other}' (expected double, extended or exact)"
            ))),
        }
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
            Precision::Exact => "exact",
        })
    }
}
