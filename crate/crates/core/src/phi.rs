//! Built-in families of initial functions on `[-1, 0]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::HistoryFunction;

/// An initial function from one of the supported families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    /// `phi(s) = value`.
    Constant { value: f64 },
    /// `phi(s) = scale (cos(a s^b) + 1)`.
    Cosine { scale: f64, a: f64, b: f64 },
}

impl PhiSpec {
    pub fn constant(value: f64) -> Result<Self> {
        let family = Self::Constant { value };
        family.validate()?;
        Ok(family)
    }

    pub fn cosine(scale: f64, a: f64, b: f64) -> Result<Self> {
        let family = Self::Cosine { scale, a, b };
        family.validate()?;
        Ok(family)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { value } if !value.is_finite() => {
                Err(invalid(format!("constant value must be finite, got {value}")))
            }
            Self::Cosine { scale, a, b } if ![scale, a, b].iter().all(|v| v.is_finite()) => {
                Err(invalid("cosine parameters must be finite"))
            }
            Self::Cosine { b, .. } if b.fract() != 0.0 && b <= 0.0 => {
                Err(invalid(format!("non-integer exponent must be positive, got {b}")))
            }
            _ => Ok(()),
        }
    }

    /// Value at `s` in `[-1, 0]`. Non-integer exponents act on `|s|`.
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Self::Constant { value } => value,
            Self::Cosine { scale, a, b } => {
                let arg = if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
                    s.powi(b as i32)
                } else {
                    s.abs().powf(b)
                };
                scale * ((a * arg).cos() + 1.0)
            }
        }
    }

    /// Samples on the uniform grid with `n` intervals.
    pub fn to_history(&self, n: usize) -> Result<HistoryFunction> {
        self.validate()?;
        HistoryFunction::from_fn(n, |s| self.eval(s))
    }

    /// The three initial functions used for the transient gallery.
    pub fn gallery_defaults() -> [PhiSpec; 3] {
        [
            Self::Cosine { scale: 0.005, a: 10.0, b: 1.0 },
            Self::Cosine { scale: 0.005, a: 20.0, b: 1.0 },
            Self::Cosine { scale: 0.005, a: 10.0, b: 4.0 },
        ]
    }

    /// Short file-name friendly label.
    pub fn label(&self) -> String {
        match *self {
            Self::Constant { value } => format!("const_{value}"),
            Self::Cosine { scale, a, b } => format!("cos_s{scale}_a{a}_b{b}"),
        }
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Constant { value } => write!(f, "{value}"),
            Self::Cosine { scale, a, b } => write!(f, "{scale}*(cos({a}*t^{b})+1)"),
        }
    }
}
