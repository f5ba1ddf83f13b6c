use std::fmt;
use std::str::FromStr;

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::spline::BrokenLine;

/// The discrete vector norm `‖·‖_p`, `1 ≤ p ≤ ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PNorm {
    One,
    Two,
    Infinity,
    /// `1 < p < ∞`, `p ≠ 2` is not enforced but [`PNorm::new`] normalizes it.
    General(f64),
}

impl PNorm {
    /// Canonical norm for exponent `p`.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Argument(format!("norm exponent must be >= 1, got {p}")));
        }
        Ok(if p == 1.0 {
            PNorm::One
        } else if p == 2.0 {
            PNorm::Two
        } else if p.is_infinite() {
            PNorm::Infinity
        } else {
            PNorm::General(p)
        })
    }

    pub fn exponent(&self) -> f64 {
        match *self {
            PNorm::One => 1.0,
            PNorm::Two => 2.0,
            PNorm::Infinity => f64::INFINITY,
            PNorm::General(p) => p,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, PNorm::Infinity)
    }

    /// `‖r‖_p` of a residual vector.
    pub fn norm(&self, r: &[f64]) -> f64 {
        match *self {
            PNorm::One => r.iter().map(|x| x.abs()).sum(),
            PNorm::Two => r.iter().map(|x| x * x).sum::<f64>().sqrt(),
            PNorm::Infinity => max_abs(r),
            PNorm::General(p) => {
                // factor out the maximum so |r_j|^p never overflows
                let m = max_abs(r);
                if m == 0.0 {
                    return 0.0;
                }
                m * r.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }
}

fn max_abs(r: &[f64]) -> f64 {
    r.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PNorm::One => write!(f, "1"),
            PNorm::Two => write!(f, "2"),
            PNorm::Infinity => write!(f, "inf"),
            PNorm::General(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(PNorm::Infinity);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| Error::Argument(format!("cannot parse norm exponent {s:?}")))?;
        PNorm::new(p)
    }
}

/// Residuals `f_j − s(x_j)`.
pub fn residuals(data: &DataSet, s: &BrokenLine) -> Result<Vec<f64>> {
    let values = s.values_at(data)?;
    Ok(data.fs().iter().zip(values).map(|(f, v)| f - v).collect())
}

/// The discrete approximation error `‖F − s(X)‖_p`.
pub fn error_norm(data: &DataSet, s: &BrokenLine, p: PNorm) -> Result<f64> {
    Ok(p.norm(&residuals(data, s)?))
}
