use crate::data::DataSet;
use crate::error::Result;
use crate::spline::BrokenLine;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Properness {
    /// The slope jumps at the knot.
    Proper,
    /// Equal slopes on both sides; the knot can be dropped.
    Improper,
}

/// Where a knot sits relative to the data abscissae.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// `t == x_q` bitwise, `1 ≤ q ≤ μ`.
    Data(usize),
    /// `x_q < t < x_{q+1}`, `0 ≤ q ≤ μ`.
    Interior(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnotLabel {
    pub t: f64,
    pub properness: Properness,
    pub position: Position,
    /// `t ∈ (x_0, x_1) ∪ (x_μ, x_{μ+1})`.
    pub boundary: bool,
}

impl KnotLabel {
    pub fn is_proper(&self) -> bool {
        self.properness == Properness::Proper
    }

    pub fn is_interior(&self) -> bool {
        matches!(self.position, Position::Interior(_))
    }

    pub fn data_index(&self) -> Option<usize> {
        match self.position {
            Position::Data(q) => Some(q),
            Position::Interior(_) => None,
        }
    }

    pub fn gap(&self) -> Option<usize> {
        match self.position {
            Position::Interior(q) => Some(q),
            Position::Data(_) => None,
        }
    }
}

/// Labels every interior breakpoint of `s` by properness and position.
///
/// A knot is proper when its left and right slopes differ by more than `tau_slope`.
pub fn classify_knots(s: &BrokenLine, data: &DataSet, tau_slope: f64) -> Result<Vec<KnotLabel>> {
    s.check_domain(data)?;
    let slopes = s.slopes();
    let mu = data.mu();
    Ok(s.knots()
        .iter()
        .enumerate()
        .map(|(i, bp)| {
            let properness = if (slopes[i + 1] - slopes[i]).abs() > tau_slope {
                Properness::Proper
            } else {
                Properness::Improper
            };
            let position = match data.index_of(bp.t) {
                Some(q) => Position::Data(q),
                None => Position::Interior(data.gap_of(bp.t).expect("interior breakpoint")),
            };
            let boundary = matches!(position, Position::Interior(q) if q == 0 || q == mu);
            KnotLabel {
                t: bp.t,
                properness,
                position,
                boundary,
            }
        })
        .collect())
}
