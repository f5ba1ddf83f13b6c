use crate::data::DataSet;
use crate::error::{Error, Result};

/// A straight line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    /// The line through two points with distinct abscissae.
    pub fn through(p: (f64, f64), q: (f64, f64)) -> Self {
        let slope = (q.1 - p.1) / (q.0 - p.0);
        Self {
            slope,
            intercept: p.1 - slope * p.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// One vertex `(t, v)` of a broken line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub t: f64,
    pub v: f64,
}

impl Breakpoint {
    pub fn new(t: f64, v: f64) -> Self {
        Self { t, v }
    }
}

impl From<(f64, f64)> for Breakpoint {
    fn from((t, v): (f64, f64)) -> Self {
        Self { t, v }
    }
}

/// A continuous piecewise-linear function on `[a, b]`, stored by its vertices.
///
/// The first and last breakpoints sit at `a` and `b`; every interior breakpoint
/// is a (candidate) knot. Continuity holds by construction since each vertex
/// carries a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct BrokenLine {
    breakpoints: Vec<Breakpoint>,
}

impl BrokenLine {
    pub fn new(breakpoints: Vec<Breakpoint>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Argument(format!(
                "a broken line needs at least 2 breakpoints, got {}",
                breakpoints.len()
            )));
        }
        if let Some(i) = breakpoints
            .iter()
            .position(|b| !b.t.is_finite() || !b.v.is_finite())
        {
            return Err(Error::Argument(format!("breakpoint {i} is not finite")));
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[0].t >= w[1].t) {
            return Err(Error::Argument(format!(
                "breakpoint abscissae must be strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { breakpoints })
    }

    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        Self::new(points.iter().copied().map(Breakpoint::from).collect())
    }

    /// The broken line through every data point.
    pub fn interpolating(data: &DataSet) -> Self {
        Self {
            breakpoints: data.points().map(Breakpoint::from).collect(),
        }
    }

    /// The constant function `value` on `[a, b]`.
    pub fn constant(a: f64, b: f64, value: f64) -> Result<Self> {
        Self::new(vec![Breakpoint::new(a, value), Breakpoint::new(b, value)])
    }

    /// Callers guarantee the invariants.
    pub(crate) fn from_breakpoints_unchecked(breakpoints: Vec<Breakpoint>) -> Self {
        debug_assert!(breakpoints.len() >= 2);
        debug_assert!(breakpoints.windows(2).all(|w| w[0].t < w[1].t));
        Self { breakpoints }
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn into_breakpoints(self) -> Vec<Breakpoint> {
        self.breakpoints
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0].t
    }

    pub fn end(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].t
    }

    /// Interior breakpoints.
    pub fn knots(&self) -> &[Breakpoint] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn knot_count(&self) -> usize {
        self.breakpoints.len() - 2
    }

    /// Membership in `S^1_k[a, b]`.
    pub fn in_space(&self, k: usize) -> bool {
        self.knot_count() <= k
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(self.start() <= x && x <= self.end()) {
            return Err(Error::Domain(format!(
                "x = {x} lies outside [{}, {}]",
                self.start(),
                self.end()
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Linear interpolation, extrapolating the end pieces outside `[a, b]`.
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        let i = bp.partition_point(|b| b.t < x);
        if i < bp.len() && bp[i].t == x {
            return bp[i].v;
        }
        let seg = i.clamp(1, bp.len() - 1) - 1;
        let (l, r) = (bp[seg], bp[seg + 1]);
        l.v + (r.v - l.v) * ((x - l.t) / (r.t - l.t))
    }

    /// Slope of each piece, left to right.
    pub fn slopes(&self) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .map(|w| (w[1].v - w[0].v) / (w[1].t - w[0].t))
            .collect()
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.slopes().into_iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Default properness tolerance `1e-9 · (1 + max |slope|)`.
    pub fn default_slope_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.max_abs_slope())
    }

    /// Values at every abscissa of `data`.
    pub fn values_at(&self, data: &DataSet) -> Result<Vec<f64>> {
        self.check_domain(data)?;
        Ok(data.xs().iter().map(|&x| self.eval_unchecked(x)).collect())
    }

    pub fn check_domain(&self, data: &DataSet) -> Result<()> {
        if self.start() != data.a() || self.end() != data.b() {
            return Err(Error::Domain(format!(
                "spline spans [{}, {}] but data spans [{}, {}]",
                self.start(),
                self.end(),
                data.a(),
                data.b()
            )));
        }
        Ok(())
    }

    /// The line carrying piece `i` (between breakpoints `i` and `i + 1`).
    pub fn piece_line(&self, i: usize) -> Line {
        let (l, r) = (self.breakpoints[i], self.breakpoints[i + 1]);
        Line::through((l.t, l.v), (r.t, r.v))
    }

    /// Drops interior breakpoints whose adjacent slopes differ by at most `tau_slope`.
    pub fn without_improper_knots(&self, tau_slope: f64) -> Self {
        let mut kept: Vec<Breakpoint> = Vec::with_capacity(self.breakpoints.len());
        kept.push(self.breakpoints[0]);
        for (i, &bp) in self.breakpoints.iter().enumerate().skip(1) {
            if i + 1 == self.breakpoints.len() {
                kept.push(bp);
                break;
            }
            let prev = kept[kept.len() - 1];
            let next = self.breakpoints[i + 1];
            let left = (bp.v - prev.v) / (bp.t - prev.t);
            let right = (next.v - bp.v) / (next.t - bp.t);
            if (left - right).abs() > tau_slope {
                kept.push(bp);
            }
        }
        Self { breakpoints: kept }
    }

    /// Mirror image `x ↦ −s(x)`.
    #[cfg(test)]
    pub(crate) fn reflected(&self) -> Self {
        Self {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|b| Breakpoint::new(b.t, -b.v))
                .collect(),
        }
    }
}
