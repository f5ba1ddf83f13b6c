use crate::error::{Error, Result};

/// Discrete approximation target: strictly increasing abscissae `x_0 < … < x_{μ+1}`
/// with one finite value per abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl DataSet {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() {
            return Err(Error::InvalidData(format!(
                "{} abscissae but {} values",
                xs.len(),
                fs.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidData(format!(
                "need at least 2 data points, got {}",
                xs.len()
            )));
        }
        if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidData(format!("abscissa {i} is not finite")));
        }
        if let Some(i) = fs.iter().position(|f| !f.is_finite()) {
            return Err(Error::InvalidData(format!("value {i} is not finite")));
        }
        if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidData(format!(
                "abscissae must be strictly increasing: x[{}] = {} >= x[{}] = {}",
                i,
                xs[i],
                i + 1,
                xs[i + 1]
            )));
        }
        Ok(Self { xs, fs })
    }

    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            points.iter().map(|p| p.0).collect(),
            points.iter().map(|p| p.1).collect(),
        )
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of inner abscissae, `μ = len − 2`.
    pub fn mu(&self) -> usize {
        self.xs.len() - 2
    }

    pub fn a(&self) -> f64 {
        self.xs[0]
    }

    pub fn b(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xs[i]
    }

    pub fn f(&self, i: usize) -> f64 {
        self.fs[i]
    }

    /// Largest absolute value, used to scale tolerances.
    pub fn value_scale(&self) -> f64 {
        self.fs.iter().fold(0.0_f64, |m, f| m.max(f.abs()))
    }

    /// `max f − min f`.
    pub fn value_range(&self) -> f64 {
        let (lo, hi) = self
            .fs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| {
                (lo.min(f), hi.max(f))
            });
        hi - lo
    }

    /// Index `q` with `x_q < t < x_{q+1}`, or `None` when `t` is an abscissa or outside `(a, b)`.
    pub fn gap_of(&self, t: f64) -> Option<usize> {
        if t <= self.a() || t >= self.b() {
            return None;
        }
        let q = self.xs.partition_point(|&x| x < t);
        // xs[q] >= t > xs[q-1]
        if self.xs[q] == t {
            None
        } else {
            Some(q - 1)
        }
    }

    /// Index `q` with `x_q == t` bitwise.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let q = self.xs.partition_point(|&x| x < t);
        (q < self.xs.len() && self.xs[q] == t).then_some(q)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.fs.iter().copied())
    }
}
