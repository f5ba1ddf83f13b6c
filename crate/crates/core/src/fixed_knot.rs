//! Best approximation over broken lines with a fixed knot vector.
//!
//! Unknowns are the values at the chain breakpoints (hat-function coordinates):
//! each datum contributes one row holding the two interpolation weights of the
//! piece that covers it. L2 reduces to a tridiagonal normal system, L1 and L∞ to
//! small linear programs, and other exponents to a damped Newton iteration.

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::norms::PNorm;
use crate::simplex::{LinearProgram, LpError, RowKind};
use crate::spline::{Breakpoint, BrokenLine};

pub use crate::spline::Line;

/// A contiguous data block `start..=end` fitted by one continuous broken line
/// whose interior breakpoints are `knots`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainProblem {
    pub start: usize,
    pub end: usize,
    /// Strictly increasing, strictly inside `(x_start, x_end)`.
    pub knots: Vec<f64>,
}

impl ChainProblem {
    pub fn new(start: usize, end: usize, knots: Vec<f64>) -> Self {
        Self { start, end, knots }
    }

    /// The chain covering every datum.
    pub fn whole(data: &DataSet, knots: Vec<f64>) -> Self {
        Self::new(0, data.len() - 1, knots)
    }

    /// Breakpoint abscissae: the block ends with the knots in between.
    pub fn nodes(&self, data: &DataSet) -> Vec<f64> {
        let mut nodes = Vec::with_capacity(self.knots.len() + 2);
        nodes.push(data.x(self.start));
        nodes.extend_from_slice(&self.knots);
        nodes.push(data.x(self.end));
        nodes
    }

    fn validate(&self, data: &DataSet) -> Result<()> {
        if self.end >= data.len() || self.start >= self.end {
            return Err(Error::Argument(format!(
                "chain block {}..={} is not a range of at least two of the {} data indices",
                self.start,
                self.end,
                data.len()
            )));
        }
        let (lo, hi) = (data.x(self.start), data.x(self.end));
        let mut prev = lo;
        for &t in &self.knots {
            if !t.is_finite() || t <= prev || t >= hi {
                return Err(Error::Argument(format!(
                    "chain knots must increase strictly inside ({lo}, {hi}); offending knot {t}"
                )));
            }
            prev = t;
        }
        Ok(())
    }
}

/// Optimal broken line of a chain together with the p-norm of its residuals on the block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainFit {
    pub spline: BrokenLine,
    pub error: f64,
}

/// Best line for the points `(xs[j], fs[j])` under `p`.
pub fn fit_line(xs: &[f64], fs: &[f64], p: PNorm) -> Result<(Line, f64)> {
    if xs.len() != fs.len() {
        return Err(Error::Argument(format!(
            "{} abscissae but {} values",
            xs.len(),
            fs.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::Argument("a line fit needs at least one point".into()));
    }
    if xs.iter().chain(fs).any(|v| !v.is_finite()) {
        return Err(Error::Argument("line fit input must be finite".into()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(
            "line fit abscissae must be strictly increasing".into(),
        ));
    }
    if xs.len() == 1 {
        return Ok((Line::new(0.0, fs[0]), 0.0));
    }

    let line = match p {
        PNorm::Two => least_squares_line(xs, fs),
        _ => {
            let n = xs.len();
            let mut design = HatDesign::default();
            design.push_block(xs, fs, &[xs[0], xs[n - 1]])?;
            let c = design.solve(p, &[])?;
            Line::through((xs[0], c[0]), (xs[n - 1], c[1]))
        }
    };
    let r: Vec<f64> = xs.iter().zip(fs).map(|(&x, &f)| f - line.eval(x)).collect();
    Ok((line, p.norm(&r)))
}

fn least_squares_line(xs: &[f64], fs: &[f64]) -> Line {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let fm = fs.iter().sum::<f64>() / n;
    let (mut sxx, mut sxf) = (0.0, 0.0);
    for (&x, &f) in xs.iter().zip(fs) {
        sxx += (x - xm) * (x - xm);
        sxf += (x - xm) * (f - fm);
    }
    let slope = sxf / sxx;
    Line::new(slope, fm - slope * xm)
}

/// Best continuous broken line on the chain's block with exactly the given knots.
pub fn fit_chain(data: &DataSet, chain: &ChainProblem, p: PNorm) -> Result<ChainFit> {
    chain.validate(data)?;
    let xs = &data.xs()[chain.start..=chain.end];
    let fs = &data.fs()[chain.start..=chain.end];

    if chain.knots.is_empty() {
        let (line, error) = fit_line(xs, fs, p)?;
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        let spline = BrokenLine::from_breakpoints_unchecked(vec![
            Breakpoint::new(lo, line.eval(lo)),
            Breakpoint::new(hi, line.eval(hi)),
        ]);
        return Ok(ChainFit { spline, error });
    }

    let nodes = chain.nodes(data);
    let mut design = HatDesign::default();
    design.push_block(xs, fs, &nodes)?;
    let c = design.solve(p, &[])?;
    let spline = BrokenLine::from_breakpoints_unchecked(
        nodes.iter().zip(&c).map(|(&t, &v)| Breakpoint::new(t, v)).collect(),
    );
    let r: Vec<f64> = xs
        .iter()
        .zip(fs)
        .map(|(&x, &f)| f - spline.eval_unchecked(x))
        .collect();
    Ok(ChainFit {
        error: p.norm(&r),
        spline,
    })
}

/// One datum in hat coordinates: its fitted value is `(1 − w)·c[col] + w·c[col + 1]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HatRow {
    pub col: usize,
    pub w: f64,
}

impl HatRow {
    fn value(&self, c: &[f64]) -> f64 {
        (1.0 - self.w) * c[self.col] + self.w * c[self.col + 1]
    }
}

/// Several independent chains stacked into one design; columns of different
/// blocks never share a row, so the normal matrix stays block tridiagonal.
#[derive(Debug, Clone, Default)]
pub(crate) struct HatDesign {
    pub cols: usize,
    pub rows: Vec<HatRow>,
    pub fs: Vec<f64>,
}

/// A linear form `Σ coeff · c[col]` constrained to be nonnegative.
pub(crate) type SignConstraint = Vec<(usize, f64)>;

impl HatDesign {
    /// Appends a block whose breakpoints are `nodes` (first and last equal to the
    /// block ends); returns the index of its first column.
    pub fn push_block(&mut self, xs: &[f64], fs: &[f64], nodes: &[f64]) -> Result<usize> {
        debug_assert!(nodes.len() >= 2 && xs[0] == nodes[0] && xs[xs.len() - 1] == nodes[nodes.len() - 1]);
        check_rank(xs, nodes)?;
        let offset = self.cols;
        let mut piece = 0;
        for (&x, &f) in xs.iter().zip(fs) {
            while piece + 2 < nodes.len() && x >= nodes[piece + 1] {
                piece += 1;
            }
            let (l, r) = (nodes[piece], nodes[piece + 1]);
            let w = if x == l { 0.0 } else if x == r { 1.0 } else { (x - l) / (r - l) };
            self.rows.push(HatRow {
                col: offset + piece,
                w,
            });
            self.fs.push(f);
        }
        self.cols += nodes.len();
        Ok(offset)
    }

    pub fn residuals(&self, c: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.fs)
            .map(|(r, &f)| f - r.value(c))
            .collect()
    }

    /// Optimal coefficients; `constraints` are only supported for p ∈ {1, ∞}.
    pub fn solve(&self, p: PNorm, constraints: &[SignConstraint]) -> Result<Vec<f64>> {
        match p {
            PNorm::One | PNorm::Infinity => self.solve_lp(p, constraints),
            _ if !constraints.is_empty() => Err(Error::Argument(
                "sign constraints need p = 1 or p = inf".into(),
            )),
            PNorm::Two => self.solve_l2(),
            PNorm::General(e) => self.solve_newton(e),
        }
    }

    fn solve_l2(&self) -> Result<Vec<f64>> {
        let n = self.cols;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for r in &self.rows {
            let (a, b) = (1.0 - r.w, r.w);
            diag[r.col] += a * a;
            diag[r.col + 1] += b * b;
            off[r.col] += a * b;
        }
        let factor = TridiagonalFactor::new(&diag, &off)?;
        let mut c = factor.solve(self.gradient_rhs(&self.fs));
        // one step of iterative refinement against the true residual
        let delta = factor.solve(self.gradient_rhs(&self.residuals(&c)));
        for (ci, di) in c.iter_mut().zip(delta) {
            *ci += di;
        }
        Ok(c)
    }

    /// `Aᵀ v`.
    fn gradient_rhs(&self, v: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.cols];
        for (r, &vi) in self.rows.iter().zip(v) {
            g[r.col] += (1.0 - r.w) * vi;
            g[r.col + 1] += r.w * vi;
        }
        g
    }

    /// L1 and L∞ as linear programs in normalized units: the data are centred
    /// and scaled to `[-1, 1]`, which the partition of unity of the hat basis
    /// turns into the same affine map on the coefficients.
    fn solve_lp(&self, p: PNorm, constraints: &[SignConstraint]) -> Result<Vec<f64>> {
        let (lo, hi) = self
            .fs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| (lo.min(f), hi.max(f)));
        let center = 0.5 * (lo + hi);
        let scale = self.fs.iter().fold(0.0_f64, |m, &f| m.max((f - center).abs()));
        if scale == 0.0 {
            return Ok(vec![center; self.cols]);
        }
        let fs: Vec<f64> = self.fs.iter().map(|&f| (f - center) / scale).collect();
        let m = self.cols;
        let n = self.rows.len();

        let lp = match p {
            PNorm::Infinity => {
                // unknowns: c (free), e (free) with ε = e + 1 so every rhs is nonnegative
                let mut cost = vec![0.0; m + 1];
                cost[m] = 1.0;
                let mut lp = LinearProgram::new(cost, vec![true; m + 1]);
                for (r, &f) in self.rows.iter().zip(&fs) {
                    let mut up = vec![0.0; m + 1];
                    up[r.col] = 1.0 - r.w;
                    up[r.col + 1] += r.w;
                    up[m] = -1.0;
                    let mut down: Vec<f64> = up.iter().map(|v| -v).collect();
                    down[m] = -1.0;
                    lp.add_row(up, RowKind::Le, f + 1.0);
                    lp.add_row(down, RowKind::Le, 1.0 - f);
                }
                add_sign_rows(&mut lp, constraints, m + 1);
                lp
            }
            PNorm::One => {
                // unknowns: c (free), then u_j, v_j >= 0 with A c + u − v = f
                let width = m + 2 * n;
                let mut cost = vec![1.0; width];
                cost[..m].iter_mut().for_each(|c| *c = 0.0);
                let mut free = vec![false; width];
                free[..m].iter_mut().for_each(|f| *f = true);
                let mut lp = LinearProgram::new(cost, free);
                for (j, (r, &f)) in self.rows.iter().zip(&fs).enumerate() {
                    let mut row = vec![0.0; width];
                    row[r.col] = 1.0 - r.w;
                    row[r.col + 1] += r.w;
                    row[m + 2 * j] = 1.0;
                    row[m + 2 * j + 1] = -1.0;
                    lp.add_row(row, RowKind::Eq, f);
                }
                add_sign_rows(&mut lp, constraints, width);
                lp
            }
            _ => unreachable!("only p = 1 and p = inf are linear programs"),
        };

        let z = lp.solve().map_err(|e| match e {
            LpError::Infeasible => {
                Error::Configuration("sign constraints admit no broken line".into())
            }
            LpError::Unbounded | LpError::IterationLimit => {
                Error::Configuration(format!("linear program failed: {e:?}"))
            }
        })?;
        Ok(z[..m].iter().map(|&c| center + scale * c).collect())
    }

    /// Damped Newton from the least-squares start, in units of the initial
    /// residual so the gradient tolerance is scale free. Exponents below 2 are
    /// smoothed as `(r² + μ²)^{p/2}` with `μ` driven down to 1e-12.
    fn solve_newton(&self, p: f64) -> Result<Vec<f64>> {
        let c0 = self.solve_l2()?;
        let r0 = self.residuals(&c0);
        let scale = r0.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        if scale == 0.0 {
            return Ok(c0);
        }
        let r0: Vec<f64> = r0.iter().map(|r| r / scale).collect();
        let smoothing: Vec<f64> = if p >= 2.0 {
            vec![0.0]
        } else {
            (1..=12).map(|k| 10f64.powi(-k)).collect()
        };

        let mut delta = vec![0.0; self.cols];
        for mu in smoothing {
            let phi = Smoothed { p, mu };
            self.newton_stage(&r0, &mut delta, phi)?;
        }
        Ok(c0.iter().zip(&delta).map(|(c, d)| c + scale * d).collect())
    }

    fn newton_stage(&self, r0: &[f64], delta: &mut [f64], phi: Smoothed) -> Result<()> {
        let objective = |d: &[f64]| -> f64 {
            self.rows
                .iter()
                .zip(r0)
                .map(|(row, &r)| phi.value(r - row.value(d)))
                .sum()
        };
        let mut current = objective(delta);
        for _ in 0..200 {
            let r: Vec<f64> = self.rows.iter().zip(r0).map(|(row, &r)| r - row.value(delta)).collect();
            let d1: Vec<f64> = r.iter().map(|&x| phi.first(x)).collect();
            // gradient of Φ(δ) = Σ φ(r0 − Aδ) is −Aᵀ φ'(r)
            let grad: Vec<f64> = self.gradient_rhs(&d1).iter().map(|g| -g).collect();
            if grad.iter().fold(0.0_f64, |m, g| m.max(g.abs())) <= 1e-10 {
                return Ok(());
            }
            let mut diag = vec![0.0; self.cols];
            let mut off = vec![0.0; self.cols.saturating_sub(1)];
            for (row, &x) in self.rows.iter().zip(&r) {
                let h = phi.second(x);
                let (a, b) = (1.0 - row.w, row.w);
                diag[row.col] += h * a * a;
                diag[row.col + 1] += h * b * b;
                off[row.col] += h * a * b;
            }
            let ridge = 1e-12 * diag.iter().fold(0.0_f64, |m, &d| m.max(d)) + 1e-300;
            diag.iter_mut().for_each(|d| *d += ridge);
            let step = match TridiagonalFactor::new(&diag, &off) {
                Ok(f) => f.solve(grad.iter().map(|g| -g).collect()),
                Err(_) => grad.iter().map(|g| -g).collect(),
            };
            let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let trial: Vec<f64> = delta.iter().zip(&step).map(|(d, s)| d + t * s).collect();
                let value = objective(&trial);
                if value <= current + 1e-4 * t * slope {
                    delta.copy_from_slice(&trial);
                    current = value;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // no representable decrease left
                return Ok(());
            }
        }
        Ok(())
    }
}

fn add_sign_rows(lp: &mut LinearProgram, constraints: &[SignConstraint], width: usize) {
    for form in constraints {
        let mut row = vec![0.0; width];
        for &(col, coeff) in form {
            row[col] -= coeff;
        }
        lp.add_row(row, RowKind::Le, 0.0);
    }
}

#[derive(Debug, Clone, Copy)]
struct Smoothed {
    p: f64,
    mu: f64,
}

impl Smoothed {
    fn value(&self, r: f64) -> f64 {
        if self.mu == 0.0 {
            r.abs().powf(self.p)
        } else {
            (r * r + self.mu * self.mu).powf(0.5 * self.p)
        }
    }

    fn first(&self, r: f64) -> f64 {
        if self.mu == 0.0 {
            self.p * r.abs().powf(self.p - 1.0) * r.signum()
        } else {
            self.p * r * (r * r + self.mu * self.mu).powf(0.5 * self.p - 1.0)
        }
    }

    fn second(&self, r: f64) -> f64 {
        if self.mu == 0.0 {
            self.p * (self.p - 1.0) * r.abs().powf(self.p - 2.0)
        } else {
            let s = r * r + self.mu * self.mu;
            self.p * s.powf(0.5 * self.p - 2.0) * ((self.p - 1.0) * r * r + self.mu * self.mu)
        }
    }
}

/// Every piece must hold a datum and the hat functions must admit a
/// Schoenberg–Whitney sequence of data, otherwise the basis is underdetermined.
fn check_rank(xs: &[f64], nodes: &[f64]) -> Result<()> {
    for w in nodes.windows(2) {
        if !xs.iter().any(|&x| w[0] <= x && x <= w[1]) {
            return Err(Error::Configuration(format!(
                "piece [{}, {}] contains no data abscissa",
                w[0], w[1]
            )));
        }
    }
    let m = nodes.len();
    let mut next = 0;
    for l in 0..m {
        let found = (next..xs.len()).find(|&i| {
            let x = xs[i];
            let left = if l == 0 { x >= nodes[0] } else { x > nodes[l - 1] };
            let right = if l + 1 == m { x <= nodes[m - 1] } else { x < nodes[l + 1] };
            left && right
        });
        match found {
            Some(i) => next = i + 1,
            None => {
                return Err(Error::Configuration(format!(
                    "the hat function at {} is not determined by the data",
                    nodes[l]
                )))
            }
        }
    }
    Ok(())
}

/// `LDLᵀ` factor of a symmetric tridiagonal matrix.
struct TridiagonalFactor {
    pivots: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagonalFactor {
    fn new(diag: &[f64], off: &[f64]) -> Result<Self> {
        let largest = diag.iter().fold(0.0_f64, |m, &d| m.max(d.abs()));
        let mut pivots = Vec::with_capacity(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            let p = if i == 0 {
                d
            } else {
                d - off[i - 1] * off[i - 1] / pivots[i - 1]
            };
            if p.is_nan() || p <= 1e-14 * largest {
                return Err(Error::Configuration(
                    "normal equations are singular".into(),
                ));
            }
            pivots.push(p);
        }
        Ok(Self {
            pivots,
            off: off.to_vec(),
        })
    }

    fn solve(&self, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for i in 1..n {
            b[i] -= self.off[i - 1] / self.pivots[i - 1] * b[i - 1];
        }
        for i in (0..n).rev() {
            let next = if i + 1 < n { self.off[i] * b[i + 1] } else { 0.0 };
            b[i] = (b[i] - next) / self.pivots[i];
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(points: &[(f64, f64)]) -> DataSet {
        DataSet::from_points(points).unwrap()
    }

    #[test]
    fn collinear_points_give_exact_line_for_every_norm() {
        let xs = [0.0, 1.0, 2.0];
        let fs = [0.0, 1.0, 2.0];
        for p in [PNorm::One, PNorm::Two, PNorm::Infinity, PNorm::General(3.0), PNorm::General(1.5)] {
            let (line, err) = fit_line(&xs, &fs, p).unwrap();
            assert!((line.slope - 1.0).abs() < 1e-9, "{p}: {line:?}");
            assert!(line.intercept.abs() < 1e-9, "{p}: {line:?}");
            assert!(err < 1e-9, "{p}: {err}");
        }
    }

    #[test]
    fn least_squares_line_on_three_points() {
        let (line, err) = fit_line(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0], PNorm::Two).unwrap();
        assert_eq!(line.slope, 0.0);
        assert!((line.intercept - 1.0 / 3.0).abs() < 1e-15);
        assert!((err - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_line_on_three_points() {
        let (line, err) = fit_line(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0], PNorm::Infinity).unwrap();
        assert!(line.slope.abs() < 1e-12);
        assert!((line.intercept - 0.5).abs() < 1e-12);
        assert!((err - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lad_line_passes_through_two_points() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let fs = [0.0, 2.0, 1.0, 3.0, 2.5];
        let (line, err) = fit_line(&xs, &fs, PNorm::One).unwrap();
        let hits = xs
            .iter()
            .zip(&fs)
            .filter(|(&x, &f)| (line.eval(x) - f).abs() < 1e-9)
            .count();
        assert!(hits >= 2);
        // no line through a pair of points does better
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let cand = Line::through((xs[i], fs[i]), (xs[j], fs[j]));
                let e: f64 = xs.iter().zip(&fs).map(|(&x, &f)| (f - cand.eval(x)).abs()).sum();
                assert!(err <= e + 1e-12);
            }
        }
    }

    #[test]
    fn single_point_line() {
        let (line, err) = fit_line(&[2.0], &[5.0], PNorm::Infinity).unwrap();
        assert_eq!(line, Line::new(0.0, 5.0));
        assert_eq!(err, 0.0);
        assert!(fit_line(&[], &[], PNorm::Two).is_err());
    }

    #[test]
    fn collinear_chain_is_interpolated() {
        let d = data(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        let fit = fit_chain(&d, &ChainProblem::whole(&d, vec![1.0]), PNorm::Two).unwrap();
        assert!(fit.error < 1e-14);
        assert_eq!(fit.spline.knots()[0].t, 1.0);
    }

    #[test]
    fn chain_without_knots_delegates_to_line() {
        let d = data(&[(0.0, 1.0), (1.0, 3.0), (2.0, 2.0), (4.0, 7.0)]);
        for p in [PNorm::One, PNorm::Two, PNorm::Infinity] {
            let fit = fit_chain(&d, &ChainProblem::whole(&d, vec![]), p).unwrap();
            let (line, err) = fit_line(d.xs(), d.fs(), p).unwrap();
            assert_eq!(fit.error, err);
            assert_eq!(fit.spline.breakpoints()[0].v, line.eval(0.0));
            assert_eq!(fit.spline.breakpoints()[1].v, line.eval(4.0));
        }
    }

    #[test]
    fn empty_piece_is_rejected() {
        let d = data(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]);
        let err = fit_chain(&d, &ChainProblem::whole(&d, vec![1.2, 1.7]), PNorm::Two).unwrap_err();
        assert!(matches!(err, Error::Configuration(_)));
    }

    #[test]
    fn underdetermined_hat_is_rejected() {
        // the hat at 0.5 has only x_0 in its support, which the first hat already uses
        let d = data(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        let err = fit_chain(&d, &ChainProblem::whole(&d, vec![0.5, 1.0]), PNorm::Two).unwrap_err();
        assert!(matches!(err, Error::Configuration(_)));
    }

    #[test]
    fn bad_chain_arguments() {
        let d = data(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        assert!(fit_chain(&d, &ChainProblem::new(1, 1, vec![]), PNorm::Two).is_err());
        assert!(fit_chain(&d, &ChainProblem::new(0, 3, vec![]), PNorm::Two).is_err());
        assert!(fit_chain(&d, &ChainProblem::whole(&d, vec![2.0]), PNorm::Two).is_err());
        assert!(fit_chain(&d, &ChainProblem::whole(&d, vec![1.5, 0.5]), PNorm::Two).is_err());
    }

    #[test]
    fn general_exponent_near_two_matches_least_squares() {
        let d = data(&[(0.0, 0.3), (1.0, 1.1), (2.0, 0.2), (3.0, 0.9), (4.0, -0.4)]);
        let chain = ChainProblem::whole(&d, vec![2.0]);
        let l2 = fit_chain(&d, &chain, PNorm::Two).unwrap();
        let near = fit_chain(&d, &chain, PNorm::General(2.000001)).unwrap();
        for (a, b) in l2.spline.breakpoints().iter().zip(near.spline.breakpoints()) {
            assert!((a.v - b.v).abs() < 1e-5);
        }
    }

    #[test]
    fn general_exponent_is_a_local_minimum() {
        let d = data(&[(0.0, 0.3), (1.0, 1.1), (2.0, 0.2), (3.0, 0.9), (4.0, -0.4), (5.0, 0.1)]);
        let chain = ChainProblem::whole(&d, vec![2.0, 3.0]);
        for e in [1.3, 3.0, 7.0] {
            let p = PNorm::General(e);
            let fit = fit_chain(&d, &chain, p).unwrap();
            let base = fit.spline.breakpoints().to_vec();
            for i in 0..base.len() {
                for delta in [-1e-4, 1e-4] {
                    let mut moved = base.clone();
                    moved[i].v += delta;
                    let s = BrokenLine::new(moved).unwrap();
                    let e2 = crate::norms::error_norm(&d, &s, p).unwrap();
                    assert!(e2 >= fit.error - 1e-12, "p = {e}, node {i}");
                }
            }
        }
    }

    #[test]
    fn lp_sign_constraint_is_honoured() {
        // two independent blocks; force c[1] - c[2] >= 0
        let mut design = HatDesign::default();
        design.push_block(&[0.0, 1.0], &[0.0, 0.0], &[0.0, 1.0]).unwrap();
        design.push_block(&[2.0, 3.0], &[1.0, 1.0], &[2.0, 3.0]).unwrap();
        for p in [PNorm::One, PNorm::Infinity] {
            let free = design.solve(p, &[]).unwrap();
            assert!(free[1] < free[2]);
            let c = design.solve(p, &[vec![(1, 1.0), (2, -1.0)]]).unwrap();
            assert!(c[1] - c[2] >= -1e-12, "{p}: {c:?}");
        }
        assert!(design.solve(PNorm::Two, &[vec![(1, 1.0)]]).is_err());
    }

    #[test]
    fn tridiagonal_solver_matches_dense_answer() {
        // [[4,1,0],[1,4,1],[0,1,4]] x = [5,6,5] has x = [1,1,1]
        let f = TridiagonalFactor::new(&[4.0, 4.0, 4.0], &[1.0, 1.0]).unwrap();
        let x = f.solve(vec![5.0, 6.0, 5.0]);
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
        assert!(TridiagonalFactor::new(&[1.0, 1.0], &[1.0]).is_err());
    }
}
