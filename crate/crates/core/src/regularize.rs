//! Slope regularization of a broken line that keeps its values at the data.
//!
//! The sweep visits `[x_{q-1}, x_q]` left to right. After step `q` the slopes on
//! `[x_0, x_q]` are bounded by the largest divided difference of the spline's
//! own values at the data; every modification replaces the spline between data
//! abscissae by lines through points it already passes through, so the values at
//! the data never move.

use crate::data::DataSet;
use crate::error::Result;
use crate::spline::{Breakpoint, BrokenLine, Line};

/// Value and slope bounds of a broken line relative to a data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationBounds {
    /// `max_j |s(x_j)|`.
    pub m_prime: f64,
    /// Largest absolute divided difference of `s` over consecutive abscissae.
    pub m_second: f64,
    /// `m_prime + (b − a) · m_second`, a bound on `|s|` once slopes obey `m_second`.
    pub m_fourth: f64,
    /// `max(m_second, m_fourth)`.
    pub m: f64,
}

pub fn divided_difference_bound(data: &DataSet, s: &BrokenLine) -> Result<RegularizationBounds> {
    let vals = s.values_at(data)?;
    let xs = data.xs();
    let m_prime = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let m_second = (1..xs.len()).fold(0.0_f64, |m, q| {
        m.max(((vals[q] - vals[q - 1]) / (xs[q] - xs[q - 1])).abs())
    });
    let m_fourth = m_prime + (data.b() - data.a()) * m_second;
    Ok(RegularizationBounds {
        m_prime,
        m_second,
        m_fourth,
        m: m_second.max(m_fourth),
    })
}

/// The branch taken on one interval of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// First interval holds a knot: replaced by its chord.
    FirstInterval,
    /// No knot inside the interval.
    Straight,
    /// Two or more knots inside: chord.
    SeveralKnots,
    /// One knot inside and an end of the interval is a knot as well: chord.
    NeighborKnot,
    /// The single knot lies on the chord.
    OnChord,
    /// The spline comes back to the chord within the next interval; the chord
    /// is extended up to that point.
    ReturnsToChord,
    /// The spline is cut back to the line through `x_q` and `x_{q+1}`, starting
    /// where that line meets the spline left of the knot.
    CutBack,
    /// The next interval continues the tangent at `x_q`; nothing to do.
    TangentContinues,
    /// Chord up to its crossing with the extension of the last piece of the
    /// next interval.
    Bridge,
    /// No knot ahead: the single knot's slopes are already bounded.
    SingleKnotKept,
    /// Several knots ahead: chords on both intervals.
    TwoChords,
    /// Last interval: the knot moves onto `x_{q-1}`.
    LastInterval,
}

/// A sweep step: the right end index `q`, the branch, and whether it ran on the
/// mirrored spline (knot above the chord).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub q: usize,
    pub step: Step,
    pub mirrored: bool,
}

/// Rebuilds `s` so that its values at the data are kept, its slopes are bounded
/// by `divided_difference_bound(data, s).m_second`, and its knot count does not grow.
pub fn regularize(data: &DataSet, s: &BrokenLine) -> Result<BrokenLine> {
    regularize_traced(data, s).map(|(s, _)| s)
}

/// [`regularize`] together with the branch taken on every interval.
pub fn regularize_traced(data: &DataSet, s: &BrokenLine) -> Result<(BrokenLine, Vec<TraceEntry>)> {
    let vals = s.values_at(data)?;
    let tau = s.default_slope_tolerance();
    let mut sweep = Sweep {
        bp: s.without_improper_knots(tau).into_breakpoints(),
        xs: data.xs().to_vec(),
        vals,
        tau,
        trace: Vec::new(),
    };
    sweep.run();
    sweep.normalize();
    Ok((BrokenLine::from_breakpoints_unchecked(sweep.bp), sweep.trace))
}

struct Sweep {
    bp: Vec<Breakpoint>,
    xs: Vec<f64>,
    /// Values of the input at the data, pinned for every inserted breakpoint.
    vals: Vec<f64>,
    tau: f64,
    trace: Vec<TraceEntry>,
}

fn coincidence_tol(a: f64, b: f64) -> f64 {
    1e-12 * (1.0 + a.abs().max(b.abs()))
}

impl Sweep {
    fn run(&mut self) {
        let last = self.xs.len() - 1;
        if self.knots_in(self.xs[0], self.xs[1]).is_empty() {
            self.record(1, Step::Straight, false);
        } else {
            self.chord(1);
            self.record(1, Step::FirstInterval, false);
        }
        for q in 2..=last {
            self.step(q);
        }
    }

    fn record(&mut self, q: usize, step: Step, mirrored: bool) {
        self.trace.push(TraceEntry { q, step, mirrored });
    }

    fn eval(&self, x: f64) -> f64 {
        BrokenLine::from_breakpoints_unchecked(self.bp.clone()).eval_unchecked(x)
    }

    /// Interior breakpoints in the open interval `(lo, hi)`.
    fn knots_in(&self, lo: f64, hi: f64) -> Vec<Breakpoint> {
        self.interior().filter(|b| lo < b.t && b.t < hi).collect()
    }

    fn interior(&self) -> impl Iterator<Item = Breakpoint> + '_ {
        self.bp[1..self.bp.len() - 1].iter().copied()
    }

    fn is_knot(&self, x: f64) -> bool {
        self.interior().any(|b| b.t == x)
    }

    /// Drops breakpoints whose adjacent slopes agree within the properness tolerance.
    fn normalize(&mut self) {
        let s = BrokenLine::from_breakpoints_unchecked(std::mem::take(&mut self.bp));
        self.bp = s.without_improper_knots(self.tau).into_breakpoints();
    }

    /// Replaces the spline on `[pts[0].t, pts.last().t]` by the polygon through `pts`.
    fn replace(&mut self, pts: &[Breakpoint]) {
        let (lo, hi) = (pts[0].t, pts[pts.len() - 1].t);
        let from = self.bp.partition_point(|b| b.t < lo);
        let to = self.bp.partition_point(|b| b.t <= hi);
        self.bp.splice(from..to, pts.iter().copied());
        self.normalize();
    }

    fn data_point(&self, j: usize) -> Breakpoint {
        Breakpoint::new(self.xs[j], self.vals[j])
    }

    fn chord(&mut self, q: usize) {
        let pts = [self.data_point(q - 1), self.data_point(q)];
        self.replace(&pts);
    }

    fn reflect(&mut self) {
        for b in &mut self.bp {
            b.v = -b.v;
        }
        for v in &mut self.vals {
            *v = -*v;
        }
    }

    fn step(&mut self, q: usize) {
        let (xl, xq) = (self.xs[q - 1], self.xs[q]);
        let inside = self.knots_in(xl, xq);
        match inside.len() {
            0 => self.record(q, Step::Straight, false),
            1 => {
                if self.is_knot(xl) || self.is_knot(xq) {
                    self.chord(q);
                    self.record(q, Step::NeighborKnot, false);
                    return;
                }
                let knot = inside[0];
                let sigma = Line::through((xl, self.vals[q - 1]), (xq, self.vals[q]));
                let on_sigma = sigma.eval(knot.t);
                let dev = knot.v - on_sigma;
                if dev.abs() <= coincidence_tol(knot.v, on_sigma) {
                    self.chord(q);
                    self.record(q, Step::OnChord, false);
                } else if dev < 0.0 {
                    let step = self.knot_below(q, knot, sigma);
                    self.record(q, step, false);
                } else {
                    self.reflect();
                    let mirrored = Line::new(-sigma.slope, -sigma.intercept);
                    let step = self.knot_below(q, Breakpoint::new(knot.t, -knot.v), mirrored);
                    self.reflect();
                    self.record(q, step, true);
                }
            }
            _ => {
                self.chord(q);
                self.record(q, Step::SeveralKnots, false);
            }
        }
    }

    /// `knot` is the only knot in `[x_{q-1}, x_q]` and lies strictly below the chord `sigma`.
    fn knot_below(&mut self, q: usize, knot: Breakpoint, sigma: Line) -> Step {
        let last = self.xs.len() - 1;
        if q == last {
            self.chord(q);
            return Step::LastInterval;
        }
        let (xl, xq, xr) = (self.xs[q - 1], self.xs[q], self.xs[q + 1]);
        let fr = self.vals[q + 1];

        if fr - sigma.eval(xr) <= coincidence_tol(fr, sigma.eval(xr)) {
            // the spline rises above the chord right of x_q and has to come back
            let x = self.first_return(xq, xr, |x| sigma.eval(x));
            let vx = if x == xr { fr } else { self.eval(x) };
            let pts = [self.data_point(q - 1), Breakpoint::new(x, vx)];
            self.replace(&pts);
            return Step::ReturnsToChord;
        }

        let ahead: Vec<Breakpoint> = self.interior().filter(|b| xq < b.t && b.t <= xr).collect();
        match ahead.len() {
            0 => Step::SingleKnotKept,
            1 => {
                let next = ahead[0];
                let slope = (next.v - knot.v) / (next.t - knot.t);
                let phi_r = self.vals[q] + slope * (xr - xq);
                if (fr - phi_r).abs() <= coincidence_tol(fr, phi_r) {
                    Step::TangentContinues
                } else if fr < phi_r {
                    let psi = Line::through((xq, self.vals[q]), (xr, fr));
                    match self.crossing_before(xl, knot.t, |x| psi.eval(x)) {
                        Some(x) => {
                            let pts = [Breakpoint::new(x, self.eval(x)), self.data_point(q + 1)];
                            self.replace(&pts);
                            Step::CutBack
                        }
                        None => self.two_chords(q),
                    }
                } else {
                    let omega = Line::through((next.t, next.v), (xr, fr));
                    let g0 = omega.eval(xq) - sigma.eval(xq);
                    let g1 = omega.eval(next.t) - sigma.eval(next.t);
                    if g0 < 0.0 && g1 > 0.0 {
                        let x = xq + (next.t - xq) * (-g0 / (g1 - g0));
                        if xq < x && x < next.t {
                            let vx = self.vals[q - 1] + sigma.slope * (x - xl);
                            let pts = [self.data_point(q - 1), Breakpoint::new(x, vx), self.data_point(q + 1)];
                            self.replace(&pts);
                            return Step::Bridge;
                        }
                    }
                    self.two_chords(q)
                }
            }
            _ => self.two_chords(q),
        }
    }

    fn two_chords(&mut self, q: usize) -> Step {
        let pts = [self.data_point(q - 1), self.data_point(q), self.data_point(q + 1)];
        self.replace(&pts);
        Step::TwoChords
    }

    /// First point in `(lo, hi]` where the spline, starting on `line` at `lo`,
    /// meets `line` again; `hi` if rounding hides the crossing.
    fn first_return(&self, lo: f64, hi: f64, line: impl Fn(f64) -> f64) -> f64 {
        let mut prev = (lo, 0.0);
        let pts = self
            .interior()
            .filter(|b| lo < b.t && b.t < hi)
            .map(|b| b.t)
            .chain(std::iter::once(hi));
        for t in pts {
            let g = self.eval(t) - line(t);
            if g <= 0.0 {
                return if g == 0.0 || prev.1 <= 0.0 {
                    if prev.1 <= 0.0 { prev.0 } else { t }
                } else {
                    prev.0 + (t - prev.0) * (prev.1 / (prev.1 - g))
                };
            }
            prev = (t, g);
        }
        hi
    }

    /// Smallest point of `(lo, hi)` where the spline crosses `line` from above.
    fn crossing_before(&self, lo: f64, hi: f64, line: impl Fn(f64) -> f64) -> Option<f64> {
        let pts: Vec<f64> = std::iter::once(lo)
            .chain(self.interior().filter(|b| lo < b.t && b.t < hi).map(|b| b.t))
            .chain(std::iter::once(hi))
            .collect();
        let g: Vec<f64> = pts.iter().map(|&t| self.eval(t) - line(t)).collect();
        (1..pts.len()).find_map(|i| {
            (g[i - 1] > 0.0 && g[i] <= 0.0).then(|| {
                let x = pts[i - 1] + (pts[i] - pts[i - 1]) * (g[i - 1] / (g[i - 1] - g[i]));
                x.clamp(pts[i - 1], pts[i])
            })
        })
        .filter(|&x| lo < x && x < hi)
    }
}
