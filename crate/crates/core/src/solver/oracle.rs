//! Independent check of the solver: fixed-knot fits over a grid of candidate knots.
//!
//! Candidates are the inner abscissae plus `g` points in every inner gap. A knot
//! pattern fixes which abscissae and which gaps carry knots; within a pattern,
//! the gap positions are searched depth first. Cutting the data at every gap
//! whose knot is still free gives a lower bound on the pattern, since any spline
//! restricted to a block between cuts is a fixed-knot fit of that block. The
//! bound prunes subtrees without changing the minimum.

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::fixed_knot::{fit_chain, ChainProblem};
use crate::norms::PNorm;

struct Pattern {
    data_knots: Vec<usize>,
    gaps: Vec<usize>,
}

struct Search<'a> {
    data: &'a DataSet,
    p: PNorm,
    g: usize,
    best: f64,
    slack: f64,
}

/// Minimum fixed-knot error over all increasing selections of at most `k`
/// candidate knots, with `grid_per_gap` equispaced candidates in each inner gap.
/// The grids are nested for `g = 1, 4, 16, …`, so refining never increases the result.
pub fn grid_oracle(data: &DataSet, k: usize, p: PNorm, grid_per_gap: usize) -> Result<f64> {
    if grid_per_gap == 0 {
        return Err(Error::Argument("grid_per_gap must be at least 1".into()));
    }
    let mu = data.mu();
    let mut patterns = Vec::new();
    collect_patterns(mu, k, 1, &mut Vec::new(), &mut patterns);

    let mut search = Search {
        data,
        p,
        g: grid_per_gap,
        best: f64::INFINITY,
        slack: 1e-12 * (1.0 + data.value_scale()),
    };
    let mut rooted: Vec<(f64, Pattern)> = patterns
        .into_iter()
        .filter_map(|pat| search.bound(&pat, &[]).map(|lb| (lb, pat)))
        .collect();
    rooted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (lb, pat) in &rooted {
        if *lb > search.best + search.slack {
            break;
        }
        search.descend(pat, &mut Vec::new(), *lb);
    }
    Ok(search.best)
}

/// Candidate items on the slot line: abscissa `q` at slot `2q`, gap `q` at `2q + 1`.
fn collect_patterns(mu: usize, k: usize, from: usize, current: &mut Vec<usize>, out: &mut Vec<Pattern>) {
    out.push(Pattern {
        data_knots: current.iter().filter(|s| *s % 2 == 0).map(|s| s / 2).collect(),
        gaps: current.iter().filter(|s| *s % 2 == 1).map(|s| s / 2).collect(),
    });
    if current.len() == k {
        return;
    }
    for slot in from.max(2)..=2 * mu {
        current.push(slot);
        collect_patterns(mu, k, slot + 1, current, out);
        current.pop();
    }
}

impl Search<'_> {
    fn grid_point(&self, q: usize, i: usize) -> f64 {
        let (x0, x1) = (self.data.x(q), self.data.x(q + 1));
        x0 + (x1 - x0) * ((i as f64 + 1.0 / 3.0) / self.g as f64)
    }

    /// Lower bound for the pattern with the first `fixed.len()` gap knots placed;
    /// exact once every gap knot is placed. `None` when a block cannot be fitted.
    fn bound(&self, pat: &Pattern, fixed: &[f64]) -> Option<f64> {
        let data = self.data;
        let cuts = &pat.gaps[fixed.len()..];
        let mut knots: Vec<f64> = pat.data_knots.iter().map(|&q| data.x(q)).chain(fixed.iter().copied()).collect();
        knots.sort_by(f64::total_cmp);

        let mut errors = Vec::with_capacity(cuts.len() + 1);
        let mut start = 0;
        for end in cuts.iter().copied().chain(std::iter::once(data.len() - 1)) {
            if end > start {
                let (lo, hi) = (data.x(start), data.x(end));
                let inner = knots.iter().copied().filter(|&t| lo < t && t < hi).collect();
                errors.push(fit_chain(data, &ChainProblem::new(start, end, inner), self.p).ok()?.error);
            }
            start = end + 1;
        }
        Some(self.p.norm(&errors))
    }

    fn descend(&mut self, pat: &Pattern, fixed: &mut Vec<f64>, lb: f64) {
        if lb > self.best + self.slack {
            return;
        }
        let depth = fixed.len();
        if depth == pat.gaps.len() {
            self.best = self.best.min(lb);
            return;
        }
        let q = pat.gaps[depth];
        let leaf = depth + 1 == pat.gaps.len();
        let mut children: Vec<(f64, f64)> = (0..self.g)
            .filter_map(|i| {
                let t = self.grid_point(q, i);
                fixed.push(t);
                let child = self.bound(pat, fixed);
                fixed.pop();
                match child {
                    Some(b) => Some((b.max(lb), t)),
                    // a failed relaxation still inherits the parent bound
                    None if !leaf => Some((lb, t)),
                    None => None,
                }
            })
            .collect();
        children.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (b, t) in children {
            fixed.push(t);
            self.descend(pat, fixed, b);
            fixed.pop();
        }
    }
}
