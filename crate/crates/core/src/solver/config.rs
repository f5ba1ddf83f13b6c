use std::cmp::Ordering;
use std::fmt;

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::fixed_knot::{fit_chain, ChainProblem, HatDesign, SignConstraint};
use crate::knots::classify_knots;
use crate::norms::{error_norm, PNorm};
use crate::spline::{Breakpoint, BrokenLine};

use super::{ConfigStatus, ConfigTrace, FitResult};

/// One junction of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Junction {
    /// Knot at `x_q`, `1 ≤ q ≤ μ`.
    Data(usize),
    /// Knot strictly inside `(x_q, x_{q+1})`, `1 ≤ q ≤ μ − 1`.
    Gap(usize),
}

impl Junction {
    /// Position on the interleaved line of abscissae and gaps.
    pub fn slot(self) -> usize {
        match self {
            Junction::Data(q) => 2 * q,
            Junction::Gap(q) => 2 * q + 1,
        }
    }

    fn from_slot(slot: usize) -> Self {
        if slot.is_multiple_of(2) {
            Junction::Data(slot / 2)
        } else {
            Junction::Gap(slot / 2)
        }
    }

    /// First data index of the piece starting at this junction.
    fn piece_start(self) -> usize {
        match self {
            Junction::Data(q) => q,
            Junction::Gap(q) => q + 1,
        }
    }

    /// Last data index of the piece ending at this junction.
    fn piece_end(self) -> usize {
        match self {
            Junction::Data(q) | Junction::Gap(q) => q,
        }
    }
}

impl Ord for Junction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slot().cmp(&other.slot())
    }
}

impl PartialOrd for Junction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Junction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Junction::Data(q) => write!(f, "data({q})"),
            Junction::Gap(q) => write!(f, "gap({q})"),
        }
    }
}

/// Strictly increasing junctions; ordered by count first, then lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KnotConfig {
    pub junctions: Vec<Junction>,
}

impl KnotConfig {
    pub fn new(junctions: Vec<Junction>) -> Self {
        Self { junctions }
    }

    pub fn len(&self) -> usize {
        self.junctions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.junctions.is_empty()
    }

    /// Checks the configuration rules against `μ`.
    pub fn validate(&self, mu: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(format!("configuration {self}: {msg}")));
        for j in &self.junctions {
            match *j {
                Junction::Data(q) if q == 0 || q > mu => return bad(format!("{j} is not an inner abscissa")),
                Junction::Gap(q) if q == 0 || q + 1 > mu => return bad(format!("{j} is not an admissible gap")),
                _ => {}
            }
        }
        for w in self.junctions.windows(2) {
            if w[0].slot() >= w[1].slot() {
                return bad("junctions must increase strictly".into());
            }
        }
        if let Some((lo, hi)) = self.pieces(mu).find(|(lo, hi)| hi < lo || hi - lo + 1 < 2) {
            return bad(format!("piece over indices {lo}..={hi} covers fewer than two abscissae"));
        }
        for (i, j) in self.junctions.iter().enumerate() {
            if let Junction::Gap(q) = *j {
                let neighbors = [i.checked_sub(1).map(|i| self.junctions[i]), self.junctions.get(i + 1).copied()];
                if neighbors.iter().flatten().any(|n| *n == Junction::Data(q) || *n == Junction::Data(q + 1)) {
                    return bad(format!("{j} borders a data knot"));
                }
            }
        }
        Ok(())
    }

    /// Data index ranges `(first, last)` of the pieces; ranges may be empty or
    /// reversed for invalid configurations.
    fn pieces(&self, mu: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let starts = std::iter::once(0).chain(self.junctions.iter().map(|j| j.piece_start()));
        let ends = self.junctions.iter().map(|j| j.piece_end()).chain(std::iter::once(mu + 1));
        starts.zip(ends)
    }

    /// Knot abscissae for data knots; gap knots have no fixed abscissa.
    pub fn data_knots(&self) -> impl Iterator<Item = usize> + '_ {
        self.junctions.iter().filter_map(|j| match j {
            Junction::Data(q) => Some(*q),
            Junction::Gap(_) => None,
        })
    }

    pub fn gaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.junctions.iter().filter_map(|j| match j {
            Junction::Gap(q) => Some(*q),
            Junction::Data(_) => None,
        })
    }
}

impl Ord for KnotConfig {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.junctions.cmp(&other.junctions))
    }
}

impl PartialOrd for KnotConfig {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KnotConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, j) in self.junctions.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "]")
    }
}

/// Every valid configuration with at most `k` junctions, sorted by count and then
/// lexicographically. Requires `μ ≥ 1`.
pub fn enumerate_configs(mu: usize, k: usize) -> Vec<KnotConfig> {
    let mut out = vec![KnotConfig::default()];
    let mut current = Vec::new();
    extend(mu, k, 2, &mut current, &mut out);
    out.sort();
    out
}

/// Depth-first extension by junctions at slots `≥ from`, keeping every prefix
/// whose pieces so far are valid.
fn extend(mu: usize, k: usize, from: usize, current: &mut Vec<Junction>, out: &mut Vec<KnotConfig>) {
    if current.len() == k {
        return;
    }
    for slot in from..=2 * mu {
        let j = Junction::from_slot(slot);
        if let Junction::Gap(q) = j {
            if q + 1 > mu {
                continue;
            }
        }
        let start = current.last().map_or(0, |p| p.piece_start());
        if j.piece_end() < start + 1 {
            continue;
        }
        if let (Some(&Junction::Data(p)), Junction::Gap(q)) = (current.last(), j) {
            if p == q {
                continue;
            }
        }
        if let (Some(&Junction::Gap(q)), Junction::Data(p)) = (current.last(), j) {
            if p == q + 1 {
                continue;
            }
        }
        current.push(j);
        out.push(KnotConfig::new(current.clone()));
        extend(mu, k, slot + 1, current, out);
        current.pop();
    }
}

/// Why a configuration has no admissible spline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Infeasible {
    /// The lines meeting at a gap coincide; the configuration without that
    /// junction represents the same spline.
    Improper,
    /// The lines meeting at a gap are parallel and distinct.
    Parallel,
    /// The lines meet outside the open gap; a data knot configuration dominates.
    OutsideGap,
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Infeasible::Improper => "improper",
            Infeasible::Parallel => "parallel",
            Infeasible::OutsideGap => "outside-gap",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigOutcome {
    Feasible(FitResult),
    Infeasible(Infeasible),
}

/// A run of pieces coupled by continuity: data block `start..=end` and its
/// internal data knots.
struct Chain {
    start: usize,
    end: usize,
    knots: Vec<usize>,
}

impl Chain {
    fn nodes(&self, data: &DataSet) -> Vec<f64> {
        let mut nodes = vec![data.x(self.start)];
        nodes.extend(self.knots.iter().map(|&q| data.x(q)));
        nodes.push(data.x(self.end));
        nodes
    }
}

fn chains(config: &KnotConfig, data: &DataSet) -> Vec<Chain> {
    let mut out = vec![Chain { start: 0, end: data.len() - 1, knots: Vec::new() }];
    for j in &config.junctions {
        let last = out.last_mut().expect("nonempty");
        match *j {
            Junction::Data(q) => last.knots.push(q),
            Junction::Gap(q) => {
                last.end = q;
                out.push(Chain { start: q + 1, end: data.len() - 1, knots: Vec::new() });
            }
        }
    }
    out
}

/// Best spline for one configuration, or the reason none exists.
pub fn solve_config(data: &DataSet, config: &KnotConfig, p: PNorm) -> Result<ConfigOutcome> {
    if data.mu() == 0 {
        return Err(Error::Argument("configurations need at least one inner abscissa".into()));
    }
    config.validate(data.mu())?;
    let chains = chains(config, data);
    let gaps: Vec<usize> = config.gaps().collect();

    let outcome = match p {
        PNorm::One | PNorm::Infinity if !gaps.is_empty() => solve_sign_patterns(data, &chains, &gaps, p)?,
        _ => {
            let mut splines = Vec::with_capacity(chains.len());
            for c in &chains {
                let problem = ChainProblem::new(c.start, c.end, c.knots.iter().map(|&q| data.x(q)).collect());
                splines.push(fit_chain(data, &problem, p)?.spline);
            }
            assemble(data, &splines, &gaps)
        }
    };
    Ok(match outcome {
        Ok(spline) => {
            let error = error_norm(data, &spline, p)?;
            let proper_knot_count = proper_knots(data, &spline)?;
            ConfigOutcome::Feasible(FitResult {
                spline,
                error,
                config: config.clone(),
                proper_knot_count,
                diagnostics: vec![ConfigTrace { config: config.clone(), status: ConfigStatus::Feasible(error) }],
            })
        }
        Err(reason) => ConfigOutcome::Infeasible(reason),
    })
}

pub(crate) fn proper_knots(data: &DataSet, s: &BrokenLine) -> Result<usize> {
    Ok(classify_knots(s, data, s.default_slope_tolerance())?.iter().filter(|l| l.is_proper()).count())
}

/// Joins chain splines at the intersections of their boundary lines.
fn assemble(data: &DataSet, splines: &[BrokenLine], gaps: &[usize]) -> Result<BrokenLine, Infeasible> {
    let tol = 1e-12 * (1.0 + data.value_scale());
    let mut joints = Vec::with_capacity(gaps.len());
    for (i, &q) in gaps.iter().enumerate() {
        let (left, right) = (&splines[i], &splines[i + 1]);
        let ll = left.piece_line(left.breakpoints().len() - 2);
        let rl = right.piece_line(0);
        let (x0, x1) = (data.x(q), data.x(q + 1));
        let d0 = ll.eval(x0) - rl.eval(x0);
        let d1 = ll.eval(x1) - rl.eval(x1);
        if d0.abs() <= tol && d1.abs() <= tol {
            return Err(Infeasible::Improper);
        }
        if (d0 - d1).abs() <= tol {
            return Err(Infeasible::Parallel);
        }
        let h = x1 - x0;
        let t = x0 + h * (d0 / (d0 - d1));
        let margin = 1e-12 * h;
        if !(x0 + margin < t && t < x1 - margin) {
            return Err(Infeasible::OutsideGap);
        }
        joints.push(Breakpoint::new(t, 0.5 * (ll.eval(t) + rl.eval(t))));
    }

    let mut bps = vec![splines[0].breakpoints()[0]];
    for (i, s) in splines.iter().enumerate() {
        if i > 0 {
            bps.push(joints[i - 1]);
        }
        let b = s.breakpoints();
        bps.extend_from_slice(&b[1..b.len() - 1]);
    }
    let last = splines[splines.len() - 1].breakpoints();
    bps.push(last[last.len() - 1]);
    let spline = BrokenLine::from_breakpoints_unchecked(bps);

    let labels = classify_knots(&spline, data, spline.default_slope_tolerance()).map_err(|_| Infeasible::OutsideGap)?;
    if labels.iter().any(|l| l.is_interior() && !l.is_proper()) {
        return Err(Infeasible::Improper);
    }
    Ok(spline)
}

/// For p ∈ {1, ∞} the chains cannot be fitted independently: the optimum may
/// need its boundary lines bent so that they still meet inside the gap. Each
/// gap gets a sign pattern making `L − R` change sign across it, which is a
/// pair of linear constraints on the joint fit; the best admissible pattern wins.
fn solve_sign_patterns(
    data: &DataSet,
    chains: &[Chain],
    gaps: &[usize],
    p: PNorm,
) -> Result<Result<BrokenLine, Infeasible>> {
    let mut design = HatDesign::default();
    let mut layout = Vec::with_capacity(chains.len());
    for c in chains {
        let nodes = c.nodes(data);
        let offset = design.push_block(&data.xs()[c.start..=c.end], &data.fs()[c.start..=c.end], &nodes)?;
        layout.push((offset, nodes));
    }

    // (d0, d1) as linear forms in the stacked coefficients
    let forms: Vec<(SignConstraint, SignConstraint)> = gaps
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let (lo, ln) = &layout[i];
            let (ro, rn) = &layout[i + 1];
            let (x0, x1) = (data.x(q), data.x(q + 1));
            let last = lo + ln.len() - 1;
            let rho_l = (x1 - x0) / (x0 - ln[ln.len() - 2]);
            let rho_r = (x0 - x1) / (rn[1] - x1);
            let d0 = vec![(last, 1.0), (*ro, -(1.0 - rho_r)), (ro + 1, -rho_r)];
            let d1 = vec![(last, 1.0 + rho_l), (last - 1, -rho_l), (*ro, -1.0)];
            (d0, d1)
        })
        .collect();

    let mut best: Option<(f64, BrokenLine)> = None;
    let mut reason = Infeasible::OutsideGap;
    let mut first_reason = true;
    for pattern in 0..(1usize << gaps.len()) {
        let constraints: Vec<SignConstraint> = forms
            .iter()
            .enumerate()
            .flat_map(|(g, (d0, d1))| {
                let s = if pattern >> g & 1 == 0 { 1.0 } else { -1.0 };
                [scaled(d0, s), scaled(d1, -s)]
            })
            .collect();
        let c = match design.solve(p, &constraints) {
            Ok(c) => c,
            Err(Error::Configuration(_)) => continue,
            Err(e) => return Err(e),
        };
        let splines: Vec<BrokenLine> = layout
            .iter()
            .map(|(offset, nodes)| {
                BrokenLine::from_breakpoints_unchecked(
                    nodes.iter().enumerate().map(|(i, &t)| Breakpoint::new(t, c[offset + i])).collect(),
                )
            })
            .collect();
        match assemble(data, &splines, gaps) {
            Ok(spline) => {
                let error = error_norm(data, &spline, p)?;
                if best.as_ref().is_none_or(|(e, _)| error < *e) {
                    best = Some((error, spline));
                }
            }
            Err(r) => {
                if first_reason {
                    reason = r;
                    first_reason = false;
                }
            }
        }
    }
    Ok(best.map(|(_, s)| s).ok_or(reason))
}

fn scaled(form: &SignConstraint, s: f64) -> SignConstraint {
    form.iter().map(|&(c, v)| (c, s * v)).collect()
}
