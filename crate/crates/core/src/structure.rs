//! Structural verifier: the properties (a)–(h) that some best approximation
//! always has, checked on one given spline.
//!
//! Only proper knots take part in (a)–(g); (h) looks at every breakpoint strictly
//! between two abscissae. A failure does not refute optimality of the spline.

use std::fmt;

use crate::data::DataSet;
use crate::error::Result;
use crate::knots::{classify_knots, KnotLabel, Position};
use crate::norms::PNorm;
use crate::spline::BrokenLine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// No knot in `(x_0, x_1)` or `(x_μ, x_{μ+1})`.
    A,
    /// The abscissae bracketing an interior knot are not knots.
    B,
    /// Two interior knots are separated by at least two non-knot abscissae.
    C,
    /// Every piece covers at least two abscissae.
    D,
    /// The abscissae bracketing an interior knot bound no other knot.
    E,
    /// Each side of an interior knot holds a non-knot abscissa of `x_1 … x_μ`.
    F,
    /// Between an interior knot and a neighboring data knot lie two abscissae,
    /// or one that is interpolated. Finite `p` only.
    G,
    /// Every knot strictly between abscissae is proper.
    H,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::A,
        Property::B,
        Property::C,
        Property::D,
        Property::E,
        Property::F,
        Property::G,
        Property::H,
    ];

    pub fn letter(self) -> char {
        (b'a' + self as u8) as char
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.letter())
    }
}

/// Offending knots (indices into `s.knots()`) and abscissae (indices into the data).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Witness {
    pub knots: Vec<usize>,
    pub abscissae: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(Witness),
    NotApplicable,
}

impl Check {
    /// `Pass` or `NotApplicable`.
    pub fn is_ok(&self) -> bool {
        !matches!(self, Check::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub checks: Vec<(Property, Check)>,
}

impl StructureReport {
    pub fn get(&self, p: Property) -> &Check {
        &self.checks.iter().find(|(q, _)| *q == p).expect("all properties reported").1
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.is_ok())
    }

    pub fn failures(&self) -> Vec<Property> {
        self.checks.iter().filter(|(_, c)| !c.is_ok()).map(|(p, _)| *p).collect()
    }
}

/// Overrides for the verifier's tolerances; `None` selects the default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tolerances {
    /// Slope jump below which a knot is improper. Default: the spline's own
    /// `default_slope_tolerance`.
    pub slope: Option<f64>,
    /// Interpolation tolerance of (g). Default `1e-8 · (1 + max|f|)`.
    pub interp: Option<f64>,
}

pub fn check_structure(data: &DataSet, s: &BrokenLine, p: PNorm, tol: Tolerances) -> Result<StructureReport> {
    let tau_slope = tol.slope.unwrap_or_else(|| s.default_slope_tolerance());
    let tau_interp = tol.interp.unwrap_or_else(|| 1e-8 * (1.0 + data.value_scale()));
    let labels = classify_knots(s, data, tau_slope)?;
    let ctx = Context::new(data, &labels);

    let g = if p == PNorm::Infinity {
        Check::NotApplicable
    } else {
        ctx.check_g(s, tau_interp)
    };
    Ok(StructureReport {
        checks: vec![
            (Property::A, ctx.check_a()),
            (Property::B, ctx.check_b()),
            (Property::C, ctx.check_c()),
            (Property::D, ctx.check_d()),
            (Property::E, ctx.check_e()),
            (Property::F, ctx.check_f()),
            (Property::G, g),
            (Property::H, check_h(&labels)),
        ],
    })
}

struct Context<'a> {
    data: &'a DataSet,
    /// Proper knots as (index into `s.knots()`, label), increasing.
    proper: Vec<(usize, KnotLabel)>,
    /// `is_knot[i]`: `x_i` is a proper knot.
    is_knot: Vec<bool>,
}

fn verdict(witnesses: Vec<Witness>) -> Check {
    if witnesses.is_empty() {
        return Check::Pass;
    }
    let mut all = Witness::default();
    for w in witnesses {
        all.knots.extend(w.knots);
        all.abscissae.extend(w.abscissae);
    }
    all.knots.sort_unstable();
    all.knots.dedup();
    all.abscissae.sort_unstable();
    all.abscissae.dedup();
    Check::Fail(all)
}

fn check_h(labels: &[KnotLabel]) -> Check {
    verdict(
        labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_interior() && !l.is_proper())
            .map(|(i, _)| Witness { knots: vec![i], abscissae: vec![] })
            .collect(),
    )
}

impl<'a> Context<'a> {
    fn new(data: &'a DataSet, labels: &[KnotLabel]) -> Self {
        let proper: Vec<(usize, KnotLabel)> =
            labels.iter().copied().enumerate().filter(|(_, l)| l.is_proper()).collect();
        let mut is_knot = vec![false; data.len()];
        for (_, l) in &proper {
            if let Some(q) = l.data_index() {
                is_knot[q] = true;
            }
        }
        Context { data, proper, is_knot }
    }

    /// Proper knots inside a gap as (position in `proper`, knot index, label).
    fn interior(&self) -> impl Iterator<Item = (usize, usize, KnotLabel)> + '_ {
        self.proper
            .iter()
            .enumerate()
            .filter(|(_, (_, l))| l.is_interior())
            .map(|(pos, (i, l))| (pos, *i, *l))
    }

    fn check_a(&self) -> Check {
        verdict(
            self.proper
                .iter()
                .filter(|(_, l)| l.boundary)
                .map(|(i, l)| {
                    let q = l.gap().expect("boundary knots lie in a gap");
                    Witness { knots: vec![*i], abscissae: vec![q, q + 1] }
                })
                .collect(),
        )
    }

    fn check_b(&self) -> Check {
        let mut out = Vec::new();
        for (_, i, l) in self.interior() {
            let q = l.gap().expect("interior");
            let bad: Vec<usize> = [q, q + 1].into_iter().filter(|&j| self.is_knot[j]).collect();
            if !bad.is_empty() {
                out.push(Witness { knots: vec![i], abscissae: bad });
            }
        }
        verdict(out)
    }

    fn check_c(&self) -> Check {
        let interior: Vec<(usize, KnotLabel)> = self.interior().map(|(_, i, l)| (i, l)).collect();
        let mut out = Vec::new();
        for w in interior.windows(2) {
            let (q0, q1) = (w[0].1.gap().expect("interior"), w[1].1.gap().expect("interior"));
            let free = (q0 + 1..=q1).filter(|&j| !self.is_knot[j]).count();
            if free < 2 {
                out.push(Witness { knots: vec![w[0].0, w[1].0], abscissae: (q0 + 1..=q1).collect() });
            }
        }
        verdict(out)
    }

    fn check_d(&self) -> Check {
        let xs = self.data.xs();
        let mut ends: Vec<(Option<usize>, f64)> = vec![(None, self.data.a())];
        ends.extend(self.proper.iter().map(|(i, l)| (Some(*i), l.t)));
        ends.push((None, self.data.b()));
        let mut out = Vec::new();
        for w in ends.windows(2) {
            let (lo, hi) = (w[0].1, w[1].1);
            let inside: Vec<usize> = (0..xs.len()).filter(|&j| lo <= xs[j] && xs[j] <= hi).collect();
            if inside.len() < 2 {
                out.push(Witness {
                    knots: [w[0].0, w[1].0].into_iter().flatten().collect(),
                    abscissae: inside,
                });
            }
        }
        verdict(out)
    }

    fn check_e(&self) -> Check {
        let xs = self.data.xs();
        let mut out = Vec::new();
        for (_, i, l) in self.interior() {
            let q = l.gap().expect("interior");
            let others: Vec<usize> = self
                .proper
                .iter()
                .filter(|(j, o)| *j != i && xs[q] <= o.t && o.t <= xs[q + 1])
                .map(|(j, _)| *j)
                .collect();
            if !others.is_empty() {
                let mut knots = vec![i];
                knots.extend(others);
                out.push(Witness { knots, abscissae: vec![q, q + 1] });
            }
        }
        verdict(out)
    }

    fn check_f(&self) -> Check {
        let mu = self.data.mu();
        let mut out = Vec::new();
        for (_, i, l) in self.interior() {
            let q = l.gap().expect("interior");
            let left = (1..=q.min(mu)).any(|j| !self.is_knot[j]);
            let right = (q + 1..=mu).any(|j| !self.is_knot[j]);
            if !left || !right {
                out.push(Witness { knots: vec![i], abscissae: vec![q, q + 1] });
            }
        }
        verdict(out)
    }

    fn check_g(&self, s: &BrokenLine, tau_interp: f64) -> Check {
        let mut out = Vec::new();
        for (pos, i, l) in self.interior() {
            let q = l.gap().expect("interior");
            let mut neighbors = Vec::new();
            if pos > 0 {
                neighbors.push(self.proper[pos - 1]);
            }
            if pos + 1 < self.proper.len() {
                neighbors.push(self.proper[pos + 1]);
            }
            for (j, n) in neighbors {
                let Position::Data(r) = n.position else { continue };
                let between: Vec<usize> = if r <= q { (r + 1..=q).collect() } else { (q + 1..r).collect() };
                let ok = match between.len() {
                    0 => false,
                    1 => {
                        let m = between[0];
                        (s.eval_unchecked(self.data.x(m)) - self.data.f(m)).abs() <= tau_interp
                    }
                    _ => true,
                };
                if !ok {
                    out.push(Witness { knots: vec![i, j], abscissae: between });
                }
            }
        }
        verdict(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_knot_illustration, remark1_data, remark1_fixture};

    fn grid(n: usize) -> DataSet {
        let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
        DataSet::new(xs, vec![0.0; n]).unwrap()
    }

    fn report(data: &DataSet, pts: &[(f64, f64)], p: PNorm) -> StructureReport {
        check_structure(data, &BrokenLine::from_points(pts).unwrap(), p, Tolerances::default()).unwrap()
    }

    fn witness(c: &Check) -> &Witness {
        match c {
            Check::Fail(w) => w,
            other => panic!("expected a failure, got {other:?}"),
        }
    }

    #[test]
    fn boundary_knot_fails_a() {
        let r = report(&grid(4), &[(0.0, 0.0), (0.5, 1.0), (3.0, 0.0)], PNorm::Two);
        let w = witness(r.get(Property::A));
        assert_eq!(w.knots, vec![0]);
        assert_eq!(w.abscissae, vec![0, 1]);
    }

    #[test]
    fn two_knots_in_one_gap_fail_c_and_d() {
        let r = report(&grid(5), &[(0.0, 0.0), (1.2, 1.0), (1.7, -1.0), (4.0, 0.0)], PNorm::Two);
        assert!(!r.get(Property::C).is_ok());
        assert!(!r.get(Property::D).is_ok());
        assert!(!r.get(Property::E).is_ok());
        assert!(r.get(Property::A).is_ok());
    }

    #[test]
    fn line_passes_everything() {
        let r = report(&grid(4), &[(0.0, 0.0), (3.0, 1.0)], PNorm::Infinity);
        assert!(r.all_pass());
        assert_eq!(r.get(Property::G), &Check::NotApplicable);
        let r = report(&grid(4), &[(0.0, 0.0), (3.0, 1.0)], PNorm::One);
        assert!(r.checks.iter().all(|(_, c)| *c == Check::Pass));
    }

    #[test]
    fn remark1_fixture_fails_boundary_rule() {
        let s = remark1_fixture(10).unwrap();
        let r = check_structure(&remark1_data(), &s, PNorm::Two, Tolerances::default()).unwrap();
        assert_eq!(r.failures(), vec![Property::A, Property::C, Property::D, Property::F]);
    }

    #[test]
    fn five_knot_illustration_satisfies_a_and_d() {
        let (data, s) = five_knot_illustration();
        let r = check_structure(&data, &s, PNorm::Two, Tolerances::default()).unwrap();
        assert_eq!(r.get(Property::A), &Check::Pass);
        assert_eq!(r.get(Property::D), &Check::Pass);
        assert_eq!(r.get(Property::H), &Check::Pass);
    }

    #[test]
    fn data_knot_next_to_interior_knot_fails_b() {
        let r = report(&grid(6), &[(0.0, 0.0), (2.0, 1.0), (2.5, -1.0), (5.0, 0.0)], PNorm::Two);
        let w = witness(r.get(Property::B));
        assert_eq!(w.abscissae, vec![2]);
        assert!(!r.get(Property::G).is_ok());
    }

    #[test]
    fn single_reproduced_abscissa_satisfies_g() {
        // data knot at x_1, interior knot in (2, 3), x_2 between them reproduced exactly
        let data = DataSet::new(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0], vec![0.0, 1.0, 0.5, 0.0, 0.0, 0.0]).unwrap();
        let s = BrokenLine::from_points(&[(0.0, 0.0), (1.0, 1.0), (2.5, 0.25), (5.0, 1.0)]).unwrap();
        let r = check_structure(&data, &s, PNorm::Two, Tolerances::default()).unwrap();
        assert_eq!(r.get(Property::G), &Check::Pass);
        let bad = DataSet::new(data.xs().to_vec(), vec![0.0, 1.0, 0.7, 0.0, 0.0, 0.0]).unwrap();
        let r = check_structure(&bad, &s, PNorm::Two, Tolerances::default()).unwrap();
        assert_eq!(witness(r.get(Property::G)).abscissae, vec![2]);
        let r = check_structure(&bad, &s, PNorm::Infinity, Tolerances::default()).unwrap();
        assert_eq!(r.get(Property::G), &Check::NotApplicable);
        let loose = Tolerances { interp: Some(0.5), ..Tolerances::default() };
        assert!(check_structure(&bad, &s, PNorm::One, loose).unwrap().get(Property::G).is_ok());
    }

    #[test]
    fn improper_interior_breakpoint_fails_h_only() {
        let r = report(&grid(4), &[(0.0, 0.0), (1.5, 1.5), (3.0, 3.0)], PNorm::Two);
        assert_eq!(r.failures(), vec![Property::H]);
        // an improper breakpoint on an abscissa is harmless
        let r = report(&grid(4), &[(0.0, 0.0), (1.0, 1.0), (3.0, 3.0)], PNorm::Two);
        assert!(r.all_pass());
    }

    #[test]
    fn crowded_data_knots_fail_f() {
        let data = grid(4);
        let r = report(&data, &[(0.0, 0.0), (1.0, 1.0), (1.5, 0.0), (2.0, 1.0), (3.0, 0.0)], PNorm::Two);
        assert!(!r.get(Property::F).is_ok());
        assert!(!r.get(Property::B).is_ok());
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let s = BrokenLine::from_points(&[(0.0, 0.0), (2.0, 0.0)]).unwrap();
        assert!(check_structure(&grid(4), &s, PNorm::Two, Tolerances::default()).is_err());
    }

    #[test]
    fn report_ignores_ordinate_scaling() {
        let data = DataSet::new(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0], vec![0.0, 1.0, 0.5, 0.0, 0.0, 0.0]).unwrap();
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.5, 0.25), (5.0, 1.0)];
        let base = report(&data, &pts, PNorm::Two);
        for (scale, shift) in [(1e3, 5.0), (-2.0, 0.0), (1e-3, -1.0)] {
            let d = DataSet::new(data.xs().to_vec(), data.fs().iter().map(|f| scale * f + shift).collect()).unwrap();
            let scaled: Vec<(f64, f64)> = pts.iter().map(|&(t, v)| (t, scale * v + shift)).collect();
            assert_eq!(report(&d, &scaled, PNorm::Two), base);
        }
    }

    #[test]
    fn property_letters() {
        let letters: String = Property::ALL.iter().map(|p| p.letter()).collect();
        assert_eq!(letters, "abcdefgh");
        assert_eq!(Property::G.to_string(), "(g)");
    }
}
