//! Seeded random instances for tests, fixtures and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::DataSet;
use crate::fixed_knot::ChainProblem;
use crate::spline::BrokenLine;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `μ + 2` abscissae starting at 0 with spacings in `[0.2, 1)`.
pub fn random_abscissae<R: Rng>(rng: &mut R, mu: usize) -> Vec<f64> {
    let mut xs = Vec::with_capacity(mu + 2);
    xs.push(0.0);
    for _ in 0..=mu {
        let last = xs[xs.len() - 1];
        xs.push(last + rng.gen_range(0.2..1.0));
    }
    xs
}

/// Values uniform in `[-1, 1]`.
pub fn random_data<R: Rng>(rng: &mut R, mu: usize) -> DataSet {
    let xs = random_abscissae(rng, mu);
    let fs = xs.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    DataSet::new(xs, fs).expect("increasing abscissae")
}

/// A random trigonometric sum sampled with small noise.
pub fn smooth_data<R: Rng>(rng: &mut R, mu: usize) -> DataSet {
    let xs = random_abscissae(rng, mu);
    let span = xs[xs.len() - 1];
    let terms: Vec<(f64, f64, f64)> = (0..3)
        .map(|i| {
            let freq = (i + 1) as f64 * std::f64::consts::PI / span;
            (rng.gen_range(-1.0..1.0) / (i + 1) as f64, freq, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    let fs = xs
        .iter()
        .map(|&x| {
            let smooth: f64 = terms.iter().map(|(a, w, phase)| a * (w * x + phase).sin()).sum();
            smooth + 0.05 * rng.gen_range(-1.0..1.0)
        })
        .collect();
    DataSet::new(xs, fs).expect("increasing abscissae")
}

/// A broken line on `[a, b]` with up to `k` knots, each on an inner abscissa
/// `x_1 … x_μ` or strictly inside an inner gap, at most one per abscissa or gap.
/// Values are uniform in `[-1, 1]`.
pub fn random_broken_line<R: Rng>(rng: &mut R, data: &DataSet, k: usize) -> BrokenLine {
    let mu = data.mu();
    // slot 2q is abscissa q, slot 2q + 1 is gap q
    let slots: Vec<usize> = (2..=2 * mu).filter(|s| s % 2 == 0 || s / 2 < mu).collect();
    let count = rng.gen_range(0..=k.min(slots.len()));
    let mut chosen: Vec<usize> = slots.choose_multiple(rng, count).copied().collect();
    chosen.sort_unstable();
    let mut points = vec![(data.a(), rng.gen_range(-1.0..1.0))];
    for s in chosen {
        let q = s / 2;
        let t = if s % 2 == 0 {
            data.x(q)
        } else {
            let (x0, x1) = (data.x(q), data.x(q + 1));
            x0 + (x1 - x0) * rng.gen_range(0.05..0.95)
        };
        points.push((t, rng.gen_range(-1.0..1.0)));
    }
    points.push((data.b(), rng.gen_range(-1.0..1.0)));
    BrokenLine::from_points(&points).expect("increasing breakpoints")
}

/// Data sampled exactly from [`random_broken_line`].
pub fn sampled_data<R: Rng>(rng: &mut R, mu: usize, k: usize) -> (DataSet, BrokenLine) {
    let xs = random_abscissae(rng, mu);
    let grid = DataSet::new(xs.clone(), vec![0.0; xs.len()]).expect("increasing abscissae");
    let s = random_broken_line(rng, &grid, k);
    let fs = s.values_at(&grid).expect("same domain");
    (DataSet::new(xs, fs).expect("increasing abscissae"), s)
}

/// Random data covered by one chain whose knots leave at least two abscissae
/// on every piece; knots sit on abscissae or inside gaps.
pub fn random_chain<R: Rng>(rng: &mut R, mu: usize, max_knots: usize) -> (DataSet, ChainProblem) {
    let data = random_data(rng, mu);
    let mut knots = Vec::new();
    // the next knot may sit at abscissa `from` or in any later gap, leaving two
    // abscissae in the piece behind it
    let mut from = 1;
    while knots.len() < max_knots && from < mu && rng.gen_bool(0.7) {
        let q = rng.gen_range(from..mu);
        if rng.gen_bool(0.5) {
            knots.push(data.x(q));
            from = q + 1;
        } else {
            let (x0, x1) = (data.x(q), data.x(q + 1));
            knots.push(x0 + (x1 - x0) * rng.gen_range(0.05..0.95));
            from = q + 2;
        }
    }
    let chain = ChainProblem::whole(&data, knots);
    (data, chain)
}
