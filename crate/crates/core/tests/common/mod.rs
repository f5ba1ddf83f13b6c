//! Oracles shared by the integration tests. They recompute every claim from
//! scratch with plain loops, independent of the library internals.

#![allow(dead_code)]

use brokenline::{divided_difference_bound, error_norm, BrokenLine, DataSet, PNorm};
use rand::Rng;

/// Linear interpolation of the breakpoint list, written independently.
pub fn eval(s: &BrokenLine, x: f64) -> f64 {
    let b = s.breakpoints();
    for w in b.windows(2) {
        if x <= w[1].t {
            let u = (x - w[0].t) / (w[1].t - w[0].t);
            return w[0].v * (1.0 - u) + w[1].v * u;
        }
    }
    b[b.len() - 1].v
}

/// Data on random abscissae paired with a broken line whose knots are uniform
/// in `(a, b)`, unrelated to the abscissae.
pub fn random_pair<R: Rng>(rng: &mut R, max_mu: usize, max_k: usize) -> (DataSet, BrokenLine) {
    let mu = rng.gen_range(0..=max_mu);
    let data = brokenline::generate::random_data(rng, mu);
    let (a, b) = (data.a(), data.b());
    let k = rng.gen_range(0..=max_k);
    let mut ts: Vec<f64> = (0..k).map(|_| rng.gen_range(a..b)).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts.retain(|&t| a < t && t < b);
    let mut pts = vec![(a, rng.gen_range(-1.0..1.0))];
    pts.extend(ts.iter().map(|&t| (t, rng.gen_range(-1.0..1.0))));
    pts.push((b, rng.gen_range(-1.0..1.0)));
    (data, BrokenLine::from_points(&pts).unwrap())
}

/// The five postconditions of `regularize`, or a description of the first violation.
pub fn regularizer_postconditions(data: &DataSet, s: &BrokenLine, out: &BrokenLine) -> Result<(), String> {
    let bounds = divided_difference_bound(data, s).map_err(|e| e.to_string())?;
    let scale = 1.0 + bounds.m_prime;
    for (j, &x) in data.xs().iter().enumerate() {
        let (before, after) = (eval(s, x), eval(out, x));
        if (before - after).abs() > 1e-12 * scale {
            return Err(format!("value at x_{j} moved from {before} to {after}"));
        }
    }
    // slopes recomputed from the breakpoints
    for w in out.breakpoints().windows(2) {
        let slope = ((w[1].v - w[0].v) / (w[1].t - w[0].t)).abs();
        if slope > bounds.m_second * (1.0 + 1e-12) + 1e-15 * scale {
            return Err(format!("slope {slope} exceeds the divided difference bound {}", bounds.m_second));
        }
    }
    for b in out.breakpoints() {
        if b.v.abs() > bounds.m_fourth * (1.0 + 1e-12) + 1e-15 * scale {
            return Err(format!("value {} at {} exceeds {}", b.v, b.t, bounds.m_fourth));
        }
    }
    if out.knot_count() > s.knot_count() {
        return Err(format!("knot count grew from {} to {}", s.knot_count(), out.knot_count()));
    }
    if out.start() != s.start() || out.end() != s.end() {
        return Err("domain changed".into());
    }
    let shifted = DataSet::new(data.xs().to_vec(), data.xs().iter().map(|&x| eval(s, x) + 0.3 * x.sin()).collect())
        .map_err(|e| e.to_string())?;
    for p in [PNorm::One, PNorm::Two, PNorm::Infinity] {
        let e0 = error_norm(&shifted, s, p).map_err(|e| e.to_string())?;
        let e1 = error_norm(&shifted, out, p).map_err(|e| e.to_string())?;
        if (e0 - e1).abs() > 1e-12 * (1.0 + e0) {
            return Err(format!("{p} error changed from {e0} to {e1}"));
        }
    }
    Ok(())
}

pub fn norms() -> [PNorm; 3] {
    [PNorm::One, PNorm::Two, PNorm::Infinity]
}
