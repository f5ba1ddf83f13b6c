//! Global best approximation with at most `k` free knots.
//!
//! Some best approximation has its knots on inner abscissae or alone inside an
//! inner gap, with every piece covering two abscissae and gap knots never next
//! to data knots. Enumerating those configurations and solving each one exactly
//! therefore finds the global minimum.

mod config;
mod oracle;

use rayon::prelude::*;

use crate::data::DataSet;
use crate::error::Result;
use crate::norms::PNorm;
use crate::spline::BrokenLine;

pub use config::{enumerate_configs, solve_config, ConfigOutcome, Infeasible, Junction, KnotConfig};
pub use oracle::grid_oracle;

/// Result of one configuration in the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigStatus {
    Feasible(f64),
    Infeasible(Infeasible),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigTrace {
    pub config: KnotConfig,
    pub status: ConfigStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub spline: BrokenLine,
    /// `error_norm(data, spline, p)`.
    pub error: f64,
    pub config: KnotConfig,
    pub proper_knot_count: usize,
    /// Every configuration examined, in enumeration order.
    pub diagnostics: Vec<ConfigTrace>,
}

/// Best broken line with at most `k` knots under the discrete `p`-norm.
///
/// Ties within rounding are broken towards fewer junctions, then the
/// lexicographically smaller configuration, so the outcome does not depend on
/// the thread schedule.
pub fn best_fit(data: &DataSet, k: usize, p: PNorm) -> Result<FitResult> {
    let mu = data.mu();
    if mu < k + 1 {
        let spline = BrokenLine::interpolating(data);
        let config = KnotConfig::new((1..=mu).map(Junction::Data).collect());
        return Ok(FitResult {
            proper_knot_count: config::proper_knots(data, &spline)?,
            error: 0.0,
            diagnostics: vec![ConfigTrace { config: config.clone(), status: ConfigStatus::Feasible(0.0) }],
            config,
            spline,
        });
    }

    let configs = enumerate_configs(mu, k);
    let outcomes: Vec<ConfigOutcome> = configs
        .par_iter()
        .map(|c| solve_config(data, c, p))
        .collect::<Result<_>>()?;

    let diagnostics: Vec<ConfigTrace> = configs
        .iter()
        .zip(&outcomes)
        .map(|(c, o)| ConfigTrace {
            config: c.clone(),
            status: match o {
                ConfigOutcome::Feasible(f) => ConfigStatus::Feasible(f.error),
                ConfigOutcome::Infeasible(r) => ConfigStatus::Infeasible(*r),
            },
        })
        .collect();

    let feasible: Vec<&FitResult> = outcomes
        .iter()
        .filter_map(|o| match o {
            ConfigOutcome::Feasible(f) => Some(f),
            ConfigOutcome::Infeasible(_) => None,
        })
        .collect();
    // the empty configuration is always feasible
    let e_min = feasible.iter().map(|f| f.error).fold(f64::INFINITY, f64::min);
    let cutoff = e_min * (1.0 + 1e-13) + 1e-15 * data.value_scale();
    let chosen = feasible
        .into_iter()
        .filter(|f| f.error <= cutoff)
        .min_by(|a, b| a.config.cmp(&b.config))
        .expect("the single-line configuration is feasible");

    let mut result = chosen.clone();
    result.diagnostics = diagnostics;
    Ok(result)
}
