//! Global best approximation of discrete data by continuous broken lines with
//! at most `k` free knots under a discrete L_p norm, `1 ≤ p ≤ ∞`.
//!
//! ```
//! use brokenline::{best_fit, DataSet, PNorm};
//!
//! let data = DataSet::from_points(&[(0.0, 0.0), (1.0, 1.0), (3.0, 1.0), (4.0, 0.0)]).unwrap();
//! let fit = best_fit(&data, 1, PNorm::Two).unwrap();
//! assert!(fit.error < 1e-12);
//! assert_eq!(fit.spline.knots()[0].t, 2.0);
//! ```

mod data;
mod error;
pub mod fixed_knot;
mod fixtures;
pub mod generate;
mod knots;
mod norms;
pub mod regularize;
mod simplex;
mod spline;
pub mod solver;
pub mod structure;

pub use data::DataSet;
pub use error::{Error, Result};
pub use fixed_knot::{fit_chain, fit_line, ChainFit, ChainProblem};
pub use fixtures::{five_knot_illustration, remark1_data, remark1_fixture};
pub use knots::{classify_knots, KnotLabel, Position, Properness};
pub use norms::{error_norm, residuals, PNorm};
pub use regularize::{divided_difference_bound, regularize, regularize_traced, RegularizationBounds, Step, TraceEntry};
pub use solver::{
    best_fit, enumerate_configs, grid_oracle, solve_config, ConfigOutcome, ConfigStatus, ConfigTrace, FitResult, Infeasible,
    Junction, KnotConfig,
};
pub use spline::{Breakpoint, BrokenLine, Line};
pub use structure::{check_structure, Check, Property, StructureReport, Tolerances, Witness};
