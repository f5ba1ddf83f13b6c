//! Reference fixtures.

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::spline::{Breakpoint, BrokenLine};

/// Member `i ≥ 2` of a minimizing sequence for the data `(−1, 1), (0, 1), (1, 1)` whose
/// values at the abscissae are all 1 while its peak `(i + 1)/2` at `x = 1/2` grows without bound.
pub fn remark1_fixture(i: u32) -> Result<BrokenLine> {
    if i < 2 {
        return Err(Error::Argument(format!("fixture index must be >= 2, got {i}")));
    }
    let i = f64::from(i);
    BrokenLine::new(vec![
        Breakpoint::new(-1.0, 1.0),
        Breakpoint::new(-1.0 / i, 1.0 / i),
        Breakpoint::new(0.5, (i + 1.0) / 2.0),
        Breakpoint::new(1.0, 1.0),
    ])
}

/// The three data points matched exactly by every [`remark1_fixture`].
pub fn remark1_data() -> DataSet {
    DataSet::new(vec![-1.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]).expect("valid fixture data")
}

/// Data and broken line of the 19-point, five-knot illustration: knots at 3.3 and 9.0 sit
/// between abscissae, knots at 5.3, 7.1 and 10.9 coincide with abscissae.
pub fn five_knot_illustration() -> (DataSet, BrokenLine) {
    let points = [
        (0.0, 2.2),
        (0.7, 1.9),
        (1.4, 1.5),
        (2.2, 1.3),
        (3.9, 1.8),
        (4.4, 2.4),
        (4.8, 3.3),
        (5.3, 4.3),
        (6.0, 3.1),
        (6.6, 2.4),
        (7.1, 1.4),
        (7.7, 1.5),
        (8.3, 1.2),
        (9.6, 1.9),
        (10.4, 2.9),
        (10.9, 3.8),
        (12.4, 2.3),
        (13.3, 1.9),
        (14.2, 1.4),
    ];
    let data = DataSet::from_points(&points).expect("valid fixture data");
    let spline = BrokenLine::from_points(&[
        (0.0, 2.2),
        (3.3, 0.7),
        (5.3, 4.1),
        (7.1, 1.6),
        (9.0, 1.0),
        (10.9, 3.6),
        (14.2, 1.4),
    ])
    .expect("valid fixture spline");
    (data, spline)
}
