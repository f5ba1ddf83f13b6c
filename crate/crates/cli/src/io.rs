//! CSV ingestion and hand-written JSON with a fixed field order.

use std::fmt::Write as _;
use std::path::Path;

use brokenline::{BrokenLine, DataSet, FitResult, Junction, PNorm, StructureReport, Check};
use serde::Deserialize;

use crate::Failure;

/// Reads `x,f` rows; a first row that does not parse as numbers is a header.
pub fn read_data(path: &Path) -> Result<DataSet, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let (mut xs, mut fs) = (Vec::new(), Vec::new());
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(Failure::input(format!(
                "{}: row {} has {} columns, expected 2",
                path.display(),
                row + 1,
                record.len()
            )));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(f)) => {
                xs.push(x);
                fs.push(f);
            }
            _ if row == 0 => {}
            _ => {
                return Err(Failure::input(format!(
                    "{}: row {} is not numeric: {:?}",
                    path.display(),
                    row + 1,
                    record.iter().collect::<Vec<_>>()
                )))
            }
        }
    }
    Ok(DataSet::new(xs, fs)?)
}

#[derive(Deserialize)]
struct SplineDoc {
    breakpoints: Vec<PointDoc>,
}

#[derive(Deserialize)]
struct PointDoc {
    t: f64,
    v: f64,
}

/// Parses `{"breakpoints": [{"t": …, "v": …}, …]}`; other fields are ignored,
/// so a fit result can be read back directly.
pub fn read_spline(path: &Path) -> Result<BrokenLine, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let doc: SplineDoc =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let points: Vec<(f64, f64)> = doc.breakpoints.iter().map(|b| (b.t, b.v)).collect();
    Ok(BrokenLine::from_points(&points)?)
}

/// 17 significant digits, so every value round-trips.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn breakpoints_json(s: &BrokenLine) -> String {
    let items: Vec<String> = s
        .breakpoints()
        .iter()
        .map(|b| format!("{{\"t\":{},\"v\":{}}}", num(b.t), num(b.v)))
        .collect();
    format!("[{}]", items.join(","))
}

pub fn spline_json(s: &BrokenLine) -> String {
    format!("{{\"breakpoints\":{}}}\n", breakpoints_json(s))
}

pub fn spline_csv(s: &BrokenLine) -> String {
    let mut out = String::from("t,v\n");
    for b in s.breakpoints() {
        let _ = writeln!(out, "{},{}", num(b.t), num(b.v));
    }
    out
}

/// Position of a junction in the fitted spline: the abscissa for a data knot,
/// the breakpoint inside the gap for a gap knot.
fn junction_position(data: &DataSet, s: &BrokenLine, j: Junction) -> f64 {
    match j {
        Junction::Data(q) => data.x(q),
        Junction::Gap(q) => s
            .knots()
            .iter()
            .map(|b| b.t)
            .find(|&t| data.gap_of(t) == Some(q))
            .unwrap_or_else(|| 0.5 * (data.x(q) + data.x(q + 1))),
    }
}

pub fn fit_json(data: &DataSet, fit: &FitResult, k: usize, p: PNorm) -> String {
    let config: Vec<String> = fit
        .config
        .junctions
        .iter()
        .map(|&j| {
            let (kind, q) = match j {
                Junction::Data(q) => ("data", q),
                Junction::Gap(q) => ("gap", q),
            };
            format!(
                "{{\"kind\":\"{kind}\",\"q\":{q},\"t\":{}}}",
                num(junction_position(data, &fit.spline, j))
            )
        })
        .collect();
    format!(
        "{{\"breakpoints\":{},\"error\":{},\"p\":\"{p}\",\"k\":{k},\"proper_knots\":{},\"config\":[{}]}}\n",
        breakpoints_json(&fit.spline),
        num(fit.error),
        fit.proper_knot_count,
        config.join(",")
    )
}

fn status(check: &Check) -> &'static str {
    match check {
        Check::Pass => "pass",
        Check::Fail(_) => "fail",
        Check::NotApplicable => "n/a",
    }
}

fn index_list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(","))
}

pub fn report_json(report: &StructureReport, error: f64, p: PNorm) -> String {
    let checks: Vec<String> = report
        .checks
        .iter()
        .map(|(prop, check)| {
            let (knots, abscissae) = match check {
                Check::Fail(w) => (index_list(&w.knots), index_list(&w.abscissae)),
                _ => ("[]".to_string(), "[]".to_string()),
            };
            format!(
                "{{\"property\":\"{}\",\"status\":\"{}\",\"knots\":{knots},\"abscissae\":{abscissae}}}",
                prop.letter(),
                status(check)
            )
        })
        .collect();
    format!(
        "{{\"p\":\"{p}\",\"error\":{},\"all_pass\":{},\"checks\":[{}]}}\n",
        num(error),
        report.all_pass(),
        checks.join(",")
    )
}

pub fn report_csv(report: &StructureReport) -> String {
    let mut out = String::from("property,status\n");
    for (prop, check) in &report.checks {
        let _ = writeln!(out, "{},{}", prop.letter(), status(check));
    }
    out
}

pub fn data_csv(data: &DataSet) -> String {
    let mut out = String::from("x,f\n");
    for (x, f) in data.points() {
        let _ = writeln!(out, "{},{}", num(x), num(f));
    }
    out
}
