//! Static plot of data, fitted broken line and knots.

use std::fmt::Write as _;

use brokenline::{BrokenLine, DataSet};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const TICKS: usize = 5;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Data knots get a single circle, knots between abscissae a double circle.
pub fn plot(data: &DataSet, s: &BrokenLine) -> String {
    let values = data.fs().iter().chain(s.breakpoints().iter().map(|b| &b.v));
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    let frame = Frame { x0: data.a(), x1: data.b(), y0: lo - pad, y1: hi + pad };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    axes(&mut out, &frame);

    for (x, f) in data.points() {
        let _ = writeln!(
            out,
            "<circle class=\"data\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"black\"/>",
            frame.px(x),
            frame.py(f)
        );
    }
    let points: Vec<String> = s
        .breakpoints()
        .iter()
        .map(|b| format!("{:.2},{:.2}", frame.px(b.t), frame.py(b.v)))
        .collect();
    let _ = writeln!(
        out,
        "<polyline class=\"spline\" points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>",
        points.join(" ")
    );
    for knot in s.knots() {
        let (cx, cy) = (frame.px(knot.t), frame.py(knot.v));
        if data.index_of(knot.t).is_some() {
            let _ = writeln!(
                out,
                "<circle class=\"knot-data\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"5\" fill=\"none\" stroke=\"crimson\"/>"
            );
        } else {
            let _ = writeln!(
                out,
                "<g class=\"knot-interior\" fill=\"none\" stroke=\"crimson\"><circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"5\"/><circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"8\"/></g>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn axes(out: &mut String, frame: &Frame) {
    let (left, right) = (MARGIN, WIDTH - MARGIN);
    let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        "<path class=\"axes\" d=\"M{left},{top} V{bottom} H{right}\" fill=\"none\" stroke=\"gray\"/>"
    );
    for i in 0..=TICKS {
        let u = i as f64 / TICKS as f64;
        let x = frame.x0 + u * (frame.x1 - frame.x0);
        let y = frame.y0 + u * (frame.y1 - frame.y0);
        let (px, py) = (frame.px(x), frame.py(y));
        let _ = writeln!(
            out,
            "<line x1=\"{px:.2}\" y1=\"{bottom}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"gray\"/><text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
            bottom + 4.0,
            bottom + 16.0,
            label(x)
        );
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{left}\" y2=\"{py:.2}\" stroke=\"gray\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"end\">{}</text>",
            left - 4.0,
            left - 6.0,
            py + 3.0,
            label(y)
        );
    }
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}
