use std::fmt::Write;

use super::SweepRow;
use crate::scheme::{success_curve_new, success_curve_old};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const Y_MAX: f64 = 0.25;
const SAMPLES: usize = 201;

fn to_px(p: f64, prob: f64) -> (f64, f64) {
    let x = MARGIN + p * (WIDTH - 2.0 * MARGIN);
    let y = HEIGHT - MARGIN - prob / Y_MAX * (HEIGHT - 2.0 * MARGIN);
    (x, y)
}

fn polyline(id: &str, color: &str, f: impl Fn(f64) -> f64) -> String {
    let points: Vec<String> = (0..SAMPLES)
        .map(|k| {
            let p = k as f64 / (SAMPLES - 1) as f64;
            let (x, y) = to_px(p, f(p));
            format!("{x:.3},{y:.3}")
        })
        .collect();
    format!(
        "<polyline id=\"{id}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
        points.join(" ")
    )
}

/// Success probability against `p` for identical inputs: `p^2/4` (this
/// scheme) and `16 p^3/81` (three-input scheme), with simulated diagonal
/// sweep rows drawn as markers.
pub fn render_comparison_svg(rows: &[SweepRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let (x0, y0) = to_px(0.0, 0.0);
    let (x1, y1) = to_px(1.0, Y_MAX);
    let _ = writeln!(
        s,
        "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\"><line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\"/><line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\"/></g>"
    );
    s.push_str("<g font-family=\"sans-serif\" font-size=\"12\">\n");
    for k in 0..=5 {
        let p = k as f64 / 5.0;
        let (x, y) = to_px(p, 0.0);
        let _ = writeln!(
            s,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{p:.1}</text>",
            y + 18.0
        );
        let prob = Y_MAX * k as f64 / 5.0;
        let (x, y) = to_px(0.0, prob);
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{prob:.2}</text>",
            x - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">single-photon probability p</text>",
        WIDTH / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{:.1}\" transform=\"rotate(-90 16 {:.1})\" text-anchor=\"middle\">success probability</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#1f77b4\">p^2/4 (two inputs)</text>",
        MARGIN + 12.0,
        MARGIN
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#d62728\">16p^3/81 (three inputs)</text>",
        MARGIN + 12.0,
        MARGIN + 16.0
    );
    s.push_str("</g>\n");

    s.push_str(&polyline("curve-new", "#1f77b4", |p| {
        success_curve_new(p).expect("p in [0, 1]")
    }));
    s.push_str(&polyline("curve-old", "#d62728", |p| {
        success_curve_old(p).expect("p in [0, 1]")
    }));

    s.push_str("<g id=\"simulated\" fill=\"#1f77b4\">\n");
    for row in rows.iter().filter(|r| r.is_diagonal()) {
        let (x, y) = to_px(row.p1, row.result.p_success);
        let _ = writeln!(s, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\"/>");
    }
    s.push_str("</g>\n</svg>\n");
    s
}
