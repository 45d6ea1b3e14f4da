//! Static SVG convergence plots.

use std::fmt::Write as _;
use std::path::Path;

use super::SummaryCurve;
use crate::error::{Error, Result};

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn bounds(curves: &[SummaryCurve]) -> ((f64, f64), (f64, f64)) {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for c in curves {
        x.0 = x.0.min(c.n0 as f64);
        x.1 = x.1.max((c.n0 + c.mean.len().saturating_sub(1)) as f64);
        for v in c.mean.iter().chain(&c.median).filter(|v| v.is_finite()) {
            y.0 = y.0.min(*v);
            y.1 = y.1.max(*v);
        }
    }
    let widen = |(lo, hi): (f64, f64), pad: f64| {
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo - pad * (hi - lo), hi + pad * (hi - lo))
        }
    };
    (widen(x, 0.0), widen(y, 0.05))
}

/// Mean (solid) and median (dashed) running-best curves against the number
/// of evaluations `n = n0 + k`.
pub fn svg_document(curves: &[SummaryCurve]) -> String {
    let ((x0, x1), (y0, y1)) = bounds(curves);
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT},{TOP} V{} H{}" fill="none" stroke="black"/>"#,
        TOP + ph,
        LEFT + pw
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<line x1="{0:.1}" y1="{1}" x2="{0:.1}" y2="{2}" stroke="black"/><text x="{0:.1}" y="{3}" text-anchor="middle">{4}</text>"#,
            px(xv),
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            format_tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1:.1}" x2="{2}" y2="{1:.1}" stroke="black"/><text x="{3}" y="{4:.1}" text-anchor="end">{5}</text>"#,
            LEFT - 5.0,
            py(yv),
            LEFT,
            LEFT - 8.0,
            py(yv) + 4.0,
            format_tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{}" text-anchor="middle">n (total evaluations)</text>"#,
        LEFT + pw / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16,{:.1}) rotate(-90)" text-anchor="middle">running best f_min</text>"#,
        TOP + ph / 2.0
    );

    let mut legend_y = TOP + 10.0;
    for (ci, c) in curves.iter().enumerate() {
        let colour = COLOURS[ci % COLOURS.len()];
        for (stat, values, dash) in [
            ("mean", &c.mean, ""),
            ("median", &c.median, r#" stroke-dasharray="6 4""#),
        ] {
            let pts: Vec<String> = values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_finite())
                .map(|(k, v)| format!("{:.2},{:.2}", px((c.n0 + k) as f64), py(*v)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline data-method="{m}" data-stat="{stat}" points="{p}" fill="none" stroke="{colour}" stroke-width="1.5"{dash}/>"#,
                m = c.method,
                p = pts.join(" "),
            );
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{legend_y}" x2="{}" y2="{legend_y}" stroke="{colour}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{} {stat}</text>"#,
                lx + 24.0,
                lx + 30.0,
                legend_y + 4.0,
                c.method
            );
            legend_y += 18.0;
        }
    }
    s.push_str("</svg>\n");
    s
}

fn format_tick(v: f64) -> String {
    if v == v.round() && v.abs() < 1e6 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

pub fn render_svg(curves: &[SummaryCurve], path: &Path) -> Result<()> {
    std::fs::write(path, svg_document(curves)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
