//! Minimal deterministic SVG line-plot emitter.
//!
//! Fixed layout, fixed palette, fixed decimal formatting: identical input
//! produces byte-identical output.

use std::fmt::Write as _;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const W: f64 = 460.0;
const H: f64 = 360.0;
const ML: f64 = 64.0;
const MR: f64 = 18.0;
const MT: f64 = 34.0;
const MB: f64 = 46.0;

fn fmt(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).abs().max(1e-300);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| span / s <= 6.0)
        .unwrap_or(mag * 10.0);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Render panels side by side. Errors on an empty panel list or a panel
/// with no points.
pub fn render(panels: &[Panel]) -> Result<String, String> {
    if panels.is_empty() {
        return Err("no panels to draw".into());
    }
    for p in panels {
        if p.series.is_empty() || p.series.iter().all(|s| s.points.is_empty()) {
            return Err(format!("panel '{}' has no data", p.title));
        }
    }
    let total_w = W * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt(total_w),
        fmt(H),
        fmt(total_w),
        fmt(H)
    );
    let _ = writeln!(
        out,
        r#"<style>text{{font-family:sans-serif;font-size:11px}}.t{{font-size:13px;font-weight:bold}}.axis{{stroke:#000;stroke-width:1;fill:none}}.grid{{stroke:#ddd;stroke-width:0.5}}</style>"#
    );
    for (pi, panel) in panels.iter().enumerate() {
        let ox = pi as f64 * W;
        let (mut xlo, mut xhi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ylo, mut yhi) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &panel.series {
            for &(x, y) in &s.points {
                xlo = xlo.min(x);
                xhi = xhi.max(x);
                ylo = ylo.min(y);
                yhi = yhi.max(y);
            }
        }
        if !(xhi > xlo) {
            xhi = xlo + 1.0;
        }
        if !(yhi > ylo) {
            yhi = ylo + 1.0;
        }
        let pad = 0.05 * (yhi - ylo);
        ylo -= pad;
        yhi += pad;
        let px = |x: f64| ox + ML + (x - xlo) / (xhi - xlo) * (W - ML - MR);
        let py = |y: f64| H - MB - (y - ylo) / (yhi - ylo) * (H - MT - MB);

        let _ = writeln!(
            out,
            r#"<text class="t" x="{}" y="18" text-anchor="middle">{}</text>"#,
            fmt(ox + ML + (W - ML - MR) / 2.0),
            panel.title
        );
        for t in nice_ticks(xlo, xhi) {
            let _ = writeln!(
                out,
                r#"<line class="grid" x1="{0}" y1="{1}" x2="{0}" y2="{2}"/><text x="{0}" y="{3}" text-anchor="middle">{4}</text>"#,
                fmt(px(t)),
                fmt(py(ylo)),
                fmt(py(yhi)),
                fmt(H - MB + 16.0),
                fmt(t)
            );
        }
        for t in nice_ticks(ylo, yhi) {
            let _ = writeln!(
                out,
                r#"<line class="grid" x1="{0}" y1="{2}" x2="{1}" y2="{2}"/><text x="{3}" y="{4}" text-anchor="end">{5}</text>"#,
                fmt(px(xlo)),
                fmt(px(xhi)),
                fmt(py(t)),
                fmt(ox + ML - 6.0),
                fmt(py(t) + 4.0),
                fmt(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<rect class="axis" x="{}" y="{}" width="{}" height="{}"/>"#,
            fmt(ox + ML),
            fmt(MT),
            fmt(W - ML - MR),
            fmt(H - MT - MB)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            fmt(ox + ML + (W - ML - MR) / 2.0),
            fmt(H - 8.0),
            panel.x_label
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
            fmt(ox + 16.0),
            fmt(H / 2.0),
            fmt(ox + 16.0),
            fmt(H / 2.0),
            panel.y_label
        );
        for (si, s) in panel.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let mut d = String::new();
            for (k, &(x, y)) in s.points.iter().enumerate() {
                let _ = write!(
                    d,
                    "{}{},{}",
                    if k == 0 { "M" } else { " L" },
                    fmt(px(x)),
                    fmt(py(y))
                );
            }
            let _ = writeln!(
                out,
                r#"<path fill="none" stroke="{color}" stroke-width="1.5" d="{d}"/>"#
            );
            let ly = MT + 14.0 + 14.0 * si as f64;
            let _ = writeln!(
                out,
                r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{color}" stroke-width="2"/><text x="{3}" y="{4}">{5}</text>"#,
                fmt(ox + ML + 8.0),
                fmt(ly - 4.0),
                fmt(ox + ML + 28.0),
                fmt(ox + ML + 33.0),
                fmt(ly),
                s.label
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
