//! Minimal self-contained SVG line charts.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Tick step of the form {1, 2, 5} * 10^k giving about five ticks.
fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let m = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

/// Padded data range; degenerate ranges are widened.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        // Avoid printing -0.
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders the chart. Output depends only on the input.
pub fn render_svg(chart: &Chart) -> Result<String, CliError> {
    if chart.series.is_empty() || chart.series.iter().any(|s| s.points.is_empty()) {
        return Err(CliError::Usage("a chart needs at least one nonempty series".into()));
    }
    let pts = || chart.series.iter().flat_map(|s| s.points.iter());
    if pts().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(CliError::Runtime("cannot plot non-finite values".into()));
    }
    let (x0, x1) = range(pts().map(|p| p.0));
    let (y0, y1) = range(pts().map(|p| p.1));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let w = &mut s;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(w, r#"<text x="{:.3}" y="22" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, esc(&chart.title)).unwrap();

    // Axes and grid.
    writeln!(w, r##"<g stroke="#999" stroke-width="1">"##).unwrap();
    writeln!(w, r#"<line x1="{LEFT:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, TOP + ph, LEFT + pw, TOP + ph).unwrap();
    writeln!(w, r#"<line x1="{LEFT:.3}" y1="{TOP:.3}" x2="{LEFT:.3}" y2="{:.3}"/>"#, TOP + ph).unwrap();
    writeln!(w, "</g>").unwrap();
    writeln!(w, r##"<g class="ticks" fill="#333">"##).unwrap();
    for t in ticks(x0, x1) {
        let x = sx(t);
        writeln!(w, r##"<line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="#999"/>"##, TOP + ph, TOP + ph + 5.0).unwrap();
        writeln!(w, r#"<text x="{x:.3}" y="{:.3}" text-anchor="middle">{}</text>"#, TOP + ph + 19.0, label(t)).unwrap();
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        writeln!(w, r##"<line x1="{:.3}" y1="{y:.3}" x2="{LEFT:.3}" y2="{y:.3}" stroke="#999"/>"##, LEFT - 5.0).unwrap();
        writeln!(w, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#, LEFT - 8.0, y + 4.0, label(t)).unwrap();
    }
    writeln!(w, "</g>").unwrap();
    writeln!(w, r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 12.0, esc(&chart.x_label)).unwrap();
    writeln!(
        w,
        r#"<text x="16" y="{:.3}" text-anchor="middle" transform="rotate(-90 16 {:.3})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        esc(&chart.y_label)
    )
    .unwrap();

    for (k, series) in chart.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let coords: Vec<String> = series.points.iter().map(|p| format!("{:.3},{:.3}", sx(p.0), sy(p.1))).collect();
        writeln!(w, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, coords.join(" ")).unwrap();
        for p in &series.points {
            writeln!(w, r#"<circle cx="{:.3}" cy="{:.3}" r="2.5" fill="{color}"/>"#, sx(p.0), sy(p.1)).unwrap();
        }
    }

    writeln!(w, r#"<g class="legend">"#).unwrap();
    for (k, series) in chart.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let y = TOP + 12.0 + 18.0 * k as f64;
        writeln!(w, r#"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="{color}" stroke-width="2"/>"#, LEFT + 12.0, LEFT + 36.0)
            .unwrap();
        writeln!(w, r#"<text x="{:.3}" y="{:.3}">{}</text>"#, LEFT + 42.0, y + 4.0, esc(&series.label)).unwrap();
    }
    writeln!(w, "</g>").unwrap();
    writeln!(w, "</svg>").unwrap();
    Ok(s)
}

/// Writes the chart to `path`.
pub fn emit_svg(chart: &Chart, path: &Path) -> Result<(), CliError> {
    let svg = render_svg(chart)?;
    std::fs::write(path, svg).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(series: Vec<Series>) -> Chart {
        Chart { title: "t".into(), x_label: "x".into(), y_label: "y".into(), series }
    }

    #[test]
    fn ticks_are_nice() {
        assert_eq!(nice_step(10.0), 2.0);
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(label(0.6000000000000001), "0.6");
    }

    #[test]
    fn single_point_series() {
        let svg = render_svg(&chart(vec![Series { label: "one".into(), points: vec![(3.0, 3.0)] }])).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains(">one</text>"));
    }

    #[test]
    fn rejects_empty() {
        assert!(render_svg(&chart(vec![])).is_err());
        assert!(render_svg(&chart(vec![Series { label: "e".into(), points: vec![] }])).is_err());
    }
}
