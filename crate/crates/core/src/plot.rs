//! Minimal, deterministic SVG scatter plots.
//!
//! Points are coloured by a scalar on a linear blue → yellow ramp over a fixed
//! range (Γ ∈ [0, 1] by default), so figures from different runs share a
//! colour scale. Overlay curves (ring boundaries, reference lines) are drawn
//! dashed on top. Identical input always yields byte-identical output.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 100.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const LOW: (f64, f64, f64) = (0.0, 0.0, 255.0);
const HIGH: (f64, f64, f64) = (255.0, 220.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
    pub color: String,
}

impl Overlay {
    pub fn curve(points: Vec<(f64, f64)>, closed: bool) -> Self {
        Overlay { points, closed, color: "#d62728".into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub color_label: String,
    pub color_range: (f64, f64),
    /// Fixed axis limits; fitted to the data when absent.
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            title: String::new(),
            x_label: "Re E".into(),
            y_label: "Im E".into(),
            color_label: "Γ".into(),
            color_range: (0.0, 1.0),
            x_range: None,
            y_range: None,
        }
    }
}

/// Linear blue → yellow colour for `value` within `range`, clamped.
pub fn color_for(value: f64, range: (f64, f64)) -> String {
    let span = range.1 - range.0;
    let t = if span > 0.0 && value.is_finite() { ((value - range.0) / span).clamp(0.0, 1.0) } else { 0.0 };
    let mix = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(LOW.0, HIGH.0), mix(LOW.1, HIGH.1), mix(LOW.2, HIGH.2))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fitted(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-3);
    (lo - pad, hi + pad)
}

/// Roughly five "nice" tick positions covering `range`.
pub fn ticks(range: (f64, f64)) -> Vec<f64> {
    let span = range.1 - range.0;
    if span.is_nan() || span <= 0.0 {
        return vec![range.0];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    let first = (range.0 / step).ceil() as i64;
    let last = (range.1 / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).map(|t| if t.abs() < step * 1e-9 { 0.0 } else { t }).collect()
}

/// Render a scatter plot with overlays to an SVG document.
pub fn scatter_svg(points: &[ScatterPoint], overlays: &[Overlay], spec: &PlotSpec) -> String {
    let xr = spec.x_range.unwrap_or_else(|| {
        fitted(points.iter().map(|p| p.x).chain(overlays.iter().flat_map(|o| o.points.iter().map(|p| p.0))))
    });
    let yr = spec.y_range.unwrap_or_else(|| {
        fitted(points.iter().map(|p| p.y).chain(overlays.iter().flat_map(|o| o.points.iter().map(|p| p.1))))
    });
    let (pw, ph) = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT, HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
    let sx = |x: f64| MARGIN_LEFT + (x - xr.0) / (xr.1 - xr.0) * pw;
    let sy = |y: f64| MARGIN_TOP + (yr.1 - y) / (yr.1 - yr.0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if !spec.title.is_empty() {
        let _ = writeln!(s, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&spec.title));
    }
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in ticks(xr) {
        let x = sx(t);
        let y = MARGIN_TOP + ph;
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y + 18.0, fmt_tick(t));
    }
    for t in ticks(yr) {
        let y = sy(t);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#, MARGIN_LEFT - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN_LEFT - 8.0, y + 4.0, fmt_tick(t));
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + pw / 2.0,
        HEIGHT - 15.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        MARGIN_TOP + ph / 2.0,
        MARGIN_TOP + ph / 2.0,
        escape(&spec.y_label)
    );

    let _ = writeln!(s, r#"<g stroke="none">"#);
    for p in points.iter().filter(|p| p.x.is_finite() && p.y.is_finite()) {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{}"/>"#,
            sx(p.x),
            sy(p.y),
            color_for(p.value, spec.color_range)
        );
    }
    let _ = writeln!(s, "</g>");

    for o in overlays.iter().filter(|o| o.points.len() >= 2) {
        let coords: Vec<String> = o.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let tag = if o.closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            r#"<{tag} points="{}" fill="none" stroke="{}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
            coords.join(" "),
            escape(&o.color)
        );
    }

    // Colour bar.
    let (bx, bw) = (WIDTH - MARGIN_RIGHT + 25.0, 15.0);
    let steps = 32;
    for k in 0..steps {
        let t0 = k as f64 / steps as f64;
        let value = spec.color_range.0 + (t0 + 0.5 / steps as f64) * (spec.color_range.1 - spec.color_range.0);
        let y = MARGIN_TOP + (1.0 - (k + 1) as f64 / steps as f64) * ph;
        let _ = writeln!(
            s,
            r#"<rect x="{bx:.1}" y="{y:.2}" width="{bw}" height="{:.2}" fill="{}"/>"#,
            ph / steps as f64 + 0.5,
            color_for(value, spec.color_range)
        );
    }
    let _ = writeln!(s, r#"<rect x="{bx:.1}" y="{MARGIN_TOP}" width="{bw}" height="{ph}" fill="none" stroke="black"/>"#);
    for (v, y) in [(spec.color_range.1, MARGIN_TOP), (spec.color_range.0, MARGIN_TOP + ph)] {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, bx + bw + 4.0, y + 4.0, fmt_tick(v));
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, bx + bw / 2.0, MARGIN_TOP - 8.0, escape(&spec.color_label));
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(t: f64) -> String {
    let s = format!("{t:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}
