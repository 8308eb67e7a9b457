//! Minimal standalone SVG line plots (fixed 800×500 canvas).

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

const COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, xs: &[f64], ys: &[f64]) -> Self {
        Self { label: label.into(), points: xs.iter().copied().zip(ys.iter().copied()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

/// Roughly five round-numbered ticks covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_owned() } else { s.to_owned() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `plot`; every series needs at least two points.
pub fn render_svg(plot: &Plot) -> Result<String, CliError> {
    if plot.series.is_empty() {
        return Err(CliError::Output("plot has no series".into()));
    }
    if let Some(s) = plot.series.iter().find(|s| s.points.len() < 2) {
        return Err(CliError::Output(format!("series `{}` needs at least two points", s.label)));
    }
    let all = plot.series.iter().flat_map(|s| s.points.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0.is_finite() && y0.is_finite()) {
        return Err(CliError::Output("plot has no finite points".into()));
    }
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 <= 0.0 {
        let pad = if y0 == 0.0 { 1.0 } else { y0.abs() * 0.1 };
        y0 -= pad;
        y1 += pad;
    }
    let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        MARGIN_LEFT + pw / 2.0,
        escape(&plot.title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in ticks(x0, x1) {
        let x = sx(t);
        let yb = MARGIN_TOP + ph;
        let _ = writeln!(svg, r#"<line class="tick" x1="{x:.2}" y1="{yb}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, yb + 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            yb + 19.0,
            tick_label(t)
        );
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        MARGIN_LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {:.1})">{}</text>"#,
        MARGIN_TOP + ph / 2.0,
        MARGIN_TOP + ph / 2.0,
        escape(&plot.y_label)
    );
    for (i, s) in plot.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline data-label="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            escape(&s.label),
            pts.join(" ")
        );
        let ly = MARGIN_TOP + 12.0 + 20.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(svg, r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg(plot: &Plot, path: &Path) -> Result<(), CliError> {
    let text = render_svg(plot)?;
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(series: Vec<Series>) -> Plot {
        Plot { title: "t".into(), x_label: "z_mm".into(), y_label: "population".into(), series }
    }

    #[test]
    fn one_polyline_per_series() {
        let xs = [0.0, 1.0, 2.0];
        let p = plot(vec![
            Series::new("pop1", &xs, &[1.0, 0.5, 0.0]),
            Series::new("pop2", &xs, &[0.0, 0.1, 0.0]),
            Series::new("pop3", &xs, &[0.0, 0.4, 1.0]),
        ]);
        let svg = render_svg(&p).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        for label in ["pop1", "pop2", "pop3"] {
            assert!(svg.contains(&format!(r#"data-label="{label}""#)));
        }
        assert!(svg.contains(r#"width="800" height="500""#));
        assert!(svg.matches(r#"class="tick""#).count() >= 4);
    }

    #[test]
    fn single_point_series_is_rejected() {
        let p = plot(vec![Series::new("x", &[1.0], &[1.0])]);
        assert!(render_svg(&p).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.svg");
        assert!(emit_svg(&p, &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn flat_series_still_renders() {
        let p = plot(vec![Series::new("flat", &[0.0, 1.0], &[1.0, 1.0])]);
        assert!(render_svg(&p).unwrap().contains("<polyline"));
    }

    #[test]
    fn tick_values_are_round() {
        assert_eq!(ticks(0.0, 80.0), vec![0.0, 20.0, 40.0, 60.0, 80.0]);
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(tick_label(0.6000000000000001), "0.6");
    }
}
