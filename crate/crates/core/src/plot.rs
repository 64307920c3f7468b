//! Minimal self-contained SVG output.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 50.0;
const PALETTE: [&str; 6] = [
    "#c0392b", "#2471a3", "#229954", "#7d3c98", "#d68910", "#273746",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
    LineAndMarkers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, style: Style) -> Self {
        Self {
            label: label.into(),
            points,
            style,
        }
    }
}

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let pts = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    (x0, x1, y0, y1)
}

/// Scatter/line chart with a legend and min/max axis labels.
pub fn chart(title: &str, x_label: &str, series: &[Series]) -> String {
    let (x0, x1, y0, y1) = bounds(series);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = header(title);
    let _ = writeln!(
        svg,
        r##"<rect x="{m}" y="{m}" width="{w:.1}" height="{h:.1}" fill="none" stroke="#888"/>"##,
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="{anchor}">{:.4}</text>"#,
            sx(x),
            HEIGHT - MARGIN + 14.0,
            x
        );
    }
    for y in [y0, y1] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{:.4}</text>"#,
            MARGIN - 4.0,
            sy(y) + 3.0,
            y
        );
    }

    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if matches!(s.style, Style::Line | Style::LineAndMarkers) {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
                pts.join(" ")
            );
        }
        if matches!(s.style, Style::Markers | Style::LineAndMarkers) {
            for &(x, y) in &s.points {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                    sx(x),
                    sy(y)
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 150.0,
            MARGIN + 16.0 + 14.0 * k as f64,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One row per snapshot, stacked top to bottom, each drawn as a polyline of
/// the displacement against the site index.
pub fn stacked_rows(title: &str, rows: &[(f64, Vec<f64>)]) -> String {
    let n = rows.first().map(|r| r.1.len()).unwrap_or(1).max(2);
    let peak = rows
        .iter()
        .flat_map(|r| r.1.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let row_h = (HEIGHT - 2.0 * MARGIN) / rows.len().max(1) as f64;
    let sx = |i: usize| MARGIN + i as f64 / (n - 1) as f64 * (WIDTH - 2.0 * MARGIN);

    let mut svg = header(title);
    for (r, (t, values)) in rows.iter().enumerate() {
        let base = MARGIN + row_h * (r as f64 + 0.5);
        let amp = if peak > 0.0 { 0.45 * row_h / peak } else { 0.0 };
        let _ = writeln!(
            svg,
            r##"<line x1="{m}" y1="{base:.2}" x2="{:.1}" y2="{base:.2}" stroke="#ccc"/>"##,
            WIDTH - MARGIN,
            m = MARGIN
        );
        let pts: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{:.2},{:.2}", sx(i), base - amp * v))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline fill="none" stroke="#2471a3" stroke-width="1.2" points="{}"/>"##,
            pts.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.2}" font-size="10" text-anchor="end">t={:.2}</text>"#,
            MARGIN - 4.0,
            base + 3.0,
            t
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn header(title: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_is_well_formed() {
        let s = Series::new("a<b", vec![(0.0, 1.0), (1.0, 2.0)], Style::LineAndMarkers);
        let svg = chart("t", "x", &[s]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn stacked_handles_flat_rows() {
        let svg = stacked_rows("t", &[(0.0, vec![0.0, 0.0, 0.0])]);
        assert!(svg.contains("<polyline"));
        assert!(!svg.contains("NaN"));
    }
}
