//! Minimal SVG output: horizontal bar charts and single-series line charts.

use std::fmt::Write;

const WIDTH: f64 = 720.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, height: f64, title: &str, comment: Option<&str>) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    if let Some(c) = comment {
        let _ = writeln!(out, "<!-- {} -->", c.replace("--", "- -"));
    }
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

/// One horizontal bar per `(label, value)`, top to bottom in input order.
/// Bars are scaled by `|value|`; negative values are drawn in a second color.
pub fn bar_chart(title: &str, bars: &[(String, f64)], comment: Option<&str>) -> String {
    let row = 20.0;
    let top = 36.0;
    let label_w = 280.0;
    let plot_w = WIDTH - label_w - 80.0;
    let height = top + row * bars.len() as f64 + 20.0;
    let max = bars.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let mut out = String::new();
    header(&mut out, height, title, comment);
    for (i, (label, value)) in bars.iter().enumerate() {
        let y = top + row * i as f64;
        let w = if max > 0.0 { value.abs() / max * plot_w } else { 0.0 };
        let fill = if *value < 0.0 { "#c0504d" } else { "#4f81bd" };
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            label_w - 6.0,
            y + 14.0,
            escape(label)
        );
        let _ = writeln!(
            out,
            r#"<rect class="bar" x="{label_w}" y="{:.1}" width="{w:.2}" height="{:.1}" fill="{fill}"/>"#,
            y + 3.0,
            row - 6.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{value:.4}</text>"#,
            label_w + w + 4.0,
            y + 14.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Polyline through `points` with axis labels and the y-range annotated.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)], comment: Option<&str>) -> String {
    let height = 360.0;
    let (left, right, top, bottom) = (70.0, WIDTH - 20.0, 40.0, height - 50.0);
    let mut out = String::new();
    header(&mut out, height, title, comment);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if points.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1e-3;
        y0 -= 1e-3;
    }
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
    let sy = |y: f64| bottom - (y - y0) / (y1 - y0) * (bottom - top);
    let _ = writeln!(
        out,
        r#"<path d="M{left} {top} V{bottom} H{right}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        height - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(y_label)
    );
    for (v, y) in [(y0, bottom), (y1, top)] {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.4}</text>"#, left - 4.0, y + 4.0);
    }
    for (v, x) in [(x0, left), (x1, right)] {
        let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{v}</text>"#, bottom + 16.0);
    }
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#4f81bd" stroke-width="2"/>"##,
        coords.join(" ")
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_count_and_escaping() {
        let bars: Vec<(String, f64)> = (0..20).map(|i| (format!("f<{i}>"), i as f64 - 5.0)).collect();
        let svg = bar_chart("Top & more", &bars, Some("seed=1"));
        assert_eq!(svg.matches(r#"class="bar""#).count(), 20);
        assert!(svg.contains("f&lt;3&gt;"));
        assert!(svg.contains("Top &amp; more"));
        assert!(svg.contains("<!-- seed=1 -->"));
    }

    #[test]
    fn line_chart_has_all_points() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 0.5 + 0.1 * i as f64)).collect();
        let svg = line_chart("AUC", "step", "auc", &pts, None);
        let poly = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(poly.matches(',').count(), 5);
    }
}
