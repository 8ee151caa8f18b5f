//! Minimal SVG histogram with a density overlay.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const PAD: f64 = 40.0;
const OVERLAY_POINTS: usize = 200;

/// Density histogram of `sample`; `cdf`, when given, is differenced on
/// 200 points to draw the reference density.
pub fn histogram(sample: &[f64], cdf: Option<&dyn Fn(f64) -> f64>, title: &str) -> String {
    let mut sorted: Vec<f64> = sample.iter().copied().filter(|x| x.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if sorted.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let (mut lo, mut hi) = (sorted[0], sorted[sorted.len() - 1]);
    if hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let bins = ((sorted.len() as f64).sqrt().ceil() as usize).clamp(5, 60);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in &sorted {
        counts[(((x - lo) / width) as usize).min(bins - 1)] += 1;
    }
    let total = sorted.len() as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (total * width)).collect();

    let overlay: Vec<(f64, f64)> = cdf
        .map(|f| {
            let h = (hi - lo) / (2.0 * OVERLAY_POINTS as f64);
            (0..OVERLAY_POINTS)
                .map(|i| {
                    let x = lo + (hi - lo) * (i as f64 + 0.5) / OVERLAY_POINTS as f64;
                    let d = ((f(x + h) - f(x - h)) / (2.0 * h)).max(0.0);
                    (x, if d.is_finite() { d } else { 0.0 })
                })
                .collect()
        })
        .unwrap_or_default();
    let ymax = heights
        .iter()
        .chain(overlay.iter().map(|p| &p.1))
        .fold(0.0f64, |a, &b| a.max(b))
        .max(f64::MIN_POSITIVE);
    let sx = |x: f64| PAD + (x - lo) / (hi - lo) * (WIDTH - 2.0 * PAD);
    let sy = |y: f64| HEIGHT - PAD - y / ymax * (HEIGHT - 2.0 * PAD);

    for (i, &h) in heights.iter().enumerate() {
        let x0 = sx(lo + i as f64 * width);
        let x1 = sx(lo + (i + 1) as f64 * width);
        let _ = writeln!(
            svg,
            r##"<rect x="{x0:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd"/>"##,
            sy(h),
            x1 - x0,
            sy(0.0) - sy(h)
        );
    }
    if !overlay.is_empty() {
        let pts: Vec<String> = overlay.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
            pts.join(" ")
        );
    }
    let _ = writeln!(
        svg,
        r#"<line x1="{PAD}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="black"/>"#,
        sy(0.0),
        WIDTH - PAD
    );
    let _ = writeln!(
        svg,
        r#"<text x="{PAD}" y="{:.2}" font-size="12" font-family="sans-serif">{lo:.4}</text>"#,
        HEIGHT - PAD / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="end">{hi:.4}</text>"#,
        WIDTH - PAD,
        HEIGHT - PAD / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" font-family="sans-serif" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        PAD / 2.0,
        escape(title)
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bars_and_overlay() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        let f = |x: f64| x.clamp(0.0, 1.0);
        let svg = histogram(&xs, Some(&f), "a < b");
        assert_eq!(svg.matches("<rect").count(), 1 + 10);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("a &lt; b"));
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(pts.split(' ').count(), 200);
    }

    #[test]
    fn constant_sample() {
        let svg = histogram(&[1.0; 10], None, "flat");
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("NaN"));
    }
}
