//! Minimal log-log scatter plot, one panel per graph, shared axes.

use std::fmt::Write;

pub struct Panel {
    pub title: String,
    /// (degree, inclusion probability); non-positive values are skipped.
    pub points: Vec<(f64, f64)>,
    /// Natural-log fit `ln pi = intercept + slope ln d`.
    pub fit: Option<(f64, f64)>,
}

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 48.0;

fn decade_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let (lo, hi) = (lo.floor(), hi.ceil());
    if hi > lo {
        (lo, hi)
    } else {
        (lo, lo + 1.0)
    }
}

pub fn render(panels: &[Panel]) -> String {
    let visible = |p: &&(f64, f64)| p.0 > 0.0 && p.1 > 0.0;
    let all = || panels.iter().flat_map(|p| p.points.iter().filter(visible));
    let (x0, x1) = decade_range(all().map(|p| p.0.log10()));
    let (y0, y1) = decade_range(all().map(|p| p.1.log10()));

    let width = panels.len() as f64 * (PANEL_W + MARGIN_L + MARGIN_R);
    let height = PANEL_H + MARGIN_T + MARGIN_B;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);

    for (i, panel) in panels.iter().enumerate() {
        let left = i as f64 * (PANEL_W + MARGIN_L + MARGIN_R) + MARGIN_L;
        let sx = |lx: f64| left + (lx - x0) / (x1 - x0) * PANEL_W;
        let sy = |ly: f64| MARGIN_T + (y1 - ly) / (y1 - y0) * PANEL_H;

        let _ = writeln!(s, r#"<g>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
            left + PANEL_W / 2.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{left:.1}" y="{MARGIN_T}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="black"/>"#
        );
        for k in x0 as i32..=x1 as i32 {
            let x = sx(k as f64);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{k}</text>"#,
                MARGIN_T + PANEL_H,
                MARGIN_T + PANEL_H + 5.0,
                MARGIN_T + PANEL_H + 18.0
            );
        }
        for k in y0 as i32..=y1 as i32 {
            let y = sy(k as f64);
            let _ = writeln!(
                s,
                r#"<line x1="{:.1}" y1="{y:.1}" x2="{left:.1}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{k}</text>"#,
                left - 5.0,
                left - 8.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">degree</text>"#,
            left + PANEL_W / 2.0,
            height - 10.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">inclusion probability</text>"#,
            left - 42.0,
            MARGIN_T + PANEL_H / 2.0,
            left - 42.0,
            MARGIN_T + PANEL_H / 2.0
        );
        for &(d, pi) in panel.points.iter().filter(visible) {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.1}" cy="{:.1}" r="1.6" fill="steelblue" fill-opacity="0.5"/>"#,
                sx(d.log10()),
                sy(pi.log10())
            );
        }
        if let Some((slope, intercept)) = panel.fit {
            // ln pi = a + b ln d  <=>  log10 pi = a / ln 10 + b log10 d
            let line = |lx: f64| intercept / std::f64::consts::LN_10 + slope * lx;
            let _ = writeln!(
                s,
                r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="crimson" stroke-width="1.5"/>"#,
                sx(x0),
                sy(line(x0).clamp(y0, y1)),
                sx(x1),
                sy(line(x1).clamp(y0, y1))
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" fill="crimson">slope {slope:.3}</text>"#,
                left + 8.0,
                MARGIN_T + 16.0
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_share_axes() {
        let panels = [
            Panel {
                title: "a".into(),
                points: vec![(1.0, 0.01), (10.0, 0.1), (0.0, 0.5)],
                fit: Some((1.0, (0.01f64).ln())),
            },
            Panel {
                title: "b<c".into(),
                points: vec![(100.0, 1.0), (5.0, 0.0)],
                fit: None,
            },
        ];
        let svg = render(&panels);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("1e2</text>").count(), 2);
        assert!(svg.contains("b&lt;c"));
        assert!(svg.contains("slope 1.000"));
    }
}
