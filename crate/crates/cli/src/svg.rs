//! Bare-bones SVG charts: enough to eyeball a curve or a box plot.

use std::fmt::Write;

use parity_curve::stats::GroupSummary;

const W: f64 = 720.0;
const H: f64 = 420.0;
const PAD_L: f64 = 70.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    /// Draw markers only, no connecting line.
    pub scatter: bool,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Frame {
        let (x0, x1) = bounds(xs);
        let (y0, y1) = bounds(ys);
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        PAD_L + (x - self.x0) / (self.x1 - self.x0) * (W - PAD_L - PAD_R)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD_B - (y - self.y0) / (self.y1 - self.y0) * (H - PAD_T - PAD_B)
    }
}

fn bounds(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = lo.abs().max(1.0) * 0.01;
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str, f: &Frame) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(title));
    let (l, r, t, b) = (PAD_L, W - PAD_R, PAD_T, H - PAD_B);
    let _ = writeln!(
        out,
        r#"<path d="M{l} {t}V{b}H{r}" fill="none" stroke="black"/>"#
    );
    for (v, anchor_x, anchor_y, a) in [
        (f.x0, f.px(f.x0), b + 16.0, "start"),
        (f.x1, f.px(f.x1), b + 16.0, "end"),
    ] {
        let _ = writeln!(out, r#"<text x="{anchor_x:.2}" y="{anchor_y:.2}" text-anchor="{a}">{}</text>"#, tick(v));
    }
    for v in [f.y0, f.y1] {
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, l - 6.0, f.py(v) + 4.0, tick(v));
    }
    if f.y0 < 0.0 && f.y1 > 0.0 {
        let y = f.py(0.0);
        let _ = writeln!(out, r##"<path d="M{l} {y:.2}H{r}" stroke="#999" stroke-dasharray="4 3"/>"##);
    }
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, (l + r) / 2.0, H - 12.0, esc(x_label));
    let _ = writeln!(
        out,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (t + b) / 2.0,
        esc(y_label)
    );
}

fn tick(v: f64) -> String {
    format!("{v:.4}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    let f = Frame::fit(all().map(|p| p.0), all().map(|p| p.1));
    let mut out = String::new();
    header(&mut out, title, x_label, y_label, &f);
    for (i, s) in series.iter().enumerate() {
        let c = COLORS[i % COLORS.len()];
        if s.scatter {
            for &(x, y) in &s.points {
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{c}"/>"#, f.px(x), f.py(y));
            }
        } else if !s.points.is_empty() {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
                .collect();
            let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#, pts.join(" "));
        }
        let ly = PAD_T + 14.0 * i as f64 + 8.0;
        let _ = writeln!(out, r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{c}"/>"#, W - PAD_R - 150.0, ly - 9.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, W - PAD_R - 135.0, esc(s.label));
    }
    out.push_str("</svg>\n");
    out
}

pub fn box_plot(title: &str, x_label: &str, groups: &[GroupSummary]) -> String {
    let n = groups.len().max(1) as f64;
    let ys = groups.iter().flat_map(|g| {
        let s = &g.summary;
        [s.lower_whisker, s.upper_whisker]
            .into_iter()
            .chain(s.outliers.iter().copied())
    });
    let f = Frame::fit([0.0, n].into_iter(), ys);
    let mut out = String::new();
    header(&mut out, title, x_label, "implied yield", &f);
    let slot = (W - PAD_L - PAD_R) / n;
    for (i, g) in groups.iter().enumerate() {
        let s = &g.summary;
        let cx = f.px(i as f64 + 0.5);
        let hw = (slot * 0.3).max(1.0);
        let _ = writeln!(
            out,
            r#"<path d="M{cx:.2} {:.2}V{:.2}M{cx:.2} {:.2}V{:.2}" stroke="black"/>"#,
            f.py(s.lower_whisker),
            f.py(s.q1),
            f.py(s.q3),
            f.py(s.upper_whisker)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#cde" stroke="black"/>"##,
            cx - hw,
            f.py(s.q3),
            2.0 * hw,
            (f.py(s.q1) - f.py(s.q3)).max(0.5)
        );
        let _ = writeln!(
            out,
            r#"<path d="M{:.2} {:.2}H{:.2}" stroke="black" stroke-width="2"/>"#,
            cx - hw,
            f.py(s.median),
            cx + hw
        );
        for &o in &s.outliers {
            let _ = writeln!(out, r#"<circle cx="{cx:.2}" cy="{:.2}" r="2" fill="none" stroke="red"/>"#, f.py(o));
        }
    }
    out.push_str("</svg>\n");
    out
}
