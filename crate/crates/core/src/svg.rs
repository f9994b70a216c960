//! Minimal SVG line charts for sweep and rejection-curve output.

use std::fmt::Write as _;

use crate::entropy::SweepReport;
use crate::mask::RejectionCurve;

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 120.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl LineChart {
    pub fn render(&self) -> String {
        let points = self.series.iter().flat_map(|s| s.points.iter());
        let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
        for &(x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1) = (0.0, 1.0);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        let y1 = if y1 > 0.0 { y1.ceil() } else { 1.0 };
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let px = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64| MARGIN_TOP + (1.0 - y / y1) * plot_h;

        let mut out = String::new();
        let w = &mut out;
        writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        writeln!(
            w,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        )
        .unwrap();
        writeln!(
            w,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        )
        .unwrap();

        for step in 0..=4 {
            let y = y1 * step as f64 / 4.0;
            writeln!(
                w,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                py(y) + 4.0,
                trim_number(y)
            )
            .unwrap();
        }
        for step in 0..=4 {
            let t = x0 + (x1 - x0) * step as f64 / 4.0;
            let x = px(t);
            writeln!(
                w,
                r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                HEIGHT - MARGIN_BOTTOM + 16.0,
                trim_number(t)
            )
            .unwrap();
        }
        writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let path: Vec<String> = series
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            writeln!(
                w,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            )
            .unwrap();
            let ly = MARGIN_TOP + 14.0 + 16.0 * i as f64;
            let lx = WIDTH - MARGIN_RIGHT + 10.0;
            writeln!(
                w,
                r#"<line x1="{lx}" y1="{:.1}" x2="{}" y2="{:.1}" stroke="{color}" stroke-width="2"/><text x="{}" y="{ly:.1}">{}</text>"#,
                ly - 4.0,
                lx + 18.0,
                ly - 4.0,
                lx + 24.0,
                escape(&series.label)
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// One curve per window length, information content against start bit.
pub fn sweep_chart(report: &SweepReport) -> LineChart {
    let mut lengths: Vec<u32> = report.rows.iter().map(|r| r.length).collect();
    lengths.dedup();
    let series = lengths
        .into_iter()
        .map(|m| Series {
            label: format!("m = {m}"),
            points: report
                .rows_for_length(m)
                .map(|r| (f64::from(r.start), r.info_bits))
                .collect(),
        })
        .collect();
    LineChart {
        title: format!("Information in {} bits", report.scheme),
        x_label: "start bit i".into(),
        y_label: "information (bits)".into(),
        series,
    }
}

/// One curve per mask size, rejection rate against k.
pub fn rejection_chart(curve: &RejectionCurve) -> LineChart {
    let mut sizes: Vec<u64> = curve.rows.iter().map(|r| r.mask_size).collect();
    sizes.dedup();
    let series = sizes
        .into_iter()
        .map(|m| Series {
            label: format!("M = {m}"),
            points: curve
                .rows
                .iter()
                .filter(|r| r.mask_size == m)
                .map(|r| (r.k as f64, r.rate))
                .collect(),
        })
        .collect();
    LineChart {
        title: format!("Unwanted-rejection rate ({})", curve.model),
        x_label: "addresses wanted k".into(),
        y_label: "probability of rejecting unwanted frames".into(),
        series,
    }
}
