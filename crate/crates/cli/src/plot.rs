//! Log-log convergence plots as standalone SVG.

use std::fmt::Write as _;
use std::path::Path;

use jumpmc_core::config::MethodSpec;
use jumpmc_core::mlmc::{loglog_slope, SummaryRow};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 64.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Series {
    label: String,
    color: &'static str,
    points: Vec<(f64, f64)>,
}

struct LogAxis {
    lo: f64,
    hi: f64,
}

impl LogAxis {
    fn fit(values: impl Iterator<Item = f64>) -> Option<Self> {
        let logs: Vec<f64> = values.filter(|v| *v > 0.0 && v.is_finite()).map(f64::log10).collect();
        let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            return None;
        }
        let pad = ((hi - lo) * 0.08).max(0.25);
        Some(LogAxis { lo: lo - pad, hi: hi + pad })
    }

    fn frac(&self, v: f64) -> f64 {
        (v.log10() - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<i32> {
        (self.lo.ceil() as i32..=self.hi.floor() as i32).collect()
    }
}

fn panel(
    svg: &mut String,
    left: f64,
    title: &str,
    x_label: &str,
    series: &[Series],
    guides: bool,
) {
    let w = WIDTH / 2.0 - 1.5 * MARGIN;
    let h = HEIGHT - 2.2 * MARGIN;
    let top = MARGIN;
    let _ = writeln!(
        svg,
        r##"<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="#444"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="15">{title}</text>"#,
        left + w / 2.0,
        top - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{x_label}</text>"#,
        left + w / 2.0,
        top + h + 40.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" text-anchor="middle" font-size="13" transform="rotate(-90 {x} {y})">relative RMSE</text>"#,
        x = left - 46.0,
        y = top + h / 2.0
    );
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    let (Some(xa), Some(ya)) = (
        LogAxis::fit(all().filter(|p| p.1 > 0.0).map(|p| p.0)),
        LogAxis::fit(all().filter(|p| p.0 > 0.0).map(|p| p.1)),
    ) else {
        return;
    };
    let px = |x: f64| left + xa.frac(x) * w;
    let py = |y: f64| top + h - ya.frac(y) * h;

    for k in xa.ticks() {
        let x = px(10f64.powi(k));
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#ddd"/><text x="{x}" y="{}" text-anchor="middle" font-size="11">1e{k}</text>"##,
            top,
            top + h,
            top + h + 16.0
        );
    }
    for k in ya.ticks() {
        let y = py(10f64.powi(k));
        let _ = writeln!(
            svg,
            r##"<line x1="{left}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end" font-size="11">1e{k}</text>"##,
            left + w,
            left - 6.0,
            y + 4.0
        );
    }

    if guides {
        // order-1 and order-2 lines through the coarsest point of the first series
        if let Some(&(x0, y0)) = series
            .first()
            .and_then(|s| s.points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).max_by(|a, b| a.0.total_cmp(&b.0)))
        {
            let x1 = 10f64.powf(xa.lo);
            for (order, dash) in [(1.0, "6 4"), (2.0, "2 3")] {
                let y1 = y0 * (x1 / x0).powf(order);
                let _ = writeln!(
                    svg,
                    r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888" stroke-dasharray="{dash}"/><text x="{}" y="{}" font-size="11" fill="#666">order {order}</text>"##,
                    px(x0),
                    py(y0),
                    px(x1),
                    py(y1),
                    px(x1) + 4.0,
                    py(y1).clamp(top + 12.0, top + h - 4.0)
                );
            }
        }
    }

    let _ = writeln!(svg, r#"<g clip-path="url(#clip{})">"#, if left < WIDTH / 2.0 { 0 } else { 1 });
    for s in series {
        let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| p.0 > 0.0 && p.1 > 0.0).collect();
        if pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
                path.join(" "),
                s.color
            );
        }
        for &(x, y) in &pts {
            let _ = writeln!(
                svg,
                r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#,
                px(x),
                py(y),
                s.color
            );
        }
    }
    let _ = writeln!(svg, "</g>");
}

fn series_for(summary: &[SummaryRow], x: impl Fn(&SummaryRow) -> f64) -> Vec<Series> {
    let mut methods: Vec<MethodSpec> = summary.iter().map(|s| s.method).collect();
    methods.sort();
    methods.dedup();
    methods
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let rows: Vec<&SummaryRow> = summary.iter().filter(|s| s.method == m).collect();
            let (hs, rmse): (Vec<f64>, Vec<f64>) = rows.iter().map(|s| (s.h_bar, s.rmse)).unzip();
            let label = match loglog_slope(&hs, &rmse) {
                Some(slope) => format!("{m} (slope {slope:.2})"),
                None => m.to_string(),
            };
            Series {
                label,
                color: COLORS[i % COLORS.len()],
                points: rows.iter().map(|s| (x(s), s.rmse)).collect(),
            }
        })
        .collect()
}

/// SVG with RMSE against `h_L` (left) and against mean wall time (right).
pub fn render_svg(summary: &[SummaryRow]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let pw = WIDTH / 2.0 - 1.5 * MARGIN;
    let ph = HEIGHT - 2.2 * MARGIN;
    let lefts = [MARGIN * 1.2, WIDTH / 2.0 + MARGIN * 0.8];
    let _ = writeln!(svg, "<defs>");
    for (i, l) in lefts.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<clipPath id="clip{i}"><rect x="{l}" y="{MARGIN}" width="{pw}" height="{ph}"/></clipPath>"#
        );
    }
    let _ = writeln!(svg, "</defs>");

    let by_h = series_for(summary, |s| s.h_bar);
    let by_time = series_for(summary, |s| s.mean_wall_time.as_secs_f64());
    panel(&mut svg, lefts[0], "RMSE vs refinement", "mesh size h_L", &by_h, true);
    panel(&mut svg, lefts[1], "RMSE vs time", "mean wall time per estimate [s]", &by_time, false);

    let legend_y = HEIGHT - 0.55 * MARGIN;
    for (i, s) in by_h.iter().enumerate() {
        let x = MARGIN * 1.2 + i as f64 * 230.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend"><circle cx="{x}" cy="{legend_y}" r="5" fill="{}"/><text x="{}" y="{}" font-size="12">{}</text></g>"#,
            s.color,
            x + 10.0,
            legend_y + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_plot(summary: &[SummaryRow], path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render_svg(summary))
}
