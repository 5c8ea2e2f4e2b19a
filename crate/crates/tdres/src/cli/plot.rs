//! Deterministic standalone SVG line plots: axes, tick labels, one polyline
//! per labeled series, and a legend. Identical input produces byte-identical
//! output.

use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("no series to plot")]
    EmptySeries,
    #[error("series {0:?} has no points")]
    EmptyPoints(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One labeled (x, y) sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl PlotSeries {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 52.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn fmt_coord(v: f64) -> String {
    format!("{:.3}", v)
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{:.4}", v);
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        s
    } else {
        format!("{:.3e}", v)
    }
}

/// Renders the plot to an SVG string.
pub fn render_plot(
    series: &[PlotSeries],
    x_label: &str,
    y_label: &str,
) -> Result<String, PlotError> {
    if series.is_empty() {
        return Err(PlotError::EmptySeries);
    }
    for s in series {
        if s.points.is_empty() {
            return Err(PlotError::EmptyPoints(s.label.clone()));
        }
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for s in series {
        for &(x, y) in &s.points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if x1 == x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 == y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    // a little headroom so curves do not touch the frame
    let pad = (y1 - y0) * 0.05;
    y0 -= pad;
    y1 += pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w,
            MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // frame
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>",
        fmt_coord(MARGIN_LEFT),
        fmt_coord(MARGIN_TOP),
        fmt_coord(plot_w),
        fmt_coord(plot_h)
    );

    // ticks and grid
    let ticks = 5usize;
    for i in 0..=ticks {
        let fx = i as f64 / ticks as f64;
        let xv = x0 + fx * (x1 - x0);
        let (px, _) = to_px(xv, y0);
        let _ = writeln!(
            svg,
            "<line x1=\"{x}\" y1=\"{t}\" x2=\"{x}\" y2=\"{b}\" stroke=\"#ddd\" stroke-width=\"0.5\"/>",
            x = fmt_coord(px),
            t = fmt_coord(MARGIN_TOP),
            b = fmt_coord(MARGIN_TOP + plot_h)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{v}</text>",
            x = fmt_coord(px),
            y = fmt_coord(MARGIN_TOP + plot_h + 16.0),
            v = fmt_tick(xv)
        );

        let yv = y0 + fx * (y1 - y0);
        let (_, py) = to_px(x0, yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{l}\" y1=\"{y}\" x2=\"{r}\" y2=\"{y}\" stroke=\"#ddd\" stroke-width=\"0.5\"/>",
            l = fmt_coord(MARGIN_LEFT),
            r = fmt_coord(MARGIN_LEFT + plot_w),
            y = fmt_coord(py)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{v}</text>",
            x = fmt_coord(MARGIN_LEFT - 6.0),
            y = fmt_coord(py + 4.0),
            v = fmt_tick(yv)
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">{t}</text>",
        x = fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        y = fmt_coord(HEIGHT - 14.0),
        t = xml_escape(x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{y}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {y})\">{t}</text>",
        y = fmt_coord(MARGIN_TOP + plot_h / 2.0),
        t = xml_escape(y_label)
    );

    // series polylines
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for &(x, y) in &s.points {
            let (px, py) = to_px(x, y);
            let _ = write!(pts, "{},{} ", fmt_coord(px), fmt_coord(py));
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>",
            pts.trim_end()
        );
    }

    // legend, top right
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 + 16.0 * i as f64;
        let x = MARGIN_LEFT + plot_w - 150.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            x1 = fmt_coord(x),
            x2 = fmt_coord(x + 18.0),
            y = fmt_coord(y)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"11\">{t}</text>",
            x = fmt_coord(x + 24.0),
            y = fmt_coord(y + 4.0),
            t = xml_escape(&s.label)
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders and writes the plot file.
pub fn export_plot(
    series: &[PlotSeries],
    x_label: &str,
    y_label: &str,
    path: &Path,
) -> Result<(), PlotError> {
    let svg = render_plot(series, x_label, y_label)?;
    std::fs::write(path, svg).map_err(|source| PlotError::Io {
        path: path.display().to_string(),
        source,
    })
}
