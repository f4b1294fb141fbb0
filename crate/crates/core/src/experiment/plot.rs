//! Self-contained SVG plot of a sweep: mean relative giant size per grid
//! point (data series) against the branching-process survival probability
//! (theory curve), both as functions of the selection probability.

use std::fmt::Write as _;
use std::path::Path;

use crate::branching::survival_poisson;
use crate::error::{Error, Result};

use super::{mean_relative_giant, output::write_atomically, SweepRow};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 40.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 72.0;
const DATA_COLOR: &str = "#1f6fb4";
const THEORY_COLOR: &str = "#c43b3b";

/// Renders the plot for rows of a single (n, tree) sweep.
pub fn render_plot_svg(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::domain("plot needs at least one sweep row"));
    }
    let n = rows[0].n;
    let tree_id = &rows[0].tree_id;
    if rows.iter().any(|r| r.n != n || &r.tree_id != tree_id) {
        return Err(Error::domain(
            "plot rows must come from a single (n, tree) sweep",
        ));
    }

    let mut series = mean_relative_giant(rows);
    series.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite lambdas"));
    let (lambda_min, lambda_max) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.1), hi.max(s.1))
        });
    let pad = ((lambda_max - lambda_min) * 0.05)
        .max(lambda_max * 0.02)
        .max(1e-4);
    let x_lo = (lambda_min - pad).max(0.0);
    let x_hi = lambda_max + pad;
    let (y_lo, y_hi) = (0.0, 1.0);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |lambda: f64| MARGIN_LEFT + (lambda - x_lo) / (x_hi - x_lo) * plot_w;
    let y_of = |v: f64| MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="26" font-family="sans-serif" font-size="16" text-anchor="middle">Giant component of the percolated Cayley graph, n = {n}, tree = {tree_id}</text>"#,
        WIDTH / 2.0
    );

    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="black"/>"#,
        l = MARGIN_LEFT,
        r = WIDTH - MARGIN_RIGHT,
        t = MARGIN_TOP,
        b = HEIGHT - MARGIN_BOTTOM
    );
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let lambda = x_lo + frac * (x_hi - x_lo);
        let x = x_of(lambda);
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{b}" x2="{x}" y2="{b2}" stroke="black"/><text x="{x}" y="{ty}" font-family="sans-serif" font-size="12" text-anchor="middle">{lambda:.3}</text>"#,
            b = HEIGHT - MARGIN_BOTTOM,
            b2 = HEIGHT - MARGIN_BOTTOM + 6.0,
            ty = HEIGHT - MARGIN_BOTTOM + 22.0
        );
        let v = y_lo + frac * (y_hi - y_lo);
        let y = y_of(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{x1}" y1="{y}" x2="{l}" y2="{y}" stroke="black"/><text x="{tx}" y="{typ}" font-family="sans-serif" font-size="12" text-anchor="end">{v:.2}</text>"#,
            x1 = MARGIN_LEFT - 6.0,
            l = MARGIN_LEFT,
            tx = MARGIN_LEFT - 10.0,
            typ = y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">selection probability (1+ε)/(n−1)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="22" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 22 {})">relative giant size |C⁽¹⁾| / |Γₙ|</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // Theory curve: survival probability of the mean-lambda(n-1) process.
    let mut theory = String::new();
    for i in 0..=240 {
        let lambda = x_lo + (x_hi - x_lo) * i as f64 / 240.0;
        let mean = lambda * (n as f64 - 1.0);
        let value = survival_poisson(mean)?.value;
        let _ = write!(theory, "{:.2},{:.2} ", x_of(lambda), y_of(value));
    }
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="{THEORY_COLOR}" stroke-width="2"/>"#,
        theory.trim_end()
    );

    // Data series: mean relative giant per grid point.
    if series.len() > 1 {
        let pts: Vec<String> = series
            .iter()
            .map(|&(_, lambda, mean)| format!("{:.2},{:.2}", x_of(lambda), y_of(mean)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{DATA_COLOR}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
    }
    for &(_, lambda, mean) in &series {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{DATA_COLOR}"/>"#,
            x_of(lambda),
            y_of(mean)
        );
    }

    // Legend.
    let lx = MARGIN_LEFT + 16.0;
    let ly = MARGIN_TOP + 14.0;
    let _ = writeln!(
        svg,
        r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{DATA_COLOR}" stroke-width="2"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">observed mean relative giant</text>"#,
        lx + 28.0,
        lx + 34.0,
        ly + 4.0
    );
    let ly2 = ly + 20.0;
    let _ = writeln!(
        svg,
        r#"<line x1="{lx}" y1="{ly2}" x2="{}" y2="{ly2}" stroke="{THEORY_COLOR}" stroke-width="2"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">predicted survival probability</text>"#,
        lx + 28.0,
        lx + 34.0,
        ly2 + 4.0
    );
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

/// Renders and writes the plot atomically.
pub fn emit_plot(rows: &[SweepRow], path: &Path) -> Result<()> {
    let svg = render_plot_svg(rows)?;
    write_atomically(path, svg.as_bytes())
}
