//! Static SVG 1.1 figure for experiment results: a grid of panels, one per
//! `(days, q)` pair, each showing the mean L2 distance (upper line) and
//! the attainable minimum (lower line) against the lag count `m`.

use std::fmt::Write as _;

use displace::experiment::{GridResult, GridRow};

use crate::CliError;

const PANEL_W: f64 = 340.0;
const PANEL_H: f64 = 280.0;
const MARGIN_LEFT: f64 = 58.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 46.0;
const MEAN_COLOR: &str = "#c0392b";
const MIN_COLOR: &str = "#2980b9";

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.3}")
    }
}

/// Renders the whole figure. Panels are arranged with one column per `q`
/// value and one row per day count, in the order they appear in the rows.
pub fn render_figure(result: &GridResult) -> Result<String, CliError> {
    if result.rows.is_empty() {
        return Err(CliError::Runtime("no grid rows to plot".into()));
    }

    let mut panels: Vec<((usize, f64), Vec<&GridRow>)> = Vec::new();
    let mut q_order: Vec<f64> = Vec::new();
    let mut day_order: Vec<usize> = Vec::new();
    for row in &result.rows {
        let key = (row.days, row.q);
        match panels.iter_mut().find(|(k, _)| *k == key) {
            Some((_, rows)) => rows.push(row),
            None => panels.push((key, vec![row])),
        }
        if !q_order.contains(&row.q) {
            q_order.push(row.q);
        }
        if !day_order.contains(&row.days) {
            day_order.push(row.days);
        }
    }

    let width = PANEL_W * q_order.len() as f64;
    let height = PANEL_H * day_order.len() as f64;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>"
    );

    for ((days, q), rows) in &panels {
        let col = q_order.iter().position(|v| v == q).unwrap();
        let prow = day_order.iter().position(|v| v == days).unwrap();
        let x0 = PANEL_W * col as f64;
        let y0 = PANEL_H * prow as f64;
        let _ = writeln!(out, "<g class=\"panel\" transform=\"translate({x0:.0},{y0:.0})\">");
        render_panel(&mut out, rows, *days, *q);
        out.push_str("</g>\n");
    }

    out.push_str("</svg>\n");
    Ok(out)
}

fn render_panel(out: &mut String, rows: &[&GridRow], days: usize, q: f64) {
    let mut series: Vec<&GridRow> = rows.to_vec();
    series.sort_by_key(|r| r.m);

    let (mut x_lo, mut x_hi) = (
        series.first().unwrap().m as f64,
        series.last().unwrap().m as f64,
    );
    if x_hi <= x_lo {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    let y_hi = series
        .iter()
        .map(|r| r.mean_l2.max(r.min_l2))
        .fold(0.0f64, f64::max)
        .max(1e-9)
        * 1.08;

    let plot_left = MARGIN_LEFT;
    let plot_right = PANEL_W - MARGIN_RIGHT;
    let plot_top = MARGIN_TOP;
    let plot_bottom = PANEL_H - MARGIN_BOTTOM;
    let sx = |m: f64| plot_left + (m - x_lo) / (x_hi - x_lo) * (plot_right - plot_left);
    let sy = |v: f64| plot_bottom - v / y_hi * (plot_bottom - plot_top);

    // frame
    let _ = writeln!(
        out,
        "<line x1=\"{plot_left:.2}\" y1=\"{plot_bottom:.2}\" x2=\"{plot_right:.2}\" y2=\"{plot_bottom:.2}\" stroke=\"black\" stroke-width=\"1\"/>"
    );
    let _ = writeln!(
        out,
        "<line x1=\"{plot_left:.2}\" y1=\"{plot_top:.2}\" x2=\"{plot_left:.2}\" y2=\"{plot_bottom:.2}\" stroke=\"black\" stroke-width=\"1\"/>"
    );

    // x ticks at each m
    for row in &series {
        let x = sx(row.m as f64);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{plot_bottom:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            plot_bottom + 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            plot_bottom + 17.0,
            row.m
        );
    }

    // y ticks
    for i in 0..=4 {
        let v = y_hi * i as f64 / 4.0;
        let y = sy(v);
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{plot_left:.2}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            plot_left - 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            plot_left - 7.0,
            y + 4.0,
            fmt_tick(v)
        );
    }

    // axis labels and title
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">m</text>",
        (plot_left + plot_right) / 2.0,
        PANEL_H - 10.0
    );
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">L2 distance</text>",
        (plot_top + plot_bottom) / 2.0,
        (plot_top + plot_bottom) / 2.0
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">N={days}, q={q}</text>",
        (plot_left + plot_right) / 2.0
    );

    // the two series
    for (values, color) in [
        (
            series.iter().map(|r| (r.m as f64, r.mean_l2)).collect::<Vec<_>>(),
            MEAN_COLOR,
        ),
        (
            series.iter().map(|r| (r.m as f64, r.min_l2)).collect::<Vec<_>>(),
            MIN_COLOR,
        ),
    ] {
        let points: Vec<String> = values
            .iter()
            .map(|&(m, v)| format!("{:.2},{:.2}", sx(m), sy(v)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.7\" points=\"{}\"/>",
            points.join(" ")
        );
    }

    // legend
    let lx = plot_right - 96.0;
    for (i, (label, color)) in [("mean", MEAN_COLOR), ("minimum", MIN_COLOR)].iter().enumerate() {
        let y = plot_top + 10.0 + 15.0 * i as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{lx:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"1.7\"/>",
            lx + 18.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\">{label}</text>",
            lx + 23.0,
            y + 4.0
        );
    }
}
