//! Minimal static SVG line charts, no third-party plotting stack.
//!
//! One file shows the observable (top panel) and its derivative (bottom
//! panel) against the control parameter.

use std::fmt::Write as _;

use srechain::criticality::SweepResult;

const W: f64 = 760.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 46.0;

struct Panel<'a> {
    title: &'a str,
    xs: &'a [f64],
    ys: &'a [f64],
    color: &'a str,
}

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let raw = (hi - lo) / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    } * mag;
    let start = (lo / step).ceil() * step;
    let mut t = Vec::new();
    let mut v = start;
    while v <= hi + 0.5 * step {
        t.push(v);
        v += step;
    }
    t
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if a >= 0.01 && a < 10000.0 {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() || s == "-" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{v:.2e}")
    }
}

fn draw_panel(svg: &mut String, p: &Panel, y_off: f64, x_label: &str) {
    let plot_w = W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let x_lo = p.xs.first().copied().unwrap_or(0.0);
    let x_hi = p.xs.last().copied().unwrap_or(1.0);
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for &y in p.ys {
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if !(y_hi > y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad = 0.06 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);

    let sx = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| y_off + MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444" stroke-width="1"/>"##,
        y_off + MARGIN_T
    );
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{}" font-size="14" text-anchor="middle" fill="#111">{}</text>"##,
        MARGIN_L + plot_w / 2.0,
        y_off + MARGIN_T - 12.0,
        p.title
    );
    for t in nice_ticks(x_lo, x_hi, 7) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#bbb" stroke-width="0.6"/>"##,
            y_off + MARGIN_T,
            y_off + MARGIN_T + plot_h
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle" fill="#333">{}</text>"##,
            y_off + MARGIN_T + plot_h + 16.0,
            fmt_tick(t)
        );
    }
    for t in nice_ticks(y_lo, y_hi, 5) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_L}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#bbb" stroke-width="0.6"/>"##,
            MARGIN_L + plot_w
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{y:.2}" font-size="11" text-anchor="end" fill="#333" dy="4">{}</text>"##,
            MARGIN_L - 6.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{:.2}" font-size="12" text-anchor="middle" fill="#111">{}</text>"##,
        MARGIN_L + plot_w / 2.0,
        y_off + PANEL_H - 8.0,
        x_label
    );
    let mut d = String::new();
    for (i, (&x, &y)) in p.xs.iter().zip(p.ys).enumerate() {
        let _ = write!(
            d,
            "{}{:.2},{:.2} ",
            if i == 0 { "M" } else { "L" },
            sx(x),
            sy(y)
        );
    }
    let _ = writeln!(
        svg,
        r##"<path d="{}" fill="none" stroke="{}" stroke-width="1.6"/>"##,
        d.trim_end(),
        p.color
    );
}

/// Render observable and derivative panels into one SVG document.
pub fn render_sweep_svg(s: &SweepResult, d: &SweepResult) -> String {
    let total_h = 2.0 * PANEL_H;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{total_h}" viewBox="0 0 {W} {total_h}">"##
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="white"/>"##);
    draw_panel(
        &mut svg,
        &Panel {
            title: &format!("{} N={} {}", s.model, s.n_sites, s.observable),
            xs: &s.xs,
            ys: &s.ys,
            color: "#1f77b4",
        },
        0.0,
        &s.control,
    );
    draw_panel(
        &mut svg,
        &Panel {
            title: &d.observable,
            xs: &d.xs,
            ys: &d.ys,
            color: "#d62728",
        },
        PANEL_H,
        &d.control,
    );
    svg.push_str("</svg>\n");
    svg
}
