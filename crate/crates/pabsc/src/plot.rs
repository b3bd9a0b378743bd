//! Self-contained SVG line plots for sweep results.
//!
//! Presentation only: the plot is derived purely from the CSV rows and needs
//! no display stack. Solver curves render in reds, fixed-position baselines
//! in blues, one line style per algorithm.

use std::collections::BTreeMap;

use crate::sweep::{Algo, SweepRow};

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 250.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

const AO_COLORS: &[&str] = &["#c62828", "#e53935", "#ad1457", "#ef6c00", "#8e24aa", "#d81b60"];
const BASE_COLORS: &[&str] = &["#1565c0", "#1e88e5", "#00838f", "#3949ab", "#0097a7", "#5e35b1"];

fn dash(algo: Algo) -> &'static str {
    match algo {
        Algo::Ao => "none",
        Algo::BaselineX0 => "8 4",
        Algo::BaselineXL4 => "2 3",
        Algo::BaselineXL2 => "12 3 2 3",
    }
}

/// Round a raw step up to a 1/2/5 decade multiple.
fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 || !raw.is_finite() {
        return 1.0;
    }
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let step = nice_step((hi - lo) / target.max(1) as f64);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        out.push(t);
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 1e5 || a < 1e-2 {
        format!("{v:.1e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    }
}

/// Render one sweep's rows (rate on the y-axis) as an SVG document.
pub fn sweep_plot_svg(rows: &[SweepRow], x_label: &str, title: &str) -> String {
    // Series keyed by (curve, algo); BTreeMap keeps the legend deterministic.
    let mut series: BTreeMap<(String, &'static str), (Algo, Vec<(f64, f64)>)> = BTreeMap::new();
    for row in rows {
        series
            .entry((row.curve_id.clone(), row.algo.as_str()))
            .or_insert_with(|| (row.algo, Vec::new()))
            .1
            .push((row.sweep_value, row.rate));
    }
    for (_, pts) in series.values_mut() {
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    }

    let xs: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.rate).collect();
    let x_lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y_hi_data = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (x_lo, x_hi) = if x_lo < x_hi {
        (x_lo, x_hi)
    } else {
        (x_lo - 0.5, x_hi + 0.5)
    };
    let y_lo = 0.0;
    let y_hi = if y_hi_data > 0.0 { y_hi_data * 1.05 } else { 1.0 };

    let px = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |y: f64| HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"Helvetica, Arial, sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) / 2.0,
        xml_escape(title)
    ));

    // Axes and grid.
    for t in ticks(x_lo, x_hi, 8) {
        let x = px(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>\n",
            py(y_lo),
            py(y_hi)
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            HEIGHT - MARGIN_B + 18.0,
            fmt_tick(t)
        ));
    }
    for t in ticks(y_lo, y_hi, 6) {
        let y = py(t);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>\n",
            px(x_lo),
            px(x_hi)
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 8.0,
            y + 4.0,
            fmt_tick(t)
        ));
    }
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        px(x_lo),
        py(y_lo),
        px(x_hi),
        py(y_lo)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        px(x_lo),
        py(y_lo),
        px(x_lo),
        py(y_hi)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) / 2.0,
        HEIGHT - 14.0,
        xml_escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {})\">rate (bits/s)</text>\n",
        MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0,
        MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0
    ));

    // Curves and legend.
    let mut curve_index: BTreeMap<String, usize> = BTreeMap::new();
    for ((curve, _), _) in &series {
        let next = curve_index.len();
        curve_index.entry(curve.clone()).or_insert(next);
    }
    let mut legend_y = MARGIN_T + 10.0;
    for ((curve, _), (algo, pts)) in &series {
        let idx = curve_index[curve];
        let color = if *algo == Algo::Ao {
            AO_COLORS[idx % AO_COLORS.len()]
        } else {
            BASE_COLORS[idx % BASE_COLORS.len()]
        };
        let path: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" \
             stroke-dasharray=\"{}\" points=\"{}\"/>\n",
            dash(*algo),
            path.join(" ")
        ));
        for (x, y) in pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.4\" fill=\"{color}\"/>\n",
                px(*x),
                py(*y)
            ));
        }
        let lx = WIDTH - MARGIN_R + 16.0;
        svg.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{legend_y:.2}\" x2=\"{:.2}\" y2=\"{legend_y:.2}\" \
             stroke=\"{color}\" stroke-width=\"1.8\" stroke-dasharray=\"{}\"/>\n",
            lx + 28.0,
            dash(*algo)
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{} / {}</text>\n",
            lx + 34.0,
            legend_y + 4.0,
            xml_escape(curve),
            algo.as_str()
        ));
        legend_y += 18.0;
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
