//! Self-contained SVG rendering of classed triple-loading histograms.
//!
//! Bars for the three classes are overlapped with partial opacity: red for
//! triples with nonvanishing coefficient, blue for vanishing ones, dark
//! brown for the depth-violating subset of the vanishing class. An optional
//! fitted density curve is overlaid, scaled to count space by total count
//! times bin width.

use kronload::stats::{Family, FitParams};
use kronload::thresholds::ClassedHistogram;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 56.0;

const COLOR_NONZERO: &str = "#cc2222";
const COLOR_ZERO: &str = "#2255cc";
const COLOR_DEPTH: &str = "#5c3317";
const COLOR_FIT: &str = "#111111";

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// ln Γ(x) for x > 0 via the Lanczos approximation (g = 7, 9 terms),
/// accurate to well below the plotting resolution.
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection keeps the approximation in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i as f64) + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn density(fit: &FitParams, x: f64) -> f64 {
    match fit.family {
        Family::Normal => {
            let (mean, sd) = fit.params;
            if sd <= 0.0 {
                return 0.0;
            }
            let z = (x - mean) / sd;
            (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
        }
        Family::Gamma => {
            let (shape, scale) = fit.params;
            if x <= 0.0 || shape <= 0.0 || scale <= 0.0 {
                return 0.0;
            }
            let ln_pdf = (shape - 1.0) * x.ln() - x / scale - ln_gamma(shape) - shape * scale.ln();
            ln_pdf.exp()
        }
    }
}

/// Renders the histogram to an SVG document string.
pub fn render_histogram_svg(hist: &ClassedHistogram, fit: Option<&FitParams>, title: &str) -> String {
    let bins = hist.bins();
    let x_min = hist.edges[0];
    let x_max = hist.edges[bins];
    let x_span = (x_max - x_min).max(f64::MIN_POSITIVE);
    let total: u64 = hist.nonzero.iter().sum::<u64>() + hist.zero.iter().sum::<u64>();
    let count_max = hist
        .nonzero
        .iter()
        .chain(hist.zero.iter())
        .copied()
        .max()
        .unwrap_or(0)
        .max(1) as f64;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |v: f64| MARGIN_LEFT + (v - x_min) / x_span * plot_w;
    let y_of = |c: f64| MARGIN_TOP + plot_h - (c / count_max).min(1.0) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = WIDTH,
        h = HEIGHT
    ));
    out.push_str(&format!(
        "<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        WIDTH, HEIGHT
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));

    // Axes.
    out.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"#333\" stroke-width=\"1\"/>\n",
        l = MARGIN_LEFT,
        r = MARGIN_LEFT + plot_w,
        b = MARGIN_TOP + plot_h
    ));
    out.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"#333\" stroke-width=\"1\"/>\n",
        l = MARGIN_LEFT,
        t = MARGIN_TOP,
        b = MARGIN_TOP + plot_h
    ));

    // X ticks: five evenly spaced values.
    for i in 0..=4 {
        let v = x_min + x_span * (i as f64) / 4.0;
        let x = x_of(v);
        out.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{b:.2}\" x2=\"{x:.2}\" y2=\"{tick:.2}\" stroke=\"#333\"/>\n",
            b = MARGIN_TOP + plot_h,
            tick = MARGIN_TOP + plot_h + 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{v:.0}</text>\n",
            y = MARGIN_TOP + plot_h + 20.0
        ));
    }
    // Y ticks: four evenly spaced counts.
    for i in 0..=4 {
        let c = count_max * (i as f64) / 4.0;
        let y = y_of(c);
        out.push_str(&format!(
            "<line x1=\"{tick:.2}\" y1=\"{y:.2}\" x2=\"{l}\" y2=\"{y:.2}\" stroke=\"#333\"/>\n",
            tick = MARGIN_LEFT - 5.0,
            l = MARGIN_LEFT
        ));
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{yy:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{c:.0}</text>\n",
            x = MARGIN_LEFT - 8.0,
            yy = y + 4.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">triple loading</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    ));

    // Overlapped bars, one layer per class; empty bins are skipped.
    let layer = |out: &mut String, counts: &[u64], color: &str, opacity: f64| {
        for i in 0..bins {
            if counts[i] == 0 {
                continue;
            }
            let x0 = x_of(hist.edges[i]);
            let x1 = x_of(hist.edges[i + 1]);
            let y = y_of(counts[i] as f64);
            let h = MARGIN_TOP + plot_h - y;
            out.push_str(&format!(
                "<rect x=\"{x0:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{color}\" fill-opacity=\"{opacity}\"/>\n",
                w = (x1 - x0).max(0.5)
            ));
        }
    };
    layer(&mut out, &hist.zero, COLOR_ZERO, 0.55);
    layer(&mut out, &hist.nonzero, COLOR_NONZERO, 0.55);
    layer(&mut out, &hist.depth_violating, COLOR_DEPTH, 0.75);

    // Fitted density, scaled to expected bin counts.
    if let Some(fit) = fit {
        if total > 0 && bins > 0 && !fit.degenerate {
            let bin_width = x_span / bins as f64;
            let scale = total as f64 * bin_width;
            let mut points = Vec::with_capacity(201);
            for s in 0..=200 {
                let v = x_min + x_span * (s as f64) / 200.0;
                let c = density(fit, v) * scale;
                points.push(format!("{:.2},{:.2}", x_of(v), y_of(c)));
            }
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                points.join(" "),
                COLOR_FIT
            ));
        }
    }

    // Legend.
    let legend_x = MARGIN_LEFT + plot_w - 170.0;
    let mut legend_y = MARGIN_TOP + 8.0;
    let mut legend_entry = |out: &mut String, color: &str, label: &str| {
        out.push_str(&format!(
            "<rect x=\"{legend_x:.2}\" y=\"{y:.2}\" width=\"12\" height=\"12\" fill=\"{color}\" fill-opacity=\"0.7\"/>\n",
            y = legend_y
        ));
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\">{label}</text>\n",
            x = legend_x + 18.0,
            y = legend_y + 10.0
        ));
        legend_y += 18.0;
    };
    legend_entry(&mut out, COLOR_NONZERO, "coefficient &#8800; 0");
    legend_entry(&mut out, COLOR_ZERO, "coefficient = 0");
    legend_entry(&mut out, COLOR_DEPTH, "depth-violating");
    if fit.is_some() {
        legend_entry(&mut out, COLOR_FIT, "fitted density");
    }

    out.push_str("</svg>\n");
    out
}
