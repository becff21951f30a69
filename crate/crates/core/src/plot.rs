//! Static SVG rendering of Pe curves: log-scaled y axis, one series per
//! curve, confidence whiskers, and a floor clamp for zero-error points.

use std::path::Path;

use crate::error::Result;
use crate::experiments::PeCurve;

/// Pe values below this are clamped to the plot floor on the log axis.
pub const PLOT_FLOOR: f64 = 1e-4;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Renders curves into an SVG document string.
pub fn svg_string(curves: &[PeCurve]) -> String {
    assert!(!curves.is_empty(), "need at least one curve");
    let xs: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.sweep_value as f64))
        .collect();
    let x_min = xs.iter().cloned().fold(f64::INFINITY, f64::min).min(1.0);
    let x_max = xs.iter().cloned().fold(1.0, f64::max);
    let log_x = x_max / x_min.max(1.0) > 10.0;
    let (x_lo, x_hi) = if log_x {
        (x_min.log10(), x_max.log10())
    } else {
        (x_min, x_max)
    };
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |v: f64| {
        let t = if log_x { v.log10() } else { v };
        let span = (x_hi - x_lo).max(1e-12);
        MARGIN_LEFT + (t - x_lo) / span * plot_w
    };
    let y_of = |pe: f64| {
        let t = pe.max(PLOT_FLOOR).log10(); // [-4, 0]
        MARGIN_TOP + (-t / 4.0) * plot_h
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));

    // Gridlines and y tick labels at the decades.
    for k in 0..=4 {
        let pe = 10f64.powi(-k);
        let y = y_of(pe);
        svg.push_str(&format!(
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#dddddd\"/>\n",
            MARGIN_LEFT + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">1e-{k}</text>\n",
            MARGIN_LEFT - 6.0,
            y + 4.0
        ));
    }

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_TOP + plot_h
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    ));
    let x_label = &curves[0].sweep_var;
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{x_label}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.1})\">Pe</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // X ticks at the data values of the first curve.
    for p in &curves[0].points {
        let x = x_of(p.sweep_value as f64);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP + plot_h + 18.0,
            p.sweep_value
        ));
    }

    let mut any_clamped = false;
    for (idx, curve) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let path: Vec<String> = curve
            .points
            .iter()
            .map(|p| {
                format!(
                    "{:.1},{:.1}",
                    x_of(p.sweep_value as f64),
                    y_of(p.estimate.pe)
                )
            })
            .collect();
        if path.len() > 1 {
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                path.join(" ")
            ));
        }
        for p in &curve.points {
            let x = x_of(p.sweep_value as f64);
            if p.estimate.pe < PLOT_FLOOR {
                any_clamped = true;
            }
            // Confidence whisker.
            svg.push_str(&format!(
                "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"{color}\" stroke-width=\"1\"/>\n",
                y_of(p.estimate.ci_low),
                y_of(p.estimate.ci_high)
            ));
            svg.push_str(&format!(
                "<circle cx=\"{x:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{color}\"/>\n",
                y_of(p.estimate.pe)
            ));
        }
        // Legend entry.
        let ly = MARGIN_TOP + 16.0 * idx as f64 + 10.0;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        svg.push_str(&format!(
            "<rect x=\"{lx:.1}\" y=\"{:.1}\" width=\"12\" height=\"4\" fill=\"{color}\"/>\n",
            ly - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{ly:.1}\" font-size=\"11\">{} {} dB</text>\n",
            lx + 16.0,
            curve.scenario,
            curve.snr_db
        ));
    }

    if any_clamped {
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" fill=\"#555555\">points at 0 clamped to 1e-4</text>\n",
            MARGIN_LEFT + 4.0,
            MARGIN_TOP + plot_h - 6.0
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Writes the curves to an SVG file.
pub fn render_plot(curves: &[PeCurve], path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(curves))?;
    Ok(())
}
