//! Minimal SVG line charts of a sweep, one file per panel.

use std::fmt::Write as _;

use crate::format::g6;
use crate::scenario::{DeploymentScenario, SweepPoint};
use crate::units::to_nj;
use crate::xhaul::EnergyBreakdown;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    Processing,
    RadioTransport,
    Total,
}

impl Panel {
    pub const ALL: [Panel; 3] = [Panel::Processing, Panel::RadioTransport, Panel::Total];

    pub fn slug(self) -> &'static str {
        match self {
            Panel::Processing => "processing",
            Panel::RadioTransport => "radio_transport",
            Panel::Total => "total",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Panel::Processing => "Processing energy per bit",
            Panel::RadioTransport => "Radio + transport energy per bit",
            Panel::Total => "Total energy per bit",
        }
    }

    fn value(self, b: &EnergyBreakdown) -> f64 {
        match self {
            Panel::Processing => b.e_pr,
            Panel::RadioTransport => b.e_radio_transport(),
            Panel::Total => b.e_total,
        }
    }
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Renders one panel. `log_y` switches the y axis to log10; non-positive
/// values are then dropped from the lines.
pub fn render(points: &[SweepPoint], panel: Panel, log_y: bool) -> String {
    let scenarios: Vec<DeploymentScenario> = points
        .first()
        .map(|p| p.breakdowns.iter().map(|(s, _)| *s).collect())
        .unwrap_or_default();
    let ty = |v: f64| if log_y { v.log10() } else { v };

    let xs: Vec<f64> = points.iter().map(|p| f64::from(p.n_ru)).collect();
    let ys: Vec<f64> = points
        .iter()
        .flat_map(|p| p.breakdowns.iter().map(|(_, b)| to_nj(panel.value(b))))
        .filter(|&v| !log_y || v > 0.0)
        .map(ty)
        .collect();
    let (x0, x1) = bounds(&xs);
    let (mut y0, mut y1) = bounds(&ys);
    if !log_y {
        y0 = y0.min(0.0);
    } else {
        y0 = y0.floor();
        y1 = y1.ceil();
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0).max(1e-12) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        panel.title()
    );
    let (bx, by) = (H - BOTTOM, W - RIGHT);
    let _ = writeln!(s, r#"<path d="M{LEFT},{TOP} V{bx} H{by}" fill="none" stroke="black"/>"#);

    for i in 0..=5 {
        let y = y0 + (y1 - y0) * f64::from(i) / 5.0;
        let label = if log_y { g6(10f64.powf(y)) } else { g6(y) };
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" x2="{by}" y1="{0:.2}" y2="{0:.2}" stroke="#ddd"/><text x="{1}" y="{2:.2}" text-anchor="end">{label}</text>"##,
            py(y),
            LEFT - 6.0,
            py(y) + 4.0
        );
        let x = x0 + (x1 - x0) * f64::from(i) / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            px(x),
            bx + 18.0,
            g6(x.round())
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">number of RUs</text>"#,
        (LEFT + by) / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16,{}) rotate(-90)" text-anchor="middle">nJ/bit{}</text>"#,
        (TOP + bx) / 2.0,
        if log_y { " (log)" } else { "" }
    );

    for (k, scen) in scenarios.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut d = String::new();
        for p in points {
            let Some(b) = p.get(*scen) else { continue };
            let v = to_nj(panel.value(b));
            if log_y && v <= 0.0 {
                continue;
            }
            let cmd = if d.is_empty() { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.2},{:.2} ", px(f64::from(p.n_ru)), py(ty(v)));
        }
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            d.trim_end()
        );
        let ly = TOP + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" x2="{1}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{2}" y="{3}">{4}</text>"#,
            by + 10.0,
            by + 30.0,
            by + 36.0,
            ly + 4.0,
            scen.as_str()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() && hi.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_model;
    use crate::scenario::sweep;

    #[test]
    fn renders_one_line_per_scenario() {
        let m = default_model();
        let pts = sweep(&m, &[DeploymentScenario::S1, DeploymentScenario::S3], 1..=10).unwrap();
        for panel in Panel::ALL {
            for log in [false, true] {
                let svg = render(&pts, panel, log);
                assert!(svg.starts_with("<svg"));
                assert_eq!(svg.matches("stroke-width=\"1.5\"").count(), 2);
                assert!(!svg.contains("NaN"));
            }
        }
    }
}
