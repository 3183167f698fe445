//! CSV and SVG renderings of coexistence regions.

use gpt_coexist::coexistence::{criterion_slack, RegionReport};
use gpt_coexist::geometry::{Vec2, PREDICATE_TOL};
use gpt_coexist::theory::format_f64;
use gpt_coexist::Result;

const BLUE: &str = "#1f6fb4";
const GREEN: &str = "#2ca02c";
const REGION_FILL: &str = "#ffffff";
const POLYGON_FILL: &str = "#e8e8e8";
const CANVAS: f64 = 600.0;
const HALF_WIDTH: f64 = 0.75;
const PROBES: usize = 50;

pub fn fmt(x: f64) -> String {
    format_f64(x)
}

/// Agreement between region membership and the criterion on a 50x50 grid
/// of probes inside the unbiased polygon.
pub struct ProbeStats {
    pub probes: usize,
    pub agree: usize,
    pub band: usize,
}

impl ProbeStats {
    pub fn compute(report: &RegionReport) -> Result<Self> {
        let r = report
            .clipped_to
            .vertices()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let mut stats = ProbeStats {
            probes: 0,
            agree: 0,
            band: 0,
        };
        for i in 0..PROBES {
            for j in 0..PROBES {
                let step = 2.0 * r / (PROBES - 1) as f64;
                let f = Vec2::new(-r + step * i as f64, -r + step * j as f64);
                if !report.clipped_to.contains(f, 0.0) {
                    continue;
                }
                stats.probes += 1;
                let slack = criterion_slack(report.n, report.fixed_effect, f)?.slack;
                if slack.abs() <= 1e-6 {
                    stats.band += 1;
                }
                let crit = slack >= -PREDICATE_TOL;
                if crit == report.region.contains(f, PREDICATE_TOL) {
                    stats.agree += 1;
                }
            }
        }
        Ok(stats)
    }
}

pub fn region_csv(report: &RegionReport, probe: &ProbeStats) -> String {
    let e = report.fixed_effect;
    let mut s = String::new();
    s.push_str(&format!("# n={}\n", report.n));
    s.push_str(&format!("# e={},{}\n", fmt(e.x), fmt(e.y)));
    s.push_str("# method=criterion\n");
    s.push_str(&format!("# version={}\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("# area={}\n", fmt(report.area)));
    s.push_str(&format!(
        "# probes={} agree={} boundary_band={}\n",
        probe.probes, probe.agree, probe.band
    ));
    s.push_str("x,y\n");
    for v in report.region.vertices() {
        s.push_str(&format!("{},{}\n", fmt(v.x), fmt(v.y)));
    }
    s
}

fn to_canvas(p: Vec2) -> (f64, f64) {
    let scale = CANVAS / (2.0 * HALF_WIDTH);
    ((p.x + HALF_WIDTH) * scale, (HALF_WIDTH - p.y) * scale)
}

fn points(vs: &[Vec2]) -> String {
    vs.iter()
        .map(|&v| {
            let (x, y) = to_canvas(v);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn dot(p: Vec2, color: &str) -> String {
    let (x, y) = to_canvas(p);
    format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{color}\"/>\n")
}

/// Unbiased polygon outlined in blue over light gray, region in white,
/// centre in blue and the fixed effect in green.
pub fn region_svg(report: &RegionReport) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 {CANVAS} {CANVAS}\">\n"
    );
    s.push_str(&format!(
        "<polygon points=\"{}\" fill=\"{POLYGON_FILL}\" stroke=\"{BLUE}\" stroke-width=\"2\"/>\n",
        points(report.clipped_to.vertices())
    ));
    let region = report.region.vertices();
    match region.len() {
        0 => {}
        1 | 2 => s.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{REGION_FILL}\" stroke-width=\"2\"/>\n",
            points(region)
        )),
        _ => s.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{REGION_FILL}\" stroke=\"none\"/>\n",
            points(region)
        )),
    }
    s.push_str(&dot(Vec2::ZERO, BLUE));
    s.push_str(&dot(report.fixed_effect, GREEN));
    s.push_str("</svg>\n");
    s
}
