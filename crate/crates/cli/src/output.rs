//! CSV and SVG writers. Numbers use the shortest representation that parses
//! back to the same `f64`, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hystlab_core::hysteresis::{IOCurve, SweepEntry};
use hystlab_core::lllin::ModeComparison;
use hystlab_core::Trajectory;

use crate::error::{CliError, Result};

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn trajectory_csv(traj: &Trajectory) -> Vec<u8> {
    let rows = traj
        .times()
        .iter()
        .zip(traj.inputs())
        .zip(traj.samples())
        .map(|((t, u), y)| vec![num(*t), num(*u), num(*y)]);
    csv_bytes(&["t", "u", "y"], rows)
}

pub fn cycle_csv(curve: &IOCurve) -> Vec<u8> {
    csv_bytes(&["u", "y"], curve.points().iter().map(|(u, y)| vec![num(*u), num(*y)]))
}

pub fn loops_csv(entries: &[SweepEntry]) -> Vec<u8> {
    let rows = entries.iter().map(|e| {
        let m = e.metrics;
        vec![num(e.omega), num(m.area), num(m.normalized_area), num(m.width), num(m.height), num(m.closure_gap)]
    });
    csv_bytes(&["omega", "area", "normalized_area", "width", "height", "closure_gap"], rows)
}

pub fn spectrum_csv(rows: &[ModeComparison]) -> Vec<u8> {
    let rows = rows.iter().map(|r| {
        vec![
            r.mode.to_string(),
            num(r.analytic.re),
            num(r.analytic.im),
            num(r.numeric.re),
            num(r.numeric.im),
            num(r.abs_error),
        ]
    });
    csv_bytes(&["mode", "re_analytic", "im_analytic", "re_numeric", "im_numeric", "abs_error"], rows)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, bytes).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

/// Standalone SVG of a `(u, y)` polyline with labelled axes and a caption.
pub fn loop_svg(points: &[(f64, f64)], caption: &str) -> String {
    let (mut umin, mut umax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(u, y) in points {
        umin = umin.min(u);
        umax = umax.max(u);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let pad = |lo: f64, hi: f64| {
        let span = hi - lo;
        if span > 0.0 {
            (lo - 0.05 * span, hi + 0.05 * span)
        } else {
            (lo - 0.5 * lo.abs().max(1.0), hi + 0.5 * hi.abs().max(1.0))
        }
    };
    let (umin, umax) = pad(umin, umax);
    let (ymin, ymax) = pad(ymin, ymax);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = |u: f64| MARGIN + (u - umin) / (umax - umin) * plot_w;
    let sy = |y: f64| HEIGHT - MARGIN - (y - ymin) / (ymax - ymin) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#);
    for (i, frac) in [0.0, 0.5, 1.0].iter().enumerate() {
        let u = umin + frac * (umax - umin);
        let y = ymin + frac * (ymax - ymin);
        let anchor = ["start", "middle", "end"][i];
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}">{}</text>"#, sx(u), HEIGHT - MARGIN + 16.0, tick(u));
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN - 6.0, sy(y) + 4.0, tick(y));
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-style="italic">u</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(svg, r#"<text x="16" y="{:.2}" text-anchor="middle" font-style="italic">y</text>"#, HEIGHT / 2.0);
    let _ = writeln!(svg, r#"<text x="{:.2}" y="24" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(caption));
    svg.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points=""#);
    for &(u, y) in points {
        let _ = write!(svg, "{:.2},{:.2} ", sx(u), sy(y));
    }
    svg.push_str("\"/>\n</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-17, 6.02e23, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn trajectory_header_and_rows() {
        let t = Trajectory::new(vec![0.0, 0.5], vec![1.0, 2.0], vec![0.0, 0.25]).unwrap();
        let text = String::from_utf8(trajectory_csv(&t)).unwrap();
        assert_eq!(text, "t,u,y\n0.0,0.0,1.0\n0.5,0.25,2.0\n");
    }

    #[test]
    fn svg_contains_polyline_and_labels() {
        let svg = loop_svg(&[(0.0, 0.0), (1.0, 1.0), (0.0, 1.0)], "a < b");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains(">u</text>") && svg.contains(">y</text>"));
        assert!(svg.contains("a &lt; b"));
    }

    #[test]
    fn flat_curves_still_plot() {
        let svg = loop_svg(&[(0.0, 1.0), (1.0, 1.0)], "flat");
        assert!(!svg.contains("NaN"));
    }
}
