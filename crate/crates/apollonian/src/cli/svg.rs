//! Minimal SVG 1.1 writer. Mathematical coordinates are y-up; the single
//! affine map to the viewport is written into a comment at the top of the
//! file so figures can be compared numerically.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::circlespace::Circle;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorScheme {
    /// Palette index `|curvature| mod m`.
    Residue(u32),
    /// Shade by `log |curvature|`.
    Curvature,
    Monochrome,
}

impl FromStr for ColorScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mono" | "monochrome" => Ok(ColorScheme::Monochrome),
            "curvature" => Ok(ColorScheme::Curvature),
            other => {
                let m = other
                    .strip_prefix("residue:")
                    .and_then(|x| x.parse::<u32>().ok())
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| Error::invalid(format!("color scheme {other:?}: use mono, curvature or residue:M")))?;
                Ok(ColorScheme::Residue(m))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub window: [f64; 4],
    pub width: u32,
    pub stroke: f64,
    pub color: ColorScheme,
}

impl RenderSpec {
    pub fn new(window: [f64; 4], width: u32, stroke: f64, color: ColorScheme) -> Result<Self> {
        let [x0, y0, x1, y1] = window;
        if !(x0 < x1 && y0 < y1) || window.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("window needs x0 < x1 and y0 < y1"));
        }
        if width == 0 || !(stroke > 0.0) {
            return Err(Error::invalid("width and stroke must be positive"));
        }
        Ok(RenderSpec { window, width, stroke, color })
    }

    fn scale(&self) -> f64 {
        self.width as f64 / (self.window[2] - self.window[0])
    }

    fn height(&self) -> f64 {
        (self.window[3] - self.window[1]) * self.scale()
    }

    fn to_view(&self, x: f64, y: f64) -> (f64, f64) {
        let k = self.scale();
        ((x - self.window[0]) * k, (self.window[3] - y) * k)
    }
}

const PALETTE: [&str; 12] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#637939"];

fn color_for(scheme: ColorScheme, curvature: f64) -> String {
    match scheme {
        ColorScheme::Monochrome => "#000000".into(),
        ColorScheme::Residue(m) => {
            let k = (curvature.abs().round() as u64) % m as u64;
            PALETTE[k as usize % PALETTE.len()].into()
        }
        ColorScheme::Curvature => {
            // darker for small curvature
            let t = ((1.0 + curvature.abs()).ln() / 8.0).min(1.0);
            let v = (40.0 + 180.0 * t).round() as u8;
            format!("#{v:02x}{v:02x}{:02x}", 255 - v / 2)
        }
    }
}

/// Clip the line `{t ↦ p + t·d}` to the window (Liang–Barsky).
fn clip(p: (f64, f64), d: (f64, f64), w: &[f64; 4]) -> Option<((f64, f64), (f64, f64))> {
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for (pc, dc, lo, hi) in [(p.0, d.0, w[0], w[2]), (p.1, d.1, w[1], w[3])] {
        if dc.abs() < 1e-300 {
            if pc < lo || pc > hi {
                return None;
            }
            continue;
        }
        let (a, b) = ((lo - pc) / dc, (hi - pc) / dc);
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    (t0 <= t1).then(|| ((p.0 + t0 * d.0, p.1 + t0 * d.1), (p.0 + t1 * d.0, p.1 + t1 * d.1)))
}

fn header(view: &RenderSpec, out: &mut String) {
    let [x0, _, _, y1] = view.window;
    let k = view.scale();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(out, "<!-- transform: X = {k:.9} * (x - ({x0})), Y = {k:.9} * (({y1}) - y) -->");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{:.3}" viewBox="0 0 {} {:.3}">"#,
        view.width,
        view.height(),
        view.width,
        view.height()
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{:.3}" fill="white"/>"#, view.width, view.height());
}

/// Circles stroked, lines clipped to the window. Input order is kept.
/// Colours use `curvature / unit` (pass 2 for reduced curvature).
pub fn render_circles(view: &RenderSpec, circles: &[Circle], unit: f64) -> String {
    let mut out = String::new();
    header(view, &mut out);
    let k = view.scale();
    for c in circles {
        let curv = c.p.to_f64().unwrap_or(0.0) / unit;
        let color = color_for(view.color, curv);
        match c.center_radius_f64() {
            Some((cx, cy, r)) => {
                let (vx, vy) = view.to_view(cx, cy);
                let _ = writeln!(
                    out,
                    r#"<circle cx="{vx:.4}" cy="{vy:.4}" r="{:.4}" fill="none" stroke="{color}" stroke-width="{}"/>"#,
                    r * k,
                    view.stroke
                );
            }
            None => {
                // r·x + s·y = q/2 with r² + s² = 1
                let (r, s, q) = (c.r.to_f64().unwrap_or(0.0), c.s.to_f64().unwrap_or(0.0), c.q.to_f64().unwrap_or(0.0));
                let p0 = (r * q / 2.0, s * q / 2.0);
                if let Some((a, b)) = clip(p0, (-s, r), &view.window) {
                    let (ax, ay) = view.to_view(a.0, a.1);
                    let (bx, by) = view.to_view(b.0, b.1);
                    let _ = writeln!(
                        out,
                        r#"<line x1="{ax:.4}" y1="{ay:.4}" x2="{bx:.4}" y2="{by:.4}" stroke="{color}" stroke-width="{}"/>"#,
                        view.stroke
                    );
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Dots of radius growing with `|Δ|^(-1/2)` (small discriminants are large).
pub fn render_points(view: &RenderSpec, points: &[(f64, f64, i64)]) -> String {
    let mut out = String::new();
    header(view, &mut out);
    let k = view.scale();
    for &(x, y, d) in points {
        let (vx, vy) = view.to_view(x, y);
        let rad = (0.15 * k * (d.abs().max(1) as f64).powf(-0.5)).max(0.25);
        let color = color_for(view.color, d as f64);
        let _ = writeln!(out, r#"<circle cx="{vx:.4}" cy="{vy:.4}" r="{rad:.4}" fill="{color}"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
