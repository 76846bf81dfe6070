//! Deterministic SVG rendering of sampled curves.
//!
//! Each input curve gets its own panel in a grid (or all curves share one
//! panel with `overlay`). 1D curves are plotted as value against `t`, 2D
//! curves as xy paths, 3D curves as xy projections with the z coordinate
//! mapped onto a dark-blue-to-yellow color ramp. Output bytes depend only
//! on the inputs and options: coordinates are formatted with fixed
//! precision and no timestamps or random ids are emitted.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{hull_2d, GeometryError};
use crate::shape::SampledCurve;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("no curves to render")]
    NoCurves,
    #[error("curve {index} has dimension {found}, first curve has {expected}")]
    MixedDimensions {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot render curves of dimension {0} (supported: 1, 2, 3)")]
    UnsupportedDimension(usize),
    #[error("hull shading requires landmarks")]
    HullWithoutLandmarks,
    #[error("landmark overlay dimension {found} does not match curves ({expected})")]
    OverlayDimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Panels per row in grid layout.
    pub columns: usize,
    /// Side length of one square panel, in SVG units.
    pub panel_size: f64,
    pub margin: f64,
    /// Draw a frame with min/max labels on each panel.
    pub axes: bool,
    /// Color 3D curves by their z coordinate (per-segment strokes).
    pub color_by_z: bool,
    /// Draw all curves into a single panel, cycling stroke colors.
    pub overlay: bool,
    /// Landmark points to overlay on every panel.
    pub landmarks: Option<Vec<Vec<f64>>>,
    /// Shade the convex hull of the overlay landmarks (2D only).
    pub show_hull: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            columns: 3,
            panel_size: 360.0,
            margin: 28.0,
            axes: false,
            color_by_z: false,
            overlay: false,
            landmarks: None,
            show_hull: false,
        }
    }
}

/// Overlay color cycle: black, blue, red, green, then muted extras.
const STROKES: [&str; 6] = [
    "#000000", "#0000ff", "#ff0000", "#008000", "#ff8c00", "#800080",
];

struct Bounds {
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl Bounds {
    fn new() -> Self {
        Self {
            min_x: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            min_y: f64::INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.max_x = self.max_x.max(x);
        self.min_y = self.min_y.min(y);
        self.max_y = self.max_y.max(y);
    }

    fn pad_degenerate(&mut self) {
        if self.max_x - self.min_x <= 0.0 {
            self.min_x -= 0.5;
            self.max_x += 0.5;
        }
        if self.max_y - self.min_y <= 0.0 {
            self.min_y -= 0.5;
            self.max_y += 0.5;
        }
    }
}

/// Project one sample onto the plotting plane.
fn project(dim: usize, t: f64, point: &[f64]) -> (f64, f64) {
    match dim {
        1 => (t, point[0]),
        _ => (point[0], point[1]),
    }
}

/// Render labelled curves to an SVG document string.
pub fn render_curves(
    curves: &[(String, SampledCurve)],
    options: &RenderOptions,
) -> Result<String, SvgError> {
    if curves.is_empty() {
        return Err(SvgError::NoCurves);
    }
    let dim = curves[0].1.dim;
    if !(1..=3).contains(&dim) {
        return Err(SvgError::UnsupportedDimension(dim));
    }
    for (index, (_, c)) in curves.iter().enumerate() {
        if c.dim != dim {
            return Err(SvgError::MixedDimensions {
                index,
                expected: dim,
                found: c.dim,
            });
        }
    }
    if options.show_hull && options.landmarks.is_none() {
        return Err(SvgError::HullWithoutLandmarks);
    }
    if let Some(lms) = &options.landmarks {
        if let Some(p) = lms.iter().find(|p| p.len() != dim) {
            return Err(SvgError::OverlayDimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
    }

    // Common bounds across all panels so shapes stay comparable.
    let mut bounds = Bounds::new();
    let mut z_min = f64::INFINITY;
    let mut z_max = f64::NEG_INFINITY;
    for (_, curve) in curves {
        for s in &curve.samples {
            let (x, y) = project(dim, s.t, &s.point);
            bounds.add(x, y);
            if dim == 3 {
                z_min = z_min.min(s.point[2]);
                z_max = z_max.max(s.point[2]);
            }
        }
    }
    if let Some(lms) = &options.landmarks {
        for (j, p) in lms.iter().enumerate() {
            let (x, y) = project(dim, j as f64, p);
            bounds.add(x, y);
        }
    }
    bounds.pad_degenerate();

    let panels = if options.overlay { 1 } else { curves.len() };
    let columns = options.columns.max(1).min(panels);
    let rows = panels.div_ceil(columns);
    let cell = options.panel_size + 2.0 * options.margin;
    let width = columns as f64 * cell;
    let height = rows as f64 * cell;

    let mut svg = String::new();
    writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"##
    )
    .unwrap();
    writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();

    let scale_x = options.panel_size / (bounds.max_x - bounds.min_x);
    let scale_y = options.panel_size / (bounds.max_y - bounds.min_y);
    let to_panel = |x: f64, y: f64| -> (f64, f64) {
        (
            (x - bounds.min_x) * scale_x,
            options.panel_size - (y - bounds.min_y) * scale_y,
        )
    };

    for panel in 0..panels {
        let col = panel % columns;
        let row = panel / columns;
        let tx = col as f64 * cell + options.margin;
        let ty = row as f64 * cell + options.margin;
        writeln!(svg, r##"<g transform="translate({tx:.3},{ty:.3})">"##).unwrap();

        if options.show_hull {
            if let Some(lms) = &options.landmarks {
                let xy: Vec<[f64; 2]> = lms
                    .iter()
                    .enumerate()
                    .map(|(j, p)| {
                        let (x, y) = project(dim, j as f64, p);
                        [x, y]
                    })
                    .collect();
                let hull = hull_2d(&xy)?;
                if hull.vertices().len() >= 3 {
                    let mut path = String::new();
                    for (i, v) in hull.vertices().iter().enumerate() {
                        let (x, y) = to_panel(v[0], v[1]);
                        let _ = write!(path, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { "L" });
                    }
                    path.push('Z');
                    writeln!(
                        svg,
                        r##"<path d="{path}" fill="#ffa500" fill-opacity="0.25" stroke="none"/>"##
                    )
                    .unwrap();
                }
            }
        }

        let panel_curves: &[(String, SampledCurve)] = if options.overlay {
            curves
        } else {
            std::slice::from_ref(&curves[panel])
        };

        for (ci, (label, curve)) in panel_curves.iter().enumerate() {
            let stroke = STROKES[ci % STROKES.len()];
            if dim == 3 && options.color_by_z {
                // Per-segment strokes following the height ramp.
                for w in curve.samples.windows(2) {
                    let (x0, y0) = {
                        let (x, y) = project(dim, w[0].t, &w[0].point);
                        to_panel(x, y)
                    };
                    let (x1, y1) = {
                        let (x, y) = project(dim, w[1].t, &w[1].point);
                        to_panel(x, y)
                    };
                    let z = 0.5 * (w[0].point[2] + w[1].point[2]);
                    let color = height_color(z, z_min, z_max);
                    writeln!(
                        svg,
                        r##"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="{color}" stroke-width="1.2"/>"##
                    )
                    .unwrap();
                }
            } else {
                let mut points = String::new();
                for s in &curve.samples {
                    let (x, y) = project(dim, s.t, &s.point);
                    let (px, py) = to_panel(x, y);
                    let _ = write!(points, "{px:.3},{py:.3} ");
                }
                writeln!(
                    svg,
                    r##"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.2"/>"##,
                    points.trim_end()
                )
                .unwrap();
            }
            if !options.overlay || ci == 0 {
                writeln!(
                    svg,
                    r##"<text x="4" y="14" font-family="sans-serif" font-size="12" fill="#333333">{}</text>"##,
                    xml_escape(if options.overlay { "overlay" } else { label })
                )
                .unwrap();
            }
        }

        if let Some(lms) = &options.landmarks {
            for (j, p) in lms.iter().enumerate() {
                let (x, y) = project(dim, j as f64, p);
                let (px, py) = to_panel(x, y);
                writeln!(
                    svg,
                    r##"<circle cx="{px:.3}" cy="{py:.3}" r="2.5" fill="#d62728"/>"##
                )
                .unwrap();
            }
        }

        if options.axes {
            writeln!(
                svg,
                r##"<rect x="0" y="0" width="{s:.3}" height="{s:.3}" fill="none" stroke="#999999" stroke-width="0.8"/>"##,
                s = options.panel_size
            )
            .unwrap();
            let s = options.panel_size;
            writeln!(
                svg,
                r##"<text x="0" y="{:.3}" font-family="sans-serif" font-size="9" fill="#666666">{:.3}</text>"##,
                s + 12.0,
                bounds.min_x
            )
            .unwrap();
            writeln!(
                svg,
                r##"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="9" fill="#666666" text-anchor="end">{:.3}</text>"##,
                s,
                s + 12.0,
                bounds.max_x
            )
            .unwrap();
            writeln!(
                svg,
                r##"<text x="-4" y="{s:.3}" font-family="sans-serif" font-size="9" fill="#666666" text-anchor="end">{:.3}</text>"##,
                bounds.min_y,
                s = options.panel_size
            )
            .unwrap();
            writeln!(
                svg,
                r##"<text x="-4" y="9" font-family="sans-serif" font-size="9" fill="#666666" text-anchor="end">{:.3}</text>"##,
                bounds.max_y
            )
            .unwrap();
        }

        writeln!(svg, "</g>").unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Height ramp from dark blue (low) to yellow (high).
fn height_color(z: f64, z_min: f64, z_max: f64) -> String {
    let span = z_max - z_min;
    let f = if span > 0.0 {
        ((z - z_min) / span).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let lerp = |a: f64, b: f64| (a + f * (b - a)).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(0.0, 255.0),
        lerp(0.0, 255.0),
        lerp(139.0, 0.0)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
