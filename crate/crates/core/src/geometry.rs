//! Independent verification machinery: convex hulls, containment tests and
//! projected crossing counts for closed space curves.
//!
//! Hull containment checks the main structural guarantee of the embeddings
//! (every evaluated point stays inside the convex hull of the landmarks) by
//! a route independent of the weights; [`weight_certificate_contains`] is
//! the dimension-independent counterpart that inspects the weights
//! directly. [`projected_crossings`] counts transverse self-intersections
//! of the xy-projection of a closed 3D curve, the observable that detects
//! knot/unknot transitions as the smoothing scale grows.

use thiserror::Error;

use crate::shape::{EvalResult, SampledCurve};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("hull of an empty point set is undefined")]
    EmptyPointSet,
    #[error("operation requires 2D points, got dimension {0}")]
    NotTwoDimensional(usize),
    #[error("crossing detection requires a 3D curve, got dimension {0}")]
    NotThreeDimensional(usize),
    #[error("crossing detection needs at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("curve is not closed: endpoint gap {gap:.3e} exceeds {tol:.3e}")]
    NotClosed { gap: f64, tol: f64 },
}

/// Convex hull of a 2D point set, vertices in counterclockwise order.
///
/// Strictly convex: collinear intermediate points are dropped. Degenerate
/// inputs collapse to a 2-point segment (all collinear) or a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexHull2D {
    vertices: Vec<[f64; 2]>,
}

impl ConvexHull2D {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Largest pairwise distance between hull vertices.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(dist(v[i], v[j]));
            }
        }
        best
    }

    /// Signed distance of `p` to the hull: positive inside, negative
    /// outside, zero on the boundary. For degenerate hulls (1 or 2
    /// vertices) this is minus the distance to the point or segment.
    pub fn signed_distance(&self, p: [f64; 2]) -> f64 {
        match self.vertices.len() {
            0 => f64::NEG_INFINITY,
            1 => -dist(p, self.vertices[0]),
            2 => -dist_to_segment(p, self.vertices[0], self.vertices[1]),
            n => {
                let mut min = f64::INFINITY;
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    let len = dist(a, b);
                    let d = cross(sub(b, a), sub(p, a)) / len;
                    min = min.min(d);
                }
                min
            }
        }
    }

    /// True iff `p` lies inside the hull or within `tol` of its boundary.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        self.signed_distance(p) >= -tol
    }
}

/// Convex hull by monotone chain.
pub fn hull_2d(points: &[[f64; 2]]) -> Result<ConvexHull2D, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a[0].total_cmp(&b[0]).then_with(|| a[1].total_cmp(&b[1]))
    });
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(ConvexHull2D { vertices: pts });
    }

    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && cross(
                sub(lower[lower.len() - 1], lower[lower.len() - 2]),
                sub(p, lower[lower.len() - 2]),
            ) <= 0.0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(
                sub(upper[upper.len() - 1], upper[upper.len() - 2]),
                sub(p, upper[upper.len() - 2]),
            ) <= 0.0
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // Everything was collinear and got popped down to the extremes.
        return Ok(ConvexHull2D {
            vertices: vec![pts[0], pts[pts.len() - 1]],
        });
    }
    Ok(ConvexHull2D { vertices: lower })
}

/// Containment test against a prebuilt hull.
pub fn contains_2d(hull: &ConvexHull2D, p: [f64; 2], tol: f64) -> bool {
    hull.contains(p, tol)
}

/// Dimension-independent containment certificate: the evaluation's weights
/// must be nonnegative (within `tol`) and sum to 1 (within `tol`).
pub fn weight_certificate_contains(result: &EvalResult, tol: f64) -> bool {
    weights_are_affine(&result.weights, tol)
}

/// Raw form of [`weight_certificate_contains`] for synthetic weight lists.
pub fn weights_are_affine(weights: &[f64], tol: f64) -> bool {
    if weights.iter().any(|&w| w < -tol) {
        return false;
    }
    let sum: f64 = weights.iter().sum();
    (sum - 1.0).abs() <= tol
}

/// Extract 2D points from a landmark set or sampled curve row.
pub fn as_xy(point: &[f64]) -> Result<[f64; 2], GeometryError> {
    if point.len() != 2 {
        return Err(GeometryError::NotTwoDimensional(point.len()));
    }
    Ok([point[0], point[1]])
}

/// One transverse self-intersection of the projected curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    /// Curve parameter on the first strand (`t_a < t_b`).
    pub t_a: f64,
    /// Curve parameter on the second strand.
    pub t_b: f64,
    /// Intersection point in the xy-projection.
    pub point: [f64; 2],
    /// `0` if the strand at `t_a` has the greater z, `1` otherwise.
    pub over_index: usize,
}

/// Crossing census of a projected closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub crossing_count: usize,
    pub crossings: Vec<Crossing>,
    /// Near-tangential segment pairs excluded by the angular guard.
    pub degenerate_count: usize,
}

/// Tuning knobs for [`projected_crossings_with`]. All radii are fractions
/// of the projected bounding-box diagonal.
#[derive(Debug, Clone)]
pub struct CrossingOptions {
    /// Maximum endpoint gap for the curve to count as closed.
    pub closure_tol: f64,
    /// Consecutive projected samples closer than this collapse to one
    /// vertex before intersection testing. Small smoothing scales make the
    /// curve dwell at landmarks, producing clouds of near-coincident
    /// samples whose micro-segments carry no direction information.
    pub snap_radius_frac: f64,
    /// Raw intersections closer than this merge into a single crossing.
    pub merge_radius_frac: f64,
    /// Segment pairs with |sin of crossing angle| below this are reported
    /// as degenerate instead of counted.
    pub angle_guard: f64,
    /// Cyclic parameter separation below which a segment pair is treated
    /// as adjacent and skipped. `None` means four mean sample steps.
    pub param_guard: Option<f64>,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        Self {
            closure_tol: 1e-9,
            snap_radius_frac: 1e-9,
            merge_radius_frac: 1e-3,
            angle_guard: 1e-9,
            param_guard: None,
        }
    }
}

/// Count transverse self-intersections of the xy-projection of a densely
/// sampled closed 3D curve, with default guards.
pub fn projected_crossings(curve: &SampledCurve) -> Result<CrossingReport, GeometryError> {
    projected_crossings_with(curve, &CrossingOptions::default())
}

pub fn projected_crossings_with(
    curve: &SampledCurve,
    options: &CrossingOptions,
) -> Result<CrossingReport, GeometryError> {
    if curve.dim != 3 {
        return Err(GeometryError::NotThreeDimensional(curve.dim));
    }
    if curve.len() < 4 {
        return Err(GeometryError::TooFewSamples(curve.len()));
    }
    let first = &curve.samples[0];
    let last = &curve.samples[curve.len() - 1];
    let gap = first
        .point
        .iter()
        .zip(&last.point)
        .fold(0.0f64, |m, (&a, &b)| m.max((a - b).abs()));
    if gap > options.closure_tol {
        return Err(GeometryError::NotClosed {
            gap,
            tol: options.closure_tol,
        });
    }

    // Ring of (t, x, y, z) vertices; the duplicated closing sample is dropped.
    let ring: Vec<(f64, f64, f64, f64)> = curve.samples[..curve.len() - 1]
        .iter()
        .map(|s| (s.t, s.point[0], s.point[1], s.point[2]))
        .collect();

    let (mut min_x, mut min_y, mut max_x, mut max_y) =
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(_, x, y, _) in &ring {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let diag = ((max_x - min_x).powi(2) + (max_y - min_y).powi(2)).sqrt();
    let snap = options.snap_radius_frac * diag;
    let merge = options.merge_radius_frac * diag;

    let mut kept: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(ring.len());
    for &v in &ring {
        match kept.last() {
            Some(&(_, x, y, _)) if ((v.1 - x).powi(2) + (v.2 - y).powi(2)).sqrt() < snap => {}
            _ => kept.push(v),
        }
    }
    // Wraparound: the last kept vertex may coincide with the first.
    if kept.len() > 2 {
        let f = kept[0];
        let l = kept[kept.len() - 1];
        if ((f.1 - l.1).powi(2) + (f.2 - l.2).powi(2)).sqrt() < snap {
            kept.pop();
        }
    }
    let m = kept.len();
    if m < 3 || diag == 0.0 {
        return Ok(CrossingReport {
            crossing_count: 0,
            crossings: Vec::new(),
            degenerate_count: 0,
        });
    }

    let period = (last.t - first.t).abs();
    let mean_step = period / (curve.len() - 1) as f64;
    let param_guard = options.param_guard.unwrap_or(4.0 * mean_step);

    let mut raw: Vec<Crossing> = Vec::new();
    let mut degenerate = 0usize;
    for i in 0..m {
        let (ta0, ax0, ay0, az0) = kept[i];
        let (ta1, ax1, ay1, az1) = kept[(i + 1) % m];
        let d1 = [ax1 - ax0, ay1 - ay0];
        for j in i + 1..m {
            // Skip segments adjacent on the ring (they share a vertex).
            if j == i + 1 || (i == 0 && j == m - 1) {
                continue;
            }
            let (tb0, bx0, by0, bz0) = kept[j];
            let (tb1, bx1, by1, bz1) = kept[(j + 1) % m];
            if cyclic_gap(0.5 * (ta0 + ta1), 0.5 * (tb0 + tb1), period) < param_guard {
                continue;
            }
            let d2 = [bx1 - bx0, by1 - by0];
            let denom = cross(d1, d2);
            let n1 = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
            let n2 = (d2[0] * d2[0] + d2[1] * d2[1]).sqrt();
            if denom.abs() <= options.angle_guard * n1 * n2 {
                // Near-parallel; only meaningful if the segments come close.
                if boxes_touch(
                    (ax0, ay0, ax1, ay1),
                    (bx0, by0, bx1, by1),
                    options.angle_guard * diag,
                ) {
                    degenerate += 1;
                }
                continue;
            }
            let rhs = [bx0 - ax0, by0 - ay0];
            let s = cross(rhs, d2) / denom;
            let u = cross(rhs, d1) / denom;
            if !(0.0..1.0).contains(&s) || !(0.0..1.0).contains(&u) {
                continue;
            }
            let t_a = ta0 + s * param_delta(ta0, ta1, period);
            let t_b = tb0 + u * param_delta(tb0, tb1, period);
            let z_a = az0 + s * (az1 - az0);
            let z_b = bz0 + u * (bz1 - bz0);
            raw.push(Crossing {
                t_a,
                t_b,
                point: [ax0 + s * d1[0], ay0 + s * d1[1]],
                over_index: if z_a > z_b { 0 } else { 1 },
            });
        }
    }

    // Merge raw hits that land in the same neighbourhood: a single
    // geometric crossing can register several times where sample clusters
    // sit exactly on the other strand.
    raw.sort_by(|a, b| a.t_a.total_cmp(&b.t_a).then(a.t_b.total_cmp(&b.t_b)));
    let mut crossings: Vec<Crossing> = Vec::new();
    for c in raw {
        if crossings
            .iter()
            .any(|k| dist(k.point, c.point) <= merge)
        {
            continue;
        }
        crossings.push(c);
    }

    Ok(CrossingReport {
        crossing_count: crossings.len(),
        crossings,
        degenerate_count: degenerate,
    })
}

fn param_delta(t0: f64, t1: f64, period: f64) -> f64 {
    let d = t1 - t0;
    // The closing segment wraps from the end of the period to its start.
    if d < 0.0 {
        d + period
    } else {
        d
    }
}

fn cyclic_gap(a: f64, b: f64, period: f64) -> f64 {
    if period <= 0.0 {
        return (a - b).abs();
    }
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

fn boxes_touch(a: (f64, f64, f64, f64), b: (f64, f64, f64, f64), slack: f64) -> bool {
    let (ax0, ay0, ax1, ay1) = a;
    let (bx0, by0, bx1, by1) = b;
    ax0.min(ax1) - slack <= bx0.max(bx1)
        && bx0.min(bx1) - slack <= ax0.max(ax1)
        && ay0.min(ay1) - slack <= by0.max(by1)
        && by0.min(by1) - slack <= ay0.max(ay1)
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn dist_to_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = sub(b, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2;
    let t = t.clamp(0.0, 1.0);
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}
