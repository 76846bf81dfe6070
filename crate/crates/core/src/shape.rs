//! Families of smooth shapes parameterized by a smoothing scale `κ`.
//!
//! A [`LandmarkSet`] is an ordered list of `N` points in `R^D` plus a
//! topology flag. A [`KappaFamily`] evaluates the embedding
//!
//! ```text
//!   r_κ(t) = Σ_j r_j · w_j(t, κ)
//! ```
//!
//! where the weights `w_j` come from the smooth box kernel (open shapes) or
//! its periodic variant (closed shapes). The weights are nonnegative and sum
//! to one, so every evaluated point is a convex combination of the
//! landmarks; they are returned with each evaluation as a containment
//! certificate. As `κ → 0` the curve interpolates the landmarks, as
//! `κ → ∞` it collapses onto their centroid.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bkernel::{b_kappa, b_kappa_row_sum};

/// Default smoothing scale used by [`KappaFamily::recover_landmark`].
pub const DEFAULT_RECOVERY_KAPPA: f64 = 1e-3;

/// Default number of samples per unit of `t` used by
/// [`KappaFamily::sample_default`]: `10·N + 1` points over the canonical
/// range.
pub const DEFAULT_SAMPLES_PER_LANDMARK: usize = 10;

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("landmark set must contain at least one point")]
    EmptyLandmarkSet,
    #[error("landmark points must have dimension >= 1")]
    ZeroDimension,
    #[error("landmark {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("{found} labels provided for {expected} landmarks")]
    LabelCountMismatch { expected: usize, found: usize },
    #[error("operation requires {expected:?} topology, family is {found:?}")]
    TopologyMismatch { expected: Topology, found: Topology },
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("landmark index {index} out of range for {len} landmarks")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(
        "landmark {index} not recovered: error {error:.3e} exceeds tolerance {tolerance:.3e} \
         (closed families with many landmarks need a smaller recovery kappa)"
    )]
    RecoveryOutOfTolerance {
        index: usize,
        error: f64,
        tolerance: f64,
    },
    #[error("sample range [{start}, {end}] is empty or non-increasing")]
    InvalidSampleRange { start: f64, end: f64 },
    #[error("sampling needs at least 2 points, got {0}")]
    InvalidSampleCount(usize),
    #[error("transform matrix must have at least one row")]
    EmptyTransform,
    #[error("transform row {row} has {found} columns, expected {expected}")]
    TransformShape {
        row: usize,
        expected: usize,
        found: usize,
    },
}

/// Whether the landmark sequence describes an open arc or a periodic loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Open,
    Closed,
}

/// Ordered landmarks in `R^D`. Order is significant and duplicates are
/// allowed: repeating a landmark gives it more weight in the family.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet {
    points: Vec<Vec<f64>>,
    dim: usize,
    topology: Topology,
    labels: Option<Vec<String>>,
}

impl LandmarkSet {
    pub fn new(points: Vec<Vec<f64>>, topology: Topology) -> Result<Self, ShapeError> {
        let first = points.first().ok_or(ShapeError::EmptyLandmarkSet)?;
        let dim = first.len();
        if dim == 0 {
            return Err(ShapeError::ZeroDimension);
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(ShapeError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        Ok(Self {
            points,
            dim,
            topology,
            labels: None,
        })
    }

    pub fn open(points: Vec<Vec<f64>>) -> Result<Self, ShapeError> {
        Self::new(points, Topology::Open)
    }

    pub fn closed(points: Vec<Vec<f64>>) -> Result<Self, ShapeError> {
        Self::new(points, Topology::Closed)
    }

    /// One-dimensional set from a list of scalars (time series, waveforms).
    pub fn from_scalars(values: &[f64], topology: Topology) -> Result<Self, ShapeError> {
        Self::new(values.iter().map(|&v| vec![v]).collect(), topology)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ShapeError> {
        if labels.len() != self.points.len() {
            return Err(ShapeError::LabelCountMismatch {
                expected: self.points.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.points[j]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Largest coordinate magnitude over all landmarks.
    pub fn max_abs_coord(&self) -> f64 {
        self.points
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0f64, |m, &c| m.max(c.abs()))
    }

    /// Same landmarks cyclically rotated left by `m` positions.
    pub fn cycled(&self, m: usize) -> LandmarkSet {
        let n = self.points.len();
        let points = (0..n).map(|j| self.points[(j + m) % n].clone()).collect();
        LandmarkSet {
            points,
            dim: self.dim,
            topology: self.topology,
            labels: None,
        }
    }
}

/// Evaluation quality flag attached to every evaluated point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quality {
    /// Weights are a valid convex combination to working precision.
    Exact,
    /// The kernel denominator underflowed and was clamped to the smallest
    /// positive normal number; the point is total but meaningless.
    DenominatorClamped,
    /// `t` (or the scene index `q`) lies outside the canonical parameter
    /// range of an open family. The value is still defined by the formulas.
    OutsideCanonicalDomain,
}

impl Quality {
    pub fn as_str(self) -> &'static str {
        match self {
            Quality::Exact => "exact",
            Quality::DenominatorClamped => "denominator_clamped",
            Quality::OutsideCanonicalDomain => "outside_canonical_domain",
        }
    }

    pub fn parse(s: &str) -> Option<Quality> {
        match s {
            "exact" => Some(Quality::Exact),
            "denominator_clamped" => Some(Quality::DenominatorClamped),
            "outside_canonical_domain" => Some(Quality::OutsideCanonicalDomain),
            _ => None,
        }
    }

    fn rank(self) -> u8 {
        match self {
            Quality::Exact => 0,
            Quality::OutsideCanonicalDomain => 1,
            Quality::DenominatorClamped => 2,
        }
    }

    /// The worse of two flags (`DenominatorClamped` dominates).
    pub fn worse(self, other: Quality) -> Quality {
        if self.rank() >= other.rank() {
            self
        } else {
            other
        }
    }
}

/// One evaluated point together with its affine-weight certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub point: Vec<f64>,
    /// Per-landmark coefficients; nonnegative with sum 1 when `quality` is
    /// [`Quality::Exact`].
    pub weights: Vec<f64>,
    pub quality: Quality,
}

/// One `(t, point)` sample of a family member.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub point: Vec<f64>,
    pub quality: Quality,
}

/// Ordered samples of one family member at fixed `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub dim: usize,
    pub samples: Vec<CurveSample>,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A landmark set together with its family evaluation machinery.
///
/// Immutable after construction; evaluation is pure, so a family can be
/// shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaFamily {
    landmarks: LandmarkSet,
}

impl KappaFamily {
    pub fn new(landmarks: LandmarkSet) -> Self {
        Self { landmarks }
    }

    pub fn landmarks(&self) -> &LandmarkSet {
        &self.landmarks
    }

    pub fn len(&self) -> usize {
        self.landmarks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.landmarks.dim()
    }

    pub fn topology(&self) -> Topology {
        self.landmarks.topology()
    }

    /// Canonical evaluation range: `[0, N−1]` for open families, `[0, N]`
    /// (one full period) for closed ones.
    pub fn canonical_range(&self) -> (f64, f64) {
        let n = self.landmarks.len() as f64;
        match self.topology() {
            Topology::Open => (0.0, n - 1.0),
            Topology::Closed => (0.0, n),
        }
    }

    /// Evaluate the family member at `(t, κ)`, dispatching on topology.
    pub fn eval(&self, t: f64, kappa: f64) -> Result<EvalResult, ShapeError> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(ShapeError::NonPositiveKappa(kappa));
        }
        Ok(match self.topology() {
            Topology::Open => self.eval_open_impl(t, kappa),
            Topology::Closed => self.eval_closed_impl(t, kappa),
        })
    }

    /// Open-shape evaluation. Defined for all real `t`; points with
    /// `t ∉ [0, N−1]` are flagged [`Quality::OutsideCanonicalDomain`].
    pub fn eval_open(&self, t: f64, kappa: f64) -> Result<EvalResult, ShapeError> {
        self.require_topology(Topology::Open)?;
        self.eval(t, kappa)
    }

    /// Closed-shape evaluation; `N`-periodic in `t`.
    pub fn eval_closed(&self, t: f64, kappa: f64) -> Result<EvalResult, ShapeError> {
        self.require_topology(Topology::Closed)?;
        self.eval(t, kappa)
    }

    /// Arithmetic mean of the landmarks; the `κ → ∞` limit of the family.
    pub fn centroid(&self) -> Vec<f64> {
        let n = self.landmarks.len() as f64;
        let mut c = vec![0.0; self.dim()];
        for p in self.landmarks.points() {
            for (acc, &v) in c.iter_mut().zip(p) {
                *acc += v;
            }
        }
        for acc in &mut c {
            *acc /= n;
        }
        c
    }

    /// Recover landmark `n` by evaluating at `t = n` with a small smoothing
    /// scale ([`DEFAULT_RECOVERY_KAPPA`]). Errors if the recovered point is
    /// not within `1e-6 · (1 + max|r_j|)` of the landmark.
    pub fn recover_landmark(&self, n: usize) -> Result<Vec<f64>, ShapeError> {
        self.recover_landmark_with_kappa(n, DEFAULT_RECOVERY_KAPPA)
    }

    /// Recovery with an explicit smoothing scale. Closed families compress
    /// the landmark spacing through the periodic kernel, so sets with many
    /// landmarks need `kappa` well below `2(sin(π/N) − sin(π/2N)) / 30`.
    pub fn recover_landmark_with_kappa(
        &self,
        n: usize,
        kappa: f64,
    ) -> Result<Vec<f64>, ShapeError> {
        let len = self.landmarks.len();
        if n >= len {
            return Err(ShapeError::IndexOutOfRange { index: n, len });
        }
        let result = self.eval(n as f64, kappa)?;
        let tolerance = 1e-6 * (1.0 + self.landmarks.max_abs_coord());
        let error = linf_distance(&result.point, self.landmarks.point(n));
        if error > tolerance {
            return Err(ShapeError::RecoveryOutOfTolerance {
                index: n,
                error,
                tolerance,
            });
        }
        Ok(result.point)
    }

    /// Sample the member at `κ` on a uniform grid over `[t_start, t_end]`,
    /// inclusive of both ends.
    pub fn sample(
        &self,
        kappa: f64,
        t_start: f64,
        t_end: f64,
        count: usize,
    ) -> Result<SampledCurve, ShapeError> {
        if count < 2 {
            return Err(ShapeError::InvalidSampleCount(count));
        }
        if !(t_start < t_end) {
            return Err(ShapeError::InvalidSampleRange {
                start: t_start,
                end: t_end,
            });
        }
        let span = t_end - t_start;
        let last = count - 1;
        let mut samples = Vec::with_capacity(count);
        for i in 0..count {
            let t = if i == last {
                t_end
            } else {
                t_start + span * i as f64 / last as f64
            };
            let eval = self.eval(t, kappa)?;
            samples.push(CurveSample {
                t,
                point: eval.point,
                quality: eval.quality,
            });
        }
        Ok(SampledCurve {
            dim: self.dim(),
            samples,
        })
    }

    /// Sample over the canonical range with `10·N + 1` points.
    pub fn sample_default(&self, kappa: f64) -> Result<SampledCurve, ShapeError> {
        let (start, end) = self.canonical_range();
        let count = DEFAULT_SAMPLES_PER_LANDMARK * self.landmarks.len() + 1;
        self.sample(kappa, start, end, count.max(2))
    }

    /// Family over linearly transformed landmarks. `matrix` is row-major
    /// with `D' ≥ 1` rows of `D` columns; evaluations of the result equal
    /// the transformed evaluations of the original at every `(t, κ)` because
    /// the weights depend only on `(t, κ, N)`.
    pub fn transform(&self, matrix: &[Vec<f64>]) -> Result<KappaFamily, ShapeError> {
        if matrix.is_empty() {
            return Err(ShapeError::EmptyTransform);
        }
        let dim = self.dim();
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != dim {
                return Err(ShapeError::TransformShape {
                    row,
                    expected: dim,
                    found: r.len(),
                });
            }
        }
        let points = self
            .landmarks
            .points()
            .iter()
            .map(|p| apply_matrix(matrix, p))
            .collect();
        let landmarks = LandmarkSet::new(points, self.topology())?;
        Ok(KappaFamily::new(landmarks))
    }

    fn require_topology(&self, expected: Topology) -> Result<(), ShapeError> {
        if self.topology() != expected {
            return Err(ShapeError::TopologyMismatch {
                expected,
                found: self.topology(),
            });
        }
        Ok(())
    }

    fn eval_open_impl(&self, t: f64, kappa: f64) -> EvalResult {
        let n = self.landmarks.len();
        let raw_den = b_kappa_row_sum(t, n, kappa);
        let (den, clamped) = clamp_denominator(raw_den);
        let weights: Vec<f64> = (0..n)
            .map(|j| b_kappa(t - j as f64, 0.5, kappa) / den)
            .collect();
        let point = weighted_point(&self.landmarks, &weights);
        let quality = if clamped {
            Quality::DenominatorClamped
        } else if t < 0.0 || t > (n - 1) as f64 {
            Quality::OutsideCanonicalDomain
        } else {
            Quality::Exact
        };
        EvalResult {
            point,
            weights,
            quality,
        }
    }

    fn eval_closed_impl(&self, t: f64, kappa: f64) -> EvalResult {
        let n = self.landmarks.len();
        let nf = n as f64;
        // Reduce t to one period, then center each offset in [-N/2, N/2).
        // Evaluations at t and t + kN then share bits, so the N-periodicity
        // of the result holds to rounding even for large t.
        let tr = t.rem_euclid(nf);
        let half_width = (std::f64::consts::PI * 0.5 / nf).sin();
        let nums: Vec<f64> = (0..n)
            .map(|j| {
                let mut dv = tr - j as f64;
                if dv >= 0.5 * nf {
                    dv -= nf;
                } else if dv < -0.5 * nf {
                    dv += nf;
                }
                b_kappa((std::f64::consts::PI * dv / nf).sin(), half_width, kappa)
            })
            .collect();
        let raw_den: f64 = nums.iter().sum();
        let (den, clamped) = clamp_denominator(raw_den);
        let weights: Vec<f64> = nums.iter().map(|&v| v / den).collect();
        let point = weighted_point(&self.landmarks, &weights);
        let quality = if clamped {
            Quality::DenominatorClamped
        } else {
            Quality::Exact
        };
        EvalResult {
            point,
            weights,
            quality,
        }
    }
}

/// Clamp an underflowed denominator to the smallest positive normal value.
/// The analytic denominator is strictly positive, so clamping keeps the
/// evaluation total; the flag records that the result is unreliable.
fn clamp_denominator(den: f64) -> (f64, bool) {
    if den < f64::MIN_POSITIVE {
        (f64::MIN_POSITIVE, true)
    } else {
        (den, false)
    }
}

fn weighted_point(landmarks: &LandmarkSet, weights: &[f64]) -> Vec<f64> {
    let mut point = vec![0.0; landmarks.dim()];
    for (w, p) in weights.iter().zip(landmarks.points()) {
        for (acc, &c) in point.iter_mut().zip(p) {
            *acc += w * c;
        }
    }
    point
}

fn apply_matrix(matrix: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(&m, &x)| m * x).sum())
        .collect()
}

fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs()))
}
