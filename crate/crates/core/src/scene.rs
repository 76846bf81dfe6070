//! Hierarchical composition of shape families into scenes.
//!
//! A [`Scene`] blends `M` member curves with a second smoothing parameter
//! `η` over a member index `q`, exactly the way a family blends landmarks
//! over `t`: type-I scenes use the open-shape kernel in `q`, type-II scenes
//! the periodic one. As `η → 0` the scene at `q = m` degenerates to member
//! `m`; as `η → ∞` it collapses to the pointwise average of all members.
//!
//! Members are trait objects so that a scene can itself become a member of
//! a bigger scene (see [`SceneCurve`]), giving arbitrarily deep hierarchies
//! out of one composition level.

use thiserror::Error;

use crate::bkernel::{b_kappa, b_kappa_row_sum, pi_kappa};
use crate::shape::{CurveSample, EvalResult, KappaFamily, Quality, SampledCurve, ShapeError};

/// Default smoothing scale used by [`Scene::recover_member`].
pub const DEFAULT_RECOVERY_ETA: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("scene needs at least one member")]
    EmptyScene,
    #[error("member {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("eta must be positive, got {0}")]
    NonPositiveEta(f64),
    #[error("member kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("member index {index} out of range for {len} members")]
    MemberIndexOutOfRange { index: usize, len: usize },
    #[error("sample range [{start}, {end}] is empty or non-increasing")]
    InvalidSampleRange { start: f64, end: f64 },
    #[error("sampling needs at least 2 points, got {0}")]
    InvalidSampleCount(usize),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Anything that can play the landmark role inside a scene: evaluated at a
/// time `t`, yields a point in a fixed dimension.
pub trait SceneMember: Send + Sync {
    fn dim(&self) -> usize;
    fn eval_member(&self, t: f64) -> Result<EvalResult, SceneError>;
}

/// A shape family frozen at one smoothing scale, the usual scene member.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    family: KappaFamily,
    kappa: f64,
}

impl FamilyMember {
    pub fn new(family: KappaFamily, kappa: f64) -> Result<Self, SceneError> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(SceneError::NonPositiveKappa(kappa));
        }
        Ok(Self { family, kappa })
    }

    pub fn family(&self) -> &KappaFamily {
        &self.family
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

impl SceneMember for FamilyMember {
    fn dim(&self) -> usize {
        self.family.dim()
    }

    fn eval_member(&self, t: f64) -> Result<EvalResult, SceneError> {
        Ok(self.family.eval(t, self.kappa)?)
    }
}

/// How the member index `q` wraps: type-I scenes are open in `q`
/// (canonical range `[0, M−1]`), type-II scenes are `M`-periodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneTopology {
    TypeI,
    TypeII,
}

/// Ordered composition of members blended over the index `q`.
pub struct Scene {
    members: Vec<Box<dyn SceneMember>>,
    topology: SceneTopology,
    dim: usize,
}

impl Scene {
    pub fn new(
        members: Vec<Box<dyn SceneMember>>,
        topology: SceneTopology,
    ) -> Result<Self, SceneError> {
        let first = members.first().ok_or(SceneError::EmptyScene)?;
        let dim = first.dim();
        for (index, m) in members.iter().enumerate() {
            if m.dim() != dim {
                return Err(SceneError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        Ok(Self {
            members,
            topology,
            dim,
        })
    }

    /// Scene over families that all share one smoothing scale.
    pub fn from_families(
        families: Vec<(KappaFamily, f64)>,
        topology: SceneTopology,
    ) -> Result<Self, SceneError> {
        let members = families
            .into_iter()
            .map(|(family, kappa)| {
                FamilyMember::new(family, kappa).map(|m| Box::new(m) as Box<dyn SceneMember>)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Scene::new(members, topology)
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn topology(&self) -> SceneTopology {
        self.topology
    }

    /// Evaluate the scene at time `t`, member index `q`, smoothing `eta`.
    ///
    /// The returned weights run over the members and form the same affine
    /// certificate as shape weights do over landmarks. `t` is shared by all
    /// members. Member evaluations outside their own canonical domain are
    /// not flagged here (members of different sizes legitimately extend);
    /// numeric clamping in a member does propagate.
    pub fn eval(&self, t: f64, q: f64, eta: f64) -> Result<EvalResult, SceneError> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(SceneError::NonPositiveEta(eta));
        }
        let m = self.members.len();
        let mf = m as f64;
        let (weights, mut quality) = match self.topology {
            SceneTopology::TypeI => {
                let raw_den = b_kappa_row_sum(q, m, eta);
                let (den, clamped) = if raw_den < f64::MIN_POSITIVE {
                    (f64::MIN_POSITIVE, true)
                } else {
                    (raw_den, false)
                };
                let weights: Vec<f64> = (0..m)
                    .map(|j| b_kappa(q - j as f64, 0.5, eta) / den)
                    .collect();
                let quality = if clamped {
                    Quality::DenominatorClamped
                } else if q < 0.0 || q > mf - 1.0 {
                    Quality::OutsideCanonicalDomain
                } else {
                    Quality::Exact
                };
                (weights, quality)
            }
            SceneTopology::TypeII => {
                let qr = q.rem_euclid(mf);
                let nums: Vec<f64> = (0..m)
                    .map(|j| {
                        let mut dv = qr - j as f64;
                        if dv >= 0.5 * mf {
                            dv -= mf;
                        } else if dv < -0.5 * mf {
                            dv += mf;
                        }
                        pi_kappa(dv, 0.5, eta, mf)
                    })
                    .collect();
                let raw_den: f64 = nums.iter().sum();
                let (den, clamped) = if raw_den < f64::MIN_POSITIVE {
                    (f64::MIN_POSITIVE, true)
                } else {
                    (raw_den, false)
                };
                let weights = nums.iter().map(|&v| v / den).collect();
                let quality = if clamped {
                    Quality::DenominatorClamped
                } else {
                    Quality::Exact
                };
                (weights, quality)
            }
        };

        let mut point = vec![0.0; self.dim];
        for (w, member) in weights.iter().zip(&self.members) {
            let eval = member.eval_member(t)?;
            if eval.quality == Quality::DenominatorClamped {
                quality = quality.worse(Quality::DenominatorClamped);
            }
            for (acc, &c) in point.iter_mut().zip(&eval.point) {
                *acc += w * c;
            }
        }
        Ok(EvalResult {
            point,
            weights,
            quality,
        })
    }

    /// Recover member `m` by evaluating at `q = m` with a small `η`
    /// ([`DEFAULT_RECOVERY_ETA`]); the result matches the member's own
    /// evaluation at `t` to the smoothing leakage.
    pub fn recover_member(&self, m: usize, t: f64) -> Result<Vec<f64>, SceneError> {
        let len = self.members.len();
        if m >= len {
            return Err(SceneError::MemberIndexOutOfRange { index: m, len });
        }
        Ok(self.eval(t, m as f64, DEFAULT_RECOVERY_ETA)?.point)
    }

    /// Sample the scene slice at fixed `(q, eta)` over a `t` grid.
    pub fn sample(
        &self,
        q: f64,
        eta: f64,
        t_start: f64,
        t_end: f64,
        count: usize,
    ) -> Result<SampledCurve, SceneError> {
        if count < 2 {
            return Err(SceneError::InvalidSampleCount(count));
        }
        if !(t_start < t_end) {
            return Err(SceneError::InvalidSampleRange {
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
            let eval = self.eval(t, q, eta)?;
            samples.push(CurveSample {
                t,
                point: eval.point,
                quality: eval.quality,
            });
        }
        Ok(SampledCurve {
            dim: self.dim,
            samples,
        })
    }

    /// Freeze this scene at `(q, eta)` so it can serve as a member of a
    /// bigger scene.
    pub fn into_member(self, q: f64, eta: f64) -> Result<SceneCurve, SceneError> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(SceneError::NonPositiveEta(eta));
        }
        Ok(SceneCurve {
            scene: self,
            q,
            eta,
        })
    }
}

/// A scene viewed as a single `t`-curve at fixed `(q, η)`; the adapter that
/// lets scenes nest inside scenes.
pub struct SceneCurve {
    scene: Scene,
    q: f64,
    eta: f64,
}

impl SceneMember for SceneCurve {
    fn dim(&self) -> usize {
        self.scene.dim()
    }

    fn eval_member(&self, t: f64) -> Result<EvalResult, SceneError> {
        self.scene.eval(t, self.q, self.eta)
    }
}
