//! Landmark-set generators: closed-form polygon and star matrices, the
//! space-filling substitution system, chaotic-map iterations, an
//! Euler-discretized strange attractor, and a trefoil knot.
//!
//! Every generator is a pure, deterministic constructor: identical
//! parameters (including the seed of [`random_uniform_landmarks`]) always
//! produce identical landmark lists.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::shape::{LandmarkSet, ShapeError, Topology};

/// Random generator recorded in output metadata so published seeds keep
/// reproducing across versions.
pub const RNG_ALGORITHM: &str = "chacha8-seed64";

/// Substitution depth guard: 4^13 landmarks is already ~67M points.
pub const MAX_SUBSTITUTION_DEPTH: u32 = 13;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("polygon/star generators need at least 3 sides, got {0}")]
    TooFewSides(u32),
    #[error("substitution depth {0} exceeds the maximum of {MAX_SUBSTITUTION_DEPTH}")]
    SubstitutionTooDeep(u32),
    #[error("generator needs at least one landmark, got n = {0}")]
    EmptyOutput(usize),
    #[error("logistic parameter {name} = {value} outside [{min}, {max}]")]
    LogisticOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("random landmarks need dimension >= 1")]
    ZeroDimension,
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Declarative description of a landmark generator, for CLI and config use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Polygon { p: u32 },
    Star { p: u32 },
    PlanarGraphExample,
    LemniscateSquare,
    LemniscateSixPoint,
    Hilbert { q: u32 },
    Logistic { mu: f64, y0: f64, n: usize },
    Lorenz {
        sigma: f64,
        rho: f64,
        beta: f64,
        delta: f64,
        init: [f64; 3],
        n: usize,
    },
    Trefoil,
    RandomUniform { n: usize, d: usize, seed: u64 },
    Explicit {
        topology: Topology,
        points: Vec<Vec<f64>>,
    },
}

impl GeneratorSpec {
    /// Build the landmark set this spec describes.
    pub fn build(&self) -> Result<LandmarkSet, GeneratorError> {
        match self {
            GeneratorSpec::Polygon { p } => polygon_landmarks(*p),
            GeneratorSpec::Star { p } => star_landmarks(*p),
            GeneratorSpec::PlanarGraphExample => Ok(planar_graph_example_landmarks()),
            GeneratorSpec::LemniscateSquare => Ok(lemniscate_landmarks(LemniscateVariant::Square4)),
            GeneratorSpec::LemniscateSixPoint => {
                Ok(lemniscate_landmarks(LemniscateVariant::SixPoint))
            }
            GeneratorSpec::Hilbert { q } => hilbert_landmarks(*q),
            GeneratorSpec::Logistic { mu, y0, n } => logistic_landmarks(*mu, *y0, *n),
            GeneratorSpec::Lorenz {
                sigma,
                rho,
                beta,
                delta,
                init,
                n,
            } => lorenz_landmarks(*sigma, *rho, *beta, *delta, *init, *n),
            GeneratorSpec::Trefoil => Ok(trefoil_landmarks()),
            GeneratorSpec::RandomUniform { n, d, seed } => random_uniform_landmarks(*n, *d, *seed),
            GeneratorSpec::Explicit { topology, points } => {
                Ok(LandmarkSet::new(points.clone(), *topology)?)
            }
        }
    }
}

/// Vertices of the regular `P`-gon on the unit circle: landmark `j` is
/// `(cos(2π(j+1)/P), sin(2π(j+1)/P))`. Closed, 2D.
pub fn polygon_landmarks(p: u32) -> Result<LandmarkSet, GeneratorError> {
    if p < 3 {
        return Err(GeneratorError::TooFewSides(p));
    }
    let points = (0..p)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * (j + 1) as f64 / p as f64;
            vec![angle.cos(), angle.sin()]
        })
        .collect();
    Ok(LandmarkSet::closed(points)?)
}

/// Star over the `P`-gon: the polygon vertices alternated with the origin,
/// `(0,0), v_1, (0,0), v_2, …, (0,0), v_P`. Closed, 2D, `N = 2P`.
pub fn star_landmarks(p: u32) -> Result<LandmarkSet, GeneratorError> {
    let polygon = polygon_landmarks(p)?;
    let mut points = Vec::with_capacity(2 * p as usize);
    for v in polygon.points() {
        points.push(vec![0.0, 0.0]);
        points.push(v.clone());
    }
    Ok(LandmarkSet::closed(points)?)
}

/// The fixed 10-landmark planar-graph example: origins alternated with the
/// first four hexagon vertices, then the last two hexagon vertices without
/// separating origins. Closed, 2D.
pub fn planar_graph_example_landmarks() -> LandmarkSet {
    let hex = |k: u32| {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / 6.0;
        vec![angle.cos(), angle.sin()]
    };
    let mut points = Vec::with_capacity(10);
    for k in 1..=4 {
        points.push(vec![0.0, 0.0]);
        points.push(hex(k));
    }
    points.push(hex(5));
    points.push(hex(6));
    LandmarkSet::closed(points).expect("static matrix is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemniscateVariant {
    /// Four square vertices ordered so the loop crosses itself at the origin.
    Square4,
    /// Same trace with the origin inserted twice: an equal limit shape that
    /// belongs to a different family.
    SixPoint,
}

pub fn lemniscate_landmarks(variant: LemniscateVariant) -> LandmarkSet {
    let points = match variant {
        LemniscateVariant::Square4 => vec![
            vec![-1.0, -1.0],
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
        ],
        LemniscateVariant::SixPoint => vec![
            vec![-1.0, -1.0],
            vec![0.0, 0.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            vec![-1.0, 1.0],
        ],
    };
    LandmarkSet::closed(points).expect("static matrix is valid")
}

/// Space-filling curve landmarks after `Q` substitution rounds. Open, 2D,
/// `N = 4^Q` points in `[−1, 1]²` with consecutive L∞ spacing `2^{1−Q}`.
///
/// Starting from the single landmark `(0, 0)`, each round maps the whole
/// previous generation through the four quadrant contractions
///
/// ```text
///   (x, y) ↦ ((y−1)/2, (x−1)/2)    lower-left,  transposed
///   (x, y) ↦ ((x−1)/2, (y+1)/2)    upper-left
///   (x, y) ↦ ((x+1)/2, (y+1)/2)    upper-right
///   (x, y) ↦ ((1−y)/2, (−1−x)/2)   lower-right, anti-transposed
/// ```
///
/// in that order: the new generation is the image of the old one under the
/// first map, then under the second, and so on. The transposed end maps
/// reverse the traversal inside their quadrants, which is what keeps the
/// spacing uniform across quadrant boundaries. All arithmetic is exact in
/// f64 (halving and adding halves of dyadics).
pub fn hilbert_landmarks(q: u32) -> Result<LandmarkSet, GeneratorError> {
    if q > MAX_SUBSTITUTION_DEPTH {
        return Err(GeneratorError::SubstitutionTooDeep(q));
    }
    let mut gen: Vec<[f64; 2]> = vec![[0.0, 0.0]];
    for _ in 0..q {
        let mut next = Vec::with_capacity(4 * gen.len());
        for &[x, y] in &gen {
            next.push([(y - 1.0) / 2.0, (x - 1.0) / 2.0]);
        }
        for &[x, y] in &gen {
            next.push([(x - 1.0) / 2.0, (y + 1.0) / 2.0]);
        }
        for &[x, y] in &gen {
            next.push([(x + 1.0) / 2.0, (y + 1.0) / 2.0]);
        }
        for &[x, y] in &gen {
            next.push([(1.0 - y) / 2.0, (-1.0 - x) / 2.0]);
        }
        gen = next;
    }
    Ok(LandmarkSet::open(
        gen.into_iter().map(|p| p.to_vec()).collect(),
    )?)
}

/// Iterates `X_{j} = μ·X_{j−1}·(1 − X_{j−1})` from `X_0 = y0`, producing
/// `n` scalar landmarks. Open, 1D. Requires `μ ∈ [0, 4]` and `y0 ∈ [0, 1]`,
/// which keeps every iterate inside `[0, 1]`.
pub fn logistic_landmarks(mu: f64, y0: f64, n: usize) -> Result<LandmarkSet, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::EmptyOutput(n));
    }
    if !(0.0..=4.0).contains(&mu) {
        return Err(GeneratorError::LogisticOutOfRange {
            name: "mu",
            value: mu,
            min: 0.0,
            max: 4.0,
        });
    }
    if !(0.0..=1.0).contains(&y0) {
        return Err(GeneratorError::LogisticOutOfRange {
            name: "y0",
            value: y0,
            min: 0.0,
            max: 1.0,
        });
    }
    let mut values = Vec::with_capacity(n);
    let mut x = y0;
    values.push(x);
    for _ in 1..n {
        x = mu * x * (1.0 - x);
        values.push(x);
    }
    Ok(LandmarkSet::from_scalars(&values, Topology::Open)?)
}

/// Forward-Euler trajectory of the Lorenz system
/// `ẋ = σ(y−x)`, `ẏ = x(ρ−z)−y`, `ż = xy−βz`, sampled every `delta` time
/// units from `init`. Open, 3D, `n` landmarks including the initial point.
pub fn lorenz_landmarks(
    sigma: f64,
    rho: f64,
    beta: f64,
    delta: f64,
    init: [f64; 3],
    n: usize,
) -> Result<LandmarkSet, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::EmptyOutput(n));
    }
    if !(delta > 0.0) {
        return Err(GeneratorError::NonPositiveStep(delta));
    }
    let mut points = Vec::with_capacity(n);
    let [mut x, mut y, mut z] = init;
    points.push(vec![x, y, z]);
    for _ in 1..n {
        let nx = x + delta * sigma * (y - x);
        let ny = y + delta * (x * (rho - z) - y);
        let nz = z + delta * (x * y - beta * z);
        x = nx;
        y = ny;
        z = nz;
        points.push(vec![x, y, z]);
    }
    Ok(LandmarkSet::open(points)?)
}

/// Nine landmarks outlining a trefoil knot. Closed, 3D. The z coordinate is
/// 0 where the strand passes underneath and 1 where it passes in front.
pub fn trefoil_landmarks() -> LandmarkSet {
    const X: [f64; 9] = [0.5, 0.3, 0.5, 1.0, 0.7, 0.3, 0.0, 0.5, 0.7];
    const Y: [f64; 9] = [0.0, 0.4, 0.8, 0.8, 0.4, 0.4, 0.8, 0.8, 0.4];
    const Z: [f64; 9] = [1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0];
    let points = (0..9).map(|j| vec![X[j], Y[j], Z[j]]).collect();
    LandmarkSet::closed(points).expect("static matrix is valid")
}

/// `n` points drawn i.i.d. uniformly from `[0, 1)^d` with a seeded,
/// portable generator ([`RNG_ALGORITHM`]). Open topology; identical seeds
/// give identical sets.
pub fn random_uniform_landmarks(
    n: usize,
    d: usize,
    seed: u64,
) -> Result<LandmarkSet, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::EmptyOutput(n));
    }
    if d == 0 {
        return Err(GeneratorError::ZeroDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
        .collect();
    Ok(LandmarkSet::open(points)?)
}
