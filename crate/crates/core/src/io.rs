//! File formats: self-describing landmark files (JSON), sampled-curve CSV,
//! and scene description files.
//!
//! All writers are deterministic (fixed key order, no timestamps) and
//! atomic (temp file + rename). Landmark coordinates round-trip bit-exactly
//! through the shortest decimal representation that parses back to the same
//! f64; curve CSV values are written with 17 significant digits, which also
//! round-trips exactly.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{GeneratorError, GeneratorSpec, RNG_ALGORITHM};
use crate::scene::{Scene, SceneError, SceneTopology};
use crate::shape::{
    CurveSample, KappaFamily, LandmarkSet, Quality, SampledCurve, ShapeError, Topology,
};

/// Version written into every landmark, curve and scene artifact.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{path}: unsupported format version {found} (expected {FORMAT_VERSION})")]
    UnsupportedVersion { path: PathBuf, found: u32 },
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write `contents` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir),
        None => tempfile::NamedTempFile::new_in("."),
    }
    .map_err(io_err(path))?;
    tmp.write_all(contents.as_bytes()).map_err(io_err(path))?;
    tmp.persist(path)
        .map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

/// Landmark interchange file: dimension, topology and points, plus free
/// metadata. Topology is part of the format because open and closed
/// families over identical points are different shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkFile {
    pub version: u32,
    pub dim: usize,
    pub topology: Topology,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
}

impl LandmarkFile {
    pub fn from_set(set: &LandmarkSet) -> Self {
        Self {
            version: FORMAT_VERSION,
            dim: set.dim(),
            topology: set.topology(),
            points: set.points().to_vec(),
            metadata: None,
        }
    }

    /// Build the file for a generator spec, recording the spec itself (and
    /// the RNG algorithm, for seeded generators) in the metadata.
    pub fn from_generator(spec: &GeneratorSpec) -> Result<Self, IoError> {
        let set = spec.build()?;
        let mut file = Self::from_set(&set);
        let mut metadata = BTreeMap::new();
        metadata.insert(
            "generator".to_string(),
            serde_json::to_value(spec).expect("generator specs serialize"),
        );
        if matches!(spec, GeneratorSpec::RandomUniform { .. }) {
            metadata.insert("rng".to_string(), serde_json::Value::from(RNG_ALGORITHM));
        }
        file.metadata = Some(metadata);
        Ok(file)
    }

    pub fn to_set(&self) -> Result<LandmarkSet, IoError> {
        let set = LandmarkSet::new(self.points.clone(), self.topology)?;
        Ok(set)
    }

    pub fn to_family(&self) -> Result<KappaFamily, IoError> {
        Ok(KappaFamily::new(self.to_set()?))
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let file: LandmarkFile = serde_json::from_str(&text).map_err(|source| IoError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if file.version != FORMAT_VERSION {
            return Err(IoError::UnsupportedVersion {
                path: path.to_path_buf(),
                found: file.version,
            });
        }
        if file.points.is_empty() {
            return Err(IoError::Malformed {
                path: path.to_path_buf(),
                message: "points array is empty".to_string(),
            });
        }
        if let Some(bad) = file.points.iter().position(|p| p.len() != file.dim) {
            return Err(IoError::Malformed {
                path: path.to_path_buf(),
                message: format!(
                    "point {bad} has {} coordinates, dim field says {}",
                    file.points[bad].len(),
                    file.dim
                ),
            });
        }
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|source| IoError::Json {
                path: path.to_path_buf(),
                source,
            })?;
        text.push('\n');
        write_atomic(path, &text)
    }
}

/// Serialize a sampled curve as CSV with header `t,x0,…,x{D−1},quality`.
pub fn curve_to_csv(curve: &SampledCurve) -> String {
    let mut out = String::new();
    out.push('t');
    for d in 0..curve.dim {
        out.push_str(&format!(",x{d}"));
    }
    out.push_str(",quality\n");
    for s in &curve.samples {
        out.push_str(&format!("{:.16e}", s.t));
        for c in &s.point {
            out.push_str(&format!(",{:.16e}", c));
        }
        out.push(',');
        out.push_str(s.quality.as_str());
        out.push('\n');
    }
    out
}

pub fn write_curve(curve: &SampledCurve, path: &Path) -> Result<(), IoError> {
    write_atomic(path, &curve_to_csv(curve))
}

pub fn read_curve(path: &Path) -> Result<SampledCurve, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_curve_csv(&text).map_err(|message| IoError::Malformed {
        path: path.to_path_buf(),
        message,
    })
}

fn parse_curve_csv(text: &str) -> Result<SampledCurve, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty curve file")?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 3 || columns[0] != "t" || *columns.last().unwrap() != "quality" {
        return Err(format!("unexpected header {header:?}"));
    }
    let dim = columns.len() - 2;
    for (d, name) in columns[1..columns.len() - 1].iter().enumerate() {
        if *name != format!("x{d}") {
            return Err(format!("unexpected coordinate column {name:?}"));
        }
    }
    let mut samples = Vec::new();
    let mut prev_t = f64::NEG_INFINITY;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 2 {
            return Err(format!(
                "row {}: {} fields, expected {}",
                lineno + 2,
                fields.len(),
                dim + 2
            ));
        }
        let t: f64 = fields[0]
            .parse()
            .map_err(|e| format!("row {}: bad t: {e}", lineno + 2))?;
        if t <= prev_t {
            return Err(format!("row {}: t values must increase strictly", lineno + 2));
        }
        prev_t = t;
        let mut point = Vec::with_capacity(dim);
        for f in &fields[1..=dim] {
            point.push(
                f.parse::<f64>()
                    .map_err(|e| format!("row {}: bad coordinate: {e}", lineno + 2))?,
            );
        }
        let quality = Quality::parse(fields[dim + 1])
            .ok_or_else(|| format!("row {}: unknown quality {:?}", lineno + 2, fields[dim + 1]))?;
        samples.push(CurveSample { t, point, quality });
    }
    if samples.is_empty() {
        return Err("curve file has no samples".to_string());
    }
    Ok(SampledCurve { dim, samples })
}

/// Scene description file: an ordered list of member landmark files with
/// per-member smoothing scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub version: u32,
    pub scene_type: SceneTopology,
    pub members: Vec<SceneFileMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFileMember {
    /// Path to a landmark file, relative to the scene file's directory.
    pub landmarks: String,
    pub kappa: f64,
}

impl SceneFile {
    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let file: SceneFile = serde_json::from_str(&text).map_err(|source| IoError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if file.version != FORMAT_VERSION {
            return Err(IoError::UnsupportedVersion {
                path: path.to_path_buf(),
                found: file.version,
            });
        }
        if file.members.is_empty() {
            return Err(IoError::Malformed {
                path: path.to_path_buf(),
                message: "scene has no members".to_string(),
            });
        }
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|source| IoError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        text.push('\n');
        write_atomic(path, &text)
    }

    /// Load the member landmark files (relative to `scene_path`'s
    /// directory) and assemble the scene.
    pub fn load_scene(&self, scene_path: &Path) -> Result<Scene, IoError> {
        let base = scene_path.parent().unwrap_or_else(|| Path::new("."));
        let mut families = Vec::with_capacity(self.members.len());
        for member in &self.members {
            let lm_path = base.join(&member.landmarks);
            let family = LandmarkFile::read(&lm_path)?.to_family()?;
            families.push((family, member.kappa));
        }
        Ok(Scene::from_families(families, self.scene_type)?)
    }
}
