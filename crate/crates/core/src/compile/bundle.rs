//! Scene bundle: a JSON manifest plus one little-endian binary32 blob.
//!
//! Per trajectory the blob holds six tightly packed arrays, in order:
//! times (n), positions (3n), quaternions (4n, scalar-first), velocities
//! (3n), colors (4n) and scales (3n). The manifest records each array's
//! byte offset, so readers never have to assume that order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Aabb, Quat, Vec3};
use crate::model::{
    ensure_unit_quaternion, ColorRGBA, GlyphKind, ModelError, Scene, SceneConfig, StateSample, StaticObjectSpec,
    Trajectory, TrajectoryKind,
};
use crate::real::Real;

pub const BUNDLE_VERSION: &str = "flymation-bundle/1";

/// binary32 values per sample across all six arrays.
const FLOATS_PER_SAMPLE: usize = 1 + 3 + 4 + 3 + 4 + 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneBundle {
    /// Canonical JSON (sorted keys).
    pub manifest: String,
    pub blob: Vec<u8>,
}

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("unsupported bundle version '{0}' (expected {BUNDLE_VERSION})")]
    Version(String),
    #[error("truncated buffer: manifest declares {expected} bytes, blob has {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("array '{array}' of trajectory '{id}' lies outside the buffer")]
    OffsetOutOfBounds { id: String, array: &'static str },
    #[error("malformed manifest: {0}")]
    Manifest(String),
    #[error("bundle content fails validation: {0}")]
    Invalid(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ArrayOffsets {
    times: usize,
    positions: usize,
    quats: usize,
    velocities: usize,
    colors: usize,
    scales: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryEntry {
    id: String,
    kind: TrajectoryKind,
    glyph: GlyphKind,
    color: Option<[f64; 4]>,
    sample_count: usize,
    offsets: ArrayOffsets,
}

#[derive(Debug, Serialize, Deserialize)]
struct StaticEntry {
    p: [f64; 3],
    q: [f64; 4],
    c: [f64; 4],
    s: [f64; 3],
    obj: GlyphKind,
}

#[derive(Debug, Serialize, Deserialize)]
struct BboxEntry {
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    version: String,
    t_range: [f64; 2],
    bbox: BboxEntry,
    blob_bytes: usize,
    trajectories: Vec<TrajectoryEntry>,
    statics: Vec<StaticEntry>,
    config: SceneConfig,
}

fn f64s<T: Real, const N: usize>(a: [T; N]) -> [f64; N] {
    a.map(Real::as_f64)
}

fn push_f32s<T: Real>(blob: &mut Vec<u8>, vals: impl IntoIterator<Item = T>) -> usize {
    while !blob.len().is_multiple_of(4) {
        blob.push(0);
    }
    let offset = blob.len();
    for v in vals {
        blob.extend_from_slice(&v.as_f32().to_le_bytes());
    }
    offset
}

/// Exact byte size of the blob for the given per-trajectory sample counts.
pub fn blob_size(sample_counts: impl IntoIterator<Item = usize>) -> usize {
    sample_counts.into_iter().map(|n| n * FLOATS_PER_SAMPLE * 4).sum()
}

pub fn serialize_bundle<T: Real>(scene: &Scene<T>) -> SceneBundle {
    let mut blob = Vec::with_capacity(blob_size(scene.trajectories.iter().map(|t| t.samples.len())));
    let mut entries = Vec::with_capacity(scene.trajectories.len());
    for traj in &scene.trajectories {
        let s = &traj.samples;
        let offsets = ArrayOffsets {
            times: push_f32s(&mut blob, s.iter().map(|x| x.t)),
            positions: push_f32s(&mut blob, s.iter().flat_map(|x| x.p.to_array())),
            quats: push_f32s(&mut blob, s.iter().flat_map(|x| x.q.to_array())),
            velocities: push_f32s(&mut blob, s.iter().flat_map(|x| x.v.to_array())),
            colors: push_f32s(&mut blob, s.iter().flat_map(|x| x.c.to_array())),
            scales: push_f32s(&mut blob, s.iter().flat_map(|x| x.s.to_array())),
        };
        entries.push(TrajectoryEntry {
            id: traj.id.clone(),
            kind: traj.kind,
            glyph: traj.glyph,
            color: traj.color_override.map(|c| f64s(c.to_array())),
            sample_count: s.len(),
            offsets,
        });
    }
    let statics = scene
        .statics
        .iter()
        .map(|o| StaticEntry {
            p: f64s(o.p.to_array()),
            q: f64s(o.q.to_array()),
            c: f64s(o.c.to_array()),
            s: f64s(o.s.to_array()),
            obj: o.obj,
        })
        .collect();
    let manifest = Manifest {
        version: BUNDLE_VERSION.to_string(),
        t_range: f64s(scene.t_range),
        bbox: BboxEntry { min: f64s(scene.bbox.min.to_array()), max: f64s(scene.bbox.max.to_array()) },
        blob_bytes: blob.len(),
        trajectories: entries,
        statics,
        config: scene.config.clone(),
    };
    // Value maps are BTreeMaps, which yields sorted keys
    let value = serde_json::to_value(&manifest).expect("manifest is plain data");
    SceneBundle { manifest: value.to_string(), blob }
}

struct BlobReader<'a> {
    blob: &'a [u8],
    id: &'a str,
}

impl BlobReader<'_> {
    fn floats(&self, array: &'static str, offset: usize, count: usize) -> Result<Vec<f32>, BundleError> {
        let oob = || BundleError::OffsetOutOfBounds { id: self.id.to_string(), array };
        let end = count.checked_mul(4).and_then(|len| offset.checked_add(len)).ok_or_else(oob)?;
        if !offset.is_multiple_of(4) || end > self.blob.len() {
            return Err(oob());
        }
        Ok(self.blob[offset..end]
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect())
    }
}

fn lit<T: Real>(v: f32) -> T {
    T::lit(v as f64)
}

fn arr<T: Real, const N: usize>(a: [f64; N]) -> [T; N] {
    a.map(T::lit)
}

pub fn deserialize_bundle<T: Real>(manifest: &str, blob: &[u8]) -> Result<Scene<T>, BundleError> {
    let value: serde_json::Value = serde_json::from_str(manifest).map_err(|e| BundleError::Manifest(e.to_string()))?;
    match value.get("version").and_then(|v| v.as_str()) {
        Some(BUNDLE_VERSION) => {}
        Some(other) => return Err(BundleError::Version(other.to_string())),
        None => return Err(BundleError::Manifest("missing version".into())),
    }
    let m: Manifest = serde_json::from_value(value).map_err(|e| BundleError::Manifest(e.to_string()))?;
    if blob.len() < m.blob_bytes {
        return Err(BundleError::Truncated { expected: m.blob_bytes, actual: blob.len() });
    }
    let blob = &blob[..m.blob_bytes];

    let mut trajectories = Vec::with_capacity(m.trajectories.len());
    for e in &m.trajectories {
        let r = BlobReader { blob, id: &e.id };
        let n = e.sample_count;
        let o = e.offsets;
        let times = r.floats("times", o.times, n)?;
        let pos = r.floats("positions", o.positions, 3 * n)?;
        let quats = r.floats("quats", o.quats, 4 * n)?;
        let vel = r.floats("velocities", o.velocities, 3 * n)?;
        let col = r.floats("colors", o.colors, 4 * n)?;
        let scl = r.floats("scales", o.scales, 3 * n)?;
        let mut samples = Vec::with_capacity(n);
        for i in 0..n {
            let v3 = |a: &[f32]| Vec3::new(lit(a[3 * i]), lit(a[3 * i + 1]), lit(a[3 * i + 2]));
            let q = Quat::new(lit(quats[4 * i]), lit(quats[4 * i + 1]), lit(quats[4 * i + 2]), lit(quats[4 * i + 3]));
            samples.push(StateSample {
                t: lit(times[i]),
                p: v3(&pos),
                q: ensure_unit_quaternion(q)?,
                v: v3(&vel),
                c: ColorRGBA::new(lit(col[4 * i]), lit(col[4 * i + 1]), lit(col[4 * i + 2]), lit(col[4 * i + 3])),
                s: v3(&scl),
            });
        }
        trajectories.push(Trajectory {
            id: e.id.clone(),
            kind: e.kind,
            glyph: e.glyph,
            color_override: e.color.map(|c| ColorRGBA::from_array(arr(c))),
            samples,
        });
    }
    let statics = m
        .statics
        .iter()
        .map(|s| {
            Ok(StaticObjectSpec {
                p: Vec3::from_array(arr(s.p)),
                q: ensure_unit_quaternion(Quat::from_array(arr(s.q)))?,
                c: ColorRGBA::from_array(arr(s.c)),
                s: Vec3::from_array(arr(s.s)),
                obj: s.obj,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(Scene::new(trajectories, statics, m.config)?)
}

/// Box in the manifest, for callers that only need framing information.
pub fn manifest_bbox(manifest: &str) -> Option<Aabb<f64>> {
    let v: serde_json::Value = serde_json::from_str(manifest).ok()?;
    let b: BboxEntry = serde_json::from_value(v.get("bbox")?.clone()).ok()?;
    Some(Aabb { min: Vec3::from_array(b.min), max: Vec3::from_array(b.max) })
}
