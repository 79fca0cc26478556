//! Turning a scene into renderer-agnostic draw primitives.

mod bundle;
mod goldens;

pub use bundle::{blob_size, deserialize_bundle, manifest_bbox, serialize_bundle, BundleError, SceneBundle, BUNDLE_VERSION};
pub use goldens::{default_golden_times, export_goldens, GOLDEN_HEADER};

use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{Mat4, Vec3};
use crate::model::{ColorRGBA, GlyphKind, Scene, StaticObjectSpec, TrailConfig, Trajectory};
use crate::real::Real;
use crate::simplify::rdp;
use crate::timeline::{sample_trajectory, timelapse_instants, TimelineError};

/// Alpha multiplier of the context path drawn under time-lapse glyphs.
pub const TIMELAPSE_PATH_ALPHA: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("time {t} outside scene range [{t0}, {t1}]")]
    TimeOutOfRange { t: f64, t0: f64, t1: f64 },
    #[error(transparent)]
    Timeline(#[from] TimelineError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline<T> {
    pub vertices: Vec<Vec3<T>>,
    pub colors: Vec<ColorRGBA<T>>,
    pub width_px: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlyphInstance<T> {
    pub kind: GlyphKind,
    pub transform: Mat4<T>,
    pub color: ColorRGBA<T>,
    /// Index of the owning trajectory; `None` for static objects.
    pub trajectory: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderBatch<T> {
    pub polylines: Vec<Polyline<T>>,
    pub glyphs: Vec<GlyphInstance<T>>,
    pub background: ColorRGBA<T>,
}

impl<T: Real> RenderBatch<T> {
    pub fn empty(background: ColorRGBA<T>) -> Self {
        Self { polylines: Vec::new(), glyphs: Vec::new(), background }
    }

    /// Number of glyphs owned by trajectory `index`.
    pub fn glyph_count_for(&self, index: usize) -> usize {
        self.glyphs.iter().filter(|g| g.trajectory == Some(index)).count()
    }
}

fn static_glyphs<T: Real>(statics: &[StaticObjectSpec<T>]) -> impl Iterator<Item = GlyphInstance<T>> + '_ {
    statics.iter().map(|s| GlyphInstance {
        kind: s.obj,
        transform: Mat4::from_trs(s.p, s.q, s.s),
        color: s.c,
        trajectory: None,
    })
}

fn path_polyline<T: Real>(traj: &Trajectory<T>, epsilon: T, width_px: T, alpha_scale: T) -> Polyline<T> {
    let indices: Vec<usize> = if epsilon > T::zero() && traj.samples.len() >= 2 {
        rdp(&traj.positions(), epsilon).expect("≥ 2 points and valid epsilon")
    } else {
        (0..traj.samples.len()).collect()
    };
    let vertices = indices.iter().map(|&i| traj.samples[i].p).collect();
    let colors = indices
        .iter()
        .map(|&i| {
            let c = traj.color_override.unwrap_or(traj.samples[i].c);
            c.with_alpha(c.a * alpha_scale)
        })
        .collect();
    Polyline { vertices, colors, width_px }
}

fn background<T: Real>(scene: &Scene<T>) -> ColorRGBA<T> {
    scene.config.background.cast()
}

/// Snapshot as one continuous line per trajectory plus static objects.
///
/// `lod_epsilon` of 0 keeps every sample; larger values simplify the
/// rendered line with RDP.
pub fn compile_snapshot_line<T: Real>(scene: &Scene<T>, lod_epsilon: T) -> RenderBatch<T> {
    let width = T::lit(scene.config.line_width_px);
    let polylines = scene
        .trajectories
        .par_iter()
        .map(|t| path_polyline(t, lod_epsilon, width, T::one()))
        .collect();
    RenderBatch { polylines, glyphs: static_glyphs(&scene.statics).collect(), background: background(scene) }
}

/// Snapshot as a sequence of glyphs at regular instants over the scene's time range,
/// each trajectory's path drawn faintly underneath.
pub fn compile_snapshot_timelapse<T: Real>(scene: &Scene<T>, interval: Option<T>) -> Result<RenderBatch<T>, CompileError> {
    let instants = timelapse_instants(scene.t_range, interval)?;
    let width = T::lit(scene.config.line_width_px);
    let eps = T::lit(scene.config.lod_epsilon_m);
    let mut batch = RenderBatch::empty(background(scene));
    for (idx, traj) in scene.trajectories.iter().enumerate() {
        batch.polylines.push(path_polyline(traj, eps, width, T::lit(TIMELAPSE_PATH_ALPHA)));
        for &t in &instants {
            let pose = sample_trajectory(traj, t);
            if pose.visible {
                batch.glyphs.push(GlyphInstance {
                    kind: traj.glyph,
                    transform: Mat4::from_trs(pose.p, pose.q, pose.s),
                    color: traj.color_override.unwrap_or(pose.c),
                    trajectory: Some(idx),
                });
            }
        }
    }
    batch.glyphs.extend(static_glyphs(&scene.statics));
    Ok(batch)
}

/// Trail behind a trajectory at time `t`: raw samples in `[t − duration, t)`
/// followed by the interpolated head, alpha ramping from 0 (oldest) to 1.
fn trail_polyline<T: Real>(traj: &Trajectory<T>, t: T, trail: &TrailConfig, width: T) -> Option<Polyline<T>> {
    let duration = T::lit(trail.duration_s);
    if duration <= T::zero() {
        return None;
    }
    let head = sample_trajectory(traj, t);
    if !head.visible {
        return None;
    }
    let start = t - duration;
    let samples = &traj.samples;
    let first = samples.partition_point(|s| s.t < start);
    let last = samples.partition_point(|s| s.t < t);
    let mut times: Vec<T> = samples[first..last].iter().map(|s| s.t).collect();
    let mut vertices: Vec<Vec3<T>> = samples[first..last].iter().map(|s| s.p).collect();
    times.push(t);
    vertices.push(head.p);
    if vertices.len() < 2 {
        return None;
    }
    let oldest = times[0];
    let span = t - oldest;
    let base: ColorRGBA<T> = trail.color.cast();
    let colors = times.iter().map(|&ti| base.with_alpha(base.a * (ti - oldest) / span)).collect();
    Some(Polyline { vertices, colors, width_px: width })
}

/// One animation frame: a glyph and trail per visible trajectory, plus statics.
pub fn compile_animation_frame<T: Real>(scene: &Scene<T>, t: T, trail: &TrailConfig) -> Result<RenderBatch<T>, CompileError> {
    let [t0, t1] = scene.t_range;
    if !(t >= t0 && t <= t1) {
        return Err(CompileError::TimeOutOfRange { t: t.as_f64(), t0: t0.as_f64(), t1: t1.as_f64() });
    }
    let width = T::lit(scene.config.line_width_px);
    let mut batch = RenderBatch::empty(background(scene));
    for (idx, traj) in scene.trajectories.iter().enumerate() {
        let pose = sample_trajectory(traj, t);
        if !pose.visible {
            continue;
        }
        batch.glyphs.push(GlyphInstance {
            kind: traj.glyph,
            transform: Mat4::from_trs(pose.p, pose.q, pose.s),
            color: traj.color_override.unwrap_or(pose.c),
            trajectory: Some(idx),
        });
        if let Some(line) = trail_polyline(traj, t, trail, width) {
            batch.polylines.push(line);
        }
    }
    batch.glyphs.extend(static_glyphs(&scene.statics));
    Ok(batch)
}
