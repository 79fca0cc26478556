//! Domain types for trajectory scenes and their validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::geom::{Aabb, Quat, Vec3};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("quaternion {0} has near-zero norm (must exceed 1e-12)")]
    DegenerateQuaternion(String),
    #[error("{0} is not finite")]
    NonFinite(&'static str),
    #[error("color component {name}={value} outside [0, 1]")]
    ColorOutOfRange { name: &'static str, value: String },
    #[error("scale component {name}={value} must be > 0")]
    NonPositiveScale { name: &'static str, value: String },
    #[error("trajectory '{id}': non-increasing time at sample {index}")]
    NonIncreasingTime { id: String, index: usize },
    #[error("trajectory '{0}' has no samples")]
    EmptyTrajectory(String),
    #[error("scene has no trajectories")]
    NoTrajectories,
    #[error("scene is empty")]
    EmptyScene,
    #[error("duplicate trajectory id '{0}'")]
    DuplicateId(String),
    #[error("config references unknown trajectory id '{0}'")]
    UnknownId(String),
}

/// RGBA color with components in `[0, 1]`; serialized as `[r, g, b, a]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorRGBA<T> {
    pub r: T,
    pub g: T,
    pub b: T,
    pub a: T,
}

impl<T: Real> ColorRGBA<T> {
    pub const fn new(r: T, g: T, b: T, a: T) -> Self {
        Self { r, g, b, a }
    }

    pub fn from_array(c: [T; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [T; 4] {
        [self.r, self.g, self.b, self.a]
    }

    pub fn opaque_red() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn with_alpha(self, a: T) -> Self {
        Self { a, ..self }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [("r", self.r), ("g", self.g), ("b", self.b), ("a", self.a)] {
            if !v.is_finite() {
                return Err(ModelError::NonFinite("color"));
            }
            if v < T::zero() || v > T::one() {
                return Err(ModelError::ColorOutOfRange { name, value: format!("{v:?}") });
            }
        }
        Ok(())
    }

    pub fn cast<U: Real>(self) -> ColorRGBA<U> {
        ColorRGBA::new(
            U::lit(self.r.as_f64()),
            U::lit(self.g.as_f64()),
            U::lit(self.b.as_f64()),
            U::lit(self.a.as_f64()),
        )
    }
}

impl<T: Real> Serialize for ColorRGBA<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for ColorRGBA<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<T>::deserialize(d)?;
        let arr: [T; 4] = raw
            .try_into()
            .map_err(|v: Vec<T>| D::Error::custom(format!("color must have 4 components, got {}", v.len())))?;
        let c = Self::from_array(arr);
        c.validate().map_err(D::Error::custom)?;
        Ok(c)
    }
}

/// The closed set of canonical object shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GlyphKind {
    Sphere,
    Cube,
    Cylinder,
    Cone,
    Gate,
    Quadrotor,
}

impl GlyphKind {
    pub const ALL: [GlyphKind; 6] = [
        GlyphKind::Sphere,
        GlyphKind::Cube,
        GlyphKind::Cylinder,
        GlyphKind::Cone,
        GlyphKind::Gate,
        GlyphKind::Quadrotor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GlyphKind::Sphere => "sphere",
            GlyphKind::Cube => "cube",
            GlyphKind::Cylinder => "cylinder",
            GlyphKind::Cone => "cone",
            GlyphKind::Gate => "gate",
            GlyphKind::Quadrotor => "quadrotor",
        }
    }
}

impl fmt::Display for GlyphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown object type '{0}'; allowed: {{sphere, cube, cylinder, cone, gate, quadrotor}}")]
pub struct UnknownGlyph(pub String);

impl FromStr for GlyphKind {
    type Err = UnknownGlyph;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        GlyphKind::ALL
            .into_iter()
            .find(|g| g.name() == lower)
            .ok_or_else(|| UnknownGlyph(s.to_string()))
    }
}

impl Serialize for GlyphKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for GlyphKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajectoryKind {
    Vehicle,
    Dynamic,
}

impl TrajectoryKind {
    pub fn default_glyph(self) -> GlyphKind {
        match self {
            TrajectoryKind::Vehicle => GlyphKind::Quadrotor,
            TrajectoryKind::Dynamic => GlyphKind::Cube,
        }
    }
}

/// One timestamped rigid-body state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSample<T> {
    pub t: T,
    pub p: Vec3<T>,
    pub q: Quat<T>,
    pub v: Vec3<T>,
    pub c: ColorRGBA<T>,
    pub s: Vec3<T>,
}

impl<T: Real> StateSample<T> {
    /// A sample at `t`/`p` with identity orientation, zero velocity, opaque white and unit scale.
    pub fn at(t: T, p: Vec3<T>) -> Self {
        Self {
            t,
            p,
            q: Quat::identity(),
            v: Vec3::zero(),
            c: ColorRGBA::new(T::one(), T::one(), T::one(), T::one()),
            s: Vec3::splat(T::one()),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.t.is_finite() {
            return Err(ModelError::NonFinite("time"));
        }
        if !self.p.is_finite() {
            return Err(ModelError::NonFinite("position"));
        }
        if !self.v.is_finite() {
            return Err(ModelError::NonFinite("velocity"));
        }
        validate_pose(self.q, self.c, self.s)
    }
}

fn validate_pose<T: Real>(q: Quat<T>, c: ColorRGBA<T>, s: Vec3<T>) -> Result<(), ModelError> {
    if !q.is_finite() {
        return Err(ModelError::NonFinite("orientation"));
    }
    if (q.norm() - T::one()).abs() > T::unit_tolerance() {
        return Err(ModelError::DegenerateQuaternion(format!("{:?}", q.to_array())));
    }
    c.validate()?;
    if !s.is_finite() {
        return Err(ModelError::NonFinite("scale"));
    }
    for (name, v) in [("sx", s.x), ("sy", s.y), ("sz", s.z)] {
        if v <= T::zero() {
            return Err(ModelError::NonPositiveScale { name, value: format!("{v:?}") });
        }
    }
    Ok(())
}

/// Pose, color, scale and shape of a non-moving object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticObjectSpec<T> {
    pub p: Vec3<T>,
    pub q: Quat<T>,
    pub c: ColorRGBA<T>,
    pub s: Vec3<T>,
    pub obj: GlyphKind,
}

impl<T: Real> StaticObjectSpec<T> {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.p.is_finite() {
            return Err(ModelError::NonFinite("position"));
        }
        validate_pose(self.q, self.c, self.s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub id: String,
    pub kind: TrajectoryKind,
    pub glyph: GlyphKind,
    pub color_override: Option<ColorRGBA<T>>,
    pub samples: Vec<StateSample<T>>,
}

impl<T: Real> Trajectory<T> {
    /// Builds a trajectory with the kind's default glyph, validating every sample.
    pub fn new(id: impl Into<String>, kind: TrajectoryKind, samples: Vec<StateSample<T>>) -> Result<Self, ModelError> {
        let traj = Self { id: id.into(), kind, glyph: kind.default_glyph(), color_override: None, samples };
        traj.validate()?;
        Ok(traj)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.samples.is_empty() {
            return Err(ModelError::EmptyTrajectory(self.id.clone()));
        }
        for (i, s) in self.samples.iter().enumerate() {
            s.validate()?;
            if i > 0 && s.t <= self.samples[i - 1].t {
                return Err(ModelError::NonIncreasingTime { id: self.id.clone(), index: i });
            }
        }
        if let Some(c) = &self.color_override {
            c.validate()?;
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn positions(&self) -> Vec<Vec3<T>> {
        self.samples.iter().map(|s| s.p).collect()
    }

    pub fn start_time(&self) -> T {
        self.samples[0].t
    }

    pub fn end_time(&self) -> T {
        self.samples[self.samples.len() - 1].t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotStyle {
    #[default]
    Line,
    Timelapse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CameraMode {
    #[default]
    Orbit,
    Follow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrailConfig {
    pub duration_s: f64,
    pub color: ColorRGBA<f64>,
}

impl Default for TrailConfig {
    fn default() -> Self {
        Self { duration_s: 1.0, color: ColorRGBA::opaque_red() }
    }
}

/// Resolved scene configuration. Folder paths are absolute or relative to
/// the process working directory once loaded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub vehicle_dir: PathBuf,
    pub dynamic_dir: PathBuf,
    pub static_dir: PathBuf,
    pub colors: BTreeMap<String, ColorRGBA<f64>>,
    pub glyphs: BTreeMap<String, GlyphKind>,
    pub snapshot_style: SnapshotStyle,
    pub camera: CameraMode,
    pub follow_target: Option<String>,
    pub trail: TrailConfig,
    pub timelapse_interval_s: Option<f64>,
    pub lod_epsilon_m: f64,
    pub line_width_px: f64,
    pub background: ColorRGBA<f64>,
}

impl SceneConfig {
    pub const DEFAULT_BACKGROUND: ColorRGBA<f64> = ColorRGBA::new(0.1, 0.1, 0.12, 1.0);

    /// A configuration with every optional key at its default.
    pub fn with_dirs(vehicle_dir: impl Into<PathBuf>, dynamic_dir: impl Into<PathBuf>, static_dir: impl Into<PathBuf>) -> Self {
        Self {
            vehicle_dir: vehicle_dir.into(),
            dynamic_dir: dynamic_dir.into(),
            static_dir: static_dir.into(),
            colors: BTreeMap::new(),
            glyphs: BTreeMap::new(),
            snapshot_style: SnapshotStyle::Line,
            camera: CameraMode::Orbit,
            follow_target: None,
            trail: TrailConfig::default(),
            timelapse_interval_s: None,
            lod_epsilon_m: 0.0,
            line_width_px: 2.0,
            background: Self::DEFAULT_BACKGROUND,
        }
    }
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self::with_dirs("vehicles", "dynamic", "static")
    }
}

/// A validated, immutable scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene<T> {
    pub trajectories: Vec<Trajectory<T>>,
    pub statics: Vec<StaticObjectSpec<T>>,
    pub config: SceneConfig,
    pub t_range: [T; 2],
    pub bbox: Aabb<T>,
}

impl<T: Real> Scene<T> {
    /// Validates the parts, applies config color/glyph overrides and computes
    /// the time range and bounding box.
    pub fn new(
        mut trajectories: Vec<Trajectory<T>>,
        statics: Vec<StaticObjectSpec<T>>,
        config: SceneConfig,
    ) -> Result<Self, ModelError> {
        if trajectories.is_empty() && statics.is_empty() {
            return Err(ModelError::EmptyScene);
        }
        let mut ids = BTreeSet::new();
        for t in &trajectories {
            t.validate()?;
            if !ids.insert(t.id.as_str()) {
                return Err(ModelError::DuplicateId(t.id.clone()));
            }
        }
        for s in &statics {
            s.validate()?;
        }
        let referenced = config
            .colors
            .keys()
            .chain(config.glyphs.keys())
            .chain(config.follow_target.iter());
        for id in referenced {
            if !ids.contains(id.as_str()) {
                return Err(ModelError::UnknownId(id.clone()));
            }
        }
        for t in &mut trajectories {
            if let Some(c) = config.colors.get(&t.id) {
                t.color_override = Some(c.cast());
            }
            if let Some(g) = config.glyphs.get(&t.id) {
                t.glyph = *g;
            }
        }
        let t_range = scene_time_range(&trajectories, &statics)?;
        let bbox = scene_bbox(&trajectories, &statics)?;
        Ok(Self { trajectories, statics, config, t_range, bbox })
    }

    pub fn trajectory(&self, id: &str) -> Option<&Trajectory<T>> {
        self.trajectories.iter().find(|t| t.id == id)
    }

    pub fn sample_count(&self) -> usize {
        self.trajectories.iter().map(|t| t.samples.len()).sum()
    }
}

/// Unit quaternion for the same rotation; the sign is left untouched.
pub fn normalize_quaternion<T: Real>(q: Quat<T>) -> Result<Quat<T>, ModelError> {
    let n = q.norm();
    if !q.is_finite() || !n.is_finite() {
        return Err(ModelError::NonFinite("quaternion"));
    }
    if n <= T::lit(1e-12) {
        return Err(ModelError::DegenerateQuaternion(format!("{:?}", q.to_array())));
    }
    Ok(Quat::new(q.w / n, q.x / n, q.y / n, q.z / n))
}

/// Like [`normalize_quaternion`], but leaves quaternions already unit within
/// [`Real::unit_tolerance`] untouched so write/read cycles are exact.
pub fn ensure_unit_quaternion<T: Real>(q: Quat<T>) -> Result<Quat<T>, ModelError> {
    let n = normalize_quaternion(q)?;
    if (q.norm() - T::one()).abs() > T::unit_tolerance() {
        Ok(n)
    } else {
        Ok(q)
    }
}

/// Overall `[t0, t1]` of the trajectories; `[0, 0]` when only statics exist.
pub fn scene_time_range<T: Real>(
    trajectories: &[Trajectory<T>],
    statics: &[StaticObjectSpec<T>],
) -> Result<[T; 2], ModelError> {
    if trajectories.is_empty() {
        return if statics.is_empty() { Err(ModelError::NoTrajectories) } else { Ok([T::zero(), T::zero()]) };
    }
    let t0 = trajectories.iter().map(|t| t.start_time()).fold(T::infinity(), T::min);
    let t1 = trajectories.iter().map(|t| t.end_time()).fold(T::neg_infinity(), T::max);
    Ok([t0, t1])
}

/// Minimal box around every trajectory sample position and static position.
pub fn scene_bbox<T: Real>(
    trajectories: &[Trajectory<T>],
    statics: &[StaticObjectSpec<T>],
) -> Result<Aabb<T>, ModelError> {
    let mut points = trajectories
        .iter()
        .flat_map(|t| t.samples.iter().map(|s| s.p))
        .chain(statics.iter().map(|s| s.p));
    let first = points.next().ok_or(ModelError::EmptyScene)?;
    let mut bbox = Aabb::from_point(first);
    for p in points {
        bbox.grow(p);
    }
    Ok(bbox)
}
