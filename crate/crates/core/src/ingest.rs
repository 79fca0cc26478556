//! Reading the three-folder CSV layout and the JSON scene config.
//!
//! State files (`vehicle_dir`, `dynamic_dir`) use the 18-column header
//! [`STATE_HEADER`]; static object files use the 15-column [`STATIC_HEADER`].
//! Lines starting with `#` and blank lines are skipped, CRLF is accepted and
//! every error carries the source name and a 1-based line number.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::geom::{Quat, Vec3};
use crate::model::{
    CameraMode, ColorRGBA, GlyphKind, ModelError, SceneConfig, SnapshotStyle, StateSample, StaticObjectSpec,
    TrailConfig, Trajectory, TrajectoryKind,
};
use crate::model::Scene;
use crate::real::Real;

pub const STATE_HEADER: &str = "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,cr,cg,cb,ca,sx,sy,sz";
pub const STATIC_HEADER: &str = "px,py,pz,qw,qx,qy,qz,cr,cg,cb,ca,sx,sy,sz,obj";

/// Quaternions further than this from unit norm are normalized with a warning.
pub const QUAT_WARN_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scene config: {0}")]
    Config(String),
    #[error(transparent)]
    Scene(#[from] ModelError),
}

impl IngestError {
    fn parse(file: &str, line: usize, message: impl Into<String>) -> Self {
        IngestError::Parse { file: file.to_string(), line, message: message.into() }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        IngestError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestWarning {
    pub file: String,
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.file, self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub files_read: usize,
    pub rows_read: usize,
    pub warnings: Vec<IngestWarning>,
}

/// Data rows of a CSV text after header validation: `(line_number, fields)`.
fn data_rows<'a>(
    text: &'a str,
    source: &str,
    header: &str,
) -> Result<Vec<(usize, Vec<&'a str>)>, IngestError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let expected: Vec<&str> = header.split(',').collect();
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if !saw_header {
            if fields != expected {
                return Err(IngestError::parse(source, line_no, format!("missing or incorrect header; expected `{header}`")));
            }
            saw_header = true;
            continue;
        }
        if fields.len() != expected.len() {
            return Err(IngestError::parse(
                source,
                line_no,
                format!("expected {} columns, found {}", expected.len(), fields.len()),
            ));
        }
        rows.push((line_no, fields));
    }
    if !saw_header {
        return Err(IngestError::parse(source, 1, format!("missing or incorrect header; expected `{header}`")));
    }
    Ok(rows)
}

fn number<T: Real>(field: &str, column: &str) -> Result<T, String> {
    let v: T = field.parse().map_err(|_| format!("column '{column}': cannot parse '{field}' as a number"))?;
    if !v.is_finite() {
        return Err(format!("column '{column}': non-finite value '{field}'"));
    }
    Ok(v)
}

struct RowReader<'a> {
    fields: &'a [&'a str],
    names: &'a [&'static str],
    pos: usize,
}

impl<'a> RowReader<'a> {
    fn new(fields: &'a [&'a str], names: &'a [&'static str]) -> Self {
        Self { fields, names, pos: 0 }
    }

    fn next<T: Real>(&mut self) -> Result<T, String> {
        let v = number(self.fields[self.pos], self.names[self.pos]);
        self.pos += 1;
        v
    }

    fn vec3<T: Real>(&mut self) -> Result<Vec3<T>, String> {
        Ok(Vec3::new(self.next()?, self.next()?, self.next()?))
    }

    fn quat<T: Real>(&mut self) -> Result<Quat<T>, String> {
        Ok(Quat::new(self.next()?, self.next()?, self.next()?, self.next()?))
    }

    fn color<T: Real>(&mut self) -> Result<ColorRGBA<T>, String> {
        let c = ColorRGBA::new(self.next()?, self.next()?, self.next()?, self.next()?);
        c.validate().map_err(|e| e.to_string())?;
        Ok(c)
    }

    fn scale<T: Real>(&mut self) -> Result<Vec3<T>, String> {
        let s: Vec3<T> = self.vec3()?;
        for (name, v) in [("sx", s.x), ("sy", s.y), ("sz", s.z)] {
            if v <= T::zero() {
                return Err(format!("scale {name}={v:?} must be > 0"));
            }
        }
        Ok(s)
    }
}

/// Normalizes `q` unless it is already unit within the scalar's tolerance.
///
/// Leaving near-unit quaternions bit-identical is what makes
/// write-then-parse an exact round trip.
fn ingest_quaternion<T: Real>(q: Quat<T>, warn: &mut Option<String>) -> Result<Quat<T>, String> {
    let n = q.norm();
    if n <= T::lit(1e-12) {
        return Err(format!("quaternion {:?} has near-zero norm", q.to_array()));
    }
    let dev = (n - T::one()).abs();
    if dev > T::lit(QUAT_WARN_TOLERANCE) {
        *warn = Some(format!("quaternion norm {n:?} is not unit; normalized"));
    }
    if dev > T::unit_tolerance() {
        Ok(Quat::new(q.w / n, q.x / n, q.y / n, q.z / n))
    } else {
        Ok(q)
    }
}

/// Parses a state CSV into samples, returning any warnings alongside.
pub fn parse_state_csv<T: Real>(
    text: &str,
    source_name: &str,
) -> Result<(Vec<StateSample<T>>, Vec<IngestWarning>), IngestError> {
    let rows = data_rows(text, source_name, STATE_HEADER)?;
    let names: Vec<&'static str> = STATE_HEADER.split(',').collect();
    let mut samples: Vec<StateSample<T>> = Vec::with_capacity(rows.len());
    let mut warnings = Vec::new();
    for (line, fields) in &rows {
        let mut warn = None;
        let sample = (|| {
            let mut r = RowReader::new(fields, &names);
            let t = r.next()?;
            let p = r.vec3()?;
            let q = ingest_quaternion(r.quat()?, &mut warn)?;
            let v = r.vec3()?;
            let c = r.color()?;
            let s = r.scale()?;
            Ok::<_, String>(StateSample { t, p, q, v, c, s })
        })()
        .map_err(|m| IngestError::parse(source_name, *line, m))?;
        if let Some(prev) = samples.last() {
            if sample.t <= prev.t {
                return Err(IngestError::parse(
                    source_name,
                    *line,
                    format!("non-increasing time {:?} after {:?}", sample.t, prev.t),
                ));
            }
        }
        if let Some(message) = warn {
            warnings.push(IngestWarning { file: source_name.to_string(), line: *line, message });
        }
        samples.push(sample);
    }
    Ok((samples, warnings))
}

/// Parses a static-object CSV.
pub fn parse_static_csv<T: Real>(
    text: &str,
    source_name: &str,
) -> Result<(Vec<StaticObjectSpec<T>>, Vec<IngestWarning>), IngestError> {
    let rows = data_rows(text, source_name, STATIC_HEADER)?;
    let names: Vec<&'static str> = STATIC_HEADER.split(',').collect();
    let mut out = Vec::with_capacity(rows.len());
    let mut warnings = Vec::new();
    for (line, fields) in &rows {
        let mut warn = None;
        let spec = (|| {
            let mut r = RowReader::new(fields, &names);
            let p = r.vec3()?;
            let q = ingest_quaternion(r.quat()?, &mut warn)?;
            let c = r.color()?;
            let s = r.scale()?;
            let obj: GlyphKind = fields[14].parse().map_err(|e: crate::model::UnknownGlyph| e.to_string())?;
            Ok::<_, String>(StaticObjectSpec { p, q, c, s, obj })
        })()
        .map_err(|m| IngestError::parse(source_name, *line, m))?;
        if let Some(message) = warn {
            warnings.push(IngestWarning { file: source_name.to_string(), line: *line, message });
        }
        out.push(spec);
    }
    Ok((out, warnings))
}

/// Checks UTF-8 validity, reporting the line of the first invalid byte.
pub fn decode_utf8<'a>(bytes: &'a [u8], source_name: &str) -> Result<&'a str, IngestError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        IngestError::parse(source_name, line, "invalid UTF-8")
    })
}

/// Writes samples in the state CSV format.
///
/// Numbers use the shortest representation that parses back to the same
/// bits, so `parse_state_csv(write_state_csv(x)) == x` exactly.
pub fn write_state_csv<T: Real>(samples: &[StateSample<T>]) -> String {
    let mut out = String::with_capacity(32 + samples.len() * 160);
    out.push_str(STATE_HEADER);
    out.push('\n');
    for s in samples {
        let vals = [
            s.t, s.p.x, s.p.y, s.p.z, s.q.w, s.q.x, s.q.y, s.q.z, s.v.x, s.v.y, s.v.z, s.c.r, s.c.g, s.c.b, s.c.a,
            s.s.x, s.s.y, s.s.z,
        ];
        write_row(&mut out, &vals);
        out.push('\n');
    }
    out
}

/// Writes static objects in the static CSV format.
pub fn write_static_csv<T: Real>(objects: &[StaticObjectSpec<T>]) -> String {
    let mut out = String::new();
    out.push_str(STATIC_HEADER);
    out.push('\n');
    for o in objects {
        let vals = [
            o.p.x, o.p.y, o.p.z, o.q.w, o.q.x, o.q.y, o.q.z, o.c.r, o.c.g, o.c.b, o.c.a, o.s.x, o.s.y, o.s.z,
        ];
        write_row(&mut out, &vals);
        out.push(',');
        out.push_str(o.obj.name());
        out.push('\n');
    }
    out
}

fn write_row<T: Real>(out: &mut String, vals: &[T]) {
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:?}");
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrail {
    duration_s: Option<f64>,
    color: Option<ColorRGBA<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    vehicle_dir: String,
    dynamic_dir: String,
    static_dir: String,
    #[serde(default)]
    colors: BTreeMap<String, ColorRGBA<f64>>,
    #[serde(default)]
    glyphs: BTreeMap<String, GlyphKind>,
    snapshot_style: Option<SnapshotStyle>,
    camera: Option<CameraMode>,
    follow_target: Option<String>,
    trail: Option<RawTrail>,
    timelapse_interval_s: Option<f64>,
    lod_epsilon_m: Option<f64>,
    line_width_px: Option<f64>,
    background: Option<ColorRGBA<f64>>,
}

fn non_negative(name: &str, v: f64) -> Result<f64, IngestError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(IngestError::Config(format!("{name} must be ≥ 0")))
    }
}

/// Parses the JSON scene config, filling defaults for absent optional keys.
pub fn parse_scene_config(json_text: &str) -> Result<SceneConfig, IngestError> {
    let raw: RawConfig = serde_json::from_str(json_text).map_err(|e| IngestError::Config(e.to_string()))?;
    let mut cfg = SceneConfig::with_dirs(raw.vehicle_dir, raw.dynamic_dir, raw.static_dir);
    cfg.colors = raw.colors;
    cfg.glyphs = raw.glyphs;
    cfg.snapshot_style = raw.snapshot_style.unwrap_or_default();
    cfg.camera = raw.camera.unwrap_or_default();
    cfg.follow_target = raw.follow_target;
    if let Some(trail) = raw.trail {
        let defaults = TrailConfig::default();
        cfg.trail = TrailConfig {
            duration_s: non_negative("duration_s", trail.duration_s.unwrap_or(defaults.duration_s))?,
            color: trail.color.unwrap_or(defaults.color),
        };
    }
    if let Some(dt) = raw.timelapse_interval_s {
        cfg.timelapse_interval_s = Some(non_negative("timelapse_interval_s", dt)?);
    }
    if let Some(eps) = raw.lod_epsilon_m {
        cfg.lod_epsilon_m = non_negative("lod_epsilon_m", eps)?;
    }
    if let Some(w) = raw.line_width_px {
        if !(w.is_finite() && w > 0.0) {
            return Err(IngestError::Config("line_width_px must be > 0".into()));
        }
        cfg.line_width_px = w;
    }
    if let Some(bg) = raw.background {
        cfg.background = bg;
    }
    Ok(cfg)
}

fn csv_files(dir: &Path) -> Result<Vec<PathBuf>, IngestError> {
    let entries = std::fs::read_dir(dir).map_err(|e| IngestError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| IngestError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "csv") {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn read_text(path: &Path) -> Result<String, IngestError> {
    let bytes = std::fs::read(path).map_err(|e| IngestError::io(path, e))?;
    let name = path.display().to_string();
    decode_utf8(&bytes, &name)?;
    Ok(String::from_utf8(bytes).expect("validated above"))
}

struct LoadedTrajectory<T> {
    trajectory: Trajectory<T>,
    warnings: Vec<IngestWarning>,
}

fn load_trajectories<T: Real>(dir: &Path, kind: TrajectoryKind) -> Result<Vec<LoadedTrajectory<T>>, IngestError> {
    csv_files(dir)?
        .par_iter()
        .map(|path| {
            let name = path.display().to_string();
            let text = read_text(path)?;
            let (samples, warnings) = parse_state_csv::<T>(&text, &name)?;
            if samples.is_empty() {
                return Err(IngestError::parse(&name, 1, "state file has no data rows"));
            }
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let trajectory = Trajectory { id, kind, glyph: kind.default_glyph(), color_override: None, samples };
            Ok(LoadedTrajectory { trajectory, warnings })
        })
        .collect()
}

/// Loads a scene from a JSON config; folder paths resolve against the config's directory.
///
/// Files are read in lexicographic filename order (parsed in parallel,
/// merged deterministically); vehicles get the quadrotor glyph and dynamic
/// objects the cube glyph unless the config overrides them.
pub fn load_scene<T: Real>(config_path: &Path) -> Result<(Scene<T>, IngestReport), IngestError> {
    let text = read_text(config_path)?;
    let mut config = parse_scene_config(&text)?;
    let base = config_path.parent().unwrap_or_else(|| Path::new("."));
    config.vehicle_dir = base.join(&config.vehicle_dir);
    config.dynamic_dir = base.join(&config.dynamic_dir);
    config.static_dir = base.join(&config.static_dir);

    let mut report = IngestReport::default();
    let mut trajectories = Vec::new();
    for (dir, kind) in [
        (&config.vehicle_dir, TrajectoryKind::Vehicle),
        (&config.dynamic_dir, TrajectoryKind::Dynamic),
    ] {
        for loaded in load_trajectories::<T>(dir, kind)? {
            report.files_read += 1;
            report.rows_read += loaded.trajectory.samples.len();
            report.warnings.extend(loaded.warnings);
            trajectories.push(loaded.trajectory);
        }
    }

    let mut statics = Vec::new();
    for path in csv_files(&config.static_dir)? {
        let name = path.display().to_string();
        let (objs, warnings) = parse_static_csv::<T>(&read_text(&path)?, &name)?;
        report.files_read += 1;
        report.rows_read += objs.len();
        report.warnings.extend(warnings);
        statics.extend(objs);
    }

    let scene = Scene::new(trajectories, statics, config)?;
    Ok((scene, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    const RED_ROW: &str = "0.0,1,2,3,1,0,0,0,0,0,0,1,0,0,1,1,1,1";

    fn state_text(rows: &[&str]) -> String {
        let mut s = format!("{STATE_HEADER}\n");
        for r in rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    fn parse_err(rows: &[&str]) -> String {
        parse_state_csv::<f64>(&state_text(rows), "f.csv").unwrap_err().to_string()
    }

    #[test]
    fn parses_single_row() {
        let (samples, warnings) = parse_state_csv::<f64>(&state_text(&[RED_ROW]), "f.csv").unwrap();
        assert!(warnings.is_empty());
        let s = samples[0];
        assert_eq!(s.t, 0.0);
        assert_eq!(s.p, Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(s.q, Quat::identity());
        assert_eq!(s.v, Vec3::zero());
        assert_eq!(s.c, ColorRGBA::opaque_red());
        assert_eq!(s.s, Vec3::splat(1.0));
    }

    #[test]
    fn rejects_repeated_time() {
        let e = parse_err(&["1.0,0,0,0,1,0,0,0,0,0,0,1,0,0,1,1,1,1", "1.0,0,0,0,1,0,0,0,0,0,0,1,0,0,1,1,1,1"]);
        assert!(e.contains("non-increasing time") && e.starts_with("f.csv:3:"), "{e}");
    }

    #[test]
    fn normalizes_with_warning() {
        let text = state_text(&["0,0,0,0,2,0,0,0,0,0,0,1,0,0,1,1,1,1"]);
        let (samples, warnings) = parse_state_csv::<f64>(&text, "f.csv").unwrap();
        assert_eq!(samples[0].q, Quat::identity());
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].line, 2);
    }

    #[test]
    fn row_errors_name_file_and_line() {
        let cases: &[(&str, &str)] = &[
            ("0,1,2", "expected 18 columns"),
            ("0,x,0,0,1,0,0,0,0,0,0,1,0,0,1,1,1,1", "cannot parse 'x'"),
            ("0,NaN,0,0,1,0,0,0,0,0,0,1,0,0,1,1,1,1", "non-finite"),
            ("0,inf,0,0,1,0,0,0,0,0,0,1,0,0,1,1,1,1", "non-finite"),
            ("0,0,0,0,1,0,0,0,0,0,0,1.5,0,0,1,1,1,1", "outside [0, 1]"),
            ("0,0,0,0,1,0,0,0,0,0,0,1,0,0,1,1,0,1", "must be > 0"),
            ("0,0,0,0,0,0,0,0,0,0,0,1,0,0,1,1,1,1", "near-zero norm"),
        ];
        for (row, needle) in cases {
            let e = parse_err(&[RED_ROW, row]);
            assert!(e.starts_with("f.csv:3:") && e.contains(needle), "{row}: {e}");
        }
    }

    #[test]
    fn header_required() {
        let e = parse_state_csv::<f64>("t,px\n", "h.csv").unwrap_err().to_string();
        assert!(e.starts_with("h.csv:1:") && e.contains("header"), "{e}");
        let e = parse_state_csv::<f64>("", "h.csv").unwrap_err().to_string();
        assert!(e.starts_with("h.csv:1:"), "{e}");
    }

    #[test]
    fn comments_and_crlf() {
        let text = format!("# exported\r\n{STATE_HEADER}\r\n# row\r\n{RED_ROW}\r\n\r\n");
        let (samples, _) = parse_state_csv::<f64>(&text, "c.csv").unwrap();
        assert_eq!(samples.len(), 1);
    }

    #[test]
    fn empty_list_writes_header_only() {
        assert_eq!(write_state_csv::<f64>(&[]), format!("{STATE_HEADER}\n"));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let (samples, _) = parse_state_csv::<f64>(&state_text(&[RED_ROW]), "f.csv").unwrap();
        let (again, _) = parse_state_csv::<f64>(&write_state_csv(&samples), "f.csv").unwrap();
        assert_eq!(samples, again);
    }

    #[test]
    fn static_rows() {
        let text = format!("{STATIC_HEADER}\n0,0,2,1,0,0,0,0,1,0,1,3,3,0.2,gate\n1,1,1,1,0,0,0,0,0,1,1,1,1,1,CUBE\n");
        let (objs, _) = parse_static_csv::<f64>(&text, "s.csv").unwrap();
        assert_eq!(objs[0].obj, GlyphKind::Gate);
        assert_eq!(objs[0].p, Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(objs[0].c, ColorRGBA::new(0.0, 1.0, 0.0, 1.0));
        assert_eq!(objs[0].s, Vec3::new(3.0, 3.0, 0.2));
        assert_eq!(objs[1].obj, GlyphKind::Cube);

        let bad = format!("{STATIC_HEADER}\n0,0,2,1,0,0,0,0,1,0,1,3,3,0.2,pyramid\n");
        let e = parse_static_csv::<f64>(&bad, "s.csv").unwrap_err().to_string();
        assert!(e.contains("s.csv:2:") && e.contains("{sphere, cube, cylinder, cone, gate, quadrotor}"), "{e}");
    }

    #[test]
    fn config_defaults() {
        let cfg = parse_scene_config(r#"{"vehicle_dir":"v","dynamic_dir":"d","static_dir":"s"}"#).unwrap();
        assert_eq!(cfg.trail.duration_s, 1.0);
        assert_eq!(cfg.trail.color, ColorRGBA::opaque_red());
        assert_eq!(cfg.lod_epsilon_m, 0.0);
        assert_eq!(cfg.line_width_px, 2.0);
        assert_eq!(cfg.background, ColorRGBA::new(0.1, 0.1, 0.12, 1.0));
        assert_eq!(cfg.snapshot_style, SnapshotStyle::Line);
        assert_eq!(cfg.camera, CameraMode::Orbit);
        assert_eq!(cfg.vehicle_dir, PathBuf::from("v"));
    }

    #[test]
    fn config_colors_and_errors() {
        let cfg = parse_scene_config(
            r#"{"vehicle_dir":"v","dynamic_dir":"d","static_dir":"s","colors":{"drone1":[0,0,1,1]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.colors["drone1"], ColorRGBA::new(0.0, 0.0, 1.0, 1.0));

        let e = parse_scene_config(r#"{"vehicle_dir":"v","dynamic_dir":"d","static_dir":"s","trail":{"duration_s":-1}}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("duration_s must be ≥ 0"), "{e}");

        for bad in [
            r#"{"vehicle_dir":"v","dynamic_dir":"d"}"#,
            r#"{"vehicle_dir":"v","dynamic_dir":"d","static_dir":"s","extra":1}"#,
            r#"{"vehicle_dir":1,"dynamic_dir":"d","static_dir":"s"}"#,
            r#"{"vehicle_dir":"v","dynamic_dir":"d","static_dir":"s","background":[0,0,1]}"#,
            r#"{"vehicle_dir":"v","dynamic_dir":"d","static_dir":"s","colors":{"a":[0,0,2,1]}}"#,
            r#"{"vehicle_dir":"v","dynamic_dir":"d","static_dir":"s","camera":"fly"}"#,
        ] {
            assert!(matches!(parse_scene_config(bad), Err(IngestError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn invalid_utf8_reports_line() {
        let bytes = b"a\nb\n\xff\n";
        let e = decode_utf8(bytes, "u.csv").unwrap_err().to_string();
        assert!(e.starts_with("u.csv:3:"), "{e}");
    }
}
