use std::path::Path;

use flymation_core::camera::{FollowState, OrbitState};
use flymation_core::compile::{
    compile_animation_frame, compile_snapshot_line, compile_snapshot_timelapse, default_golden_times, export_goldens,
    serialize_bundle,
};
use flymation_core::demogen::{gen_lorenz_scene, gen_racetrack_scene, DemoError, LorenzParams};
use flymation_core::ingest::load_scene;
use flymation_core::model::{CameraMode, SnapshotStyle};
use flymation_core::raster::{encode_png, export_svg, render};
use flymation_core::timeline::sample_trajectory;
use flymation_core::{CameraMatrices, RenderBatch, Scene};
use log::info;
use serde_json::json;

use crate::args::{BakeArgs, DemoKind, Mode, SnapshotArgs, ViewArgs};
use crate::error::CliError;

/// Vertical field of view for all offline renders.
pub const FOV_Y_DEG: f64 = 45.0;

pub fn load(path: &Path) -> Result<Scene, CliError> {
    let (scene, report) = load_scene::<f64>(path)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    info!("loaded {} files, {} rows", report.files_read, report.rows_read);
    Ok(scene)
}

pub fn validate(path: &Path) -> Result<(), CliError> {
    let (scene, report) = load_scene::<f64>(path)?;
    let warnings: Vec<_> = report
        .warnings
        .iter()
        .map(|w| json!({"file": w.file, "line": w.line, "message": w.message}))
        .collect();
    let out = json!({
        "trajectories": scene.trajectories.len(),
        "samples_total": scene.sample_count(),
        "statics": scene.statics.len(),
        "t_range": scene.t_range,
        "bbox": {"min": scene.bbox.min.to_array(), "max": scene.bbox.max.to_array()},
        "warnings": warnings,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn parse_cam(spec: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<f64> = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--cam expects \"az,el,radius\", got '{spec}'")))?;
    match parts[..] {
        [az, el, r] if az.is_finite() && el.is_finite() && r.is_finite() && r > 0.0 => Ok((az, el, r)),
        _ => Err(CliError::Usage(format!("--cam expects \"az,el,radius\" with radius > 0, got '{spec}'"))),
    }
}

fn check_viewport(view: &ViewArgs) -> Result<(u32, u32), CliError> {
    if view.width == 0 || view.height == 0 || view.width > 16384 || view.height > 16384 {
        return Err(CliError::Usage(format!("image size {}x{} must be within 1..=16384", view.width, view.height)));
    }
    Ok((view.width, view.height))
}

fn orbit_for(scene: &Scene, view: &ViewArgs) -> Result<OrbitState<f64>, CliError> {
    let auto = OrbitState::framing(&scene.bbox);
    Ok(match &view.cam {
        Some(spec) => {
            let (az, el, r) = parse_cam(spec)?;
            OrbitState::new(auto.pivot, r, az.to_radians(), el.to_radians())
        }
        None => auto,
    })
}

fn orbit_camera(scene: &Scene, view: &ViewArgs) -> Result<CameraMatrices, CliError> {
    let viewport = check_viewport(view)?;
    orbit_for(scene, view)?
        .matrices(FOV_Y_DEG.to_radians(), viewport, scene.bbox.half_diagonal() * 2.0)
        .map_err(|e| CliError::Data(e.to_string()))
}

enum ImageFormat {
    Png,
    Svg,
}

fn image_format(path: &Path) -> Result<ImageFormat, CliError> {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("png") => Ok(ImageFormat::Png),
        Some("svg") => Ok(ImageFormat::Svg),
        _ => Err(CliError::Usage(format!("--out must end in .png or .svg: {}", path.display()))),
    }
}

fn encode(batch: &RenderBatch, cam: &CameraMatrices, format: ImageFormat) -> Result<Vec<u8>, CliError> {
    Ok(match format {
        ImageFormat::Png => {
            let fb = render(batch, cam, cam.viewport.0, cam.viewport.1);
            encode_png(&fb).map_err(|e| CliError::Io(e.to_string()))?
        }
        ImageFormat::Svg => export_svg(batch, cam).into_bytes(),
    })
}

pub fn snapshot(args: &SnapshotArgs) -> Result<(), CliError> {
    let format = image_format(&args.out)?;
    if let Some(eps) = args.lod.filter(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(CliError::Usage(format!("--lod must be ≥ 0, got {eps}")));
    }
    let scene = load(&args.scene)?;
    let cam = orbit_camera(&scene, &args.view)?;
    let mode = args.mode.unwrap_or(match scene.config.snapshot_style {
        SnapshotStyle::Line => Mode::Line,
        SnapshotStyle::Timelapse => Mode::Timelapse,
    });
    let batch = match mode {
        Mode::Line => compile_snapshot_line(&scene, args.lod.unwrap_or(scene.config.lod_epsilon_m)),
        Mode::Timelapse => {
            let interval = args.interval.or(scene.config.timelapse_interval_s);
            let batch = compile_snapshot_timelapse(&scene, interval).map_err(|e| CliError::Usage(e.to_string()))?;
            for (i, t) in scene.trajectories.iter().enumerate() {
                info!("timelapse: trajectory {} has {} glyphs", t.id, batch.glyph_count_for(i));
            }
            batch
        }
    };
    write_file(&args.out, &encode(&batch, &cam, format)?)?;
    info!("wrote {}", args.out.display());
    Ok(())
}

/// Frame instants `t0 + k/fps` up to and including `t1`.
pub fn frame_times(t0: f64, t1: f64, fps: f64) -> Vec<f64> {
    let count = ((t1 - t0) * fps + 1e-9).floor() as usize + 1;
    (0..count).map(|k| t0 + k as f64 / fps).collect()
}

pub fn bake(args: &BakeArgs) -> Result<(), CliError> {
    if !(args.fps.is_finite() && args.fps > 0.0) {
        return Err(CliError::Usage(format!("--fps must be > 0, got {}", args.fps)));
    }
    let scene = load(&args.scene)?;
    let [s0, s1] = scene.t_range;
    let (t0, t1) = (args.t0.unwrap_or(s0), args.t1.unwrap_or(s1));
    if !(t0 >= s0 && t1 <= s1 && t0 <= t1) {
        return Err(CliError::Usage(format!("time range [{t0}, {t1}] must lie within the scene range [{s0}, {s1}]")));
    }
    let follow_id = args.follow.clone().or_else(|| match scene.config.camera {
        CameraMode::Follow => scene.config.follow_target.clone(),
        CameraMode::Orbit => None,
    });
    let follow_target = match &follow_id {
        Some(id) => Some(scene.trajectory(id).ok_or_else(|| {
            let ids: Vec<_> = scene.trajectories.iter().map(|t| t.id.as_str()).collect();
            CliError::Usage(format!("unknown trajectory '{id}'; valid ids: {}", ids.join(", ")))
        })?),
        None => None,
    };
    let orbit = orbit_camera(&scene, &args.view)?;
    let extent = scene.bbox.half_diagonal() * 2.0;
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;

    let mut follow = FollowState::<f64>::default();
    let mut cam = orbit;
    let dt = 1.0 / args.fps;
    let times = frame_times(t0, t1, args.fps);
    for (k, &t) in times.iter().enumerate() {
        if let Some(traj) = follow_target {
            // hidden targets keep the last camera
            if let Ok((next, eye, target)) = flymation_core::camera::follow_pose(follow, &sample_trajectory(traj, t), dt) {
                follow = next;
                let view_dir = target - eye;
                if view_dir.norm() > 1e-9 {
                    let far = (view_dir.norm() + extent) * 4.0 + 1.0;
                    cam = CameraMatrices::look(eye, target, FOV_Y_DEG.to_radians(), 0.05, far, orbit.viewport)
                        .map_err(|e| CliError::Data(e.to_string()))?;
                }
            }
        }
        let batch = compile_animation_frame(&scene, t, &scene.config.trail).map_err(|e| CliError::Usage(e.to_string()))?;
        let fb = render(&batch, &cam, cam.viewport.0, cam.viewport.1);
        let png = encode_png(&fb).map_err(|e| CliError::Io(e.to_string()))?;
        write_file(&args.out.join(format!("frame_{k:06}.png")), &png)?;
    }
    info!("wrote {} frames to {}", times.len(), args.out.display());
    Ok(())
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const BLOB_FILE: &str = "blob.bin";

pub fn bundle(scene_path: &Path, out: &Path) -> Result<(), CliError> {
    let scene = load(scene_path)?;
    let b = serialize_bundle(&scene);
    write_file(&out.join(MANIFEST_FILE), b.manifest.as_bytes())?;
    write_file(&out.join(BLOB_FILE), &b.blob)?;
    info!("bundle: {} manifest bytes, {} blob bytes", b.manifest.len(), b.blob.len());
    Ok(())
}

pub fn goldens_text(scene: &Scene, count: usize) -> String {
    export_goldens(scene, &default_golden_times(scene, count))
}

pub fn goldens(scene_path: &Path, out: &Path, count: usize) -> Result<(), CliError> {
    let scene = load(scene_path)?;
    write_file(out, goldens_text(&scene, count).as_bytes())
}

fn demo_err(e: DemoError) -> CliError {
    match e {
        DemoError::Io { .. } => CliError::Io(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

pub fn demo(kind: &DemoKind) -> Result<(), CliError> {
    let paths = match kind {
        DemoKind::Lorenz { out, n, seed, duration, dt } => {
            let params = LorenzParams { dt: *dt, duration: *duration, ..LorenzParams::default() };
            gen_lorenz_scene(*n, &params, out, *seed).map_err(demo_err)?
        }
        DemoKind::Racetrack { out, gates, laps } => gen_racetrack_scene(*gates, *laps, out).map_err(demo_err)?,
    };
    println!("{}", paths.config.display());
    Ok(())
}
