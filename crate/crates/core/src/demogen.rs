//! Deterministic demo scenes: Lorenz butterflies and a gated race track.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Quat, Vec3};
use crate::ingest::{write_state_csv, write_static_csv};
use crate::model::{CameraMode, ColorRGBA, GlyphKind, SceneConfig, StateSample, StaticObjectSpec, TrailConfig};

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("a race track needs at least 2 gates, got {0}")]
    TooFewGates(usize),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DemoError + '_ {
    move |source| DemoError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
    pub dt: f64,
    pub duration: f64,
}

impl Default for LorenzParams {
    fn default() -> Self {
        Self { sigma: 10.0, rho: 28.0, beta: 8.0 / 3.0, dt: 0.01, duration: 10.0 }
    }
}

impl LorenzParams {
    pub fn validate(&self) -> Result<(), DemoError> {
        let all_finite = [self.sigma, self.rho, self.beta, self.dt, self.duration].iter().all(|v| v.is_finite());
        if !all_finite || self.dt <= 0.0 || self.duration <= 0.0 || self.dt > self.duration {
            return Err(DemoError::InvalidParams(format!(
                "need finite values with 0 < dt ≤ duration (dt={}, duration={})",
                self.dt, self.duration
            )));
        }
        Ok(())
    }

    /// Integration steps; the trajectory has one more sample than this.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

pub fn lorenz_derivative(s: Vec3<f64>, p: &LorenzParams) -> Vec3<f64> {
    Vec3::new(p.sigma * (s.y - s.x), s.x * (p.rho - s.z) - s.y, s.x * s.y - p.beta * s.z)
}

/// One classical Runge–Kutta step of the Lorenz system.
pub fn rk4_step(s: Vec3<f64>, p: &LorenzParams, dt: f64) -> Vec3<f64> {
    let k1 = lorenz_derivative(s, p);
    let k2 = lorenz_derivative(s + k1 * (dt * 0.5), p);
    let k3 = lorenz_derivative(s + k2 * (dt * 0.5), p);
    let k4 = lorenz_derivative(s + k3 * dt, p);
    s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

pub const PALETTE: [[f64; 4]; 8] = [
    [0.90, 0.10, 0.15, 1.0],
    [0.10, 0.45, 0.90, 1.0],
    [0.15, 0.75, 0.25, 1.0],
    [0.95, 0.65, 0.05, 1.0],
    [0.60, 0.20, 0.80, 1.0],
    [0.05, 0.80, 0.80, 1.0],
    [0.95, 0.40, 0.70, 1.0],
    [0.55, 0.35, 0.15, 1.0],
];

pub const LORENZ_GLYPHS: [GlyphKind; 4] = [GlyphKind::Sphere, GlyphKind::Cube, GlyphKind::Cylinder, GlyphKind::Cone];

/// Orientation turning body +X toward `v`; identity when `v` vanishes.
fn heading_quat(v: Vec3<f64>) -> Quat<f64> {
    let Some(d) = v.normalized() else { return Quat::identity() };
    let x = Vec3::unit_x();
    let axis = x.cross(d);
    let cos = x.dot(d).clamp(-1.0, 1.0);
    match axis.normalized() {
        Some(a) => Quat::from_axis_angle(a, cos.acos()),
        None if cos > 0.0 => Quat::identity(),
        None => Quat::from_axis_angle(Vec3::unit_z(), std::f64::consts::PI),
    }
}

/// Integrates one Lorenz trajectory from `x0`; `k·dt` timestamps, inclusive endpoints.
pub fn lorenz_trajectory(x0: Vec3<f64>, p: &LorenzParams, color: ColorRGBA<f64>) -> Vec<StateSample<f64>> {
    let n = p.steps();
    let mut out = Vec::with_capacity(n + 1);
    let mut s = x0;
    for k in 0..=n {
        let v = lorenz_derivative(s, p);
        out.push(StateSample { t: k as f64 * p.dt, p: s, q: heading_quat(v), v, c: color, s: Vec3::splat(0.2) });
        if k < n {
            s = rk4_step(s, p, p.dt);
        }
    }
    out
}

/// Output folder layout shared by both generators.
#[derive(Debug, Clone)]
pub struct DemoPaths {
    pub root: PathBuf,
    pub config: PathBuf,
}

fn prepare(root: &Path) -> Result<DemoPaths, DemoError> {
    for sub in ["vehicles", "dynamic", "static"] {
        let dir = root.join(sub);
        std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    }
    Ok(DemoPaths { root: root.to_path_buf(), config: root.join("scene.json") })
}

fn write(path: &Path, text: &str) -> Result<(), DemoError> {
    std::fs::write(path, text).map_err(io_err(path))
}

fn write_config(paths: &DemoPaths, cfg: &SceneConfig) -> Result<(), DemoError> {
    let mut text = serde_json::to_string_pretty(cfg).expect("config serializes");
    text.push('\n');
    write(&paths.config, &text)
}

/// Writes `n_traj` Lorenz vehicles starting from (1,1,1) plus a seeded
/// uniform perturbation in [−0.1, 0.1]³.
pub fn gen_lorenz_scene(n_traj: usize, params: &LorenzParams, out_dir: &Path, seed: u64) -> Result<DemoPaths, DemoError> {
    if n_traj == 0 {
        return Err(DemoError::InvalidParams("need at least one trajectory".into()));
    }
    params.validate()?;
    let paths = prepare(out_dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cfg = SceneConfig::default();
    for i in 0..n_traj {
        let jitter = Vec3::new(rng.random_range(-0.1..=0.1), rng.random_range(-0.1..=0.1), rng.random_range(-0.1..=0.1));
        let color = ColorRGBA::from_array(PALETTE[i % PALETTE.len()]);
        let samples = lorenz_trajectory(Vec3::splat(1.0) + jitter, params, color);
        let id = format!("lorenz_{i:02}");
        write(&paths.root.join("vehicles").join(format!("{id}.csv")), &write_state_csv(&samples))?;
        cfg.glyphs.insert(id, LORENZ_GLYPHS[i % LORENZ_GLYPHS.len()]);
    }
    write_config(&paths, &cfg)?;
    let mut readme = String::new();
    let _ = writeln!(readme, "# Lorenz demo\n");
    let _ = writeln!(readme, "Generated by `flymation demo lorenz`.\n");
    let _ = writeln!(readme, "- system: dx/dt = sigma(y-x), dy/dt = x(rho-z)-y, dz/dt = xy - beta z");
    let _ = writeln!(readme, "- sigma = {}, rho = {}, beta = {}", params.sigma, params.rho, params.beta);
    let _ = writeln!(readme, "- integrator: classical RK4, dt = {}, duration = {} s", params.dt, params.duration);
    let _ = writeln!(readme, "- {n_traj} trajectories from (1,1,1) + uniform jitter in [-0.1, 0.1]^3, ChaCha8 seed {seed}");
    let _ = writeln!(readme, "- velocity column is the vector field at each sample; orientation turns +X toward it");
    write(&paths.root.join("README.md"), &readme)?;
    Ok(paths)
}

pub const TRACK_RADIUS: f64 = 15.0;
pub const TRACK_HEIGHT: f64 = 2.0;
pub const TRACK_SPEED: f64 = 5.0;
const TRACK_DT: f64 = 0.05;

/// Gate centers and their passage angles, evenly spaced counter-clockwise.
pub fn gate_angles(n_gates: usize) -> Vec<f64> {
    (0..n_gates).map(|k| std::f64::consts::TAU * k as f64 / n_gates as f64).collect()
}

fn track_point(theta: f64) -> Vec3<f64> {
    Vec3::new(TRACK_RADIUS * theta.cos(), TRACK_RADIUS * theta.sin(), TRACK_HEIGHT)
}

/// Gate with its opening normal (local Z) along the direction of travel.
fn gate_spec(theta: f64) -> StaticObjectSpec<f64> {
    let tangent = Vec3::new(-theta.sin(), theta.cos(), 0.0);
    let up = Vec3::unit_z();
    let side = up.cross(tangent);
    let cols = [side, up, tangent];
    let m = [0, 1, 2].map(|r| cols.map(|c| c.to_array()[r]));
    StaticObjectSpec {
        p: track_point(theta),
        q: Quat::from_mat3(m),
        c: ColorRGBA::new(0.95, 0.55, 0.1, 1.0),
        s: Vec3::new(3.0, 3.0, 0.2),
        obj: GlyphKind::Gate,
    }
}

/// Time at which the vehicle passes gate `k` during lap `lap`.
pub fn gate_passage_time(theta: f64, lap: usize) -> f64 {
    (theta + std::f64::consts::TAU * lap as f64) * TRACK_RADIUS / TRACK_SPEED
}

/// A vehicle circling through `n_gates` gates for `laps` laps at constant speed.
pub fn gen_racetrack_scene(n_gates: usize, laps: usize, out_dir: &Path) -> Result<DemoPaths, DemoError> {
    if n_gates < 2 {
        return Err(DemoError::TooFewGates(n_gates));
    }
    if laps == 0 {
        return Err(DemoError::InvalidParams("need at least one lap".into()));
    }
    let paths = prepare(out_dir)?;
    let omega = TRACK_SPEED / TRACK_RADIUS;
    let angles = gate_angles(n_gates);
    let end = std::f64::consts::TAU * laps as f64 / omega;

    let mut knots: Vec<f64> = (0..).map(|k| k as f64 * TRACK_DT).take_while(|&t| t < end).collect();
    knots.push(end);
    for lap in 0..laps {
        knots.extend(angles.iter().map(|&a| gate_passage_time(a, lap)));
    }
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);

    let color = ColorRGBA::new(0.2, 0.85, 1.0, 1.0);
    let samples: Vec<StateSample<f64>> = knots
        .iter()
        .map(|&t| {
            let theta = omega * t;
            StateSample {
                t,
                p: track_point(theta),
                q: Quat::from_yaw(theta + std::f64::consts::FRAC_PI_2),
                v: Vec3::new(-theta.sin(), theta.cos(), 0.0) * TRACK_SPEED,
                c: color,
                s: Vec3::splat(0.5),
            }
        })
        .collect();
    write(&paths.root.join("vehicles").join("racer.csv"), &write_state_csv(&samples))?;
    let gates: Vec<_> = angles.iter().map(|&a| gate_spec(a)).collect();
    write(&paths.root.join("static").join("gates.csv"), &write_static_csv(&gates))?;

    let cfg = SceneConfig {
        camera: CameraMode::Follow,
        follow_target: Some("racer".into()),
        trail: TrailConfig { duration_s: 2.0, color: ColorRGBA::new(1.0, 0.2, 0.2, 1.0) },
        colors: BTreeMap::new(),
        ..SceneConfig::default()
    };
    write_config(&paths, &cfg)?;
    let readme = format!(
        "# Race track demo\n\nGenerated by `flymation demo racetrack`.\n\n\
         - {n_gates} gates on a circle of radius {TRACK_RADIUS} m at z = {TRACK_HEIGHT} m, opening along the track tangent\n\
         - one vehicle at {TRACK_SPEED} m/s for {laps} lap(s), sampled every {TRACK_DT} s plus every gate passage\n"
    );
    write(&paths.root.join("README.md"), &readme)?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{load_scene, parse_state_csv, parse_static_csv};

    #[test]
    fn derivative_examples() {
        let p = LorenzParams::default();
        assert_eq!(lorenz_derivative(Vec3::zero(), &p), Vec3::zero());
        let c = Vec3::new(72f64.sqrt(), 72f64.sqrt(), 27.0);
        assert!(lorenz_derivative(c, &p).norm() < 1e-12);
        let d = lorenz_derivative(Vec3::splat(1.0), &p);
        assert_eq!((d.x, d.y), (0.0, 26.0));
        assert!((d.z - (1.0 - 8.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn fixed_points_stay_put() {
        let p = LorenzParams::default();
        assert_eq!(rk4_step(Vec3::zero(), &p, 0.01), Vec3::zero());
        let c = Vec3::new(72f64.sqrt(), 72f64.sqrt(), 27.0);
        assert!(rk4_step(c, &p, 0.01).distance(c) < 1e-12);
    }

    fn integrate(x0: Vec3<f64>, t: f64, dt: f64) -> Vec3<f64> {
        let p = LorenzParams::default();
        let n = (t / dt).round() as usize;
        (0..n).fold(x0, |s, _| rk4_step(s, &p, dt))
    }

    #[test]
    fn fourth_order_convergence() {
        let x0 = Vec3::splat(1.0);
        let reference = integrate(x0, 0.1, 1e-5);
        let e1 = integrate(x0, 0.1, 0.01).distance(reference);
        let e2 = integrate(x0, 0.1, 0.005).distance(reference);
        let ratio = e1 / e2;
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    /// Explicit Butcher-tableau RK4, written independently of `rk4_step`.
    fn tableau_rk4(s: Vec3<f64>, dt: f64) -> Vec3<f64> {
        let p = LorenzParams::default();
        let a = [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 1.0]];
        let b = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];
        let mut k = [[0.0f64; 3]; 4];
        for i in 0..4 {
            let mut y = s.to_array();
            for j in 0..i {
                for d in 0..3 {
                    y[d] += dt * a[i][j] * k[j][d];
                }
            }
            let (x, yy, z) = (y[0], y[1], y[2]);
            k[i] = [p.sigma * (yy - x), x * (p.rho - z) - yy, x * yy - p.beta * z];
        }
        let mut out = s.to_array();
        for i in 0..4 {
            for d in 0..3 {
                out[d] += dt * b[i] * k[i][d];
            }
        }
        Vec3::from_array(out)
    }

    #[test]
    fn single_step_matches_tableau_and_local_error_order() {
        let x0 = Vec3::splat(1.0);
        let p = LorenzParams::default();
        assert!(rk4_step(x0, &p, 0.01).distance(tableau_rk4(x0, 0.01)) < 1e-12);
        // local truncation error of one step scales as dt^5
        let reference = |h: f64| integrate(x0, h, 1e-6);
        let e1 = rk4_step(x0, &p, 0.01).distance(reference(0.01));
        let e2 = rk4_step(x0, &p, 0.005).distance(reference(0.005));
        let ratio = e1 / e2;
        assert!((24.0..=40.0).contains(&ratio), "ratio {ratio}");
        assert!(e1 < 1e-5, "{e1}");
    }

    #[test]
    fn trajectories_stay_bounded() {
        let p = LorenzParams::default();
        let mut s = Vec3::splat(1.0);
        for _ in 0..1_000_000 {
            s = rk4_step(s, &p, 0.01);
            assert!(s.x.abs().max(s.y.abs()).max(s.z.abs()) < 100.0);
        }
    }

    #[test]
    fn row_count_has_inclusive_endpoints() {
        let p = LorenzParams::default();
        let samples = lorenz_trajectory(Vec3::splat(1.0), &p, ColorRGBA::opaque_red());
        assert_eq!(samples.len(), 1001);
        assert_eq!(samples[1000].t, 10.0);
    }

    fn dir_bytes(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
        let mut out = BTreeMap::new();
        let mut stack = vec![root.to_path_buf()];
        while let Some(dir) = stack.pop() {
            for e in std::fs::read_dir(&dir).unwrap() {
                let path = e.unwrap().path();
                if path.is_dir() {
                    stack.push(path);
                } else {
                    out.insert(path.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn lorenz_is_deterministic_and_loads() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let p = LorenzParams::default();
        gen_lorenz_scene(4, &p, a.path(), 7).unwrap();
        gen_lorenz_scene(4, &p, b.path(), 7).unwrap();
        assert_eq!(dir_bytes(a.path()), dir_bytes(b.path()));

        let c = tempfile::tempdir().unwrap();
        gen_lorenz_scene(4, &p, c.path(), 8).unwrap();
        assert_ne!(dir_bytes(a.path()), dir_bytes(c.path()));

        let (scene, report) = load_scene::<f64>(&a.path().join("scene.json")).unwrap();
        assert_eq!(scene.trajectories.len(), 4);
        assert!(report.warnings.is_empty());
        let glyphs: Vec<_> = scene.trajectories.iter().map(|t| t.glyph).collect();
        assert_eq!(glyphs, LORENZ_GLYPHS.to_vec());
    }

    #[test]
    fn racetrack_gates_and_passages() {
        let dir = tempfile::tempdir().unwrap();
        let paths = gen_racetrack_scene(7, 2, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("static/gates.csv")).unwrap();
        let (gates, warnings) = parse_static_csv::<f64>(&text, "gates.csv").unwrap();
        assert!(warnings.is_empty());
        assert_eq!(gates.len(), 7);
        assert!(gates.iter().all(|g| g.obj == GlyphKind::Gate));

        let text = std::fs::read_to_string(dir.path().join("vehicles/racer.csv")).unwrap();
        let (samples, warnings) = parse_state_csv::<f64>(&text, "racer.csv").unwrap();
        assert!(warnings.is_empty());
        for lap in 0..2 {
            for (g, &theta) in gates.iter().zip(&gate_angles(7)) {
                let t = gate_passage_time(theta, lap);
                let s = samples.iter().find(|s| (s.t - t).abs() < 1e-9).expect("passage knot");
                assert!(s.p.distance(g.p) < 1e-9);
                // gate normal points along the direction of travel
                let normal = g.q.rotate(Vec3::unit_z());
                assert!((normal.dot(s.v.normalized().unwrap()) - 1.0).abs() < 1e-9);
            }
        }
        let (scene, report) = load_scene::<f64>(&paths.config).unwrap();
        assert!(report.warnings.is_empty());
        assert_eq!(scene.config.follow_target.as_deref(), Some("racer"));
    }

    #[test]
    fn racetrack_needs_two_gates() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(gen_racetrack_scene(1, 1, dir.path()), Err(DemoError::TooFewGates(1))));
    }
}
