//! Orbit and follow cameras, view/projection matrices and point projection.
//!
//! Camera space is right-handed with the camera looking down −Z. NDC spans
//! `[-1, 1]³` with depth −1 at the near plane; pixel (0, 0) is top-left.

use thiserror::Error;

use crate::geom::{Aabb, Mat4, Vec3};
use crate::real::Real;
use crate::timeline::PoseSample;

/// Orbit rotation sensitivity in radians per dragged pixel.
pub const ORBIT_RAD_PER_PIXEL: f64 = 0.005;
/// Radius multiplier per wheel step.
pub const ORBIT_ZOOM_FACTOR: f64 = 0.9;
pub const ORBIT_MIN_RADIUS: f64 = 0.01;
pub const ORBIT_MAX_RADIUS: f64 = 1e6;
pub const ORBIT_MAX_ELEVATION_DEG: f64 = 89.0;
/// Horizontal speed below which the follow camera uses the body yaw instead.
pub const FOLLOW_HEADING_MIN_SPEED: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CameraError {
    #[error("camera eye and target coincide")]
    EyeEqualsTarget,
    #[error("invalid perspective: {0}")]
    InvalidPerspective(&'static str),
    #[error("follow target is not visible at this time")]
    TargetHidden,
}

/// Right-handed view matrix looking from `eye` at `target`.
///
/// When `up_hint` is (nearly) parallel to the view direction world +X is
/// used instead, and +Y if that is parallel too.
pub fn look_at<T: Real>(eye: Vec3<T>, target: Vec3<T>, up_hint: Vec3<T>) -> Result<Mat4<T>, CameraError> {
    let f = (target - eye).normalized().ok_or(CameraError::EyeEqualsTarget)?;
    let limit = T::one() - T::lit(1e-6);
    let parallel = |u: Vec3<T>| u.normalized().is_none_or(|u| f.dot(u).abs() > limit);
    let up = [up_hint, Vec3::unit_x(), Vec3::unit_y()]
        .into_iter()
        .find(|&u| !parallel(u))
        .expect("a unit axis is never parallel to both X and Y");
    let s = f.cross(up).normalized().expect("non-parallel");
    let u = s.cross(f);
    let z = T::zero();
    Ok(Mat4::from_rows([
        [s.x, s.y, s.z, -s.dot(eye)],
        [u.x, u.y, u.z, -u.dot(eye)],
        [-f.x, -f.y, -f.z, f.dot(eye)],
        [z, z, z, T::one()],
    ]))
}

/// OpenGL-style perspective projection (depth −1 at `near`, +1 at `far`).
pub fn perspective<T: Real>(fov_y: T, aspect: T, near: T, far: T) -> Result<Mat4<T>, CameraError> {
    if !(fov_y > T::zero() && fov_y < T::PI()) {
        return Err(CameraError::InvalidPerspective("fov_y must be in (0, π)"));
    }
    if !(aspect > T::zero() && aspect.is_finite()) {
        return Err(CameraError::InvalidPerspective("aspect must be > 0"));
    }
    if !(near > T::zero()) {
        return Err(CameraError::InvalidPerspective("near must be > 0"));
    }
    if !(far > near && far.is_finite()) {
        return Err(CameraError::InvalidPerspective("far must exceed near"));
    }
    let two = T::lit(2.0);
    let f = T::one() / (fov_y / two).tan();
    let z = T::zero();
    Ok(Mat4::from_rows([
        [f / aspect, z, z, z],
        [z, f, z, z],
        [z, z, (far + near) / (near - far), two * far * near / (near - far)],
        [z, z, -T::one(), z],
    ]))
}

/// Everything needed to map world points to pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraMatrices<T> {
    pub view: Mat4<T>,
    pub proj: Mat4<T>,
    pub viewport: (u32, u32),
    pub near: T,
    pub far: T,
}

impl<T: Real> CameraMatrices<T> {
    pub fn look(
        eye: Vec3<T>,
        target: Vec3<T>,
        fov_y: T,
        near: T,
        far: T,
        viewport: (u32, u32),
    ) -> Result<Self, CameraError> {
        let view = look_at(eye, target, Vec3::unit_z())?;
        let aspect = T::lit(viewport.0.max(1) as f64) / T::lit(viewport.1.max(1) as f64);
        let proj = perspective(fov_y, aspect, near, far)?;
        Ok(Self { view, proj, viewport, near, far })
    }

    pub fn to_camera(&self, p: Vec3<T>) -> Vec3<T> {
        self.view.transform_point(p)
    }

    /// Maps a camera-space point through projection, perspective divide and viewport.
    pub fn camera_to_screen(&self, c: Vec3<T>) -> Projected<T> {
        let clip = self.proj.mul_vec4([c.x, c.y, c.z, T::one()]);
        let w = clip[3];
        let (nx, ny, nz) = (clip[0] / w, clip[1] / w, clip[2] / w);
        let half = T::lit(0.5);
        let width = T::lit(self.viewport.0 as f64);
        let height = T::lit(self.viewport.1 as f64);
        Projected {
            x: (nx + T::one()) * half * width,
            y: (T::one() - ny) * half * height,
            depth: nz,
            in_front: c.z < T::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projected<T> {
    pub x: T,
    pub y: T,
    /// NDC depth, −1 at the near plane and +1 at the far plane.
    pub depth: T,
    /// False when the point is at or behind the camera plane.
    pub in_front: bool,
}

pub fn project<T: Real>(p: Vec3<T>, cam: &CameraMatrices<T>) -> Projected<T> {
    cam.camera_to_screen(cam.to_camera(p))
}

/// Orbit camera around a pivot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState<T> {
    pub pivot: Vec3<T>,
    pub radius: T,
    pub azimuth: T,
    pub elevation: T,
}

impl<T: Real> OrbitState<T> {
    /// Frames `bbox`: pivot at its center, radius 1.8 half-diagonals, 45° azimuth, 30° elevation.
    pub fn framing(bbox: &Aabb<T>) -> Self {
        let r = T::lit(1.8) * bbox.half_diagonal();
        let radius = if r > T::lit(ORBIT_MIN_RADIUS) { r } else { T::one() };
        Self::new(bbox.center(), radius, T::lit(45f64.to_radians()), T::lit(30f64.to_radians()))
    }

    /// Builds a state with radius and elevation clamped to their limits.
    pub fn new(pivot: Vec3<T>, radius: T, azimuth: T, elevation: T) -> Self {
        Self { pivot, radius: clamp_radius(radius), azimuth, elevation: clamp_elevation(elevation) }
    }

    /// Camera matrices looking at the pivot. The clip planes scale with the radius.
    pub fn matrices(&self, fov_y: T, viewport: (u32, u32), scene_extent: T) -> Result<CameraMatrices<T>, CameraError> {
        let near = (self.radius * T::lit(1e-3)).max(T::lit(1e-4));
        let far = (self.radius + scene_extent) * T::lit(4.0) + T::one();
        CameraMatrices::look(orbit_eye(self), self.pivot, fov_y, near, far, viewport)
    }
}

fn clamp_radius<T: Real>(r: T) -> T {
    r.max(T::lit(ORBIT_MIN_RADIUS)).min(T::lit(ORBIT_MAX_RADIUS))
}

fn clamp_elevation<T: Real>(e: T) -> T {
    let lim = T::lit(ORBIT_MAX_ELEVATION_DEG.to_radians());
    e.max(-lim).min(lim)
}

/// Applies a mouse drag (pixels) and wheel steps to an orbit state.
pub fn orbit_update<T: Real>(state: OrbitState<T>, drag_dx: T, drag_dy: T, wheel_steps: i32) -> OrbitState<T> {
    let k = T::lit(ORBIT_RAD_PER_PIXEL);
    OrbitState {
        pivot: state.pivot,
        azimuth: state.azimuth + drag_dx * k,
        elevation: clamp_elevation(state.elevation - drag_dy * k),
        radius: clamp_radius(state.radius * T::lit(ORBIT_ZOOM_FACTOR).powi(wheel_steps)),
    }
}

pub fn orbit_eye<T: Real>(state: &OrbitState<T>) -> Vec3<T> {
    let (se, ce) = state.elevation.sin_cos();
    let (sa, ca) = state.azimuth.sin_cos();
    state.pivot + Vec3::new(ce * ca, ce * sa, se) * state.radius
}

/// Third-person chase camera state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowState<T> {
    pub offset_back: T,
    pub offset_up: T,
    pub smoothing_tau: T,
    /// `None` until the first update, which snaps to the desired pose.
    pub eye_smoothed: Option<Vec3<T>>,
    pub target_smoothed: Option<Vec3<T>>,
}

impl<T: Real> FollowState<T> {
    pub fn new(offset_back: T, offset_up: T, smoothing_tau: T) -> Self {
        Self { offset_back, offset_up, smoothing_tau, eye_smoothed: None, target_smoothed: None }
    }
}

impl<T: Real> Default for FollowState<T> {
    fn default() -> Self {
        Self::new(T::lit(5.0), T::lit(2.0), T::lit(0.3))
    }
}

/// Unit horizontal heading: velocity direction above the deadband, else body yaw.
pub fn follow_heading<T: Real>(vehicle: &PoseSample<T>) -> Vec3<T> {
    let vxy = Vec3::new(vehicle.v.x, vehicle.v.y, T::zero());
    if vxy.norm() > T::lit(FOLLOW_HEADING_MIN_SPEED) {
        vxy.normalized().expect("non-zero")
    } else {
        let (s, c) = vehicle.q.yaw().sin_cos();
        Vec3::new(c, s, T::zero())
    }
}

/// Advances the follow camera by `dt` and returns `(state, eye, target)`.
pub fn follow_pose<T: Real>(
    state: FollowState<T>,
    vehicle: &PoseSample<T>,
    dt: T,
) -> Result<(FollowState<T>, Vec3<T>, Vec3<T>), CameraError> {
    if !vehicle.visible {
        return Err(CameraError::TargetHidden);
    }
    let heading = follow_heading(vehicle);
    let desired_eye = vehicle.p - heading * state.offset_back + Vec3::new(T::zero(), T::zero(), state.offset_up);
    let desired_target = vehicle.p;
    let alpha = if state.smoothing_tau > T::zero() {
        T::one() - (-dt / state.smoothing_tau).exp()
    } else {
        T::one()
    };
    let smooth = |prev: Option<Vec3<T>>, desired: Vec3<T>| match prev {
        Some(x) if alpha < T::one() => x + (desired - x) * alpha,
        _ => desired,
    };
    let eye = smooth(state.eye_smoothed, desired_eye);
    let target = smooth(state.target_smoothed, desired_target);
    let next = FollowState { eye_smoothed: Some(eye), target_smoothed: Some(target), ..state };
    Ok((next, eye, target))
}
