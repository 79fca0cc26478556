//! Continuous-time sampling of trajectories and playback-clock arithmetic.

use thiserror::Error;

use crate::geom::{Quat, Vec3};
use crate::model::{ColorRGBA, Trajectory};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimelineError {
    #[error("time-lapse interval must be > 0, got {0}")]
    NonPositiveInterval(f64),
}

/// Position of a query time relative to an ordered list of knot times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location<T> {
    Before,
    After,
    At(usize),
    /// Strictly between knots `i` and `i + 1`, with `u ∈ (0, 1)`.
    Between(usize, usize, T),
}

/// Binary search of `t` in strictly increasing, non-empty `times`.
pub fn locate<T: Real>(times: &[T], t: T) -> Location<T> {
    locate_by(times.len(), |i| times[i], t)
}

fn locate_by<T: Real>(n: usize, time: impl Fn(usize) -> T, t: T) -> Location<T> {
    if n == 0 || t < time(0) {
        return Location::Before;
    }
    if t > time(n - 1) {
        return Location::After;
    }
    // first knot with time > t
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if time(mid) <= t {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let i = lo - 1;
    let ti = time(i);
    if ti == t {
        return Location::At(i);
    }
    let tj = time(i + 1);
    let u = (t - ti) / (tj - ti);
    Location::Between(i, i + 1, u)
}

pub fn lerp_vec3<T: Real>(a: Vec3<T>, b: Vec3<T>, u: T) -> Vec3<T> {
    a.lerp(b, u)
}

/// Componentwise interpolation, clamped to `[0, 1]`.
pub fn lerp_color<T: Real>(a: ColorRGBA<T>, b: ColorRGBA<T>, u: T) -> ColorRGBA<T> {
    let f = |x: T, y: T| (x + (y - x) * u).max(T::zero()).min(T::one());
    ColorRGBA::new(f(a.r, b.r), f(a.g, b.g), f(a.b, b.b), f(a.a, b.a))
}

/// Shortest-arc spherical interpolation between unit quaternions.
pub fn slerp<T: Real>(q0: Quat<T>, q1: Quat<T>, u: T) -> Quat<T> {
    let mut d = q0.dot(q1);
    let mut q1 = q1;
    if d < T::zero() {
        q1 = q1.neg();
        d = -d;
    }
    let (k0, k1) = if d > T::one() - T::lit(1e-6) {
        (T::one() - u, u)
    } else {
        let theta = d.min(T::one()).acos();
        let sin_theta = theta.sin();
        (((T::one() - u) * theta).sin() / sin_theta, (u * theta).sin() / sin_theta)
    };
    let q = Quat::new(
        q0.w * k0 + q1.w * k1,
        q0.x * k0 + q1.x * k1,
        q0.y * k0 + q1.y * k1,
        q0.z * k0 + q1.z * k1,
    );
    q.scale(T::one() / q.norm())
}

/// Interpolated state of a trajectory at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSample<T> {
    pub p: Vec3<T>,
    pub q: Quat<T>,
    pub v: Vec3<T>,
    pub c: ColorRGBA<T>,
    pub s: Vec3<T>,
    /// When false the other fields are placeholders and must not be drawn.
    pub visible: bool,
}

impl<T: Real> PoseSample<T> {
    pub fn hidden() -> Self {
        Self {
            p: Vec3::zero(),
            q: Quat::identity(),
            v: Vec3::zero(),
            c: ColorRGBA::new(T::zero(), T::zero(), T::zero(), T::zero()),
            s: Vec3::splat(T::one()),
            visible: false,
        }
    }
}

/// Samples `traj` at `t`: hidden outside its time span, exact at knots,
/// linear in position/velocity/scale/color and slerped in orientation between.
pub fn sample_trajectory<T: Real>(traj: &Trajectory<T>, t: T) -> PoseSample<T> {
    let samples = &traj.samples;
    match locate_by(samples.len(), |i| samples[i].t, t) {
        Location::Before | Location::After => PoseSample::hidden(),
        Location::At(i) => {
            let k = &samples[i];
            PoseSample { p: k.p, q: k.q, v: k.v, c: k.c, s: k.s, visible: true }
        }
        Location::Between(i, j, u) => {
            let (a, b) = (&samples[i], &samples[j]);
            PoseSample {
                p: lerp_vec3(a.p, b.p, u),
                q: slerp(a.q, b.q, u),
                v: lerp_vec3(a.v, b.v, u),
                c: lerp_color(a.c, b.c, u),
                s: lerp_vec3(a.s, b.s, u),
                visible: true,
            }
        }
    }
}

/// Playback state: current time, speed multiplier and looping flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaybackClock<T> {
    pub t: T,
    pub rate: T,
    pub looping: bool,
    pub t_range: [T; 2],
}

impl<T: Real> PlaybackClock<T> {
    pub fn new(t_range: [T; 2]) -> Self {
        Self { t: t_range[0], rate: T::one(), looping: false, t_range }
    }
}

/// Advances the clock by `wall_dt` seconds of wall time.
pub fn advance<T: Real>(clock: PlaybackClock<T>, wall_dt: T) -> PlaybackClock<T> {
    let [t0, t1] = clock.t_range;
    let raw = clock.t + wall_dt * clock.rate;
    let t = if raw >= t0 && raw <= t1 {
        raw
    } else if clock.looping {
        let len = t1 - t0;
        if len > T::zero() {
            let r = (raw - t0) % len;
            t0 + if r < T::zero() { r + len } else { r }
        } else {
            t0
        }
    } else {
        raw.max(t0).min(t1)
    };
    PlaybackClock { t, ..clock }
}

/// Instants `t0, t0 + Δ, …` up to `t1` (inclusive when `t1` is a multiple).
///
/// With no interval given, `Δ = (t1 − t0) / 20`; a degenerate range yields `[t0]`.
pub fn timelapse_instants<T: Real>(t_range: [T; 2], interval: Option<T>) -> Result<Vec<T>, TimelineError> {
    let [t0, t1] = t_range;
    let span = t1 - t0;
    let dt = match interval {
        Some(dt) => dt,
        None if span <= T::zero() => return Ok(vec![t0]),
        None => span / T::lit(20.0),
    };
    if !(dt > T::zero()) {
        return Err(TimelineError::NonPositiveInterval(dt.as_f64()));
    }
    // absorbs rounding in span / dt so exact multiples include t1
    let slack = T::lit(1e-9) * span.abs().max(T::one());
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let t = t0 + dt * T::lit(k as f64);
        if t > t1 + slack {
            break;
        }
        out.push(t.min(t1));
        k += 1;
    }
    Ok(out)
}
