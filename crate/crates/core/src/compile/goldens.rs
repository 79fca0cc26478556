//! Reference pose samples for cross-checking other implementations of the
//! sampling contract.
//!
//! One line per (trajectory, query time):
//! `id,t,1,px,py,pz,qw,qx,qy,qz,vx,vy,vz,cr,cg,cb,ca,sx,sy,sz` for visible
//! poses and `id,t,0` for hidden ones. Numbers carry 9 significant digits.

use std::fmt::Write as _;

use crate::model::Scene;
use crate::real::Real;
use crate::timeline::{sample_trajectory, timelapse_instants};

pub const GOLDEN_HEADER: &str = "# id,t,visible,px,py,pz,qw,qx,qy,qz,vx,vy,vz,cr,cg,cb,ca,sx,sy,sz";

fn num<T: Real>(out: &mut String, v: T) {
    let _ = write!(out, ",{:.8e}", v.as_f64());
}

pub fn export_goldens<T: Real>(scene: &Scene<T>, query_times: &[T]) -> String {
    let mut out = String::from(GOLDEN_HEADER);
    out.push('\n');
    for traj in &scene.trajectories {
        for &t in query_times {
            let pose = sample_trajectory(traj, t);
            out.push_str(&traj.id);
            num(&mut out, t);
            if !pose.visible {
                out.push_str(",0\n");
                continue;
            }
            out.push_str(",1");
            let fields = pose
                .p
                .to_array()
                .into_iter()
                .chain(pose.q.to_array())
                .chain(pose.v.to_array())
                .chain(pose.c.to_array())
                .chain(pose.s.to_array());
            for v in fields {
                num(&mut out, v);
            }
            out.push('\n');
        }
    }
    out
}

/// `count` evenly spaced instants over the scene range plus, per trajectory,
/// its first and last knot and the midpoint of its first interval.
pub fn default_golden_times<T: Real>(scene: &Scene<T>, count: usize) -> Vec<T> {
    let [t0, t1] = scene.t_range;
    let mut times = if count >= 2 && t1 > t0 {
        let dt = (t1 - t0) / T::lit((count - 1) as f64);
        timelapse_instants(scene.t_range, Some(dt)).unwrap_or_default()
    } else {
        vec![t0]
    };
    for traj in &scene.trajectories {
        let s = &traj.samples;
        times.push(s[0].t);
        times.push(s[s.len() - 1].t);
        if s.len() >= 2 {
            times.push((s[0].t + s[1].t) * T::lit(0.5));
        }
    }
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    times.dedup();
    times
}
