use flymation_core::camera::{look_at, project, CameraMatrices};
use flymation_core::compile::{deserialize_bundle, serialize_bundle};
use flymation_core::geom::{Quat, Vec3};
use flymation_core::ingest::{parse_state_csv, parse_static_csv, write_state_csv, write_static_csv, IngestError};
use flymation_core::model::{
    ColorRGBA, GlyphKind, Scene, SceneConfig, StateSample, StaticObjectSpec, Trajectory, TrajectoryKind,
};
use flymation_core::simplify::{point_segment_distance, rdp};
use flymation_core::timeline::{advance, sample_trajectory, slerp, PlaybackClock};
use proptest::prelude::*;

fn unit_quat() -> impl Strategy<Value = Quat<f64>> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("non-degenerate", |(w, x, y, z)| w * w + x * x + y * y + z * z > 0.01)
        .prop_map(|(w, x, y, z)| {
            let n = (w * w + x * x + y * y + z * z).sqrt();
            Quat::new(w / n, x / n, y / n, z / n)
        })
}

fn vec3(r: f64) -> impl Strategy<Value = Vec3<f64>> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn sample_parts() -> impl Strategy<Value = (Vec3<f64>, Quat<f64>, Vec3<f64>, [f64; 4], Vec3<f64>)> {
    (
        vec3(1e4),
        unit_quat(),
        vec3(50.0),
        [0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0],
        (1e-3f64..10.0, 1e-3f64..10.0, 1e-3f64..10.0).prop_map(|(x, y, z)| Vec3::new(x, y, z)),
    )
}

fn samples(max: usize) -> impl Strategy<Value = Vec<StateSample<f64>>> {
    prop::collection::vec((1e-6f64..5.0, sample_parts()), 1..max).prop_map(|rows| {
        let mut t = -3.0;
        rows.into_iter()
            .map(|(dt, (p, q, v, c, s))| {
                t += dt;
                StateSample { t, p, q, v, c: ColorRGBA::from_array(c), s }
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn state_csv_round_trip_is_bit_exact(rows in samples(40)) {
        let text = write_state_csv(&rows);
        let (back, warnings) = parse_state_csv::<f64>(&text, "rt.csv").unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(&back, &rows);
        prop_assert_eq!(write_state_csv(&back), text);
    }

    #[test]
    fn static_csv_round_trip_is_bit_exact(parts in prop::collection::vec((sample_parts(), 0usize..6), 0..20)) {
        let objs: Vec<_> = parts
            .into_iter()
            .map(|((p, q, _, c, s), k)| StaticObjectSpec { p, q, c: ColorRGBA::from_array(c), s, obj: GlyphKind::ALL[k] })
            .collect();
        let text = write_static_csv(&objs);
        let (back, _) = parse_static_csv::<f64>(&text, "s.csv").unwrap();
        prop_assert_eq!(back, objs);
    }

    #[test]
    fn f32_round_trip_is_bit_exact(rows in samples(20)) {
        let rows32: Vec<StateSample<f32>> = rows
            .iter()
            .map(|s| StateSample { t: s.t as f32, p: s.p.cast(), q: s.q.cast(), v: s.v.cast(), c: s.c.cast(), s: s.s.cast() })
            .collect();
        let text = write_state_csv(&rows32);
        let (back, _) = parse_state_csv::<f32>(&text, "f.csv").unwrap();
        // casting can collapse neighbouring times; those inputs are rejected, never mangled
        for (a, b) in back.iter().zip(&rows32) {
            prop_assert_eq!(a.t.to_bits(), b.t.to_bits());
            prop_assert_eq!(a.p, b.p);
        }
    }

    #[test]
    fn mangled_rows_never_panic(rows in samples(8), line in 0usize..10, col in 0usize..200, junk in "[-,.eE0-9a-z#\\x00-\\x7f]{0,6}") {
        let text = write_state_csv(&rows);
        let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
        let idx = line % lines.len();
        let target = &mut lines[idx];
        let at = (0..=target.len()).filter(|&i| target.is_char_boundary(i)).nth(col % (target.len() + 1)).unwrap_or(0);
        target.insert_str(at, &junk);
        let mangled = lines.join("\n");
        match parse_state_csv::<f64>(&mangled, "bad.csv") {
            Ok(_) => {}
            Err(IngestError::Parse { file, line, .. }) => {
                prop_assert_eq!(file, "bad.csv");
                prop_assert!(line >= 1 && line <= lines.len());
            }
            Err(e) => prop_assert!(false, "unexpected error kind {e}"),
        }
    }
}

/// Textbook recursive Ramer–Douglas–Peucker.
fn rdp_reference(points: &[Vec3<f64>], eps: f64) -> Vec<usize> {
    fn rec(points: &[Vec3<f64>], first: usize, last: usize, eps: f64, out: &mut Vec<usize>) {
        let mut dmax = -1.0;
        let mut index = first;
        for i in first + 1..last {
            let d = point_segment_distance(points[i], points[first], points[last]);
            if d > dmax {
                dmax = d;
                index = i;
            }
        }
        if last > first + 1 && dmax > eps {
            rec(points, first, index, eps, out);
            rec(points, index, last, eps, out);
        } else {
            out.push(last);
        }
    }
    let mut out = vec![0];
    rec(points, 0, points.len() - 1, eps, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rdp_matches_recursive_reference(
        pts in prop::collection::vec(vec3(10.0), 2..50),
        eps in prop_oneof![Just(0.0), 0.0f64..5.0],
    ) {
        let kept = rdp(&pts, eps).unwrap();
        prop_assert_eq!(&kept, &rdp_reference(&pts, eps));
        for w in kept.windows(2) {
            for i in w[0] + 1..w[1] {
                prop_assert!(point_segment_distance(pts[i], pts[w[0]], pts[w[1]]) <= eps);
            }
        }
    }

    #[test]
    fn rdp_on_integer_grid_with_ties(pts in prop::collection::vec((-3i32..3, -3i32..3, 0i32..2), 2..30), eps in 0u8..3) {
        let pts: Vec<_> = pts.into_iter().map(|(x, y, z)| Vec3::new(x as f64, y as f64, z as f64)).collect();
        prop_assert_eq!(rdp(&pts, eps as f64).unwrap(), rdp_reference(&pts, eps as f64));
    }

    #[test]
    fn slerp_angle_is_proportional(q0 in unit_quat(), q1 in unit_quat(), u in 0.0f64..=1.0) {
        let total = q0.angle_to(q1);
        let q = slerp(q0, q1, u);
        prop_assert!((q.norm() - 1.0).abs() < 1e-12);
        if total < 3.1 {
            prop_assert!((q0.angle_to(q) - u * total).abs() < 1e-6);
            prop_assert!((q.angle_to(q1) - (1.0 - u) * total).abs() < 1e-6);
        }
    }

    #[test]
    fn advance_is_frame_rate_independent(t in 0.0f64..10.0, rate in -3.0f64..3.0, dt in 0.0f64..2.0, n in 1usize..20) {
        let clock = PlaybackClock { t, rate, looping: false, t_range: [0.0, 10.0] };
        let once = advance(clock, dt);
        let raw = t + rate * dt;
        if (0.0..=10.0).contains(&raw) {
            let stepped = (0..n).fold(clock, |c, _| advance(c, dt / n as f64));
            prop_assert!((stepped.t - once.t).abs() < 1e-9);
        }
        let lp = PlaybackClock { looping: true, ..clock };
        let stepped = (0..n).fold(lp, |c, _| advance(c, dt / n as f64));
        let direct = advance(lp, dt);
        let d = (stepped.t - direct.t).abs();
        prop_assert!(d < 1e-9 || (d - 10.0).abs() < 1e-9);
    }

    #[test]
    fn knots_are_reproduced_exactly(rows in samples(30), pick in any::<prop::sample::Index>()) {
        let tr = Trajectory::new("x", TrajectoryKind::Dynamic, rows.clone()).unwrap();
        let k = &rows[pick.index(rows.len())];
        let s = sample_trajectory(&tr, k.t);
        prop_assert!(s.visible);
        prop_assert_eq!((s.p, s.q, s.v, s.c, s.s), (k.p, k.q, k.v, k.c, k.s));
        prop_assert!(!sample_trajectory(&tr, rows[0].t - 1.0).visible);
        prop_assert!(!sample_trajectory(&tr, rows[rows.len() - 1].t + 1.0).visible);
    }

    #[test]
    fn look_at_is_orthonormal(eye in vec3(100.0), target in vec3(100.0)) {
        prop_assume!(eye.distance(target) > 1e-6);
        let v = look_at(eye, target, Vec3::unit_z()).unwrap();
        let r = v.linear();
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - expected).abs() < 1e-9);
            }
        }
        let cam = CameraMatrices::look(eye, target, 0.9, 0.01, 1e4, (640, 480)).unwrap();
        let c = project(target, &cam);
        prop_assert!((c.x - 320.0).abs() < 1e-6 && (c.y - 240.0).abs() < 1e-6);
    }

    #[test]
    fn bundle_round_trip(rows in samples(30)) {
        let tr = Trajectory::new("a", TrajectoryKind::Vehicle, rows).unwrap();
        let scene = Scene::new(vec![tr], vec![], SceneConfig::default()).unwrap();
        let b = serialize_bundle(&scene);
        prop_assert_eq!(serialize_bundle(&scene), b.clone());
        let back: Scene<f64> = deserialize_bundle(&b.manifest, &b.blob).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() <= 6e-8 * a.abs().max(b.abs());
        for (a, b) in scene.trajectories[0].samples.iter().zip(&back.trajectories[0].samples) {
            prop_assert!(rel(a.t, b.t));
            for (x, y) in a.p.to_array().into_iter().zip(b.p.to_array()) {
                prop_assert!(rel(x, y));
            }
            prop_assert!(a.q.angle_to(b.q) < 1e-6);
        }
    }
}
