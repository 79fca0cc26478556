//! Polyline simplification, decimation and chunking for large trajectories.
//!
//! Only rendered line geometry goes through these; animation sampling always
//! uses the full-resolution data.

use thiserror::Error;

use crate::geom::Vec3;
use crate::real::Real;

/// Chunk size that keeps every chunk addressable with 16-bit indices.
pub const DEFAULT_CHUNK_POINTS: usize = 65_535;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplifyError {
    #[error("polyline simplification needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("epsilon must be a finite value ≥ 0")]
    InvalidEpsilon,
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance<T: Real>(p: Vec3<T>, a: Vec3<T>, b: Vec3<T>) -> T {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == T::zero() {
        return p.distance(a);
    }
    let u = ((p - a).dot(d) / len2).max(T::zero()).min(T::one());
    p.distance(a + d * u)
}

/// Ramer–Douglas–Peucker simplification returning kept indices.
///
/// Endpoints are always kept; among equally distant candidates the lowest
/// index wins. Uses an explicit stack, so input length is not bounded by
/// recursion depth.
pub fn rdp<T: Real>(points: &[Vec3<T>], epsilon: T) -> Result<Vec<usize>, SimplifyError> {
    if points.len() < 2 {
        return Err(SimplifyError::TooFewPoints(points.len()));
    }
    if !(epsilon.is_finite() && epsilon >= T::zero()) {
        return Err(SimplifyError::InvalidEpsilon);
    }
    let n = points.len();
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0usize, n - 1)];
    while let Some((first, last)) = stack.pop() {
        if last <= first + 1 {
            continue;
        }
        let (a, b) = (points[first], points[last]);
        let mut best = (first, T::neg_infinity());
        for (i, &p) in points.iter().enumerate().take(last).skip(first + 1) {
            let d = point_segment_distance(p, a, b);
            if d > best.1 {
                best = (i, d);
            }
        }
        if best.1 > epsilon {
            keep[best.0] = true;
            stack.push((best.0, last));
            stack.push((first, best.0));
        }
    }
    Ok(keep.iter().enumerate().filter_map(|(i, &k)| k.then_some(i)).collect())
}

/// `max_points` evenly spaced indices of `0..n_points` (all of them when `n ≤ max`).
///
/// # Panics
/// If `max_points < 2`.
pub fn uniform_decimate(n_points: usize, max_points: usize) -> Vec<usize> {
    assert!(max_points >= 2, "max_points must be ≥ 2");
    if n_points <= max_points {
        return (0..n_points).collect();
    }
    let span = (n_points - 1) as u128;
    let steps = (max_points - 1) as u128;
    (0..max_points).map(|i| (i as u128 * span / steps) as usize).collect()
}

/// Splits `0..n_points` into inclusive ranges of at most `max_points_per_chunk`
/// points; consecutive ranges share their boundary index.
///
/// # Panics
/// If `max_points_per_chunk < 2`.
pub fn chunk(n_points: usize, max_points_per_chunk: usize) -> Vec<(usize, usize)> {
    assert!(max_points_per_chunk >= 2, "chunk size must be ≥ 2");
    match n_points {
        0 => Vec::new(),
        1 => vec![(0, 0)],
        _ => {
            let mut out = Vec::new();
            let mut start = 0;
            while start < n_points - 1 {
                let end = (start + max_points_per_chunk - 1).min(n_points - 1);
                out.push((start, end));
                start = end;
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(point_segment_distance(v(0.0, 1.0, 0.0), v(-1.0, 0.0, 0.0), v(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(point_segment_distance(v(2.0, 0.0, 0.0), v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(point_segment_distance(v(3.0, 4.0, 0.0), Vec3::zero(), Vec3::zero()), 5.0);
    }

    #[test]
    fn rdp_examples() {
        let line = [v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(2.0, 0.0, 0.0)];
        assert_eq!(rdp(&line, 0.1).unwrap(), vec![0, 2]);
        let tent = [v(0.0, 0.0, 0.0), v(1.0, 1.0, 0.0), v(2.0, 0.0, 0.0)];
        assert_eq!(rdp(&tent, 0.5).unwrap(), vec![0, 1, 2]);
        assert_eq!(rdp(&[v(0.0, 0.0, 0.0)], 0.1), Err(SimplifyError::TooFewPoints(1)));
        assert_eq!(rdp(&line, -1.0), Err(SimplifyError::InvalidEpsilon));
    }

    #[test]
    fn rdp_tie_keeps_lowest_index() {
        let pts = [v(0.0, 0.0, 0.0), v(1.0, 1.0, 0.0), v(2.0, 1.0, 0.0), v(3.0, 0.0, 0.0)];
        // both interior points sit at distance 1 from the chord; only index 1 is split first
        assert_eq!(rdp(&pts, 0.9).unwrap()[1], 1);
    }

    #[test]
    fn decimate_examples() {
        assert_eq!(uniform_decimate(5, 10), vec![0, 1, 2, 3, 4]);
        assert_eq!(uniform_decimate(5, 2), vec![0, 4]);
        assert_eq!(uniform_decimate(1001, 3), vec![0, 500, 1000]);
        let d = uniform_decimate(1_000_000, 777);
        assert_eq!(d.len(), 777);
        assert!(d.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*d.last().unwrap(), 999_999);
    }

    #[test]
    fn chunk_examples() {
        assert_eq!(chunk(10, 4), vec![(0, 3), (3, 6), (6, 9)]);
        assert_eq!(chunk(3, 100), vec![(0, 2)]);
        assert_eq!(chunk(1, 4), vec![(0, 0)]);
        assert!(chunk(0, 4).is_empty());
    }

    #[test]
    fn million_point_chunking_covers_everything() {
        let n = 1_000_000;
        let ranges = chunk(n, DEFAULT_CHUNK_POINTS);
        assert_eq!(ranges.len(), 16);
        let mut seen = vec![0u8; n];
        for &(s, e) in &ranges {
            assert!(e - s < DEFAULT_CHUNK_POINTS);
            for c in &mut seen[s..=e] {
                *c += 1;
            }
        }
        let boundaries: Vec<usize> = ranges.iter().skip(1).map(|r| r.0).collect();
        for (i, &c) in seen.iter().enumerate() {
            let expected = if boundaries.contains(&i) { 2 } else { 1 };
            assert_eq!(c, expected, "index {i}");
        }
    }

    #[test]
    fn rdp_survives_a_million_points() {
        // zig-zag of tiny amplitude worst case: every point kept, deep split tree
        let pts: Vec<_> = (0..1_000_000)
            .map(|i| {
                let x = i as f64 * 1e-3;
                v(x, (x * 7.0).sin(), if i % 2 == 0 { 0.0 } else { 1e-3 })
            })
            .collect();
        let kept = rdp(&pts, 1e-2).unwrap();
        assert_eq!((kept[0], *kept.last().unwrap()), (0, pts.len() - 1));
    }

    proptest! {
        #[test]
        fn chunk_reassembles(n in 0usize..5000, max in 2usize..300) {
            let ranges = chunk(n, max);
            let mut rebuilt = Vec::new();
            for (k, &(s, e)) in ranges.iter().enumerate() {
                prop_assert!(e + 1 - s <= max);
                let from = if k == 0 { s } else { s + 1 };
                rebuilt.extend(from..=e);
            }
            prop_assert_eq!(rebuilt, (0..n).collect::<Vec<_>>());
        }

        #[test]
        fn decimate_properties(n in 0usize..100_000, max in 2usize..500) {
            let d = uniform_decimate(n, max);
            prop_assert_eq!(d.len(), n.min(max));
            prop_assert!(d.windows(2).all(|w| w[0] < w[1]));
            if n > 0 {
                prop_assert_eq!((d[0], *d.last().unwrap()), (0, n - 1));
            }
        }

        #[test]
        fn larger_epsilon_never_keeps_more(
            pts in prop::collection::vec(prop::array::uniform3(-10.0f64..10.0), 2..60),
            e1 in 0.0f64..3.0,
            e2 in 0.0f64..3.0,
        ) {
            let pts: Vec<_> = pts.into_iter().map(Vec3::from_array).collect();
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(rdp(&pts, hi).unwrap().len() <= rdp(&pts, lo).unwrap().len());
        }
    }
}
