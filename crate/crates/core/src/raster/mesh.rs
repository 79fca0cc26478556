//! Canonical low-poly glyph meshes, unit-sized and centered on the origin.
//!
//! Triangles are wound so their right-hand normal points outward (disks face +Z).

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::OnceLock;

use crate::geom::Vec3;
use crate::model::GlyphKind;

const SEGMENTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct GlyphMesh {
    pub vertices: Vec<Vec3<f64>>,
    pub triangles: Vec<[u32; 3]>,
}

impl GlyphMesh {
    fn empty() -> Self {
        Self { vertices: Vec::new(), triangles: Vec::new() }
    }

    /// Appends a convex part, orienting each triangle away from `center`.
    fn append_convex(&mut self, vertices: Vec<Vec3<f64>>, triangles: &[[u32; 3]], center: Vec3<f64>) {
        let base = self.vertices.len() as u32;
        for &[a, b, c] in triangles {
            let (pa, pb, pc) = (vertices[a as usize], vertices[b as usize], vertices[c as usize]);
            let n = (pb - pa).cross(pc - pa);
            let outward = (pa + pb + pc) / 3.0 - center;
            let tri = if n.dot(outward) < 0.0 { [a, c, b] } else { [a, b, c] };
            self.triangles.push(tri.map(|i| i + base));
        }
        self.vertices.extend(vertices);
    }

    fn append_cuboid(&mut self, min: Vec3<f64>, max: Vec3<f64>) {
        let vertices: Vec<_> = (0..8)
            .map(|i| {
                Vec3::new(
                    if i & 1 == 0 { min.x } else { max.x },
                    if i & 2 == 0 { min.y } else { max.y },
                    if i & 4 == 0 { min.z } else { max.z },
                )
            })
            .collect();
        const QUADS: [[u32; 4]; 6] = [[0, 1, 3, 2], [4, 5, 7, 6], [0, 1, 5, 4], [2, 3, 7, 6], [0, 2, 6, 4], [1, 3, 7, 5]];
        let tris: Vec<[u32; 3]> = QUADS.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect();
        self.append_convex(vertices, &tris, (min + max) * 0.5);
    }

    fn append_disk(&mut self, center: Vec3<f64>, radius: f64) {
        let mut vertices = vec![center];
        vertices.extend(ring(center, radius));
        let base = self.vertices.len() as u32;
        for i in 0..SEGMENTS as u32 {
            let j = (i + 1) % SEGMENTS as u32;
            // counter-clockwise seen from +Z
            self.triangles.push([base, base + 1 + i, base + 1 + j]);
        }
        self.vertices.extend(vertices);
    }
}

fn ring(center: Vec3<f64>, radius: f64) -> impl Iterator<Item = Vec3<f64>> {
    (0..SEGMENTS).map(move |i| {
        let a = TAU * i as f64 / SEGMENTS as f64;
        center + Vec3::new(radius * a.cos(), radius * a.sin(), 0.0)
    })
}

fn cube() -> GlyphMesh {
    let mut m = GlyphMesh::empty();
    m.append_cuboid(Vec3::splat(-0.5), Vec3::splat(0.5));
    m
}

fn icosphere() -> GlyphMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let base = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ];
    let on_sphere = |v: Vec3<f64>| v.normalized().expect("non-zero") * 0.5;
    let mut vertices: Vec<Vec3<f64>> = base.iter().map(|&(x, y, z)| on_sphere(Vec3::new(x, y, z))).collect();
    let faces: [[u32; 3]; 20] = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let mut midpoints: HashMap<(u32, u32), u32> = HashMap::new();
    let mut midpoint = |a: u32, b: u32, vertices: &mut Vec<Vec3<f64>>| {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            vertices.push(on_sphere((vertices[a as usize] + vertices[b as usize]) * 0.5));
            (vertices.len() - 1) as u32
        })
    };
    let mut tris = Vec::with_capacity(80);
    for [a, b, c] in faces {
        let ab = midpoint(a, b, &mut vertices);
        let bc = midpoint(b, c, &mut vertices);
        let ca = midpoint(c, a, &mut vertices);
        tris.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
    }
    let mut m = GlyphMesh::empty();
    m.append_convex(vertices, &tris, Vec3::zero());
    m
}

fn cylinder() -> GlyphMesh {
    let n = SEGMENTS as u32;
    let mut vertices: Vec<_> = ring(Vec3::new(0.0, 0.0, -0.5), 0.5).collect();
    vertices.extend(ring(Vec3::new(0.0, 0.0, 0.5), 0.5));
    vertices.push(Vec3::new(0.0, 0.0, -0.5));
    vertices.push(Vec3::new(0.0, 0.0, 0.5));
    let (bottom_c, top_c) = (2 * n, 2 * n + 1);
    let mut tris = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        tris.push([i, j, n + j]);
        tris.push([i, n + j, n + i]);
        tris.push([bottom_c, i, j]);
        tris.push([top_c, n + i, n + j]);
    }
    let mut m = GlyphMesh::empty();
    m.append_convex(vertices, &tris, Vec3::zero());
    m
}

fn cone() -> GlyphMesh {
    let n = SEGMENTS as u32;
    let mut vertices: Vec<_> = ring(Vec3::new(0.0, 0.0, -0.5), 0.5).collect();
    vertices.push(Vec3::new(0.0, 0.0, 0.5));
    vertices.push(Vec3::new(0.0, 0.0, -0.5));
    let (apex, base_c) = (n, n + 1);
    let mut tris = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        tris.push([i, j, apex]);
        tris.push([base_c, i, j]);
    }
    let mut m = GlyphMesh::empty();
    // centroid of a cone lies a quarter of the height above the base
    m.append_convex(vertices, &tris, Vec3::new(0.0, 0.0, -0.25));
    m
}

/// Square frame in the XY plane; its opening faces local ±Z.
fn gate() -> GlyphMesh {
    let (o, i) = (0.5, 0.4);
    let mut m = GlyphMesh::empty();
    m.append_cuboid(Vec3::new(-o, i, -0.5), Vec3::new(o, o, 0.5));
    m.append_cuboid(Vec3::new(-o, -o, -0.5), Vec3::new(o, -i, 0.5));
    m.append_cuboid(Vec3::new(-o, -i, -0.5), Vec3::new(-i, i, 0.5));
    m.append_cuboid(Vec3::new(i, -i, -0.5), Vec3::new(o, i, 0.5));
    m
}

/// Plus-configuration quadrotor: body, four arms and four rotor disks.
fn quadrotor() -> GlyphMesh {
    let mut m = GlyphMesh::empty();
    m.append_cuboid(Vec3::new(-0.15, -0.15, -0.05), Vec3::new(0.15, 0.15, 0.05));
    m.append_cuboid(Vec3::new(0.15, -0.025, -0.02), Vec3::new(0.4, 0.025, 0.02));
    m.append_cuboid(Vec3::new(-0.4, -0.025, -0.02), Vec3::new(-0.15, 0.025, 0.02));
    m.append_cuboid(Vec3::new(-0.025, 0.15, -0.02), Vec3::new(0.025, 0.4, 0.02));
    m.append_cuboid(Vec3::new(-0.025, -0.4, -0.02), Vec3::new(0.025, -0.15, 0.02));
    for (x, y) in [(0.4, 0.0), (-0.4, 0.0), (0.0, 0.4), (0.0, -0.4)] {
        m.append_disk(Vec3::new(x, y, 0.05), 0.1);
    }
    m
}

/// Shared mesh for a glyph kind.
pub fn glyph_mesh(kind: GlyphKind) -> &'static GlyphMesh {
    static MESHES: OnceLock<[GlyphMesh; 6]> = OnceLock::new();
    let meshes = MESHES.get_or_init(|| GlyphKind::ALL.map(build));
    &meshes[GlyphKind::ALL.iter().position(|&k| k == kind).expect("closed set")]
}

fn build(kind: GlyphKind) -> GlyphMesh {
    match kind {
        GlyphKind::Sphere => icosphere(),
        GlyphKind::Cube => cube(),
        GlyphKind::Cylinder => cylinder(),
        GlyphKind::Cone => cone(),
        GlyphKind::Gate => gate(),
        GlyphKind::Quadrotor => quadrotor(),
    }
}
