//! Deterministic headless software renderer.
//!
//! Lines use an integer DDA walk, triangles a fixed-point (1/256 px)
//! edge-function rasterizer with the top-left fill rule. Depth is NDC z
//! remapped to `[0, 1]` and tested less-than; opaque fragments at equal depth
//! resolve by comparing color bytes so the result does not depend on draw order.

mod mesh;
mod png;
mod svg;

pub use self::png::encode_png;
pub use mesh::{glyph_mesh, GlyphMesh};
pub use svg::export_svg;

use crate::camera::CameraMatrices;
use crate::compile::RenderBatch;
use crate::geom::Vec3;
use crate::model::ColorRGBA;

/// Fixed light direction, before normalization.
pub const LIGHT_DIR: [f64; 3] = [1.0, 1.0, 1.0];
const AMBIENT: f64 = 0.35;
const DIFFUSE: f64 = 0.65;
const SUBPIXEL: f64 = 256.0;

/// RGBA8 color plus f32 depth, row-major with a top-left origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Framebuffer {
    pub width: u32,
    pub height: u32,
    pub color: Vec<u8>,
    pub depth: Vec<f32>,
}

pub fn to_rgba8(c: ColorRGBA<f64>) -> [u8; 4] {
    c.to_array().map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
}

impl Framebuffer {
    pub fn new(width: u32, height: u32, background: ColorRGBA<f64>) -> Self {
        let n = width as usize * height as usize;
        let bg = to_rgba8(background);
        Self { width, height, color: bg.repeat(n), depth: vec![f32::INFINITY; n] }
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 4] {
        let i = 4 * (y as usize * self.width as usize + x as usize);
        [self.color[i], self.color[i + 1], self.color[i + 2], self.color[i + 3]]
    }

    /// Writes one fragment. Opaque fragments z-test and write depth; translucent
    /// ones z-test and blend source-over without touching depth.
    fn plot(&mut self, x: i64, y: i64, depth: f64, rgba: [f64; 4]) {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return;
        }
        if !(0.0..=1.0).contains(&depth) {
            return;
        }
        let idx = y as usize * self.width as usize + x as usize;
        let d = depth as f32;
        let cur = self.depth[idx];
        let px = &mut self.color[4 * idx..4 * idx + 4];
        let alpha = rgba[3].clamp(0.0, 1.0);
        if alpha >= 1.0 {
            let src = to_rgba8(ColorRGBA::from_array(rgba));
            if d < cur || (d == cur && src.as_slice() > &*px) {
                px.copy_from_slice(&src);
                self.depth[idx] = d;
            }
        } else if d < cur && alpha > 0.0 {
            for k in 0..3 {
                let dst = px[k] as f64 / 255.0;
                px[k] = ((rgba[k].clamp(0.0, 1.0) * alpha + dst * (1.0 - alpha)) * 255.0).round() as u8;
            }
            let dst_a = px[3] as f64 / 255.0;
            px[3] = ((alpha + dst_a * (1.0 - alpha)) * 255.0).round() as u8;
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct ScreenVertex {
    x: f64,
    y: f64,
    depth: f64,
    color: [f64; 4],
}

fn lerp4(a: [f64; 4], b: [f64; 4], u: f64) -> [f64; 4] {
    [0, 1, 2, 3].map(|k| a[k] + (b[k] - a[k]) * u)
}

fn to_screen(cam: &CameraMatrices<f64>, c: Vec3<f64>, color: [f64; 4]) -> ScreenVertex {
    let p = cam.camera_to_screen(c);
    ScreenVertex { x: p.x, y: p.y, depth: (p.depth + 1.0) * 0.5, color }
}

/// Liang–Barsky: parameter interval of the segment inside the rectangle.
fn clip_segment_2d(a: (f64, f64), b: (f64, f64), min: (f64, f64), max: (f64, f64)) -> Option<(f64, f64)> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let mut u0 = 0.0f64;
    let mut u1 = 1.0f64;
    for (p, q) in [(-dx, a.0 - min.0), (dx, max.0 - a.0), (-dy, a.1 - min.1), (dy, max.1 - a.1)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                u0 = u0.max(r);
            } else {
                u1 = u1.min(r);
            }
        }
    }
    (u0 <= u1).then_some((u0, u1))
}

fn draw_line_screen(fb: &mut Framebuffer, a: ScreenVertex, b: ScreenVertex, width_px: f64, skip_first: bool) {
    let w = width_px.round().max(1.0) as i64;
    let margin = w as f64 + 2.0;
    let Some((u0, u1)) = clip_segment_2d(
        (a.x, a.y),
        (b.x, b.y),
        (-margin, -margin),
        (fb.width as f64 + margin, fb.height as f64 + margin),
    ) else {
        return;
    };
    let at = |u: f64| ScreenVertex {
        x: a.x + (b.x - a.x) * u,
        y: a.y + (b.y - a.y) * u,
        depth: a.depth + (b.depth - a.depth) * u,
        color: lerp4(a.color, b.color, u),
    };
    let skip_first = skip_first && u0 == 0.0;
    let (a, b) = (at(u0), at(u1));
    let (x0, y0) = (a.x.floor() as i64, a.y.floor() as i64);
    let (x1, y1) = (b.x.floor() as i64, b.y.floor() as i64);
    let (dx, dy) = (x1 - x0, y1 - y0);
    let steps = dx.abs().max(dy.abs());
    let x_major = dx.abs() >= dy.abs();
    let offsets = -(w - 1) / 2..=w / 2;
    for i in 0..=steps {
        if i == 0 && skip_first {
            continue;
        }
        let u = if steps == 0 { 0.0 } else { i as f64 / steps as f64 };
        let (x, y) = if steps == 0 {
            (x0, y0)
        } else {
            (x0 + (dx * i + steps / 2 * dx.signum()) / steps, y0 + (dy * i + steps / 2 * dy.signum()) / steps)
        };
        let depth = a.depth + (b.depth - a.depth) * u;
        let color = lerp4(a.color, b.color, u);
        for k in offsets.clone() {
            if x_major {
                fb.plot(x, y + k, depth, color);
            } else {
                fb.plot(x + k, y, depth, color);
            }
        }
    }
}

/// Clips a camera-space segment against the near plane.
fn clip_near_segment(
    mut a: Vec3<f64>,
    mut b: Vec3<f64>,
    mut ca: [f64; 4],
    mut cb: [f64; 4],
    near: f64,
) -> Option<(Vec3<f64>, Vec3<f64>, [f64; 4], [f64; 4])> {
    let limit = -near;
    let (ina, inb) = (a.z <= limit, b.z <= limit);
    if !ina && !inb {
        return None;
    }
    if !ina || !inb {
        let u = (limit - a.z) / (b.z - a.z);
        let p = a.lerp(b, u);
        let c = lerp4(ca, cb, u);
        if ina {
            b = Vec3::new(p.x, p.y, limit);
            cb = c;
        } else {
            a = Vec3::new(p.x, p.y, limit);
            ca = c;
        }
    }
    Some((a, b, ca, cb))
}

fn draw_segment(
    fb: &mut Framebuffer,
    p0: Vec3<f64>,
    p1: Vec3<f64>,
    c0: ColorRGBA<f64>,
    c1: ColorRGBA<f64>,
    cam: &CameraMatrices<f64>,
    width_px: f64,
    skip_first: bool,
) {
    let (a, b) = (cam.to_camera(p0), cam.to_camera(p1));
    let Some((a, b, ca, cb)) = clip_near_segment(a, b, c0.to_array(), c1.to_array(), cam.near) else {
        return;
    };
    let clipped_start = a != cam.to_camera(p0);
    draw_line_screen(fb, to_screen(cam, a, ca), to_screen(cam, b, cb), width_px, skip_first && !clipped_start);
}

/// Draws a depth-tested 3D line segment with interpolated color.
pub fn draw_line_3d(
    fb: &mut Framebuffer,
    p0: Vec3<f64>,
    p1: Vec3<f64>,
    c0: ColorRGBA<f64>,
    c1: ColorRGBA<f64>,
    cam: &CameraMatrices<f64>,
    width_px: f64,
) {
    draw_segment(fb, p0, p1, c0, c1, cam, width_px, false);
}

/// Draws a polyline; interior joints are visited once.
pub fn draw_polyline(fb: &mut Framebuffer, vertices: &[Vec3<f64>], colors: &[ColorRGBA<f64>], cam: &CameraMatrices<f64>, width_px: f64) {
    match vertices.len() {
        0 => {}
        1 => draw_segment(fb, vertices[0], vertices[0], colors[0], colors[0], cam, width_px, false),
        _ => {
            for i in 0..vertices.len() - 1 {
                draw_segment(fb, vertices[i], vertices[i + 1], colors[i], colors[i + 1], cam, width_px, i > 0);
            }
        }
    }
}

pub fn shade_factor(a: Vec3<f64>, b: Vec3<f64>, c: Vec3<f64>) -> Option<f64> {
    let n = (b - a).cross(c - a).normalized()?;
    let light = Vec3::from_array(LIGHT_DIR).normalized().expect("non-zero");
    Some(AMBIENT + DIFFUSE * n.dot(light).max(0.0))
}

/// Near-plane clipping of a camera-space triangle; returns 0–2 triangles.
fn clip_near_triangle(tri: [(Vec3<f64>, [f64; 4]); 3], near: f64) -> Vec<[(Vec3<f64>, [f64; 4]); 3]> {
    let limit = -near;
    let mut poly: Vec<(Vec3<f64>, [f64; 4])> = Vec::with_capacity(4);
    for i in 0..3 {
        let (a, ca) = tri[i];
        let (b, cb) = tri[(i + 1) % 3];
        let (ina, inb) = (a.z <= limit, b.z <= limit);
        if ina {
            poly.push((a, ca));
        }
        if ina != inb {
            let u = (limit - a.z) / (b.z - a.z);
            let p = a.lerp(b, u);
            poly.push((Vec3::new(p.x, p.y, limit), lerp4(ca, cb, u)));
        }
    }
    (1..poly.len().saturating_sub(1)).map(|i| [poly[0], poly[i], poly[i + 1]]).collect()
}

fn edge(a: (i128, i128), b: (i128, i128), p: (i128, i128)) -> i128 {
    (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)
}

fn is_top_left(a: (i128, i128), b: (i128, i128)) -> bool {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    dy < 0 || (dy == 0 && dx > 0)
}

/// Pixels whose centers a screen-space triangle covers, with their
/// barycentric weights. Shared edges between adjacent triangles are owned by
/// exactly one of them.
pub fn triangle_coverage(v: [(f64, f64); 3], width: u32, height: u32, mut f: impl FnMut(i64, i64, [f64; 3])) {
    let fix = |x: f64| (x * SUBPIXEL).round().clamp(-1e30, 1e30) as i128;
    let mut p = v.map(|(x, y)| (fix(x), fix(y)));
    let mut order = [0usize, 1, 2];
    let mut area = edge(p[0], p[1], p[2]);
    if area == 0 {
        return;
    }
    if area < 0 {
        p.swap(1, 2);
        order.swap(1, 2);
        area = -area;
    }
    let sub = SUBPIXEL as i128;
    let lo = |k: fn(&(i128, i128)) -> i128| p.iter().map(k).min().expect("3 vertices");
    let hi = |k: fn(&(i128, i128)) -> i128| p.iter().map(k).max().expect("3 vertices");
    let x_min = (lo(|q| q.0).div_euclid(sub)).max(0);
    let x_max = (hi(|q| q.0).div_euclid(sub)).min(width as i128 - 1);
    let y_min = (lo(|q| q.1).div_euclid(sub)).max(0);
    let y_max = (hi(|q| q.1).div_euclid(sub)).min(height as i128 - 1);
    let edges = [(p[1], p[2]), (p[2], p[0]), (p[0], p[1])];
    let bias = edges.map(|(a, b)| if is_top_left(a, b) { 0 } else { -1 });
    for y in y_min..=y_max {
        for x in x_min..=x_max {
            let c = (x * sub + sub / 2, y * sub + sub / 2);
            let w = [edge(edges[0].0, edges[0].1, c), edge(edges[1].0, edges[1].1, c), edge(edges[2].0, edges[2].1, c)];
            if (0..3).all(|k| w[k] + bias[k] >= 0) {
                let mut bary = [0.0; 3];
                for k in 0..3 {
                    bary[order[k]] = w[k] as f64 / area as f64;
                }
                f(x as i64, y as i64, bary);
            }
        }
    }
}

/// Draws a depth-tested triangle. With `flat_normal_shade` the color is
/// scaled by `0.35 + 0.65·max(0, n·L)` using the world-space face normal.
pub fn draw_triangle(
    fb: &mut Framebuffer,
    verts: [(Vec3<f64>, ColorRGBA<f64>); 3],
    cam: &CameraMatrices<f64>,
    flat_normal_shade: bool,
) {
    let shade = if flat_normal_shade {
        match shade_factor(verts[0].0, verts[1].0, verts[2].0) {
            Some(s) => s,
            None => return,
        }
    } else {
        1.0
    };
    let cam_tri = verts.map(|(p, c)| {
        let mut rgba = c.to_array();
        for ch in &mut rgba[..3] {
            *ch *= shade;
        }
        (cam.to_camera(p), rgba)
    });
    for tri in clip_near_triangle(cam_tri, cam.near) {
        let s = tri.map(|(p, c)| to_screen(cam, p, c));
        let (w, h) = (fb.width, fb.height);
        triangle_coverage(s.map(|v| (v.x, v.y)), w, h, |x, y, b| {
            let depth = b[0] * s[0].depth + b[1] * s[1].depth + b[2] * s[2].depth;
            let mut color = [0, 1, 2, 3].map(|k| b[0] * s[0].color[k] + b[1] * s[1].color[k] + b[2] * s[2].color[k]);
            // weights need not sum to exactly 1; keep a shared alpha exact
            if s[0].color[3] == s[1].color[3] && s[1].color[3] == s[2].color[3] {
                color[3] = s[0].color[3];
            }
            fb.plot(x, y, depth, color);
        });
    }
}

/// World-space triangles of every glyph instance, with their colors.
pub(crate) fn glyph_triangles(batch: &RenderBatch<f64>) -> impl Iterator<Item = ([Vec3<f64>; 3], ColorRGBA<f64>)> + '_ {
    batch.glyphs.iter().flat_map(|g| {
        let mesh = glyph_mesh(g.kind);
        mesh.triangles.iter().map(move |t| (t.map(|i| g.transform.transform_point(mesh.vertices[i as usize])), g.color))
    })
}

enum Translucent {
    Segment { p: [Vec3<f64>; 2], c: [ColorRGBA<f64>; 2], width_px: f64, skip_first: bool },
    Triangle { p: [Vec3<f64>; 3], c: ColorRGBA<f64> },
}

impl Translucent {
    /// Content bits; breaks depth ties so the draw order never depends on batch order.
    fn key(&self) -> Vec<u64> {
        let mut k = Vec::with_capacity(24);
        let mut push = |vals: &[f64]| k.extend(vals.iter().map(|v| v.to_bits()));
        match self {
            Translucent::Segment { p, c, width_px, skip_first } => {
                push(&[0.0, *width_px, if *skip_first { 1.0 } else { 0.0 }]);
                p.iter().for_each(|v| push(&v.to_array()));
                c.iter().for_each(|v| push(&v.to_array()));
            }
            Translucent::Triangle { p, c } => {
                push(&[1.0]);
                p.iter().for_each(|v| push(&v.to_array()));
                push(&c.to_array());
            }
        }
        k
    }
}

/// Renders a batch: clear, opaque glyph triangles, opaque line segments, then
/// every translucent triangle and segment back-to-front by mean camera depth.
/// The image does not depend on the order of polylines or glyphs in the batch.
pub fn render(batch: &RenderBatch<f64>, cam: &CameraMatrices<f64>, width: u32, height: u32) -> Framebuffer {
    let mut fb = Framebuffer::new(width.max(1), height.max(1), batch.background);
    let mut translucent = Vec::new();
    let mean_z = |pts: &[Vec3<f64>]| pts.iter().map(|&p| cam.to_camera(p).z).sum::<f64>() / pts.len() as f64;
    for (tri, color) in glyph_triangles(batch) {
        if color.a >= 1.0 {
            draw_triangle(&mut fb, tri.map(|p| (p, color)), cam, true);
        } else if color.a > 0.0 {
            translucent.push((mean_z(&tri), Translucent::Triangle { p: tri, c: color }));
        }
    }
    for line in &batch.polylines {
        let (v, c) = (&line.vertices, &line.colors);
        if v.len() == 1 {
            draw_polyline(&mut fb, v, c, cam, line.width_px);
            continue;
        }
        for i in 0..v.len().saturating_sub(1) {
            let skip_first = i > 0;
            if c[i].a >= 1.0 && c[i + 1].a >= 1.0 {
                draw_segment(&mut fb, v[i], v[i + 1], c[i], c[i + 1], cam, line.width_px, skip_first);
            } else {
                let seg = Translucent::Segment { p: [v[i], v[i + 1]], c: [c[i], c[i + 1]], width_px: line.width_px, skip_first };
                translucent.push((mean_z(&[v[i], v[i + 1]]), seg));
            }
        }
    }
    // camera z is negative in front: most negative is farthest
    let mut keyed: Vec<_> = translucent.into_iter().map(|(z, item)| (z, item.key(), item)).collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    for (_, _, item) in keyed {
        match item {
            Translucent::Triangle { p, c } => draw_triangle(&mut fb, p.map(|p| (p, c)), cam, true),
            Translucent::Segment { p, c, width_px, skip_first } => {
                draw_segment(&mut fb, p[0], p[1], c[0], c[1], cam, width_px, skip_first)
            }
        }
    }
    fb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::{GlyphInstance, Polyline};
    use crate::geom::{Mat4, Quat};
    use crate::model::GlyphKind;

    const BG: ColorRGBA<f64> = ColorRGBA::new(0.0, 0.0, 0.0, 1.0);

    fn cam(eye: Vec3<f64>, target: Vec3<f64>, w: u32, h: u32) -> CameraMatrices<f64> {
        CameraMatrices::look(eye, target, 60f64.to_radians(), 0.1, 100.0, (w, h)).unwrap()
    }

    fn touched(fb: &Framebuffer, bg: [u8; 4]) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for y in 0..fb.height {
            for x in 0..fb.width {
                if fb.pixel(x, y) != bg {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn sv(x: f64, y: f64) -> ScreenVertex {
        ScreenVertex { x, y, depth: 0.5, color: [1.0, 1.0, 1.0, 1.0] }
    }

    #[test]
    fn dda_horizontal_pixels() {
        let mut fb = Framebuffer::new(200, 200, BG);
        draw_line_screen(&mut fb, sv(100.0, 100.0), sv(110.0, 100.0), 1.0, false);
        let px = touched(&fb, [0, 0, 0, 255]);
        let expected: Vec<(u32, u32)> = (100..=110).map(|x| (x, 100)).collect();
        assert_eq!(px, expected);
    }

    #[test]
    fn wide_lines_offset_perpendicular() {
        let mut fb = Framebuffer::new(50, 50, BG);
        draw_line_screen(&mut fb, sv(10.0, 10.0), sv(20.0, 10.0), 3.0, false);
        let px = touched(&fb, [0, 0, 0, 255]);
        assert_eq!(px.len(), 33);
        assert!(px.iter().all(|&(_, y)| (9..=11).contains(&y)));
    }

    #[test]
    fn lines_behind_camera_write_nothing() {
        let c = cam(Vec3::new(0.0, -10.0, 0.0), Vec3::zero(), 64, 64);
        let mut fb = Framebuffer::new(64, 64, BG);
        let red = ColorRGBA::opaque_red();
        draw_line_3d(&mut fb, Vec3::new(-1.0, -12.0, 0.0), Vec3::new(1.0, -15.0, 0.0), red, red, &c, 1.0);
        assert!(touched(&fb, [0, 0, 0, 255]).is_empty());
    }

    #[test]
    fn nearer_line_wins_crossing() {
        let mut fb = Framebuffer::new(64, 64, BG);
        let far = |x, y| ScreenVertex { x, y, depth: 0.8, color: [0.0, 0.0, 1.0, 1.0] };
        let near = |x, y| ScreenVertex { x, y, depth: 0.2, color: [1.0, 0.0, 0.0, 1.0] };
        draw_line_screen(&mut fb, far(32.0, 0.0), far(32.0, 63.0), 1.0, false);
        draw_line_screen(&mut fb, near(0.0, 32.0), near(63.0, 32.0), 1.0, false);
        assert_eq!(fb.pixel(32, 32), [255, 0, 0, 255]);

        let mut fb2 = Framebuffer::new(64, 64, BG);
        draw_line_screen(&mut fb2, near(0.0, 32.0), near(63.0, 32.0), 1.0, false);
        draw_line_screen(&mut fb2, far(32.0, 0.0), far(32.0, 63.0), 1.0, false);
        assert_eq!(fb, fb2);
    }

    #[test]
    fn line_through_near_plane_is_clipped() {
        let c = cam(Vec3::new(0.0, -10.0, 0.0), Vec3::zero(), 64, 64);
        let mut fb = Framebuffer::new(64, 64, BG);
        let red = ColorRGBA::opaque_red();
        draw_line_3d(&mut fb, Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, -20.0, 0.5), red, red, &c, 1.0);
        assert!(!touched(&fb, [0, 0, 0, 255]).is_empty());
        assert!(fb.depth.iter().all(|d| d.is_infinite() || (0.0..=1.0).contains(d)));
    }

    #[test]
    fn triangle_behind_camera_is_skipped() {
        let c = cam(Vec3::new(0.0, -10.0, 0.0), Vec3::zero(), 64, 64);
        let mut fb = Framebuffer::new(64, 64, BG);
        let w = ColorRGBA::new(1.0, 1.0, 1.0, 1.0);
        draw_triangle(&mut fb, [(Vec3::new(0.0, -11.0, 0.0), w), (Vec3::new(1.0, -12.0, 0.0), w), (Vec3::new(0.0, -12.0, 1.0), w)], &c, true);
        assert!(touched(&fb, [0, 0, 0, 255]).is_empty());
    }

    #[test]
    fn face_towards_light_is_full_color() {
        // triangle with normal (1,1,1)/√3
        let (a, b, c) = (Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        assert!((shade_factor(a, b, c).unwrap() - 1.0).abs() < 1e-12);
        assert!((shade_factor(a, c, b).unwrap() - 0.35).abs() < 1e-12);
    }

    #[test]
    fn shared_edge_drawn_exactly_once() {
        let (w, h) = (64u32, 64u32);
        let mut count = vec![0u8; (w * h) as usize];
        let quad = [(3.3, 5.7), (58.1, 9.2), (50.6, 60.4), (7.9, 47.75)];
        for tri in [[quad[0], quad[1], quad[2]], [quad[0], quad[2], quad[3]]] {
            triangle_coverage(tri, w, h, |x, y, _| count[(y as u32 * w + x as u32) as usize] += 1);
        }
        assert!(count.iter().all(|&c| c <= 1), "double-drawn pixel");
        // oracle: pixel centers strictly inside the convex quad must be covered
        let inside = |px: f64, py: f64| {
            (0..4).all(|i| {
                let (a, b) = (quad[i], quad[(i + 1) % 4]);
                (b.0 - a.0) * (py - a.1) - (b.1 - a.1) * (px - a.0) > 1e-9
            })
        };
        for y in 0..h {
            for x in 0..w {
                if inside(x as f64 + 0.5, y as f64 + 0.5) {
                    assert_eq!(count[(y * w + x) as usize], 1, "gap at {x},{y}");
                }
            }
        }
    }

    fn cube_at(p: Vec3<f64>, color: ColorRGBA<f64>) -> GlyphInstance<f64> {
        GlyphInstance { kind: GlyphKind::Cube, transform: Mat4::from_trs(p, Quat::identity(), Vec3::splat(1.0)), color, trajectory: None }
    }

    #[test]
    fn empty_batch_is_background() {
        let bg = ColorRGBA::new(0.1, 0.1, 0.12, 1.0);
        let fb = render(&RenderBatch::empty(bg), &cam(Vec3::new(0.0, -5.0, 0.0), Vec3::zero(), 16, 8), 16, 8);
        assert!(fb.color.chunks(4).all(|p| p == to_rgba8(bg)));
    }

    #[test]
    fn cube_renders_centered_and_deterministic() {
        let mut batch = RenderBatch::empty(BG);
        batch.glyphs.push(cube_at(Vec3::zero(), ColorRGBA::new(0.2, 0.8, 0.2, 1.0)));
        let c = cam(Vec3::new(0.0, -5.0, 0.0), Vec3::zero(), 64, 64);
        let fb = render(&batch, &c, 64, 64);
        assert_ne!(fb.pixel(32, 32), [0, 0, 0, 255]);
        let px = touched(&fb, [0, 0, 0, 255]);
        let (xs, ys): (Vec<u32>, Vec<u32>) = px.iter().copied().unzip();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        assert!((x0 + x1).abs_diff(63) <= 1 && (y0 + y1).abs_diff(63) <= 1);
        assert_eq!(px.len() as u32, (x1 - x0 + 1) * (y1 - y0 + 1), "front face is a filled square");
        assert_eq!(render(&batch, &c, 64, 64), fb);
    }

    #[test]
    fn glyph_area_shrinks_with_distance() {
        let mut batch = RenderBatch::empty(BG);
        batch.glyphs.push(cube_at(Vec3::zero(), ColorRGBA::new(1.0, 1.0, 1.0, 1.0)));
        let areas: Vec<usize> = [3.0, 5.0, 8.0, 13.0, 21.0]
            .iter()
            .map(|&r| {
                let c = cam(Vec3::new(r * 0.6, -r * 0.8, r * 0.3), Vec3::zero(), 96, 96);
                touched(&render(&batch, &c, 96, 96), [0, 0, 0, 255]).len()
            })
            .collect();
        assert!(areas.windows(2).all(|w| w[0] > w[1]), "{areas:?}");
    }

    #[test]
    fn draw_order_does_not_matter_for_opaque() {
        let mut batch = RenderBatch::empty(BG);
        batch.glyphs.push(cube_at(Vec3::new(0.3, 0.0, 0.0), ColorRGBA::new(1.0, 0.0, 0.0, 1.0)));
        batch.glyphs.push(cube_at(Vec3::new(-0.2, 0.5, 0.1), ColorRGBA::new(0.0, 0.0, 1.0, 1.0)));
        batch.polylines.push(Polyline {
            vertices: vec![Vec3::new(-2.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.2), Vec3::new(0.0, 0.0, 2.0)],
            colors: vec![ColorRGBA::new(1.0, 1.0, 0.0, 1.0); 3],
            width_px: 2.0,
        });
        batch.polylines.push(Polyline {
            vertices: vec![Vec3::new(0.0, -2.0, -1.0), Vec3::new(0.0, 2.0, 1.0)],
            colors: vec![ColorRGBA::new(0.0, 1.0, 1.0, 1.0); 2],
            width_px: 1.0,
        });
        let c = cam(Vec3::new(3.0, -4.0, 2.0), Vec3::zero(), 80, 60);
        let a = render(&batch, &c, 80, 60);
        batch.glyphs.reverse();
        batch.polylines.reverse();
        assert_eq!(render(&batch, &c, 80, 60), a);
    }

    #[test]
    fn draw_order_does_not_matter_for_translucent() {
        let mut batch = RenderBatch::empty(BG);
        batch.glyphs.push(cube_at(Vec3::new(0.3, 0.0, 0.0), ColorRGBA::new(1.0, 0.0, 0.0, 0.5)));
        batch.glyphs.push(cube_at(Vec3::new(-0.2, 0.1, 0.1), ColorRGBA::new(0.0, 0.0, 1.0, 0.4)));
        for k in 0..3 {
            let z = k as f64 * 0.1;
            batch.polylines.push(Polyline {
                vertices: vec![Vec3::new(-2.0, 0.0, z), Vec3::new(2.0, 0.0, z), Vec3::new(0.0, 0.0, 2.0)],
                colors: vec![ColorRGBA::new(1.0, 1.0, 0.0, 0.0), ColorRGBA::new(0.0, 1.0, k as f64 / 2.0, 0.6), ColorRGBA::new(0.0, 1.0, 1.0, 1.0)],
                width_px: 3.0,
            });
        }
        let c = cam(Vec3::new(3.0, -4.0, 2.0), Vec3::zero(), 80, 60);
        let a = render(&batch, &c, 80, 60);
        assert_ne!(a.color, Framebuffer::new(80, 60, BG).color);
        batch.glyphs.reverse();
        batch.polylines.rotate_left(1);
        assert_eq!(render(&batch, &c, 80, 60), a);
    }

    #[test]
    fn tiny_viewport_and_huge_coordinates() {
        let mut batch = RenderBatch::empty(BG);
        batch.polylines.push(Polyline {
            vertices: vec![Vec3::new(-1e9, 1e3, 0.0), Vec3::new(1e9, 1e3, 0.0)],
            colors: vec![ColorRGBA::opaque_red(); 2],
            width_px: 5.0,
        });
        batch.glyphs.push(cube_at(Vec3::new(0.0, 0.2, 0.0), ColorRGBA::opaque_red()));
        let c = cam(Vec3::new(0.0, -0.5, 0.0), Vec3::new(0.0, 1.0, 0.0), 1, 1);
        let fb = render(&batch, &c, 1, 1);
        assert_eq!(fb.color.len(), 4);
    }
}
