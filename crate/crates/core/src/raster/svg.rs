use std::fmt::Write;

use super::{glyph_triangles, shade_factor, to_rgba8};
use crate::camera::CameraMatrices;
use crate::compile::RenderBatch;
use crate::geom::Vec3;
use crate::model::ColorRGBA;

fn rgb(c: ColorRGBA<f64>) -> String {
    let [r, g, b, _] = to_rgba8(c);
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Vector export for print. Triangles and polyline segments are painted
/// back-to-front by mean camera depth; primitives crossing the near plane
/// are dropped rather than clipped.
pub fn export_svg(batch: &RenderBatch<f64>, cam: &CameraMatrices<f64>) -> String {
    let (w, h) = cam.viewport;
    enum Item {
        Tri([(f64, f64); 3], ColorRGBA<f64>),
        Seg((f64, f64), (f64, f64), ColorRGBA<f64>, f64),
    }
    let mut items: Vec<(f64, Item)> = Vec::new();
    let screen = |p: Vec3<f64>| {
        let c = cam.to_camera(p);
        (c.z < -cam.near).then(|| {
            let s = cam.camera_to_screen(c);
            ((s.x, s.y), c.z)
        })
    };
    for (tri, color) in glyph_triangles(batch) {
        let Some(shade) = shade_factor(tri[0], tri[1], tri[2]) else { continue };
        let pts: Option<Vec<_>> = tri.iter().map(|&p| screen(p)).collect();
        let Some(pts) = pts else { continue };
        let shaded = ColorRGBA::new(color.r * shade, color.g * shade, color.b * shade, color.a);
        let z = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
        items.push((z, Item::Tri([pts[0].0, pts[1].0, pts[2].0], shaded)));
    }
    for line in &batch.polylines {
        for i in 0..line.vertices.len().saturating_sub(1) {
            let (Some(a), Some(b)) = (screen(line.vertices[i]), screen(line.vertices[i + 1])) else { continue };
            let c = line.colors[i];
            items.push(((a.1 + b.1) * 0.5, Item::Seg(a.0, b.0, c, line.width_px)));
        }
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="{}"/>"#, rgb(batch.background));
    for (_, item) in items {
        match item {
            Item::Tri(p, c) => {
                let _ = writeln!(
                    out,
                    r#"<path d="M{:.2} {:.2}L{:.2} {:.2}L{:.2} {:.2}Z" fill="{}" fill-opacity="{:.3}"/>"#,
                    p[0].0, p[0].1, p[1].0, p[1].1, p[2].0, p[2].1, rgb(c), c.a
                );
            }
            Item::Seg(a, b, c, width) => {
                let _ = writeln!(
                    out,
                    r#"<path d="M{:.2} {:.2}L{:.2} {:.2}" stroke="{}" stroke-opacity="{:.3}" stroke-width="{width}" fill="none"/>"#,
                    a.0, a.1, b.0, b.1, rgb(c), c.a
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::Polyline;

    #[test]
    fn segments_become_paths() {
        let cam = CameraMatrices::look(Vec3::new(0.0, -5.0, 0.0), Vec3::zero(), 1.0, 0.1, 100.0, (100, 50)).unwrap();
        let mut batch = RenderBatch::empty(ColorRGBA::new(0.0, 0.0, 0.0, 1.0));
        batch.polylines.push(Polyline {
            vertices: vec![Vec3::new(-1.0, 0.0, 0.0), Vec3::zero(), Vec3::new(1.0, 0.0, 1.0)],
            colors: vec![ColorRGBA::opaque_red(); 3],
            width_px: 2.0,
        });
        let svg = export_svg(&batch, &cam);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("#ff0000"));
    }
}
