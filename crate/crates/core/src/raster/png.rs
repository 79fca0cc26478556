use std::io;

use super::Framebuffer;

/// Encodes the color buffer as an 8-bit RGBA PNG. Settings are fixed so the
/// same framebuffer always produces the same bytes.
pub fn encode_png(fb: &Framebuffer) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = ::png::Encoder::new(&mut out, fb.width, fb.height);
        enc.set_color(::png::ColorType::Rgba);
        enc.set_depth(::png::BitDepth::Eight);
        enc.set_compression(::png::Compression::Fast);
        enc.set_filter(::png::Filter::Sub);
        let mut writer = enc.write_header().map_err(io::Error::other)?;
        writer.write_image_data(&fb.color).map_err(io::Error::other)?;
        writer.finish().map_err(io::Error::other)?;
    }
    Ok(out)
}
