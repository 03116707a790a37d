//! Low-level pixel operations over a [`RasterImage`].
//!
//! All coordinates here are signed: callers may position content anywhere
//! and every write is clipped to the canvas. Blending is fixed-point
//! integer math so results are identical across platforms.

use crate::assets::DecodedImage;
use crate::model::{Color, RasterImage};

pub struct Painter<'a> {
    image: &'a mut RasterImage,
}

impl<'a> Painter<'a> {
    pub fn new(image: &'a mut RasterImage) -> Self {
        Self { image }
    }

    pub fn width(&self) -> u32 {
        self.image.width
    }

    pub fn height(&self) -> u32 {
        self.image.height
    }

    /// Source-over blend with `(x*255 + 127) / 255` rounding. `coverage`
    /// scales the source alpha (anti-aliasing weight).
    pub fn blend_pixel(&mut self, x: i64, y: i64, color: Color, coverage: u8) {
        if x < 0 || y < 0 || x >= self.image.width as i64 || y >= self.image.height as i64 {
            return;
        }
        let alpha = (color.a as u32 * coverage as u32 + 127) / 255;
        if alpha == 0 {
            return;
        }
        let (x, y) = (x as u32, y as u32);
        let dst = self.image.get(x, y);
        let blend = |s: u8, d: u8| -> u8 {
            ((s as u32 * alpha + d as u32 * (255 - alpha) + 127) / 255) as u8
        };
        let out = Color {
            r: blend(color.r, dst.r),
            g: blend(color.g, dst.g),
            b: blend(color.b, dst.b),
            a: (alpha + dst.a as u32 * (255 - alpha) / 255).min(255) as u8,
        };
        self.image.put(x, y, out);
    }

    /// Opaque-or-blended rectangle fill, clipped to the canvas.
    pub fn fill_rect(&mut self, x: i64, y: i64, w: u32, h: u32, color: Color) {
        let x0 = x.max(0);
        let y0 = y.max(0);
        let x1 = x.saturating_add(w as i64).min(self.image.width as i64);
        let y1 = y.saturating_add(h as i64).min(self.image.height as i64);
        if x0 >= x1 || y0 >= y1 {
            return;
        }
        if color.a == 255 {
            for py in y0..y1 {
                for px in x0..x1 {
                    self.image.put(px as u32, py as u32, color);
                }
            }
        } else {
            for py in y0..y1 {
                for px in x0..x1 {
                    self.blend_pixel(px, py, color, 255);
                }
            }
        }
    }

    /// Alpha-blends a decoded image at its natural size.
    pub fn blit(&mut self, source: &DecodedImage, x: i64, y: i64) {
        let x0 = x.max(0);
        let y0 = y.max(0);
        let x1 = x
            .saturating_add(source.width as i64)
            .min(self.image.width as i64);
        let y1 = y
            .saturating_add(source.height as i64)
            .min(self.image.height as i64);
        for py in y0..y1 {
            for px in x0..x1 {
                let sx = (px - x) as usize;
                let sy = (py - y) as usize;
                let i = (sy * source.width as usize + sx) * 4;
                let color = Color::rgba(
                    source.rgba[i],
                    source.rgba[i + 1],
                    source.rgba[i + 2],
                    source.rgba[i + 3],
                );
                self.blend_pixel(px, py, color, 255);
            }
        }
    }

    /// Stretches `source` to `w x h` with bilinear filtering and blends
    /// it at `(x, y)`. Sampling happens per visible destination pixel, so
    /// oversized targets cost no more than the clipped area.
    pub fn blit_scaled(&mut self, source: &DecodedImage, x: i64, y: i64, w: u32, h: u32) {
        if w == 0 || h == 0 || source.width == 0 || source.height == 0 {
            return;
        }
        if w == source.width && h == source.height {
            self.blit(source, x, y);
            return;
        }
        let x0 = x.max(0);
        let y0 = y.max(0);
        let x1 = x.saturating_add(w as i64).min(self.image.width as i64);
        let y1 = y.saturating_add(h as i64).min(self.image.height as i64);
        for py in y0..y1 {
            for px in x0..x1 {
                let color = sample_bilinear(source, (px - x) as u32, (py - y) as u32, w, h);
                self.blend_pixel(px, py, color, 255);
            }
        }
    }

    /// Tiles `source` at natural size from the rect origin, clipped to
    /// both the rect and the canvas.
    pub fn tile(&mut self, source: &DecodedImage, x: i64, y: i64, w: u32, h: u32) {
        if source.width == 0 || source.height == 0 {
            return;
        }
        let x0 = x.max(0);
        let y0 = y.max(0);
        let x1 = x.saturating_add(w as i64).min(self.image.width as i64);
        let y1 = y.saturating_add(h as i64).min(self.image.height as i64);
        for py in y0..y1 {
            for px in x0..x1 {
                let sx = ((px - x) % source.width as i64) as usize;
                let sy = ((py - y) % source.height as i64) as usize;
                let i = (sy * source.width as usize + sx) * 4;
                let color = Color::rgba(
                    source.rgba[i],
                    source.rgba[i + 1],
                    source.rgba[i + 2],
                    source.rgba[i + 3],
                );
                self.blend_pixel(px, py, color, 255);
            }
        }
    }
}

/// Bilinear rescale into a new buffer (picturegraph icons need the
/// scaled alpha mask for tinting).
pub fn scale_image(source: &DecodedImage, w: u32, h: u32) -> DecodedImage {
    if w == source.width && h == source.height {
        return source.clone();
    }
    let mut rgba = Vec::with_capacity(w as usize * h as usize * 4);
    for dy in 0..h {
        for dx in 0..w {
            let c = sample_bilinear(source, dx, dy, w, h);
            rgba.extend_from_slice(&[c.r, c.g, c.b, c.a]);
        }
    }
    DecodedImage {
        width: w,
        height: h,
        rgba,
    }
}

/// Bilinear sample of `source` for destination pixel `(dx, dy)` in a
/// `dst_w x dst_h` stretch. Pixel centers map to pixel centers; edge
/// samples clamp.
fn sample_bilinear(source: &DecodedImage, dx: u32, dy: u32, dst_w: u32, dst_h: u32) -> Color {
    let u = (dx as f64 + 0.5) * source.width as f64 / dst_w as f64 - 0.5;
    let v = (dy as f64 + 0.5) * source.height as f64 / dst_h as f64 - 0.5;
    let u0 = u.floor();
    let v0 = v.floor();
    let fu = u - u0;
    let fv = v - v0;
    let clamp_x = |ix: i64| ix.clamp(0, source.width as i64 - 1) as usize;
    let clamp_y = |iy: i64| iy.clamp(0, source.height as i64 - 1) as usize;
    let at = |ix: usize, iy: usize| -> [f64; 4] {
        let i = (iy * source.width as usize + ix) * 4;
        [
            source.rgba[i] as f64,
            source.rgba[i + 1] as f64,
            source.rgba[i + 2] as f64,
            source.rgba[i + 3] as f64,
        ]
    };
    let p00 = at(clamp_x(u0 as i64), clamp_y(v0 as i64));
    let p10 = at(clamp_x(u0 as i64 + 1), clamp_y(v0 as i64));
    let p01 = at(clamp_x(u0 as i64), clamp_y(v0 as i64 + 1));
    let p11 = at(clamp_x(u0 as i64 + 1), clamp_y(v0 as i64 + 1));
    let mut out = [0u8; 4];
    for (c, slot) in out.iter_mut().enumerate() {
        let top = p00[c] * (1.0 - fu) + p10[c] * fu;
        let bottom = p01[c] * (1.0 - fu) + p11[c] * fu;
        *slot = (top * (1.0 - fv) + bottom * fv + 0.5)
            .floor()
            .clamp(0.0, 255.0) as u8;
    }
    Color::rgba(out[0], out[1], out[2], out[3])
}
