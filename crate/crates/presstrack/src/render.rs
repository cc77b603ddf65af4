//! Frame visualization: pressure as grayscale heat with per-id colored
//! track boxes. Plain PNG files, one per frame.

use image::{Rgb, RgbImage};

use crate::geometry::BBox;
use crate::labelgen::PressureFrame;

/// Fixed palette head; later ids walk the hue circle by the golden angle,
/// so any id maps to the same color in every frame and every run.
const PALETTE: [[u8; 3]; 12] = [
    [230, 57, 70],
    [46, 196, 182],
    [255, 183, 3],
    [58, 134, 255],
    [131, 56, 236],
    [6, 214, 160],
    [251, 86, 7],
    [255, 0, 110],
    [141, 153, 174],
    [244, 140, 6],
    [67, 170, 139],
    [144, 190, 109],
];

pub fn id_color(id: u32) -> [u8; 3] {
    if let Some(c) = PALETTE.get(id as usize % PALETTE.len()) {
        if id as usize / PALETTE.len() == 0 {
            return *c;
        }
    }
    // hue walk for ids beyond the fixed table
    let hue = (id as f64 * 137.507_764) % 360.0;
    hsv_to_rgb(hue, 0.85, 0.95)
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let m = v - c;
    let (r, g, b) = match (h / 60.0) as u32 % 6 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [
        ((r + m) * 255.0).round() as u8,
        ((g + m) * 255.0).round() as u8,
        ((b + m) * 255.0).round() as u8,
    ]
}

/// Renders one frame at `scale` pixels per cell with box outlines.
pub fn render_frame(
    frame: &PressureFrame,
    boxes: &[(u32, BBox)],
    scale: u32,
    full_scale: f64,
) -> RgbImage {
    let scale = scale.max(1);
    let (w, h) = (frame.width as u32 * scale, frame.height as u32 * scale);
    let mut img = RgbImage::from_pixel(w, h, Rgb([12, 12, 16]));

    for &(r, c, v) in frame.cells() {
        let level = ((v / full_scale).clamp(0.0, 1.0).sqrt() * 255.0) as u8;
        let px = Rgb([level, level, level.saturating_add(12)]);
        for dy in 0..scale {
            for dx in 0..scale {
                img.put_pixel(c as u32 * scale + dx, r as u32 * scale + dy, px);
            }
        }
    }

    for &(id, bbox) in boxes {
        draw_box(&mut img, &bbox, scale, Rgb(id_color(id)));
    }
    img
}

fn draw_box(img: &mut RgbImage, bbox: &BBox, scale: u32, color: Rgb<u8>) {
    let (iw, ih) = (img.width() as i64, img.height() as i64);
    let x0 = (bbox.x * scale as f64).round() as i64;
    let y0 = (bbox.y * scale as f64).round() as i64;
    let x1 = (bbox.right() * scale as f64).round() as i64 - 1;
    let y1 = (bbox.bottom() * scale as f64).round() as i64 - 1;
    let t = scale as i64; // outline thickness tracks the scale
    let mut put = |x: i64, y: i64| {
        if x >= 0 && y >= 0 && x < iw && y < ih {
            img.put_pixel(x as u32, y as u32, color);
        }
    };
    for x in x0..=x1 {
        for k in 0..t {
            put(x, y0 + k);
            put(x, y1 - k);
        }
    }
    for y in y0..=y1 {
        for k in 0..t {
            put(x0 + k, y);
            put(x1 - k, y);
        }
    }
}
