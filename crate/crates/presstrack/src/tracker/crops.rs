//! Per-track crop extraction: fixed-size pressure patches around each box.
//!
//! The patch contains the pressure values inside the (clipped) box, centered
//! in a zero-padded canvas; the box center in mat coordinates travels with
//! the patch as localization info for downstream consumers.

use crate::geometry::{BBox, Point};
use crate::labelgen::PressureFrame;
use crate::tracker::{TrackError, TrackOutput};

/// Canvas side length in cells.
pub const CROP_SIZE: usize = 128;

/// A dense CROP_SIZE x CROP_SIZE pressure patch plus its mat-space center.
#[derive(Debug, Clone)]
pub struct Crop {
    pub track_id: u32,
    pub frame: u32,
    /// Row-major CROP_SIZE x CROP_SIZE values, zero outside the box.
    pub values: Vec<f64>,
    /// Box center in mat coordinates.
    pub center: Point,
}

/// A box dimension exceeded the canvas and was center-cropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CropWarning {
    pub track_id: u32,
    pub frame: u32,
    pub bbox: BBox,
}

/// Cuts one patch out of a frame. Returns the patch, the original box
/// center, and whether a center-crop was applied because the box exceeded
/// the canvas (values are never rescaled, which would corrupt pressure
/// magnitudes).
pub fn extract_crop(
    frame: &PressureFrame,
    bbox: &BBox,
) -> Result<(Vec<f64>, Point, bool), TrackError> {
    let (h, w) = (frame.height as f64, frame.width as f64);
    let x0 = bbox.x.clamp(0.0, w);
    let x1 = bbox.right().clamp(0.0, w);
    let y0 = bbox.y.clamp(0.0, h);
    let y1 = bbox.bottom().clamp(0.0, h);
    if x1 <= x0 || y1 <= y0 {
        return Err(TrackError::EmptyCrop { track_id: 0, frame: frame.frame });
    }

    let mut c0 = x0.floor() as usize;
    let mut c1 = (x1.ceil() as usize).min(frame.width);
    let mut r0 = y0.floor() as usize;
    let mut r1 = (y1.ceil() as usize).min(frame.height);

    let mut clipped = false;
    if c1 - c0 > CROP_SIZE {
        let excess = (c1 - c0) - CROP_SIZE;
        c0 += excess / 2;
        c1 = c0 + CROP_SIZE;
        clipped = true;
    }
    if r1 - r0 > CROP_SIZE {
        let excess = (r1 - r0) - CROP_SIZE;
        r0 += excess / 2;
        r1 = r0 + CROP_SIZE;
        clipped = true;
    }

    let off_c = (CROP_SIZE - (c1 - c0)) / 2;
    let off_r = (CROP_SIZE - (r1 - r0)) / 2;
    let mut values = vec![0.0; CROP_SIZE * CROP_SIZE];
    for &(r, c, v) in frame.cells() {
        let (r, c) = (r as usize, c as usize);
        if r >= r0 && r < r1 && c >= c0 && c < c1 {
            values[(r - r0 + off_r) * CROP_SIZE + (c - c0 + off_c)] = v;
        }
    }
    Ok((values, bbox.center(), clipped))
}

/// Extracts a crop for every track row, grouped by (track, frame). Frames
/// must cover every referenced frame index.
pub fn extract_crops(
    frames: &[PressureFrame],
    rows: &[TrackOutput],
) -> Result<(Vec<Crop>, Vec<CropWarning>), TrackError> {
    let mut by_frame = std::collections::BTreeMap::new();
    for f in frames {
        by_frame.insert(f.frame, f);
    }
    let mut sorted: Vec<&TrackOutput> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.id, r.frame));

    let mut crops = Vec::with_capacity(sorted.len());
    let mut warnings = Vec::new();
    for row in sorted {
        let frame = by_frame
            .get(&row.frame)
            .ok_or(TrackError::MissingFrame { frame: row.frame })?;
        let (values, center, clipped) = extract_crop(frame, &row.bbox).map_err(|e| match e {
            TrackError::EmptyCrop { frame, .. } => TrackError::EmptyCrop { track_id: row.id, frame },
            other => other,
        })?;
        if clipped {
            warnings.push(CropWarning { track_id: row.id, frame: row.frame, bbox: row.bbox });
        }
        crops.push(Crop { track_id: row.id, frame: row.frame, values, center });
    }
    Ok((crops, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame_with(cells: &[(u16, u16, f64)]) -> PressureFrame {
        PressureFrame::from_cells(1, 240, 120, cells.to_vec()).unwrap()
    }

    #[test]
    fn patch_is_centered_in_canvas() {
        // 30x20 box at (10,10): sub-grid lands at canvas (49, 54)
        let f = frame_with(&[(10, 10, 2.5), (29, 39, 1.5)]);
        let b = BBox::new(10.0, 10.0, 30.0, 20.0);
        let (values, center, clipped) = extract_crop(&f, &b).unwrap();
        assert!(!clipped);
        assert_eq!(center, Point::new(25.0, 20.0));
        assert_eq!(values[54 * CROP_SIZE + 49], 2.5); // cell (10,10) -> (54,49)
        assert_eq!(values[(54 + 19) * CROP_SIZE + 49 + 29], 1.5); // cell (29,39)
        let nonzero = values.iter().filter(|&&v| v != 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn exact_canvas_box_needs_no_padding() {
        let f = frame_with(&[(0, 0, 1.0), (127, 119, 2.0)]);
        let b = BBox::new(0.0, 0.0, 120.0, 128.0);
        let (values, _, clipped) = extract_crop(&f, &b).unwrap();
        assert!(!clipped);
        // width 120 still pads by 4 columns; height 128 is exact
        assert_eq!(values[4], 1.0);
        assert_eq!(values[127 * CROP_SIZE + 119 + 4], 2.0);
    }

    #[test]
    fn empty_pressure_inside_box_is_all_zero() {
        let f = frame_with(&[(200, 5, 3.0)]);
        let b = BBox::new(10.0, 10.0, 30.0, 20.0);
        let (values, _, _) = extract_crop(&f, &b).unwrap();
        assert!(values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn oversized_box_center_crops_with_warning() {
        let f = frame_with(&[(120, 60, 5.0)]);
        let b = BBox::new(0.0, 40.0, 120.0, 160.0); // height 160 > 128
        let (values, _, clipped) = extract_crop(&f, &b).unwrap();
        assert!(clipped);
        // rows 40..200 center-crop to 56..184; cell row 120 -> canvas row 64
        assert_eq!(values[64 * CROP_SIZE + 60 + 4], 5.0);
    }

    #[test]
    fn fully_outside_box_is_an_error() {
        let f = frame_with(&[(0, 0, 1.0)]);
        let b = BBox::new(500.0, 500.0, 10.0, 10.0);
        assert!(extract_crop(&f, &b).is_err());
    }

    #[test]
    fn crops_group_by_track_then_frame() {
        let frames = vec![
            PressureFrame::from_cells(1, 240, 120, vec![(10, 10, 1.0)]).unwrap(),
            PressureFrame::from_cells(2, 240, 120, vec![(10, 10, 1.0)]).unwrap(),
        ];
        let rows = vec![
            TrackOutput { frame: 2, id: 1, bbox: BBox::new(5.0, 5.0, 10.0, 10.0), conf: 1.0 },
            TrackOutput { frame: 1, id: 2, bbox: BBox::new(5.0, 5.0, 10.0, 10.0), conf: 1.0 },
            TrackOutput { frame: 1, id: 1, bbox: BBox::new(5.0, 5.0, 10.0, 10.0), conf: 1.0 },
        ];
        let (crops, warnings) = extract_crops(&frames, &rows).unwrap();
        assert!(warnings.is_empty());
        let order: Vec<(u32, u32)> = crops.iter().map(|c| (c.track_id, c.frame)).collect();
        assert_eq!(order, vec![(1, 1), (1, 2), (2, 1)]);
    }
}
