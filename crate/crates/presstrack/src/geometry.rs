//! Axis-aligned box algebra in mat-cell coordinates.
//!
//! Boxes are stored as (left, top, width, height) real values so sub-cell
//! detections survive untouched. Intersection follows the closed-rectangle
//! convention: boxes touching along an edge have intersection area 0.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("cannot merge an empty list of boxes")]
    EmptyMerge,
}

/// A 2-D point in mat coordinates (`x` along columns, `y` along rows, y down).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle in mat-cell coordinates.
///
/// `x` is the left edge (column axis), `y` the top edge (row axis).
/// Width and height must be positive and all fields finite; boxes may
/// extend beyond the mat boundary; clipping is a consumer decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite(), "box origin must be finite");
        debug_assert!(w > 0.0 && w.is_finite(), "box width must be positive");
        debug_assert!(h > 0.0 && h.is_finite(), "box height must be positive");
        Self { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> Point {
        Point::new(self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    /// Whether `other` lies inside this box, up to rounding slack on the far
    /// edges (the width/height encoding cannot always represent an exact
    /// right/bottom edge).
    pub fn contains(&self, other: &BBox) -> bool {
        const EPS: f64 = 1e-9;
        self.x <= other.x + EPS
            && self.y <= other.y + EPS
            && self.right() >= other.right() - EPS
            && self.bottom() >= other.bottom() - EPS
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.x >= self.x && p.x <= self.right() && p.y >= self.y && p.y <= self.bottom()
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let iw = (self.right().min(other.right()) - self.x.max(other.x)).max(0.0);
        let ih = (self.bottom().min(other.bottom()) - self.y.max(other.y)).max(0.0);
        iw * ih
    }

    /// Area recomputed from edge coordinates. Identical to `area()` up to
    /// rounding; similarity ratios use this form so that equal boxes cancel
    /// exactly and self-similarity is 1 bit-for-bit.
    fn edge_area(&self) -> f64 {
        (self.right() - self.x) * (self.bottom() - self.y)
    }

    pub fn union_area(&self, other: &BBox) -> f64 {
        self.edge_area() + other.edge_area() - self.intersection_area(other)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> BBox {
        BBox::new(self.x + dx, self.y + dy, self.w, self.h)
    }
}

/// Intersection over union; 0 for disjoint boxes, 1 for identical ones.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter <= 0.0 {
        return 0.0;
    }
    (inter / a.union_area(b)).min(1.0)
}

/// Minimum axis-aligned rectangle enclosing both boxes.
pub fn enclosure(a: &BBox, b: &BBox) -> BBox {
    let x = a.x.min(b.x);
    let y = a.y.min(b.y);
    BBox::new(x, y, a.right().max(b.right()) - x, a.bottom().max(b.bottom()) - y)
}

/// Union area over the area of the minimum enclosing rectangle.
///
/// Always in (0, 1]; equals 1 exactly when the union tiles the enclosure,
/// which includes identical boxes and zero-gap adjacent boxes. Unlike IoU it
/// stays informative when one box abruptly grows or shrinks around the other,
/// which is the normal behavior of footprint boxes across gait phases.
pub fn uoe(a: &BBox, b: &BBox) -> f64 {
    let ew = a.right().max(b.right()) - a.x.min(b.x);
    let eh = a.bottom().max(b.bottom()) - a.y.min(b.y);
    (a.union_area(b) / (ew * eh)).min(1.0)
}

/// Minimum bounding rectangle of all input boxes.
pub fn merge_boxes(boxes: &[BBox]) -> Result<BBox, GeometryError> {
    let first = boxes.first().ok_or(GeometryError::EmptyMerge)?;
    let mut x0 = first.x;
    let mut y0 = first.y;
    let mut x1 = first.right();
    let mut y1 = first.bottom();
    for b in &boxes[1..] {
        x0 = x0.min(b.x);
        y0 = y0.min(b.y);
        x1 = x1.max(b.right());
        y1 = y1.max(b.bottom());
    }
    Ok(BBox::new(x0, y0, x1 - x0, y1 - y0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(x: f64, y: f64, w: f64, h: f64) -> BBox {
        BBox::new(x, y, w, h)
    }

    #[test]
    fn iou_identity() {
        assert_eq!(iou(&b(0.0, 0.0, 4.0, 4.0), &b(0.0, 0.0, 4.0, 4.0)), 1.0);
    }

    #[test]
    fn iou_disjoint() {
        assert_eq!(iou(&b(0.0, 0.0, 2.0, 2.0), &b(8.0, 0.0, 2.0, 2.0)), 0.0);
    }

    #[test]
    fn iou_partial_overlap() {
        // intersection 1, union 4 + 4 - 1 = 7
        let v = iou(&b(0.0, 0.0, 2.0, 2.0), &b(1.0, 1.0, 2.0, 2.0));
        assert!((v - 1.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn enclosure_identity() {
        assert_eq!(
            enclosure(&b(0.0, 0.0, 4.0, 4.0), &b(0.0, 0.0, 4.0, 4.0)),
            b(0.0, 0.0, 4.0, 4.0)
        );
    }

    #[test]
    fn enclosure_horizontal_and_vertical() {
        assert_eq!(
            enclosure(&b(0.0, 0.0, 2.0, 2.0), &b(8.0, 0.0, 2.0, 2.0)),
            b(0.0, 0.0, 10.0, 2.0)
        );
        assert_eq!(
            enclosure(&b(0.0, 0.0, 2.0, 2.0), &b(0.0, 4.0, 2.0, 2.0)),
            b(0.0, 0.0, 2.0, 6.0)
        );
    }

    #[test]
    fn enclosure_of_contained_box_is_outer() {
        let outer = b(0.0, 0.0, 10.0, 10.0);
        let inner = b(2.0, 3.0, 1.0, 1.0);
        assert_eq!(enclosure(&outer, &inner), outer);
        assert_eq!(enclosure(&inner, &outer), outer);
    }

    #[test]
    fn uoe_identity() {
        assert_eq!(uoe(&b(0.0, 0.0, 4.0, 4.0), &b(0.0, 0.0, 4.0, 4.0)), 1.0);
    }

    #[test]
    fn uoe_disjoint_horizontal() {
        // union 8, enclosure 10 x 2 = 20
        let v = uoe(&b(0.0, 0.0, 2.0, 2.0), &b(8.0, 0.0, 2.0, 2.0));
        assert!((v - 0.4).abs() < 1e-12);
    }

    #[test]
    fn uoe_adjacent_boxes_tile_enclosure() {
        assert_eq!(uoe(&b(0.0, 0.0, 4.0, 2.0), &b(0.0, 2.0, 4.0, 2.0)), 1.0);
    }

    #[test]
    fn uoe_vertical_gap() {
        // union 8, enclosure 2 x 6 = 12
        let v = uoe(&b(0.0, 0.0, 2.0, 2.0), &b(0.0, 4.0, 2.0, 2.0));
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn merge_single_is_identity() {
        assert_eq!(merge_boxes(&[b(3.0, 5.0, 2.0, 2.0)]).unwrap(), b(3.0, 5.0, 2.0, 2.0));
    }

    #[test]
    fn merge_bounds() {
        assert_eq!(
            merge_boxes(&[b(0.0, 0.0, 2.0, 2.0), b(8.0, 6.0, 2.0, 2.0)]).unwrap(),
            b(0.0, 0.0, 10.0, 8.0)
        );
        assert_eq!(
            merge_boxes(&[
                b(0.0, 0.0, 2.0, 2.0),
                b(1.0, 1.0, 2.0, 2.0),
                b(0.0, 3.0, 1.0, 1.0)
            ])
            .unwrap(),
            b(0.0, 0.0, 3.0, 4.0)
        );
    }

    #[test]
    fn merge_empty_is_error() {
        assert_eq!(merge_boxes(&[]), Err(GeometryError::EmptyMerge));
    }

    fn arb_box() -> impl Strategy<Value = BBox> {
        (
            -50.0f64..50.0,
            -50.0f64..50.0,
            0.1f64..40.0,
            0.1f64..40.0,
        )
            .prop_map(|(x, y, w, h)| BBox::new(x, y, w, h))
    }

    proptest! {
        #[test]
        fn similarity_symmetry_and_range(a in arb_box(), bx in arb_box()) {
            prop_assert_eq!(uoe(&a, &bx), uoe(&bx, &a));
            prop_assert_eq!(iou(&a, &bx), iou(&bx, &a));
            let u = uoe(&a, &bx);
            let i = iou(&a, &bx);
            prop_assert!(u > 0.0 && u <= 1.0);
            prop_assert!((0.0..=1.0).contains(&i));
            prop_assert!(i <= u + 1e-12);
        }

        #[test]
        fn self_similarity_is_one(a in arb_box()) {
            prop_assert_eq!(uoe(&a, &a), 1.0);
            prop_assert_eq!(iou(&a, &a), 1.0);
        }

        #[test]
        fn translation_invariance(a in arb_box(), bx in arb_box(),
                                  dx in -100.0f64..100.0, dy in -100.0f64..100.0) {
            let (ta, tb) = (a.translated(dx, dy), bx.translated(dx, dy));
            prop_assert!((uoe(&a, &bx) - uoe(&ta, &tb)).abs() < 1e-12);
            prop_assert!((iou(&a, &bx) - iou(&ta, &tb)).abs() < 1e-12);
        }

        #[test]
        fn enclosure_contains_both(a in arb_box(), bx in arb_box()) {
            let e = enclosure(&a, &bx);
            prop_assert!(e.contains(&a));
            prop_assert!(e.contains(&bx));
        }

        #[test]
        fn merge_is_permutation_invariant(mut boxes in proptest::collection::vec(arb_box(), 1..8)) {
            let forward = merge_boxes(&boxes).unwrap();
            boxes.reverse();
            let backward = merge_boxes(&boxes).unwrap();
            prop_assert_eq!(forward, backward);
            for b in &boxes {
                prop_assert!(forward.contains(b));
            }
        }
    }
}
