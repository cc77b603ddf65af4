//! Union-over-enclosure association without motion prediction.
//!
//! The track's last associated box is compared directly against current
//! detections. Footprint boxes change size abruptly between single- and
//! double-support gait phases, but the smaller box usually stays inside the
//! larger one, so union-over-enclosure remains near 1 across those
//! transitions where IoU collapses. Lost tracks keep their last box frozen;
//! footprints reappear close to where they vanished rather than along a
//! smooth extrapolation.

use crate::geometry::{uoe, BBox};
use crate::tracker::strategy::AssociationStrategy;
use crate::tracker::{Detection, TrackRecord};

pub struct UoeStrategy;

impl AssociationStrategy for UoeStrategy {
    fn name(&self) -> &'static str {
        "uoe"
    }

    fn begin_frame(&mut self, _tracks: &[TrackRecord]) {}

    fn assoc_box(&self, track: &TrackRecord) -> BBox {
        track.bbox
    }

    fn geometric_similarity(&self, assoc: &BBox, det: &BBox) -> f64 {
        uoe(assoc, det)
    }

    fn on_spawn(&mut self, _track: &TrackRecord) {}

    fn on_match(&mut self, _track: &TrackRecord, _det: &Detection) {}

    fn coast_box(&self, track: &TrackRecord) -> BBox {
        track.bbox
    }

    fn on_remove(&mut self, _id: u32) {}
}
