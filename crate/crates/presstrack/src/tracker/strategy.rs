//! Association strategies behind a common trait, registered by name.
//!
//! A strategy decides which box a live track is compared against on the
//! current frame, how geometric similarity between boxes is scored, and how
//! per-track motion state evolves. The tracker core is strategy-agnostic:
//! it multiplies geometric similarity by detection confidence, gates, and
//! solves the assignment.

use crate::geometry::BBox;
use crate::tracker::{Detection, TrackError, TrackRecord};

pub trait AssociationStrategy: Send {
    fn name(&self) -> &'static str;

    /// Called once per frame before association, with all live tracks.
    /// Motion-model strategies advance their predictions here.
    fn begin_frame(&mut self, tracks: &[TrackRecord]);

    /// The box this track is compared against on the current frame.
    fn assoc_box(&self, track: &TrackRecord) -> BBox;

    /// Geometric similarity between an association box and a detection box,
    /// in [0, 1].
    fn geometric_similarity(&self, assoc: &BBox, det: &BBox) -> f64;

    /// A new track was created from a detection.
    fn on_spawn(&mut self, track: &TrackRecord);

    /// A track was matched to a detection this frame.
    fn on_match(&mut self, track: &TrackRecord, det: &Detection);

    /// The box a track should carry while unmatched this frame.
    fn coast_box(&self, track: &TrackRecord) -> BBox;

    /// A track left the tracker for good.
    fn on_remove(&mut self, id: u32);
}

pub struct StrategyEntry {
    pub name: &'static str,
    pub build: fn() -> Box<dyn AssociationStrategy>,
}

/// All registered strategies. `uoe` is the default; `ioukalman` is the
/// IoU-plus-constant-velocity baseline.
pub static STRATEGIES: &[StrategyEntry] = &[
    StrategyEntry { name: "uoe", build: || Box::new(super::uoe::UoeStrategy) },
    StrategyEntry { name: "ioukalman", build: || Box::new(super::kalman::IoUKalmanStrategy::new()) },
];

pub fn strategy_names() -> Vec<&'static str> {
    STRATEGIES.iter().map(|e| e.name).collect()
}

pub fn create_strategy(name: &str) -> Result<Box<dyn AssociationStrategy>, TrackError> {
    STRATEGIES
        .iter()
        .find(|e| e.name == name)
        .map(|e| (e.build)())
        .ok_or_else(|| TrackError::UnknownStrategy {
            name: name.to_string(),
            known: strategy_names().join(", "),
        })
}
