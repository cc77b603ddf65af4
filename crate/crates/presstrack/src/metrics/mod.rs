//! Tracking and trajectory evaluation.

pub mod clearmot;
pub mod trajectory;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clearmot::{clearmot, MotOptions, MotReport, MotRow, MotpMode};
pub use trajectory::{
    rte, segment_error, umeyama_align, AlignMode, RigidTransform2D, SegmentOptions, TrajReport,
    Trajectory, MM_PER_CELL,
};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("ground truth is empty; tracking metrics are undefined")]
    EmptyGroundTruth,
    #[error("degenerate alignment: {0}")]
    DegenerateAlignment(String),
    #[error("trajectories share only {shared} frame(s); need at least 2")]
    TrajectoryTooShort { shared: usize },
    #[error("ground-truth path length is zero")]
    ZeroPathLength,
    #[error("trajectory for person {person_id} has non-increasing frames")]
    UnorderedFrames { person_id: u32 },
}

/// Evaluation parameters (the `metrics` config section).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsConfig {
    /// Overlap gate for CLEARMOT correspondence.
    pub iou_threshold: f64,
    pub motp: MotpMode,
    /// Trajectory segment length in frames.
    pub seg_len: usize,
    /// Evaluate a trailing partial segment when it has >= 2 frames.
    pub include_partial_segments: bool,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            iou_threshold: 0.5,
            motp: MotpMode::Overlap,
            seg_len: 100,
            include_partial_segments: true,
        }
    }
}

impl MetricsConfig {
    pub fn validate(&self) -> Result<(), MetricsError> {
        if !(self.iou_threshold > 0.0 && self.iou_threshold <= 1.0) {
            return Err(MetricsError::DegenerateAlignment(format!(
                "metrics.iou_threshold must be in (0, 1], got {}",
                self.iou_threshold
            )));
        }
        if self.seg_len < 2 {
            return Err(MetricsError::DegenerateAlignment(format!(
                "metrics.seg_len must be at least 2, got {}",
                self.seg_len
            )));
        }
        Ok(())
    }

    pub fn mot_options(&self) -> MotOptions {
        MotOptions { iou_threshold: self.iou_threshold, motp: self.motp }
    }

    pub fn segment_options(&self) -> SegmentOptions {
        SegmentOptions {
            seg_len: self.seg_len,
            include_partial: self.include_partial_segments,
            mm_per_cell: MM_PER_CELL,
        }
    }
}
