//! Streaming footprint association engine.
//!
//! Per frame: build a gated cost matrix between live tracks and detections,
//! solve the assignment, then update the track lifecycle: matched tracks
//! stay `Active`, unmatched tracks coast as `Lost` for up to `max_lost`
//! frames, confident unmatched detections spawn new tracks. A tracker
//! instance is a sequential state machine; step calls must arrive in frame
//! order.

pub mod crops;
pub mod kalman;
pub mod strategy;
pub mod uoe;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crops::{extract_crop, extract_crops, Crop, CropWarning, CROP_SIZE};
pub use kalman::{cv_predict, KalmanState};
pub use strategy::{create_strategy, strategy_names, AssociationStrategy};

use crate::assign::{solve, CostMatrix};
use crate::geometry::BBox;

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("unknown strategy '{name}' (known: {known})")]
    UnknownStrategy { name: String, known: String },
    #[error("non-monotonic frame index: stepped {got} after {last}")]
    NonMonotonicFrame { last: u32, got: u32 },
    #[error("detection carries frame {got} but the tracker is stepping frame {expected}")]
    DetectionFrameMismatch { expected: u32, got: u32 },
    #[error("invalid tracker config: {0}")]
    InvalidConfig(String),
    #[error("track {track_id} frame {frame}: box lies entirely outside the mat")]
    EmptyCrop { track_id: u32, frame: u32 },
    #[error("track output references frame {frame} missing from the pressure sequence")]
    MissingFrame { frame: u32 },
}

/// A detector output: one box with a confidence score on one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub frame: u32,
    pub bbox: BBox,
    pub conf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackState {
    Active,
    Lost,
    Removed,
}

/// A tracked footprint with persistent identity.
#[derive(Debug, Clone)]
pub struct TrackRecord {
    pub id: u32,
    /// Last associated box (or the strategy's coasted box while lost).
    pub bbox: BBox,
    pub state: TrackState,
    pub lost_frames: u32,
    /// (frame, box) pairs for every association, strictly increasing frames.
    pub history: Vec<(u32, BBox)>,
}

/// Tracker parameters. `strategy` selects a registered association strategy
/// by name (`uoe` or `ioukalman`).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerConfig {
    pub strategy: String,
    /// Pairs with similarity x confidence below this are infeasible.
    pub match_threshold: f64,
    /// Unmatched detections below this confidence are dropped outright.
    pub conf_discard: f64,
    /// Unmatched detections at or above this confidence spawn new tracks;
    /// mid-confidence ones are dropped rather than queued.
    pub conf_spawn: f64,
    /// Frames a track may stay lost before removal.
    pub max_lost: u32,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            strategy: "uoe".to_string(),
            match_threshold: 0.3,
            conf_discard: 0.1,
            conf_spawn: 0.6,
            max_lost: 30,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), TrackError> {
        if !(self.match_threshold > 0.0 && self.match_threshold < 1.0) {
            return Err(TrackError::InvalidConfig(format!(
                "tracker.match_threshold must be in (0, 1), got {}",
                self.match_threshold
            )));
        }
        for (key, v) in [("tracker.conf_discard", self.conf_discard), ("tracker.conf_spawn", self.conf_spawn)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(TrackError::InvalidConfig(format!("{key} must be in [0, 1], got {v}")));
            }
        }
        if self.conf_discard > self.conf_spawn {
            return Err(TrackError::InvalidConfig(format!(
                "tracker.conf_discard ({}) must not exceed tracker.conf_spawn ({})",
                self.conf_discard, self.conf_spawn
            )));
        }
        strategy::create_strategy(&self.strategy)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackEvent {
    Spawned { frame: u32, id: u32 },
    Lost { frame: u32, id: u32 },
    Reactivated { frame: u32, id: u32 },
    Removed { frame: u32, id: u32 },
}

/// One emitted row: an active track's box on one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOutput {
    pub frame: u32,
    pub id: u32,
    pub bbox: BBox,
    pub conf: f64,
}

#[derive(Debug, Default)]
pub struct StepResult {
    /// Active tracks this frame, in track creation order.
    pub emitted: Vec<TrackOutput>,
    pub events: Vec<TrackEvent>,
}

pub struct Tracker {
    cfg: TrackerConfig,
    strategy: Box<dyn AssociationStrategy>,
    tracks: Vec<TrackRecord>,
    next_id: u32,
    last_frame: Option<u32>,
}

impl Tracker {
    pub fn new(cfg: TrackerConfig) -> Result<Self, TrackError> {
        cfg.validate()?;
        let strategy = strategy::create_strategy(&cfg.strategy)?;
        Ok(Self { cfg, strategy, tracks: Vec::new(), next_id: 1, last_frame: None })
    }

    /// Live (non-removed) tracks in creation order.
    pub fn tracks(&self) -> &[TrackRecord] {
        &self.tracks
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.cfg
    }

    /// The gated cost matrix for the current live tracks against `dets`:
    /// cost = 1 - similarity x confidence, infeasible below the match
    /// threshold. Exposed for inspection; `step` builds the same matrix.
    pub fn build_cost(&self, dets: &[Detection]) -> CostMatrix {
        let mut costs = CostMatrix::new(self.tracks.len(), dets.len());
        for (i, track) in self.tracks.iter().enumerate() {
            let assoc = self.strategy.assoc_box(track);
            for (j, det) in dets.iter().enumerate() {
                let sim = self.strategy.geometric_similarity(&assoc, &det.bbox) * det.conf;
                if sim >= self.cfg.match_threshold {
                    costs.set(i, j, 1.0 - sim);
                }
            }
        }
        costs
    }

    /// Advances the tracker by one frame. Frames must be strictly increasing.
    pub fn step(&mut self, frame: u32, dets: &[Detection]) -> Result<StepResult, TrackError> {
        if let Some(last) = self.last_frame {
            if frame <= last {
                return Err(TrackError::NonMonotonicFrame { last, got: frame });
            }
        }
        self.last_frame = Some(frame);
        for det in dets {
            if det.frame != frame {
                return Err(TrackError::DetectionFrameMismatch { expected: frame, got: det.frame });
            }
        }

        self.strategy.begin_frame(&self.tracks);
        let costs = self.build_cost(dets);
        let assignment = solve(&costs);

        let mut result = StepResult::default();
        let mut matched_det = vec![false; dets.len()];

        for &(ti, dj) in &assignment.matches {
            let det = &dets[dj];
            matched_det[dj] = true;
            let track = &mut self.tracks[ti];
            if track.state == TrackState::Lost {
                result.events.push(TrackEvent::Reactivated { frame, id: track.id });
            }
            track.bbox = det.bbox;
            track.state = TrackState::Active;
            track.lost_frames = 0;
            track.history.push((frame, det.bbox));
            self.strategy.on_match(track, det);
            result.emitted.push(TrackOutput { frame, id: track.id, bbox: det.bbox, conf: det.conf });
        }

        for &ti in &assignment.unmatched_rows {
            let track = &mut self.tracks[ti];
            if track.state == TrackState::Active {
                result.events.push(TrackEvent::Lost { frame, id: track.id });
            }
            track.state = TrackState::Lost;
            track.lost_frames += 1;
            if track.lost_frames > self.cfg.max_lost {
                track.state = TrackState::Removed;
                result.events.push(TrackEvent::Removed { frame, id: track.id });
            } else {
                track.bbox = self.strategy.coast_box(track);
            }
        }
        for t in &self.tracks {
            if t.state == TrackState::Removed {
                self.strategy.on_remove(t.id);
            }
        }
        self.tracks.retain(|t| t.state != TrackState::Removed);

        for (dj, det) in dets.iter().enumerate() {
            if matched_det[dj] || det.conf < self.cfg.conf_spawn {
                // below conf_spawn: dropped, whether under conf_discard or in
                // the mid band (single-stage policy, no holding queue)
                continue;
            }
            let id = self.next_id;
            self.next_id += 1;
            let track = TrackRecord {
                id,
                bbox: det.bbox,
                state: TrackState::Active,
                lost_frames: 0,
                history: vec![(frame, det.bbox)],
            };
            self.strategy.on_spawn(&track);
            self.tracks.push(track);
            result.events.push(TrackEvent::Spawned { frame, id });
            result.emitted.push(TrackOutput { frame, id, bbox: det.bbox, conf: det.conf });
        }

        // creation order, independent of match order
        result.emitted.sort_by_key(|o| o.id);
        Ok(result)
    }
}

/// Batch driver: groups detections by frame, steps every frame index from 1
/// to the maximum seen (empty frames age tracks), and concatenates the
/// per-frame active outputs.
pub fn run(
    dets: &[Detection],
    cfg: &TrackerConfig,
) -> Result<(Vec<TrackOutput>, Vec<TrackEvent>), TrackError> {
    let mut tracker = Tracker::new(cfg.clone())?;
    let max_frame = dets.iter().map(|d| d.frame).max().unwrap_or(0);
    let mut by_frame: Vec<Vec<Detection>> = vec![Vec::new(); max_frame as usize];
    for d in dets {
        if d.frame == 0 {
            return Err(TrackError::DetectionFrameMismatch { expected: 1, got: 0 });
        }
        by_frame[(d.frame - 1) as usize].push(*d);
    }
    let mut rows = Vec::new();
    let mut events = Vec::new();
    for (idx, frame_dets) in by_frame.iter().enumerate() {
        let step = tracker.step(idx as u32 + 1, frame_dets)?;
        rows.extend(step.emitted);
        events.extend(step.events);
    }
    Ok((rows, events))
}
