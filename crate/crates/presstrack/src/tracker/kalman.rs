//! IoU-plus-Kalman baseline strategy (constant-velocity box prediction).
//!
//! State vector: (cx, cy, area, aspect, vcx, vcy, varea) with aspect = w/h
//! held constant. Measurements are (cx, cy, area, aspect) derived from
//! detection boxes. The strategy predicts every live track each frame,
//! including while lost, and scores candidates by IoU of the predicted box.

use std::collections::HashMap;

use nalgebra::{SMatrix, SVector};

use crate::geometry::{iou, BBox};
use crate::tracker::strategy::AssociationStrategy;
use crate::tracker::{Detection, TrackRecord};

const DIM: usize = 7;
const MEAS: usize = 4;
/// Smallest admissible predicted area; extrapolation clamps here.
pub const MIN_AREA: f64 = 1e-4;

type StateVec = SVector<f64, DIM>;
type StateMat = SMatrix<f64, DIM, DIM>;
type MeasVec = SVector<f64, MEAS>;
type MeasMat = SMatrix<f64, MEAS, MEAS>;
type ObsMat = SMatrix<f64, MEAS, DIM>;

fn transition() -> StateMat {
    let mut f = StateMat::identity();
    f[(0, 4)] = 1.0;
    f[(1, 5)] = 1.0;
    f[(2, 6)] = 1.0;
    f
}

fn observation() -> ObsMat {
    let mut h = ObsMat::zeros();
    for i in 0..MEAS {
        h[(i, i)] = 1.0;
    }
    h
}

fn process_noise() -> StateMat {
    StateMat::from_diagonal(&StateVec::from_row_slice(&[
        0.25, 0.25, 4.0, 1e-4, 0.25, 0.25, 4.0,
    ]))
}

fn measurement_noise() -> MeasMat {
    MeasMat::from_diagonal(&MeasVec::from_row_slice(&[0.5, 0.5, 16.0, 1e-2]))
}

fn bbox_to_measurement(b: &BBox) -> MeasVec {
    let c = b.center();
    MeasVec::from_row_slice(&[c.x, c.y, b.area(), b.w / b.h])
}

fn state_to_bbox(cx: f64, cy: f64, area: f64, aspect: f64) -> (BBox, bool) {
    let clamped = area < MIN_AREA;
    let area = area.max(MIN_AREA);
    let aspect = aspect.max(1e-6);
    let w = (area * aspect).sqrt();
    let h = (area / aspect).sqrt();
    (BBox::new(cx - w / 2.0, cy - h / 2.0, w, h), clamped)
}

/// Constant-velocity filter state over (cx, cy, area, aspect, vcx, vcy, varea).
#[derive(Debug, Clone)]
pub struct KalmanState {
    pub mean: StateVec,
    pub cov: StateMat,
}

impl KalmanState {
    /// Initializes from a first observation with zero velocity and a wide
    /// velocity prior.
    pub fn from_bbox(b: &BBox) -> Self {
        let z = bbox_to_measurement(b);
        let mut mean = StateVec::zeros();
        for i in 0..MEAS {
            mean[i] = z[i];
        }
        let cov = StateMat::from_diagonal(&StateVec::from_row_slice(&[
            4.0, 4.0, 100.0, 1e-2, 100.0, 100.0, 400.0,
        ]));
        Self { mean, cov }
    }

    /// Advances mean and covariance one frame.
    pub fn predict(&mut self) {
        let f = transition();
        self.mean = f * self.mean;
        self.cov = f * self.cov * f.transpose() + process_noise();
        // keep covariance symmetric against drift
        self.cov = (self.cov + self.cov.transpose()) * 0.5;
    }

    /// Folds in an observed box.
    pub fn update(&mut self, b: &BBox) {
        let h = observation();
        let z = bbox_to_measurement(b);
        let innovation = z - h * self.mean;
        let s = h * self.cov * h.transpose() + measurement_noise();
        let s_inv = s.try_inverse().expect("innovation covariance is invertible");
        let gain = self.cov * h.transpose() * s_inv;
        self.mean += gain * innovation;
        self.cov = (StateMat::identity() - gain * h) * self.cov;
        self.cov = (self.cov + self.cov.transpose()) * 0.5;
    }

    /// Current mean as a box.
    pub fn bbox(&self) -> BBox {
        state_to_bbox(self.mean[0], self.mean[1], self.mean[2], self.mean[3]).0
    }
}

/// Constant-velocity extrapolation of (cx, cy, area) over `steps` frames;
/// aspect held constant. The flag reports a non-positive predicted area that
/// was clamped to [`MIN_AREA`].
pub fn cv_predict(ks: &KalmanState, steps: u32) -> (BBox, bool) {
    let s = steps as f64;
    state_to_bbox(
        ks.mean[0] + s * ks.mean[4],
        ks.mean[1] + s * ks.mean[5],
        ks.mean[2] + s * ks.mean[6],
        ks.mean[3],
    )
}

pub struct IoUKalmanStrategy {
    filters: HashMap<u32, KalmanState>,
}

impl IoUKalmanStrategy {
    pub fn new() -> Self {
        Self { filters: HashMap::new() }
    }
}

impl Default for IoUKalmanStrategy {
    fn default() -> Self {
        Self::new()
    }
}

impl AssociationStrategy for IoUKalmanStrategy {
    fn name(&self) -> &'static str {
        "ioukalman"
    }

    fn begin_frame(&mut self, tracks: &[TrackRecord]) {
        for t in tracks {
            if let Some(f) = self.filters.get_mut(&t.id) {
                f.predict();
            }
        }
    }

    fn assoc_box(&self, track: &TrackRecord) -> BBox {
        self.filters.get(&track.id).map_or(track.bbox, KalmanState::bbox)
    }

    fn geometric_similarity(&self, assoc: &BBox, det: &BBox) -> f64 {
        iou(assoc, det)
    }

    fn on_spawn(&mut self, track: &TrackRecord) {
        self.filters.insert(track.id, KalmanState::from_bbox(&track.bbox));
    }

    fn on_match(&mut self, track: &TrackRecord, det: &Detection) {
        if let Some(f) = self.filters.get_mut(&track.id) {
            f.update(&det.bbox);
        }
    }

    fn coast_box(&self, track: &TrackRecord) -> BBox {
        self.assoc_box(track)
    }

    fn on_remove(&mut self, id: u32) {
        self.filters.remove(&id);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_velocity_predicts_same_box() {
        let b = BBox::new(3.0, 4.0, 6.0, 2.0);
        let ks = KalmanState::from_bbox(&b);
        let (p, clamped) = cv_predict(&ks, 5);
        assert!(!clamped);
        assert!((p.x - b.x).abs() < 1e-9);
        assert!((p.y - b.y).abs() < 1e-9);
        assert!((p.w - b.w).abs() < 1e-9);
        assert!((p.h - b.h).abs() < 1e-9);
    }

    #[test]
    fn unit_velocity_shifts_center_by_steps() {
        let mut ks = KalmanState::from_bbox(&BBox::new(0.0, 0.0, 4.0, 4.0));
        ks.mean[4] = 1.0; // vcx = 1 cell/frame
        let (p, _) = cv_predict(&ks, 3);
        assert!((p.center().x - 5.0).abs() < 1e-9); // started at cx = 2
        assert!((p.center().y - 2.0).abs() < 1e-9);
    }

    #[test]
    fn fitted_velocity_extrapolates() {
        // Two observations one frame apart, centers x = 2 then 4. One more
        // constant-velocity step lands near x = 6; tolerance covers the
        // chosen process/measurement noise.
        let mut ks = KalmanState::from_bbox(&BBox::new(0.0, 0.0, 4.0, 4.0));
        ks.predict();
        ks.update(&BBox::new(2.0, 0.0, 4.0, 4.0));
        let (p, clamped) = cv_predict(&ks, 1);
        assert!(!clamped);
        assert!((p.center().x - 6.0).abs() < 0.5, "predicted cx = {}", p.center().x);
    }

    #[test]
    fn negative_area_clamps_and_flags() {
        let mut ks = KalmanState::from_bbox(&BBox::new(0.0, 0.0, 2.0, 2.0));
        ks.mean[6] = -10.0; // shrinking fast
        let (p, clamped) = cv_predict(&ks, 3);
        assert!(clamped);
        assert!(p.area() >= MIN_AREA * 0.99);
    }

    #[test]
    fn update_pulls_mean_toward_measurement() {
        let mut ks = KalmanState::from_bbox(&BBox::new(0.0, 0.0, 4.0, 4.0));
        ks.predict();
        ks.update(&BBox::new(10.0, 0.0, 4.0, 4.0));
        assert!(ks.mean[0] > 10.0); // cx moved well past the prior of 2
        assert!(ks.mean[4] > 5.0); // implied velocity captured
    }
}
