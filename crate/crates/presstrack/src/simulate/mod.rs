//! Deterministic multi-person gait and pressure-map synthesizer.
//!
//! Each person walks a scenario-specific waypoint path. Foot plants land at
//! fixed arc-length intervals with alternating lateral offsets; a plant k
//! overlaps plant k+1 for the double-support fraction of each step, so the
//! per-person footprint box alternates between one-foot and two-feet extents
//! and the swinging foot's blob vanishes and reappears a step ahead. Planted
//! feet render as truncated anisotropic pressure bumps (forefoot + hindfoot)
//! scaled so the foot's on-mat total equals its share of body weight, which
//! makes per-person force conservation exact whenever the feet are on the
//! mat.
//!
//! Everything derives from per-person counter-mode RNG substreams of a
//! single seed, so adding a person never perturbs the others and equal
//! seeds give byte-identical output.

pub mod noise;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use noise::{corrupt_detections, NoiseConfig};

use crate::geometry::{BBox, Point};
use crate::labelgen::{
    AnnotationRow, FrameAnnotations, JointKind, PersonAnnotation, PressureFrame, DEFAULT_TAU,
};
use crate::metrics::Trajectory;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Private lanes, alternating directions: people repeatedly walk towards
    /// and past each other.
    #[default]
    Cross,
    /// Everyone follows the same racetrack loop, staggered along it.
    Follow,
    /// Private lanes, same direction and phase.
    SideBySide,
    /// Random waypoints inside a private vertical strip per person.
    RandomWaypoints,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_persons: usize,
    /// Mat rows.
    pub mat_height: usize,
    /// Mat columns.
    pub mat_width: usize,
    pub fps: f64,
    pub duration_s: f64,
    /// Per-person body weight range, arbitrary force units.
    pub weight: [f64; 2],
    /// Walking speed range, cells/s.
    pub speed: [f64; 2],
    /// Distance between successive foot plants, cells.
    pub step_length: [f64; 2],
    /// Fraction of the gait cycle with both feet planted.
    pub double_support_fraction: f64,
    /// Probability that a planted foot renders as two disconnected blobs.
    pub arch_split_prob: f64,
    pub scenario: Scenario,
    /// Probability per person of briefly walking off the mat and back.
    pub exit_reentry_prob: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_persons: 3,
            mat_height: 240,
            mat_width: 120,
            fps: 25.0,
            duration_s: 20.0,
            weight: [550.0, 850.0],
            speed: [60.0, 110.0],
            step_length: [40.0, 65.0],
            double_support_fraction: 0.25,
            arch_split_prob: 0.25,
            scenario: Scenario::Cross,
            exit_reentry_prob: 0.0,
            seed: 7,
        }
    }
}

impl SimConfig {
    pub fn n_frames(&self) -> u32 {
        (self.duration_s * self.fps).round() as u32
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let err = |msg: String| Err(SimError::Config(msg));
        if self.mat_height < 40 || self.mat_width < 24 || self.mat_height > 4000 || self.mat_width > 4000 {
            return err(format!("sim.mat dimensions {}x{} out of range", self.mat_height, self.mat_width));
        }
        if !(self.fps > 0.0 && self.fps.is_finite()) {
            return err(format!("sim.fps must be positive, got {}", self.fps));
        }
        if !(self.duration_s >= 0.0 && self.duration_s.is_finite()) {
            return err(format!("sim.duration_s must be non-negative, got {}", self.duration_s));
        }
        for (name, [lo, hi]) in
            [("weight", self.weight), ("speed", self.speed), ("step_length", self.step_length)]
        {
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return err(format!("sim.{name} range [{lo}, {hi}] must be positive and non-empty"));
            }
        }
        if !(self.double_support_fraction > 0.0 && self.double_support_fraction <= 0.6) {
            return err(format!(
                "sim.double_support_fraction must be in (0, 0.6], got {}",
                self.double_support_fraction
            ));
        }
        for (name, p) in [("arch_split_prob", self.arch_split_prob), ("exit_reentry_prob", self.exit_reentry_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return err(format!("sim.{name} must be in [0, 1], got {p}"));
            }
        }
        if self.n_persons > 0 {
            let needed = lane_spacing_floor();
            let capacity = match self.scenario {
                Scenario::Cross | Scenario::SideBySide => self.mat_width / needed,
                Scenario::RandomWaypoints => self.mat_width / (needed + 8),
                Scenario::Follow => 6,
            };
            if self.n_persons > capacity {
                return err(format!(
                    "{} persons do not fit the {}-cell-wide mat in the {:?} scenario (capacity {})",
                    self.n_persons, self.mat_width, self.scenario, capacity
                ));
            }
        }
        if self.step_length[1] > self.mat_height as f64 / 3.0 {
            return err(format!(
                "sim.step_length up to {} is too long for a {}-cell mat",
                self.step_length[1], self.mat_height
            ));
        }
        Ok(())
    }
}

/// Minimum lateral room one walker needs, cells.
fn lane_spacing_floor() -> usize {
    24
}

/// Per-person support summary for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportState {
    pub person_id: u32,
    /// Feet currently planted in gait terms (1 or 2).
    pub planted_feet: u8,
    /// Every planted foot produced on-mat pressure.
    pub all_feet_on_mat: bool,
    /// Total rendered pressure for this person this frame.
    pub total_pressure: f64,
}

/// One foot landing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantEvent {
    pub index: i64,
    pub pos: Point,
    /// Arc-length position of the landing along the person's path.
    pub arc: f64,
}

/// Oracle bookkeeping emitted alongside the pressure sequence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundTruth {
    /// Per frame: (person_id, label box), sorted by person.
    pub labels: Vec<Vec<(u32, BBox)>>,
    /// Per frame: (row, col, person_id) for every super-threshold cell.
    pub ownership: Vec<Vec<(u16, u16, u32)>>,
    /// Per frame annotations, aligned with the pressure frames.
    pub annotations: Vec<FrameAnnotations>,
    /// Flat annotation rows for table output.
    pub annotation_rows: Vec<AnnotationRow>,
    /// Per-person root trajectories over frames where the person is on mat.
    pub trajectories: Vec<Trajectory>,
    /// Per frame, per person present in gait terms.
    pub support: Vec<Vec<SupportState>>,
    /// Per person: every foot plant in order.
    pub plants: Vec<Vec<PlantEvent>>,
    /// Sampled body weight per person (index = person_id - 1).
    pub weights: Vec<f64>,
    /// Threshold used for ownership and labels.
    pub tau: f64,
}

/// A polyline path parametrized by arc length.
struct Path {
    verts: Vec<Point>,
    cum: Vec<f64>,
}

impl Path {
    fn new(verts: Vec<Point>) -> Self {
        let mut cum = Vec::with_capacity(verts.len());
        let mut acc = 0.0;
        cum.push(0.0);
        for w in verts.windows(2) {
            acc += w[0].distance(&w[1]);
            cum.push(acc);
        }
        Self { verts, cum }
    }

    fn total_len(&self) -> f64 {
        *self.cum.last().unwrap_or(&0.0)
    }

    /// Position and unit tangent at arc length `s`, clamped to the ends.
    fn sample(&self, s: f64) -> (Point, Point) {
        let s = s.clamp(0.0, self.total_len());
        let seg = match self.cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(self.verts.len().saturating_sub(2)),
            Err(i) => i.saturating_sub(1).min(self.verts.len().saturating_sub(2)),
        };
        let (a, b) = (self.verts[seg], self.verts[seg + 1]);
        let len = a.distance(&b);
        if len == 0.0 {
            return (a, Point::new(0.0, 1.0));
        }
        let t = ((s - self.cum[seg]) / len).clamp(0.0, 1.0);
        let pos = Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
        let tan = Point::new((b.x - a.x) / len, (b.y - a.y) / len);
        (pos, tan)
    }
}

struct PersonSim {
    id: u32,
    weight: f64,
    speed: f64,
    step: f64,
    foot_len: f64,
    foot_wid: f64,
    lat_offset: f64,
    ds_frac: f64,
    s0: f64,
    path: Path,
    /// Arch split decision per plant, indexed by plant index + 1.
    splits: Vec<bool>,
}

struct FootPose {
    plant_index: i64,
    center: Point,
    heading: Point,
    planted: bool,
}

impl PersonSim {
    fn plant_pose(&self, k: i64) -> (Point, Point) {
        let arc = self.s0 + k as f64 * self.step + 0.5 * self.step;
        let (pos, tan) = self.path.sample(arc.max(0.0));
        let side = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let normal = Point::new(-tan.y, tan.x);
        (
            Point::new(pos.x + side * self.lat_offset * normal.x, pos.y + side * self.lat_offset * normal.y),
            tan,
        )
    }

    fn plant_arc(&self, k: i64) -> f64 {
        (self.s0 + k as f64 * self.step + 0.5 * self.step).max(0.0)
    }

    fn split_for(&self, k: i64) -> bool {
        self.splits.get((k + 1).max(0) as usize).copied().unwrap_or(false)
    }

    /// Both feet at time `t`: 1 or 2 planted, the swing foot interpolated.
    fn feet_at(&self, t: f64) -> (Vec<FootPose>, Point) {
        let advanced = self.speed * t;
        let k_cur = (advanced / self.step).floor() as i64;
        let phase = advanced / self.step - k_cur as f64;
        let root = self.path.sample(self.s0 + advanced).0;

        let mut feet = Vec::with_capacity(2);
        let (c, h) = self.plant_pose(k_cur);
        feet.push(FootPose { plant_index: k_cur, center: c, heading: h, planted: true });
        if phase < self.ds_frac {
            let (c, h) = self.plant_pose(k_cur - 1);
            feet.push(FootPose { plant_index: k_cur - 1, center: c, heading: h, planted: true });
        } else {
            // other-parity foot in flight from plant k-1 to plant k+1
            let (from, _) = self.plant_pose(k_cur - 1);
            let (to, to_heading) = self.plant_pose(k_cur + 1);
            let tau = ((phase - self.ds_frac) / (1.0 - self.ds_frac)).clamp(0.0, 1.0);
            let s = tau * tau * (3.0 - 2.0 * tau);
            let center = Point::new(from.x + (to.x - from.x) * s, from.y + (to.y - from.y) * s);
            let dist = from.distance(&to);
            let heading = if dist > 0.0 {
                Point::new((to.x - from.x) / dist, (to.y - from.y) / dist)
            } else {
                to_heading
            };
            feet.push(FootPose { plant_index: k_cur + 1, center, heading, planted: false });
        }
        (feet, root)
    }
}

fn sample_range(rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

fn build_path(
    cfg: &SimConfig,
    index: usize,
    rng: &mut ChaCha8Rng,
    arc_needed: f64,
) -> (Vec<Point>, f64) {
    let (h, w) = (cfg.mat_height as f64, cfg.mat_width as f64);
    let margin = 22.0;
    let n = cfg.n_persons as f64;
    match cfg.scenario {
        Scenario::Cross | Scenario::SideBySide => {
            let lane = w * (index as f64 + 0.5) / n;
            let downward = cfg.scenario == Scenario::SideBySide || index.is_multiple_of(2);
            let (y_start, y_end) = if downward { (margin, h - margin) } else { (h - margin, margin) };
            let leg = (y_end - y_start).abs();
            let legs = (arc_needed / leg).ceil() as usize + 2;
            let mut verts = Vec::with_capacity(legs + 1);
            for i in 0..=legs {
                let y = if i % 2 == 0 { y_start } else { y_end };
                verts.push(Point::new(lane, y));
            }
            // stagger people along their lanes
            let stagger = if cfg.scenario == Scenario::SideBySide {
                0.0
            } else {
                leg * ((index as f64 * 0.37) % 0.8)
            };
            (verts, stagger)
        }
        Scenario::Follow => {
            let (xa, xb) = (w / 3.0, 2.0 * w / 3.0);
            let loop_verts = [
                Point::new(xa, margin),
                Point::new(xa, h - margin),
                Point::new(xb, h - margin),
                Point::new(xb, margin),
            ];
            let perimeter = 2.0 * (h - 2.0 * margin) + 2.0 * (xb - xa);
            let laps = (arc_needed / perimeter).ceil() as usize + 2;
            let mut verts = Vec::with_capacity(laps * 4 + 1);
            for _ in 0..laps {
                verts.extend_from_slice(&loop_verts);
            }
            verts.push(loop_verts[0]);
            (verts, perimeter * index as f64 / n)
        }
        Scenario::RandomWaypoints => {
            let strip_w = w / n;
            let pad = 12.0;
            let x_lo = strip_w * index as f64 + pad;
            let x_hi = strip_w * (index as f64 + 1.0) - pad;
            let mut verts = vec![Point::new(
                rng.random_range(x_lo..x_hi.max(x_lo + 1e-9)),
                rng.random_range(margin..(h - margin)),
            )];
            let mut acc = 0.0;
            while acc < arc_needed + 50.0 {
                let prev = *verts.last().unwrap();
                let next = loop {
                    let cand = Point::new(
                        rng.random_range(x_lo..x_hi.max(x_lo + 1e-9)),
                        rng.random_range(margin..(h - margin)),
                    );
                    if cand.distance(&prev) >= 30.0 {
                        break cand;
                    }
                };
                acc += prev.distance(&next);
                verts.push(next);
            }
            (verts, 0.0)
        }
    }
}

/// With probability `exit_reentry_prob`, reroutes one mid-path vertex through
/// a point beyond the nearest mat end so the person briefly leaves the mat.
/// Not applied on the shared Follow loop, where a detour would collapse the
/// separation between leader and follower.
fn maybe_insert_exit(cfg: &SimConfig, verts: &mut Vec<Point>, rng: &mut ChaCha8Rng) {
    let take = cfg.exit_reentry_prob > 0.0 && rng.random_bool(cfg.exit_reentry_prob);
    if !take || verts.len() < 4 || cfg.scenario == Scenario::Follow {
        return;
    }
    let h = cfg.mat_height as f64;
    // long enough off-mat that the default lost-track budget expires
    let overshoot = 110.0;
    // keep the excursion early so it happens within the simulated span
    let hi = (verts.len() - 1).clamp(3, 5);
    let at = rng.random_range(2..hi);
    let anchor = verts[at];
    let off_y = if anchor.y < h / 2.0 { -overshoot } else { h + overshoot };
    verts.insert(at, Point::new(anchor.x, off_y));
}

struct FootRender {
    cells: Vec<(usize, f64)>,
    sum: f64,
}

/// Rasterizes one planted foot: forefoot + hindfoot bumps along the heading,
/// merged or disconnected depending on the arch-split flag. Returns raw
/// (unscaled) on-mat cell values.
fn render_foot(
    center: Point,
    heading: Point,
    foot_len: f64,
    foot_wid: f64,
    split: bool,
    mat_h: usize,
    mat_w: usize,
) -> FootRender {
    let (sigma_along, trunc) = if split {
        (foot_len * 0.080, 2.0)
    } else {
        (foot_len * 0.132, 2.2)
    };
    let sigma_across = foot_wid * 0.22;
    let segments = [
        (0.25 * foot_len, 0.55), // forefoot
        (-0.25 * foot_len, 0.45), // hindfoot
    ];
    let mut cells = Vec::new();
    let mut sum = 0.0;
    let (ra, rc) = (trunc * sigma_along, trunc * sigma_across);
    let radius = ra.max(rc);
    for (offset, share) in segments {
        let cx = center.x + offset * heading.x;
        let cy = center.y + offset * heading.y;
        let r0 = ((cy - radius).floor().max(0.0)) as usize;
        let r1 = ((cy + radius).ceil().min(mat_h as f64 - 1.0)) as usize;
        let c0 = ((cx - radius).floor().max(0.0)) as usize;
        let c1 = ((cx + radius).ceil().min(mat_w as f64 - 1.0)) as usize;
        if cy + radius < 0.0 || cy - radius > mat_h as f64 || cx + radius < 0.0 || cx - radius > mat_w as f64 {
            continue;
        }
        for r in r0..=r1 {
            for c in c0..=c1 {
                let dx = c as f64 + 0.5 - cx;
                let dy = r as f64 + 0.5 - cy;
                // project onto the foot frame
                let da = dx * heading.x + dy * heading.y;
                let dc = -dx * heading.y + dy * heading.x;
                let e = (da / ra).powi(2) + (dc / rc).powi(2);
                if e > 1.0 {
                    continue;
                }
                let v = share * (-0.5 * ((da / sigma_along).powi(2) + (dc / sigma_across).powi(2))).exp();
                cells.push((r * mat_w + c, v));
                sum += v;
            }
        }
    }
    FootRender { cells, sum }
}

/// Synthesizes the pressure sequence and its ground truth.
pub fn simulate(cfg: &SimConfig) -> Result<(Vec<PressureFrame>, GroundTruth), SimError> {
    cfg.validate()?;
    let n_frames = cfg.n_frames();
    let (mat_h, mat_w) = (cfg.mat_height, cfg.mat_width);
    let tau = DEFAULT_TAU;

    // Everyone on the shared Follow loop walks at one speed, or a faster
    // follower would overtake the leader and their footprints would overlap.
    let follow_speed = {
        let mut rng0 = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng0.set_stream(0);
        sample_range(&mut rng0, cfg.speed)
    };

    // per-person substreams: stream p+1 of the seeded generator
    let mut persons = Vec::with_capacity(cfg.n_persons);
    for p in 0..cfg.n_persons {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(p as u64 + 1);
        let weight = sample_range(&mut rng, cfg.weight);
        let mut speed = sample_range(&mut rng, cfg.speed);
        if cfg.scenario == Scenario::Follow {
            speed = follow_speed;
        }
        let step = sample_range(&mut rng, cfg.step_length);
        let foot_len = rng.random_range(22.0..27.0);
        let foot_wid = rng.random_range(8.0..10.5);
        let arc_travel = speed * cfg.duration_s;
        let (mut verts, stagger) = build_path(cfg, p, &mut rng, arc_travel + 3.0 * step + stagger_bound(cfg));
        maybe_insert_exit(cfg, &mut verts, &mut rng);
        let s0 = step + stagger;
        let max_plants = (arc_travel / step).ceil() as usize + 4;
        let splits: Vec<bool> =
            (0..max_plants + 2).map(|_| rng.random_bool(cfg.arch_split_prob)).collect();
        persons.push(PersonSim {
            id: p as u32 + 1,
            weight,
            speed,
            step,
            foot_len,
            foot_wid,
            lat_offset: 5.0,
            ds_frac: cfg.double_support_fraction,
            s0,
            path: Path::new(verts),
            splits,
        });
    }

    let mut gt = GroundTruth {
        tau,
        weights: persons.iter().map(|p| p.weight).collect(),
        plants: vec![Vec::new(); cfg.n_persons],
        ..Default::default()
    };

    // record every plant once
    for (p, person) in persons.iter().enumerate() {
        let max_k = ((person.speed * cfg.duration_s) / person.step).floor() as i64 + 1;
        for k in -1..=max_k {
            let (pos, _) = person.plant_pose(k);
            gt.plants[p].push(PlantEvent { index: k, pos, arc: person.plant_arc(k) });
        }
    }

    let mut frames = Vec::with_capacity(n_frames as usize);
    let mut values = vec![0.0f64; mat_h * mat_w];
    let mut owner = vec![0u32; mat_h * mat_w];
    let mut touched: Vec<usize> = Vec::new();

    for f in 1..=n_frames {
        let t = f as f64 / cfg.fps;
        for &idx in &touched {
            values[idx] = 0.0;
            owner[idx] = 0;
        }
        touched.clear();

        let mut frame_support = Vec::with_capacity(persons.len());
        let mut frame_ann = FrameAnnotations { frame: f, persons: Vec::new() };

        for person in &persons {
            let (feet, root) = person.feet_at(t);
            let mut total = 0.0f64;
            let planted: Vec<&FootPose> = feet.iter().filter(|fp| fp.planted).collect();
            let share = 1.0 / planted.len() as f64;
            let mut all_on_mat = true;
            for foot in &planted {
                let split = person.split_for(foot.plant_index);
                let render = render_foot(
                    foot.center,
                    foot.heading,
                    person.foot_len,
                    person.foot_wid,
                    split,
                    mat_h,
                    mat_w,
                );
                if render.sum <= 0.0 {
                    all_on_mat = false;
                    continue;
                }
                let scale = share * person.weight / render.sum;
                for (idx, v) in render.cells {
                    if values[idx] == 0.0 {
                        touched.push(idx);
                    }
                    values[idx] += v * scale;
                    owner[idx] = person.id;
                    total += v * scale;
                }
            }
            frame_support.push(SupportState {
                person_id: person.id,
                planted_feet: planted.len() as u8,
                all_feet_on_mat: all_on_mat,
                total_pressure: total,
            });

            // annotations: toe-base and ankle per foot, on-mat joints only
            let mut joints: Vec<(JointKind, Point)> = Vec::with_capacity(4);
            for foot in &feet {
                let left = foot.plant_index.rem_euclid(2) == 0;
                let toe = Point::new(
                    foot.center.x + 0.3 * person.foot_len * foot.heading.x,
                    foot.center.y + 0.3 * person.foot_len * foot.heading.y,
                );
                let ankle = Point::new(
                    foot.center.x - 0.3 * person.foot_len * foot.heading.x,
                    foot.center.y - 0.3 * person.foot_len * foot.heading.y,
                );
                let (toe_kind, ankle_kind) = if left {
                    (JointKind::LToe, JointKind::LAnkle)
                } else {
                    (JointKind::RToe, JointKind::RAnkle)
                };
                joints.push((toe_kind, toe));
                joints.push((ankle_kind, ankle));
            }
            joints.retain(|(_, p)| {
                p.x >= 0.0 && p.x <= mat_w as f64 && p.y >= 0.0 && p.y <= mat_h as f64
            });
            joints.sort_by_key(|(k, _)| joint_order(*k));
            if !joints.is_empty() {
                gt.annotation_rows.push(AnnotationRow {
                    frame: f,
                    person_id: person.id,
                    kind: JointKind::Root,
                    x: root.x,
                    y: root.y,
                });
                for (kind, p) in &joints {
                    gt.annotation_rows.push(AnnotationRow {
                        frame: f,
                        person_id: person.id,
                        kind: *kind,
                        x: p.x,
                        y: p.y,
                    });
                }
                frame_ann.persons.push(PersonAnnotation {
                    person_id: person.id,
                    foot_joints: joints.iter().map(|&(_, p)| p).collect(),
                    root,
                });
            }
        }

        // collect sparse cells and per-person label boxes
        touched.sort_unstable();
        let mut cells = Vec::with_capacity(touched.len());
        let mut own = Vec::new();
        let mut bounds: Vec<Option<(u16, u16, u16, u16)>> = vec![None; persons.len()];
        for &idx in &touched {
            let v = values[idx];
            if v <= 0.0 {
                continue;
            }
            let (r, c) = ((idx / mat_w) as u16, (idx % mat_w) as u16);
            cells.push((r, c, v));
            if v >= tau {
                let pid = owner[idx];
                own.push((r, c, pid));
                let b = &mut bounds[(pid - 1) as usize];
                *b = Some(match *b {
                    None => (r, c, r, c),
                    Some((r0, c0, r1, c1)) => (r0.min(r), c0.min(c), r1.max(r), c1.max(c)),
                });
            }
        }
        let labels: Vec<(u32, BBox)> = bounds
            .iter()
            .enumerate()
            .filter_map(|(p, b)| {
                b.map(|(r0, c0, r1, c1)| {
                    (
                        p as u32 + 1,
                        BBox::new(
                            c0 as f64,
                            r0 as f64,
                            (c1 - c0) as f64 + 1.0,
                            (r1 - r0) as f64 + 1.0,
                        ),
                    )
                })
            })
            .collect();

        frames.push(
            PressureFrame::from_cells(f, mat_h, mat_w, cells)
                .expect("simulator emits in-range cells"),
        );
        gt.labels.push(labels);
        gt.ownership.push(own);
        gt.annotations.push(frame_ann);
        gt.support.push(frame_support);
    }

    // root trajectories from the annotation rows
    for person in &persons {
        let points: Vec<(u32, Point)> = gt
            .annotation_rows
            .iter()
            .filter(|r| r.person_id == person.id && r.kind == JointKind::Root)
            .map(|r| (r.frame, Point::new(r.x, r.y)))
            .collect();
        gt.trajectories.push(
            Trajectory::new(person.id, points).expect("frames emitted in order"),
        );
    }

    Ok((frames, gt))
}

fn stagger_bound(cfg: &SimConfig) -> f64 {
    (cfg.mat_height as f64) * 2.0
}

fn joint_order(k: JointKind) -> u8 {
    match k {
        JointKind::Root => 0,
        JointKind::LToe => 1,
        JointKind::LAnkle => 2,
        JointKind::RToe => 3,
        JointKind::RAnkle => 4,
    }
}
