//! Per-person footprint bounding-box labels from raw pressure frames.
//!
//! The pipeline per frame: threshold the grid into 8-connected regions,
//! assign each region to the person whose projected foot joints lie nearest
//! to the region center, then merge each person's regions into one minimum
//! bounding rectangle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{merge_boxes, BBox, Point};

/// Per-cell saturation of the synthetic sensor, in raw pressure units.
/// Default thresholds and crop quantization are expressed against it.
pub const FULL_LOAD_PRESSURE: f64 = 50.0;

/// Default region threshold: 2% of the per-cell full-load scale.
pub const DEFAULT_TAU: f64 = 0.02 * FULL_LOAD_PRESSURE;

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("frame/annotation misalignment: {0}")]
    Misaligned(String),
}

/// A sparse non-negative pressure grid at one time index.
///
/// Cells are kept sorted by (row, col), which makes equality, hashing of
/// serialized bytes, and file round-trips deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureFrame {
    pub frame: u32,
    pub height: usize,
    pub width: usize,
    cells: Vec<(u16, u16, f64)>,
}

impl PressureFrame {
    pub fn empty(frame: u32, height: usize, width: usize) -> Self {
        Self { frame, height, width, cells: Vec::new() }
    }

    /// Builds a frame from (row, col, value) triplets. Values must be
    /// non-negative and in range; zero-valued cells are dropped.
    pub fn from_cells(
        frame: u32,
        height: usize,
        width: usize,
        mut cells: Vec<(u16, u16, f64)>,
    ) -> Result<Self, LabelError> {
        cells.retain(|&(_, _, v)| v != 0.0);
        for &(r, c, v) in &cells {
            if (r as usize) >= height || (c as usize) >= width {
                return Err(LabelError::Misaligned(format!(
                    "cell ({r}, {c}) outside {height}x{width} grid"
                )));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(LabelError::Misaligned(format!(
                    "cell ({r}, {c}) has invalid pressure {v}"
                )));
            }
        }
        cells.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Ok(Self { frame, height, width, cells })
    }

    pub fn cells(&self) -> &[(u16, u16, f64)] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().map(|&(_, _, v)| v).sum()
    }

    pub fn value(&self, row: u16, col: u16) -> f64 {
        match self.cells.binary_search_by_key(&(row, col), |&(r, c, _)| (r, c)) {
            Ok(i) => self.cells[i].2,
            Err(_) => 0.0,
        }
    }
}

/// A maximal connected component of super-threshold cells.
#[derive(Debug, Clone)]
pub struct Region {
    /// Member cells as (row, col), sorted.
    pub cells: Vec<(u16, u16)>,
    /// Centroid of member cells in mat coordinates (x = col, y = row).
    pub center: Point,
    /// Minimal box containing all member cells.
    pub bbox: BBox,
    /// Sum of member pressures.
    pub mass: f64,
}

/// One person's projected foot joints and root position for a single frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonAnnotation {
    pub person_id: u32,
    /// Projected toe-base/ankle points currently on the mat (1..=4 of them).
    pub foot_joints: Vec<Point>,
    pub root: Point,
}

/// All person annotations for one frame.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrameAnnotations {
    pub frame: u32,
    pub persons: Vec<PersonAnnotation>,
}

/// Annotation table row kinds; `Root` marks the trajectory reference point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointKind {
    Root,
    LToe,
    LAnkle,
    RToe,
    RAnkle,
}

impl JointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            JointKind::Root => "root",
            JointKind::LToe => "l_toe",
            JointKind::LAnkle => "l_ankle",
            JointKind::RToe => "r_toe",
            JointKind::RAnkle => "r_ankle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "root" => JointKind::Root,
            "l_toe" => JointKind::LToe,
            "l_ankle" => JointKind::LAnkle,
            "r_toe" => JointKind::RToe,
            "r_ankle" => JointKind::RAnkle,
            _ => return None,
        })
    }
}

/// Flat annotation record as stored in the annotations table.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationRow {
    pub frame: u32,
    pub person_id: u32,
    pub kind: JointKind,
    pub x: f64,
    pub y: f64,
}

/// Groups flat annotation rows into one [`FrameAnnotations`] per frame index
/// 1..=n_frames. Rows must be sorted by frame.
pub fn group_annotations(rows: &[AnnotationRow], n_frames: u32) -> Vec<FrameAnnotations> {
    let mut out: Vec<FrameAnnotations> = (1..=n_frames)
        .map(|f| FrameAnnotations { frame: f, persons: Vec::new() })
        .collect();
    for row in rows {
        if row.frame == 0 || row.frame > n_frames {
            continue;
        }
        let fa = &mut out[(row.frame - 1) as usize];
        let p = match fa.persons.iter_mut().find(|p| p.person_id == row.person_id) {
            Some(p) => p,
            None => {
                fa.persons.push(PersonAnnotation {
                    person_id: row.person_id,
                    foot_joints: Vec::new(),
                    root: Point::default(),
                });
                fa.persons.last_mut().unwrap()
            }
        };
        let pt = Point::new(row.x, row.y);
        match row.kind {
            JointKind::Root => p.root = pt,
            _ => p.foot_joints.push(pt),
        }
    }
    for fa in &mut out {
        fa.persons.sort_by_key(|p| p.person_id);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Four,
    Eight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentroidMode {
    /// Plain mean of member cell indices.
    Unweighted,
    /// Pressure-weighted mean of member cell indices.
    MassWeighted,
}

#[derive(Debug, Clone, Copy)]
pub struct RegionOptions {
    pub connectivity: Connectivity,
    pub centroid: CentroidMode,
}

impl Default for RegionOptions {
    fn default() -> Self {
        Self { connectivity: Connectivity::Eight, centroid: CentroidMode::Unweighted }
    }
}

/// Connected components of cells with pressure >= `tau` (8-connected,
/// unweighted centroids). See [`threshold_regions_with`] for options.
pub fn threshold_regions(frame: &PressureFrame, tau: f64) -> Vec<Region> {
    threshold_regions_with(frame, tau, RegionOptions::default())
}

pub fn threshold_regions_with(
    frame: &PressureFrame,
    tau: f64,
    opts: RegionOptions,
) -> Vec<Region> {
    assert!(tau > 0.0, "threshold must be positive");
    let hot: Vec<(u16, u16, f64)> =
        frame.cells().iter().copied().filter(|&(_, _, v)| v >= tau).collect();
    let index: BTreeMap<(u16, u16), usize> =
        hot.iter().enumerate().map(|(i, &(r, c, _))| ((r, c), i)).collect();

    let neighbors: &[(i32, i32)] = match opts.connectivity {
        Connectivity::Four => &[(-1, 0), (0, -1), (0, 1), (1, 0)],
        Connectivity::Eight => &[
            (-1, -1), (-1, 0), (-1, 1),
            (0, -1), (0, 1),
            (1, -1), (1, 0), (1, 1),
        ],
    };

    let mut seen = vec![false; hot.len()];
    let mut regions = Vec::new();
    for seed in 0..hot.len() {
        if seen[seed] {
            continue;
        }
        seen[seed] = true;
        let mut stack = vec![seed];
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            let (r, c, _) = hot[i];
            members.push(i);
            for &(dr, dc) in neighbors {
                let (nr, nc) = (r as i32 + dr, c as i32 + dc);
                if nr < 0 || nc < 0 {
                    continue;
                }
                if let Some(&ni) = index.get(&(nr as u16, nc as u16)) {
                    if !seen[ni] {
                        seen[ni] = true;
                        stack.push(ni);
                    }
                }
            }
        }
        members.sort_unstable();
        let cells: Vec<(u16, u16)> = members.iter().map(|&i| (hot[i].0, hot[i].1)).collect();
        let mass: f64 = members.iter().map(|&i| hot[i].2).sum();
        let (mut sr, mut sc, mut sw) = (0.0f64, 0.0f64, 0.0f64);
        for &i in &members {
            let (r, c, v) = hot[i];
            let w = match opts.centroid {
                CentroidMode::Unweighted => 1.0,
                CentroidMode::MassWeighted => v,
            };
            sr += w * r as f64;
            sc += w * c as f64;
            sw += w;
        }
        regions.push(Region {
            bbox: bbox_of_cells(&cells),
            center: Point::new(sc / sw, sr / sw),
            mass,
            cells,
        });
    }
    regions
}

/// Minimal box covering a non-empty set of integer cells, each cell treated
/// as the unit square [c, c+1) x [r, r+1).
pub fn bbox_of_cells(cells: &[(u16, u16)]) -> BBox {
    let (mut r0, mut c0, mut r1, mut c1) = (u16::MAX, u16::MAX, 0u16, 0u16);
    for &(r, c) in cells {
        r0 = r0.min(r);
        c0 = c0.min(c);
        r1 = r1.max(r);
        c1 = c1.max(c);
    }
    BBox::new(
        c0 as f64,
        r0 as f64,
        (c1 - c0) as f64 + 1.0,
        (r1 - r0) as f64 + 1.0,
    )
}

/// Assigns each region to the person whose nearest projected foot joint is
/// closest to the region center; ties break to the lowest person id. Persons
/// with no on-mat joints are skipped. Returns one entry per region; `None`
/// only when no person has any joints.
pub fn assign_regions(regions: &[Region], persons: &[PersonAnnotation]) -> Vec<Option<u32>> {
    regions
        .iter()
        .map(|region| {
            let mut best: Option<(f64, u32)> = None;
            for p in persons {
                for joint in &p.foot_joints {
                    let d = region.center.distance(joint);
                    let better = match best {
                        None => true,
                        Some((bd, bid)) => d < bd || (d == bd && p.person_id < bid),
                    };
                    if better {
                        best = Some((d, p.person_id));
                    }
                }
            }
            best.map(|(_, id)| id)
        })
        .collect()
}

/// Merges each person's assigned region boxes into one label box. Persons
/// with no regions are absent from the output.
pub fn make_labels(regions: &[Region], assignment: &[Option<u32>]) -> BTreeMap<u32, BBox> {
    let mut grouped: BTreeMap<u32, Vec<BBox>> = BTreeMap::new();
    for (region, assigned) in regions.iter().zip(assignment) {
        if let Some(id) = assigned {
            grouped.entry(*id).or_default().push(region.bbox);
        }
    }
    grouped
        .into_iter()
        .map(|(id, boxes)| (id, merge_boxes(&boxes).expect("non-empty group")))
        .collect()
}

/// A generated label: one person's footprint box on one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelRow {
    pub frame: u32,
    pub person_id: u32,
    pub bbox: BBox,
}

/// Runs threshold -> assign -> merge over an aligned frame/annotation
/// sequence and emits per-person ground-truth boxes (confidence 1 when
/// written out).
pub fn generate_labels(
    frames: &[PressureFrame],
    annotations: &[FrameAnnotations],
    tau: f64,
    opts: RegionOptions,
) -> Result<Vec<LabelRow>, LabelError> {
    if frames.len() != annotations.len() {
        return Err(LabelError::Misaligned(format!(
            "{} pressure frames vs {} annotation frames",
            frames.len(),
            annotations.len()
        )));
    }
    let mut rows = Vec::new();
    for (frame, ann) in frames.iter().zip(annotations) {
        if frame.frame != ann.frame {
            return Err(LabelError::Misaligned(format!(
                "pressure frame {} paired with annotation frame {}",
                frame.frame, ann.frame
            )));
        }
        let regions = threshold_regions_with(frame, tau, opts);
        let assignment = assign_regions(&regions, &ann.persons);
        for (person_id, bbox) in make_labels(&regions, &assignment) {
            rows.push(LabelRow { frame: frame.frame, person_id, bbox });
        }
    }
    Ok(rows)
}
