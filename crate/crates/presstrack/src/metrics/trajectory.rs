//! Root-trajectory error metrics with rigid segment alignment.
//!
//! Trajectories are 2-D root positions in mat cells (10 mm pitch). Segment
//! errors align each 100-frame segment to the reference using either its
//! first two frames or the whole segment before averaging point-wise
//! distances; the translation error normalizes final drift by the reference
//! path length.

use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::metrics::MetricsError;

/// Millimeters per mat cell.
pub const MM_PER_CELL: f64 = 10.0;

/// One person's root positions over time; frames strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub person_id: u32,
    pub points: Vec<(u32, Point)>,
}

impl Trajectory {
    pub fn new(person_id: u32, points: Vec<(u32, Point)>) -> Result<Self, MetricsError> {
        if !points.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(MetricsError::UnorderedFrames { person_id });
        }
        Ok(Self { person_id, points })
    }
}

/// Similarity transform: rotate by `angle`, scale, then translate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform2D {
    pub angle: f64,
    pub translation: [f64; 2],
    pub scale: f64,
}

impl RigidTransform2D {
    pub fn identity() -> Self {
        Self { angle: 0.0, translation: [0.0, 0.0], scale: 1.0 }
    }

    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.angle.sin_cos();
        Point::new(
            self.scale * (c * p.x - s * p.y) + self.translation[0],
            self.scale * (s * p.x + c * p.y) + self.translation[1],
        )
    }
}

/// Least-squares rigid (optionally scaled) alignment of `src` onto `dst`.
///
/// Minimizes the sum of squared residuals over all proper rotations; in 2-D
/// the optimum is closed-form from the centered cross-correlation, so the
/// determinant is +1 by construction.
pub fn umeyama_align(
    src: &[Point],
    dst: &[Point],
    with_scale: bool,
) -> Result<RigidTransform2D, MetricsError> {
    if src.len() != dst.len() || src.len() < 2 {
        return Err(MetricsError::DegenerateAlignment(format!(
            "need two or more point pairs, got {} and {}",
            src.len(),
            dst.len()
        )));
    }
    let n = src.len() as f64;
    let mean = |pts: &[Point]| {
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(ax, ay), p| (ax + p.x, ay + p.y));
        Point::new(sx / n, sy / n)
    };
    let ms = mean(src);
    let md = mean(dst);

    let mut dot = 0.0; // sum of centered src . dst
    let mut cross = 0.0; // sum of centered src x dst
    let mut src_var = 0.0;
    for (s, d) in src.iter().zip(dst) {
        let (sx, sy) = (s.x - ms.x, s.y - ms.y);
        let (dx, dy) = (d.x - md.x, d.y - md.y);
        dot += sx * dx + sy * dy;
        cross += sx * dy - sy * dx;
        src_var += sx * sx + sy * sy;
    }
    if src_var == 0.0 {
        return Err(MetricsError::DegenerateAlignment(
            "source points are all coincident".to_string(),
        ));
    }

    let angle = cross.atan2(dot);
    let scale = if with_scale { dot.hypot(cross) / src_var } else { 1.0 };
    let (sin, cos) = angle.sin_cos();
    let translation = [
        md.x - scale * (cos * ms.x - sin * ms.y),
        md.y - scale * (sin * ms.x + cos * ms.y),
    ];
    Ok(RigidTransform2D { angle, translation, scale })
}

/// Which frames estimate the per-segment alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignMode {
    /// Position + heading from the segment's first two frames.
    FirstTwo,
    /// Least-squares over the whole segment, scale off.
    Whole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentOptions {
    pub seg_len: usize,
    /// Evaluate a trailing partial segment when it still has >= 2 frames.
    pub include_partial: bool,
    pub mm_per_cell: f64,
}

impl Default for SegmentOptions {
    fn default() -> Self {
        Self { seg_len: 100, include_partial: true, mm_per_cell: MM_PER_CELL }
    }
}

fn common_points(gt: &Trajectory, est: &Trajectory) -> Result<Vec<(Point, Point)>, MetricsError> {
    let mut est_iter = est.points.iter().peekable();
    let mut out = Vec::new();
    for &(frame, g) in &gt.points {
        while let Some(&&(ef, _)) = est_iter.peek() {
            if ef < frame {
                est_iter.next();
            } else {
                break;
            }
        }
        if let Some(&&(ef, e)) = est_iter.peek() {
            if ef == frame {
                out.push((g, e));
            }
        }
    }
    if out.len() < 2 {
        return Err(MetricsError::TrajectoryTooShort { shared: out.len() });
    }
    Ok(out)
}

/// Aligns `est` to `gt` on the pair's first two shared frames. Falls back to
/// translation-only when those frames coincide (no heading to recover).
fn first_two_alignment(pairs: &[(Point, Point)]) -> RigidTransform2D {
    let src = [pairs[0].1, pairs[1].1];
    let dst = [pairs[0].0, pairs[1].0];
    match umeyama_align(&src, &dst, false) {
        Ok(t) => t,
        Err(_) => RigidTransform2D {
            angle: 0.0,
            translation: [dst[0].x - src[0].x, dst[0].y - src[0].y],
            scale: 1.0,
        },
    }
}

/// Mean aligned point-wise error in millimeters: per segment, estimate a
/// rigid transform from `est` to `gt` (per `mode`), apply it, average the
/// Euclidean error over the segment, then average over segments.
pub fn segment_error(
    gt: &Trajectory,
    est: &Trajectory,
    mode: AlignMode,
    opts: &SegmentOptions,
) -> Result<f64, MetricsError> {
    if opts.seg_len < 2 {
        return Err(MetricsError::DegenerateAlignment(format!(
            "segment length must be at least 2, got {}",
            opts.seg_len
        )));
    }
    let pairs = common_points(gt, est)?;
    let mut seg_errors = Vec::new();
    for chunk in pairs.chunks(opts.seg_len) {
        if chunk.len() < 2 {
            break; // a 1-frame trailing remnant cannot be aligned
        }
        if chunk.len() < opts.seg_len && !opts.include_partial {
            break;
        }
        let transform = match mode {
            AlignMode::FirstTwo => first_two_alignment(chunk),
            AlignMode::Whole => {
                let src: Vec<Point> = chunk.iter().map(|&(_, e)| e).collect();
                let dst: Vec<Point> = chunk.iter().map(|&(g, _)| g).collect();
                match umeyama_align(&src, &dst, false) {
                    Ok(t) => t,
                    Err(_) => first_two_alignment(chunk),
                }
            }
        };
        let mean: f64 = chunk
            .iter()
            .map(|&(g, e)| transform.apply(e).distance(&g))
            .sum::<f64>()
            / chunk.len() as f64;
        seg_errors.push(mean * opts.mm_per_cell);
    }
    if seg_errors.is_empty() {
        return Err(MetricsError::TrajectoryTooShort { shared: pairs.len() });
    }
    Ok(seg_errors.iter().sum::<f64>() / seg_errors.len() as f64)
}

/// Root translation error in percent: after aligning `est` to `gt` on the
/// first two shared frames (position + heading), the final-point drift over
/// the total `gt` path length.
pub fn rte(gt: &Trajectory, est: &Trajectory) -> Result<f64, MetricsError> {
    let pairs = common_points(gt, est)?;
    let path_len: f64 = pairs.windows(2).map(|w| w[0].0.distance(&w[1].0)).sum();
    if path_len == 0.0 {
        return Err(MetricsError::ZeroPathLength);
    }
    let transform = first_two_alignment(&pairs);
    let (g_final, e_final) = pairs[pairs.len() - 1];
    Ok(100.0 * transform.apply(e_final).distance(&g_final) / path_len)
}

/// Trajectory metrics bundle as produced by evaluation runs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrajReport {
    /// Segment error, first-two-frame alignment, mm.
    pub seg_first_two_mm: f64,
    /// Segment error, whole-segment alignment, mm.
    pub seg_whole_mm: f64,
    /// Root translation error over the entire trajectory, percent.
    pub rte_percent: f64,
}
