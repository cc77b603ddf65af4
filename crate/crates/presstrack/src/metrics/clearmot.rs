//! CLEARMOT tracking metrics plus identity-level precision/recall/F1.
//!
//! Per-frame correspondence keeps each ground-truth object's previous
//! hypothesis while their overlap stays above the threshold, then matches
//! the rest with the assignment solver on 1 - IoU. Identity metrics use a
//! single global ground-truth/hypothesis bijection chosen to maximize the
//! number of overlap-matched frames.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::assign::{solve, CostMatrix};
use crate::geometry::{iou, BBox};
use crate::metrics::MetricsError;

/// One evaluated row: a box with identity on one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotRow {
    pub frame: u32,
    pub id: i64,
    pub bbox: BBox,
}

/// What the `motp` field reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MotpMode {
    /// Mean IoU over matched pairs (a similarity, higher is better).
    #[default]
    Overlap,
    /// Mean center distance in cells over matched pairs (lower is better).
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotOptions {
    pub iou_threshold: f64,
    pub motp: MotpMode,
}

impl Default for MotOptions {
    fn default() -> Self {
        Self { iou_threshold: 0.5, motp: MotpMode::Overlap }
    }
}

/// Tracking quality report.
///
/// `mota = 1 - (fn + fp + idsw) / gt_count` holds exactly; it can be
/// negative. All other fractions are in [0, 1].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MotReport {
    pub mota: f64,
    pub motp: f64,
    pub fn_count: u64,
    pub fp_count: u64,
    pub idsw: u64,
    pub frag: u64,
    pub idf1: f64,
    pub idp: f64,
    pub idr: f64,
    pub gt_count: u64,
}

pub fn clearmot(gt: &[MotRow], hyp: &[MotRow], opts: MotOptions) -> Result<MotReport, MetricsError> {
    if gt.is_empty() {
        return Err(MetricsError::EmptyGroundTruth);
    }

    let frames: BTreeSet<u32> = gt.iter().chain(hyp).map(|r| r.frame).collect();
    let gt_by_frame = group_by_frame(gt);
    let hyp_by_frame = group_by_frame(hyp);

    let mut fn_count = 0u64;
    let mut fp_count = 0u64;
    let mut idsw = 0u64;
    let mut frag = 0u64;
    let mut matched_pairs = 0u64;
    let mut overlap_sum = 0.0f64;
    let mut dist_sum = 0.0f64;

    // correspondence carried over between frames: gt id -> hyp id
    let mut corr: BTreeMap<i64, i64> = BTreeMap::new();
    // last hypothesis each gt id was matched to, across gaps
    let mut last_hyp: BTreeMap<i64, i64> = BTreeMap::new();
    // whether the gt id was matched on its most recent appearance
    let mut was_matched: BTreeMap<i64, bool> = BTreeMap::new();
    // per (gt id, hyp id): number of frames their boxes overlap-match
    let mut pair_frames: BTreeMap<(i64, i64), u64> = BTreeMap::new();

    let empty: Vec<&MotRow> = Vec::new();
    for &frame in &frames {
        let gts = gt_by_frame.get(&frame).unwrap_or(&empty);
        let hyps = hyp_by_frame.get(&frame).unwrap_or(&empty);

        for g in gts {
            for h in hyps {
                if iou(&g.bbox, &h.bbox) >= opts.iou_threshold {
                    *pair_frames.entry((g.id, h.id)).or_insert(0) += 1;
                }
            }
        }

        let mut gt_taken = vec![false; gts.len()];
        let mut hyp_taken = vec![false; hyps.len()];
        let mut matches: Vec<(usize, usize)> = Vec::new();

        // keep last frame's pairs while still above threshold
        for (gi, g) in gts.iter().enumerate() {
            if let Some(&h_id) = corr.get(&g.id) {
                if let Some(hi) = hyps.iter().position(|h| h.id == h_id) {
                    if !hyp_taken[hi] && iou(&g.bbox, &hyps[hi].bbox) >= opts.iou_threshold {
                        gt_taken[gi] = true;
                        hyp_taken[hi] = true;
                        matches.push((gi, hi));
                    }
                }
            }
        }

        // assign the rest on 1 - IoU, gated at the threshold
        let free_gt: Vec<usize> = (0..gts.len()).filter(|&i| !gt_taken[i]).collect();
        let free_hyp: Vec<usize> = (0..hyps.len()).filter(|&i| !hyp_taken[i]).collect();
        let mut costs = CostMatrix::new(free_gt.len(), free_hyp.len());
        for (r, &gi) in free_gt.iter().enumerate() {
            for (c, &hi) in free_hyp.iter().enumerate() {
                let overlap = iou(&gts[gi].bbox, &hyps[hi].bbox);
                if overlap >= opts.iou_threshold {
                    costs.set(r, c, 1.0 - overlap);
                }
            }
        }
        for (r, c) in solve(&costs).matches {
            matches.push((free_gt[r], free_hyp[c]));
        }

        matches.sort_unstable();
        let mut gt_matched = vec![false; gts.len()];
        for &(gi, hi) in &matches {
            let (g, h) = (gts[gi], hyps[hi]);
            gt_matched[gi] = true;
            matched_pairs += 1;
            overlap_sum += iou(&g.bbox, &h.bbox);
            dist_sum += g.bbox.center().distance(&h.bbox.center());
            if let Some(&prev) = last_hyp.get(&g.id) {
                if prev != h.id {
                    idsw += 1;
                }
            }
            last_hyp.insert(g.id, h.id);
            corr.insert(g.id, h.id);
            was_matched.insert(g.id, true);
        }

        for (gi, g) in gts.iter().enumerate() {
            if !gt_matched[gi] {
                fn_count += 1;
                if was_matched.get(&g.id).copied().unwrap_or(false) {
                    frag += 1; // trajectory interrupted
                }
                was_matched.insert(g.id, false);
                corr.remove(&g.id);
            }
        }
        fp_count += hyps.len() as u64 - matches.len() as u64;
    }

    let gt_count = gt.len() as u64;
    let hyp_count = hyp.len() as u64;
    let mota = 1.0 - (fn_count + fp_count + idsw) as f64 / gt_count as f64;
    let motp = if matched_pairs == 0 {
        0.0
    } else {
        match opts.motp {
            MotpMode::Overlap => overlap_sum / matched_pairs as f64,
            MotpMode::Distance => dist_sum / matched_pairs as f64,
        }
    };

    // Global id bijection maximizing overlap-matched frames.
    let gt_ids: Vec<i64> = {
        let mut v: Vec<i64> = gt.iter().map(|r| r.id).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let hyp_ids: Vec<i64> = {
        let mut v: Vec<i64> = hyp.iter().map(|r| r.id).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let max_count = frames.len() as u64 + 1;
    let mut id_costs = CostMatrix::new(gt_ids.len(), hyp_ids.len());
    for (r, g) in gt_ids.iter().enumerate() {
        for (c, h) in hyp_ids.iter().enumerate() {
            if let Some(&count) = pair_frames.get(&(*g, *h)) {
                id_costs.set(r, c, (max_count - count) as f64);
            }
        }
    }
    let idtp: u64 = solve(&id_costs)
        .matches
        .iter()
        .map(|&(r, c)| pair_frames[&(gt_ids[r], hyp_ids[c])])
        .sum();
    let idp = if hyp_count == 0 { 0.0 } else { idtp as f64 / hyp_count as f64 };
    let idr = idtp as f64 / gt_count as f64;
    let idf1 = 2.0 * idtp as f64 / (gt_count + hyp_count) as f64;

    Ok(MotReport { mota, motp, fn_count, fp_count, idsw, frag, idf1, idp, idr, gt_count })
}

fn group_by_frame(rows: &[MotRow]) -> BTreeMap<u32, Vec<&MotRow>> {
    let mut map: BTreeMap<u32, Vec<&MotRow>> = BTreeMap::new();
    for r in rows {
        map.entry(r.frame).or_default().push(r);
    }
    map
}
