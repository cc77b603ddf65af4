//! Optimal one-to-one assignment on gated rectangular cost matrices.
//!
//! The solver returns, among all feasible partial matchings of maximum
//! cardinality, one with minimum total cost. Gated entries are marked
//! [`INFEASIBLE`] and can never appear in a match, so gating is hard
//! rather than a soft penalty.

/// Sentinel for entries excluded from matching. Strictly larger than any
/// admissible cost.
pub const INFEASIBLE: f64 = f64::INFINITY;

/// Rectangular cost matrix; rows are tracks, cols are detections.
///
/// All non-[`INFEASIBLE`] costs must be finite and non-negative. Either
/// dimension may be zero.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    /// A matrix with every entry infeasible.
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![INFEASIBLE; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut mat = Self::new(n, m);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m, "ragged cost matrix");
            for (j, &c) in row.iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        mat
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, cost: f64) {
        debug_assert!(
            cost == INFEASIBLE || (cost.is_finite() && cost >= 0.0),
            "costs must be non-negative and finite, or INFEASIBLE"
        );
        self.data[r * self.cols + c] = cost;
    }

    pub fn is_feasible(&self, r: usize, c: usize) -> bool {
        self.get(r, c) != INFEASIBLE
    }
}

/// Result of [`solve`]: a partial matching plus the leftovers on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// Matched (row, col) pairs, sorted by row index.
    pub matches: Vec<(usize, usize)>,
    pub unmatched_rows: Vec<usize>,
    pub unmatched_cols: Vec<usize>,
}

impl Assignment {
    /// Sum of matched costs, accumulated in ascending row order.
    pub fn total_cost(&self, costs: &CostMatrix) -> f64 {
        self.matches.iter().map(|&(r, c)| costs.get(r, c)).sum()
    }
}

/// Minimum-cost maximum-cardinality matching, O((n+m)³).
///
/// The gated rectangular problem reduces to a complete square one: the
/// matrix is padded so that row i may take a private "skip" column and
/// column j a private "skip" row, each at a cost exceeding the sum of all
/// finite costs. Matching one more real pair always saves more than any
/// cost it can add, so cardinality dominates and, within that, total cost
/// is minimized. The padded square problem is solved with the
/// Jonker–Volgenant shortest-augmenting-path scheme; skip pairs come back
/// as unmatched rows/cols.
///
/// Deterministic: rows are processed in ascending order and distance ties
/// resolve to the lowest column index. An all-infeasible matrix yields
/// empty matches with every row and column unmatched.
pub fn solve(costs: &CostMatrix) -> Assignment {
    let n = costs.rows();
    let m = costs.cols();
    if n == 0 || m == 0 {
        return Assignment {
            matches: Vec::new(),
            unmatched_rows: (0..n).collect(),
            unmatched_cols: (0..m).collect(),
        };
    }

    let mut finite_sum = 1.0f64;
    for r in 0..n {
        for c in 0..m {
            let v = costs.get(r, c);
            if v != INFEASIBLE {
                finite_sum += v;
            }
        }
    }
    let skip = finite_sum; // per-side skip cost
    let forbidden = 4.0 * finite_sum; // worse than skipping both sides

    let dim = n + m;
    let mut padded = vec![0.0f64; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            padded[i * dim + j] = match (i < n, j < m) {
                (true, true) => {
                    let v = costs.get(i, j);
                    if v == INFEASIBLE {
                        forbidden
                    } else {
                        v
                    }
                }
                (true, false) => {
                    if j - m == i {
                        skip
                    } else {
                        forbidden
                    }
                }
                (false, true) => {
                    if i - n == j {
                        skip
                    } else {
                        forbidden
                    }
                }
                (false, false) => 0.0,
            };
        }
    }

    let col_of_row = jv_square(&padded, dim);
    let mut matches = Vec::new();
    for (r, &c) in col_of_row.iter().take(n).enumerate() {
        if c < m && costs.is_feasible(r, c) {
            matches.push((r, c));
        }
    }
    let matched_cols: Vec<bool> = {
        let mut v = vec![false; m];
        for &(_, c) in &matches {
            v[c] = true;
        }
        v
    };
    let matched_rows: Vec<bool> = {
        let mut v = vec![false; n];
        for &(r, _) in &matches {
            v[r] = true;
        }
        v
    };
    Assignment {
        matches,
        unmatched_rows: (0..n).filter(|&r| !matched_rows[r]).collect(),
        unmatched_cols: (0..m).filter(|&c| !matched_cols[c]).collect(),
    }
}

/// Jonker–Volgenant on a dense square matrix with finite costs. Returns the
/// column assigned to each row. Indices are shifted by one internally so
/// column 0 can serve as the virtual root of each augmenting search.
fn jv_square(a: &[f64], dim: usize) -> Vec<usize> {
    let inf = f64::INFINITY;
    let mut u = vec![0.0f64; dim + 1];
    let mut v = vec![0.0f64; dim + 1];
    let mut p = vec![0usize; dim + 1]; // row matched to each column (1-based, 0 = free)
    let mut way = vec![0usize; dim + 1];
    for i in 1..=dim {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; dim + 1];
        let mut used = vec![false; dim + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=dim {
                if !used[j] {
                    let cur = a[(i0 - 1) * dim + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=dim {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![usize::MAX; dim];
    for j in 1..=dim {
        if p[j] != 0 {
            col_of_row[p[j] - 1] = j - 1;
        }
    }
    col_of_row
}
