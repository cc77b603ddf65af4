//! Shared test oracles, independent of the implementations they check.

use presstrack::assign::CostMatrix;

/// Exhaustive maximum-cardinality minimum-cost matching by dynamic
/// programming over column subsets. Enumerates every feasible partial
/// matching, so it is a ground-truth oracle for the assignment solver
/// (usable up to ~20 columns).
pub fn brute_force_assignment(costs: &CostMatrix) -> (usize, f64) {
    let (n, m) = (costs.rows(), costs.cols());
    assert!(m <= 20, "oracle is exponential in columns");
    let mut dp: Vec<Option<(usize, f64)>> = vec![None; 1 << m];
    dp[0] = Some((0, 0.0));
    for i in 0..n {
        let mut next = dp.clone(); // row i may stay unmatched
        for mask in 0..(1usize << m) {
            if let Some((card, cost)) = dp[mask] {
                for j in 0..m {
                    if mask & (1 << j) == 0 && costs.is_feasible(i, j) {
                        let cand = (card + 1, cost + costs.get(i, j));
                        let slot = &mut next[mask | (1 << j)];
                        let better = match slot {
                            None => true,
                            Some((bc, bcost)) => cand.0 > *bc || (cand.0 == *bc && cand.1 < *bcost),
                        };
                        if better {
                            *slot = Some(cand);
                        }
                    }
                }
            }
        }
        dp = next;
    }
    let mut best = (0usize, 0.0f64);
    for entry in dp.into_iter().flatten() {
        if entry.0 > best.0 || (entry.0 == best.0 && entry.1 < best.1) {
            best = entry;
        }
    }
    best
}
