//! Assignment solver vs the exhaustive oracle on random gated matrices.

mod common;

use common::brute_force_assignment;
use presstrack::assign::{solve, CostMatrix, INFEASIBLE};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, gate_prob: f64) -> CostMatrix {
    let n = rng.random_range(0..=max_dim);
    let m = rng.random_range(0..=max_dim);
    let mut costs = CostMatrix::new(n, m);
    for r in 0..n {
        for c in 0..m {
            if !rng.random_bool(gate_prob) {
                costs.set(r, c, rng.random_range(0..1_000_000) as f64 / 1_000_000.0);
            }
        }
    }
    costs
}

#[test]
fn matches_brute_force_on_random_gated_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..2_000 {
        let costs = random_matrix(&mut rng, 6, 0.3);
        let assignment = solve(&costs);
        let (best_card, best_cost) = brute_force_assignment(&costs);
        assert_eq!(assignment.matches.len(), best_card);
        let total = assignment.total_cost(&costs);
        assert!(
            (total - best_cost).abs() < 1e-9,
            "solver {total} vs oracle {best_cost} on {costs:?}"
        );
    }
}

#[test]
fn heavy_gating_still_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let costs = random_matrix(&mut rng, 6, 0.8);
        let assignment = solve(&costs);
        let (best_card, best_cost) = brute_force_assignment(&costs);
        assert_eq!(assignment.matches.len(), best_card);
        assert!((assignment.total_cost(&costs) - best_cost).abs() < 1e-9);
    }
}

#[test]
fn matched_pairs_are_always_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let costs = random_matrix(&mut rng, 8, 0.5);
        for (r, c) in solve(&costs).matches {
            assert_ne!(costs.get(r, c), INFEASIBLE);
        }
    }
}
