//! Property tests for the allocation kernels over randomized instances.
//!
//! Generators keep β·E below ~100 so exponentials stay far from overflow
//! and underflow; the algebraic identities tested here hold exactly in real
//! arithmetic and to ~1e-12 in floating point on that range.

use fairdiv_core::{
    flavor_probabilities, heterogeneous_allocation, homogeneous_allocation,
    homogeneous_probabilities, DivisionProblem, FlavorLayout, Player, PreferenceMatrix,
};
use proptest::collection::vec;
use proptest::prelude::*;

fn contributions() -> impl Strategy<Value = Vec<f64>> {
    vec(0.0..50.0f64, 1..=6)
}

fn beta() -> impl Strategy<Value = f64> {
    0.0..2.0f64
}

fn players_from(contributions: &[f64]) -> Vec<Player> {
    contributions
        .iter()
        .enumerate()
        .map(|(j, &e)| Player::new(format!("p{j}"), e, 10.0 + j as f64))
        .collect()
}

/// Random heterogeneous problem: row-normalized positive weights, sizes
/// summing exactly to the cake they define.
fn hetero_problem() -> impl Strategy<Value = DivisionProblem> {
    (2usize..=5, 2usize..=4)
        .prop_flat_map(|(n, m)| {
            (
                vec(0.0..50.0f64, n..=n),
                vec(vec(0.01..1.0f64, m..=m), n..=n),
                vec(5.0..50.0f64, m..=m),
            )
        })
        .prop_map(|(es, raw_weights, sizes)| {
            let players = players_from(&es);
            let cake: f64 = sizes.iter().sum();
            let layout = FlavorLayout {
                flavors: (0..sizes.len()).map(|i| format!("f{i}")).collect(),
                sizes,
            };
            let weights = raw_weights
                .into_iter()
                .map(|row| {
                    let sum: f64 = row.iter().sum();
                    row.into_iter().map(|w| w / sum).collect()
                })
                .collect();
            DivisionProblem::heterogeneous(players, cake, layout, PreferenceMatrix::new(weights))
                .expect("generated problem is valid")
        })
}

proptest! {
    #[test]
    fn probabilities_normalize((es, b) in (contributions(), beta())) {
        let probs = homogeneous_probabilities(&es, b).unwrap();
        let sum: f64 = probs.as_slice().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(probs.as_slice().iter().all(|&p| p > 0.0 && p <= 1.0));
    }

    #[test]
    fn matrix_columns_normalize((problem, b) in (hetero_problem(), beta())) {
        let matrix = flavor_probabilities(&problem, b).unwrap();
        for i in 0..matrix.n_flavors() {
            let colsum: f64 = matrix.column(i).iter().sum();
            prop_assert!((colsum - 1.0).abs() <= 1e-12, "column {i}: {colsum}");
        }
        // Weights here are strictly positive, so probabilities are too.
        for row in matrix.rows() {
            prop_assert!(row.iter().all(|&p| p > 0.0 && p <= 1.0));
        }
    }

    #[test]
    fn shifting_contributions_changes_nothing((es, b, c) in (contributions(), beta(), 0.0..10.0f64)) {
        let base = homogeneous_probabilities(&es, b).unwrap();
        let shifted_es: Vec<f64> = es.iter().map(|e| e + c).collect();
        let shifted = homogeneous_probabilities(&shifted_es, b).unwrap();
        for (p, q) in base.as_slice().iter().zip(shifted.as_slice()) {
            prop_assert!((p - q).abs() <= 1e-12, "{p} vs {q}");
        }
    }

    #[test]
    fn scaling_contributions_dual_to_scaling_beta((es, b, s) in (contributions(), beta(), 0.1..10.0f64)) {
        let scaled_es: Vec<f64> = es.iter().map(|e| e * s).collect();
        let left = homogeneous_probabilities(&scaled_es, b).unwrap();
        let right = homogeneous_probabilities(&es, b * s).unwrap();
        for (p, q) in left.as_slice().iter().zip(right.as_slice()) {
            prop_assert!((p - q).abs() <= 1e-12, "{p} vs {q}");
        }
    }

    #[test]
    fn hetero_scale_duality((problem, b, s) in (hetero_problem(), beta(), 0.1..10.0f64)) {
        let scaled_players: Vec<Player> = problem
            .players()
            .iter()
            .map(|p| Player::new(p.id.clone(), p.contribution * s, p.need))
            .collect();
        let (layout, prefs) = problem.heterogeneity().unwrap();
        let scaled = DivisionProblem::heterogeneous(
            scaled_players,
            problem.cake_size(),
            layout.clone(),
            prefs.clone(),
        )
        .unwrap();
        let left = flavor_probabilities(&scaled, b).unwrap();
        let right = flavor_probabilities(&problem, b * s).unwrap();
        for (lrow, rrow) in left.rows().iter().zip(right.rows()) {
            for (p, q) in lrow.iter().zip(rrow) {
                prop_assert!((p - q).abs() <= 1e-12, "{p} vs {q}");
            }
        }
    }

    #[test]
    fn larger_contribution_never_gets_smaller_probability((es, b) in (contributions(), 0.001..2.0f64)) {
        let probs = homogeneous_probabilities(&es, b).unwrap();
        let p = probs.as_slice();
        for j in 0..es.len() {
            for k in 0..es.len() {
                if es[j] > es[k] {
                    prop_assert!(p[j] > p[k], "E {} > {} but p {} <= {}", es[j], es[k], p[j], p[k]);
                }
            }
        }
    }

    #[test]
    fn top_contributor_share_grows_with_beta((es, b1, db) in (contributions(), beta(), 0.0..1.0f64)) {
        let players = players_from(&es);
        let problem = DivisionProblem::homogeneous(players, 100.0).unwrap();
        let top = es
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let lo = homogeneous_allocation(&problem, b1).unwrap();
        let hi = homogeneous_allocation(&problem, b1 + db).unwrap();
        prop_assert!(hi.per_player()[top] >= lo.per_player()[top] - 1e-9);
    }

    #[test]
    fn saturating_beta_gives_top_player_everything(es in vec(0.0..50.0f64, 2..=6)) {
        let mut sorted = es.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let gap = sorted[sorted.len() - 1] - sorted[sorted.len() - 2];
        prop_assume!(gap > 0.5);
        let players = players_from(&es);
        let problem = DivisionProblem::homogeneous(players, 100.0).unwrap();
        let beta = 40.0 / gap;
        let alloc = homogeneous_allocation(&problem, beta).unwrap();
        let top = es
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        prop_assert!(alloc.per_player()[top] >= 100.0 * (1.0 - 1e-12));
    }

    #[test]
    fn allocations_sum_to_the_cake((problem, b) in (hetero_problem(), beta())) {
        let alloc = heterogeneous_allocation(&problem, b).unwrap();
        let total = alloc.total();
        prop_assert!((total - problem.cake_size()).abs() <= 1e-9 * problem.cake_size());
        let (layout, _) = problem.heterogeneity().unwrap();
        let per_flavor = alloc.per_flavor().unwrap();
        for (i, &size) in layout.sizes.iter().enumerate() {
            let colsum: f64 = per_flavor.iter().map(|row| row[i]).sum();
            prop_assert!((colsum - size).abs() <= 1e-9 * size, "flavor {i}");
        }
    }

    #[test]
    fn permuting_players_permutes_the_allocation((problem, b) in (hetero_problem(), beta())) {
        let n = problem.n();
        // Fixed cyclic permutation keeps the test deterministic per instance.
        let perm: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
        let players: Vec<Player> = perm.iter().map(|&j| problem.players()[j].clone()).collect();
        let (layout, prefs) = problem.heterogeneity().unwrap();
        let weights: Vec<Vec<f64>> = perm.iter().map(|&j| prefs.weights[j].clone()).collect();
        let permuted = DivisionProblem::heterogeneous(
            players,
            problem.cake_size(),
            layout.clone(),
            PreferenceMatrix::new(weights),
        )
        .unwrap();
        let base = heterogeneous_allocation(&problem, b).unwrap();
        let moved = heterogeneous_allocation(&permuted, b).unwrap();
        for (pos, &src) in perm.iter().enumerate() {
            let a = base.per_player()[src];
            let c = moved.per_player()[pos];
            prop_assert!((a - c).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {c}");
        }
    }
}
