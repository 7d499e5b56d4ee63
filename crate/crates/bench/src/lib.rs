//! Instance builders shared by the benchmark targets.

use fairdiv_core::{DivisionProblem, FlavorLayout, Player, PreferenceMatrix};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The five-player instance used throughout the test suite.
pub fn reference_instance() -> DivisionProblem {
    let players = vec![
        Player::new("p1", 5.0, 4.0),
        Player::new("p2", 10.0, 10.0),
        Player::new("p3", 20.0, 24.0),
        Player::new("p4", 25.0, 34.0),
        Player::new("p5", 40.0, 53.0),
    ];
    DivisionProblem::homogeneous(players, 100.0).expect("valid instance")
}

/// Its four-flavor variant.
pub fn flavored_instance() -> DivisionProblem {
    let players = reference_instance().players().to_vec();
    let layout = FlavorLayout::new([
        ("vanilla", 25.0),
        ("chocolate", 25.0),
        ("strawberry", 25.0),
        ("broccoli", 25.0),
    ]);
    let preferences = PreferenceMatrix::new(vec![
        vec![0.25, 0.25, 0.25, 0.25],
        vec![0.5, 0.25, 0.25, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.5, 0.0, 0.0, 0.5],
        vec![0.25, 0.25, 0.5, 0.0],
    ]);
    DivisionProblem::heterogeneous(players, 100.0, layout, preferences).expect("valid instance")
}

/// Seeded contributions in [0, 50), for kernel scaling runs.
pub fn random_contributions(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| 50.0 * unit(&mut rng)).collect()
}

/// Seeded plain problem with n players and a cake of 100 per player.
pub fn random_instance(n: usize, seed: u64) -> DivisionProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let players = (0..n)
        .map(|j| {
            Player::new(
                format!("p{j}"),
                50.0 * unit(&mut rng),
                1.0 + 59.0 * unit(&mut rng),
            )
        })
        .collect();
    DivisionProblem::homogeneous(players, 100.0 * n as f64).expect("valid instance")
}
