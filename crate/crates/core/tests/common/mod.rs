#![allow(dead_code)]

use fairdiv_core::{DivisionProblem, FlavorLayout, Player, PreferenceMatrix};

/// Five players, one plain 100-unit cake.
pub fn reference_instance() -> DivisionProblem {
    let e = [5.0, 10.0, 20.0, 25.0, 40.0];
    let d = [4.0, 10.0, 24.0, 34.0, 53.0];
    let players = e
        .iter()
        .zip(d)
        .enumerate()
        .map(|(j, (&e, d))| Player::new(format!("p{}", j + 1), e, d))
        .collect();
    DivisionProblem::homogeneous(players, 100.0).unwrap()
}

/// Same five players, cake split into four 25-unit flavors with the
/// benchmark preference matrix.
pub fn flavored_instance() -> DivisionProblem {
    let homog = reference_instance();
    let layout = FlavorLayout::new([
        ("vanilla", 25.0),
        ("chocolate", 25.0),
        ("strawberry", 25.0),
        ("broccoli", 25.0),
    ]);
    let prefs = PreferenceMatrix::new(vec![
        vec![0.25, 0.25, 0.25, 0.25],
        vec![0.5, 0.25, 0.25, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.5, 0.0, 0.0, 0.5],
        vec![0.25, 0.25, 0.5, 0.0],
    ]);
    DivisionProblem::heterogeneous(homog.players().to_vec(), 100.0, layout, prefs).unwrap()
}
