//! Domain types and validation for division problems.
//!
//! A [`DivisionProblem`] is immutable once constructed: the validating
//! constructors are the only way to obtain one, so every downstream
//! operation may assume the invariants checked here.

use thiserror::Error;

/// Relative tolerance for sum checks (flavor sizes vs cake, preference rows vs 1).
pub const SUM_TOL: f64 = 1e-9;

/// Default cake size; shares then read directly as percentages.
pub const DEFAULT_CAKE_SIZE: f64 = 100.0;

pub(crate) fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// One participant in the division.
#[derive(Debug, Clone, PartialEq)]
pub struct Player {
    pub id: String,
    /// Contribution E_j, in arbitrary nonnegative units shared by all players.
    pub contribution: f64,
    /// Need D_j, in cake-share units; the share at which utility reaches tanh(1).
    pub need: f64,
    /// Utility saturation maximum s_j; 1.0 unless a player's scale differs.
    pub amplitude: f64,
}

impl Player {
    pub fn new(id: impl Into<String>, contribution: f64, need: f64) -> Self {
        Player {
            id: id.into(),
            contribution,
            need,
            amplitude: 1.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }
}

/// Named flavors with their sizes Ñ^i; sizes must sum to the cake size.
#[derive(Debug, Clone, PartialEq)]
pub struct FlavorLayout {
    pub flavors: Vec<String>,
    pub sizes: Vec<f64>,
}

impl FlavorLayout {
    pub fn new(parts: impl IntoIterator<Item = (impl Into<String>, f64)>) -> Self {
        let (flavors, sizes) = parts
            .into_iter()
            .map(|(name, size)| (name.into(), size))
            .unzip();
        FlavorLayout { flavors, sizes }
    }

    pub fn len(&self) -> usize {
        self.flavors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flavors.is_empty()
    }
}

/// Row-stochastic preference weights w_j^i: `weights[player][flavor]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceMatrix {
    pub weights: Vec<Vec<f64>>,
}

impl PreferenceMatrix {
    pub fn new(weights: Vec<Vec<f64>>) -> Self {
        PreferenceMatrix { weights }
    }
}

/// A single violation found by validation. The display string starts with the
/// structural path of the offending field (e.g. `players[2].need`), so parser
/// front-ends can surface it unchanged.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("players: at least one player is required")]
    EmptyPlayers,
    #[error("cake_size: must be a finite positive number (got {value})")]
    NonPositiveCakeSize { value: f64 },
    #[error("players[{player}].contribution: must be a finite nonnegative number (got {value})")]
    NegativeContribution { player: usize, value: f64 },
    #[error("players[{player}].need: must be a finite positive number (got {value})")]
    NonPositiveNeed { player: usize, value: f64 },
    #[error("players[{player}].amplitude: must be a finite positive number (got {value})")]
    NonPositiveAmplitude { player: usize, value: f64 },
    #[error("flavors: {labels} labels but {sizes} sizes")]
    FlavorShapeMismatch { labels: usize, sizes: usize },
    #[error("flavors[{flavor}].size: must be a finite positive number (got {value})")]
    NonPositiveFlavorSize { flavor: usize, value: f64 },
    #[error("flavors: sizes sum to {sum} but cake_size is {cake_size}")]
    FlavorSizeMismatch { sum: f64, cake_size: f64 },
    #[error("preferences: expected a {expected_rows}x{expected_cols} matrix")]
    PreferenceShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("players[{player}].preferences[{flavor}]: weight must be in [0, 1] (got {value})")]
    WeightOutOfRange {
        player: usize,
        flavor: usize,
        value: f64,
    },
    #[error("players[{player}].preferences: row sums to {sum}, expected 1")]
    RowSumViolation { player: usize, sum: f64 },
    #[error("preferences: flavor '{name}' (column {flavor}) has no positive weight from any player")]
    UnclaimedFlavor { flavor: usize, name: String },
}

/// The complete list of violations for one problem, never just the first.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl std::fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl ValidationErrors {
    pub fn iter(&self) -> impl Iterator<Item = &ValidationError> {
        self.0.iter()
    }
}

/// A validated division problem: players, cake size, and optionally a flavor
/// layout with a preference matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisionProblem {
    players: Vec<Player>,
    cake_size: f64,
    heterogeneity: Option<(FlavorLayout, PreferenceMatrix)>,
}

impl DivisionProblem {
    /// A problem with a single, undifferentiated cake.
    pub fn homogeneous(players: Vec<Player>, cake_size: f64) -> Result<Self, ValidationErrors> {
        validate_problem(DivisionProblem {
            players,
            cake_size,
            heterogeneity: None,
        })
    }

    /// A problem whose cake is split into flavors with per-player preferences.
    pub fn heterogeneous(
        players: Vec<Player>,
        cake_size: f64,
        layout: FlavorLayout,
        preferences: PreferenceMatrix,
    ) -> Result<Self, ValidationErrors> {
        validate_problem(DivisionProblem {
            players,
            cake_size,
            heterogeneity: Some((layout, preferences)),
        })
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn cake_size(&self) -> f64 {
        self.cake_size
    }

    pub fn heterogeneity(&self) -> Option<(&FlavorLayout, &PreferenceMatrix)> {
        self.heterogeneity.as_ref().map(|(l, p)| (l, p))
    }

    pub fn is_heterogeneous(&self) -> bool {
        self.heterogeneity.is_some()
    }

    pub fn contributions(&self) -> Vec<f64> {
        self.players.iter().map(|p| p.contribution).collect()
    }
}

/// Checks every invariant and returns the problem unchanged iff all hold;
/// otherwise the complete list of violations. Already-validated problems pass
/// unchanged, so the operation is idempotent.
pub fn validate_problem(problem: DivisionProblem) -> Result<DivisionProblem, ValidationErrors> {
    let mut errors = Vec::new();
    let n = problem.players.len();

    if n == 0 {
        errors.push(ValidationError::EmptyPlayers);
    }
    if !(problem.cake_size.is_finite() && problem.cake_size > 0.0) {
        errors.push(ValidationError::NonPositiveCakeSize {
            value: problem.cake_size,
        });
    }
    for (j, player) in problem.players.iter().enumerate() {
        if !(player.contribution.is_finite() && player.contribution >= 0.0) {
            errors.push(ValidationError::NegativeContribution {
                player: j,
                value: player.contribution,
            });
        }
        if !(player.need.is_finite() && player.need > 0.0) {
            errors.push(ValidationError::NonPositiveNeed {
                player: j,
                value: player.need,
            });
        }
        if !(player.amplitude.is_finite() && player.amplitude > 0.0) {
            errors.push(ValidationError::NonPositiveAmplitude {
                player: j,
                value: player.amplitude,
            });
        }
    }

    if let Some((layout, preferences)) = &problem.heterogeneity {
        let m = layout.flavors.len();
        if layout.sizes.len() != m {
            errors.push(ValidationError::FlavorShapeMismatch {
                labels: m,
                sizes: layout.sizes.len(),
            });
        } else {
            let mut all_sizes_ok = true;
            for (i, &size) in layout.sizes.iter().enumerate() {
                if !(size.is_finite() && size > 0.0) {
                    errors.push(ValidationError::NonPositiveFlavorSize {
                        flavor: i,
                        value: size,
                    });
                    all_sizes_ok = false;
                }
            }
            let sum: f64 = layout.sizes.iter().sum();
            if all_sizes_ok
                && problem.cake_size.is_finite()
                && !close_rel(sum, problem.cake_size, SUM_TOL)
            {
                errors.push(ValidationError::FlavorSizeMismatch {
                    sum,
                    cake_size: problem.cake_size,
                });
            }
        }

        let w = &preferences.weights;
        let shape_ok = w.len() == n && w.iter().all(|row| row.len() == m);
        if !shape_ok {
            errors.push(ValidationError::PreferenceShapeMismatch {
                expected_rows: n,
                expected_cols: m,
            });
        } else {
            for (j, row) in w.iter().enumerate() {
                let mut row_ok = true;
                for (i, &weight) in row.iter().enumerate() {
                    if !(weight.is_finite() && (0.0..=1.0).contains(&weight)) {
                        errors.push(ValidationError::WeightOutOfRange {
                            player: j,
                            flavor: i,
                            value: weight,
                        });
                        row_ok = false;
                    }
                }
                let sum: f64 = row.iter().sum();
                if row_ok && !close_rel(sum, 1.0, SUM_TOL) {
                    errors.push(ValidationError::RowSumViolation { player: j, sum });
                }
            }
            for i in 0..m {
                if !w.iter().any(|row| row[i] > 0.0) {
                    errors.push(ValidationError::UnclaimedFlavor {
                        flavor: i,
                        name: layout
                            .flavors
                            .get(i)
                            .cloned()
                            .unwrap_or_else(|| i.to_string()),
                    });
                }
            }
        }
    }

    if errors.is_empty() {
        Ok(problem)
    } else {
        Err(ValidationErrors(errors))
    }
}

/// Shares handed to each player, and per flavor when the problem is
/// heterogeneous. Produced by the allocation kernels and baselines; the
/// constructors are crate-internal so instances always satisfy the sum
/// invariants of the operation that built them.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    per_player: Vec<f64>,
    per_flavor: Option<Vec<Vec<f64>>>,
}

impl Allocation {
    pub(crate) fn from_per_player(per_player: Vec<f64>) -> Self {
        Allocation {
            per_player,
            per_flavor: None,
        }
    }

    /// Builds from an n×m per-flavor matrix; totals are the row sums (Eq. of
    /// the per-player total over flavors).
    pub(crate) fn from_per_flavor(per_flavor: Vec<Vec<f64>>) -> Self {
        let per_player = per_flavor.iter().map(|row| row.iter().sum()).collect();
        Allocation {
            per_player,
            per_flavor: Some(per_flavor),
        }
    }

    /// N_j: total cake units for each player.
    pub fn per_player(&self) -> &[f64] {
        &self.per_player
    }

    /// N_j^i matrix, `[player][flavor]`; present iff the source problem was heterogeneous.
    pub fn per_flavor(&self) -> Option<&[Vec<f64>]> {
        self.per_flavor.as_deref()
    }

    pub fn len(&self) -> usize {
        self.per_player.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_player.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.per_player.iter().sum()
    }
}
