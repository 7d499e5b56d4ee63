//! Problem-file parsing and export.
//!
//! A problem file is a single JSON document:
//!
//! ```json
//! {
//!   "cake_size": 100,
//!   "players": [
//!     { "id": "ana", "contribution": 5, "need": 4, "amplitude": 1.0 }
//!   ],
//!   "flavors": [ { "name": "vanilla", "size": 50 }, { "name": "mint", "size": 50 } ],
//!   "preferences": [ [0.5, 0.5] ]
//! }
//! ```
//!
//! `cake_size` defaults to 100 so shares read as percentages; `amplitude`
//! defaults to 1. `flavors` and `preferences` are optional but must appear
//! together. Unknown keys are rejected, naming the key.

use fairdiv_core::{
    DivisionProblem, FlavorLayout, Player, PreferenceMatrix, ValidationErrors, DEFAULT_CAKE_SIZE,
};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: invalid problem:\n{errors}")]
    Validation {
        path: String,
        errors: ValidationErrors,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "default_cake_size")]
    pub cake_size: f64,
    pub players: Vec<PlayerEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavors: Option<Vec<FlavorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferences: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerEntry {
    pub id: String,
    pub contribution: f64,
    pub need: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlavorEntry {
    pub name: String,
    pub size: f64,
}

fn default_cake_size() -> f64 {
    DEFAULT_CAKE_SIZE
}

impl ProblemFile {
    pub fn into_problem(self, path: &str) -> Result<DivisionProblem, InputError> {
        let players: Vec<Player> = self
            .players
            .into_iter()
            .map(|entry| {
                let mut player = Player::new(entry.id, entry.contribution, entry.need);
                if let Some(amplitude) = entry.amplitude {
                    player = player.with_amplitude(amplitude);
                }
                player
            })
            .collect();
        let result = match (self.flavors, self.preferences) {
            (None, None) => DivisionProblem::homogeneous(players, self.cake_size),
            (Some(flavors), preferences) => {
                // A missing matrix validates as a 0-row matrix so the error
                // names the expected shape.
                let preferences = PreferenceMatrix::new(preferences.unwrap_or_default());
                let layout = FlavorLayout::new(flavors.into_iter().map(|f| (f.name, f.size)));
                DivisionProblem::heterogeneous(players, self.cake_size, layout, preferences)
            }
            (None, Some(_)) => {
                return Err(InputError::Schema {
                    path: path.to_string(),
                    message: "preferences: given without flavors".to_string(),
                })
            }
        };
        result.map_err(|errors| InputError::Validation {
            path: path.to_string(),
            errors,
        })
    }

    /// Inverse of parsing: a file that parses back to the same problem.
    pub fn from_problem(problem: &DivisionProblem) -> Self {
        let players = problem
            .players()
            .iter()
            .map(|p| PlayerEntry {
                id: p.id.clone(),
                contribution: p.contribution,
                need: p.need,
                amplitude: (p.amplitude != 1.0).then_some(p.amplitude),
            })
            .collect();
        let (flavors, preferences) = match problem.heterogeneity() {
            Some((layout, prefs)) => (
                Some(
                    layout
                        .flavors
                        .iter()
                        .zip(&layout.sizes)
                        .map(|(name, &size)| FlavorEntry {
                            name: name.clone(),
                            size,
                        })
                        .collect(),
                ),
                Some(prefs.weights.clone()),
            ),
            None => (None, None),
        };
        ProblemFile {
            cake_size: problem.cake_size(),
            players,
            flavors,
            preferences,
        }
    }
}

/// Parses problem text, attributing errors to `path`.
pub fn parse_problem(text: &str, path: &str) -> Result<DivisionProblem, InputError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| {
        // serde_json appends " at line L column C"; the position is already
        // in the path prefix.
        let mut message = e.to_string();
        if let Some(at) = message.rfind(" at line ") {
            message.truncate(at);
        }
        InputError::Syntax {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    file.into_problem(path)
}

/// Reads and parses a problem file.
pub fn load_problem(path: &Path) -> Result<DivisionProblem, InputError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_problem(&text, &shown)
}

/// Serializes a problem as pretty JSON that reparses identically.
pub fn export_problem(problem: &DivisionProblem) -> String {
    let file = ProblemFile::from_problem(problem);
    serde_json::to_string_pretty(&file).expect("problem serializes")
}
