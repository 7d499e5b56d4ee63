//! Conventional division criteria and a side-by-side comparison report.
//!
//! Three baselines accompany the Boltzmann division: an equal split, a split
//! proportional to contribution, and a split proportional to need. Baselines
//! divide the cake total only; flavors are not differentiated because none
//! of these criteria says anything about composition.

use crate::model::{Allocation, DivisionProblem, Player};
use crate::optimize::Optimum;
use crate::utility::{utility, UtilityError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BaselineError {
    #[error("{basis} values sum to zero; proportional division is undefined")]
    ZeroBasisSum { basis: Basis },
    #[error("allocation has {allocation} entries but there are {players} players")]
    LengthMismatch { allocation: usize, players: usize },
    #[error(transparent)]
    Utility(#[from] UtilityError),
}

/// Which per-player vector drives a proportional split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Contribution,
    Need,
}

impl std::fmt::Display for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Basis::Contribution => "contribution",
            Basis::Need => "need",
        })
    }
}

/// The four criteria reported side by side, in fixed report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Boltzmann,
    Egalitarian,
    PropContribution,
    PropNeed,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::Boltzmann,
        Criterion::Egalitarian,
        Criterion::PropContribution,
        Criterion::PropNeed,
    ];

    /// Human-readable table heading.
    pub fn label(&self) -> &'static str {
        match self {
            Criterion::Boltzmann => "Boltzmann",
            Criterion::Egalitarian => "Egalitarian",
            Criterion::PropContribution => "Proportional (contribution)",
            Criterion::PropNeed => "Proportional (need)",
        }
    }

    /// Stable machine-readable identifier for CSV and JSON output.
    pub fn key(&self) -> &'static str {
        match self {
            Criterion::Boltzmann => "boltzmann",
            Criterion::Egalitarian => "egalitarian",
            Criterion::PropContribution => "prop_contribution",
            Criterion::PropNeed => "prop_need",
        }
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One criterion's allocation with its per-player diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub allocation: Allocation,
    /// N_j − D_j per player; negative when the share falls short of need.
    pub deficiency: Vec<f64>,
    pub utilities: Vec<f64>,
    pub total_utility: f64,
}

/// All four criteria plus, per player, the criteria ordered by how much that
/// player receives under each (descending; ties keep the fixed order).
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub criteria: Vec<CriterionReport>,
    pub preferred: Vec<Vec<Criterion>>,
}

impl ComparisonReport {
    pub fn criterion(&self, which: Criterion) -> &CriterionReport {
        self.criteria
            .iter()
            .find(|report| report.criterion == which)
            .expect("report holds every criterion")
    }
}

/// N_j = Ñ/n for every player.
pub fn egalitarian_allocation(problem: &DivisionProblem) -> Allocation {
    let share = problem.cake_size() / problem.n() as f64;
    Allocation::from_per_player(vec![share; problem.n()])
}

/// N_j = Ñ·v_j / Σv with v the contribution or need vector.
pub fn proportional_allocation(
    problem: &DivisionProblem,
    basis: Basis,
) -> Result<Allocation, BaselineError> {
    let values: Vec<f64> = match basis {
        Basis::Contribution => problem.contributions(),
        Basis::Need => problem.players().iter().map(|p| p.need).collect(),
    };
    let sum: f64 = values.iter().sum();
    if sum <= 0.0 {
        return Err(BaselineError::ZeroBasisSum { basis });
    }
    Ok(Allocation::from_per_player(
        values
            .into_iter()
            .map(|v| problem.cake_size() * v / sum)
            .collect(),
    ))
}

/// def_j = N_j − D_j; how far each share overshoots (+) or falls short (−)
/// of the player's need.
pub fn deficiency(allocation: &Allocation, players: &[Player]) -> Result<Vec<f64>, BaselineError> {
    if allocation.len() != players.len() {
        return Err(BaselineError::LengthMismatch {
            allocation: allocation.len(),
            players: players.len(),
        });
    }
    Ok(allocation
        .per_player()
        .iter()
        .zip(players)
        .map(|(&share, player)| share - player.need)
        .collect())
}

fn report_for(
    criterion: Criterion,
    allocation: Allocation,
    players: &[Player],
) -> Result<CriterionReport, BaselineError> {
    let deficiency = deficiency(&allocation, players)?;
    let utilities: Result<Vec<f64>, UtilityError> = allocation
        .per_player()
        .iter()
        .zip(players)
        .map(|(&share, player)| utility(share, player.into()))
        .collect();
    let utilities = utilities?;
    let total_utility = utilities.iter().sum();
    Ok(CriterionReport {
        criterion,
        allocation,
        deficiency,
        utilities,
        total_utility,
    })
}

/// Assembles all four criteria for a problem whose Boltzmann optimum has
/// already been computed. The optimum must come from the same problem.
pub fn comparison_report(
    problem: &DivisionProblem,
    optimum: &Optimum,
) -> Result<ComparisonReport, BaselineError> {
    let players = problem.players();
    if optimum.allocation.len() != players.len() {
        return Err(BaselineError::LengthMismatch {
            allocation: optimum.allocation.len(),
            players: players.len(),
        });
    }
    let criteria = vec![
        report_for(Criterion::Boltzmann, optimum.allocation.clone(), players)?,
        report_for(Criterion::Egalitarian, egalitarian_allocation(problem), players)?,
        report_for(
            Criterion::PropContribution,
            proportional_allocation(problem, Basis::Contribution)?,
            players,
        )?,
        report_for(
            Criterion::PropNeed,
            proportional_allocation(problem, Basis::Need)?,
            players,
        )?,
    ];
    let preferred = (0..players.len())
        .map(|j| {
            let mut order = Criterion::ALL.to_vec();
            // Stable sort: exact share ties keep the fixed criterion order.
            order.sort_by(|a, b| {
                let share = |c: &Criterion| {
                    criteria
                        .iter()
                        .find(|r| r.criterion == *c)
                        .expect("criterion present")
                        .allocation
                        .per_player()[j]
                };
                share(b).partial_cmp(&share(a)).expect("shares are finite")
            });
            order
        })
        .collect();
    Ok(ComparisonReport {
        criteria,
        preferred,
    })
}
