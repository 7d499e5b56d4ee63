//! Search for the inverse-temperature β* that maximizes total utility,
//! plus curve sampling, an extremum check, and a small-β diagnostic.
//!
//! The search is a coarse grid over [0, beta_max] followed by golden-section
//! refinement inside the bracket around the best grid point. Bracketing is
//! robust to plateaus; the extremum condition is verified afterwards by a
//! finite difference rather than assumed.

use crate::division::{boltzmann_allocation, DivisionError};
use crate::model::{Allocation, DivisionProblem};
use crate::utility::{marginal_utility, total_utility, UtilityError};
use thiserror::Error;

pub const DEFAULT_GRID_POINTS: usize = 256;
pub const MIN_GRID_POINTS: usize = 16;
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;

/// β·(E_max − E_min) beyond this leaves the runner-up with less than 1e-12
/// of the top share, so larger β cannot move the allocation.
const SATURATION_EXPONENT: f64 = 40.0;
/// Grid utilities within this of the maximum count as tied; ties refine
/// around the smallest β.
const GRID_TIE_TOL: f64 = 1e-12;
/// Relative spread below which the objective is treated as constant.
const DEGENERATE_TOL: f64 = 1e-14;
/// Residual step is this fraction of max(1, beta_max).
const RESIDUAL_STEP_SCALE: f64 = 1e-5;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error("invalid search configuration: {reason}")]
    InvalidConfig { reason: String },
    #[error("invalid beta grid: {reason}")]
    InvalidGrid { reason: String },
    #[error("finite-difference step must satisfy beta >= h > 0 (beta={beta}, h={h})")]
    InvalidStep { beta: f64, h: f64 },
    #[error("total utility is constant over the search range; reporting beta = 0")]
    DegenerateObjective(Box<Optimum>),
}

/// Controls for [`optimize_beta`]. The objective is always total utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub beta_max: f64,
    pub grid_points: usize,
    pub refine_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            beta_max: 1.0,
            grid_points: DEFAULT_GRID_POINTS,
            refine_tol: DEFAULT_REFINE_TOL,
        }
    }
}

impl SearchConfig {
    /// Default search range for a specific problem: wide enough that the top
    /// contributor already holds essentially the whole cake at beta_max, so
    /// no informative β lies outside it.
    pub fn for_problem(problem: &DivisionProblem) -> Self {
        let contributions = problem.contributions();
        let max = contributions.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = contributions.iter().cloned().fold(f64::INFINITY, f64::min);
        let spread = max - min;
        let beta_max = if spread > 0.0 {
            SATURATION_EXPONENT / spread
        } else {
            1.0
        };
        SearchConfig {
            beta_max,
            ..SearchConfig::default()
        }
    }

    fn check(&self) -> Result<(), OptimizeError> {
        let reason = if !(self.beta_max.is_finite() && self.beta_max > 0.0) {
            Some(format!(
                "beta_max must be a finite positive number (got {})",
                self.beta_max
            ))
        } else if self.grid_points < MIN_GRID_POINTS {
            Some(format!(
                "grid_points must be at least {MIN_GRID_POINTS} (got {})",
                self.grid_points
            ))
        } else if !(self.refine_tol.is_finite() && self.refine_tol > 0.0) {
            Some(format!(
                "refine_tol must be a finite positive number (got {})",
                self.refine_tol
            ))
        } else if self.refine_tol >= self.beta_max {
            Some(format!(
                "refine_tol ({}) must be smaller than beta_max ({})",
                self.refine_tol, self.beta_max
            ))
        } else {
            None
        };
        match reason {
            Some(reason) => Err(OptimizeError::InvalidConfig { reason }),
            None => Ok(()),
        }
    }
}

/// Result of the β search.
///
/// When `boundary` is false the maximizer is interior and the residual
/// satisfies `extremum_residual <= 1e-4 * max(1, |total_utility|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub beta_star: f64,
    pub allocation: Allocation,
    pub total_utility: f64,
    /// True when β* sits at 0 or beta_max; a β* of 0 means the egalitarian
    /// division is optimal, which is a legitimate answer, not a failure.
    pub boundary: bool,
    /// |∂U/∂β| at β* by finite difference (one-sided at β* = 0).
    pub extremum_residual: f64,
}

/// Samples of U(β) on a strictly increasing grid that starts at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityCurve {
    samples: Vec<(f64, f64)>,
}

impl UtilityCurve {
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Best sampled point; ties resolve to the smallest β.
    pub fn argmax(&self) -> (f64, f64) {
        let mut best = self.samples[0];
        for &sample in &self.samples[1..] {
            if sample.1 > best.1 {
                best = sample;
            }
        }
        best
    }
}

/// Linearized check of whether raising β from 0 can raise total utility.
///
/// `slopes[j]` is the marginal utility at the uniform share Ñ/n. The
/// comparison is a covariance test: mean(C_j·E_j) > mean(C)·mean(E) means
/// utility slope correlates positively with contribution, so an interior
/// maximum at β > 0 is predicted.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallBetaReport {
    pub slopes: Vec<f64>,
    pub mean_slope: f64,
    pub mean_contribution: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub predicts_interior_maximum: bool,
}

fn objective(problem: &DivisionProblem, beta: f64) -> Result<f64, OptimizeError> {
    let allocation = boltzmann_allocation(problem, beta)?;
    Ok(total_utility(&allocation, problem.players())?)
}

/// Evenly spaced grid over [0, beta_max] with exact endpoints.
pub fn beta_grid(beta_max: f64, points: usize) -> Result<Vec<f64>, OptimizeError> {
    if !(beta_max.is_finite() && beta_max > 0.0) {
        return Err(OptimizeError::InvalidGrid {
            reason: format!("beta_max must be a finite positive number (got {beta_max})"),
        });
    }
    if points < 2 {
        return Err(OptimizeError::InvalidGrid {
            reason: format!("at least 2 grid points are required (got {points})"),
        });
    }
    let den = (points - 1) as f64;
    Ok((0..points)
        .map(|k| beta_max * (k as f64 / den))
        .collect())
}

fn golden_section_max<F>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    mut best: (f64, f64),
) -> Result<(f64, f64), OptimizeError>
where
    F: FnMut(f64) -> Result<f64, OptimizeError>,
{
    if b - a <= tol {
        return Ok(best);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    // Strictly-greater updates keep the earliest (smallest-β) point on ties.
    if f1 > best.1 {
        best = (x1, f1);
    }
    if f2 > best.1 {
        best = (x2, f2);
    }
    while b - a > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    Ok(best)
}

fn residual_slope(
    problem: &DivisionProblem,
    beta: f64,
    beta_max: f64,
) -> Result<f64, OptimizeError> {
    let h = RESIDUAL_STEP_SCALE * beta_max.max(1.0);
    if beta == 0.0 {
        let at_zero = objective(problem, 0.0)?;
        let above = objective(problem, h)?;
        Ok((above - at_zero) / h)
    } else {
        // Shrinking h to beta keeps the lower evaluation point at β ≥ 0.
        verify_extremum(problem, beta, h.min(beta))
    }
}

fn finish(
    problem: &DivisionProblem,
    beta_max: f64,
    beta_star: f64,
    total_utility: f64,
) -> Result<Optimum, OptimizeError> {
    let allocation = boltzmann_allocation(problem, beta_star)?;
    let boundary = beta_star == 0.0 || beta_star == beta_max;
    let slope = residual_slope(problem, beta_star, beta_max)?;
    Ok(Optimum {
        beta_star,
        allocation,
        total_utility,
        boundary,
        extremum_residual: slope.abs(),
    })
}

/// Grid search over [0, beta_max] plus golden-section refinement around the
/// best grid point. Grid evaluations are pure and combined by index, so any
/// evaluation order gives a bit-identical result.
///
/// A constant objective (all contributions equal) is reported as
/// [`OptimizeError::DegenerateObjective`] carrying the β = 0 optimum with
/// its boundary flag set, since every β divides the cake identically.
pub fn optimize_beta(
    problem: &DivisionProblem,
    config: SearchConfig,
) -> Result<Optimum, OptimizeError> {
    config.check()?;
    let grid = beta_grid(config.beta_max, config.grid_points)?;
    let mut utilities = Vec::with_capacity(grid.len());
    for &beta in &grid {
        utilities.push(objective(problem, beta)?);
    }
    let max = utilities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = utilities.iter().cloned().fold(f64::INFINITY, f64::min);
    if max - min <= DEGENERATE_TOL * max.abs().max(1.0) {
        let optimum = finish(problem, config.beta_max, 0.0, utilities[0])?;
        return Err(OptimizeError::DegenerateObjective(Box::new(optimum)));
    }
    let k = utilities
        .iter()
        .position(|&u| u >= max - GRID_TIE_TOL)
        .expect("grid maximum exists");
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let (beta_star, best_utility) = golden_section_max(
        |beta| objective(problem, beta),
        lo,
        hi,
        config.refine_tol,
        (grid[k], utilities[k]),
    )?;
    finish(problem, config.beta_max, beta_star, best_utility)
}

/// U(β) sampled at every grid point. The grid must be finite, strictly
/// increasing, and start at 0 so curves always anchor at the egalitarian end.
pub fn utility_curve(
    problem: &DivisionProblem,
    betas: &[f64],
) -> Result<UtilityCurve, OptimizeError> {
    let Some(&first) = betas.first() else {
        return Err(OptimizeError::InvalidGrid {
            reason: "at least one beta is required".into(),
        });
    };
    if first != 0.0 {
        return Err(OptimizeError::InvalidGrid {
            reason: format!("grid must start at 0 (got {first})"),
        });
    }
    if let Some(bad) = betas.iter().find(|b| !b.is_finite()) {
        return Err(OptimizeError::InvalidGrid {
            reason: format!("betas must be finite (got {bad})"),
        });
    }
    if betas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OptimizeError::InvalidGrid {
            reason: "betas must be strictly increasing".into(),
        });
    }
    let mut samples = Vec::with_capacity(betas.len());
    for &beta in betas {
        samples.push((beta, objective(problem, beta)?));
    }
    Ok(UtilityCurve { samples })
}

/// Signed central-difference estimate of ∂U/∂β at `beta`.
///
/// Negative values certify the decreasing branch; near-zero values certify
/// an extremum. Requires beta ≥ h > 0 so both evaluation points are valid.
pub fn verify_extremum(
    problem: &DivisionProblem,
    beta: f64,
    h: f64,
) -> Result<f64, OptimizeError> {
    if !(h.is_finite() && h > 0.0 && beta >= h) {
        return Err(OptimizeError::InvalidStep { beta, h });
    }
    let above = objective(problem, beta + h)?;
    let below = objective(problem, beta - h)?;
    Ok((above - below) / (2.0 * h))
}

/// Covariance test at β = 0 for problems without flavors; heterogeneous
/// problems admit no such linearization and are rejected.
pub fn small_beta_diagnostic(
    problem: &DivisionProblem,
) -> Result<SmallBetaReport, OptimizeError> {
    if problem.is_heterogeneous() {
        return Err(DivisionError::HeterogeneousProblemGiven.into());
    }
    let n = problem.n() as f64;
    let uniform = problem.cake_size() / n;
    let mut slopes = Vec::with_capacity(problem.n());
    for player in problem.players() {
        slopes.push(marginal_utility(uniform, player.into())?);
    }
    let contributions = problem.contributions();
    let mean_slope = slopes.iter().sum::<f64>() / n;
    let mean_contribution = contributions.iter().sum::<f64>() / n;
    let lhs = slopes
        .iter()
        .zip(&contributions)
        .map(|(c, e)| c * e)
        .sum::<f64>()
        / n;
    let rhs = mean_slope * mean_contribution;
    Ok(SmallBetaReport {
        slopes,
        mean_slope,
        mean_contribution,
        lhs,
        rhs,
        predicts_interior_maximum: lhs > rhs,
    })
}
