//! Allocation kernels: Boltzmann probabilities and the deterministic
//! expected allocations built from them, plus a seeded sampling oracle.
//!
//! Probabilities follow the positive-exponent form p_j ∝ e^{β E_j}; the
//! weighted variant multiplies each exponential by the player's preference
//! weight for the flavor. Exponentials are max-shifted before evaluation so
//! large β·E cannot overflow; the shift cancels in the normalization.

use crate::model::{Allocation, DivisionProblem};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DivisionError {
    #[error("contributions and beta must be finite")]
    NonFiniteInput,
    #[error("beta must be nonnegative (got {beta})")]
    NegativeBeta { beta: f64 },
    #[error("at least one contribution is required")]
    EmptyInput,
    #[error("this operation requires a problem without flavors, but the problem has them")]
    HeterogeneousProblemGiven,
    #[error("this operation requires a problem with flavors, but the problem has none")]
    HomogeneousProblemGiven,
    #[error("at least one sample unit is required")]
    ZeroUnits,
    #[error("sampling needs at least one unit per flavor ({flavors} flavors, {units} units)")]
    InsufficientUnits { units: u64, flavors: usize },
}

/// Per-player probabilities; entries sum to 1 within 1e-12 absolute.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    p: Vec<f64>,
}

impl ProbabilityVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }
}

/// Per-player, per-flavor probabilities, `rows()[player][flavor]`; every
/// column sums to 1 within 1e-12 absolute.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    p: Vec<Vec<f64>>,
}

impl ProbabilityMatrix {
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    pub fn n_players(&self) -> usize {
        self.p.len()
    }

    pub fn n_flavors(&self) -> usize {
        self.p.first().map_or(0, Vec::len)
    }

    pub fn column(&self, flavor: usize) -> Vec<f64> {
        self.p.iter().map(|row| row[flavor]).collect()
    }
}

fn check_inputs(contributions: &[f64], beta: f64) -> Result<(), DivisionError> {
    if contributions.is_empty() {
        return Err(DivisionError::EmptyInput);
    }
    if !beta.is_finite() || contributions.iter().any(|c| !c.is_finite()) {
        return Err(DivisionError::NonFiniteInput);
    }
    if beta < 0.0 {
        return Err(DivisionError::NegativeBeta { beta });
    }
    Ok(())
}

/// p_j = e^{β E_j} / Σ_k e^{β E_k}.
///
/// Contributions may be any finite reals here; problem validation restricts
/// them to nonnegative values, but the kernel itself only needs finiteness.
pub fn homogeneous_probabilities(
    contributions: &[f64],
    beta: f64,
) -> Result<ProbabilityVector, DivisionError> {
    check_inputs(contributions, beta)?;
    let exponents: Vec<f64> = contributions.iter().map(|&e| beta * e).collect();
    let shift = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = exponents.iter().map(|x| (x - shift).exp()).collect();
    let sum: f64 = weights.iter().sum();
    Ok(ProbabilityVector {
        p: weights.into_iter().map(|w| w / sum).collect(),
    })
}

/// N_j = Ñ · p_j for a problem without flavors.
pub fn homogeneous_allocation(
    problem: &DivisionProblem,
    beta: f64,
) -> Result<Allocation, DivisionError> {
    if problem.is_heterogeneous() {
        return Err(DivisionError::HeterogeneousProblemGiven);
    }
    let probs = homogeneous_probabilities(&problem.contributions(), beta)?;
    Ok(Allocation::from_per_player(
        probs
            .as_slice()
            .iter()
            .map(|&p| problem.cake_size() * p)
            .collect(),
    ))
}

/// P_j^i = w_j^i e^{β E_j} / Σ_k w_k^i e^{β E_k}, column by column.
///
/// The max shift for a column ranges only over players with positive weight
/// there; including zero-weight players could pick a shift whose sole
/// exponential underflows, turning the column into 0/0.
pub fn flavor_probabilities(
    problem: &DivisionProblem,
    beta: f64,
) -> Result<ProbabilityMatrix, DivisionError> {
    let Some((layout, preferences)) = problem.heterogeneity() else {
        return Err(DivisionError::HomogeneousProblemGiven);
    };
    let contributions = problem.contributions();
    check_inputs(&contributions, beta)?;
    let exponents: Vec<f64> = contributions.iter().map(|&e| beta * e).collect();
    let n = problem.n();
    let m = layout.len();
    let w = &preferences.weights;

    let mut p = vec![vec![0.0; m]; n];
    for i in 0..m {
        let shift = (0..n)
            .filter(|&j| w[j][i] > 0.0)
            .map(|j| exponents[j])
            .fold(f64::NEG_INFINITY, f64::max);
        let terms: Vec<f64> = (0..n)
            .map(|j| {
                if w[j][i] > 0.0 {
                    w[j][i] * (exponents[j] - shift).exp()
                } else {
                    0.0
                }
            })
            .collect();
        let sum: f64 = terms.iter().sum();
        for j in 0..n {
            p[j][i] = terms[j] / sum;
        }
    }
    Ok(ProbabilityMatrix { p })
}

/// N_j^i = Ñ^i · P_j^i; the returned allocation carries the full per-flavor
/// matrix and per-player totals N_j = Σ_i N_j^i.
pub fn heterogeneous_allocation(
    problem: &DivisionProblem,
    beta: f64,
) -> Result<Allocation, DivisionError> {
    let Some((layout, _)) = problem.heterogeneity() else {
        return Err(DivisionError::HomogeneousProblemGiven);
    };
    let matrix = flavor_probabilities(problem, beta)?;
    let per_flavor: Vec<Vec<f64>> = matrix
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .zip(&layout.sizes)
                .map(|(&p, &size)| size * p)
                .collect()
        })
        .collect();
    Ok(Allocation::from_per_flavor(per_flavor))
}

/// The expected Boltzmann allocation for either kind of problem.
pub fn boltzmann_allocation(
    problem: &DivisionProblem,
    beta: f64,
) -> Result<Allocation, DivisionError> {
    if problem.is_heterogeneous() {
        heterogeneous_allocation(problem, beta)
    } else {
        homogeneous_allocation(problem, beta)
    }
}

/// Uniform in [0, 1) with 53 random mantissa bits.
fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn draw_counts(rng: &mut ChaCha8Rng, probs: &[f64], units: u64) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..units {
        let u = unit_f64(rng);
        // First cumulative value above u; clamp guards the few-ulp gap
        // between the final cumulative sum and 1.
        let k = cdf.partition_point(|&c| c <= u).min(last);
        counts[k] += 1;
    }
    counts
}

/// Splits `units` across flavors proportionally to size, keeping the total
/// exact and giving every flavor at least one unit.
fn apportion_units(sizes: &[f64], cake_size: f64, units: u64) -> Vec<u64> {
    let m = sizes.len();
    let mut bounds = Vec::with_capacity(m + 1);
    bounds.push(0u64);
    let mut cum = 0.0;
    for (i, &size) in sizes.iter().enumerate() {
        cum += size;
        let b = if i == m - 1 {
            units
        } else {
            ((units as f64 * cum / cake_size).round() as u64).clamp(bounds[i], units)
        };
        bounds.push(b);
    }
    let mut counts: Vec<u64> = (0..m).map(|i| bounds[i + 1] - bounds[i]).collect();
    // units >= m guarantees some pile holds >= 2 while any sits at zero.
    for i in 0..m {
        while counts[i] == 0 {
            let donor = (0..m).max_by_key(|&k| counts[k]).unwrap();
            counts[donor] -= 1;
            counts[i] += 1;
        }
    }
    counts
}

/// Monte Carlo realization of the kernel: assigns `units` discrete cake
/// units by categorical draws and scales counts back to cake units. For
/// heterogeneous problems the units are first apportioned across flavors
/// proportionally to flavor size. Deterministic given the seed.
pub fn sample_allocation(
    problem: &DivisionProblem,
    beta: f64,
    units: u64,
    seed: u64,
) -> Result<Allocation, DivisionError> {
    if units == 0 {
        return Err(DivisionError::ZeroUnits);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match problem.heterogeneity() {
        None => {
            let probs = homogeneous_probabilities(&problem.contributions(), beta)?;
            let counts = draw_counts(&mut rng, probs.as_slice(), units);
            let scale = problem.cake_size() / units as f64;
            Ok(Allocation::from_per_player(
                counts.into_iter().map(|c| c as f64 * scale).collect(),
            ))
        }
        Some((layout, _)) => {
            let m = layout.len();
            if units < m as u64 {
                return Err(DivisionError::InsufficientUnits { units, flavors: m });
            }
            let matrix = flavor_probabilities(problem, beta)?;
            let flavor_units = apportion_units(&layout.sizes, problem.cake_size(), units);
            let n = problem.n();
            let mut per_flavor = vec![vec![0.0; m]; n];
            for i in 0..m {
                let counts = draw_counts(&mut rng, &matrix.column(i), flavor_units[i]);
                // Scaling by this flavor's own unit count keeps the column
                // sum exactly at the flavor size.
                let scale = layout.sizes[i] / flavor_units[i] as f64;
                for (j, c) in counts.into_iter().enumerate() {
                    per_flavor[j][i] = c as f64 * scale;
                }
            }
            Ok(Allocation::from_per_flavor(per_flavor))
        }
    }
}
