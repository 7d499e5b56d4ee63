//! Boltzmann fair division of a shared resource.
//!
//! The cake (any divisible resource) is split by giving player j a share
//! proportional to e^{β E_j}, where E_j is the player's contribution and the
//! parameter β sets how strongly contribution is rewarded: β = 0 is an equal
//! split, large β gives the top contributor nearly everything. Each player's
//! satisfaction is a saturating utility of their share, and the solver picks
//! the β* that maximizes total utility.
//!
//! ```
//! use fairdiv_core::{optimize_beta, DivisionProblem, Player, SearchConfig};
//!
//! let players = vec![
//!     Player::new("ana", 5.0, 40.0),
//!     Player::new("bo", 25.0, 60.0),
//! ];
//! let problem = DivisionProblem::homogeneous(players, 100.0).unwrap();
//! let optimum = optimize_beta(&problem, SearchConfig::for_problem(&problem)).unwrap();
//! assert!(optimum.beta_star >= 0.0);
//! let total: f64 = optimum.allocation.per_player().iter().sum();
//! assert!((total - 100.0).abs() < 1e-9);
//! ```
//!
//! Heterogeneous problems add flavors: the cake is made of named parts with
//! sizes, each player weights the flavors, and the kernel divides each
//! flavor among the players who want it. Baseline criteria (equal split,
//! proportional to contribution or to need) are included for comparison.

pub mod baselines;
pub mod division;
pub mod model;
pub mod optimize;
pub mod utility;

pub use baselines::{
    comparison_report, deficiency, egalitarian_allocation, proportional_allocation, Basis,
    BaselineError, ComparisonReport, Criterion, CriterionReport,
};
pub use division::{
    boltzmann_allocation, flavor_probabilities, heterogeneous_allocation,
    homogeneous_allocation, homogeneous_probabilities, sample_allocation, DivisionError,
    ProbabilityMatrix, ProbabilityVector,
};
pub use model::{
    validate_problem, Allocation, DivisionProblem, FlavorLayout, Player, PreferenceMatrix,
    ValidationError, ValidationErrors, DEFAULT_CAKE_SIZE,
};
pub use optimize::{
    beta_grid, optimize_beta, small_beta_diagnostic, utility_curve, verify_extremum,
    OptimizeError, Optimum, SearchConfig, SmallBetaReport, UtilityCurve,
};
pub use utility::{marginal_utility, total_utility, utility, UtilityError, UtilityParams};
