//! Saturating per-player utility and its derivative.
//!
//! A player with need D and amplitude s values a share x at
//! `u(x) = s * tanh(x / D)`: linear with slope s/D for small shares,
//! saturating toward s once the share is several times the need.

use crate::model::{Allocation, Player};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UtilityError {
    #[error("share must be nonnegative (got {share})")]
    NegativeShare { share: f64 },
    #[error("allocation has {allocation} entries but there are {players} players")]
    LengthMismatch { allocation: usize, players: usize },
}

/// The two per-player constants the utility depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityParams {
    pub need: f64,
    pub amplitude: f64,
}

impl UtilityParams {
    pub fn new(need: f64, amplitude: f64) -> Self {
        UtilityParams { need, amplitude }
    }
}

impl From<&Player> for UtilityParams {
    fn from(player: &Player) -> Self {
        UtilityParams {
            need: player.need,
            amplitude: player.amplitude,
        }
    }
}

/// u(x) = s * tanh(x / D). Monotone in x, bounded by s.
pub fn utility(share: f64, params: UtilityParams) -> Result<f64, UtilityError> {
    // `!(share >= 0)` also catches NaN.
    if !(share >= 0.0) {
        return Err(UtilityError::NegativeShare { share });
    }
    Ok(params.amplitude * (share / params.need).tanh())
}

/// u'(x) = (s / D) * sech^2(x / D). Strictly positive, maximal at x = 0.
///
/// cosh overflows to infinity for large x/D, which divides through to an
/// exact 0 rather than NaN, so saturation is safe at any finite share.
pub fn marginal_utility(share: f64, params: UtilityParams) -> Result<f64, UtilityError> {
    if !(share >= 0.0) {
        return Err(UtilityError::NegativeShare { share });
    }
    let c = (share / params.need).cosh();
    Ok(params.amplitude / params.need / (c * c))
}

/// U = sum of u_j(N_j) over players. Allocation order must match player order.
pub fn total_utility(allocation: &Allocation, players: &[Player]) -> Result<f64, UtilityError> {
    if allocation.len() != players.len() {
        return Err(UtilityError::LengthMismatch {
            allocation: allocation.len(),
            players: players.len(),
        });
    }
    allocation
        .per_player()
        .iter()
        .zip(players)
        .map(|(&share, player)| utility(share, player.into()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DivisionProblem;

    const UNIT: UtilityParams = UtilityParams {
        need: 1.0,
        amplitude: 1.0,
    };

    #[test]
    fn zero_share_gives_zero_utility_and_peak_marginal() {
        assert_eq!(utility(0.0, UNIT).unwrap(), 0.0);
        let params = UtilityParams::new(4.0, 1.0);
        assert_eq!(marginal_utility(0.0, params).unwrap(), 0.25);
    }

    #[test]
    fn share_equal_to_need_gives_tanh_one() {
        let params = UtilityParams::new(24.0, 1.0);
        let u = utility(24.0, params).unwrap();
        assert!((u - 0.7615941559557649).abs() < 1e-15);
    }

    #[test]
    fn utility_saturates_toward_amplitude() {
        let u = utility(100.0, UtilityParams::new(4.0, 1.0)).unwrap();
        assert!(u > 0.999999);
        assert!(u <= 1.0);
    }

    #[test]
    fn huge_share_to_need_ratio_is_safe() {
        let params = UtilityParams::new(1e-300, 1.0);
        assert_eq!(utility(1.0, params).unwrap(), 1.0);
        assert_eq!(marginal_utility(1.0, params).unwrap(), 0.0);
    }

    #[test]
    fn negative_share_is_rejected() {
        assert!(matches!(
            utility(-0.1, UNIT),
            Err(UtilityError::NegativeShare { .. })
        ));
        assert!(matches!(
            marginal_utility(f64::NAN, UNIT),
            Err(UtilityError::NegativeShare { .. })
        ));
    }

    #[test]
    fn amplitude_two_doubles_both_functions_exactly() {
        for &x in &[0.0, 0.3, 1.7, 24.0, 80.0] {
            let base = UtilityParams::new(7.0, 1.0);
            let doubled = UtilityParams::new(7.0, 2.0);
            assert_eq!(
                utility(x, doubled).unwrap(),
                2.0 * utility(x, base).unwrap()
            );
            assert_eq!(
                marginal_utility(x, doubled).unwrap(),
                2.0 * marginal_utility(x, base).unwrap()
            );
        }
    }

    #[test]
    fn total_utility_sums_over_players() {
        let players = vec![
            Player::new("a", 1.0, 10.0),
            Player::new("b", 2.0, 20.0),
        ];
        let problem = DivisionProblem::homogeneous(players, 100.0).unwrap();
        let allocation = Allocation::from_per_player(vec![10.0, 20.0]);
        let expected = 2.0 * (1.0f64).tanh();
        let total = total_utility(&allocation, problem.players()).unwrap();
        assert!((total - expected).abs() < 1e-15);
    }

    #[test]
    fn mismatched_allocation_length_is_rejected() {
        let players = vec![Player::new("a", 1.0, 10.0)];
        let allocation = Allocation::from_per_player(vec![10.0, 20.0]);
        assert!(matches!(
            total_utility(&allocation, &players),
            Err(UtilityError::LengthMismatch {
                allocation: 2,
                players: 1
            })
        ));
    }

    #[test]
    fn marginal_matches_finite_difference() {
        let params = UtilityParams::new(13.0, 1.5);
        for &x in &[0.0, 0.5, 5.0, 13.0, 40.0] {
            let h = 1e-6;
            let fd = (utility(x + h, params).unwrap() - utility(x, params).unwrap()) / h;
            let analytic = marginal_utility(x, params).unwrap();
            assert!(
                (fd - analytic).abs() < 1e-5,
                "x={x}: fd={fd}, analytic={analytic}"
            );
        }
    }
}
