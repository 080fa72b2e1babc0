//! Equilibrium and stability verifiers for the two game protocols.

use crate::assign::Assignment;
use crate::games::link_valuation;
use crate::model::RateMatrix;

/// A profitable unilateral deviation found by [`verify_ne`].
#[derive(Clone, Debug, PartialEq)]
pub enum NeWitness {
    /// User `user` strictly improves its surplus by moving from its current
    /// connection to `to` (`None` = disconnect).
    UserDeviation {
        user: usize,
        to: Option<usize>,
        gain: f64,
    },
    /// The provider strictly improves its revenue by repricing the single
    /// pair (`user`, `bs`) to `price`.
    ProviderDeviation {
        user: usize,
        bs: usize,
        price: f64,
        gain: f64,
    },
}

const NE_TOL: f64 = 1e-9;

/// Checks whether (prices, assignment) is a Nash equilibrium: no user can
/// strictly improve its surplus by switching or disconnecting, and no
/// single-entry price change lets the provider strictly raise its revenue
/// while users keep best-responding and the load caps stay respected.
///
/// User surpluses are compared raw (a connected user at negative surplus is
/// not best-responding: disconnecting improves it to zero).
pub fn verify_ne(
    prices: &[Vec<f64>],
    assignment: &Assignment,
    c: &RateMatrix,
    weights: &[f64],
    capacities: &[usize],
) -> (bool, Option<NeWitness>) {
    let k_total = c.num_users();
    let j_total = c.num_bs();
    let surplus = |k: usize, j: usize| -> f64 {
        if c.candidate_mask[k][j] && c.rates[k][j] > 0.0 {
            link_valuation(c.rates[k][j], weights[k]) - prices[k][j]
        } else {
            f64::NEG_INFINITY
        }
    };

    // User side: current raw surplus against every alternative.
    for k in 0..k_total {
        let current = assignment.choice(k).map_or(0.0, |j| surplus(k, j));
        if current < -NE_TOL {
            return (
                false,
                Some(NeWitness::UserDeviation {
                    user: k,
                    to: None,
                    gain: -current,
                }),
            );
        }
        for j in 0..j_total {
            if assignment.choice(k) == Some(j) {
                continue;
            }
            let s = surplus(k, j);
            if s > current + NE_TOL {
                return (
                    false,
                    Some(NeWitness::UserDeviation {
                        user: k,
                        to: Some(j),
                        gain: s - current,
                    }),
                );
            }
        }
    }

    // Provider side: for each pair, the best single-entry reprice moves
    // user k onto BS j at the highest price that still wins its best
    // response. The deviation must leave every load cap satisfied.
    let loads = assignment.bs_loads();
    for k in 0..k_total {
        let current_payment = assignment.choice(k).map_or(0.0, |j| prices[k][j]);
        for j in 0..j_total {
            if !c.candidate_mask[k][j] || c.rates[k][j] <= 0.0 {
                continue;
            }
            let value = link_valuation(c.rates[k][j], weights[k]);
            // Best alternative surplus the user could get elsewhere (or by
            // disconnecting).
            let mut alt = 0.0f64;
            for other in 0..j_total {
                if other != j {
                    let s = surplus(k, other);
                    if s > alt {
                        alt = s;
                    }
                }
            }
            let best_price = value - alt;
            if best_price < 0.0 {
                continue;
            }
            // Capacity after moving user k onto BS j.
            let occupied = if assignment.choice(k) == Some(j) {
                loads[j]
            } else {
                loads[j] + 1
            };
            if occupied > capacities[j] {
                continue;
            }
            let gain = best_price - current_payment;
            if gain > NE_TOL {
                return (
                    false,
                    Some(NeWitness::ProviderDeviation {
                        user: k,
                        bs: j,
                        price: best_price,
                        gain,
                    }),
                );
            }
        }
    }

    (true, None)
}

/// A user–BS pair that blocks a bidding-game matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockingPair {
    pub user: usize,
    pub bs: usize,
}

/// Checks stability of a bidding-game matching: no pair (k, j) exists where
/// user k strictly prefers BS j (by raw valuation `ω·log2 c`; an unplaced
/// user prefers j only at positive valuation) and BS j would take user k —
/// it has slack, or holds a bid strictly below k's clipped bid.
pub fn verify_stability(
    matching: &Assignment,
    c: &RateMatrix,
    weights: &[f64],
    capacities: &[usize],
) -> (bool, Option<BlockingPair>) {
    let k_total = c.num_users();
    let j_total = c.num_bs();
    let valuation = |k: usize, j: usize| -> f64 {
        if c.candidate_mask[k][j] && c.rates[k][j] > 0.0 {
            link_valuation(c.rates[k][j], weights[k])
        } else {
            f64::NEG_INFINITY
        }
    };
    let loads = matching.bs_loads();

    for k in 0..k_total {
        // Preference floor: current valuation when placed, zero otherwise
        // (connecting at a nonpositive valuation is no strict improvement).
        let floor = match matching.choice(k) {
            Some(j) => valuation(k, j),
            None => 0.0,
        };
        for j in 0..j_total {
            if matching.choice(k) == Some(j) {
                continue;
            }
            let v = valuation(k, j);
            if !(v > floor + 1e-12) {
                continue;
            }
            let bid = v.max(0.0);
            let has_slack = loads[j] < capacities[j];
            let weakest_held = matching
                .assigned_pairs()
                .filter(|(_, bj)| *bj == j)
                .map(|(other, _)| valuation(other, j).max(0.0))
                .fold(f64::INFINITY, f64::min);
            if has_slack || weakest_held < bid - 1e-12 {
                return (false, Some(BlockingPair { user: k, bs: j }));
            }
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::AssignMode;
    use crate::games::{bidding_game_run, price_game_run, BidGameConfig, PriceGameConfig};

    #[test]
    fn price_game_outcome_is_an_equilibrium() {
        let c = RateMatrix::full(vec![vec![4.0]]).unwrap();
        let cfg = PriceGameConfig {
            weight_set: vec![1.0, 2.0, 3.0, 4.0],
            ..PriceGameConfig::default()
        };
        let out = price_game_run(&c, &[3.0], &[1], &cfg).unwrap();
        let (ok, witness) = verify_ne(&out.prices, &out.assignment, &c, &[3.0], &[1]);
        assert!(ok, "unexpected witness: {witness:?}");
    }

    #[test]
    fn overpriced_pair_breaks_best_response_consistency() {
        let c = RateMatrix::full(vec![vec![4.0]]).unwrap();
        let cfg = PriceGameConfig {
            weight_set: vec![1.0, 2.0, 3.0, 4.0],
            ..PriceGameConfig::default()
        };
        let out = price_game_run(&c, &[3.0], &[1], &cfg).unwrap();
        // Raising the price on the served pair leaves the user connected at
        // negative surplus, so disconnecting becomes the improving move.
        let mut prices = out.prices.clone();
        prices[0][0] += 0.5;
        let (ok, witness) = verify_ne(&prices, &out.assignment, &c, &[3.0], &[1]);
        assert!(!ok);
        assert!(matches!(
            witness,
            Some(NeWitness::UserDeviation { user: 0, to: None, .. })
        ));
    }

    #[test]
    fn zero_prices_under_capacity_are_not_an_equilibrium() {
        let c = RateMatrix::full(vec![vec![4.0]]).unwrap();
        let mut a = Assignment::empty(1, 1, AssignMode::Optional);
        a.set(0, Some(0));
        let prices = vec![vec![0.0]];
        let (ok, witness) = verify_ne(&prices, &a, &c, &[3.0], &[1]);
        assert!(!ok);
        assert!(matches!(
            witness,
            Some(NeWitness::ProviderDeviation { user: 0, bs: 0, .. })
        ));
    }

    #[test]
    fn bidding_outcome_is_stable() {
        let c = RateMatrix::full(vec![
            vec![9.0, 5.0],
            vec![8.0, 6.0],
            vec![7.0, 4.0],
            vec![6.5, 3.5],
        ])
        .unwrap();
        let weights = [2.0, 1.5, 3.0, 2.5];
        let caps = [1usize, 2];
        let out = bidding_game_run(&c, &weights, &caps, &BidGameConfig::default()).unwrap();
        let (stable, pair) = verify_stability(&out.matching, &c, &weights, &caps);
        assert!(stable, "blocking pair: {pair:?}");
    }

    #[test]
    fn constructed_blocking_pair_is_detected() {
        let c = RateMatrix::full(vec![vec![8.0, 2.0], vec![4.0, 2.0]]).unwrap();
        let weights = [2.0, 2.0];
        let caps = [1usize, 1];
        // User 0 (valuation 6 at BS 0) is parked on BS 1 while the weaker
        // user 1 (valuation 4) holds BS 0.
        let mut m = Assignment::empty(2, 2, AssignMode::Optional);
        m.set(0, Some(1));
        m.set(1, Some(0));
        let (stable, pair) = verify_stability(&m, &c, &weights, &caps);
        assert!(!stable);
        assert_eq!(pair, Some(BlockingPair { user: 0, bs: 0 }));
    }

    #[test]
    fn empty_matching_with_worthless_links_is_stable() {
        let c = RateMatrix::full(vec![vec![1.0, 0.8], vec![0.5, 1.0]]).unwrap();
        let m = Assignment::empty(2, 2, AssignMode::Optional);
        let (stable, _) = verify_stability(&m, &c, &[2.0, 3.0], &[1, 1]);
        assert!(stable);
    }
}
