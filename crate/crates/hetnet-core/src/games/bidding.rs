//! User-bidding repeated game with deferred acceptance.
//!
//! Every user values BS j at `ω·log2(c)` and bids that value clipped at
//! zero. An unplaced user offers to its best not-yet-rejecting candidate;
//! each BS keeps the top `L_j` bids on its waiting list and permanently
//! rejects the rest — including previously held users it bumps. The game
//! ends when no waiting list changes, which takes at most K·J
//! state-changing rounds because every such round consumes at least one
//! first-time (user, BS) bid.

use crate::assign::{AssignMode, Assignment};
use crate::error::{Error, Result};
use crate::games::{link_valuation, matrix_digest, GameTraceRecord};
use crate::model::RateMatrix;

#[derive(Clone, Debug)]
pub struct BidGameConfig {
    /// Round budget; `None` means the structural K·J bound plus slack.
    pub max_rounds: Option<usize>,
    pub verbose_trace: bool,
}

impl Default for BidGameConfig {
    fn default() -> Self {
        BidGameConfig {
            max_rounds: None,
            verbose_trace: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BidOutcome {
    /// Final matching (waiting lists at termination).
    pub matching: Assignment,
    /// Static bid matrix `max(ω·log2 c, 0)`; zero on non-candidates.
    pub bids: Vec<Vec<f64>>,
    pub provider_utility: f64,
    /// State-changing rounds until quiescence.
    pub rounds: usize,
    pub converged: bool,
    pub trace: Vec<GameTraceRecord>,
    /// Per user, the sequence of (BS, bid value) offers it placed.
    pub bid_history: Vec<Vec<(usize, f64)>>,
}

/// Runs the bidding game to quiescence. The reported round count includes
/// the final quiescent round in which no waiting list changes.
pub fn bidding_game_run(
    c: &RateMatrix,
    weights: &[f64],
    capacities: &[usize],
    cfg: &BidGameConfig,
) -> Result<BidOutcome> {
    c.validate()?;
    let k_total = c.num_users();
    let j_total = c.num_bs();
    if weights.len() != k_total {
        return Err(Error::Dimension(
            "weight vector length differs from user count".into(),
        ));
    }
    if capacities.len() != j_total {
        return Err(Error::Dimension(
            "capacity vector length differs from BS count".into(),
        ));
    }

    // Static valuations and clipped bids. Preference order uses the raw
    // valuation (what the user actually wants); the payment is the clipped
    // bid.
    let mut valuation = vec![vec![f64::NEG_INFINITY; j_total]; k_total];
    let mut bids = vec![vec![0.0f64; j_total]; k_total];
    for k in 0..k_total {
        for j in 0..j_total {
            if c.candidate_mask[k][j] && c.rates[k][j] > 0.0 {
                valuation[k][j] = link_valuation(c.rates[k][j], weights[k]);
                bids[k][j] = valuation[k][j].max(0.0);
            }
        }
    }

    let mut placement: Vec<Option<usize>> = vec![None; k_total];
    let mut rejected = vec![vec![false; j_total]; k_total];
    // Waiting lists kept sorted by bid descending, ties to the lower user
    // index.
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); j_total];
    let mut bid_history: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k_total];
    let mut trace = Vec::new();
    let mut rounds = 0usize;
    let mut converged = false;
    let max_rounds = cfg.max_rounds.unwrap_or(k_total * j_total + 2);

    loop {
        // Unplaced users offer to their best remaining candidate.
        let mut arrivals: Vec<(usize, usize)> = Vec::new();
        for k in 0..k_total {
            if placement[k].is_some() {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..j_total {
                if rejected[k][j] || !valuation[k][j].is_finite() {
                    continue;
                }
                if best.map_or(true, |(_, bv)| valuation[k][j] > bv) {
                    best = Some((j, valuation[k][j]));
                }
            }
            if let Some((j, _)) = best {
                arrivals.push((k, j));
            }
        }

        if arrivals.is_empty() {
            // Quiescent round: every user is placed or rejected everywhere.
            // It counts towards the round total but changes nothing.
            converged = true;
            rounds += 1;
            break;
        }
        if rounds >= max_rounds {
            break;
        }
        rounds += 1;

        for &(k, j) in &arrivals {
            bid_history[k].push((j, bids[k][j]));
        }

        // Each BS pools its standing list with the arrivals, keeps the top
        // L_j bids, and permanently rejects the rest.
        for j in 0..j_total {
            let mut pool = lists[j].clone();
            pool.extend(arrivals.iter().filter(|(_, b)| *b == j).map(|(k, _)| *k));
            if pool.is_empty() {
                continue;
            }
            pool.sort_by(|&a, &b| bids[b][j].total_cmp(&bids[a][j]).then(a.cmp(&b)));
            let keep = pool.len().min(capacities[j]);
            for &k in &pool[keep..] {
                placement[k] = None;
                rejected[k][j] = true;
            }
            pool.truncate(keep);
            for &k in &pool {
                placement[k] = Some(j);
            }
            lists[j] = pool;
        }

        trace.push(bid_round_record(
            rounds,
            &bids,
            &valuation,
            &placement,
            &lists,
            cfg.verbose_trace,
        ));
    }

    let provider_utility = placement
        .iter()
        .enumerate()
        .filter_map(|(k, p)| p.map(|j| bids[k][j]))
        .sum();

    Ok(BidOutcome {
        matching: Assignment::from_choices(placement, j_total, AssignMode::Optional),
        bids,
        provider_utility,
        rounds,
        converged,
        trace,
        bid_history,
    })
}

fn bid_round_record(
    round: usize,
    bids: &[Vec<f64>],
    valuation: &[Vec<f64>],
    placement: &[Option<usize>],
    lists: &[Vec<usize>],
    verbose: bool,
) -> GameTraceRecord {
    let mut provider = 0.0;
    let mut user_sum = 0.0;
    for (k, p) in placement.iter().enumerate() {
        if let Some(j) = p {
            provider += bids[k][*j];
            user_sum += (valuation[k][*j] - bids[k][*j]).max(0.0);
        }
    }
    GameTraceRecord {
        round,
        prices_or_bids_digest: matrix_digest(bids),
        connections: placement.to_vec(),
        provider_utility: provider,
        user_utility_sum: user_sum,
        waiting_lists: lists.to_vec(),
        capacity_violations: 0,
        prices_or_bids: verbose.then(|| bids.to_vec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_users_one_slot() {
        // Bids 2·log2(4) = 4 and 2.5·log2(4) = 5; the higher bid wins and
        // the loser ends up rejected and unserved.
        let c = RateMatrix::full(vec![vec![4.0], vec![4.0]]).unwrap();
        let out =
            bidding_game_run(&c, &[2.0, 2.5], &[1], &BidGameConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.matching.choice(0), None);
        assert_eq!(out.matching.choice(1), Some(0));
        assert!((out.provider_utility - 5.0).abs() < 1e-12);
        assert_eq!(out.rounds, 2);
    }

    #[test]
    fn low_rate_user_bids_zero_and_is_kept() {
        let c = RateMatrix::full(vec![vec![0.9]]).unwrap();
        let out = bidding_game_run(&c, &[2.0], &[1], &BidGameConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.matching.choice(0), Some(0));
        assert_eq!(out.bids[0][0], 0.0);
        assert_eq!(out.provider_utility, 0.0);
    }

    #[test]
    fn everyone_places_when_capacity_suffices() {
        let c = RateMatrix::full(vec![
            vec![4.0, 2.0],
            vec![8.0, 3.0],
            vec![2.5, 6.0],
        ])
        .unwrap();
        let out = bidding_game_run(&c, &[1.0, 2.0, 3.0], &[2, 2], &BidGameConfig::default())
            .unwrap();
        assert!(out.converged);
        assert_eq!(out.matching.num_assigned(), 3);
    }

    #[test]
    fn bid_sequences_are_nonincreasing() {
        let c = RateMatrix::full(vec![
            vec![9.0, 5.0, 2.0],
            vec![8.0, 6.0, 3.0],
            vec![7.0, 4.0, 2.5],
            vec![6.5, 3.5, 1.5],
        ])
        .unwrap();
        let out = bidding_game_run(
            &c,
            &[2.0, 1.5, 3.0, 2.5],
            &[1, 1, 1],
            &BidGameConfig::default(),
        )
        .unwrap();
        assert!(out.converged);
        for history in &out.bid_history {
            for pair in history.windows(2) {
                assert!(pair[1].1 <= pair[0].1 + 1e-12);
            }
        }
    }

    #[test]
    fn provider_utility_is_nondecreasing_per_round() {
        let c = RateMatrix::full(vec![
            vec![9.0, 5.0],
            vec![8.0, 6.0],
            vec![7.0, 4.0],
            vec![6.5, 3.5],
            vec![5.0, 9.5],
        ])
        .unwrap();
        let out = bidding_game_run(
            &c,
            &[2.0, 1.5, 3.0, 2.5, 0.5],
            &[2, 1],
            &BidGameConfig::default(),
        )
        .unwrap();
        let mut prev = 0.0;
        for record in &out.trace {
            assert!(record.provider_utility >= prev - 1e-12);
            prev = record.provider_utility;
        }
    }

    #[test]
    fn terminates_within_the_structural_bound() {
        let c = RateMatrix::full(vec![
            vec![9.0, 5.0, 2.0],
            vec![8.0, 6.0, 3.0],
            vec![7.0, 4.0, 2.5],
            vec![6.5, 3.5, 1.5],
            vec![5.5, 2.8, 1.2],
        ])
        .unwrap();
        let out = bidding_game_run(
            &c,
            &[2.0, 1.5, 3.0, 2.5, 1.0],
            &[1, 1, 1],
            &BidGameConfig::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert!(out.rounds <= 15);
    }
}
