//! Provider-sets-price repeated game.
//!
//! Each round the provider probes every user with prices built from the
//! bracket midpoint `ŵ = (ω^u + ω^l)/2`; a user connecting raises the lower
//! bracket, a user declining lowers the upper one. Because the true weights
//! live in a finite set, the binary search pins each weight after
//! O(log2 |W|) rounds, after which the provider prices the revenue-optimal
//! assignment so that every served user pays exactly its valuation.

use crate::assign::{solve_max_weight, AssignMode, Assignment, WeightMatrix};
use crate::error::{Error, Result};
use crate::games::{link_valuation, matrix_digest, EvalForm, GameTraceRecord};
use crate::model::RateMatrix;

/// Default finite weight set: {0.5, 1.0, ..., 10.0}.
pub fn default_weight_set() -> Vec<f64> {
    (1..=20).map(|i| i as f64 * 0.5).collect()
}

/// Myopic best response of one user to a price row: the candidate BS with
/// the largest surplus `ω·log2(c) − p`, taken only when the valuation
/// covers the price. Ties break to the lowest BS index.
pub fn user_best_response(
    prices: &[f64],
    rates: &[f64],
    candidates: &[bool],
    omega: f64,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for j in 0..rates.len() {
        if !candidates[j] || rates[j] <= 0.0 {
            continue;
        }
        let surplus = link_valuation(rates[j], omega) - prices[j];
        if best.map_or(true, |(_, bs)| surplus > bs) {
            best = Some((j, surplus));
        }
    }
    match best {
        Some((j, surplus)) if surplus >= 0.0 => Some(j),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct PriceGameConfig {
    /// Finite weight set the users draw from; sorted and deduplicated on
    /// entry.
    pub weight_set: Vec<f64>,
    /// Margin added to unselected pairs' prices so they stay unattractive.
    pub epsilon: f64,
    pub max_rounds: usize,
    pub eval_form: EvalForm,
    /// Attach full price matrices to every trace record.
    pub verbose_trace: bool,
}

impl Default for PriceGameConfig {
    fn default() -> Self {
        PriceGameConfig {
            weight_set: default_weight_set(),
            epsilon: 1e-6,
            max_rounds: 256,
            eval_form: EvalForm::default(),
            verbose_trace: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PriceGameOutcome {
    /// Final price matrix: the valuation on selected pairs, valuation + ε
    /// elsewhere (floored at zero).
    pub prices: Vec<Vec<f64>>,
    pub assignment: Assignment,
    /// The provider's estimate ŵ of each user's weight after probing.
    pub estimated_weights: Vec<f64>,
    pub provider_utility: f64,
    /// Probing rounds each user's binary search took.
    pub probing_rounds: Vec<usize>,
    /// Per-user bracket [ω^l, ω^u] per round, for bracket-invariant checks.
    pub bracket_trace: Vec<Vec<(f64, f64)>>,
    pub rounds: usize,
    pub converged: bool,
    pub trace: Vec<GameTraceRecord>,
}

/// Runs the price game to termination.
pub fn price_game_run(
    c: &RateMatrix,
    true_weights: &[f64],
    capacities: &[usize],
    cfg: &PriceGameConfig,
) -> Result<PriceGameOutcome> {
    c.validate()?;
    let k_total = c.num_users();
    let j_total = c.num_bs();
    if true_weights.len() != k_total {
        return Err(Error::Dimension(
            "weight vector length differs from user count".into(),
        ));
    }
    if capacities.len() != j_total {
        return Err(Error::Dimension(
            "capacity vector length differs from BS count".into(),
        ));
    }
    let mut weight_set = cfg.weight_set.clone();
    weight_set.sort_by(f64::total_cmp);
    weight_set.dedup();
    if weight_set.is_empty() || weight_set[0] <= 0.0 {
        return Err(Error::Domain(
            "weight set must be nonempty and positive".into(),
        ));
    }
    for (k, w) in true_weights.iter().enumerate() {
        if !weight_set.contains(w) {
            return Err(Error::Domain(format!(
                "user {k} weight {w} is not a member of the weight set"
            )));
        }
    }
    let w_max = *weight_set.last().unwrap();
    // Bracket resolution: once an interval is narrower than the smallest
    // gap in W it contains at most one member.
    let resolution = weight_set
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(w_max, f64::min);

    let mut upper = vec![w_max; k_total];
    let mut lower = vec![0.0f64; k_total];
    let mut resolved = vec![false; k_total];
    let mut estimate = vec![weight_set[0]; k_total];
    let mut probing_rounds = vec![0usize; k_total];
    let mut bracket_trace: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut trace = Vec::new();
    let mut rounds = 0usize;

    let snap_estimate = |lo: f64, hi: f64| -> f64 {
        // The unique member of W inside the final bracket; the midpoint
        // fallback only triggers for users whose weight was unobservable.
        weight_set
            .iter()
            .copied()
            .find(|w| *w >= lo && *w <= hi)
            .unwrap_or_else(|| {
                let mid = (lo + hi) / 2.0;
                weight_set
                    .iter()
                    .copied()
                    .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()))
                    .unwrap()
            })
    };

    while resolved.iter().any(|r| !r) && rounds < cfg.max_rounds {
        // Provider prices from the probe weights.
        let mut probe = vec![0.0f64; k_total];
        let mut prices = vec![vec![0.0f64; j_total]; k_total];
        for k in 0..k_total {
            probe[k] = if resolved[k] {
                estimate[k]
            } else {
                (upper[k] + lower[k]) / 2.0
            };
            for j in 0..j_total {
                if c.candidate_mask[k][j] && c.rates[k][j] > 0.0 {
                    prices[k][j] = link_valuation(c.rates[k][j], probe[k]).max(0.0);
                }
            }
        }

        // User responses against their true weights.
        let connections: Vec<Option<usize>> = (0..k_total)
            .map(|k| {
                user_best_response(&prices[k], &c.rates[k], &c.candidate_mask[k], true_weights[k])
            })
            .collect();

        // Bracket updates for users still being probed.
        for k in 0..k_total {
            if resolved[k] {
                continue;
            }
            if connections[k].is_some() {
                lower[k] = probe[k];
            } else {
                upper[k] = probe[k];
            }
            probing_rounds[k] += 1;
            if upper[k] - lower[k] < resolution {
                resolved[k] = true;
                estimate[k] = snap_estimate(lower[k], upper[k]);
            }
        }
        bracket_trace.push((0..k_total).map(|k| (lower[k], upper[k])).collect());

        rounds += 1;
        trace.push(round_record(
            rounds,
            &prices,
            &connections,
            c,
            true_weights,
            capacities,
            cfg.verbose_trace,
        ));
    }

    let converged = resolved.iter().all(|r| *r);

    // Final pricing: estimate the valuation matrix, pick the
    // revenue-optimal assignment, and price it so selected users break
    // even while every other pair stays strictly unattractive.
    let mut valuation = vec![vec![0.0f64; j_total]; k_total];
    let mut allowed = vec![vec![false; j_total]; k_total];
    for k in 0..k_total {
        for j in 0..j_total {
            if c.candidate_mask[k][j] && c.rates[k][j] > 0.0 {
                valuation[k][j] = cfg.eval_form.valuation(c.rates[k][j], estimate[k]);
                allowed[k][j] = true;
            }
        }
    }
    let weights = WeightMatrix::with_mask(valuation.clone(), capacities.to_vec(), allowed)?;
    let assignment = solve_max_weight(&weights, AssignMode::Optional)?;

    let mut prices = vec![vec![0.0f64; j_total]; k_total];
    for k in 0..k_total {
        for j in 0..j_total {
            prices[k][j] = if assignment.is_assigned(k, j) {
                valuation[k][j].max(0.0)
            } else {
                (valuation[k][j] + cfg.epsilon).max(0.0)
            };
        }
    }
    let provider_utility = assignment.total_weight(&valuation);

    let connections: Vec<Option<usize>> = (0..k_total)
        .map(|k| user_best_response(&prices[k], &c.rates[k], &c.candidate_mask[k], true_weights[k]))
        .collect();
    trace.push(round_record(
        rounds + 1,
        &prices,
        &connections,
        c,
        true_weights,
        capacities,
        cfg.verbose_trace,
    ));

    Ok(PriceGameOutcome {
        prices,
        assignment,
        estimated_weights: estimate,
        provider_utility,
        probing_rounds,
        bracket_trace,
        rounds: rounds + 1,
        converged,
        trace,
    })
}

fn round_record(
    round: usize,
    prices: &[Vec<f64>],
    connections: &[Option<usize>],
    c: &RateMatrix,
    true_weights: &[f64],
    capacities: &[usize],
    verbose: bool,
) -> GameTraceRecord {
    let mut provider = 0.0;
    let mut user_sum = 0.0;
    let mut loads = vec![0usize; capacities.len()];
    for (k, connection) in connections.iter().enumerate() {
        if let Some(j) = connection {
            provider += prices[k][*j];
            user_sum += link_valuation(c.rates[k][*j], true_weights[k]) - prices[k][*j];
            loads[*j] += 1;
        }
    }
    let capacity_violations = loads
        .iter()
        .zip(capacities)
        .map(|(l, cap)| l.saturating_sub(*cap))
        .sum();
    GameTraceRecord {
        round,
        prices_or_bids_digest: matrix_digest(prices),
        connections: connections.to_vec(),
        provider_utility: provider,
        user_utility_sum: user_sum,
        waiting_lists: Vec::new(),
        capacity_violations,
        prices_or_bids: verbose.then(|| prices.to_vec()),
    }
}
