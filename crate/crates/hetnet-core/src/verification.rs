//! Randomized oracle and invariant suites. The CLI `verify` subcommand and
//! the acceptance test target both run these; instance generation is
//! seeded, so every report is reproducible.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assign::{
    brute_force_assignment, greedy_global, greedy_per_bs, propfair_optimal, solve_max_weight,
    sum_rate_optimal, ub1, utility, AssignMode, WeightMatrix,
};
use crate::error::Result;
use crate::experiment::{
    run_bias_experiment, run_centralized_experiment, ExperimentConfig, ExperimentResult,
};
use crate::games::{
    bidding_game_run, price_game_run, verify_ne, verify_stability, BidGameConfig, PriceGameConfig,
};
use crate::joint::{
    brute_force_joint, dual_decomposition, dual_decomposition_mandatory, DualParams,
};
use crate::model::RateMatrix;
use crate::par;

/// Outcome of one verification suite.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status}  {} — {}", self.name, self.details)
    }
}

fn rng_for(seed: u64, instance: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(instance as u64 + 1);
    rng
}

/// Random association instance: K ≤ 10, J ≤ 4, capacities ≤ 3, weights
/// either integer-valued or real, a sprinkling of forbidden pairs.
fn random_weight_instance(rng: &mut ChaCha8Rng) -> WeightMatrix {
    let k = rng.gen_range(1..=10);
    let j = rng.gen_range(1..=4);
    let capacities: Vec<usize> = (0..j).map(|_| rng.gen_range(1..=3)).collect();
    let integer_valued = rng.gen_bool(0.5);
    let mut w = vec![vec![0.0; j]; k];
    let mut allowed = vec![vec![true; j]; k];
    for row in 0..k {
        for col in 0..j {
            w[row][col] = if integer_valued {
                rng.gen_range(-5i32..=10) as f64
            } else {
                rng.gen_range(-5.0..10.0)
            };
            if rng.gen_bool(0.15) {
                allowed[row][col] = false;
                w[row][col] = 0.0;
            }
        }
    }
    WeightMatrix::with_mask(w, capacities, allowed).expect("generated instance is valid")
}

/// Random rate matrix with rates spread across (0.1, 20) so both c > 1 and
/// c ≤ 1 regimes appear.
fn random_rate_instance(rng: &mut ChaCha8Rng, max_k: usize, max_j: usize) -> (RateMatrix, Vec<usize>) {
    let k = rng.gen_range(1..=max_k);
    let j = rng.gen_range(1..=max_j);
    let capacities: Vec<usize> = (0..j).map(|_| rng.gen_range(1..=3)).collect();
    let mut rates = vec![vec![0.0; j]; k];
    let mut mask = vec![vec![true; j]; k];
    for row in 0..k {
        for col in 0..j {
            rates[row][col] = 10f64.powf(rng.gen_range(-1.0..1.3));
            if rng.gen_bool(0.1) {
                mask[row][col] = false;
                rates[row][col] = 0.0;
            }
        }
    }
    (
        RateMatrix::new(rates, mask).expect("generated instance is valid"),
        capacities,
    )
}

/// Flow solver against the brute-force oracle: exact value agreement,
/// integrality, and capacity/row feasibility, in both row-sum modes.
pub fn check_assignment_oracle(instances: usize, seed: u64) -> CheckReport {
    let failures: Vec<String> = par::map_indexed(instances, |i| -> Option<String> {
        let mut rng = rng_for(seed, i);
        let w = random_weight_instance(&mut rng);

        let exact = match solve_max_weight(&w, AssignMode::Optional) {
            Ok(a) => a,
            Err(e) => return Some(format!("instance {i}: solver error {e}")),
        };
        let oracle = match brute_force_assignment(&w, AssignMode::Optional) {
            Ok(a) => a,
            Err(e) => return Some(format!("instance {i}: oracle error {e}")),
        };
        let exact_value = exact.total_weight(&w.w);
        let oracle_value = oracle.total_weight(&w.w);
        if (exact_value - oracle_value).abs() > 1e-9 {
            return Some(format!(
                "instance {i}: flow value {exact_value} vs oracle {oracle_value}"
            ));
        }
        if let Err(e) = exact.validate(&w.capacities, Some(&w.allowed)) {
            return Some(format!("instance {i}: infeasible flow assignment: {e}"));
        }
        // Integrality is structural for the flow solver; check the dense
        // view anyway.
        let x = exact.as_matrix();
        if x.iter().flatten().any(|&v| v > 1) {
            return Some(format!("instance {i}: non-binary entry"));
        }

        // Mandatory mode on the same instance when feasible for both.
        let cap_sum: usize = w.capacities.iter().sum();
        if cap_sum >= w.num_users() {
            match (
                solve_max_weight(&w, AssignMode::Mandatory),
                brute_force_assignment(&w, AssignMode::Mandatory),
            ) {
                (Ok(a), Ok(b)) => {
                    let av = a.total_weight(&w.w);
                    let bv = b.total_weight(&w.w);
                    if (av - bv).abs() > 1e-9 {
                        return Some(format!(
                            "instance {i}: mandatory flow {av} vs oracle {bv}"
                        ));
                    }
                    if let Err(e) = a.validate(&w.capacities, Some(&w.allowed)) {
                        return Some(format!("instance {i}: mandatory infeasible: {e}"));
                    }
                }
                (Err(_), Err(_)) => {}
                (a, b) => {
                    return Some(format!(
                        "instance {i}: feasibility disagreement: flow {:?} oracle {:?}",
                        a.is_ok(),
                        b.is_ok()
                    ));
                }
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();

    CheckReport {
        name: "assignment solver matches brute force",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{instances} instances, exact agreement, all assignments feasible and binary")
        } else {
            failures.join("; ")
        },
    }
}

/// Greedy baselines never beat the exact solver.
pub fn check_greedy_dominance(instances: usize, seed: u64) -> CheckReport {
    let failures: Vec<String> = par::map_indexed(instances, |i| -> Option<String> {
        let mut rng = rng_for(seed, i);
        let w = random_weight_instance(&mut rng);
        let exact = solve_max_weight(&w, AssignMode::Optional).ok()?;
        let exact_value = exact.total_weight(&w.w);
        for (label, greedy) in [
            ("global", greedy_global(&w, false)),
            ("per-BS", greedy_per_bs(&w, false)),
        ] {
            if let Err(e) = greedy.validate(&w.capacities, Some(&w.allowed)) {
                return Some(format!("instance {i}: {label} greedy infeasible: {e}"));
            }
            let v = greedy.total_weight(&w.w);
            if v > exact_value + 1e-9 {
                return Some(format!(
                    "instance {i}: {label} greedy {v} beats exact {exact_value}"
                ));
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();

    CheckReport {
        name: "greedy values never exceed the exact optimum",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{instances} instances")
        } else {
            failures.join("; ")
        },
    }
}

/// Proportional fairness: the log-weight assignment evaluates identically
/// under the sum-of-logs and log-of-sum objectives, stays under the UB1
/// bound, and matches a brute-force search over log weights.
pub fn check_propfair_equivalence(instances: usize, seed: u64) -> CheckReport {
    let failures: Vec<String> = par::map_indexed(instances, |i| -> Option<String> {
        let mut rng = rng_for(seed, i);
        let (rates, capacities) = random_rate_instance(&mut rng, 10, 4);

        let (assignment, value) = match propfair_optimal(&rates, &capacities) {
            Ok(v) => v,
            Err(e) => return Some(format!("instance {i}: {e}")),
        };
        // Sum over pairs of log2(c) must equal sum over users of
        // log2(served rate).
        let pair_sum: f64 = assignment
            .assigned_pairs()
            .map(|(k, j)| rates.rates[k][j].log2())
            .sum();
        if (pair_sum - value).abs() > 1e-9 {
            return Some(format!(
                "instance {i}: objective forms disagree: {pair_sum} vs {value}"
            ));
        }
        let bound = ub1(&rates);
        if value > bound + 1e-9 {
            return Some(format!("instance {i}: value {value} above UB1 {bound}"));
        }
        // Independent oracle on the log weights.
        let log_weights = match WeightMatrix::log2_rates(&rates, &capacities) {
            Ok(w) => w,
            Err(e) => return Some(format!("instance {i}: {e}")),
        };
        let oracle = match brute_force_assignment(&log_weights, AssignMode::Optional) {
            Ok(a) => a,
            Err(e) => return Some(format!("instance {i}: oracle error {e}")),
        };
        let oracle_value = match utility(&oracle, &rates, 1) {
            Ok(v) => v,
            Err(e) => return Some(format!("instance {i}: {e}")),
        };
        if (oracle_value - value).abs() > 1e-9 {
            return Some(format!(
                "instance {i}: oracle {oracle_value} vs solver {value}"
            ));
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();

    CheckReport {
        name: "prop-fair objectives agree and respect UB1",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{instances} instances within 1e-9")
        } else {
            failures.join("; ")
        },
    }
}

/// Dual decomposition against the joint brute-force oracle, plus the
/// structural claims on the returned solution.
pub fn check_joint_oracle(instances: usize, seed: u64) -> CheckReport {
    let params = DualParams::default();
    let failures: Vec<String> = par::map_indexed(instances, |i| -> Option<String> {
        let mut rng = rng_for(seed, i);
        let (rates, capacities) = random_rate_instance(&mut rng, 8, 3);

        let dual = match dual_decomposition(&rates, &capacities, &params) {
            Ok(o) => o,
            Err(e) => return Some(format!("instance {i}: dual error {e}")),
        };
        let (_, oracle_beta, oracle_value) =
            match brute_force_joint(&rates, &capacities, AssignMode::Optional) {
                Ok(o) => o,
                Err(e) => return Some(format!("instance {i}: oracle error {e}")),
            };
        let _ = oracle_beta;
        if (dual.value - oracle_value).abs() > 1e-3 {
            return Some(format!(
                "instance {i}: dual {} vs oracle {} after {} iterations",
                dual.value, oracle_value, dual.iterations
            ));
        }
        // Equal-share structure of the returned allocation.
        let loads = dual.assignment.bs_loads();
        for (k, j) in dual.assignment.assigned_pairs() {
            let expected = 1.0 / loads[j] as f64;
            if dual.beta.beta[k][j] != expected {
                return Some(format!("instance {i}: beta[{k}][{j}] not the equal share"));
            }
        }
        if dual.beta.validate(&dual.assignment).is_err() {
            return Some(format!("instance {i}: inconsistent allocation"));
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();

    CheckReport {
        name: "dual decomposition reaches the joint oracle optimum",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{instances} instances within 1e-3")
        } else {
            failures.join("; ")
        },
    }
}

/// Optional-mode value dominates mandatory-mode value whenever the latter
/// is feasible, for both the dual solver and the oracle.
pub fn check_optional_dominates_mandatory(instances: usize, seed: u64) -> CheckReport {
    let params = DualParams::default();
    let failures: Vec<String> = par::map_indexed(instances, |i| -> Option<String> {
        let mut rng = rng_for(seed, i);
        // Force feasibility: capacities that cover every user.
        let k = rng.gen_range(1..=8);
        let j = rng.gen_range(1..=3);
        let mut capacities: Vec<usize> = (0..j).map(|_| rng.gen_range(1..=3)).collect();
        while capacities.iter().sum::<usize>() < k {
            let slot = rng.gen_range(0..j);
            capacities[slot] += 1;
        }
        let mut rates = vec![vec![0.0; j]; k];
        for row in rates.iter_mut() {
            for cell in row.iter_mut() {
                *cell = 10f64.powf(rng.gen_range(-1.0..1.3));
            }
        }
        let rates = RateMatrix::full(rates).ok()?;

        let optional = match dual_decomposition(&rates, &capacities, &params) {
            Ok(o) => o,
            Err(e) => return Some(format!("instance {i}: optional error {e}")),
        };
        let mandatory = match dual_decomposition_mandatory(&rates, &capacities, &params) {
            Ok(o) => o,
            Err(e) => return Some(format!("instance {i}: mandatory error {e}")),
        };
        if optional.value < mandatory.value - 1e-9 {
            return Some(format!(
                "instance {i}: optional {} below mandatory {}",
                optional.value, mandatory.value
            ));
        }
        let (_, _, oracle_optional) =
            brute_force_joint(&rates, &capacities, AssignMode::Optional).ok()?;
        let (_, _, oracle_mandatory) =
            brute_force_joint(&rates, &capacities, AssignMode::Mandatory).ok()?;
        if oracle_optional < oracle_mandatory - 1e-12 {
            return Some(format!(
                "instance {i}: oracle optional {oracle_optional} below mandatory {oracle_mandatory}"
            ));
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();

    CheckReport {
        name: "optional mode dominates mandatory mode",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{instances} feasible instances, zero violations")
        } else {
            failures.join("; ")
        },
    }
}

/// Price game: probing-round bound, exact weight recovery, break-even
/// users, revenue optimality against the oracle, and the NE check.
pub fn check_price_game_equilibrium(instances: usize, seed: u64) -> CheckReport {
    let weight_set: Vec<f64> = (1..=20).map(|i| i as f64 * 0.5).collect();
    let bound = (weight_set.len() as f64).log2().ceil() as usize + 2;
    let failures: Vec<String> = par::map_indexed(instances, |i| -> Option<String> {
        let mut rng = rng_for(seed, i);
        let k = rng.gen_range(1..=6);
        let j = rng.gen_range(1..=3);
        let capacities: Vec<usize> = (0..j).map(|_| rng.gen_range(1..=2)).collect();
        // Rates above 2 keep every link's log2 value positive, matching the
        // regime the probing protocol assumes.
        let mut rates = vec![vec![0.0; j]; k];
        for row in rates.iter_mut() {
            for cell in row.iter_mut() {
                *cell = rng.gen_range(2.5..24.0);
            }
        }
        let rates = RateMatrix::full(rates).ok()?;
        let weights: Vec<f64> = (0..k)
            .map(|_| weight_set[rng.gen_range(0..weight_set.len())])
            .collect();
        let cfg = PriceGameConfig {
            weight_set: weight_set.clone(),
            ..PriceGameConfig::default()
        };

        let out = match price_game_run(&rates, &weights, &capacities, &cfg) {
            Ok(o) => o,
            Err(e) => return Some(format!("instance {i}: {e}")),
        };
        if !out.converged {
            return Some(format!("instance {i}: probing did not converge"));
        }
        if let Some(r) = out.probing_rounds.iter().find(|&&r| r > bound) {
            return Some(format!("instance {i}: {r} probing rounds, bound {bound}"));
        }
        if out.estimated_weights != weights {
            return Some(format!(
                "instance {i}: recovered weights {:?} differ from truth {:?}",
                out.estimated_weights, weights
            ));
        }
        // Every served user breaks even at the final prices.
        for (k_idx, j_idx) in out.assignment.assigned_pairs() {
            let surplus =
                weights[k_idx] * rates.rates[k_idx][j_idx].log2() - out.prices[k_idx][j_idx];
            if surplus.abs() > 1e-9 {
                return Some(format!(
                    "instance {i}: user {k_idx} keeps surplus {surplus}"
                ));
            }
        }
        // Revenue equals the brute-force optimum of the valuation matrix.
        let mut valuation = vec![vec![0.0; rates.num_bs()]; rates.num_users()];
        for (row, value_row) in valuation.iter_mut().enumerate() {
            for (col, cell) in value_row.iter_mut().enumerate() {
                *cell = weights[row] * rates.rates[row][col].log2();
            }
        }
        let value_weights = WeightMatrix::new(valuation.clone(), capacities.clone()).ok()?;
        let oracle = brute_force_assignment(&value_weights, AssignMode::Optional).ok()?;
        let oracle_revenue = oracle.total_weight(&valuation);
        if (out.provider_utility - oracle_revenue).abs() > 1e-9 {
            return Some(format!(
                "instance {i}: revenue {} vs oracle optimum {}",
                out.provider_utility, oracle_revenue
            ));
        }
        let (is_ne, witness) = verify_ne(&out.prices, &out.assignment, &rates, &weights, &capacities);
        if !is_ne {
            return Some(format!("instance {i}: not an equilibrium: {witness:?}"));
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();

    CheckReport {
        name: "price game reaches a break-even equilibrium at optimal revenue",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{instances} instances, probing bound {bound} rounds")
        } else {
            failures.join("; ")
        },
    }
}

/// Bidding game: round bound, stability, nonincreasing user bids,
/// nondecreasing full-list minimum bids, nondecreasing provider revenue.
pub fn check_bidding_stability(instances: usize, seed: u64) -> CheckReport {
    let failures: Vec<String> = par::map_indexed(instances, |i| -> Option<String> {
        let mut rng = rng_for(seed, i);
        let j = rng.gen_range(1..=4);
        let capacities: Vec<usize> = (0..j).map(|_| rng.gen_range(1..=3)).collect();
        let cap_sum: usize = capacities.iter().sum();
        // Oversubscribed systems, the regime the bidding protocol assumes.
        let k = cap_sum + rng.gen_range(1..=6);
        let mut rates = vec![vec![0.0; j]; k];
        let mut mask = vec![vec![true; j]; k];
        for row in 0..k {
            for col in 0..j {
                rates[row][col] = 10f64.powf(rng.gen_range(-0.5..1.2));
                if rng.gen_bool(0.1) {
                    mask[row][col] = false;
                    rates[row][col] = 0.0;
                }
            }
        }
        let rates = RateMatrix::new(rates, mask).ok()?;
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(1..=20) as f64 * 0.5).collect();

        let out = match bidding_game_run(&rates, &weights, &capacities, &BidGameConfig::default())
        {
            Ok(o) => o,
            Err(e) => return Some(format!("instance {i}: {e}")),
        };
        if !out.converged {
            return Some(format!("instance {i}: did not converge"));
        }
        if out.rounds > k * j {
            return Some(format!(
                "instance {i}: {} rounds exceeds the K*J bound {}",
                out.rounds,
                k * j
            ));
        }
        let (stable, pair) = verify_stability(&out.matching, &rates, &weights, &capacities);
        if !stable {
            return Some(format!("instance {i}: blocking pair {pair:?}"));
        }
        for (user, history) in out.bid_history.iter().enumerate() {
            for w in history.windows(2) {
                if w[1].1 > w[0].1 + 1e-12 {
                    return Some(format!(
                        "instance {i}: user {user} raised its bid from {} to {}",
                        w[0].1, w[1].1
                    ));
                }
            }
        }
        // Waiting-list minima once a BS is full, and rank dominance and
        // revenue monotonicity on every round.
        let mut prev_lists: Vec<Vec<f64>> = vec![Vec::new(); j];
        let mut prev_revenue = 0.0;
        for record in &out.trace {
            if record.provider_utility < prev_revenue - 1e-12 {
                return Some(format!(
                    "instance {i}: provider revenue fell at round {}",
                    record.round
                ));
            }
            prev_revenue = record.provider_utility;
            for (bs, list) in record.waiting_lists.iter().enumerate() {
                let bids: Vec<f64> = list.iter().map(|&u| out.bids[u][bs]).collect();
                // Rank dominance: the r-th best held bid never degrades.
                for (rank, prev_bid) in prev_lists[bs].iter().enumerate() {
                    if rank < bids.len() && bids[rank] < prev_bid - 1e-12 {
                        return Some(format!(
                            "instance {i}: BS {bs} rank-{rank} bid degraded at round {}",
                            record.round
                        ));
                    }
                }
                // Minimum bid of a full list never decreases.
                if prev_lists[bs].len() == capacities[bs] && bids.len() == capacities[bs] {
                    let prev_min = prev_lists[bs].last().copied().unwrap_or(f64::INFINITY);
                    let min = bids.last().copied().unwrap_or(f64::INFINITY);
                    if min < prev_min - 1e-12 {
                        return Some(format!(
                            "instance {i}: BS {bs} full-list minimum fell at round {}",
                            record.round
                        ));
                    }
                }
                prev_lists[bs] = bids;
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();

    CheckReport {
        name: "bidding game converges to a stable matching with monotone dynamics",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{instances} instances within the K*J round bound")
        } else {
            failures.join("; ")
        },
    }
}

/// Qualitative sweep trends of the centralized experiment: per-trial
/// dominance (validated inside the runner), nondecreasing mean optimum in
/// K, and a relative optimal-to-greedy gap that narrows across the sweep.
pub fn check_centralized_trends(cfg: &ExperimentConfig) -> Result<(CheckReport, ExperimentResult)> {
    let result = run_centralized_experiment(cfg)?;
    let mut failures = Vec::new();

    let k_first = *cfg.k_sweep.first().expect("validated sweep");
    let k_last = *cfg.k_sweep.last().expect("validated sweep");

    let mut prev_mean = f64::NEG_INFINITY;
    for &k in &cfg.k_sweep {
        let mean = result.mean_of(k, "sum_rate_optimal").unwrap_or_default();
        if mean < prev_mean - 1e-9 {
            failures.push(format!(
                "mean optimal sum rate fell from {prev_mean} to {mean} at K={k}"
            ));
        }
        prev_mean = mean;
    }

    let gap_at = |k: usize| -> f64 {
        let optimal = result.mean_of(k, "sum_rate_optimal").unwrap_or_default();
        let greedy = result
            .mean_of(k, "sum_rate_greedy_global")
            .unwrap_or_default();
        if optimal <= 0.0 {
            0.0
        } else {
            (optimal - greedy) / optimal
        }
    };
    let gap_first = gap_at(k_first);
    let gap_last = gap_at(k_last);
    if gap_last > gap_first + 1e-9 {
        failures.push(format!(
            "relative gap widened across the sweep: {gap_first:.4} at K={k_first} vs \
             {gap_last:.4} at K={k_last}"
        ));
    }

    let report = CheckReport {
        name: "centralized sweep trends",
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!(
                "optimal mean nondecreasing over K={:?}; relative greedy gap {:.4} -> {:.4}",
                cfg.k_sweep, gap_first, gap_last
            )
        } else {
            failures.join("; ")
        },
    };
    Ok((report, result))
}

/// Paired rate-bias effect on bidding revenue: mean difference and its 95%
/// interval; passes when the interval excludes zero from above.
pub fn check_rate_bias_effect(cfg: &ExperimentConfig, factor: f64) -> Result<CheckReport> {
    let report = run_bias_experiment(cfg, factor)?;
    let lo = report.mean_diff - report.ci95;
    let passed = report.mean_diff > 0.0 && lo > 0.0;
    Ok(CheckReport {
        name: "macro rate bias raises bidding revenue",
        passed,
        details: format!(
            "paired mean diff {:.4} with 95% CI ±{:.4} over {} pairs (interval {}0)",
            report.mean_diff,
            report.ci95,
            report.diffs.len(),
            if lo > 0.0 { "excludes " } else { "includes " },
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_oracle_suites_pass() {
        let report = check_assignment_oracle(120, 7);
        assert!(report.passed, "{report}");
        let report = check_greedy_dominance(120, 11);
        assert!(report.passed, "{report}");
        let report = check_propfair_equivalence(120, 13);
        assert!(report.passed, "{report}");
    }

    #[test]
    fn joint_suites_pass() {
        let report = check_joint_oracle(40, 17);
        assert!(report.passed, "{report}");
        let report = check_optional_dominates_mandatory(60, 19);
        assert!(report.passed, "{report}");
    }

    #[test]
    fn game_suites_pass() {
        let report = check_price_game_equilibrium(30, 23);
        assert!(report.passed, "{report}");
        let report = check_bidding_stability(60, 29);
        assert!(report.passed, "{report}");
    }
}
