//! Seeded Monte-Carlo experiment runners. Trials are independent and run
//! in parallel under the `parallel` feature; every trial derives its own
//! RNG stream from (seed, user count, trial index) and results are merged
//! in trial order, so outputs never depend on the execution schedule.

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assign::{greedy_global, greedy_per_bs, propfair_optimal, sum_rate_optimal, utility, WeightMatrix};
use crate::error::{Error, Result};
use crate::experiment::config::ExperimentConfig;
use crate::experiment::stats;
use crate::games::{
    bidding_game_run, price_game_run, verify_stability, BidGameConfig, PriceGameConfig,
};
use crate::joint::{
    dual_decomposition, dual_decomposition_mandatory, greedy_joint_global, greedy_joint_per_bs,
    joint_utility, DualParams,
};
use crate::model::{
    build_rate_matrix, BaseStation, BsKind, ChannelState, Point, RateMatrix, Scenario,
    UserTerminal,
};
use crate::par;

/// One (user count, algorithm, trial) measurement.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub k: usize,
    pub algorithm: String,
    pub trial: usize,
    pub value: f64,
    /// Iterations or game rounds; zero for one-shot solvers.
    pub rounds: usize,
    pub runtime_ms: f64,
}

/// Mean and 95% confidence half-width over the trials of one cell.
#[derive(Clone, Debug, Serialize)]
pub struct AggregateRow {
    pub k: usize,
    pub algorithm: String,
    pub mean: f64,
    pub ci95: f64,
    pub trials: usize,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub rows: Vec<TrialRow>,
    pub aggregates: Vec<AggregateRow>,
}

impl ExperimentResult {
    pub fn from_rows(rows: Vec<TrialRow>) -> ExperimentResult {
        let mut order: Vec<(usize, String)> = Vec::new();
        for row in &rows {
            let key = (row.k, row.algorithm.clone());
            if !order.contains(&key) {
                order.push(key);
            }
        }
        let aggregates = order
            .into_iter()
            .map(|(k, algorithm)| {
                let values: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.k == k && r.algorithm == algorithm)
                    .map(|r| r.value)
                    .collect();
                AggregateRow {
                    k,
                    algorithm,
                    mean: stats::mean(&values),
                    ci95: stats::ci95_half_width(&values),
                    trials: values.len(),
                }
            })
            .collect();
        ExperimentResult { rows, aggregates }
    }

    pub fn mean_of(&self, k: usize, algorithm: &str) -> Option<f64> {
        self.aggregates
            .iter()
            .find(|a| a.k == k && a.algorithm == algorithm)
            .map(|a| a.mean)
    }

    /// Per-trial rows as CSV. Wall-clock timings are non-deterministic, so
    /// they are zeroed unless explicitly requested; everything else is
    /// byte-stable for a fixed config and seed.
    pub fn write_csv<W: Write>(&self, out: W, include_timings: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["K", "algorithm", "trial", "value", "rounds", "runtime_ms"])?;
        for row in &self.rows {
            let runtime = if include_timings { row.runtime_ms } else { 0.0 };
            w.write_record([
                row.k.to_string(),
                row.algorithm.clone(),
                row.trial.to_string(),
                format!("{}", row.value),
                row.rounds.to_string(),
                format!("{runtime}"),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W, include_timings: bool) -> Result<()> {
        for row in &self.rows {
            let mut row = row.clone();
            if !include_timings {
                row.runtime_ms = 0.0;
            }
            serde_json::to_writer(&mut out, &row)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Aggregate table as CSV.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["K", "algorithm", "mean", "ci95", "trials"])?;
        for a in &self.aggregates {
            w.write_record([
                a.k.to_string(),
                a.algorithm.clone(),
                format!("{}", a.mean),
                format!("{}", a.ci95),
                a.trials.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds the scenario for one trial: the macro fixed at the area center,
/// picos and users placed uniformly at random, user weights drawn from the
/// finite weight set. The RNG stream is derived from (seed, user count,
/// trial), so equal inputs reproduce the scenario exactly.
pub fn generate_scenario(
    cfg: &ExperimentConfig,
    num_users: usize,
    trial: u64,
) -> Result<Scenario> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(((num_users as u64) << 20) ^ (trial + 1));

    let mut base_stations = vec![BaseStation {
        id: 0,
        kind: BsKind::Macro,
        position: cfg.area.center(),
        antennas: cfg.macro_antennas,
        load_capacity: cfg.macro_load,
        tx_power: crate::model::dbm_to_linear(cfg.macro_power_dbm),
        path_loss_exponent: BsKind::Macro.path_loss_exponent(),
        rate_bias: cfg.macro_rate_bias,
    }];
    for i in 0..cfg.pico_count {
        base_stations.push(BaseStation {
            id: 1 + i,
            kind: BsKind::Pico,
            position: Point::new(
                rng.gen_range(0.0..cfg.area.w),
                rng.gen_range(0.0..cfg.area.h),
            ),
            antennas: cfg.pico_antennas,
            load_capacity: cfg.pico_load,
            tx_power: crate::model::dbm_to_linear(cfg.pico_power_dbm),
            path_loss_exponent: BsKind::Pico.path_loss_exponent(),
            rate_bias: cfg.pico_rate_bias,
        });
    }
    let users = (0..num_users)
        .map(|k| UserTerminal {
            id: k,
            position: Point::new(
                rng.gen_range(0.0..cfg.area.w),
                rng.gen_range(0.0..cfg.area.h),
            ),
            weight: cfg.weight_set[rng.gen_range(0..cfg.weight_set.len())],
        })
        .collect();

    let scenario = Scenario {
        base_stations,
        users,
        area: cfg.area,
        coverage_radius: cfg.coverage_radius,
        seed: rng.gen::<u64>(),
    };
    scenario.validate()?;
    Ok(scenario)
}

fn trial_rates(cfg: &ExperimentConfig, k: usize, trial: usize) -> Result<(Scenario, RateMatrix)> {
    let scenario = generate_scenario(cfg, k, trial as u64)?;
    let channel = ChannelState::sample_seeded(&scenario)?;
    let rates = build_rate_matrix(&scenario, &channel)?;
    Ok((scenario, rates))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1000.0)
}

/// Sum-rate and proportional-fairness sweep: the exact solver against both
/// greedy baselines, for each objective. Dominance of the exact solver is
/// validated on every trial before the rows are emitted.
pub fn run_centralized_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &k in &cfg.k_sweep {
        let per_trial = par::map_indexed(cfg.trials, |trial| -> Result<Vec<TrialRow>> {
            let (scenario, rates) = trial_rates(cfg, k, trial)?;
            let caps = scenario.capacities();
            let mut rows = Vec::with_capacity(6);

            let ((sum_assignment, sum_value), ms) = {
                let (res, ms) = timed(|| sum_rate_optimal(&rates, &caps));
                (res?, ms)
            };
            sum_assignment.validate(&caps, Some(&rates.candidate_mask))?;
            rows.push(TrialRow {
                k,
                algorithm: "sum_rate_optimal".into(),
                trial,
                value: sum_value,
                rounds: 0,
                runtime_ms: ms,
            });

            let plain = WeightMatrix::from_rates(&rates, &caps)?;
            let (g1, ms) = timed(|| greedy_global(&plain, false));
            g1.validate(&caps, Some(&rates.candidate_mask))?;
            let g1_value = utility(&g1, &rates, 0)?;
            rows.push(TrialRow {
                k,
                algorithm: "sum_rate_greedy_global".into(),
                trial,
                value: g1_value,
                rounds: 0,
                runtime_ms: ms,
            });

            let (g2, ms) = timed(|| greedy_per_bs(&plain, false));
            g2.validate(&caps, Some(&rates.candidate_mask))?;
            let g2_value = utility(&g2, &rates, 0)?;
            rows.push(TrialRow {
                k,
                algorithm: "sum_rate_greedy_per_bs".into(),
                trial,
                value: g2_value,
                rounds: 0,
                runtime_ms: ms,
            });

            if sum_value < g1_value - 1e-9 || sum_value < g2_value - 1e-9 {
                return Err(Error::Invariant(format!(
                    "sum-rate optimum {sum_value} beaten by a greedy ({g1_value}, {g2_value}) \
                     at K={k} trial={trial}"
                )));
            }

            let ((pf_assignment, pf_value), ms) = {
                let (res, ms) = timed(|| propfair_optimal(&rates, &caps));
                (res?, ms)
            };
            pf_assignment.validate(&caps, Some(&rates.candidate_mask))?;
            rows.push(TrialRow {
                k,
                algorithm: "prop_fair_optimal".into(),
                trial,
                value: pf_value,
                rounds: 0,
                runtime_ms: ms,
            });

            let log_weights = WeightMatrix::log2_rates(&rates, &caps)?;
            let (g1_log, ms) = timed(|| greedy_global(&log_weights, true));
            g1_log.validate(&caps, Some(&rates.candidate_mask))?;
            let g1_log_value = utility(&g1_log, &rates, 1)?;
            rows.push(TrialRow {
                k,
                algorithm: "prop_fair_greedy_global".into(),
                trial,
                value: g1_log_value,
                rounds: 0,
                runtime_ms: ms,
            });

            let (g2_log, ms) = timed(|| greedy_per_bs(&log_weights, true));
            g2_log.validate(&caps, Some(&rates.candidate_mask))?;
            let g2_log_value = utility(&g2_log, &rates, 1)?;
            rows.push(TrialRow {
                k,
                algorithm: "prop_fair_greedy_per_bs".into(),
                trial,
                value: g2_log_value,
                rounds: 0,
                runtime_ms: ms,
            });

            if pf_value < g1_log_value - 1e-9 || pf_value < g2_log_value - 1e-9 {
                return Err(Error::Invariant(format!(
                    "prop-fair optimum {pf_value} beaten by a greedy \
                     ({g1_log_value}, {g2_log_value}) at K={k} trial={trial}"
                )));
            }

            Ok(rows)
        });
        for trial_rows in per_trial {
            rows.extend(trial_rows?);
        }
    }
    Ok(ExperimentResult::from_rows(rows))
}

/// Joint allocation sweep: dual decomposition against the two greedy
/// baselines, optionally with the mandatory-connection variant when the
/// total capacity allows it.
pub fn run_joint_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let params = DualParams {
        theta: cfg.theta,
        gamma: cfg.gamma,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        ..DualParams::default()
    };
    let mut rows = Vec::new();
    for &k in &cfg.k_sweep {
        let per_trial = par::map_indexed(cfg.trials, |trial| -> Result<Vec<TrialRow>> {
            let (scenario, rates) = trial_rates(cfg, k, trial)?;
            let caps = scenario.capacities();
            let mut rows = Vec::with_capacity(4);

            let (dual, ms) = {
                let (res, ms) = timed(|| dual_decomposition(&rates, &caps, &params));
                (res?, ms)
            };
            rows.push(TrialRow {
                k,
                algorithm: "joint_dual".into(),
                trial,
                value: dual.value,
                rounds: dual.iterations,
                runtime_ms: ms,
            });

            let ((g1, beta1), ms) = timed(|| greedy_joint_global(&rates));
            rows.push(TrialRow {
                k,
                algorithm: "joint_greedy_global".into(),
                trial,
                value: joint_utility(&g1, &beta1, &rates)?,
                rounds: 0,
                runtime_ms: ms,
            });

            let ((g2, beta2), ms) = timed(|| greedy_joint_per_bs(&rates));
            rows.push(TrialRow {
                k,
                algorithm: "joint_greedy_per_bs".into(),
                trial,
                value: joint_utility(&g2, &beta2, &rates)?,
                rounds: 0,
                runtime_ms: ms,
            });

            let cap_sum: usize = caps.iter().sum();
            if cfg.include_mandatory && cap_sum >= k {
                let (mandatory, ms) = {
                    let (res, ms) =
                        timed(|| dual_decomposition_mandatory(&rates, &caps, &params));
                    (res?, ms)
                };
                if dual.value < mandatory.value - 1e-6 {
                    return Err(Error::Invariant(format!(
                        "optional joint value {} below mandatory value {} at K={k} trial={trial}",
                        dual.value, mandatory.value
                    )));
                }
                rows.push(TrialRow {
                    k,
                    algorithm: "joint_dual_mandatory".into(),
                    trial,
                    value: mandatory.value,
                    rounds: mandatory.iterations,
                    runtime_ms: ms,
                });
            }
            Ok(rows)
        });
        for trial_rows in per_trial {
            rows.extend(trial_rows?);
        }
    }
    Ok(ExperimentResult::from_rows(rows))
}

/// Runs both games per trial, validating the price game's probing-round
/// bound and break-even termination and the bidding game's stability.
pub fn run_game_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let price_cfg = PriceGameConfig {
        weight_set: cfg.weight_set.clone(),
        epsilon: cfg.epsilon,
        ..PriceGameConfig::default()
    };
    let mut weight_set = cfg.weight_set.clone();
    weight_set.sort_by(f64::total_cmp);
    let w_max = *weight_set.last().unwrap();
    let resolution = weight_set
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(w_max, f64::min);
    let probe_bound = (w_max / resolution).log2().ceil() as usize + 1;

    let mut rows = Vec::new();
    for &k in &cfg.k_sweep {
        let per_trial = par::map_indexed(cfg.trials, |trial| -> Result<Vec<TrialRow>> {
            let (scenario, rates) = trial_rates(cfg, k, trial)?;
            let caps = scenario.capacities();
            let weights = scenario.weights();
            let mut rows = Vec::with_capacity(2);

            let (price, ms) = {
                let (res, ms) = timed(|| price_game_run(&rates, &weights, &caps, &price_cfg));
                (res?, ms)
            };
            if !price.converged {
                return Err(Error::Invariant(format!(
                    "price game failed to resolve weights at K={k} trial={trial}"
                )));
            }
            if let Some(r) = price.probing_rounds.iter().find(|&&r| r > probe_bound) {
                return Err(Error::Invariant(format!(
                    "price-game probing took {r} rounds, bound {probe_bound}"
                )));
            }
            let final_record = price.trace.last().expect("at least the final round");
            if final_record.user_utility_sum.abs() > 1e-6 {
                return Err(Error::Invariant(format!(
                    "served users keep surplus {} at termination",
                    final_record.user_utility_sum
                )));
            }
            rows.push(TrialRow {
                k,
                algorithm: "price_game".into(),
                trial,
                value: price.provider_utility,
                rounds: price.rounds,
                runtime_ms: ms,
            });

            let (bid, ms) = {
                let (res, ms) =
                    timed(|| bidding_game_run(&rates, &weights, &caps, &BidGameConfig::default()));
                (res?, ms)
            };
            if !bid.converged || bid.rounds > k * scenario.num_bs() {
                return Err(Error::Invariant(format!(
                    "bidding game missed its round bound at K={k} trial={trial}"
                )));
            }
            let (stable, pair) = verify_stability(&bid.matching, &rates, &weights, &caps);
            if !stable {
                return Err(Error::Invariant(format!(
                    "bidding outcome unstable at K={k} trial={trial}: {pair:?}"
                )));
            }
            rows.push(TrialRow {
                k,
                algorithm: "bidding_game".into(),
                trial,
                value: bid.provider_utility,
                rounds: bid.rounds,
                runtime_ms: ms,
            });
            Ok(rows)
        });
        for trial_rows in per_trial {
            rows.extend(trial_rows?);
        }
    }
    Ok(ExperimentResult::from_rows(rows))
}

/// Paired rate-bias comparison for the bidding game: each trial reuses one
/// scenario and channel draw, discounting the macro rates by `biased_factor`
/// in the second run.
#[derive(Clone, Debug)]
pub struct BiasReport {
    pub result: ExperimentResult,
    pub diffs: Vec<f64>,
    pub mean_diff: f64,
    pub ci95: f64,
}

pub fn run_bias_experiment(cfg: &ExperimentConfig, biased_factor: f64) -> Result<BiasReport> {
    cfg.validate()?;
    if !(biased_factor > 0.0) {
        return Err(Error::InvalidConfig("bias factor must be positive".into()));
    }
    let k = cfg.k_sweep[0];
    let per_trial = par::map_indexed(cfg.trials, |trial| -> Result<(TrialRow, TrialRow)> {
        let scenario = generate_scenario(cfg, k, trial as u64)?;
        let channel = ChannelState::sample_seeded(&scenario)?;
        let caps = scenario.capacities();
        let weights = scenario.weights();

        let unbiased_rates = build_rate_matrix(&scenario, &channel)?;
        let (unbiased, ms_u) = {
            let (res, ms) = timed(|| {
                bidding_game_run(&unbiased_rates, &weights, &caps, &BidGameConfig::default())
            });
            (res?, ms)
        };

        let mut biased_scenario = scenario.clone();
        let macro_idx = biased_scenario.macro_index();
        biased_scenario.base_stations[macro_idx].rate_bias *= biased_factor;
        let biased_rates = build_rate_matrix(&biased_scenario, &channel)?;
        let (biased, ms_b) = {
            let (res, ms) = timed(|| {
                bidding_game_run(&biased_rates, &weights, &caps, &BidGameConfig::default())
            });
            (res?, ms)
        };

        Ok((
            TrialRow {
                k,
                algorithm: "bidding_bias_off".into(),
                trial,
                value: unbiased.provider_utility,
                rounds: unbiased.rounds,
                runtime_ms: ms_u,
            },
            TrialRow {
                k,
                algorithm: "bidding_bias_on".into(),
                trial,
                value: biased.provider_utility,
                rounds: biased.rounds,
                runtime_ms: ms_b,
            },
        ))
    });

    let mut rows = Vec::new();
    let mut diffs = Vec::new();
    for pair in per_trial {
        let (off, on) = pair?;
        diffs.push(on.value - off.value);
        rows.push(off);
        rows.push(on);
    }
    let mean_diff = stats::mean(&diffs);
    let ci95 = stats::ci95_half_width(&diffs);
    Ok(BiasReport {
        result: ExperimentResult::from_rows(rows),
        diffs,
        mean_diff,
        ci95,
    })
}
