//! Two-layer dual decomposition for joint association and resource
//! allocation.
//!
//! Each iteration splits into per-user and per-BS subproblems coordinated
//! by multipliers λ_j. A user scores BS j as `ln c[k][j] − λ_j` and takes
//! the best candidate (in optional mode only when the score is
//! nonnegative). Each BS then sets the auxiliary load `Ξ_j = min(L_j,
//! e^(λ_j − 1))` — the stationary point of `−Ξ ln Ξ + λΞ`, which is why the
//! module works in nats — and moves λ_j against the load mismatch with the
//! diminishing step `ϑ/(t+γ)`. λ is left unprojected: Ξ couples to the
//! loads through an equality constraint, so its multipliers are free-signed.

use serde::Serialize;

use crate::assign::{AssignMode, Assignment};
use crate::error::{Error, Result};
use crate::joint::{equal_share_beta, joint_utility, ResourceAllocation};
use crate::model::RateMatrix;
use crate::par;

/// Step-size and stopping parameters of the subgradient loop.
#[derive(Clone, Copy, Debug)]
pub struct DualParams {
    pub theta: f64,
    pub gamma: f64,
    /// Primal-dual consistency tolerance on |Ξ_j − Σ_k x_kj|.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of consecutive quiet iterations required to declare
    /// convergence.
    pub stable_window: usize,
}

impl Default for DualParams {
    fn default() -> Self {
        DualParams {
            theta: 1.0,
            gamma: 10.0,
            tol: 1e-4,
            max_iter: 5000,
            stable_window: 10,
        }
    }
}

/// One iteration of the dual loop, as exported to JSON-lines traces.
#[derive(Clone, Debug, Serialize)]
pub struct DualTraceRecord {
    pub t: usize,
    pub lambda: Vec<f64>,
    pub xi: Vec<f64>,
    pub assigned_per_bs: Vec<usize>,
    pub utility: f64,
}

/// Result of a dual-decomposition run. `converged == false` means the
/// iteration budget ran out first; in that case the assignment is the best
/// capacity-feasible iterate the run visited (the multiplier can stall on a
/// user's indifference kink, leaving the binary iterate oscillating around
/// a fractional relaxed optimum, so the last iterate is not a reliable
/// answer). The trace documents the whole run either way.
#[derive(Clone, Debug)]
pub struct JointOutcome {
    pub assignment: Assignment,
    pub beta: ResourceAllocation,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub trace: Vec<DualTraceRecord>,
}

impl JointOutcome {
    pub fn write_trace_jsonl<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        for record in &self.trace {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Optional-mode joint solver: users may stay unconnected, so only
/// nonnegative scores are assigned.
pub fn dual_decomposition(
    c: &RateMatrix,
    capacities: &[usize],
    params: &DualParams,
) -> Result<JointOutcome> {
    dual_engine(c, capacities, params, AssignMode::Optional)
}

/// Mandatory-mode variant: every user always connects to its best-scoring
/// candidate, even at negative utility.
pub fn dual_decomposition_mandatory(
    c: &RateMatrix,
    capacities: &[usize],
    params: &DualParams,
) -> Result<JointOutcome> {
    dual_engine(c, capacities, params, AssignMode::Mandatory)
}

fn dual_engine(
    c: &RateMatrix,
    capacities: &[usize],
    params: &DualParams,
    mode: AssignMode,
) -> Result<JointOutcome> {
    c.validate()?;
    if capacities.len() != c.num_bs() {
        return Err(Error::Dimension(
            "capacity vector length differs from BS count".into(),
        ));
    }
    if !(params.theta > 0.0) || !(params.gamma > 0.0) {
        return Err(Error::Domain(
            "dual decomposition requires positive step parameters".into(),
        ));
    }
    let k_total = c.num_users();
    let j_total = c.num_bs();

    // ln c over the candidate pairs; zero-rate candidates are unusable
    // because their log utility is unbounded below.
    let mut log_rate = vec![vec![f64::NEG_INFINITY; j_total]; k_total];
    for k in 0..k_total {
        for j in 0..j_total {
            if c.candidate_mask[k][j] && c.rates[k][j] > 0.0 {
                log_rate[k][j] = c.rates[k][j].ln();
            }
        }
    }

    if mode == AssignMode::Mandatory {
        let cap_sum: usize = capacities.iter().sum();
        if cap_sum < k_total {
            return Err(Error::Infeasible(format!(
                "mandatory mode needs total capacity >= {k_total}, have {cap_sum}"
            )));
        }
        for k in 0..k_total {
            if log_rate[k].iter().all(|v| !v.is_finite()) {
                return Err(Error::Infeasible(format!(
                    "user {k} has no candidate BS with a positive rate"
                )));
            }
        }
    }

    let mut lambda = vec![0.0f64; j_total];
    let mut prev_choices: Option<Vec<Option<usize>>> = None;
    let mut choices: Vec<Option<usize>> = vec![None; k_total];
    let mut trace = Vec::new();
    let mut quiet_streak = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;
    // Best capacity-feasible iterate seen so far, for primal recovery.
    let mut incumbent: Option<(f64, Vec<Option<usize>>)> = None;

    for t in 1..=params.max_iter {
        iterations = t;
        // Per-user subproblem. Parallel-safe: each user's argmax depends
        // only on λ and its own rates, and ties break to the lowest BS.
        let lambda_snapshot = lambda.clone();
        choices = par::map_indexed(k_total, |k| {
            let mut best: Option<(usize, f64)> = None;
            for j in 0..j_total {
                let lr = log_rate[k][j];
                if !lr.is_finite() {
                    continue;
                }
                let score = lr - lambda_snapshot[j];
                if best.map_or(true, |(_, bs)| score > bs) {
                    best = Some((j, score));
                }
            }
            match (mode, best) {
                (AssignMode::Mandatory, Some((j, _))) => Some(j),
                (AssignMode::Optional, Some((j, score))) if score >= 0.0 => Some(j),
                _ => None,
            }
        });

        let mut loads = vec![0usize; j_total];
        for choice in &choices {
            if let Some(j) = choice {
                loads[*j] += 1;
            }
        }

        // Per-BS subproblem and the subgradient step.
        let step = params.theta / (t as f64 + params.gamma);
        let mut xi = vec![0.0f64; j_total];
        let mut worst_gap = 0.0f64;
        for j in 0..j_total {
            xi[j] = (capacities[j] as f64).min((lambda[j] - 1.0).exp());
            let gap = xi[j] - loads[j] as f64;
            lambda[j] -= step * gap;
            worst_gap = worst_gap.max(gap.abs());
        }

        let assignment = Assignment::from_choices(choices.clone(), j_total, mode);
        let beta = equal_share_beta(&assignment);
        let utility = joint_utility(&assignment, &beta, c)?;
        let feasible = loads.iter().zip(capacities).all(|(l, cap)| l <= cap);
        if feasible && incumbent.as_ref().map_or(true, |(best, _)| utility > *best) {
            incumbent = Some((utility, choices.clone()));
        }
        trace.push(DualTraceRecord {
            t,
            lambda: lambda.clone(),
            xi,
            assigned_per_bs: loads,
            utility,
        });

        let unchanged = prev_choices.as_ref() == Some(&choices);
        if unchanged && worst_gap < params.tol {
            quiet_streak += 1;
            if quiet_streak >= params.stable_window {
                converged = true;
                break;
            }
        } else {
            quiet_streak = 0;
        }
        prev_choices = Some(choices.clone());
    }

    // A converged run's fixed point is feasible and already the incumbent;
    // otherwise fall back to the best feasible iterate of the run. The
    // local polish then clears the residual gap left when the multiplier
    // stalls on coincident user kinks (simultaneous best responses never
    // visit the optimal exchange in that case).
    let mut final_choices = if converged {
        choices
    } else {
        match incumbent {
            Some((_, best)) => best,
            None => choices,
        }
    };
    polish_assignment(&mut final_choices, &log_rate, capacities, mode);
    let assignment = Assignment::from_choices(final_choices, j_total, mode);
    let beta = equal_share_beta(&assignment);
    let value = joint_utility(&assignment, &beta, c)?;
    Ok(JointOutcome {
        assignment,
        beta,
        value,
        converged,
        iterations,
        trace,
    })
}
