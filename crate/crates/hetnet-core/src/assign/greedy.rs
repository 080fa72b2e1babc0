//! Greedy association baselines. Ties always break to the lowest user
//! index, then the lowest BS index.

use crate::assign::{AssignMode, Assignment, WeightMatrix};

/// Globally greedy association: repeatedly assigns the heaviest remaining
/// (user, BS) pair among BSs with residual capacity and removes the user.
/// With `require_positive` (the log-utility variant) it stops as soon as no
/// strictly positive weight remains.
pub fn greedy_global(w: &WeightMatrix, require_positive: bool) -> Assignment {
    let k_total = w.num_users();
    let j_total = w.num_bs();
    let mut residual = w.capacities.clone();
    let mut remaining = vec![true; k_total];
    let mut result = Assignment::empty(k_total, j_total, AssignMode::Optional);

    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for k in 0..k_total {
            if !remaining[k] {
                continue;
            }
            for j in 0..j_total {
                if residual[j] == 0 || !w.allowed[k][j] {
                    continue;
                }
                let v = w.w[k][j];
                if best.map_or(true, |(_, _, bv)| v > bv) {
                    best = Some((k, j, v));
                }
            }
        }
        match best {
            Some((k, j, v)) if !(require_positive && v <= 0.0) => {
                result.set(k, Some(j));
                residual[j] -= 1;
                remaining[k] = false;
            }
            _ => break,
        }
    }
    result
}

/// Per-BS greedy association: BSs in index order each take their best
/// remaining users until the load cap is filled (log variant: while a
/// strictly positive weight remains for that BS).
pub fn greedy_per_bs(w: &WeightMatrix, require_positive: bool) -> Assignment {
    let k_total = w.num_users();
    let j_total = w.num_bs();
    let mut remaining = vec![true; k_total];
    let mut result = Assignment::empty(k_total, j_total, AssignMode::Optional);

    for j in 0..j_total {
        let mut slots = w.capacities[j];
        while slots > 0 {
            let mut best: Option<(usize, f64)> = None;
            for k in 0..k_total {
                if !remaining[k] || !w.allowed[k][j] {
                    continue;
                }
                let v = w.w[k][j];
                if best.map_or(true, |(_, bv)| v > bv) {
                    best = Some((k, v));
                }
            }
            match best {
                Some((k, v)) if !(require_positive && v <= 0.0) => {
                    result.set(k, Some(j));
                    remaining[k] = false;
                    slots -= 1;
                }
                _ => break,
            }
        }
    }
    result
}
