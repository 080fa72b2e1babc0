//! Greedy joint baselines: the chosen BS hands its whole resource to one
//! user (β = 1), so a picked BS leaves the pool.

use crate::assign::{AssignMode, Assignment};
use crate::joint::{equal_share_beta, ResourceAllocation};
use crate::model::RateMatrix;

/// Globally greedy joint allocation: while some remaining candidate pair
/// has `ln c > 0`, take the largest, give the user the BS's entire
/// resource, and retire both the user and the BS.
pub fn greedy_joint_global(c: &RateMatrix) -> (Assignment, ResourceAllocation) {
    let k_total = c.num_users();
    let j_total = c.num_bs();
    let mut users_left = vec![true; k_total];
    let mut bs_left = vec![true; j_total];
    let mut assignment = Assignment::empty(k_total, j_total, AssignMode::Optional);

    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for k in 0..k_total {
            if !users_left[k] {
                continue;
            }
            for j in 0..j_total {
                if !bs_left[j] || !c.candidate_mask[k][j] {
                    continue;
                }
                let v = c.rates[k][j];
                if v > 1.0 && best.map_or(true, |(_, _, bv)| v > bv) {
                    best = Some((k, j, v));
                }
            }
        }
        match best {
            Some((k, j, _)) => {
                assignment.set(k, Some(j));
                users_left[k] = false;
                bs_left[j] = false;
            }
            None => break,
        }
    }
    let beta = equal_share_beta(&assignment);
    (assignment, beta)
}

/// Per-BS greedy joint allocation: each BS in index order serves its single
/// best remaining user when that user's `ln c` is positive.
pub fn greedy_joint_per_bs(c: &RateMatrix) -> (Assignment, ResourceAllocation) {
    let k_total = c.num_users();
    let j_total = c.num_bs();
    let mut users_left = vec![true; k_total];
    let mut assignment = Assignment::empty(k_total, j_total, AssignMode::Optional);

    for j in 0..j_total {
        let mut best: Option<(usize, f64)> = None;
        for k in 0..k_total {
            if !users_left[k] || !c.candidate_mask[k][j] {
                continue;
            }
            let v = c.rates[k][j];
            if v > 1.0 && best.map_or(true, |(_, bv)| v > bv) {
                best = Some((k, v));
            }
        }
        if let Some((k, _)) = best {
            assignment.set(k, Some(j));
            users_left[k] = false;
        }
    }
    let beta = equal_share_beta(&assignment);
    (assignment, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::joint_utility;

    #[test]
    fn global_hand_simulation() {
        let c = RateMatrix::full(vec![vec![8.0, 4.0], vec![6.0, 7.0]]).unwrap();
        let (a, beta) = greedy_joint_global(&c);
        assert_eq!(a.choice(0), Some(0));
        assert_eq!(a.choice(1), Some(1));
        assert_eq!(beta.beta[0][0], 1.0);
        assert_eq!(beta.beta[1][1], 1.0);
        let v = joint_utility(&a, &beta, &c).unwrap();
        assert!((v - (8f64.ln() + 7f64.ln())).abs() < 1e-12);
        assert!((v - 4.02535).abs() < 1e-5);
    }

    #[test]
    fn global_all_rates_at_most_one_yields_empty() {
        let c = RateMatrix::full(vec![vec![1.0, 0.4], vec![0.9, 0.2]]).unwrap();
        let (a, _) = greedy_joint_global(&c);
        assert_eq!(a.num_assigned(), 0);
    }

    #[test]
    fn global_single_bs_serves_single_best_user() {
        let c = RateMatrix::full(vec![vec![3.0], vec![7.0], vec![5.0]]).unwrap();
        let (a, beta) = greedy_joint_global(&c);
        assert_eq!(a.choice(1), Some(0));
        assert_eq!(a.num_assigned(), 1);
        assert_eq!(beta.beta[1][0], 1.0);
    }

    #[test]
    fn per_bs_hand_simulations() {
        let c = RateMatrix::full(vec![vec![8.0, 4.0], vec![6.0, 7.0]]).unwrap();
        let (a, beta) = greedy_joint_per_bs(&c);
        assert_eq!(a.choice(0), Some(0));
        assert_eq!(a.choice(1), Some(1));
        let v = joint_utility(&a, &beta, &c).unwrap();
        assert!((v - (8f64.ln() + 7f64.ln())).abs() < 1e-12);

        let c = RateMatrix::full(vec![vec![8.0, 7.0], vec![6.0, 4.0]]).unwrap();
        let (a, beta) = greedy_joint_per_bs(&c);
        assert_eq!(a.choice(0), Some(0));
        assert_eq!(a.choice(1), Some(1));
        let v = joint_utility(&a, &beta, &c).unwrap();
        assert!((v - (8f64.ln() + 4f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn per_bs_all_rates_at_most_one_yields_empty() {
        let c = RateMatrix::full(vec![vec![0.3, 0.4]]).unwrap();
        let (a, _) = greedy_joint_per_bs(&c);
        assert_eq!(a.num_assigned(), 0);
    }
}
