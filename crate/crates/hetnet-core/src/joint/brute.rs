//! Exhaustive oracle for the joint problem. For any fixed assignment the
//! optimal split is the equal share, so enumerating assignments suffices.

use crate::assign::{AssignMode, Assignment};
use crate::error::{Error, Result};
use crate::joint::{equal_share_beta, joint_utility, ResourceAllocation};
use crate::model::RateMatrix;

pub const JOINT_BRUTE_MAX_USERS: usize = 10;
pub const JOINT_BRUTE_MAX_BS: usize = 4;

/// Enumerates every capacity-feasible assignment over candidates with a
/// positive rate, applies the equal share, and maximizes the joint log
/// utility. Ties go to the first maximizer in enumeration order (the
/// lexicographically smallest choice vector).
pub fn brute_force_joint(
    c: &RateMatrix,
    capacities: &[usize],
    mode: AssignMode,
) -> Result<(Assignment, ResourceAllocation, f64)> {
    c.validate()?;
    let k_total = c.num_users();
    let j_total = c.num_bs();
    if k_total > JOINT_BRUTE_MAX_USERS || j_total > JOINT_BRUTE_MAX_BS {
        return Err(Error::TooLarge(format!(
            "{k_total} users x {j_total} BSs exceeds the \
             {JOINT_BRUTE_MAX_USERS}x{JOINT_BRUTE_MAX_BS} oracle guard"
        )));
    }
    if capacities.len() != j_total {
        return Err(Error::Dimension(
            "capacity vector length differs from BS count".into(),
        ));
    }

    struct Search<'a> {
        c: &'a RateMatrix,
        mode: AssignMode,
        residual: Vec<usize>,
        current: Vec<Option<usize>>,
        best: Option<(f64, Vec<Option<usize>>)>,
    }

    impl Search<'_> {
        fn leaf_value(&self) -> f64 {
            let mut loads = vec![0usize; self.c.num_bs()];
            for choice in &self.current {
                if let Some(j) = choice {
                    loads[*j] += 1;
                }
            }
            let mut total = 0.0;
            for (k, choice) in self.current.iter().enumerate() {
                if let Some(j) = choice {
                    total += (self.c.rates[k][*j] / loads[*j] as f64).ln();
                }
            }
            total
        }

        fn recurse(&mut self, user: usize) {
            if user == self.current.len() {
                let value = self.leaf_value();
                let improved = match &self.best {
                    None => true,
                    Some((best_value, _)) => value > *best_value,
                };
                if improved {
                    self.best = Some((value, self.current.clone()));
                }
                return;
            }
            if self.mode == AssignMode::Optional {
                self.current[user] = None;
                self.recurse(user + 1);
            }
            for j in 0..self.c.num_bs() {
                if !self.c.candidate_mask[user][j]
                    || self.c.rates[user][j] <= 0.0
                    || self.residual[j] == 0
                {
                    continue;
                }
                self.residual[j] -= 1;
                self.current[user] = Some(j);
                self.recurse(user + 1);
                self.current[user] = None;
                self.residual[j] += 1;
            }
        }
    }

    let mut search = Search {
        c,
        mode,
        residual: capacities.to_vec(),
        current: vec![None; k_total],
        best: None,
    };
    search.recurse(0);

    match search.best {
        Some((value, choices)) => {
            let assignment = Assignment::from_choices(choices, j_total, mode);
            let beta = equal_share_beta(&assignment);
            debug_assert!(
                (joint_utility(&assignment, &beta, c).unwrap_or(0.0) - value).abs() < 1e-9
            );
            Ok((assignment, beta, value))
        }
        None => Err(Error::Infeasible(
            "no feasible joint assignment under mandatory mode".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;

    #[test]
    fn single_user_full_share() {
        let c = RateMatrix::full(vec![vec![E * E]]).unwrap();
        let (a, beta, v) = brute_force_joint(&c, &[1], AssignMode::Optional).unwrap();
        assert_eq!(a.choice(0), Some(0));
        assert_eq!(beta.beta[0][0], 1.0);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn all_rates_below_one_yield_empty_optional_solution() {
        let c = RateMatrix::full(vec![vec![0.8], vec![0.9]]).unwrap();
        let (a, _, v) = brute_force_joint(&c, &[2], AssignMode::Optional).unwrap();
        assert_eq!(a.num_assigned(), 0);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn weak_third_user_is_left_out() {
        // Adding the 0.9-rate user would dilute the share of the two strong
        // users and contribute a negative term itself.
        let c = RateMatrix::full(vec![vec![E * E], vec![E * E], vec![0.9]]).unwrap();
        let (a, _, v) = brute_force_joint(&c, &[3], AssignMode::Optional).unwrap();
        assert_eq!(a.choice(0), Some(0));
        assert_eq!(a.choice(1), Some(0));
        assert_eq!(a.choice(2), None);
        assert!((v - 2.0 * (2.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((v - 2.61371).abs() < 1e-5);
    }

    #[test]
    fn guard_rejects_large_instances() {
        let c = RateMatrix::full(vec![vec![2.0]; 11]).unwrap();
        assert!(matches!(
            brute_force_joint(&c, &[3], AssignMode::Optional),
            Err(Error::TooLarge(_))
        ));
    }
}
