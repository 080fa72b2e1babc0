//! Joint user association and resource allocation under a log utility:
//! the KKT equal-share split per BS, the two-layer dual decomposition with
//! diminishing-step subgradient updates, greedy baselines, and a
//! brute-force joint oracle. Utilities in this module are in nats.

mod brute;
mod dual;
mod greedy;

pub use brute::{brute_force_joint, JOINT_BRUTE_MAX_BS, JOINT_BRUTE_MAX_USERS};
pub use dual::{
    dual_decomposition, dual_decomposition_mandatory, DualParams, DualTraceRecord, JointOutcome,
};
pub use greedy::{greedy_joint_global, greedy_joint_per_bs};

use crate::assign::Assignment;
use crate::error::{Error, Result};
use crate::model::RateMatrix;

/// Fractional resource shares `beta[k][j]` per BS, each column summing to
/// at most one and positive only on assigned pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceAllocation {
    pub beta: Vec<Vec<f64>>,
}

impl ResourceAllocation {
    pub fn num_users(&self) -> usize {
        self.beta.len()
    }

    pub fn num_bs(&self) -> usize {
        self.beta.first().map_or(0, |r| r.len())
    }

    /// Checks the simplex constraint per BS and consistency with the
    /// assignment's support.
    pub fn validate(&self, assignment: &Assignment) -> Result<()> {
        if self.num_users() != assignment.num_users() || self.num_bs() != assignment.num_bs() {
            return Err(Error::Dimension(
                "allocation and assignment dimensions differ".into(),
            ));
        }
        for j in 0..self.num_bs() {
            let mut column_sum = 0.0;
            for k in 0..self.num_users() {
                let b = self.beta[k][j];
                if !(0.0..=1.0).contains(&b) {
                    return Err(Error::Invariant(format!(
                        "beta[{k}][{j}] = {b} outside [0, 1]"
                    )));
                }
                if b > 0.0 && !assignment.is_assigned(k, j) {
                    return Err(Error::Invariant(format!(
                        "beta[{k}][{j}] positive on an unassigned pair"
                    )));
                }
                column_sum += b;
            }
            if column_sum > 1.0 + 1e-9 {
                return Err(Error::Invariant(format!(
                    "BS {j} allocates {column_sum} > 1 of its resource"
                )));
            }
        }
        Ok(())
    }
}

/// Equal-share resource split: each BS divides its unit resource evenly
/// among the users it serves (the KKT optimum of the per-BS subproblem for
/// any fixed assignment). Empty columns stay all-zero.
pub fn equal_share_beta(assignment: &Assignment) -> ResourceAllocation {
    let loads = assignment.bs_loads();
    let mut beta = vec![vec![0.0; assignment.num_bs()]; assignment.num_users()];
    for (k, j) in assignment.assigned_pairs() {
        beta[k][j] = 1.0 / loads[j] as f64;
    }
    ResourceAllocation { beta }
}

/// Joint log utility in nats: `Σ x[k][j] · ln(c[k][j] · beta[k][j])`, with
/// unassigned users contributing zero. An assigned pair with a zero share
/// (or zero rate) would have utility −∞ and is reported as a domain error.
pub fn joint_utility(
    assignment: &Assignment,
    beta: &ResourceAllocation,
    c: &RateMatrix,
) -> Result<f64> {
    if beta.num_users() != assignment.num_users()
        || beta.num_bs() != assignment.num_bs()
        || c.num_users() != assignment.num_users()
        || c.num_bs() != assignment.num_bs()
    {
        return Err(Error::Dimension(
            "joint_utility: inconsistent dimensions".into(),
        ));
    }
    let mut total = 0.0;
    for (k, j) in assignment.assigned_pairs() {
        let served = c.rates[k][j] * beta.beta[k][j];
        if served <= 0.0 {
            return Err(Error::Domain(format!(
                "user {k} assigned to BS {j} with zero served rate"
            )));
        }
        total += served.ln();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::AssignMode;

    #[test]
    fn equal_share_reference_cases() {
        let mut a = Assignment::empty(4, 2, AssignMode::Optional);
        a.set(0, Some(0));
        a.set(1, Some(0));
        a.set(2, Some(0));
        let alloc = equal_share_beta(&a);
        for k in 0..3 {
            assert!((alloc.beta[k][0] - 1.0 / 3.0).abs() < 1e-15);
        }
        // Column 1 is empty, user 3 unassigned.
        for k in 0..4 {
            assert_eq!(alloc.beta[k][1], 0.0);
        }
        assert_eq!(alloc.beta[3][0], 0.0);
        alloc.validate(&a).unwrap();

        let mut single = Assignment::empty(1, 1, AssignMode::Optional);
        single.set(0, Some(0));
        assert_eq!(equal_share_beta(&single).beta[0][0], 1.0);
    }

    #[test]
    fn joint_utility_reference_cases() {
        let e2 = std::f64::consts::E * std::f64::consts::E;
        let c = RateMatrix::full(vec![vec![e2]]).unwrap();
        let mut a = Assignment::empty(1, 1, AssignMode::Optional);
        a.set(0, Some(0));
        let beta = equal_share_beta(&a);
        assert!((joint_utility(&a, &beta, &c).unwrap() - 2.0).abs() < 1e-12);

        let empty = Assignment::empty(1, 1, AssignMode::Optional);
        let zero = equal_share_beta(&empty);
        assert_eq!(joint_utility(&empty, &zero, &c).unwrap(), 0.0);

        let e = std::f64::consts::E;
        let c = RateMatrix::full(vec![vec![e], vec![e]]).unwrap();
        let mut both = Assignment::empty(2, 1, AssignMode::Optional);
        both.set(0, Some(0));
        both.set(1, Some(0));
        let beta = equal_share_beta(&both);
        let v = joint_utility(&both, &beta, &c).unwrap();
        assert!((v - 2.0 * (1.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((v - 0.61371).abs() < 1e-5);
    }

    #[test]
    fn assigned_pair_with_zero_share_is_domain_error() {
        let c = RateMatrix::full(vec![vec![4.0]]).unwrap();
        let mut a = Assignment::empty(1, 1, AssignMode::Optional);
        a.set(0, Some(0));
        let beta = ResourceAllocation {
            beta: vec![vec![0.0]],
        };
        assert!(matches!(
            joint_utility(&a, &beta, &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn validate_rejects_oversubscribed_column() {
        let mut a = Assignment::empty(2, 1, AssignMode::Optional);
        a.set(0, Some(0));
        a.set(1, Some(0));
        let alloc = ResourceAllocation {
            beta: vec![vec![0.8], vec![0.7]],
        };
        assert!(alloc.validate(&a).is_err());
    }
}
