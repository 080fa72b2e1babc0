//! Capacity-constrained user association: an exact max-weight solver built
//! on min-cost flow (the assignment polytope is totally unimodular, so the
//! flow optimum is integral and solves the relaxed LP exactly), a
//! brute-force oracle, and the two greedy baselines.

mod brute;
mod flow;
mod greedy;

use std::io::Write;

pub use brute::brute_force_assignment;
pub use flow::solve_max_weight;
pub use greedy::{greedy_global, greedy_per_bs};

use crate::error::{Error, Result};
use crate::model::RateMatrix;

/// Row-sum convention for an assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssignMode {
    /// Each user connects to at most one BS.
    Optional,
    /// Each user connects to exactly one BS.
    Mandatory,
}

/// A binary user-to-BS association. Stored as one choice per user, which
/// makes the row constraint (at most / exactly one BS per user) structural.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    choices: Vec<Option<usize>>,
    num_bs: usize,
    mode: AssignMode,
}

impl Assignment {
    pub fn empty(num_users: usize, num_bs: usize, mode: AssignMode) -> Assignment {
        Assignment {
            choices: vec![None; num_users],
            num_bs,
            mode,
        }
    }

    pub fn from_choices(choices: Vec<Option<usize>>, num_bs: usize, mode: AssignMode) -> Assignment {
        Assignment {
            choices,
            num_bs,
            mode,
        }
    }

    pub fn num_users(&self) -> usize {
        self.choices.len()
    }

    pub fn num_bs(&self) -> usize {
        self.num_bs
    }

    pub fn mode(&self) -> AssignMode {
        self.mode
    }

    pub fn choice(&self, user: usize) -> Option<usize> {
        self.choices[user]
    }

    pub fn choices(&self) -> &[Option<usize>] {
        &self.choices
    }

    pub fn set(&mut self, user: usize, bs: Option<usize>) {
        self.choices[user] = bs;
    }

    pub fn is_assigned(&self, user: usize, bs: usize) -> bool {
        self.choices[user] == Some(bs)
    }

    pub fn assigned_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.choices
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.map(|j| (k, j)))
    }

    pub fn num_assigned(&self) -> usize {
        self.choices.iter().filter(|c| c.is_some()).count()
    }

    /// Number of users connected to each BS.
    pub fn bs_loads(&self) -> Vec<usize> {
        let mut loads = vec![0usize; self.num_bs];
        for (_, j) in self.assigned_pairs() {
            loads[j] += 1;
        }
        loads
    }

    /// Total weight `Σ w[k][j]` over the assigned pairs.
    pub fn total_weight(&self, w: &[Vec<f64>]) -> f64 {
        self.assigned_pairs().map(|(k, j)| w[k][j]).sum()
    }

    /// Dense 0/1 matrix view.
    pub fn as_matrix(&self) -> Vec<Vec<u8>> {
        let mut x = vec![vec![0u8; self.num_bs]; self.num_users()];
        for (k, j) in self.assigned_pairs() {
            x[k][j] = 1;
        }
        x
    }

    /// Checks capacity and row constraints, and (when given) candidacy.
    pub fn validate(&self, capacities: &[usize], mask: Option<&[Vec<bool>]>) -> Result<()> {
        if capacities.len() != self.num_bs {
            return Err(Error::Dimension(
                "capacity vector length differs from BS count".into(),
            ));
        }
        for (k, j) in self.assigned_pairs() {
            if j >= self.num_bs {
                return Err(Error::Invariant(format!(
                    "user {k} assigned to unknown BS {j}"
                )));
            }
            if let Some(mask) = mask {
                if !mask[k][j] {
                    return Err(Error::Invariant(format!(
                        "user {k} assigned to non-candidate BS {j}"
                    )));
                }
            }
        }
        for (j, (&load, &cap)) in self.bs_loads().iter().zip(capacities).enumerate() {
            if load > cap {
                return Err(Error::Invariant(format!(
                    "BS {j} serves {load} users over capacity {cap}"
                )));
            }
        }
        if self.mode == AssignMode::Mandatory {
            if let Some(k) = self.choices.iter().position(|c| c.is_none()) {
                return Err(Error::Invariant(format!(
                    "mandatory assignment leaves user {k} unassigned"
                )));
            }
        }
        Ok(())
    }

    /// Writes `user_id,bs_id` rows, omitting unassigned users.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["user_id", "bs_id"])?;
        for (k, j) in self.assigned_pairs() {
            w.write_record([k.to_string(), j.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Weights and capacities of one association instance. `allowed[k][j]`
/// mirrors the rate matrix's candidacy: forbidden pairs are never assigned.
#[derive(Clone, Debug)]
pub struct WeightMatrix {
    pub w: Vec<Vec<f64>>,
    pub capacities: Vec<usize>,
    pub allowed: Vec<Vec<bool>>,
}

impl WeightMatrix {
    pub fn new(w: Vec<Vec<f64>>, capacities: Vec<usize>) -> Result<WeightMatrix> {
        let cols = w.first().map_or(0, |r| r.len());
        let allowed = vec![vec![true; cols]; w.len()];
        WeightMatrix::with_mask(w, capacities, allowed)
    }

    pub fn with_mask(
        w: Vec<Vec<f64>>,
        capacities: Vec<usize>,
        allowed: Vec<Vec<bool>>,
    ) -> Result<WeightMatrix> {
        let m = WeightMatrix {
            w,
            capacities,
            allowed,
        };
        m.validate()?;
        Ok(m)
    }

    /// Instance with the achievable rates themselves as weights.
    pub fn from_rates(c: &RateMatrix, capacities: &[usize]) -> Result<WeightMatrix> {
        WeightMatrix::with_mask(
            c.rates.clone(),
            capacities.to_vec(),
            c.candidate_mask.clone(),
        )
    }

    /// Instance with `log2` of the rates as weights. Zero-rate candidates
    /// would have weight −∞, so they are removed from the candidacy instead.
    pub fn log2_rates(c: &RateMatrix, capacities: &[usize]) -> Result<WeightMatrix> {
        let mut w = vec![vec![0.0; c.num_bs()]; c.num_users()];
        let mut allowed = vec![vec![false; c.num_bs()]; c.num_users()];
        for k in 0..c.num_users() {
            for j in 0..c.num_bs() {
                if c.candidate_mask[k][j] && c.rates[k][j] > 0.0 {
                    w[k][j] = c.rates[k][j].log2();
                    allowed[k][j] = true;
                }
            }
        }
        WeightMatrix::with_mask(w, capacities.to_vec(), allowed)
    }

    pub fn num_users(&self) -> usize {
        self.w.len()
    }

    pub fn num_bs(&self) -> usize {
        self.capacities.len()
    }

    pub fn validate(&self) -> Result<()> {
        let cols = self.num_bs();
        if self.allowed.len() != self.w.len() {
            return Err(Error::Dimension("weight/mask row counts differ".into()));
        }
        for (k, (row, mask_row)) in self.w.iter().zip(&self.allowed).enumerate() {
            if row.len() != cols || mask_row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {k} length differs from capacity count {cols}"
                )));
            }
            for (j, (&v, &ok)) in row.iter().zip(mask_row).enumerate() {
                if ok && !v.is_finite() {
                    return Err(Error::Domain(format!("weight[{k}][{j}] is not finite")));
                }
            }
        }
        Ok(())
    }
}

/// Sum-rate-optimal association: maximizes `Σ x·c` under the load caps.
pub fn sum_rate_optimal(c: &RateMatrix, capacities: &[usize]) -> Result<(Assignment, f64)> {
    let w = WeightMatrix::from_rates(c, capacities)?;
    let assignment = solve_max_weight(&w, AssignMode::Optional)?;
    let value = assignment.total_weight(&c.rates);
    Ok((assignment, value))
}

/// Proportional-fair association: maximizes `Σ x·log2(c)` (equivalent to
/// the log-utility objective because each user holds at most one link).
/// Returns the assignment and `Σ_k log2(Σ_j x c)` with `U(0) = 0`.
pub fn propfair_optimal(c: &RateMatrix, capacities: &[usize]) -> Result<(Assignment, f64)> {
    let w = WeightMatrix::log2_rates(c, capacities)?;
    let assignment = solve_max_weight(&w, AssignMode::Optional)?;
    let value = utility(&assignment, c, 1)?;
    Ok((assignment, value))
}

/// Upper bound on the proportional-fairness optimum:
/// `Σ_k max_j log2(c[k][j])` over candidates with `c > 1`, users with no
/// such candidate contributing zero.
pub fn ub1(c: &RateMatrix) -> f64 {
    (0..c.num_users())
        .map(|k| {
            (0..c.num_bs())
                .filter(|&j| c.candidate_mask[k][j] && c.rates[k][j] > 1.0)
                .map(|j| c.rates[k][j].log2())
                .fold(0.0f64, f64::max)
        })
        .sum()
}

/// Network utility of an assignment: `alpha = 0` gives the sum rate,
/// `alpha = 1` the sum of `log2` rates with `U(0) = 0`.
pub fn utility(assignment: &Assignment, c: &RateMatrix, alpha: u8) -> Result<f64> {
    if alpha > 1 {
        return Err(Error::Domain(format!(
            "utility: only alpha in {{0, 1}} is supported, got {alpha}"
        )));
    }
    let mut total = 0.0;
    for k in 0..assignment.num_users() {
        let eta: f64 = assignment.choice(k).map_or(0.0, |j| c.rates[k][j]);
        total += match alpha {
            0 => eta,
            _ => {
                if eta > 0.0 {
                    eta.log2()
                } else {
                    0.0
                }
            }
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rates_3x2() -> RateMatrix {
        RateMatrix::full(vec![
            vec![5.0, 4.0],
            vec![5.0, 1.0],
            vec![2.0, 3.0],
        ])
        .unwrap()
    }

    #[test]
    fn sum_rate_single_link() {
        let c = RateMatrix::full(vec![vec![6.52356]]).unwrap();
        let (a, v) = sum_rate_optimal(&c, &[1]).unwrap();
        assert_eq!(a.choice(0), Some(0));
        assert!((v - 6.52356).abs() < 1e-12);
    }

    #[test]
    fn sum_rate_all_zero_rates() {
        let c = RateMatrix::full(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let (_, v) = sum_rate_optimal(&c, &[1, 1]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn sum_rate_three_by_two() {
        let c = rates_3x2();
        let (a, v) = sum_rate_optimal(&c, &[1, 1]).unwrap();
        assert!((v - 9.0).abs() < 1e-9);
        a.validate(&[1, 1], Some(&c.candidate_mask)).unwrap();
    }

    #[test]
    fn propfair_single_links() {
        let c = RateMatrix::full(vec![vec![4.0]]).unwrap();
        let (a, v) = propfair_optimal(&c, &[1]).unwrap();
        assert_eq!(a.choice(0), Some(0));
        assert!((v - 2.0).abs() < 1e-12);

        let c = RateMatrix::full(vec![vec![0.5]]).unwrap();
        let (a, v) = propfair_optimal(&c, &[1]).unwrap();
        assert_eq!(a.choice(0), None);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn propfair_three_by_two() {
        let c = rates_3x2();
        let (a, v) = propfair_optimal(&c, &[1, 1]).unwrap();
        let want = 5f64.log2() + 4f64.log2();
        assert!((v - want).abs() < 1e-9, "got {v}, want {want}");
        assert!((v - 4.32193).abs() < 1e-5);
        // Users 1 and 2 are served, user 3 is left out.
        assert_eq!(a.choice(0), Some(1));
        assert_eq!(a.choice(1), Some(0));
        assert_eq!(a.choice(2), None);
    }

    #[test]
    fn ub1_reference_values() {
        let c = rates_3x2();
        let want = 5f64.log2() + 5f64.log2() + 3f64.log2();
        assert!((ub1(&c) - want).abs() < 1e-12);
        assert!((ub1(&c) - 6.22882).abs() < 1e-5);

        let c = RateMatrix::full(vec![vec![1.0, 0.5], vec![0.2, 0.9]]).unwrap();
        assert_eq!(ub1(&c), 0.0);

        let c = RateMatrix::full(vec![vec![4.0]]).unwrap();
        assert!((ub1(&c) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn utility_reference_values() {
        let c = RateMatrix::full(vec![vec![4.0]]).unwrap();
        let empty = Assignment::empty(1, 1, AssignMode::Optional);
        assert_eq!(utility(&empty, &c, 0).unwrap(), 0.0);

        let mut a = Assignment::empty(1, 1, AssignMode::Optional);
        a.set(0, Some(0));
        assert!((utility(&a, &c, 1).unwrap() - 2.0).abs() < 1e-12);

        assert!(utility(&a, &c, 2).is_err());
    }

    #[test]
    fn utility_consistent_with_solver_value() {
        let c = rates_3x2();
        let (a, v) = sum_rate_optimal(&c, &[1, 1]).unwrap();
        assert!((utility(&a, &c, 0).unwrap() - v).abs() < 1e-12);
        assert!((v - 9.0).abs() < 1e-9);
    }

    #[test]
    fn csv_export_omits_unassigned() {
        let c = rates_3x2();
        let (a, _) = sum_rate_optimal(&c, &[1, 1]).unwrap();
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim().lines().collect();
        assert_eq!(lines[0], "user_id,bs_id");
        assert_eq!(lines.len(), 3); // header + 2 assigned users
    }
}
