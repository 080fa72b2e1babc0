//! Exhaustive oracle for small association instances. Independent of the
//! flow solver: it enumerates every row choice directly.

use crate::assign::{AssignMode, Assignment, WeightMatrix};
use crate::error::{Error, Result};

/// Enumeration guard: largest instance the oracle accepts.
pub const BRUTE_MAX_USERS: usize = 10;
pub const BRUTE_MAX_BS: usize = 4;

/// Enumerates all `(J+1)^K` row choices (or `J^K` in mandatory mode),
/// filters by capacity and candidacy, and returns the maximizer. Ties go to
/// the first maximizer in enumeration order, i.e. users scanned by index
/// with "unassigned" before BS 0 before BS 1, which yields the
/// lexicographically smallest choice vector.
pub fn brute_force_assignment(w: &WeightMatrix, mode: AssignMode) -> Result<Assignment> {
    w.validate()?;
    let k_total = w.num_users();
    let j_total = w.num_bs();
    if k_total > BRUTE_MAX_USERS || j_total > BRUTE_MAX_BS {
        return Err(Error::TooLarge(format!(
            "{k_total} users x {j_total} BSs exceeds the {BRUTE_MAX_USERS}x{BRUTE_MAX_BS} oracle guard"
        )));
    }

    struct Search<'a> {
        w: &'a WeightMatrix,
        mode: AssignMode,
        residual: Vec<usize>,
        current: Vec<Option<usize>>,
        best: Option<(f64, Vec<Option<usize>>)>,
    }

    impl Search<'_> {
        fn recurse(&mut self, user: usize, value: f64) {
            if user == self.w.num_users() {
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
                self.recurse(user + 1, value);
            }
            for j in 0..self.w.num_bs() {
                if !self.w.allowed[user][j] || self.residual[j] == 0 {
                    continue;
                }
                self.residual[j] -= 1;
                self.current[user] = Some(j);
                self.recurse(user + 1, value + self.w.w[user][j]);
                self.current[user] = None;
                self.residual[j] += 1;
            }
        }
    }

    let mut search = Search {
        w,
        mode,
        residual: w.capacities.clone(),
        current: vec![None; k_total],
        best: None,
    };
    search.recurse(0, 0.0);

    match search.best {
        Some((_, choices)) => Ok(Assignment::from_choices(choices, j_total, mode)),
        None => Err(Error::Infeasible(
            "no feasible assignment under mandatory mode".into(),
        )),
    }
}
