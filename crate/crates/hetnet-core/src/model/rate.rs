use std::io::Write;

use crate::error::{Error, Result};
use crate::model::channel::ChannelState;
use crate::model::scenario::{BsKind, Scenario};

/// Deterministic massive-MIMO downlink rate in bits/s/Hz:
/// `log2(1 + ((M-L+1)/L) · P·l / (1 + I))`.
///
/// `interference` is the sum of the other BSs' received powers `P'·l'`.
pub fn macro_rate(
    antennas: usize,
    load: usize,
    power: f64,
    gain: f64,
    interference: f64,
) -> Result<f64> {
    if load == 0 || load > antennas {
        return Err(Error::Domain(format!(
            "macro_rate: load must be in 1..=antennas, got load={load}, antennas={antennas}"
        )));
    }
    if !(power > 0.0) || !(gain >= 0.0) || !(interference >= 0.0) {
        return Err(Error::Domain(
            "macro_rate: power must be positive, gain and interference nonnegative".into(),
        ));
    }
    let dof = (antennas - load + 1) as f64 / load as f64;
    Ok((1.0 + dof * power * gain / (1.0 + interference)).log2())
}

/// Worst-case picocell rate in bits/s/Hz:
/// `log2(1 + P·(l²·Σ|g|²)² / (1 + (|G|-1)·P))`,
/// where `|h^H h| = l²·Σ|g|²` and `coverage_count = |G|` counts the users
/// inside the picocell's coverage, all assumed connected with perfect
/// channels. Nonincreasing in `coverage_count`.
pub fn pico_rate_worstcase(
    power: f64,
    gain: f64,
    gains_sum: f64,
    coverage_count: usize,
) -> Result<f64> {
    if coverage_count == 0 {
        return Err(Error::Domain(
            "pico_rate_worstcase: the served user must belong to its own coverage set".into(),
        ));
    }
    if !(power > 0.0) || !(gain >= 0.0) || !(gains_sum >= 0.0) {
        return Err(Error::Domain(
            "pico_rate_worstcase: power must be positive, gains nonnegative".into(),
        ));
    }
    let signal = gain * gain * gains_sum;
    let denom = 1.0 + (coverage_count - 1) as f64 * power;
    Ok((1.0 + power * signal * signal / denom).log2())
}

/// Per-link achievable rates `c[k][j]` with the candidacy mask.
///
/// `candidate_mask[k][j]` is true when user `k` may associate to BS `j`:
/// always for the macro, and for a pico only when the user lies inside its
/// coverage disc. Rates are zero wherever the mask is false.
#[derive(Clone, Debug, PartialEq)]
pub struct RateMatrix {
    pub rates: Vec<Vec<f64>>,
    pub candidate_mask: Vec<Vec<bool>>,
}

impl RateMatrix {
    /// Builds a matrix where every pair is a candidate.
    pub fn full(rates: Vec<Vec<f64>>) -> Result<RateMatrix> {
        let cols = rates.first().map_or(0, |r| r.len());
        let mask = vec![vec![true; cols]; rates.len()];
        RateMatrix::new(rates, mask)
    }

    pub fn new(rates: Vec<Vec<f64>>, candidate_mask: Vec<Vec<bool>>) -> Result<RateMatrix> {
        let m = RateMatrix {
            rates,
            candidate_mask,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn num_users(&self) -> usize {
        self.rates.len()
    }

    pub fn num_bs(&self) -> usize {
        self.rates.first().map_or(0, |r| r.len())
    }

    pub fn validate(&self) -> Result<()> {
        let cols = self.num_bs();
        if self.candidate_mask.len() != self.rates.len() {
            return Err(Error::Dimension(
                "rate matrix and mask row counts differ".into(),
            ));
        }
        for (k, (row, mask_row)) in self.rates.iter().zip(&self.candidate_mask).enumerate() {
            if row.len() != cols || mask_row.len() != cols {
                return Err(Error::Dimension(format!("ragged rate matrix at row {k}")));
            }
            for (j, (&c, &ok)) in row.iter().zip(mask_row).enumerate() {
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::Domain(format!(
                        "rate[{k}][{j}] = {c} must be finite and nonnegative"
                    )));
                }
                if !ok && c != 0.0 {
                    return Err(Error::Domain(format!(
                        "rate[{k}][{j}] must be zero outside the candidate mask"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Writes the matrix as CSV: one row per user, one column per BS.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["user_id".to_string()];
        header.extend((0..self.num_bs()).map(|j| format!("bs_{j}")));
        w.write_record(&header)?;
        for (k, row) in self.rates.iter().enumerate() {
            let mut rec = vec![k.to_string()];
            rec.extend(row.iter().map(|c| format!("{c}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Options for rate-matrix construction.
#[derive(Clone, Copy, Debug)]
pub struct RateOptions {
    /// Whether picocell downlink power contributes to the interference term
    /// of the macro rate. The summation over "all other BSs" includes them
    /// by default.
    pub pico_interference_at_macro: bool,
}

impl Default for RateOptions {
    fn default() -> Self {
        RateOptions {
            pico_interference_at_macro: true,
        }
    }
}

/// Users inside each BS's coverage: every user for the macro, and the users
/// within `coverage_radius` (inclusive) for a pico.
pub fn coverage_sets(scenario: &Scenario) -> Vec<Vec<usize>> {
    scenario
        .base_stations
        .iter()
        .map(|bs| match bs.kind {
            BsKind::Macro => (0..scenario.num_users()).collect(),
            BsKind::Pico => scenario
                .users
                .iter()
                .enumerate()
                .filter(|(_, u)| u.position.distance(&bs.position) <= scenario.coverage_radius)
                .map(|(k, _)| k)
                .collect(),
        })
        .collect()
}

/// Builds the achievable-rate matrix from a scenario and a channel draw,
/// applying each BS's rate bias.
pub fn build_rate_matrix(scenario: &Scenario, channel: &ChannelState) -> Result<RateMatrix> {
    build_rate_matrix_with(scenario, channel, &RateOptions::default())
}

pub fn build_rate_matrix_with(
    scenario: &Scenario,
    channel: &ChannelState,
    options: &RateOptions,
) -> Result<RateMatrix> {
    let k_total = scenario.num_users();
    let j_total = scenario.num_bs();
    if channel.num_users() != k_total || channel.num_bs() != j_total {
        return Err(Error::Dimension(format!(
            "channel is {}x{} but scenario is {k_total}x{j_total}",
            channel.num_users(),
            channel.num_bs()
        )));
    }

    let coverage = coverage_sets(scenario);
    let in_coverage: Vec<Vec<bool>> = coverage
        .iter()
        .map(|set| {
            let mut flags = vec![false; k_total];
            for &k in set {
                flags[k] = true;
            }
            flags
        })
        .collect();

    let mut rates = vec![vec![0.0; j_total]; k_total];
    let mut mask = vec![vec![false; j_total]; k_total];

    for k in 0..k_total {
        for (j, bs) in scenario.base_stations.iter().enumerate() {
            match bs.kind {
                BsKind::Macro => {
                    let interference: f64 = scenario
                        .base_stations
                        .iter()
                        .enumerate()
                        .filter(|(other, ob)| {
                            *other != j
                                && (options.pico_interference_at_macro || ob.kind != BsKind::Pico)
                        })
                        .map(|(other, ob)| ob.tx_power * channel.large_scale[k][other])
                        .sum();
                    let c = macro_rate(
                        bs.antennas,
                        bs.load_capacity,
                        bs.tx_power,
                        channel.large_scale[k][j],
                        interference,
                    )?;
                    rates[k][j] = c * bs.rate_bias;
                    mask[k][j] = true;
                }
                BsKind::Pico => {
                    if in_coverage[j][k] {
                        let c = pico_rate_worstcase(
                            bs.tx_power,
                            channel.large_scale[k][j],
                            channel.gains_sum(j, k),
                            coverage[j].len(),
                        )?;
                        rates[k][j] = c * bs.rate_bias;
                        mask[k][j] = true;
                    }
                }
            }
        }
    }

    RateMatrix::new(rates, mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::scenario::{Area, BaseStation, Point, UserTerminal};

    #[test]
    fn macro_rate_reference_values() {
        let v = macro_rate(100, 10, 10.0, 0.01, 0.0).unwrap();
        assert!((v - (1.91f64).log2()).abs() < 1e-12);
        assert!((v - 0.93357).abs() < 1e-5, "got {v}");

        assert_eq!(macro_rate(100, 10, 10.0, 0.0, 5.0).unwrap(), 0.0);

        let v = macro_rate(10, 10, 1.0, 1.0, 0.0).unwrap();
        assert!((v - (1.1f64).log2()).abs() < 1e-12);
        assert!((v - 0.13750).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn macro_rate_rejects_bad_load() {
        assert!(macro_rate(10, 0, 1.0, 1.0, 0.0).is_err());
        assert!(macro_rate(10, 11, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn macro_rate_decreasing_in_load_and_interference() {
        let mut prev = f64::INFINITY;
        for load in 1..=100 {
            let v = macro_rate(100, load, 10.0, 0.3, 0.5).unwrap();
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let v = macro_rate(100, 10, 10.0, 0.3, i as f64 * 0.7).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn pico_rate_reference_values() {
        let v = pico_rate_worstcase(1.0, 1.0, 4.0, 1).unwrap();
        assert!((v - 17f64.log2()).abs() < 1e-12);
        assert!((v - 4.08746).abs() < 1e-5, "got {v}");

        assert_eq!(pico_rate_worstcase(1.0, 0.0, 4.0, 3).unwrap(), 0.0);

        let v = pico_rate_worstcase(1.0, 1.0, 4.0, 3).unwrap();
        assert!((v - (1.0 + 16.0 / 3.0f64).log2()).abs() < 1e-12);
        assert!((v - 2.66297).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn pico_rate_rejects_empty_coverage() {
        assert!(pico_rate_worstcase(1.0, 1.0, 4.0, 0).is_err());
    }

    #[test]
    fn pico_rate_decreasing_in_coverage_count() {
        let mut prev = f64::INFINITY;
        for count in 1..=40 {
            let v = pico_rate_worstcase(10.0, 0.8, 3.7, count).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn pico_rate_matches_hand_formula_with_unit_fading() {
        // All |g|² forced to 1 over M antennas and l = 1.
        for m in 1..=8usize {
            for count in 1..=5usize {
                let p = 2.5;
                let got = pico_rate_worstcase(p, 1.0, m as f64, count).unwrap();
                let want =
                    (1.0 + p * (m * m) as f64 / (1.0 + (count as f64 - 1.0) * p)).log2();
                let rel = ((got - want) / want.max(1e-300)).abs();
                assert!(rel < 1e-12, "m={m} count={count}: {got} vs {want}");
            }
        }
    }

    fn one_user_macro_scenario() -> Scenario {
        Scenario {
            base_stations: vec![BaseStation {
                id: 0,
                kind: BsKind::Macro,
                position: Point::new(500.0, 500.0),
                antennas: 100,
                load_capacity: 10,
                tx_power: 10.0,
                path_loss_exponent: 3.5,
                rate_bias: 1.0,
            }],
            users: vec![UserTerminal {
                id: 0,
                position: Point::new(500.0, 500.0),
                weight: 1.0,
            }],
            area: Area { w: 1000.0, h: 1000.0 },
            coverage_radius: 300.0,
            seed: 3,
        }
    }

    #[test]
    fn single_user_at_macro_position_rate() {
        let s = one_user_macro_scenario();
        let ch = ChannelState::sample_seeded(&s).unwrap();
        let m = build_rate_matrix(&s, &ch).unwrap();
        let want = 92f64.log2();
        assert!((m.rates[0][0] - want).abs() < 1e-12);
        assert!((m.rates[0][0] - 6.52356).abs() < 1e-5);
        assert!(m.candidate_mask[0][0]);
    }

    #[test]
    fn out_of_coverage_pico_is_masked() {
        let mut s = one_user_macro_scenario();
        s.base_stations.push(BaseStation {
            id: 1,
            kind: BsKind::Pico,
            position: Point::new(0.0, 0.0),
            antennas: 4,
            load_capacity: 4,
            tx_power: 10.0,
            path_loss_exponent: 4.0,
            rate_bias: 1.0,
        });
        // User sits at (500, 500), ~707 m from the pico at the origin.
        let ch = ChannelState::sample_seeded(&s).unwrap();
        let m = build_rate_matrix(&s, &ch).unwrap();
        assert!(!m.candidate_mask[0][1]);
        assert_eq!(m.rates[0][1], 0.0);
        assert!(m.candidate_mask[0][0]);
    }

    #[test]
    fn macro_bias_halves_macro_column() {
        let mut s = one_user_macro_scenario();
        s.base_stations.push(BaseStation {
            id: 1,
            kind: BsKind::Pico,
            position: Point::new(450.0, 450.0),
            antennas: 4,
            load_capacity: 4,
            tx_power: 10.0,
            path_loss_exponent: 4.0,
            rate_bias: 1.0,
        });
        let ch = ChannelState::sample_seeded(&s).unwrap();
        let plain = build_rate_matrix(&s, &ch).unwrap();
        let mut biased_s = s.clone();
        biased_s.base_stations[0].rate_bias = 0.5;
        let biased = build_rate_matrix(&biased_s, &ch).unwrap();
        assert_eq!(biased.rates[0][0], plain.rates[0][0] * 0.5);
        assert_eq!(biased.rates[0][1], plain.rates[0][1]);
    }

    #[test]
    fn interference_switch_changes_macro_rate() {
        let mut s = one_user_macro_scenario();
        s.base_stations.push(BaseStation {
            id: 1,
            kind: BsKind::Pico,
            position: Point::new(450.0, 450.0),
            antennas: 4,
            load_capacity: 4,
            tx_power: 10.0,
            path_loss_exponent: 4.0,
            rate_bias: 1.0,
        });
        let ch = ChannelState::sample_seeded(&s).unwrap();
        let with = build_rate_matrix(&s, &ch).unwrap();
        let without = build_rate_matrix_with(
            &s,
            &ch,
            &RateOptions {
                pico_interference_at_macro: false,
            },
        )
        .unwrap();
        assert!(without.rates[0][0] > with.rates[0][0]);
        assert_eq!(without.rates[0][1], with.rates[0][1]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let s = one_user_macro_scenario();
        let ch = ChannelState {
            large_scale: vec![vec![1.0; 2]; 3],
            small_scale_power: vec![Vec::new(); 2],
        };
        assert!(build_rate_matrix(&s, &ch).is_err());
    }
}
