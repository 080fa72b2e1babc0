use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::scenario::{BsKind, Scenario};

/// Reference distance of the path-loss model, in meters.
pub const PATH_LOSS_BREAKPOINT_M: f64 = 40.0;

/// Large-scale gain `1 / (1 + (d/40)^κ)`.
///
/// Strictly decreasing in distance for any positive exponent, and exactly 1
/// at distance 0.
pub fn path_loss(distance: f64, exponent: f64) -> Result<f64> {
    if !(distance >= 0.0) {
        return Err(Error::Domain(format!(
            "path_loss: distance must be nonnegative, got {distance}"
        )));
    }
    if !(exponent > 0.0) {
        return Err(Error::Domain(format!(
            "path_loss: exponent must be positive, got {exponent}"
        )));
    }
    Ok(1.0 / (1.0 + (distance / PATH_LOSS_BREAKPOINT_M).powf(exponent)))
}

/// Sampled channel state for one scenario.
///
/// `large_scale[k][j]` is the gain l between user `k` and BS `j`.
/// `small_scale_power[j][k][n]` is |g|² for antenna `n` of picocell `j`
/// towards user `k`; the macro entry is empty because its deterministic
/// rate uses no small-scale term.
#[derive(Clone, Debug)]
pub struct ChannelState {
    pub large_scale: Vec<Vec<f64>>,
    pub small_scale_power: Vec<Vec<Vec<f64>>>,
}

impl ChannelState {
    /// Sum over antennas of |g|² for a (pico BS, user) pair.
    pub fn gains_sum(&self, bs: usize, user: usize) -> f64 {
        self.small_scale_power[bs][user].iter().sum()
    }

    pub fn num_users(&self) -> usize {
        self.large_scale.len()
    }

    pub fn num_bs(&self) -> usize {
        self.large_scale.first().map_or(0, |row| row.len())
    }

    /// Samples the channel from the scenario's own seed.
    pub fn sample_seeded(scenario: &Scenario) -> Result<ChannelState> {
        let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
        sample_channel(scenario, &mut rng)
    }
}

/// Draws a channel realization: deterministic large-scale gains from the
/// path-loss model, and i.i.d. uniform [0.8, 1.0] small-scale powers for
/// every picocell antenna.
pub fn sample_channel<R: Rng>(scenario: &Scenario, rng: &mut R) -> Result<ChannelState> {
    scenario.validate()?;
    let k_total = scenario.num_users();
    let j_total = scenario.num_bs();

    let mut large_scale = vec![vec![0.0; j_total]; k_total];
    for (k, user) in scenario.users.iter().enumerate() {
        for (j, bs) in scenario.base_stations.iter().enumerate() {
            let d = user.position.distance(&bs.position);
            large_scale[k][j] = path_loss(d, bs.path_loss_exponent)?;
        }
    }

    let mut small_scale_power = Vec::with_capacity(j_total);
    for bs in &scenario.base_stations {
        match bs.kind {
            BsKind::Macro => small_scale_power.push(Vec::new()),
            BsKind::Pico => {
                let mut per_user = Vec::with_capacity(k_total);
                for _ in 0..k_total {
                    let gains: Vec<f64> =
                        (0..bs.antennas).map(|_| rng.gen_range(0.8..=1.0)).collect();
                    per_user.push(gains);
                }
                small_scale_power.push(per_user);
            }
        }
    }

    Ok(ChannelState {
        large_scale,
        small_scale_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::scenario::{Area, BaseStation, Point, UserTerminal};

    fn scenario_with_user_at(pos: Point) -> Scenario {
        Scenario {
            base_stations: vec![
                BaseStation {
                    id: 0,
                    kind: BsKind::Macro,
                    position: Point::new(500.0, 500.0),
                    antennas: 100,
                    load_capacity: 10,
                    tx_power: 10.0,
                    path_loss_exponent: 3.5,
                    rate_bias: 1.0,
                },
                BaseStation {
                    id: 1,
                    kind: BsKind::Pico,
                    position: Point::new(200.0, 200.0),
                    antennas: 4,
                    load_capacity: 4,
                    tx_power: 10.0,
                    path_loss_exponent: 4.0,
                    rate_bias: 1.0,
                },
            ],
            users: vec![UserTerminal {
                id: 0,
                position: pos,
                weight: 1.0,
            }],
            area: Area { w: 1000.0, h: 1000.0 },
            coverage_radius: 300.0,
            seed: 99,
        }
    }

    #[test]
    fn path_loss_reference_values() {
        assert_eq!(path_loss(0.0, 3.5).unwrap(), 1.0);
        assert_eq!(path_loss(40.0, 3.5).unwrap(), 0.5);
        let v = path_loss(80.0, 4.0).unwrap();
        assert!((v - 1.0 / 17.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn path_loss_rejects_negative_distance() {
        assert!(path_loss(-1.0, 3.5).is_err());
        assert!(path_loss(1.0, 0.0).is_err());
    }

    #[test]
    fn path_loss_strictly_decreasing_on_grid() {
        for &kappa in &[0.5, 2.0, 3.5, 4.0, 6.0] {
            let mut prev = path_loss(0.0, kappa).unwrap();
            assert_eq!(prev, 1.0);
            for step in 1..=100 {
                let v = path_loss(step as f64 * 13.7, kappa).unwrap();
                assert!(v < prev, "not decreasing at step {step} for κ={kappa}");
                prev = v;
            }
        }
    }

    #[test]
    fn colocated_user_sees_unit_gain() {
        let s = scenario_with_user_at(Point::new(500.0, 500.0));
        let ch = ChannelState::sample_seeded(&s).unwrap();
        assert_eq!(ch.large_scale[0][0], 1.0);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let s = scenario_with_user_at(Point::new(123.0, 456.0));
        let a = ChannelState::sample_seeded(&s).unwrap();
        let b = ChannelState::sample_seeded(&s).unwrap();
        assert_eq!(a.large_scale, b.large_scale);
        assert_eq!(a.small_scale_power, b.small_scale_power);
    }

    #[test]
    fn macro_has_no_small_scale_entries() {
        let s = scenario_with_user_at(Point::new(123.0, 456.0));
        let ch = ChannelState::sample_seeded(&s).unwrap();
        assert!(ch.small_scale_power[0].is_empty());
        assert_eq!(ch.small_scale_power[1].len(), 1);
        assert_eq!(ch.small_scale_power[1][0].len(), 4);
        for &g in &ch.small_scale_power[1][0] {
            assert!((0.8..=1.0).contains(&g));
        }
    }

    #[test]
    fn small_scale_mean_matches_uniform_moment() {
        // E[U(0.8, 1.0)] = 0.9, checked over 1e5 draws.
        let mut s = scenario_with_user_at(Point::new(123.0, 456.0));
        s.base_stations[1].antennas = 100;
        s.base_stations[1].load_capacity = 100;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut total = 0.0;
        let mut count = 0usize;
        for _ in 0..1000 {
            let ch = sample_channel(&s, &mut rng).unwrap();
            for g in &ch.small_scale_power[1][0] {
                total += g;
                count += 1;
            }
        }
        assert_eq!(count, 100_000);
        let mean = total / count as f64;
        assert!((mean - 0.9).abs() < 0.005, "mean {mean}");
    }
}
