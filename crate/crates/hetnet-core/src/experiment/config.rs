use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::default_weight_set;
use crate::model::Area;

/// Full configuration of a simulation campaign. Serialized as JSON with
/// these field names; every field has a default so partial files work.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Number of picocells; the BS total is this plus the macro.
    pub pico_count: usize,
    /// User counts to sweep.
    pub k_sweep: Vec<usize>,
    pub area: Area,
    pub macro_antennas: usize,
    pub macro_load: usize,
    pub macro_power_dbm: f64,
    pub macro_rate_bias: f64,
    pub pico_antennas: usize,
    pub pico_load: usize,
    pub pico_power_dbm: f64,
    pub pico_rate_bias: f64,
    pub coverage_radius: f64,
    /// Subgradient step numerator ϑ.
    pub theta: f64,
    /// Subgradient step offset γ.
    pub gamma: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Finite weight set users draw from.
    pub weight_set: Vec<f64>,
    /// Price margin on unselected pairs in the price game.
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    /// Also run the mandatory-connection variant in the joint experiment.
    pub include_mandatory: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            pico_count: 10,
            k_sweep: vec![50, 100, 150, 200, 250],
            area: Area {
                w: 1000.0,
                h: 1000.0,
            },
            macro_antennas: 100,
            macro_load: 10,
            macro_power_dbm: 40.0,
            macro_rate_bias: 1.0,
            pico_antennas: 4,
            pico_load: 4,
            pico_power_dbm: 40.0,
            pico_rate_bias: 1.0,
            coverage_radius: 300.0,
            theta: 1.0,
            gamma: 10.0,
            tol: 1e-4,
            max_iter: 5000,
            weight_set: default_weight_set(),
            epsilon: 1e-6,
            trials: 50,
            seed: 20_240_601,
            include_mandatory: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.k_sweep.is_empty() || self.k_sweep.iter().any(|&k| k == 0) {
            return Err(Error::InvalidConfig(
                "k_sweep must list positive user counts".into(),
            ));
        }
        if self.macro_load == 0 || self.macro_load > self.macro_antennas {
            return Err(Error::InvalidConfig(
                "macro load must be in 1..=antennas".into(),
            ));
        }
        if self.pico_count > 0 && (self.pico_load == 0 || self.pico_load > self.pico_antennas) {
            return Err(Error::InvalidConfig(
                "pico load must be in 1..=antennas".into(),
            ));
        }
        if !(self.coverage_radius > 0.0) {
            return Err(Error::InvalidConfig(
                "coverage_radius must be positive".into(),
            ));
        }
        if self.weight_set.is_empty() || self.weight_set.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidConfig(
                "weight_set must be nonempty and positive".into(),
            ));
        }
        if !(self.theta > 0.0) || !(self.gamma > 0.0) {
            return Err(Error::InvalidConfig(
                "theta and gamma must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_reference_setup() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.pico_count + 1, 11);
        assert_eq!(cfg.macro_antennas, 100);
        assert_eq!(cfg.macro_load, 10);
        assert_eq!(cfg.pico_antennas, 4);
        assert_eq!(cfg.pico_load, 4);
        assert_eq!(cfg.weight_set.len(), 20);
        assert_eq!(cfg.trials, 50);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"trials": 3, "k_sweep": [10]}"#).unwrap();
        assert_eq!(cfg.trials, 3);
        assert_eq!(cfg.k_sweep, vec![10]);
        assert_eq!(cfg.pico_count, 10);
    }

    #[test]
    fn bad_config_is_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"trials": 0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"k_sweep": []}"#).is_err());
    }
}
