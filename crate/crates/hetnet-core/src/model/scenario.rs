use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Path-loss exponent used for the macro BS link.
pub const MACRO_PATH_LOSS_EXPONENT: f64 = 3.5;
/// Path-loss exponent used for picocell links.
pub const PICO_PATH_LOSS_EXPONENT: f64 = 4.0;

/// Converts a power in dBm to a linear value against unit noise.
pub fn dbm_to_linear(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) / 1000.0
}

/// Converts a linear power back to dBm.
pub fn linear_to_dbm(linear: f64) -> f64 {
    10.0 * (linear * 1000.0).log10()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BsKind {
    Macro,
    Pico,
}

impl BsKind {
    /// Default path-loss exponent for this kind of BS.
    pub fn path_loss_exponent(self) -> f64 {
        match self {
            BsKind::Macro => MACRO_PATH_LOSS_EXPONENT,
            BsKind::Pico => PICO_PATH_LOSS_EXPONENT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// A base station: either the single massive-MIMO macro or a picocell.
///
/// `tx_power` is linear and noise-normalized; file formats carry dBm and
/// convert on load. `load_capacity` is the maximum number of users the BS
/// may serve simultaneously and can never exceed the antenna count.
#[derive(Clone, Debug)]
pub struct BaseStation {
    pub id: usize,
    pub kind: BsKind,
    pub position: Point,
    pub antennas: usize,
    pub load_capacity: usize,
    pub tx_power: f64,
    pub path_loss_exponent: f64,
    /// Multiplicative factor applied to this BS's achievable rates.
    pub rate_bias: f64,
}

/// A user terminal. `weight` trades off rate satisfaction against payment
/// in the distributed games and is drawn from a finite set.
#[derive(Clone, Debug)]
pub struct UserTerminal {
    pub id: usize,
    pub position: Point,
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub w: f64,
    pub h: f64,
}

impl Area {
    pub fn contains(&self, p: &Point) -> bool {
        p.x >= 0.0 && p.x <= self.w && p.y >= 0.0 && p.y <= self.h
    }

    pub fn center(&self) -> Point {
        Point::new(self.w / 2.0, self.h / 2.0)
    }
}

/// An immutable network instance: BS roster, user roster, geometry and the
/// RNG seed that downstream channel sampling derives from.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub base_stations: Vec<BaseStation>,
    pub users: Vec<UserTerminal>,
    pub area: Area,
    /// Radius of a picocell's coverage disc, in meters. The macro covers
    /// the whole area.
    pub coverage_radius: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_bs(&self) -> usize {
        self.base_stations.len()
    }

    /// Index of the unique macro BS.
    pub fn macro_index(&self) -> usize {
        self.base_stations
            .iter()
            .position(|b| b.kind == BsKind::Macro)
            .expect("validated scenario has exactly one macro BS")
    }

    /// Per-BS load capacities in BS index order.
    pub fn capacities(&self) -> Vec<usize> {
        self.base_stations.iter().map(|b| b.load_capacity).collect()
    }

    /// Per-user weights in user index order.
    pub fn weights(&self) -> Vec<f64> {
        self.users.iter().map(|u| u.weight).collect()
    }

    /// Checks the structural invariants of the instance.
    pub fn validate(&self) -> Result<()> {
        let macros = self
            .base_stations
            .iter()
            .filter(|b| b.kind == BsKind::Macro)
            .count();
        if macros != 1 {
            return Err(Error::InvalidScenario(format!(
                "expected exactly one macro BS, found {macros}"
            )));
        }
        if !(self.coverage_radius > 0.0) {
            return Err(Error::InvalidScenario(
                "coverage_radius must be positive".into(),
            ));
        }
        for (i, b) in self.base_stations.iter().enumerate() {
            if b.id != i {
                return Err(Error::InvalidScenario(format!(
                    "BS ids must be dense 0-based indices; slot {i} holds id {}",
                    b.id
                )));
            }
            if b.load_capacity == 0 || b.load_capacity > b.antennas {
                return Err(Error::InvalidScenario(format!(
                    "BS {i}: load capacity {} must be in 1..={}",
                    b.load_capacity, b.antennas
                )));
            }
            if !(b.tx_power > 0.0) || !(b.rate_bias > 0.0) || !(b.path_loss_exponent > 0.0) {
                return Err(Error::InvalidScenario(format!(
                    "BS {i}: tx_power, rate_bias and path_loss_exponent must be positive"
                )));
            }
            if !self.area.contains(&b.position) {
                return Err(Error::InvalidScenario(format!(
                    "BS {i} lies outside the area"
                )));
            }
        }
        for (k, u) in self.users.iter().enumerate() {
            if u.id != k {
                return Err(Error::InvalidScenario(format!(
                    "user ids must be dense 0-based indices; slot {k} holds id {}",
                    u.id
                )));
            }
            if !(u.weight > 0.0) || !u.weight.is_finite() {
                return Err(Error::InvalidScenario(format!(
                    "user {k}: weight must be positive and finite"
                )));
            }
            if !self.area.contains(&u.position) {
                return Err(Error::InvalidScenario(format!(
                    "user {k} lies outside the area"
                )));
            }
        }
        Ok(())
    }

    /// Serializes to the JSON file schema (powers stored in dBm).
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ScenarioFile::from(self))?)
    }

    /// Parses the JSON file schema and validates the result.
    pub fn from_json(text: &str) -> Result<Scenario> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        let scenario = file.into_scenario();
        scenario.validate()?;
        Ok(scenario)
    }
}

fn default_bias() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
struct BaseStationFile {
    id: usize,
    kind: BsKind,
    x: f64,
    y: f64,
    antennas: usize,
    load: usize,
    power_dbm: f64,
    #[serde(default = "default_bias")]
    rate_bias: f64,
}

#[derive(Serialize, Deserialize)]
struct UserFile {
    id: usize,
    x: f64,
    y: f64,
    weight: f64,
}

#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    base_stations: Vec<BaseStationFile>,
    users: Vec<UserFile>,
    area: Area,
    coverage_radius: f64,
    seed: u64,
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            base_stations: s
                .base_stations
                .iter()
                .map(|b| BaseStationFile {
                    id: b.id,
                    kind: b.kind,
                    x: b.position.x,
                    y: b.position.y,
                    antennas: b.antennas,
                    load: b.load_capacity,
                    power_dbm: linear_to_dbm(b.tx_power),
                    rate_bias: b.rate_bias,
                })
                .collect(),
            users: s
                .users
                .iter()
                .map(|u| UserFile {
                    id: u.id,
                    x: u.position.x,
                    y: u.position.y,
                    weight: u.weight,
                })
                .collect(),
            area: s.area,
            coverage_radius: s.coverage_radius,
            seed: s.seed,
        }
    }
}

impl ScenarioFile {
    fn into_scenario(self) -> Scenario {
        Scenario {
            base_stations: self
                .base_stations
                .into_iter()
                .map(|b| BaseStation {
                    id: b.id,
                    kind: b.kind,
                    position: Point::new(b.x, b.y),
                    antennas: b.antennas,
                    load_capacity: b.load,
                    tx_power: dbm_to_linear(b.power_dbm),
                    path_loss_exponent: b.kind.path_loss_exponent(),
                    rate_bias: b.rate_bias,
                })
                .collect(),
            users: self
                .users
                .into_iter()
                .map(|u| UserTerminal {
                    id: u.id,
                    position: Point::new(u.x, u.y),
                    weight: u.weight,
                })
                .collect(),
            area: self.area,
            coverage_radius: self.coverage_radius,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_scenario() -> Scenario {
        Scenario {
            base_stations: vec![
                BaseStation {
                    id: 0,
                    kind: BsKind::Macro,
                    position: Point::new(500.0, 500.0),
                    antennas: 100,
                    load_capacity: 10,
                    tx_power: 10.0,
                    path_loss_exponent: MACRO_PATH_LOSS_EXPONENT,
                    rate_bias: 1.0,
                },
                BaseStation {
                    id: 1,
                    kind: BsKind::Pico,
                    position: Point::new(100.0, 100.0),
                    antennas: 4,
                    load_capacity: 4,
                    tx_power: 10.0,
                    path_loss_exponent: PICO_PATH_LOSS_EXPONENT,
                    rate_bias: 1.0,
                },
            ],
            users: vec![UserTerminal {
                id: 0,
                position: Point::new(500.0, 500.0),
                weight: 2.0,
            }],
            area: Area { w: 1000.0, h: 1000.0 },
            coverage_radius: 300.0,
            seed: 7,
        }
    }

    #[test]
    fn dbm_conversion_matches_reference_points() {
        assert!((dbm_to_linear(40.0) - 10.0).abs() < 1e-12);
        assert!((dbm_to_linear(30.0) - 1.0).abs() < 1e-12);
        assert!((linear_to_dbm(10.0) - 40.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_preserves_scenario() {
        let s = tiny_scenario();
        let text = s.to_json().unwrap();
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(back.num_bs(), 2);
        assert_eq!(back.num_users(), 1);
        assert!((back.base_stations[0].tx_power - 10.0).abs() < 1e-9);
        assert_eq!(
            back.base_stations[0].path_loss_exponent,
            MACRO_PATH_LOSS_EXPONENT
        );
        assert_eq!(
            back.base_stations[1].path_loss_exponent,
            PICO_PATH_LOSS_EXPONENT
        );
        assert_eq!(back.seed, 7);
    }

    #[test]
    fn validate_rejects_double_macro() {
        let mut s = tiny_scenario();
        s.base_stations[1].kind = BsKind::Macro;
        assert!(s.validate().is_err());
    }

    #[test]
    fn validate_rejects_load_above_antennas() {
        let mut s = tiny_scenario();
        s.base_stations[1].load_capacity = 5;
        assert!(s.validate().is_err());
    }

    #[test]
    fn validate_rejects_out_of_area_user() {
        let mut s = tiny_scenario();
        s.users[0].position = Point::new(2000.0, 0.0);
        assert!(s.validate().is_err());
    }

    #[test]
    fn validate_rejects_nonpositive_weight() {
        let mut s = tiny_scenario();
        s.users[0].weight = 0.0;
        assert!(s.validate().is_err());
    }
}
