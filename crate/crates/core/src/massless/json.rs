//! `{grid: {omega_min, ratio, count, theta, phi, helicity}, psi_fwd: [[re, im], …], psi_bwd: …}`

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DoubletState, FrequencyGrid, RepError};
use crate::lorentz::Direction;

#[derive(Serialize, Deserialize)]
struct GridDoc {
    omega_min: f64,
    ratio: f64,
    count: usize,
    theta: f64,
    phi: f64,
    helicity: i32,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    grid: GridDoc,
    psi_fwd: Vec<[f64; 2]>,
    psi_bwd: Vec<[f64; 2]>,
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn complexes(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl StateDoc {
    fn from_state(s: &DoubletState) -> Self {
        let g = s.grid();
        StateDoc {
            grid: GridDoc {
                omega_min: g.omega_min(),
                ratio: g.ratio(),
                count: g.len(),
                theta: g.direction().theta,
                phi: g.direction().phi,
                helicity: g.helicity(),
            },
            psi_fwd: pairs(s.forward()),
            psi_bwd: pairs(s.backward()),
        }
    }

    fn into_state(self) -> Result<DoubletState, RepError> {
        let g = &self.grid;
        let grid = FrequencyGrid::new(g.omega_min, g.ratio, g.count, Direction::new(g.theta, g.phi), g.helicity)?;
        DoubletState::new(grid, complexes(&self.psi_fwd), complexes(&self.psi_bwd))
    }
}

impl Serialize for DoubletState {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateDoc::from_state(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DoubletState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        StateDoc::deserialize(deserializer)?.into_state().map_err(serde::de::Error::custom)
    }
}

impl DoubletState {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state document is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, RepError> {
        serde_json::from_str(text).map_err(|e| RepError::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn document_layout() {
        let g = FrequencyGrid::new(1.0, 2.0, 1, Direction::Z, 1).unwrap();
        let s = DoubletState::new(g, vec![Complex64::new(0.5, -0.5)], vec![Complex64::new(0.0, 1.0)]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["grid"]["count"], 1);
        assert_eq!(v["grid"]["helicity"], 1);
        assert_eq!(v["psi_fwd"], serde_json::json!([[0.5, -0.5]]));
        assert_eq!(v["psi_bwd"], serde_json::json!([[0.0, 1.0]]));
    }

    #[test]
    fn count_mismatch_rejected() {
        let text = r#"{"grid":{"omega_min":1,"ratio":2,"count":2,"theta":0,"phi":0,"helicity":1},
                       "psi_fwd":[[1,0]],"psi_bwd":[[0,0],[0,0]]}"#;
        assert!(matches!(DoubletState::from_json(text), Err(RepError::Json(_))));
    }

    proptest! {
        #[test]
        fn json_round_trip(amps in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..12),
                           ratio in 1.01f64..4.0, theta in 0.0f64..3.1, helicity in -2i32..3) {
            let n = amps.len();
            let g = FrequencyGrid::new(0.3, ratio, n, Direction::new(theta, 0.4), helicity).unwrap();
            let fwd: Vec<_> = amps.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let bwd: Vec<_> = amps.iter().rev().map(|&(a, b)| Complex64::new(b, a)).collect();
            let s = DoubletState::new(g, fwd, bwd).unwrap();
            prop_assert_eq!(DoubletState::from_json(&s.to_json()).unwrap(), s);
        }
    }
}
