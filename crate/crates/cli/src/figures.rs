//! Datasets of the five reference figures: densities at t = 1/4, 1/2, 3/4, 1
//! for L = 1.

use moving_wells::families::FamilyId;
use moving_wells::{ConfluentConfig, WellConfig};

use crate::error::CliResult;
use crate::formats::SampleRecord;
use crate::sample::{sample_records, select};

pub const FIGURE_TIMES: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub number: u32,
    pub family: FamilyId,
    pub states: Vec<String>,
}

impl FigureSpec {
    pub fn file_name(&self) -> String {
        format!("fig{}.csv", self.number)
    }

    pub fn parameters(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "figure": self.number,
            "family": self.family.name(),
            "states": self.states,
            "L": 1.0,
            "times": FIGURE_TIMES,
        });
        if let FamilyId::MovingConfluent(cc) = self.family {
            v["m"] = cc.m().into();
            v["omega"] = cc.omega().into();
        }
        v
    }
}

fn confluent(omega: f64) -> FamilyId {
    FamilyId::MovingConfluent(ConfluentConfig::new(2, omega).expect("figure parameters are valid"))
}

pub fn figure_specs() -> Vec<FigureSpec> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        FigureSpec { number: 1, family: FamilyId::MovingBox, states: s(&["1", "2", "3"]) },
        FigureSpec { number: 2, family: FamilyId::MovingPoschlTeller, states: s(&["2", "3", "4"]) },
        FigureSpec { number: 3, family: confluent(0.4), states: s(&["1", "eps", "3"]) },
        FigureSpec { number: 4, family: confluent(-1.0), states: s(&["1", "3", "4"]) },
        FigureSpec { number: 5, family: confluent(0.0), states: s(&["1", "3", "4"]) },
    ]
}

pub fn figure_records(spec: &FigureSpec, points: usize) -> CliResult<Vec<SampleRecord>> {
    let states = select(spec.family, &spec.states, WellConfig::default())?;
    sample_records(&states, &FIGURE_TIMES, points)
}
