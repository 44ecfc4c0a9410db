//! Family/state selection and grid sampling.

use moving_wells::families::{FamilyId, FamilyState, StateId};
use moving_wells::verify;
use moving_wells::{ConfluentConfig, Error, ExtendedReal, Potential, SampledField, Wave, WellConfig};

use crate::args::{FamilyArg, WellArgs};
use crate::error::{CliError, CliResult};
use crate::formats::{PotentialCell, SampleRecord};

pub fn family_id(family: FamilyArg, well: &WellArgs) -> CliResult<FamilyId> {
    Ok(match family {
        FamilyArg::Box => FamilyId::MovingBox,
        FamilyArg::Pt => FamilyId::MovingPoschlTeller,
        FamilyArg::Confluent => {
            let cc = ConfluentConfig::new(well.m, well.omega).map_err(usage)?;
            FamilyId::MovingConfluent(cc)
        }
    })
}

pub fn well_config(well: &WellArgs) -> CliResult<WellConfig> {
    WellConfig::with_length(well.length).map_err(usage)
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn parse_state(token: &str) -> CliResult<StateId> {
    match token.trim() {
        "eps" | "epsilon" => Ok(StateId::Missing),
        s => s
            .parse::<u32>()
            .map(StateId::Indexed)
            .map_err(|_| CliError::usage(format!("bad state selector {s:?}; expected an index or `eps`"))),
    }
}

/// Validated states, ready to sample.
pub fn select(family: FamilyId, tokens: &[String], well: WellConfig) -> CliResult<Vec<FamilyState>> {
    if let FamilyId::MovingConfluent(cc) = family {
        cc.ensure_regular().map_err(usage)?;
    }
    tokens
        .iter()
        .map(|tok| {
            let state = parse_state(tok)?;
            let fs = FamilyState::new(family, state, well).map_err(usage)?;
            if let (FamilyId::MovingConfluent(cc), StateId::Missing) = (family, state) {
                if !cc.missing_state_normalizable() {
                    return Err(CliError::usage(format!(
                        "the missing state is not square integrable for omega = {}",
                        cc.omega()
                    )));
                }
            }
            Ok(fs)
        })
        .collect()
}

/// `1/√‖ψ‖²` at time `t`, or 1 for states that are normalized as given.
pub fn normalization(state: &FamilyState, t: f64) -> CliResult<f64> {
    if state.is_unit_normalized() {
        return Ok(1.0);
    }
    Ok(verify::norm(state, t, &state.well)?.sqrt().recip())
}

/// Normalized state sampled on `points` grid points spanning the well.
pub fn sample_state(state: &FamilyState, t: f64, points: usize) -> CliResult<SampledField> {
    let (lo, hi) = state.well.interval(t)?;
    let scale = normalization(state, t)?;
    Ok(SampledField::sample(t, lo, hi, points, |x| Ok(state.amplitude(x, t)? * scale))?)
}

pub fn sample_records(states: &[FamilyState], times: &[f64], points: usize) -> CliResult<Vec<SampleRecord>> {
    if points < 2 {
        return Err(CliError::usage("need at least two grid points"));
    }
    let mut out = Vec::with_capacity(states.len() * times.len() * points);
    for &t in times {
        for state in states {
            let field = sample_state(state, t, points).map_err(|e| match e {
                CliError::Numeric(err @ (Error::SingularTime { .. } | Error::InadmissibleTime { .. })) => {
                    CliError::Usage(err.to_string())
                }
                other => other,
            })?;
            let potential = state.potential();
            let label = state.label();
            for (x, v) in field.xs().zip(&field.values) {
                let cell = match potential.potential(x, t)? {
                    ExtendedReal::Finite(p) => PotentialCell::Value(p),
                    ExtendedReal::Infinite => PotentialCell::Wall,
                };
                out.push(SampleRecord {
                    t,
                    state: label.clone(),
                    x,
                    re: v.re,
                    im: v.im,
                    density: v.norm_sqr(),
                    potential: cell,
                });
            }
        }
    }
    Ok(out)
}
