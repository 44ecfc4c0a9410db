use thiserror::Error;

/// Errors raised by the closed forms, the SUSY engine and the numeric oracles.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("time t = {t} is at (or within the guard band of) the singular time {singular}")]
    SingularTime { t: f64, singular: f64 },
    #[error("time t = {t} lies on the wrong side of the singular time for the configured branch")]
    InadmissibleTime { t: f64 },
    #[error("quantum number {n} is below the minimum {min}")]
    InvalidQuantumNumber { n: u32, min: u32 },
    #[error("point x = {x} lies outside the well [{lo}, {hi}]")]
    OutsideWell { x: f64, lo: f64, hi: f64 },
    #[error("state index {n} coincides with the seed index of the confluent transformation")]
    SeedCollision { n: u32 },
    #[error("confluent denominator vanishes inside the well for omega = {omega}")]
    RegularityViolation { omega: f64 },
    #[error("reality condition violated: Im d2/dx2 ln u spreads by {spread:e} across probes")]
    RealityViolation { spread: f64 },
    #[error("transformation function nearly vanishes at x = {x} (|u| = {modulus:e})")]
    NearNode { x: f64, modulus: f64 },
    #[error("wavefunction diverges at the wall x = {x}")]
    DivergentWallLimit { x: f64 },
    #[error("stencil around (x = {x}, t = {t}) leaves the admissible domain")]
    StencilOutOfDomain { x: f64, t: f64 },
    #[error("residuals do not decrease under refinement (step {step:e}: {previous:e} -> {current:e})")]
    NonMonotoneResiduals { step: f64, previous: f64, current: f64 },
    #[error("propagation became unstable at t = {t}: max amplitude {amplitude:e}")]
    UnstableRun { t: f64, amplitude: f64 },
    #[error("sampled fields live on different grids")]
    GridMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
