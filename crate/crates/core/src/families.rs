//! Closed-form potentials and solutions of the three moving-barrier systems in
//! the default gauge (c1 = 1, c2 = 0, wall at `ℓ(t) = L(4t + 1)`):
//!
//! * the square well `V0` with solutions `φn`,
//! * its 1-SUSY partner, the trigonometric Pöschl–Teller well `V1`, with `χn = L1 φn`,
//! * the confluent partners `V2` with `ξn = L2 L1 φn` and the missing state `ξε`.
//!
//! All products of the form `cot(kθ)·sin(nθ)` are cancelled before evaluation,
//! so the wall values are exact zeros instead of `0·∞`. Solutions other than
//! `φn` are returned unnormalized.
//!
//! The `ξn` numerator uses `4mn cot(nθ) sin²(mθ)` for the last term; this is
//! the coefficient obtained from applying both intertwiners to `φn` and is
//! cross-checked against the numeric composition `L2 L1 φn`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{Amplitude, ConfluentConfig, ExtendedReal, Potential, Wave, WellConfig};

/// Position inside the well in units of the current width.
#[derive(Debug, Clone, Copy)]
struct Frame {
    ell: f64,
    length: f64,
    /// `πx/ℓ`
    theta: f64,
    at_left_wall: bool,
    at_right_wall: bool,
}

impl Frame {
    fn new(x: f64, t: f64, well: &WellConfig) -> Result<Self> {
        if !well.is_default_gauge() {
            return Err(Error::InvalidConfig("SUSY families require c1 = 1, c2 = 0 on the expanding branch"));
        }
        let ell = well.wall_position(t)?;
        if !(0.0..=ell).contains(&x) {
            return Err(Error::OutsideWell { x, lo: 0.0, hi: ell });
        }
        Ok(Self {
            ell,
            length: well.length(),
            theta: PI * x / ell,
            at_left_wall: x == 0.0,
            at_right_wall: x == ell,
        })
    }

    fn at_wall(&self) -> bool {
        self.at_left_wall || self.at_right_wall
    }

    fn x(&self) -> f64 {
        self.theta * self.ell / PI
    }

    /// `exp{i (L/ℓ)[x² + (nπ/(2L))²]}`, with the x-independent factor
    /// rounded separately so the rounding error does not vary with `x`.
    fn phase(&self, n: u32) -> Complex64 {
        let x = self.x();
        let k = n as f64 * PI / (2.0 * self.length);
        let scale = self.length / self.ell;
        Complex64::from_polar(1.0, scale * x * x) * Complex64::from_polar(1.0, scale * k * k)
    }

    fn amplitude(&self) -> f64 {
        (2.0 / self.ell).sqrt()
    }
}

fn check_n(n: u32, min: u32) -> Result<()> {
    if n < min {
        Err(Error::InvalidQuantumNumber { n, min })
    } else {
        Ok(())
    }
}

/// Chebyshev `U_{n−1}(cos θ) = sin(nθ)/sin θ`, regular at the walls.
fn sin_ratio(n: u32, c: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 1..n {
        let next = 2.0 * c * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `z − sin z` without cancellation for small `z`.
pub(crate) fn z_minus_sin(z: f64) -> f64 {
    if z.abs() < 0.5 {
        let z2 = z * z;
        let mut term = z * z2 / 6.0;
        let mut acc = term;
        for k in 2..10 {
            let k = k as f64;
            term *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));
            acc += term;
        }
        acc
    } else {
        z - z.sin()
    }
}

/// `sin a − a cos a` without cancellation for small `a`.
fn sin_minus_a_cos(a: f64) -> f64 {
    if a.abs() < 0.5 {
        let a2 = a * a;
        // Σ (−1)^{k+1} 2k a^{2k+1} / (2k+1)!
        let mut power_over_fact = a * a2 / 6.0;
        let mut acc = 2.0 * power_over_fact;
        for k in 2..10 {
            let kf = k as f64;
            power_over_fact *= -a2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            acc += 2.0 * kf * power_over_fact;
        }
        acc
    } else {
        a.sin() - a * a.cos()
    }
}

/// Confluent denominator `2m(θ + πω) − sin(2mθ)`, i.e. `2mπ(ω + ∫0^x |φm|²)`.
///
/// Evaluated relative to the nearer wall so the degenerate zeros at
/// ω = 0 (left wall) and ω = −1 (right wall) keep full relative accuracy.
fn confluent_denominator(theta: f64, m: u32, omega: f64) -> f64 {
    let m = m as f64;
    if theta <= PI / 2.0 {
        2.0 * m * PI * omega + z_minus_sin(2.0 * m * theta)
    } else {
        2.0 * m * PI * (1.0 + omega) - z_minus_sin(2.0 * m * (PI - theta))
    }
}

/// `ω + ∫0^x |φm(s,t)|² ds` in closed form.
pub fn confluent_weight(x: f64, t: f64, well: &WellConfig, cc: &ConfluentConfig) -> Result<f64> {
    let f = Frame::new(x, t, well)?;
    Ok(confluent_denominator(f.theta, cc.m(), cc.omega()) / (2.0 * cc.m() as f64 * PI))
}

/// Square well with a moving barrier, for any gauge constants.
pub fn potential_v0(x: f64, t: f64, well: &WellConfig) -> Result<ExtendedReal> {
    let (lo, hi) = well.interval(t)?;
    Ok(if lo < x && x < hi { ExtendedReal::Finite(0.0) } else { ExtendedReal::Infinite })
}

/// `φn(x,t) = √(2/ℓ) sin(nπx/ℓ) exp{i(L/ℓ)[x² + (nπ/(2L))²]}`.
pub fn phi_n(n: u32, x: f64, t: f64, well: &WellConfig) -> Result<Amplitude> {
    check_n(n, 1)?;
    let f = Frame::new(x, t, well)?;
    if f.at_wall() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(f.phase(n) * (f.amplitude() * (n as f64 * f.theta).sin()))
}

/// Trigonometric Pöschl–Teller well `2(π/ℓ)² csc²(πx/ℓ)` with a moving wall.
pub fn potential_v1(x: f64, t: f64, well: &WellConfig) -> Result<ExtendedReal> {
    let ell = well.wall_position(t)?;
    if !well.is_default_gauge() {
        return Err(Error::InvalidConfig("SUSY families require c1 = 1, c2 = 0 on the expanding branch"));
    }
    if !(0.0 < x && x < ell) {
        return Ok(ExtendedReal::Infinite);
    }
    let s = (PI * x / ell).sin();
    Ok(ExtendedReal::Finite(2.0 * (PI / ell).powi(2) / (s * s)))
}

/// `χn = L1 φn` for `n ≥ 2`.
pub fn chi_n(n: u32, x: f64, t: f64, well: &WellConfig) -> Result<Amplitude> {
    chi_n_with_weight(n, x, t, well, 1.0)
}

/// `χn` with the bracket `cot θ sin nθ − w·n cos nθ`; `w = 1` is the true
/// solution, any other weight is a deliberately broken state for negative
/// controls.
pub fn chi_n_with_weight(n: u32, x: f64, t: f64, well: &WellConfig, weight: f64) -> Result<Amplitude> {
    check_n(n, 2)?;
    let f = Frame::new(x, t, well)?;
    let nf = n as f64;
    if f.at_wall() && weight == 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = f.theta.cos();
    let bracket = c * sin_ratio(n, c) - weight * nf * (nf * f.theta).cos();
    Ok(f.phase(n) * (PI / f.length * f.amplitude() * bracket))
}

/// Confluent SUSY partner of the moving square well.
pub fn potential_v2(x: f64, t: f64, well: &WellConfig, cc: &ConfluentConfig) -> Result<ExtendedReal> {
    cc.ensure_regular()?;
    let ell = well.wall_position(t)?;
    if !(0.0 < x && x < ell) {
        // still validates the gauge
        Frame::new(x.clamp(0.0, ell), t, well)?;
        return Ok(ExtendedReal::Infinite);
    }
    let f = Frame::new(x, t, well)?;
    let (m, omega, theta) = (cc.m(), cc.omega(), f.theta);
    let mf = m as f64;
    let s = (mf * theta).sin();
    let numerator = if omega == 0.0 && theta <= PI / 2.0 {
        sin_minus_a_cos(mf * theta)
    } else if omega == -1.0 && theta > PI / 2.0 {
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        sign * sin_minus_a_cos(mf * (PI - theta))
    } else {
        s - mf * (mf * theta).cos() * (theta + PI * omega)
    };
    let d = confluent_denominator(theta, m, omega);
    Ok(ExtendedReal::Finite(32.0 * (mf * PI / f.ell).powi(2) * s * numerator / (d * d)))
}

/// `ξn = L2 L1 φn` for `n ≠ m`.
pub fn xi_n(n: u32, x: f64, t: f64, well: &WellConfig, cc: &ConfluentConfig) -> Result<Amplitude> {
    check_n(n, 1)?;
    if n == cc.m() {
        return Err(Error::SeedCollision { n });
    }
    cc.ensure_regular()?;
    let f = Frame::new(x, t, well)?;
    if f.at_wall() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (m, nf, theta, omega) = (cc.m() as f64, n as f64, f.theta, cc.omega());
    let sm = (m * theta).sin();
    let numerator = (nf * theta).sin()
        * ((m * m + nf * nf) * (2.0 * m * theta).sin() + 2.0 * m * (m * m - nf * nf) * (theta + PI * omega))
        - 4.0 * m * nf * (nf * theta).cos() * sm * sm;
    let d = confluent_denominator(theta, cc.m(), omega);
    Ok(f.phase(n) * ((PI / f.length).powi(2) * f.amplitude() * numerator / d))
}

/// Which walls the confluent missing state vanishes at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallLimit {
    Zero,
    Divergent,
}

/// Wall limits `(x → 0, x → ℓ)` of `ξε`.
pub fn missing_state_wall_limits(cc: &ConfluentConfig) -> (WallLimit, WallLimit) {
    let left = if cc.omega() == 0.0 { WallLimit::Divergent } else { WallLimit::Zero };
    let right = if cc.omega() == -1.0 { WallLimit::Divergent } else { WallLimit::Zero };
    (left, right)
}

/// Confluent missing state `ξε = φm / (ω + ∫0^x |φm|²)`.
pub fn xi_missing(x: f64, t: f64, well: &WellConfig, cc: &ConfluentConfig) -> Result<Amplitude> {
    cc.ensure_regular()?;
    let f = Frame::new(x, t, well)?;
    let (left, right) = missing_state_wall_limits(cc);
    if f.at_left_wall || f.at_right_wall {
        let limit = if f.at_left_wall { left } else { right };
        return match limit {
            WallLimit::Zero => Ok(Complex64::new(0.0, 0.0)),
            WallLimit::Divergent => Err(Error::DivergentWallLimit { x }),
        };
    }
    let m = cc.m() as f64;
    let d = confluent_denominator(f.theta, cc.m(), cc.omega());
    Ok(f.phase(cc.m()) * (f.amplitude() * (m * f.theta).sin() * 2.0 * m * PI / d))
}

/// Instantaneous box level `(nπ/ℓ)²`.
///
/// This is the kinetic energy of the modulus of `φn` only. The full
/// expectation `∫φn*(−∂xx φn)dx` also contains the contribution of the
/// quadratic phase, see [`energy_expectation_phi_with_phase`].
pub fn energy_expectation_phi(n: u32, t: f64, well: &WellConfig) -> Result<f64> {
    check_n(n, 1)?;
    let ell = well.wall_position(t)?;
    Ok((n as f64 * PI / ell).powi(2))
}

/// `∫0^ℓ φn*(−∂xx φn) dx = (nπ/ℓ)² + 4L²(1/3 − 1/(2n²π²))`.
///
/// The second term is `∫(2Lx/ℓ)²|φn|²dx`, the kinetic energy carried by the
/// phase gradient of the expanding wall; it does not decay in time.
pub fn energy_expectation_phi_with_phase(n: u32, t: f64, well: &WellConfig) -> Result<f64> {
    let level = energy_expectation_phi(n, t, well)?;
    let nf = n as f64;
    let l = well.length();
    Ok(level + 4.0 * l * l * (1.0 / 3.0 - 1.0 / (2.0 * nf * nf * PI * PI)))
}

/// The three moving-barrier systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyId {
    MovingBox,
    MovingPoschlTeller,
    MovingConfluent(ConfluentConfig),
}

impl FamilyId {
    pub fn potential(&self, x: f64, t: f64, well: &WellConfig) -> Result<ExtendedReal> {
        match self {
            FamilyId::MovingBox => potential_v0(x, t, well),
            FamilyId::MovingPoschlTeller => potential_v1(x, t, well),
            FamilyId::MovingConfluent(cc) => potential_v2(x, t, well, cc),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::MovingBox => "box",
            FamilyId::MovingPoschlTeller => "pt",
            FamilyId::MovingConfluent(_) => "confluent",
        }
    }

    pub fn bind(self, well: WellConfig) -> FamilyPotential {
        FamilyPotential { family: self, well }
    }
}

/// A family potential bound to a well configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPotential {
    pub family: FamilyId,
    pub well: WellConfig,
}

impl Potential for FamilyPotential {
    fn potential(&self, x: f64, t: f64) -> Result<ExtendedReal> {
        self.family.potential(x, t, &self.well)
    }
}

/// Selects one solution within a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateId {
    Indexed(u32),
    Missing,
}

impl core::fmt::Display for StateId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StateId::Indexed(n) => write!(f, "{n}"),
            StateId::Missing => f.write_str("eps"),
        }
    }
}

/// A closed-form solution of one family, bound to a well configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyState {
    pub family: FamilyId,
    pub state: StateId,
    pub well: WellConfig,
}

impl FamilyState {
    /// Validates the family/state combination.
    pub fn new(family: FamilyId, state: StateId, well: WellConfig) -> Result<Self> {
        match (family, state) {
            (FamilyId::MovingBox, StateId::Indexed(n)) => check_n(n, 1)?,
            (FamilyId::MovingPoschlTeller, StateId::Indexed(n)) => check_n(n, 2)?,
            (FamilyId::MovingConfluent(cc), StateId::Indexed(n)) => {
                check_n(n, 1)?;
                if n == cc.m() {
                    return Err(Error::SeedCollision { n });
                }
            }
            (FamilyId::MovingConfluent(_), StateId::Missing) => {}
            (_, StateId::Missing) => {
                return Err(Error::InvalidConfig("only the confluent family has a square-integrable missing state"))
            }
        }
        Ok(Self { family, state, well })
    }

    pub fn potential(&self) -> FamilyPotential {
        self.family.bind(self.well)
    }

    /// Conventional symbol, e.g. `phi1`, `chi3`, `xi4`, `xi_eps`.
    pub fn label(&self) -> alloc::string::String {
        use alloc::format;
        let stem = match self.family {
            FamilyId::MovingBox => "phi",
            FamilyId::MovingPoschlTeller => "chi",
            FamilyId::MovingConfluent(_) => "xi",
        };
        match self.state {
            StateId::Indexed(n) => format!("{stem}{n}"),
            StateId::Missing => format!("{stem}_eps"),
        }
    }

    /// Whether the state is unit-normalized as returned.
    pub fn is_unit_normalized(&self) -> bool {
        matches!(self.family, FamilyId::MovingBox)
    }
}

impl Wave for FamilyState {
    fn amplitude(&self, x: f64, t: f64) -> Result<Amplitude> {
        let w = &self.well;
        match (self.family, self.state) {
            (FamilyId::MovingBox, StateId::Indexed(n)) => {
                if w.is_default_gauge() {
                    phi_n(n, x, t, w)
                } else {
                    crate::point_transform::lift_wavefunction(n, x, t, w)
                }
            }
            (FamilyId::MovingPoschlTeller, StateId::Indexed(n)) => chi_n(n, x, t, w),
            (FamilyId::MovingConfluent(cc), StateId::Indexed(n)) => xi_n(n, x, t, w, &cc),
            (FamilyId::MovingConfluent(cc), StateId::Missing) => xi_missing(x, t, w, &cc),
            (_, StateId::Missing) => Err(Error::InvalidConfig("no missing state for this family")),
        }
    }
}
