//! Shared domain types.
//!
//! Units throughout are ħ = 1 and particle mass 1/2, so the Schrödinger
//! operator reads `i ∂t + ∂xx − V`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex value of a wavefunction at a space-time point.
pub type Amplitude = Complex64;

/// Times closer than this to the singular time are rejected.
pub const SINGULAR_GUARD: f64 = 1e-9;

/// Which side of the singular time `t0 = −c1/4` the well lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Expanding,
    Contracting,
}

/// Static box length and point-transform constants defining the moving geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig {
    length: f64,
    c1: f64,
    c2: f64,
    branch: Branch,
}

impl Default for WellConfig {
    fn default() -> Self {
        Self { length: 1.0, c1: 1.0, c2: 0.0, branch: Branch::Expanding }
    }
}

impl WellConfig {
    pub fn new(length: f64, c1: f64, c2: f64, branch: Branch) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidConfig("box length must be positive and finite"));
        }
        if !(c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidConfig("gauge constants must be finite"));
        }
        Ok(Self { length, c1, c2, branch })
    }

    /// Default gauge (c1 = 1, c2 = 0, expanding) with the given box length.
    pub fn with_length(length: f64) -> Result<Self> {
        Self::new(length, 1.0, 0.0, Branch::Expanding)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// True for c1 = 1, c2 = 0 on the expanding branch, the gauge in which
    /// the SUSY families are available.
    pub fn is_default_gauge(&self) -> bool {
        self.c1 == 1.0 && self.c2 == 0.0 && self.branch == Branch::Expanding
    }

    pub fn singular_time(&self) -> f64 {
        -self.c1 / 4.0
    }

    /// Checks that `t` is admissible and returns the scale factor `4t + c1`.
    pub fn scale(&self, t: f64) -> Result<f64> {
        let singular = self.singular_time();
        if !t.is_finite() || (t - singular).abs() <= SINGULAR_GUARD {
            return Err(Error::SingularTime { t, singular });
        }
        let expanding = t > singular;
        match (self.branch, expanding) {
            (Branch::Expanding, true) | (Branch::Contracting, false) => Ok(4.0 * t + self.c1),
            _ => Err(Error::InadmissibleTime { t }),
        }
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        self.scale(t).map(|_| ())
    }

    /// Position of the moving wall, `ℓ(t) = 4Lt + c1 L + c2/2`.
    pub fn wall_position(&self, t: f64) -> Result<f64> {
        let s = self.scale(t)?;
        Ok(self.length * s + self.c2 / 2.0)
    }

    /// Position of the fixed wall, `c2/2`.
    pub fn fixed_wall_position(&self) -> f64 {
        self.c2 / 2.0
    }

    /// Constant velocity of the moving wall.
    pub fn wall_velocity(&self) -> f64 {
        4.0 * self.length
    }

    /// Ordered well interval `(lo, hi)` at time `t`.
    pub fn interval(&self, t: f64) -> Result<(f64, f64)> {
        let moving = self.wall_position(t)?;
        let fixed = self.fixed_wall_position();
        Ok(if moving > fixed { (fixed, moving) } else { (moving, fixed) })
    }

    /// Width of the well, `L |4t + c1|`.
    pub fn width(&self, t: f64) -> Result<f64> {
        Ok(self.length * self.scale(t)?.abs())
    }
}

/// Seed index and deformation parameter of the confluent family.
///
/// Any finite `omega` can be stored; values in (−1, 0) are rejected later by
/// the regularity gate of the functions that need a nonvanishing denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfluentConfig {
    m: u32,
    omega: f64,
}

impl ConfluentConfig {
    pub fn new(m: u32, omega: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidQuantumNumber { n: m, min: 1 });
        }
        if !omega.is_finite() {
            return Err(Error::InvalidConfig("omega must be finite"));
        }
        Ok(Self { m, omega })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Lower limit of the confluent integral; always zero.
    pub fn x0(&self) -> f64 {
        0.0
    }

    /// `omega ≤ −1` or `omega ≥ 0`: the confluent denominator has no root inside the well.
    pub fn is_regular(&self) -> bool {
        self.omega <= -1.0 || self.omega >= 0.0
    }

    pub fn ensure_regular(&self) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(Error::RegularityViolation { omega: self.omega })
        }
    }

    /// The confluent missing state is square integrable iff omega ∉ {−1, 0}.
    pub fn missing_state_normalizable(&self) -> bool {
        self.omega != -1.0 && self.omega != 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint {
    pub x: f64,
    pub t: f64,
}

impl SpaceTimePoint {
    pub fn new(x: f64, t: f64, well: &WellConfig) -> Result<Self> {
        well.check_time(t)?;
        Ok(Self { x, t })
    }
}

/// A finite real, or the infinite wall value outside the open well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinite)
    }
}

/// Values sampled on a uniform grid at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T = Amplitude> {
    pub t: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub values: Vec<T>,
}

impl<T> SampledField<T> {
    pub fn new(t: f64, x_min: f64, x_max: f64, values: Vec<T>) -> Result<Self> {
        if !(x_min < x_max) {
            return Err(Error::InvalidConfig("sampled field needs x_min < x_max"));
        }
        if values.len() < 2 {
            return Err(Error::InvalidConfig("sampled field needs at least two points"));
        }
        Ok(Self { t, x_min, x_max, values })
    }

    /// Samples `f` at `n_points` uniform points on `[x_min, x_max]`.
    pub fn sample<F>(t: f64, x_min: f64, x_max: f64, n_points: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<T>,
    {
        if n_points < 2 {
            return Err(Error::InvalidConfig("sampled field needs at least two points"));
        }
        let h = (x_max - x_min) / (n_points - 1) as f64;
        let values = (0..n_points)
            .map(|i| {
                // pin the last node to x_max exactly
                let x = if i + 1 == n_points { x_max } else { x_min + h * i as f64 };
                f(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(t, x_min, x_max, values)
    }

    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.values.len() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.values.len() {
            self.x_max
        } else {
            self.x_min + self.spacing() * i as f64
        }
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.x(i))
    }

    pub fn same_grid<U>(&self, other: &SampledField<U>) -> bool {
        self.t == other.t
            && self.x_min == other.x_min
            && self.x_max == other.x_max
            && self.values.len() == other.values.len()
    }
}

/// A wavefunction `ψ(x, t)`.
pub trait Wave {
    fn amplitude(&self, x: f64, t: f64) -> Result<Amplitude>;
}

impl<F> Wave for F
where
    F: Fn(f64, f64) -> Result<Amplitude>,
{
    fn amplitude(&self, x: f64, t: f64) -> Result<Amplitude> {
        self(x, t)
    }
}

/// A potential `V(x, t)`.
pub trait Potential {
    fn potential(&self, x: f64, t: f64) -> Result<ExtendedReal>;

    /// Finite value, treating the infinite wall value as leaving the domain.
    fn finite_potential(&self, x: f64, t: f64) -> Result<f64> {
        self.potential(x, t)?
            .finite()
            .ok_or(Error::StencilOutOfDomain { x, t })
    }
}

impl<F> Potential for F
where
    F: Fn(f64, f64) -> Result<ExtendedReal>,
{
    fn potential(&self, x: f64, t: f64) -> Result<ExtendedReal> {
        self(x, t)
    }
}
