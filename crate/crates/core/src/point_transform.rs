//! Point transformation taking the static box to the square well with a
//! moving barrier.
//!
//! The gauge functions are the closed-form solutions
//! `A(t) = −1/(4t + c1)`, `B(t) = c2/(4t + c1)` of the zero-potential
//! conditions `A' − 4A² = 0`, `B' − 4AB = 0`. Every indefinite time integral
//! that enters the transformation is replaced by an explicit antiderivative
//! with its constant fixed to zero, which reproduces the closed-form moving
//! solutions exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::static_box::{energy_static, psi_static};
use crate::types::{Amplitude, WellConfig, SINGULAR_GUARD};

/// Finite-difference step for the gauge ODE checks.
pub const GAUGE_FD_STEP: f64 = 1e-5;

/// The solved gauge pair `(A, B)` for constants `(c1, c2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugePair {
    pub c1: f64,
    pub c2: f64,
}

impl GaugePair {
    pub fn new(c1: f64, c2: f64) -> Self {
        Self { c1, c2 }
    }

    pub fn from_well(well: &WellConfig) -> Self {
        Self::new(well.c1(), well.c2())
    }

    fn scale(&self, t: f64) -> Result<f64> {
        let s = 4.0 * t + self.c1;
        if !s.is_finite() || s.abs() <= 4.0 * SINGULAR_GUARD {
            return Err(Error::SingularTime { t, singular: -self.c1 / 4.0 });
        }
        Ok(s)
    }

    pub fn a(&self, t: f64) -> Result<f64> {
        Ok(-1.0 / self.scale(t)?)
    }

    pub fn b(&self, t: f64) -> Result<f64> {
        Ok(self.c2 / self.scale(t)?)
    }

    /// `exp(4∫A dt)`, continued analytically through the sign of `4t + c1`.
    pub fn stretch(&self, t: f64) -> Result<f64> {
        Ok(1.0 / self.scale(t)?)
    }

    /// `2∫B exp(4∫A) dt = −c2 / (2(4t + c1))`.
    pub fn shift(&self, t: f64) -> Result<f64> {
        Ok(-self.c2 / (2.0 * self.scale(t)?))
    }

    /// `∫exp(8∫A) dt = −1 / (4(4t + c1))`.
    pub fn energy_clock(&self, t: f64) -> Result<f64> {
        Ok(-1.0 / (4.0 * self.scale(t)?))
    }

    /// `∫B² dt = −c2² / (4(4t + c1))`.
    pub fn shift_clock(&self, t: f64) -> Result<f64> {
        Ok(-self.c2 * self.c2 / (4.0 * self.scale(t)?))
    }

    /// Modulus of `exp(−i∫2iA dt)`, i.e. `|4t + c1|^{−1/2}`.
    pub fn amplitude_factor(&self, t: f64) -> Result<f64> {
        Ok(self.scale(t)?.abs().sqrt().recip())
    }

    /// Central-difference residuals `(|A' − 4A²|, |B' − 4AB|)` at `t`.
    pub fn ode_residuals(&self, t: f64, h: f64) -> Result<(f64, f64)> {
        let da = (self.a(t + h)? - self.a(t - h)?) / (2.0 * h);
        let db = (self.b(t + h)? - self.b(t - h)?) / (2.0 * h);
        let (a, b) = (self.a(t)?, self.b(t)?);
        Ok(((da - 4.0 * a * a).abs(), (db - 4.0 * a * b).abs()))
    }
}

pub fn gauge_a(t: f64, c1: f64) -> Result<f64> {
    GaugePair::new(c1, 0.0).a(t)
}

pub fn gauge_b(t: f64, c1: f64, c2: f64) -> Result<f64> {
    GaugePair::new(c1, c2).b(t)
}

/// Static coordinate `y = (2x − c2) / (2(4t + c1))`.
pub fn map_to_static(x: f64, t: f64, well: &WellConfig) -> Result<f64> {
    well.check_time(t)?;
    let g = GaugePair::from_well(well);
    Ok(x * g.stretch(t)? + g.shift(t)?)
}

/// Lifts the static eigenfunction `ψ_n` to a solution of the moving-wall
/// problem for arbitrary gauge constants.
pub fn lift_wavefunction(n: u32, x: f64, t: f64, well: &WellConfig) -> Result<Amplitude> {
    well.check_time(t)?;
    let g = GaugePair::from_well(well);
    let y = map_to_static(x, t, well)?;
    let psi = psi_static(n, y, well.length())?;
    let energy = energy_static(n, well.length())?;
    let phase = g.a(t)? * x * x + g.b(t)? * x + energy * g.energy_clock(t)? + g.shift_clock(t)?;
    Ok(Complex64::from_polar(psi * g.amplitude_factor(t)?, -phase))
}

/// Magnitude of the induced potential `(A' − 4A²)x² + (B' − 4AB)x` with
/// finite-difference gauge derivatives; vanishes for the solved pair.
pub fn transformed_potential_residual(x: f64, t: f64, well: &WellConfig) -> Result<f64> {
    well.check_time(t)?;
    let (ra, rb) = GaugePair::from_well(well).ode_residuals(t, GAUGE_FD_STEP)?;
    Ok(ra * x * x + rb * x.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Stencil;
    use crate::types::Branch;
    use proptest::prelude::*;

    fn well(c1: f64, c2: f64) -> WellConfig {
        WellConfig::new(1.0, c1, c2, Branch::Expanding).unwrap()
    }

    #[test]
    fn gauge_examples() {
        assert_eq!(gauge_a(0.0, 1.0).unwrap(), -1.0);
        assert_eq!(gauge_a(0.25, 1.0).unwrap(), -0.5);
        assert!(matches!(gauge_a(-0.25, 1.0), Err(Error::SingularTime { .. })));
        assert_eq!(gauge_b(0.0, 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(gauge_b(0.0, 1.0, 2.0).unwrap(), 2.0);
        assert_eq!(gauge_b(0.25, 2.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn map_examples() {
        let w = WellConfig::default();
        for t in [0.0, 0.3, 1.0, 7.5] {
            let l = w.wall_position(t).unwrap();
            assert!((map_to_static(l, t, &w).unwrap() - 1.0).abs() < 1e-15);
        }
        assert_eq!(map_to_static(0.0, 5.0, &w).unwrap(), 0.0);
        assert_eq!(map_to_static(1.0, 0.25, &w).unwrap(), 0.5);
    }

    #[test]
    fn map_sends_walls_to_box_edges_for_general_constants() {
        let w = WellConfig::new(1.3, 2.0, 1.0, Branch::Expanding).unwrap();
        let t = 0.8;
        assert!(map_to_static(w.fixed_wall_position(), t, &w).unwrap().abs() < 1e-15);
        let y = map_to_static(w.wall_position(t).unwrap(), t, &w).unwrap();
        assert!((y - 1.3).abs() < 1e-14);
    }

    #[test]
    fn lift_examples() {
        let w = WellConfig::default();
        assert_eq!(lift_wavefunction(1, 0.0, 1.0, &w).unwrap().norm(), 0.0);
        let l1 = w.wall_position(1.0).unwrap();
        let mid = lift_wavefunction(1, l1 / 2.0, 1.0, &w).unwrap();
        assert!((mid.norm() - (2.0f64 / 5.0).sqrt()).abs() < 1e-15);
        let l = w.wall_position(0.5).unwrap();
        assert!(lift_wavefunction(2, l / 2.0, 0.5, &w).unwrap().norm() < 1e-15);
    }

    #[test]
    fn residual_examples() {
        assert!(transformed_potential_residual(0.3, 0.5, &WellConfig::default()).unwrap() <= 1e-8);
        assert_eq!(transformed_potential_residual(0.0, 1.0, &WellConfig::default()).unwrap(), 0.0);
        assert!(transformed_potential_residual(1.7, 0.75, &well(2.0, 1.0)).unwrap() <= 1e-8);
    }

    fn tdse_residual(n: u32, x: f64, t: f64, w: &WellConfig, h: f64) -> f64 {
        let f = |xx: f64, tt: f64| lift_wavefunction(n, xx, tt, w);
        let dt: Complex64 = Stencil::D1_O4.apply(|tt| f(x, tt), t, h).unwrap();
        let dxx: Complex64 = Stencil::D2_O4.apply(|xx| f(xx, t), x, h).unwrap();
        (Complex64::i() * dt + dxx).norm()
    }

    #[test]
    fn lifted_state_solves_free_equation_at_stencil_order() {
        for w in [WellConfig::default(), well(2.0, 1.0)] {
            let (lo, hi) = w.interval(0.6).unwrap();
            let x = lo + 0.37 * (hi - lo);
            let r1 = tdse_residual(2, x, 0.6, &w, 4e-3);
            let r2 = tdse_residual(2, x, 0.6, &w, 2e-3);
            let order = (r1 / r2).log2();
            assert!(order > 3.5, "order {order} ({r1:e}, {r2:e})");
        }
    }

    #[test]
    fn lifted_state_on_contracting_branch() {
        let w = WellConfig::new(1.0, 1.0, 0.0, Branch::Contracting).unwrap();
        let t = -1.0;
        let (lo, hi) = w.interval(t).unwrap();
        assert!(lo < hi);
        let x = lo + 0.4 * (hi - lo);
        let r1 = tdse_residual(1, x, t, &w, 4e-3);
        let r2 = tdse_residual(1, x, t, &w, 2e-3);
        assert!((r1 / r2).log2() > 3.5);
        assert_eq!(lift_wavefunction(1, hi + 0.1, t, &w).unwrap().norm(), 0.0);
    }

    proptest! {
        #[test]
        fn gauge_odes_hold(t in 0.1f64..10.0, c2 in -3.0f64..3.0) {
            let (ra, rb) = GaugePair::new(1.0, c2).ode_residuals(t, GAUGE_FD_STEP).unwrap();
            prop_assert!(ra <= 1e-8 && rb <= 1e-8, "{ra:e} {rb:e}");
        }

        #[test]
        fn map_is_affine(t in 0.0f64..5.0, x1 in 0.0f64..3.0, x2 in 0.0f64..3.0, lam in 0.0f64..1.0) {
            let w = well(1.5, 0.7);
            let m = |x| map_to_static(x, t, &w).unwrap();
            let lhs = m(lam * x1 + (1.0 - lam) * x2);
            let rhs = lam * m(x1) + (1.0 - lam) * m(x2);
            prop_assert!((lhs - rhs).abs() < 1e-13);
        }
    }
}
