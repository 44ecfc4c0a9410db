//! Numeric time-dependent SUSY transformations for arbitrary transformation
//! functions: the gauge `A1`, the intertwiners `L1 = A1(−∂x + ux/u)` and
//! `L2 = A1(−∂x + vx/v)`, partner potentials and missing states.
//!
//! Nothing here knows the closed forms; it is the independent route against
//! which the families are checked.
//!
//! Derivatives use central stencils with a step that scales with the well
//! width and shrinks near walls and where `u` varies fast relative to its
//! size, so nested stencils stay above the roundoff floor.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{adaptive_gauss_legendre, composite_simpson, Stencil};
use crate::types::{Amplitude, ConfluentConfig, Potential, Wave, WellConfig};

/// `|u|` below this is treated as a node.
pub const NODE_THRESHOLD: f64 = 1e-10;
/// Largest differencing step as a fraction of the well width.
pub const DEFAULT_REL_STEP: f64 = 2e-3;
/// Absolute tolerance of the confluent integral.
pub const CONFLUENT_QUAD_TOL: f64 = 1e-12;
/// Largest allowed spread of `Im ∂xx ln u` across probes.
pub const REALITY_TOL: f64 = 1e-6;
/// Default number of Simpson intervals for the gauge integral.
pub const DEFAULT_GAUGE_INTERVALS: usize = 400;

const LOCAL_FRACTION: f64 = 1e-2;
const PROBE_FRACTIONS: [f64; 11] = [0.5, 0.35, 0.65, 0.25, 0.75, 0.42, 0.58, 0.3, 0.7, 0.2, 0.8];

/// A solution `u` of the seed equation used to build intertwiners.
#[derive(Debug, Clone)]
pub struct TransformationFunction<W> {
    pub u: W,
    pub well: WellConfig,
    pub label: String,
}

impl<W: Wave> TransformationFunction<W> {
    pub fn new(u: W, well: WellConfig, label: impl Into<String>) -> Self {
        Self { u, well, label: label.into() }
    }

    pub fn value(&self, x: f64, t: f64) -> Result<Amplitude> {
        self.u.amplitude(x, t)
    }

    /// Width and distance to the nearer wall; errors unless `x` is interior.
    fn frame(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.well.interval(t)?;
        if !(lo < x && x < hi) {
            return Err(Error::OutsideWell { x, lo, hi });
        }
        Ok((hi - lo, (x - lo).min(hi - x)))
    }

    /// Step bounded by the width, a quarter of the wall distance divided by
    /// `reach`, and the local scale `|u|/|ux|`.
    fn step(&self, x: f64, t: f64, reach: f64) -> Result<f64> {
        let pilot = self.pilot_step(x, t, reach)?;
        let u = self.value(x, t)?;
        let du: Complex64 = Stencil::D1_O6.apply(|y| self.value(y, t), x, pilot)?;
        let local = if du.norm() > 0.0 { LOCAL_FRACTION * u.norm() / du.norm() } else { f64::INFINITY };
        Ok(pilot.min(local).max(pilot * 1e-3))
    }

    /// Step bounded by the width and the wall distance only.
    fn pilot_step(&self, x: f64, t: f64, reach: f64) -> Result<f64> {
        let (width, dist) = self.frame(x, t)?;
        Ok((DEFAULT_REL_STEP * width).min(dist / (4.0 * reach)))
    }

    /// `(u, ux)` with `ux` from a 6th-order stencil.
    pub fn value_and_derivative(&self, x: f64, t: f64) -> Result<(Amplitude, Amplitude)> {
        let h = self.step(x, t, 1.0)?;
        self.value_and_derivative_with(x, t, h)
    }

    fn value_and_derivative_with(&self, x: f64, t: f64, h: f64) -> Result<(Amplitude, Amplitude)> {
        let u = self.value(x, t)?;
        let du = Stencil::D1_O6.apply(|y| self.value(y, t), x, h)?;
        Ok((u, du))
    }

    /// `ux / u`.
    pub fn log_derivative(&self, x: f64, t: f64) -> Result<Amplitude> {
        let (u, du) = self.value_and_derivative(x, t)?;
        if u.norm() < NODE_THRESHOLD {
            return Err(Error::NearNode { x, modulus: u.norm() });
        }
        Ok(du / u)
    }

    fn phase_gradient_with(&self, x: f64, t: f64, h: f64) -> Result<f64> {
        let (u, du) = self.value_and_derivative_with(x, t, h)?;
        if u.norm() < NODE_THRESHOLD {
            return Err(Error::NearNode { x, modulus: u.norm() });
        }
        Ok((u.conj() * du).im / u.norm_sqr())
    }

    /// `Im ∂xx ln u`, the x-derivative of the phase gradient `Im(ux/u)`.
    ///
    /// The phase gradient stays smooth where `|u|` is small, so only the inner
    /// derivative uses the local step; the outer one keeps the pilot step to
    /// limit roundoff amplification.
    pub fn phase_curvature(&self, x: f64, t: f64) -> Result<f64> {
        let h = self.step(x, t, 2.0)?;
        let outer = self.pilot_step(x, t, 2.0)?;
        Stencil::D1_O6.apply(|y| self.phase_gradient_with(y, t, h), x, outer)
    }

    /// `|∂x³ ln(u/u*)| = 2|∂x² Im(ux/u)|`.
    pub fn reality_defect(&self, x: f64, t: f64) -> Result<f64> {
        let h = self.step(x, t, 2.0)?;
        let outer = self.pilot_step(x, t, 2.0)?;
        let d2: f64 = Stencil::D2_O4.apply(|y| self.phase_gradient_with(y, t, h), x, outer)?;
        Ok(2.0 * d2.abs())
    }

    /// Interior probes at the given width fractions, skipping points where
    /// `u` is close to a node on the scale of its own variation.
    fn probes(&self, t: f64, fractions: &[f64], count: usize) -> Result<Vec<f64>> {
        let (lo, hi) = self.well.interval(t)?;
        let width = hi - lo;
        let mut out = Vec::with_capacity(count);
        for &f in fractions {
            if out.len() == count {
                break;
            }
            let x = lo + f * width;
            let (u, du) = self.value_and_derivative(x, t)?;
            if u.norm() >= NODE_THRESHOLD && u.norm() >= 0.05 * width * du.norm() / 2.0 {
                out.push(x);
            }
        }
        if out.len() < count {
            let x = lo + fractions[0] * width;
            return Err(Error::NearNode { x, modulus: self.value(x, t)?.norm() });
        }
        Ok(out)
    }

    /// `Im ∂xx ln u` at the standard probes, with the probe spread.
    fn curvature_at_probes(&self, t: f64) -> Result<(f64, f64)> {
        let probes = self.probes(t, &PROBE_FRACTIONS, 3)?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for &x in &probes {
            let c = self.phase_curvature(x, t)?;
            lo = lo.min(c);
            hi = hi.max(c);
            sum += c;
        }
        Ok((sum / probes.len() as f64, hi - lo))
    }
}

/// `exp{2∫_{t_ref}^{t} Im[∂xx ln u] dt'}` with the default Simpson resolution.
pub fn a1_magnitude<W: Wave>(u: &TransformationFunction<W>, t: f64, t_ref: f64) -> Result<f64> {
    a1_magnitude_with(u, t, t_ref, DEFAULT_GAUGE_INTERVALS)
}

/// [`a1_magnitude`] with `intervals` Simpson subintervals.
pub fn a1_magnitude_with<W: Wave>(u: &TransformationFunction<W>, t: f64, t_ref: f64, intervals: usize) -> Result<f64> {
    u.well.check_time(t)?;
    u.well.check_time(t_ref)?;
    let integral = composite_simpson(t_ref, t, intervals, |s| {
        let (mean, spread) = u.curvature_at_probes(s)?;
        if spread > REALITY_TOL {
            return Err(Error::RealityViolation { spread });
        }
        Ok(mean)
    })?;
    Ok((2.0 * integral).exp())
}

/// Largest `|∂x³ ln(u/u*)|` over nine interior probes.
pub fn reality_check<W: Wave>(u: &TransformationFunction<W>, t: f64) -> Result<f64> {
    const GRID: [f64; 18] =
        [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.13, 0.23, 0.33, 0.43, 0.53, 0.63, 0.73, 0.83, 0.93];
    let probes = u.probes(t, &GRID, 9)?;
    probes.iter().try_fold(0.0f64, |acc, &x| Ok(acc.max(u.reality_defect(x, t)?)))
}

/// `V0 − ∂xx ln|u|²`.
pub fn partner_potential<P: Potential, W: Wave>(v0: &P, u: &TransformationFunction<W>, x: f64, t: f64) -> Result<f64> {
    let base = v0.finite_potential(x, t)?;
    let h = u.step(x, t, 1.0)?;
    let log_density = |y: f64| {
        let m = u.value(y, t)?.norm_sqr();
        if m.sqrt() < NODE_THRESHOLD {
            return Err(Error::NearNode { x: y, modulus: m.sqrt() });
        }
        Ok(m.ln())
    };
    let d2: f64 = Stencil::D2_O4.apply(log_density, x, h)?;
    Ok(base - d2)
}

/// First-order intertwiner `A1(t)(−∂x + ux/u)`.
pub struct IntertwinerL1<W, A> {
    pub a1: A,
    pub u: TransformationFunction<W>,
}

impl<W: Wave, A: Fn(f64) -> Result<f64>> IntertwinerL1<W, A> {
    pub fn new(u: TransformationFunction<W>, a1: A) -> Self {
        Self { a1, u }
    }

    pub fn apply<P: Wave + ?Sized>(&self, psi: &P, x: f64, t: f64) -> Result<Amplitude> {
        let h = self.u.step(x, t, 1.0)?;
        let (u, du) = self.u.value_and_derivative_with(x, t, h)?;
        if u.norm() < NODE_THRESHOLD {
            return Err(Error::NearNode { x, modulus: u.norm() });
        }
        let p = psi.amplitude(x, t)?;
        let dp: Complex64 = Stencil::D1_O6.apply(|y| psi.amplitude(y, t), x, h)?;
        Ok((-dp + du / u * p) * (self.a1)(t)?)
    }

    /// `1/(A1 u*)`, the solution of the partner equation outside the image of `L1`.
    pub fn missing_state(&self, x: f64, t: f64) -> Result<Amplitude> {
        missing_state_1susy(&self.u, &self.a1, x, t)
    }
}

pub fn apply_l1<W: Wave, A: Fn(f64) -> Result<f64>, P: Wave + ?Sized>(
    l1: &IntertwinerL1<W, A>,
    psi: &P,
    x: f64,
    t: f64,
) -> Result<Amplitude> {
    l1.apply(psi, x, t)
}

/// `1/(A1(t) u*(x,t))`.
pub fn missing_state_1susy<W: Wave, A: Fn(f64) -> Result<f64>>(
    u: &TransformationFunction<W>,
    a1: &A,
    x: f64,
    t: f64,
) -> Result<Amplitude> {
    let value = u.value(x, t)?;
    if value.norm() < NODE_THRESHOLD {
        return Err(Error::NearNode { x, modulus: value.norm() });
    }
    Ok((value.conj() * a1(t)?).inv())
}

/// `ω + ∫ |u|²` from the fixed wall to `x`.
///
/// Past the middle of the well the integral is taken from the far wall and
/// subtracted from `ω + ∫|u|²` over the whole well, which keeps the small
/// values near a wall where the weight vanishes accurate.
pub fn confluent_weight<W: Wave>(u: &TransformationFunction<W>, cc: &ConfluentConfig, x: f64, t: f64) -> Result<f64> {
    let (lo, hi) = u.well.interval(t)?;
    if !(lo <= x && x <= hi) {
        return Err(Error::OutsideWell { x, lo, hi });
    }
    let density = |y: f64| Ok(u.value(y, t)?.norm_sqr());
    if x - lo <= hi - x {
        Ok(cc.omega() + adaptive_gauss_legendre(lo, x, CONFLUENT_QUAD_TOL, density)?)
    } else {
        let total = adaptive_gauss_legendre(lo, hi, CONFLUENT_QUAD_TOL, density)?;
        Ok((cc.omega() + total) - adaptive_gauss_legendre(x, hi, CONFLUENT_QUAD_TOL, density)?)
    }
}

/// `v = (ω + ∫|u|²)/(A1 u*)`.
///
/// `v` is unbounded at nodes of `u` unless the weight vanishes there too, so
/// any point with `|u|` below the node threshold is rejected.
pub fn confluent_v<W: Wave, A: Fn(f64) -> Result<f64>>(
    u: &TransformationFunction<W>,
    cc: &ConfluentConfig,
    a1: &A,
    x: f64,
    t: f64,
) -> Result<Amplitude> {
    let value = u.value(x, t)?;
    if value.norm() < NODE_THRESHOLD {
        return Err(Error::NearNode { x, modulus: value.norm() });
    }
    let w = confluent_weight(u, cc, x, t)?;
    Ok((value.conj() * a1(t)?).inv() * w)
}

/// `V0 − 2∂x(|u|²/w)` with `w = ω + ∫|u|²`, i.e. `V0 − 2∂xx ln w` with the
/// inner derivative taken analytically.
pub fn confluent_potential<P: Potential, W: Wave>(
    v0: &P,
    u: &TransformationFunction<W>,
    cc: &ConfluentConfig,
    x: f64,
    t: f64,
) -> Result<f64> {
    let base = v0.finite_potential(x, t)?;
    let (width, dist) = u.frame(x, t)?;
    let w0 = confluent_weight(u, cc, x, t)?;
    let rho0 = u.value(x, t)?.norm_sqr();
    if w0.abs() < NODE_THRESHOLD {
        return Err(Error::RegularityViolation { omega: cc.omega() });
    }
    let local = if rho0 > 0.0 { LOCAL_FRACTION * w0.abs() / rho0 } else { f64::INFINITY };
    let h = (DEFAULT_REL_STEP * width).min(dist / 4.0).min(local);
    let density = |y: f64| Ok(u.value(y, t)?.norm_sqr());
    let ratio = |y: f64| {
        let w = if y == x { w0 } else { w0 + adaptive_gauss_legendre(x, y, CONFLUENT_QUAD_TOL, density)? };
        if w.abs() < NODE_THRESHOLD {
            return Err(Error::RegularityViolation { omega: cc.omega() });
        }
        Ok(density(y)? / w)
    };
    let d1: f64 = Stencil::D1_O4.apply(ratio, x, h)?;
    Ok(base - 2.0 * d1)
}

/// Second intertwiner `A2(t)(−∂x + vx/v)` of the confluent chain.
pub struct IntertwinerL2<W, A> {
    pub a2: A,
    pub u: TransformationFunction<W>,
    pub cc: ConfluentConfig,
}

impl<W: Wave, A: Fn(f64) -> Result<f64>> IntertwinerL2<W, A> {
    pub fn new(u: TransformationFunction<W>, cc: ConfluentConfig, a2: A) -> Self {
        Self { a2, u, cc }
    }

    pub fn v(&self, x: f64, t: f64) -> Result<Amplitude> {
        confluent_v(&self.u, &self.cc, &self.a2, x, t)
    }

    /// `vx/v = |u|²/w − (ux/u)*`.
    pub fn log_derivative_v(&self, x: f64, t: f64) -> Result<Amplitude> {
        let (u, du) = self.u.value_and_derivative(x, t)?;
        if u.norm() < NODE_THRESHOLD {
            return Err(Error::NearNode { x, modulus: u.norm() });
        }
        let w = confluent_weight(&self.u, &self.cc, x, t)?;
        Ok(Complex64::new(u.norm_sqr() / w, 0.0) - (du / u).conj())
    }

    pub fn apply<P: Wave + ?Sized>(&self, chi: &P, x: f64, t: f64) -> Result<Amplitude> {
        let h = self.u.step(x, t, 1.0)?;
        let c = chi.amplitude(x, t)?;
        let dc: Complex64 = Stencil::D1_O6.apply(|y| chi.amplitude(y, t), x, h)?;
        Ok((-dc + self.log_derivative_v(x, t)? * c) * (self.a2)(t)?)
    }
}

pub fn apply_l2<W: Wave, A: Fn(f64) -> Result<f64>, P: Wave + ?Sized>(
    l2: &IntertwinerL2<W, A>,
    chi: &P,
    x: f64,
    t: f64,
) -> Result<Amplitude> {
    l2.apply(chi, x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{chi_n, phi_n, potential_v0, potential_v1, potential_v2, xi_n};
    use core::f64::consts::PI;

    fn w() -> WellConfig {
        WellConfig::default()
    }

    fn phi(n: u32) -> TransformationFunction<impl Fn(f64, f64) -> Result<Amplitude>> {
        TransformationFunction::new(move |x, t| phi_n(n, x, t, &w()), w(), "phi")
    }

    fn v0(x: f64, t: f64) -> Result<crate::types::ExtendedReal> {
        potential_v0(x, t, &w())
    }

    fn gauge(t: f64) -> Result<f64> {
        Ok(4.0 * t + 1.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn a1_examples() {
        assert!((a1_magnitude(&phi(1), 1.0, 0.0).unwrap() - 5.0).abs() < 1e-8);
        assert_eq!(a1_magnitude(&phi(1), 0.7, 0.7).unwrap(), 1.0);
        assert!((a1_magnitude(&phi(2), 0.75, 0.25).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn a1_rejects_complex_gauge() {
        let u = TransformationFunction::new(
            |x, t| Ok(phi_n(1, x, t, &w())? + phi_n(2, x, t, &w())? * 0.5),
            w(),
            "mix",
        );
        assert!(matches!(a1_magnitude(&u, 0.5, 0.25), Err(Error::RealityViolation { .. })));
    }

    #[test]
    fn l1_examples() {
        let l1 = IntertwinerL1::new(phi(1), gauge);
        let phi2 = |x, t| phi_n(2, x, t, &w());
        let got = l1.apply(&phi2, 2.5, 1.0).unwrap();
        assert!(rel(got, chi_n(2, 2.5, 1.0, &w()).unwrap()) < 1e-8);
        let phi3 = |x, t| phi_n(3, x, t, &w());
        let got = l1.apply(&phi3, 0.75, 0.5).unwrap();
        assert!(rel(got, chi_n(3, 0.75, 0.5, &w()).unwrap()) < 1e-8);
        let own = |x, t| phi_n(1, x, t, &w());
        let zero = l1.apply(&own, 1.3, 0.5).unwrap();
        assert!(zero.norm() < 1e-8 * phi_n(1, 1.3, 0.5, &w()).unwrap().norm());
    }

    #[test]
    fn l1_rejects_nodes() {
        let l1 = IntertwinerL1::new(phi(2), gauge);
        let phi3 = |x, t| phi_n(3, x, t, &w());
        assert!(matches!(l1.apply(&phi3, 1.5, 0.5), Err(Error::NearNode { .. })));
    }

    #[test]
    fn partner_examples() {
        let v = partner_potential(&v0, &phi(1), 2.5, 1.0).unwrap();
        assert!((v - 2.0 * (PI / 5.0).powi(2)).abs() < 1e-6);
        let v = partner_potential(&v0, &phi(1), 0.5, 0.25).unwrap();
        assert!((v - PI * PI).abs() < 1e-6);
        let plane = TransformationFunction::new(|x: f64, _t| Ok(Complex64::from_polar(1.0, 3.0 * x)), w(), "plane");
        assert!(partner_potential(&v0, &plane, 0.4, 0.1).unwrap().abs() < 1e-8);
    }

    #[test]
    fn missing_state_examples() {
        let near = missing_state_1susy(&phi(1), &gauge, 1e-6, 0.0).unwrap().norm();
        let far = missing_state_1susy(&phi(1), &gauge, 0.5, 0.0).unwrap().norm();
        assert!(near > 1e4 * far);
        let unit = TransformationFunction::new(|x: f64, _t| Ok(Complex64::from_polar(1.0, x)), w(), "unit");
        let m = missing_state_1susy(&unit, &|_| Ok(1.0), 0.3, 0.0).unwrap();
        assert!((m.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reality_examples() {
        for n in 1..4 {
            assert!(reality_check(&phi(n), 0.5).unwrap() <= 1e-6);
        }
        let mix = TransformationFunction::new(
            |x, t| Ok(phi_n(1, x, t, &w())? + phi_n(2, x, t, &w())? * 0.5),
            w(),
            "mix",
        );
        assert!(reality_check(&mix, 0.5).unwrap() > 1e-3);
        let real = TransformationFunction::new(|x: f64, _t| Ok(Complex64::new(2.0 + x.sin(), 0.0)), w(), "real");
        assert_eq!(reality_check(&real, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn confluent_weight_total() {
        let cc = ConfluentConfig::new(2, 0.4).unwrap();
        let l = w().wall_position(0.5).unwrap();
        assert!((confluent_weight(&phi(2), &cc, l, 0.5).unwrap() - 1.4).abs() < 1e-12);
        let cc0 = ConfluentConfig::new(2, 0.0).unwrap();
        let small = confluent_weight(&phi(2), &cc0, 1e-3, 0.5).unwrap();
        assert!(small > 0.0 && small < 1e-7);
    }

    #[test]
    fn confluent_potential_matches_closed_form() {
        let t = 0.25;
        let l = w().wall_position(t).unwrap();
        for omega in [0.4, -1.0, 0.0] {
            let cc = ConfluentConfig::new(2, omega).unwrap();
            for k in 1..20 {
                let x = l * k as f64 / 20.0;
                let num = confluent_potential(&v0, &phi(2), &cc, x, t).unwrap();
                let exact = potential_v2(x, t, &w(), &cc).unwrap().finite().unwrap();
                let floor = (PI / l).powi(2);
                assert!((num - exact).abs() / exact.abs().max(floor) < 1e-6, "omega {omega} x {x}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn confluent_potential_large_omega() {
        let cc = ConfluentConfig::new(2, 1e6).unwrap();
        assert!(confluent_potential(&v0, &phi(2), &cc, 0.7, 0.25).unwrap().abs() <= 1e-4);
    }

    #[test]
    fn l2_l1_matches_xi() {
        let cc = ConfluentConfig::new(2, 0.4).unwrap();
        let l1 = IntertwinerL1::new(phi(2), gauge);
        let l2 = IntertwinerL2::new(phi(2), cc, gauge);
        let phi3 = |x, t| phi_n(3, x, t, &w());
        let chi3 = |x, t| l1.apply(&phi3, x, t);
        for x in [0.3, 0.7, 1.3, 1.8] {
            let got = l2.apply(&chi3, x, 0.5).unwrap();
            let exact = xi_n(3, x, 0.5, &w(), &cc).unwrap();
            assert!(rel(got, exact) < 1e-8, "x {x}: {}", rel(got, exact));
        }
        let v = |x, t| l2.v(x, t);
        let zero = l2.apply(&v, 0.7, 0.5).unwrap();
        assert!(zero.norm() < 1e-8 * l2.v(0.7, 0.5).unwrap().norm());
    }

    #[test]
    fn numeric_v1_matches_closed_form() {
        let t = 0.5;
        let l = w().wall_position(t).unwrap();
        for k in 1..50 {
            let x = l * k as f64 / 50.0;
            let num = partner_potential(&v0, &phi(1), x, t).unwrap();
            let exact = potential_v1(x, t, &w()).unwrap().finite().unwrap();
            assert!((num - exact).abs() / exact < 1e-6);
        }
    }
}
