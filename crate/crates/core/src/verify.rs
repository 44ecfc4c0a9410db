//! Finite-difference and quadrature checks of solutions on the moving well:
//! Schrödinger residuals, norms, overlaps, energies and convergence orders.
//!
//! All integrals run in the physical variable `x` at fixed `t` over the
//! current well interval.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{GaussLegendre, Stencil};
use crate::types::{Amplitude, Potential, Wave, WellConfig};

pub const DEFAULT_PANELS: usize = 64;
pub const DEFAULT_NODES: usize = 10;
/// Largest step of the energy integrand stencil, as a fraction of the width.
pub const ENERGY_REL_STEP: f64 = 1e-3;

pub const TIME_STENCIL: Stencil = Stencil::D1_O4;
pub const SPACE_STENCIL: Stencil = Stencil::D2_O6;

/// The three terms of `i∂tψ + ∂xxψ − Vψ` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTerms {
    pub time: Amplitude,
    pub space: Amplitude,
    pub potential: Amplitude,
}

impl ResidualTerms {
    pub fn residual(&self) -> Amplitude {
        self.time + self.space - self.potential
    }

    /// Largest modulus among the three terms.
    pub fn scale(&self) -> f64 {
        self.time.norm().max(self.space.norm()).max(self.potential.norm())
    }
}

/// Checks that the space-time stencil stays strictly inside the well.
fn check_stencil_domain(well: &WellConfig, x: f64, t: f64, hx: f64, ht: f64) -> Result<()> {
    let rx = SPACE_STENCIL.radius() as f64 * hx;
    let rt = TIME_STENCIL.radius() as i32;
    for k in -rt..=rt {
        let tk = t + k as f64 * ht;
        let (lo, hi) = well.interval(tk).map_err(|_| Error::StencilOutOfDomain { x, t })?;
        if !(lo < x - rx && x + rx < hi) {
            return Err(Error::StencilOutOfDomain { x, t });
        }
    }
    Ok(())
}

/// Terms of the Schrödinger operator applied to `psi`, with a 4th-order
/// time stencil and a 6th-order space stencil.
pub fn tdse_residual_terms<W, P>(psi: &W, v: &P, well: &WellConfig, x: f64, t: f64, hx: f64, ht: f64) -> Result<ResidualTerms>
where
    W: Wave + ?Sized,
    P: Potential + ?Sized,
{
    well.check_time(t)?;
    check_stencil_domain(well, x, t, hx, ht)?;
    let dt: Complex64 = TIME_STENCIL.apply(|s| psi.amplitude(x, s), t, ht)?;
    let dxx: Complex64 = SPACE_STENCIL.apply(|y| psi.amplitude(y, t), x, hx)?;
    let value = psi.amplitude(x, t)?;
    Ok(ResidualTerms { time: Complex64::i() * dt, space: dxx, potential: value * v.finite_potential(x, t)? })
}

/// `i∂tψ + ∂xxψ − Vψ` by central differences.
pub fn tdse_residual<W, P>(psi: &W, v: &P, well: &WellConfig, x: f64, t: f64, hx: f64, ht: f64) -> Result<Amplitude>
where
    W: Wave + ?Sized,
    P: Potential + ?Sized,
{
    Ok(tdse_residual_terms(psi, v, well, x, t, hx, ht)?.residual())
}

/// Largest residual over a probe set at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    /// Step in units of the well width.
    pub step: f64,
    pub hx: f64,
    pub ht: f64,
    pub max_residual: f64,
    /// Largest term modulus over the same probes.
    pub scale: f64,
}

impl ResidualSample {
    pub fn relative(&self) -> f64 {
        self.max_residual / self.scale
    }
}

/// Residuals at probes `x = f·ℓ(t)` with `hx = h·ℓ` and `ht = h·(ℓ/π)²`,
/// i.e. the time step measured in periods of the ground level.
pub fn probe_residuals<W, P>(psi: &W, v: &P, well: &WellConfig, t: f64, fractions: &[f64], h: f64) -> Result<ResidualSample>
where
    W: Wave + ?Sized,
    P: Potential + ?Sized,
{
    let (lo, hi) = well.interval(t)?;
    let width = hi - lo;
    let hx = h * width;
    let ht = h * (width / core::f64::consts::PI).powi(2);
    let mut max_residual = 0.0f64;
    let mut scale = 0.0f64;
    for &f in fractions {
        let terms = tdse_residual_terms(psi, v, well, lo + f * width, t, hx, ht)?;
        max_residual = max_residual.max(terms.residual().norm());
        scale = scale.max(terms.scale());
    }
    Ok(ResidualSample { step: h, hx, ht, max_residual, scale })
}

/// Composite Gauss–Legendre integral of `f` over the well at time `t`.
fn integrate_over_well<F>(well: &WellConfig, t: f64, panels: usize, nodes: usize, f: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let (lo, hi) = well.interval(t)?;
    GaussLegendre::new(nodes)?.composite(lo, hi, panels, f)
}

/// `∫|ψ|²dx` over the well.
pub fn norm<W: Wave + ?Sized>(psi: &W, t: f64, well: &WellConfig) -> Result<f64> {
    norm_with(psi, t, well, DEFAULT_PANELS, DEFAULT_NODES)
}

pub fn norm_with<W: Wave + ?Sized>(psi: &W, t: f64, well: &WellConfig, panels: usize, nodes: usize) -> Result<f64> {
    Ok(integrate_over_well(well, t, panels, nodes, |x| Ok(Complex64::new(psi.amplitude(x, t)?.norm_sqr(), 0.0)))?.re)
}

/// `∫ψ1* ψ2 dx` over the well.
pub fn overlap<W1, W2>(psi1: &W1, psi2: &W2, t: f64, well: &WellConfig) -> Result<Amplitude>
where
    W1: Wave + ?Sized,
    W2: Wave + ?Sized,
{
    integrate_over_well(well, t, DEFAULT_PANELS, DEFAULT_NODES, |x| {
        Ok(psi1.amplitude(x, t)?.conj() * psi2.amplitude(x, t)?)
    })
}

/// `∫ψ*(−∂xxψ)dx` over the well, unnormalized.
///
/// The quadrature nodes never touch the walls; the stencil step shrinks to a
/// quarter of the wall distance so every stencil point stays inside.
pub fn energy_expectation<W: Wave + ?Sized>(psi: &W, t: f64, well: &WellConfig) -> Result<f64> {
    let (lo, hi) = well.interval(t)?;
    let width = hi - lo;
    let radius = Stencil::D2_O6.radius() as f64;
    let value = integrate_over_well(well, t, DEFAULT_PANELS, DEFAULT_NODES, |x| {
        let dist = (x - lo).min(hi - x);
        let h = (ENERGY_REL_STEP * width).min(dist / (radius + 1.0));
        let d2: Complex64 = Stencil::D2_O6.apply(|y| psi.amplitude(y, t), x, h)?;
        Ok(-psi.amplitude(x, t)?.conj() * d2)
    })?;
    Ok(value.re)
}

/// Norms under successive panel doubling.
#[derive(Debug, Clone, PartialEq)]
pub struct NormRefinement {
    pub panels: Vec<usize>,
    pub norms: Vec<f64>,
}

impl NormRefinement {
    /// Relative change between the two finest levels.
    pub fn last_change(&self) -> f64 {
        let n = self.norms.len();
        (self.norms[n - 1] - self.norms[n - 2]).abs() / self.norms[n - 1].abs()
    }

    pub fn converged(&self, tol: f64) -> bool {
        self.last_change() <= tol
    }
}

/// `∫|ψ|²` with `panels0·2^k` panels for `k < levels`. A square-integrable
/// state settles; a wall singularity keeps growing as nodes approach it.
pub fn norm_refinement<W: Wave + ?Sized>(psi: &W, t: f64, well: &WellConfig, panels0: usize, levels: usize) -> Result<NormRefinement> {
    if levels < 2 {
        return Err(Error::InvalidConfig("refinement needs at least two levels"));
    }
    let panels: Vec<usize> = (0..levels).map(|k| panels0 << k).collect();
    let norms = panels.iter().map(|&p| norm_with(psi, t, well, p, DEFAULT_NODES)).collect::<Result<Vec<_>>>()?;
    Ok(NormRefinement { panels, norms })
}

/// Least-squares slope of `log residual` against `log step` over halving steps.
pub fn convergence_study<F>(mut residual: F, steps: &[f64]) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if steps.len() < 3 {
        return Err(Error::InvalidConfig("convergence study needs at least three steps"));
    }
    for pair in steps.windows(2) {
        if ((pair[0] / pair[1]) - 2.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig("convergence study steps must halve"));
        }
    }
    let values = steps.iter().map(|&h| residual(h)).collect::<Result<Vec<_>>>()?;
    for (k, pair) in values.windows(2).enumerate() {
        if !(pair[1] < pair[0]) {
            return Err(Error::NonMonotoneResiduals { step: steps[k + 1], previous: pair[0], current: pair[1] });
        }
    }
    Ok(log_log_slope(steps, &values))
}

/// Least-squares slope through `(ln x, ln y)`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in lx.iter().zip(&ly) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}

/// Direction of a check's bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, bound: Bound::AtMost, passed: value <= tolerance }
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, bound: Bound::AtLeast, passed: value >= tolerance }
    }

    /// A check that failed before producing a value.
    pub fn errored(name: impl Into<String>, tolerance: f64) -> Self {
        Self { name: name.into(), value: f64::NAN, tolerance, bound: Bound::AtMost, passed: false }
    }
}

/// Stencil and step used by a group of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilInfo {
    pub label: String,
    pub order: u32,
    pub step: f64,
}

/// Named checks with explicit tolerances.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub subject: String,
    pub t: f64,
    pub checks: Vec<Check>,
    pub stencils: Vec<StencilInfo>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>, t: f64) -> Self {
        Self { subject: subject.into(), t, checks: Vec::new(), stencils: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// One line per check: `PASS|FAIL <subject> t=<t> <name> value=<v> (<=|>=) <tol>`.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let op = match c.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            writeln!(f, "{status} {} t={} {} value={:e} {op} {:e}", self.subject, self.t, c.name, c.value, c.tolerance)?;
        }
        for s in &self.stencils {
            writeln!(f, "STENCIL {} {} order={} step={:e}", self.subject, s.label, s.order, s.step)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{chi_n, energy_expectation_phi_with_phase, phi_n, potential_v0, potential_v1};
    use crate::types::ExtendedReal;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn w() -> WellConfig {
        WellConfig::default()
    }

    fn phi(n: u32) -> impl Fn(f64, f64) -> Result<Amplitude> {
        move |x, t| phi_n(n, x, t, &w())
    }

    fn v0(x: f64, t: f64) -> Result<ExtendedReal> {
        potential_v0(x, t, &w())
    }

    fn v1(x: f64, t: f64) -> Result<ExtendedReal> {
        potential_v1(x, t, &w())
    }

    #[test]
    fn residual_examples() {
        let psi = phi(1);
        let terms = tdse_residual_terms(&psi, &v0, &w(), 2.5, 1.0, 1e-3, 1e-3).unwrap();
        assert!(terms.residual().norm() <= 1e-5 * terms.space.norm());
        let wrong = tdse_residual(&psi, &v1, &w(), 2.5, 1.0, 1e-3, 1e-3).unwrap();
        assert!(wrong.norm() > 1e-2);
    }

    #[test]
    fn residual_rejects_stencil_leaving_well() {
        let psi = phi(1);
        assert!(matches!(
            tdse_residual(&psi, &v0, &w(), 0.002, 1.0, 1e-3, 1e-3),
            Err(Error::StencilOutOfDomain { .. })
        ));
        // right wall at t − 2ht sits inside x + 3hx
        assert!(matches!(
            tdse_residual(&psi, &v0, &w(), 4.99, 1.0, 1e-3, 1e-3),
            Err(Error::StencilOutOfDomain { .. })
        ));
    }

    #[test]
    fn chi_residual_order() {
        let chi = |x, t| chi_n(2, x, t, &w());
        let l = w().wall_position(0.5).unwrap();
        let order = convergence_study(
            |h| Ok(tdse_residual(&chi, &v1, &w(), l / 3.0, 0.5, h, h * 0.3)?.norm()),
            &[2e-2, 1e-2, 5e-3],
        )
        .unwrap();
        assert!(order >= 3.8, "{order}");
    }

    #[test]
    fn norm_and_overlap_examples() {
        for n in 1..=6 {
            for t in [0.25, 0.5, 0.75, 1.0] {
                assert!((norm(&phi(n), t, &w()).unwrap() - 1.0).abs() < 1e-10);
            }
        }
        let twice = |x, t| Ok(phi_n(1, x, t, &w())? * 2.0);
        assert!((norm(&twice, 0.5, &w()).unwrap() - 4.0).abs() < 1e-10);
        assert!(overlap(&phi(2), &phi(3), 0.5, &w()).unwrap().norm() < 1e-10);
        assert!((overlap(&phi(2), &phi(2), 0.5, &w()).unwrap() - 1.0).norm() < 1e-10);
        let rotated = |x, t| Ok(phi_n(1, x, t, &w())? * Complex64::i());
        assert!((overlap(&phi(1), &rotated, 0.5, &w()).unwrap() - Complex64::i()).norm() < 1e-10);
    }

    #[test]
    fn energy_matches_kinetic_integral_with_phase() {
        for (n, t) in [(1, 0.0), (2, 0.25), (3, 1.0)] {
            let e = energy_expectation(&phi(n), t, &w()).unwrap();
            let exact = energy_expectation_phi_with_phase(n, t, &w()).unwrap();
            assert!((e - exact).abs() / exact < 1e-8, "n {n} t {t}: {e} vs {exact}");
        }
    }

    #[test]
    fn energy_of_real_profile_is_box_level() {
        // |φn| alone carries only the box level (nπ/ℓ)²
        let modulus = |x: f64, t: f64| Ok(Complex64::new(phi_n(1, x, t, &w())?.norm(), 0.0));
        let e = energy_expectation(&modulus, 1.0, &w()).unwrap();
        assert!((e - (PI / 5.0).powi(2)).abs() < 1e-8);
    }

    #[test]
    fn convergence_controls() {
        let order = convergence_study(|h| Ok(3.0 * h * h), &[0.1, 0.05, 0.025]).unwrap();
        assert!((order - 2.0).abs() < 1e-12);
        let psi = phi(1);
        let mismatched = convergence_study(
            |h| Ok(tdse_residual(&psi, &v1, &w(), 2.5, 1.0, h, h)?.norm()),
            &[1e-2, 5e-3, 2.5e-3],
        );
        assert!(matches!(mismatched, Err(Error::NonMonotoneResiduals { .. })));
        assert!(convergence_study(Ok, &[0.1, 0.05]).is_err());
    }

    #[test]
    fn refinement_settles_for_box_states() {
        let r = norm_refinement(&phi(2), 0.5, &w(), 8, 3).unwrap();
        assert!(r.converged(1e-10));
    }

    #[test]
    fn report_text() {
        let mut r = VerificationReport::new("phi1", 0.5);
        r.push(Check::at_most("norm_error", 1e-12, 1e-10));
        r.push(Check::at_least("order", 3.0, 4.0));
        assert!(!r.passed());
        let text = alloc::format!("{r}");
        assert!(text.starts_with("PASS phi1 t=0.5 norm_error"));
        assert!(text.contains("FAIL phi1 t=0.5 order value=3e0 >= 4e0"));
    }

    proptest! {
        #[test]
        fn overlap_is_hermitian(n in 1u32..6, k in 1u32..6, t in 0.0f64..2.0) {
            let a = overlap(&phi(n), &phi(k), t, &w()).unwrap();
            let b = overlap(&phi(k), &phi(n), t, &w()).unwrap();
            prop_assert!((a - b.conj()).norm() < 1e-12);
        }
    }
}
