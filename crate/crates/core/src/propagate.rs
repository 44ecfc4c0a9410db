//! Crank–Nicolson propagation on the moving well.
//!
//! With `σ = (x − x_f)/d(t)`, `d = ℓ(t) − x_f` the signed distance from the
//! fixed wall `x_f` to the moving one, and `Φ = √|d| ψ`, the equation becomes
//!
//! `iΦt = −Φσσ/d² + VΦ + i(ḋ/d)(σ∂σ + ½)Φ`  on `0 < σ < 1`.
//!
//! The operator `σ∂σ + ½` is antisymmetric, and it is discretized by the
//! antisymmetric centered form
//! `[(σj + σj+1)Φj+1 − (σj + σj−1)Φj−1]/(4h)`, so the discrete Hamiltonian is
//! Hermitian and each Crank–Nicolson step is unitary up to roundoff.
//! Coefficients are frozen at the half step.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::families::FamilyId;
use crate::numeric::{solve_tridiagonal, Tridiagonal};
use crate::types::{Amplitude, SampledField, WellConfig};

/// Amplitude growth beyond this factor of the initial maximum aborts a run.
pub const BLOWUP_FACTOR: f64 = 1e3;
/// Endpoint values of the initial field must be below this fraction of its maximum.
pub const ENDPOINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    pub family: FamilyId,
    pub well: WellConfig,
    /// Number of intervals of the fixed `σ` grid; the field has `n_space + 1` points.
    pub n_space: usize,
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
}

impl PropagationConfig {
    pub fn new(family: FamilyId, well: WellConfig, n_space: usize, dt: f64, t_start: f64, t_end: f64) -> Result<Self> {
        let pc = Self { family, well, n_space, dt, t_start, t_end };
        pc.validate()?;
        Ok(pc)
    }

    pub fn validate(&self) -> Result<()> {
        self.well.check_time(self.t_start)?;
        self.well.check_time(self.t_end)?;
        if self.n_space < 64 {
            return Err(Error::InvalidConfig("n_space must be at least 64"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig("dt must be positive"));
        }
        let duration = self.t_end - self.t_start;
        if duration < 0.0 {
            return Err(Error::InvalidConfig("t_end must not precede t_start"));
        }
        if duration > 0.0 && self.dt > duration / 100.0 {
            return Err(Error::InvalidConfig("dt must be at most 1/100 of the run duration"));
        }
        Ok(())
    }

    /// Number of steps; the step is shrunk so they tile the interval exactly.
    pub fn steps(&self) -> usize {
        let duration = self.t_end - self.t_start;
        if duration == 0.0 {
            0
        } else {
            (duration / self.dt - 1e-9).ceil() as usize
        }
    }
}

/// Final field and run diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub field: SampledField,
    pub steps: usize,
    /// Discrete `∫|ψ|²` before and after.
    pub norm_initial: f64,
    pub norm_final: f64,
    /// Steps whose system matrix was not strictly diagonally dominant.
    pub non_dominant_steps: usize,
}

impl Propagation {
    pub fn norm_drift(&self) -> f64 {
        (self.norm_final - self.norm_initial).abs() / self.norm_initial
    }
}

struct Geometry {
    fixed: f64,
    /// signed distance from the fixed to the moving wall
    d: f64,
    d_rate: f64,
}

fn geometry(well: &WellConfig, t: f64) -> Result<Geometry> {
    let fixed = well.fixed_wall_position();
    let d = well.wall_position(t)? - fixed;
    Ok(Geometry { fixed, d, d_rate: well.wall_velocity() })
}

/// Field values ordered by `σ` from the fixed wall.
fn to_sigma_order(values: &[Amplitude], d: f64) -> Vec<Amplitude> {
    let mut v = values.to_vec();
    if d < 0.0 {
        v.reverse();
    }
    v
}

/// Propagates `initial`, sampled on the well at `t_start` with zero
/// endpoints, to `t_end`.
pub fn propagate(initial: &SampledField, pc: &PropagationConfig) -> Result<Propagation> {
    pc.validate()?;
    let n = pc.n_space;
    if initial.n_points() != n + 1 {
        return Err(Error::GridMismatch);
    }
    let (lo, hi) = pc.well.interval(pc.t_start)?;
    if initial.t != pc.t_start || initial.x_min != lo || initial.x_max != hi {
        return Err(Error::GridMismatch);
    }
    let max0 = initial.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let ends = initial.values[0].norm().max(initial.values[n].norm());
    if ends > ENDPOINT_TOL * max0 {
        return Err(Error::InvalidConfig("initial field must vanish at the walls"));
    }

    let h = 1.0 / n as f64;
    let sigma = |j: usize| j as f64 * h;
    let g0 = geometry(&pc.well, pc.t_start)?;
    let mut phi: Vec<Amplitude> = to_sigma_order(&initial.values, g0.d).iter().map(|v| v * g0.d.abs().sqrt()).collect();
    let norm_initial = discrete_norm(&phi, h);
    let steps = pc.steps();
    let dt = if steps == 0 { 0.0 } else { (pc.t_end - pc.t_start) / steps as f64 };
    let mut non_dominant_steps = 0;

    let interior = n - 1;
    let mut a = Tridiagonal {
        lower: alloc::vec![Complex64::new(0.0, 0.0); interior - 1],
        diag: alloc::vec![Complex64::new(0.0, 0.0); interior],
        upper: alloc::vec![Complex64::new(0.0, 0.0); interior - 1],
    };
    let mut b = a.clone();
    let i = Complex64::i();
    for step in 0..steps {
        let t_mid = pc.t_start + (step as f64 + 0.5) * dt;
        let g = geometry(&pc.well, t_mid)?;
        let kinetic = 1.0 / (g.d * g.d * h * h);
        let drift = g.d_rate / g.d;
        for r in 0..interior {
            let j = r + 1;
            let x = g.fixed + g.d * sigma(j);
            let v = pc
                .family
                .potential(x, t_mid, &pc.well)?
                .finite()
                .ok_or(Error::StencilOutOfDomain { x, t: t_mid })?;
            let h_diag = Complex64::new(2.0 * kinetic + v, 0.0);
            a.diag[r] = 1.0 + i * (0.5 * dt) * h_diag;
            b.diag[r] = 1.0 - i * (0.5 * dt) * h_diag;
            if r + 1 < interior {
                // H[j][j+1] and H[j+1][j] = conj
                let k_up = (sigma(j) + sigma(j + 1)) / (4.0 * h);
                let h_up = Complex64::new(-kinetic, drift * k_up);
                let h_low = h_up.conj();
                a.upper[r] = i * (0.5 * dt) * h_up;
                b.upper[r] = -i * (0.5 * dt) * h_up;
                a.lower[r] = i * (0.5 * dt) * h_low;
                b.lower[r] = -i * (0.5 * dt) * h_low;
            }
        }
        if !a.is_diagonally_dominant() {
            non_dominant_steps += 1;
        }
        let rhs = b.mul_vec(&phi[1..n]);
        let next = solve_tridiagonal(&a, &rhs)?;
        phi[1..n].copy_from_slice(&next);
        let peak = phi.iter().fold(0.0f64, |m, v| m.max(v.norm())) / g.d.abs().sqrt();
        if !(peak <= BLOWUP_FACTOR * max0) {
            return Err(Error::UnstableRun { t: t_mid + 0.5 * dt, amplitude: peak });
        }
    }

    let g1 = geometry(&pc.well, pc.t_end)?;
    let scale = g1.d.abs().sqrt().recip();
    let psi: Vec<Amplitude> = to_sigma_order(&phi, g1.d).iter().map(|v| v * scale).collect();
    let norm_final = discrete_norm(&phi, h);
    let (lo, hi) = pc.well.interval(pc.t_end)?;
    let field = if steps == 0 { initial.clone() } else { SampledField::new(pc.t_end, lo, hi, psi)? };
    Ok(Propagation { field, steps, norm_initial, norm_final, non_dominant_steps })
}

fn discrete_norm(values: &[Amplitude], h: f64) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum::<f64>() * h
}

/// Trapezoid weight of node `i` out of `n` with spacing `h`.
fn trapezoid_weight(i: usize, n: usize, h: f64) -> f64 {
    if i == 0 || i + 1 == n {
        0.5 * h
    } else {
        h
    }
}

/// `√(Σ wi |ai − bi|²)` with trapezoid weights.
pub fn l2_distance(a: &SampledField, b: &SampledField) -> Result<f64> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch);
    }
    let n = a.n_points();
    let h = a.spacing();
    Ok(a.values
        .iter()
        .zip(&b.values)
        .enumerate()
        .map(|(i, (x, y))| trapezoid_weight(i, n, h) * (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// `√(Σ wi |ai|²)` with trapezoid weights.
pub fn l2_norm(a: &SampledField) -> f64 {
    let n = a.n_points();
    let h = a.spacing();
    a.values.iter().enumerate().map(|(i, v)| trapezoid_weight(i, n, h) * v.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖ / ‖b‖`.
pub fn relative_l2_error(a: &SampledField, b: &SampledField) -> Result<f64> {
    Ok(l2_distance(a, b)? / l2_norm(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Branch;

    fn sample_phi(n: u32, t: f64, well: &WellConfig, points: usize) -> SampledField {
        let (lo, hi) = well.interval(t).unwrap();
        SampledField::sample(t, lo, hi, points, |x| crate::point_transform::lift_wavefunction(n, x, t, well)).unwrap()
    }

    #[test]
    fn zero_duration_is_identity() {
        let w = WellConfig::default();
        let init = sample_phi(1, 0.25, &w, 257);
        let pc = PropagationConfig::new(FamilyId::MovingBox, w, 256, 1e-3, 0.25, 0.25).unwrap();
        let out = propagate(&init, &pc).unwrap();
        assert_eq!(out.field, init);
        assert_eq!(out.steps, 0);
    }

    #[test]
    fn config_invariants() {
        let w = WellConfig::default();
        assert!(PropagationConfig::new(FamilyId::MovingBox, w, 32, 1e-3, 0.25, 1.0).is_err());
        assert!(PropagationConfig::new(FamilyId::MovingBox, w, 128, 0.1, 0.25, 1.0).is_err());
        assert!(PropagationConfig::new(FamilyId::MovingBox, w, 128, 1e-3, 1.0, 0.25).is_err());
    }

    #[test]
    fn grid_mismatch() {
        let w = WellConfig::default();
        let init = sample_phi(1, 0.25, &w, 100);
        let pc = PropagationConfig::new(FamilyId::MovingBox, w, 256, 1e-3, 0.25, 0.5).unwrap();
        assert_eq!(propagate(&init, &pc), Err(Error::GridMismatch));
        let other = sample_phi(1, 0.5, &w, 100);
        assert_eq!(l2_distance(&init, &other), Err(Error::GridMismatch));
    }

    #[test]
    fn l2_examples() {
        let a = sample_phi(2, 0.5, &WellConfig::default(), 401);
        assert_eq!(l2_distance(&a, &a).unwrap(), 0.0);
        let neg = SampledField { values: a.values.iter().map(|v| -v).collect(), ..a.clone() };
        assert!((l2_distance(&a, &neg).unwrap() - 2.0 * l2_norm(&a)).abs() < 1e-14);
    }

    #[test]
    fn short_run_tracks_closed_form() {
        let w = WellConfig::default();
        let init = sample_phi(1, 0.25, &w, 401);
        let pc = PropagationConfig::new(FamilyId::MovingBox, w, 400, 1e-3, 0.25, 0.4).unwrap();
        let out = propagate(&init, &pc).unwrap();
        let exact = sample_phi(1, 0.4, &w, 401);
        assert!(relative_l2_error(&out.field, &exact).unwrap() < 5e-3);
        assert!(out.norm_drift() < 1e-12);
    }

    #[test]
    fn general_gauge_and_contracting_branch() {
        for w in [
            WellConfig::new(1.0, 2.0, 1.0, Branch::Expanding).unwrap(),
            WellConfig::new(1.0, 1.0, 0.0, Branch::Contracting).unwrap(),
        ] {
            let (t0, t1) = if w.branch() == Branch::Expanding { (0.0, 0.1) } else { (-1.0, -0.9) };
            let init = sample_phi(2, t0, &w, 401);
            let pc = PropagationConfig::new(FamilyId::MovingBox, w, 400, 5e-4, t0, t1).unwrap();
            let out = propagate(&init, &pc).unwrap();
            let exact = sample_phi(2, t1, &w, 401);
            let err = relative_l2_error(&out.field, &exact).unwrap();
            assert!(err < 1e-2, "{err}");
        }
    }

    #[test]
    fn rejects_nonzero_endpoints() {
        let w = WellConfig::default();
        let mut init = sample_phi(1, 0.25, &w, 129);
        init.values[0] = Complex64::new(0.1, 0.0);
        let pc = PropagationConfig::new(FamilyId::MovingBox, w, 128, 1e-3, 0.25, 0.5).unwrap();
        assert!(matches!(propagate(&init, &pc), Err(Error::InvalidConfig(_))));
    }
}
