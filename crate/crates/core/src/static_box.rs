//! Particle in a box with fixed walls at 0 and L: the seed system.

use core::f64::consts::PI;


use crate::error::{Error, Result};

fn check_n(n: u32) -> Result<()> {
    if n < 1 {
        Err(Error::InvalidQuantumNumber { n, min: 1 })
    } else {
        Ok(())
    }
}

/// Eigenfunction `√(2/L) sin(nπy/L)`, extended by zero outside the box.
pub fn psi_static(n: u32, y: f64, length: f64) -> Result<f64> {
    check_n(n)?;
    if y <= 0.0 || y >= length {
        return Ok(0.0);
    }
    Ok((2.0 / length).sqrt() * (n as f64 * PI * y / length).sin())
}

/// Eigenvalue `(nπ/L)²`.
pub fn energy_static(n: u32, length: f64) -> Result<f64> {
    check_n(n)?;
    Ok((n as f64 * PI / length).powi(2))
}
