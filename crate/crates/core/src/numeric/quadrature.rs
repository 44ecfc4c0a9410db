use core::f64::consts::PI;
use core::ops::{Add, Mul};

use alloc::vec::Vec;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("Gauss-Legendre rule needs at least one node"));
        }
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]` with a single panel.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> Result<T>
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> Result<T>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x)? * w;
        }
        Ok(acc * half)
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn composite<T, F>(&self, a: f64, b: f64, panels: usize, mut f: F) -> Result<T>
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> Result<T>,
    {
        if panels == 0 {
            return Err(Error::InvalidConfig("composite quadrature needs at least one panel"));
        }
        let h = (b - a) / panels as f64;
        let mut acc = T::zero();
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            acc = acc + self.integrate(lo, hi, &mut f)?;
        }
        Ok(acc)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, dp)
}

/// Adaptive bisection driven by a 10-point Gauss–Legendre rule.
///
/// A panel is accepted when its estimate agrees with the sum over its two
/// halves within `tol` scaled by the panel's share of the interval.
pub fn adaptive_gauss_legendre<F>(a: f64, b: f64, tol: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let rule = GaussLegendre::new(10)?;
    if a == b {
        return Ok(0.0);
    }
    let width = (b - a).abs();
    let whole = rule.integrate(a, b, &f)?;
    let mut stack = alloc::vec![(a, b, whole, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, estimate, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &f)?;
        let right = rule.integrate(mid, hi, &f)?;
        let refined = left + right;
        let budget = tol * ((hi - lo).abs() / width);
        if (refined - estimate).abs() <= budget || depth >= 40 {
            total += refined;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

/// Composite Simpson rule with `intervals` (rounded up to even) subintervals.
pub fn composite_simpson<F>(a: f64, b: f64, intervals: usize, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = (intervals.max(2) + 1) & !1;
    if a == b {
        return Ok(0.0);
    }
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64)?;
    }
    Ok(acc * h / 3.0)
}
