use core::ops::{Add, Mul};

use num_traits::Zero;

use crate::error::Result;

/// Central finite-difference stencil on the points `x + k h`, `k = −r..=r`.
#[derive(Debug, Clone, Copy)]
pub struct Stencil {
    /// Weights for offsets `−r..=r`; the derivative is `Σ w_k f(x + k h) / (denominator h^derivative)`.
    weights: &'static [f64],
    denominator: f64,
    derivative: u32,
    order: u32,
}

impl Stencil {
    pub const D1_O2: Stencil = Stencil { weights: &[-1.0, 0.0, 1.0], denominator: 2.0, derivative: 1, order: 2 };
    pub const D1_O4: Stencil =
        Stencil { weights: &[1.0, -8.0, 0.0, 8.0, -1.0], denominator: 12.0, derivative: 1, order: 4 };
    pub const D1_O6: Stencil = Stencil {
        weights: &[-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0],
        denominator: 60.0,
        derivative: 1,
        order: 6,
    };
    pub const D2_O2: Stencil = Stencil { weights: &[1.0, -2.0, 1.0], denominator: 1.0, derivative: 2, order: 2 };
    pub const D2_O4: Stencil =
        Stencil { weights: &[-1.0, 16.0, -30.0, 16.0, -1.0], denominator: 12.0, derivative: 2, order: 4 };
    pub const D2_O6: Stencil = Stencil {
        weights: &[2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0],
        denominator: 180.0,
        derivative: 2,
        order: 6,
    };

    pub fn radius(&self) -> usize {
        self.weights.len() / 2
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn derivative(&self) -> u32 {
        self.derivative
    }

    /// Applies the stencil to `f` around `x` with step `h`.
    pub fn apply<T, F>(&self, mut f: F, x: f64, h: f64) -> Result<T>
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> Result<T>,
    {
        let r = self.radius() as i32;
        let mut acc = T::zero();
        for (k, &w) in (-r..=r).zip(self.weights) {
            if w != 0.0 {
                acc = acc + f(x + k as f64 * h)? * w;
            }
        }
        let scale = self.denominator * h.powi(self.derivative as i32);
        Ok(acc * (1.0 / scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(x: f64, degree: i32) -> f64 {
        (0..=degree).map(|k| (k as f64 + 1.0) * x.powi(k)).sum()
    }

    #[test]
    fn exact_on_polynomials_up_to_order() {
        let cases = [
            (Stencil::D1_O2, 2),
            (Stencil::D1_O4, 4),
            (Stencil::D1_O6, 6),
            (Stencil::D2_O2, 3),
            (Stencil::D2_O4, 5),
            (Stencil::D2_O6, 7),
        ];
        let x: f64 = 0.3;
        for (s, degree) in cases {
            let exact: f64 = match s.derivative() {
                1 => (1..=degree).map(|k| (k as f64 + 1.0) * k as f64 * x.powi(k - 1)).sum(),
                _ => (2..=degree)
                    .map(|k| (k as f64 + 1.0) * (k * (k - 1)) as f64 * x.powi(k - 2))
                    .sum(),
            };
            let got: f64 = s.apply(|y| Ok(poly(y, degree)), x, 0.1).unwrap();
            assert!((got - exact).abs() < 1e-9 * exact.abs().max(1.0), "{s:?}: {got} vs {exact}");
        }
    }

    #[test]
    fn observed_orders_on_sine() {
        for s in [Stencil::D1_O4, Stencil::D1_O6, Stencil::D2_O4, Stencil::D2_O6] {
            let exact = if s.derivative() == 1 { 1.0f64.cos() } else { -1.0f64.sin() };
            let err = |h: f64| {
                let v: f64 = s.apply(|y| Ok(y.sin()), 1.0, h).unwrap();
                (v - exact).abs()
            };
            let p = (err(0.1) / err(0.05)).log2();
            assert!((p - s.order() as f64).abs() < 0.2, "{s:?} observed {p}");
        }
    }
}
