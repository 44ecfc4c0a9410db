use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex tridiagonal matrix stored by diagonals.
///
/// `lower[i]` couples row `i + 1` to column `i`; `upper[i]` couples row `i`
/// to column `i + 1`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub lower: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub upper: Vec<Complex64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Strict row diagonal dominance, `|d_i| > |l_i| + |u_i|` for every row.
    pub fn is_diagonally_dominant(&self) -> bool {
        let n = self.diag.len();
        (0..n).all(|i| {
            let l = if i > 0 { self.lower[i - 1].norm() } else { 0.0 };
            let u = if i + 1 < n { self.upper[i].norm() } else { 0.0 };
            self.diag[i].norm() > l + u
        })
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.upper[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// Thomas algorithm without pivoting.
pub fn solve_tridiagonal(m: &Tridiagonal, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = m.diag.len();
    if n == 0 || rhs.len() != n || m.lower.len() + 1 != n || m.upper.len() + 1 != n {
        return Err(Error::InvalidConfig("tridiagonal system has inconsistent sizes"));
    }
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut denom = m.diag[0];
    if denom.norm() == 0.0 {
        return Err(Error::InvalidConfig("zero pivot in tridiagonal solve"));
    }
    c.push(if n > 1 { m.upper[0] / denom } else { Complex64::new(0.0, 0.0) });
    d.push(rhs[0] / denom);
    for i in 1..n {
        denom = m.diag[i] - m.lower[i - 1] * c[i - 1];
        if denom.norm() == 0.0 {
            return Err(Error::InvalidConfig("zero pivot in tridiagonal solve"));
        }
        c.push(if i + 1 < n { m.upper[i] / denom } else { Complex64::new(0.0, 0.0) });
        d.push((rhs[i] - m.lower[i - 1] * d[i - 1]) / denom);
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_small_system() {
        let m = Tridiagonal {
            lower: alloc::vec![c(1.0, 0.0), c(0.0, 1.0)],
            diag: alloc::vec![c(4.0, 1.0), c(4.0, 0.0), c(3.0, -1.0)],
            upper: alloc::vec![c(1.0, -1.0), c(0.5, 0.0)],
        };
        let x = alloc::vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.25, -3.0)];
        let b = m.mul_vec(&x);
        let got = solve_tridiagonal(&m, &b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-14);
        }
        assert!(m.is_diagonally_dominant());
    }

    #[test]
    fn rejects_size_mismatch() {
        let m = Tridiagonal { lower: alloc::vec![], diag: alloc::vec![c(1.0, 0.0)], upper: alloc::vec![] };
        assert!(solve_tridiagonal(&m, &[c(1.0, 0.0), c(2.0, 0.0)]).is_err());
    }

    proptest! {
        #[test]
        fn residual_small_for_dominant_systems(
            seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 30..60)
        ) {
            let n = seed.len();
            let lower: Vec<_> = seed[1..].iter().map(|&(a, b)| c(a, b)).collect();
            let upper: Vec<_> = seed[1..].iter().map(|&(a, b)| c(b, -a)).collect();
            let diag: Vec<_> = seed.iter().map(|&(a, b)| c(3.0 + a.abs(), b)).collect();
            let m = Tridiagonal { lower, diag, upper };
            let rhs: Vec<_> = (0..n).map(|i| c(i as f64, 1.0)).collect();
            let x = solve_tridiagonal(&m, &rhs).unwrap();
            let back = m.mul_vec(&x);
            for (b, r) in back.iter().zip(&rhs) {
                prop_assert!((b - r).norm() < 1e-12 * (1.0 + r.norm()));
            }
        }
    }
}
