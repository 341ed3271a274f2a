use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numeric::ComplexSum;
use crate::wirtinger::{Atom, TermSum};
use crate::{Error, Result};

/// Truncated q-expansion `Σ_{n=0}^{M} a_n e^(2πinz)` of a declared weight.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    pub weight: i64,
    pub coeffs: Vec<Complex64>,
}

/// `σ_k(n) = Σ_{d | n} d^k`.
pub fn divisor_sigma(k: u32, n: u64) -> u64 {
    let mut s = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += d.pow(k);
            let e = n / d;
            if e != d {
                s += e.pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Coefficients of `q·∏_{n≥1}(1 - qⁿ)^24` up to `q^m`.
fn delta_coeffs(m: usize) -> Vec<i128> {
    // ∏(1 - qⁿ)^24 truncated at degree m - 1, then shifted by one
    let deg = m.saturating_sub(1);
    let mut p = vec![0i128; deg + 1];
    p[0] = 1;
    for n in 1..=deg {
        for _ in 0..24 {
            for i in (n..=deg).rev() {
                p[i] -= p[i - n];
            }
        }
    }
    let mut out = vec![0i128; m + 1];
    out[1..].copy_from_slice(&p[..m]);
    out
}

impl QExpansion {
    pub fn new(weight: i64, coeffs: Vec<Complex64>) -> Self {
        Self { weight, coeffs }
    }

    /// Truncation order `M`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `E2`, `E4`, `E6` (normalized with constant term 1) or `Delta`.
    pub fn standard(name: &str, m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter("q-expansion truncation must be at least 1".into()));
        }
        let eis = |weight: i64, c: f64, k: u32| {
            let mut v = vec![Complex64::new(1.0, 0.0)];
            v.extend((1..=m as u64).map(|n| Complex64::new(c * divisor_sigma(k, n) as f64, 0.0)));
            QExpansion::new(weight, v)
        };
        match name {
            "E2" => Ok(eis(2, -24.0, 1)),
            "E4" => Ok(eis(4, 240.0, 3)),
            "E6" => Ok(eis(6, -504.0, 5)),
            "Delta" => Ok(QExpansion::new(
                12,
                delta_coeffs(m).into_iter().map(|c| Complex64::new(c as f64, 0.0)).collect(),
            )),
            other => Err(Error::UnknownExpansion(other.to_string())),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let mut acc = ComplexSum::new();
        let mut qn = Complex64::new(1.0, 0.0);
        for a in &self.coeffs {
            acc.add(a * qn);
            qn *= q;
        }
        acc.value()
    }

    /// Bound on the neglected tail at height `y`, assuming
    /// `|a_n| ≤ C·n^weight` with `C` fitted to the stored coefficients.
    pub fn tail_bound(&self, y: f64) -> f64 {
        let w = self.weight.max(1) as f64;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a.norm() / (n as f64).powf(w))
            .fold(0.0, f64::max);
        let r = (-2.0 * PI * y).exp();
        let m = self.truncation();
        (m + 1..m + 400).map(|n| c * (n as f64).powf(w) * r.powi(n as i32)).sum()
    }

    /// The same function as a [`TermSum`] of holomorphic atoms.
    pub fn to_terms(&self) -> TermSum {
        let atoms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| Atom::q_power(*a, n as i64))
            .collect();
        TermSum::new(atoms, self.weight)
    }
}
