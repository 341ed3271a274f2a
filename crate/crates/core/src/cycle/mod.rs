//! Cycle integrals along closed geodesics.
//!
//! For `F` of weight `2k` and a form `Q` with `a > 0`,
//!
//! ```text
//! 𝒞(F, Q) = (-i)^k ∫_1^{ε²} F_σ(iy) y^(k-1) dy,    F_σ = F|_{2k} σ,
//! ```
//!
//! where `σ` and `ε` come from [`crate::bqf::frame`]. The integral is taken in
//! the variable `t = log y` over `[0, 2 log ε]`, which keeps the panels
//! uniform even when `ε²` is large.

mod quadrature;

pub use quadrature::{gauss_panel, integrate, QuadOptions, QuadResult, ORDER};

use num_complex::Complex64;
use serde::Serialize;

use crate::bqf::{frame, normalize_positive_a, GeodesicFrame, QuadForm, RealMatrix};
use crate::forms::{ModularObject, Operator};
use crate::numeric::{cpowi, minus_i_pow};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub panels: usize,
    pub epsilon_sq: f64,
}

/// `(F|_w σ)(iy) = (c·iy + d)^(-w)·F(σ·iy)`.
pub fn slash_at(f: &ModularObject, sigma: &RealMatrix, y: f64) -> Result<Complex64> {
    let iy = Complex64::new(0.0, y);
    let num = sigma.a * iy + sigma.b;
    let den = sigma.c * iy + sigma.d;
    Ok(cpowi(den, -f.weight()) * f.eval_reduced(num / den)?)
}

/// Frame of the `a > 0` representative of `q`'s class.
pub fn normalized_frame(q: &QuadForm) -> Result<GeodesicFrame> {
    q.check_admissible()?;
    let (qn, _) = normalize_positive_a(q)?;
    frame(&qn)
}

fn half_weight(f: &ModularObject) -> Result<i64> {
    let w = f.weight();
    if w % 2 != 0 {
        return Err(Error::InvalidParameter(format!("odd weight {w}")));
    }
    Ok(w / 2)
}

fn log_eps(fr: &GeodesicFrame) -> Result<f64> {
    let l = fr.eps.ln();
    if l.is_finite() {
        Ok(l)
    } else {
        Err(Error::Overflow("fundamental unit exceeds floating range"))
    }
}

/// `𝒞(F, Q)` with relative quadrature tolerance `tol`.
pub fn cycle_integral(f: &ModularObject, q: &QuadForm, tol: f64) -> Result<CycleResult> {
    let fr = normalized_frame(q)?;
    cycle_integral_framed(f, &fr, &QuadOptions { tol, ..Default::default() })
}

/// `𝒞(F, Q)` for a precomputed frame.
pub fn cycle_integral_framed(f: &ModularObject, fr: &GeodesicFrame, opts: &QuadOptions) -> Result<CycleResult> {
    let k = half_weight(f)?;
    let upper = 2.0 * log_eps(fr)?;
    let epsilon_sq = fr.eps_sq();
    if f.is_zero() {
        return Ok(CycleResult { value: Complex64::default(), abs_error: 0.0, panels: 0, epsilon_sq });
    }
    let sigma = fr.sigma;
    let integrand = |t: f64| -> Result<Complex64> {
        let y = t.exp();
        Ok(slash_at(f, &sigma, y)? * (k as f64 * t).exp())
    };
    let r = integrate(integrand, 0.0, upper, opts)?;
    Ok(CycleResult { value: minus_i_pow(k) * r.value, abs_error: r.abs_error, panels: r.panels, epsilon_sq })
}

/// `|ε^w·F_σ(iε²) - F_σ(i)| / max(1, |F_σ(i)|)`: the boundary term that
/// vanishes when `F` is invariant under the automorph.
pub fn closed_geodesic_check(f: &ModularObject, q: &QuadForm) -> Result<f64> {
    let fr = normalized_frame(q)?;
    let w = f.weight();
    let end = slash_at(f, &fr.sigma, fr.eps_sq())? * fr.eps.powi(w as i32);
    let start = slash_at(f, &fr.sigma, 1.0)?;
    Ok((end - start).norm() / start.norm().max(1.0))
}

/// One sample of the total-derivative relation
/// `(R F_σ)(iy) y^(1-k) + (L F_σ)(iy) y^(-k-1) = 2 d/dy [F_σ(iy) y^(1-k)]`
/// for `F` of weight `2 - 2k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeSample {
    pub y: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Evaluate the total-derivative relation at `n` points spread
/// logarithmically over `[1, ε²]`; the derivative is a fourth-order central
/// difference.
pub fn total_derivative_check(f: &ModularObject, q: &QuadForm, n: usize) -> Result<Vec<DerivativeSample>> {
    let fr = normalized_frame(q)?;
    let w = f.weight();
    if w % 2 != 0 {
        return Err(Error::InvalidParameter(format!("odd weight {w}")));
    }
    let k = (2 - w) / 2;
    let rf = f.apply(Operator::Raise)?;
    let lf = f.apply(Operator::Lower)?;
    let sigma = fr.sigma;
    let upper = 2.0 * log_eps(&fr)?;
    let g = |y: f64| -> Result<Complex64> { Ok(slash_at(f, &sigma, y)? * y.powi((1 - k) as i32)) };
    (0..n)
        .map(|j| {
            let y = (upper * (j as f64 + 0.5) / n as f64).exp();
            let lhs = slash_at(&rf, &sigma, y)? * y.powi((1 - k) as i32)
                + slash_at(&lf, &sigma, y)? * y.powi((-k - 1) as i32);
            let h = 1e-3 * y;
            let d = (-g(y + 2.0 * h)? + g(y + h)? * 8.0 - g(y - h)? * 8.0 + g(y - 2.0 * h)?) / (12.0 * h);
            let rhs = 2.0 * d;
            let scale = lhs.norm().max(rhs.norm()).max(g(y)?.norm() / y).max(f64::MIN_POSITIVE);
            Ok(DerivativeSample { y, lhs, rhs, residual: (lhs - rhs).norm() / scale })
        })
        .collect()
}
