//! Adaptive composite Gauss-Legendre quadrature for complex integrands.
//!
//! Refinement is level-synchronous: every active panel of a level is
//! evaluated (possibly in parallel), then accepted or bisected. The final sum
//! runs over accepted panels in left-to-right order, so the result does not
//! depend on scheduling.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::numeric::{csum, gauss_legendre, CompensatedSum};
use crate::par;
use crate::{Error, Result};

/// Gauss-Legendre order used on every panel.
pub const ORDER: usize = 16;

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Relative tolerance with respect to the estimate of `∫|f|`.
    pub tol: f64,
    /// Upper bound on the number of accepted plus active panels.
    pub max_panels: usize,
    /// Width of the initial panels.
    pub initial_width: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { tol: 1e-11, max_panels: 4096, initial_width: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub abs_integral: f64,
    pub panels: usize,
}

/// One application of the rule on `[a, b]`, returning `(∫f, ∫|f|)`.
pub fn gauss_panel<F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut vals = Vec::with_capacity(ORDER);
    let mut abs = CompensatedSum::new();
    for (x, w) in nodes.iter().zip(weights) {
        let v = f(mid + half * x)? * (w * half);
        abs.add(v.norm());
        vals.push(v);
    }
    Ok((csum(vals), abs.value()))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    whole: Option<Complex64>,
}

struct Evaluated {
    left: Complex64,
    right: Complex64,
    whole: Complex64,
    abs: f64,
}

/// `∫_a^b f` to relative accuracy `opts.tol`.
///
/// Each panel compares the rule on the whole panel against the rule on its
/// two halves; the halves' sum is kept and the difference is the error
/// estimate. A panel is accepted when its error is below its width's share of
/// `tol·∫|f|`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64> + Sync + Send,
{
    if !(opts.tol > 0.0) || !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad quadrature request on [{a}, {b}] with tol {}", opts.tol)));
    }
    if a == b {
        return Ok(QuadResult { value: Complex64::default(), abs_error: 0.0, abs_integral: 0.0, panels: 0 });
    }
    let length = b - a;
    let n0 = ((length.abs() / opts.initial_width).ceil() as usize).clamp(1, opts.max_panels);
    let h0 = length / n0 as f64;
    let mut active: Vec<Panel> = (0..n0)
        .map(|i| Panel { a: a + h0 * i as f64, b: if i + 1 == n0 { b } else { a + h0 * (i + 1) as f64 }, whole: None })
        .collect();
    let mut accepted: Vec<(f64, Complex64, f64, f64)> = Vec::new();
    let min_width = length.abs() * 1e-12;

    while !active.is_empty() {
        let evaluated: Vec<Result<Evaluated>> = par::map_slice(&active, |p| {
            let mid = 0.5 * (p.a + p.b);
            let (left, al) = gauss_panel(&f, p.a, mid)?;
            let (right, ar) = gauss_panel(&f, mid, p.b)?;
            let whole = match p.whole {
                Some(w) => w,
                None => gauss_panel(&f, p.a, p.b)?.0,
            };
            Ok(Evaluated { left, right, whole, abs: al + ar })
        });
        let evaluated = evaluated.into_iter().collect::<Result<Vec<_>>>()?;

        let scale: f64 = accepted.iter().map(|p| p.3).sum::<f64>() + evaluated.iter().map(|e| e.abs).sum::<f64>();
        let budget = opts.tol * scale.max(f64::MIN_POSITIVE);
        let mut next = Vec::new();
        for (p, e) in active.iter().zip(&evaluated) {
            let value = e.left + e.right;
            let err = (e.whole - value).norm();
            let share = budget * ((p.b - p.a) / length).abs();
            if err <= share || (p.b - p.a).abs() <= min_width {
                accepted.push((p.a, value, err, e.abs));
            } else {
                let mid = 0.5 * (p.a + p.b);
                next.push(Panel { a: p.a, b: mid, whole: Some(e.left) });
                next.push(Panel { a: mid, b: p.b, whole: Some(e.right) });
            }
        }
        if accepted.len() + next.len() > opts.max_panels {
            let estimate = csum(accepted.iter().map(|p| p.1)) + csum(evaluated.iter().map(|e| e.left + e.right));
            return Err(Error::QuadratureFailed { panels: opts.max_panels, estimate: estimate.norm() });
        }
        active = next;
    }

    accepted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value = csum(accepted.iter().map(|p| p.1));
    let abs_error = accepted.iter().map(|p| p.2).collect::<CompensatedSum>().value();
    let abs_integral = accepted.iter().map(|p| p.3).collect::<CompensatedSum>().value();
    Ok(QuadResult { value, abs_error, abs_integral, panels: accepted.len() })
}
