use num_complex::Complex64;

use crate::bqf::IntMatrix;
use crate::{Error, Result};

const MAX_STEPS: usize = 10_000;

/// Move `z` into the standard fundamental domain `|Re z| ≤ 1/2, |z| ≥ 1`.
///
/// Returns `(z', γ)` with `z' = γz`, alternating translations and the
/// inversion `z ↦ -1/z`.
pub fn fd_reduce(z: Complex64) -> Result<(Complex64, IntMatrix)> {
    if !(z.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(z.im));
    }
    let mut w = z;
    let mut gamma = IntMatrix::IDENTITY;
    let diverged = || Error::ReductionDiverged { re: z.re, im: z.im };
    for _ in 0..MAX_STEPS {
        let n = w.re.round();
        if n != 0.0 {
            if n.abs() > 1e15 {
                return Err(diverged());
            }
            w.re -= n;
            gamma = IntMatrix::translation(-(n as i64)).checked_mul(&gamma).ok_or_else(diverged)?;
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            w = -w.inv();
            gamma = IntMatrix::S.checked_mul(&gamma).ok_or_else(diverged)?;
        } else {
            return Ok((w, gamma));
        }
    }
    Err(diverged())
}

/// Möbius action `(az + b)/(cz + d)`.
pub fn mobius(m: &IntMatrix, z: Complex64) -> Complex64 {
    (m.a as f64 * z + m.b as f64) / (m.c as f64 * z + m.d as f64)
}
