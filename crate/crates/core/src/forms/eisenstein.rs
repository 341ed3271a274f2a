//! Eisenstein-type coset sums `Σ_{γ ∈ Γ∞\Γ} seed|_w γ` evaluated by lattice
//! summation.
//!
//! Two evaluation routes:
//!
//! * [`SumMethod::CoprimeBox`]: the coset sum literally, over coprime bottom
//!   rows `(c, d)` with `max(|c|, |d|) ≤ N`, one per `±` pair, each lifted to
//!   a full matrix by the extended Euclidean algorithm. Works for any
//!   translation-invariant seed; the truncation error decays like
//!   `N^(2-e)`.
//! * [`SumMethod::Accelerated`]: for seeds that are sums of powers of `y`.
//!   Each slashed atom is homogeneous of degree `-e` in `(c, d)`, so the sum
//!   over all nonzero lattice points equals `ζ(e)` times the coset sum. The
//!   lattice sum is taken exactly over the box and the exterior is replaced
//!   by its midpoint-rule integral (plus the Laplacian correction), reducing
//!   the truncation error to `O(N^(-e-2))`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;

use crate::numeric::{cpowi, csum, gauss_legendre, real_pow, zeta, ComplexSum};
use crate::par;
use crate::wirtinger::TermSum;
use crate::{Error, Result};

use super::reduce::mobius;

const CHUNK: usize = 4096;
const ANGLE_NODES: usize = 48;

/// Starting truncation of the adaptive doubling.
pub const N_START: usize = 100;
/// Largest truncation the adaptive doubling will reach.
pub const N_CAP: usize = 1600;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    Accelerated,
    CoprimeBox,
}

/// A coset sum of a translation-invariant seed, truncated at `N`.
#[derive(Debug, Clone)]
pub struct EisensteinObject {
    seed: TermSum,
    truncation: usize,
    method: SumMethod,
    pairs: OnceLock<Arc<Vec<[i64; 4]>>>,
}

impl PartialEq for EisensteinObject {
    fn eq(&self, o: &Self) -> bool {
        self.seed == o.seed && self.truncation == o.truncation && self.method == o.method
    }
}

fn exponent_of(seed: &TermSum) -> Option<f64> {
    seed.max_ypow().map(|a| 2.0 * a + seed.weight() as f64)
}

impl EisensteinObject {
    /// Coset sum of `seed` truncated at `n`; pure `y`-power seeds use the
    /// accelerated route.
    pub fn new(seed: TermSum, n: usize) -> Result<Self> {
        let method = if seed.is_y_polynomial() { SumMethod::Accelerated } else { SumMethod::CoprimeBox };
        Self::with_method(seed, n, method)
    }

    pub fn with_method(seed: TermSum, n: usize, method: SumMethod) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("lattice truncation must be positive".into()));
        }
        if seed.weight() % 2 != 0 {
            return Err(Error::InvalidParameter(format!("odd weight {}", seed.weight())));
        }
        if !seed.is_translation_invariant() {
            return Err(Error::InvalidParameter("Eisenstein seed must be invariant under z -> z+1".into()));
        }
        if method == SumMethod::Accelerated && !seed.is_y_polynomial() {
            return Err(Error::InvalidParameter("accelerated summation needs a pure y-power seed".into()));
        }
        if let Some(e) = exponent_of(&seed) {
            if !(e > 2.0) {
                return Err(Error::Divergent(e));
            }
        }
        Ok(Self { seed, truncation: n, method, pairs: OnceLock::new() })
    }

    /// Choose `N` by doubling from [`N_START`] until the values at a few
    /// reference points change by less than `tol / 10`, capped at [`N_CAP`].
    pub fn adaptive(seed: TermSum, tol: f64) -> Result<Self> {
        let mut obj = Self::new(seed, N_START)?;
        if obj.seed.is_zero() {
            return Ok(obj);
        }
        let refs = [
            Complex64::new(0.0, 1.0),
            Complex64::new(-0.5, 3f64.sqrt() / 2.0),
            Complex64::new(0.31, 1.17),
            Complex64::new(0.0, 2.5),
        ];
        let mut prev: Vec<Complex64> = refs.iter().map(|z| obj.eval(*z)).collect();
        while obj.truncation < N_CAP {
            let next = obj.clone().truncated(obj.truncation * 2);
            let vals: Vec<Complex64> = refs.iter().map(|z| next.eval(*z)).collect();
            let change = prev
                .iter()
                .zip(&vals)
                .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
                .fold(0.0, f64::max);
            obj = next;
            prev = vals;
            if change < tol / 10.0 {
                break;
            }
        }
        Ok(obj)
    }

    fn truncated(mut self, n: usize) -> Self {
        self.truncation = n;
        self.pairs = OnceLock::new();
        self
    }

    pub fn seed(&self) -> &TermSum {
        &self.seed
    }

    pub fn weight(&self) -> i64 {
        self.seed.weight()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn method(&self) -> SumMethod {
        self.method
    }

    /// `2·(max seed y-power) + weight`; `None` for the zero seed.
    pub fn convergence_exponent(&self) -> Option<f64> {
        exponent_of(&self.seed)
    }

    /// Same truncation and method, new seed (used to push operators through
    /// the coset sum).
    pub fn map_seed(&self, seed: TermSum) -> Result<Self> {
        let method = if seed.is_y_polynomial() { self.method } else { SumMethod::CoprimeBox };
        Self::with_method(seed, self.truncation, method)
    }

    /// Value of the truncated sum at `z` (no fundamental-domain reduction).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.seed.is_zero() {
            return Complex64::default();
        }
        match self.method {
            SumMethod::Accelerated => self.eval_accelerated(z),
            SumMethod::CoprimeBox => self.eval_coprime(z),
        }
    }

    fn eval_accelerated(&self, z: Complex64) -> Complex64 {
        let w = self.seed.weight();
        csum(self.seed.atoms().iter().map(|atom| {
            let e = 2.0 * atom.ypow + w as f64;
            let c = atom.coeff * z.im.powf(atom.ypow);
            let lattice = homogeneous_lattice_sum(z, w, atom.ypow, self.truncation);
            c * lattice / zeta(e)
        }))
    }

    fn pairs(&self) -> Arc<Vec<[i64; 4]>> {
        self.pairs.get_or_init(|| Arc::new(coprime_rows(self.truncation as i64))).clone()
    }

    fn eval_coprime(&self, z: Complex64) -> Complex64 {
        let pairs = self.pairs();
        let w = self.seed.weight();
        let chunks = pairs.len().div_ceil(CHUNK);
        let partial = par::map_range(0, chunks, |k| {
            let slice = &pairs[k * CHUNK..((k + 1) * CHUNK).min(pairs.len())];
            let mut acc = ComplexSum::new();
            for &[a, b, c, d] in slice {
                let m = crate::bqf::IntMatrix::new(a, b, c, d);
                let j = c as f64 * z + d as f64;
                acc.add(cpowi(j, -w) * self.seed.eval_unchecked(mobius(&m, z)));
            }
            acc.value()
        });
        csum(partial)
    }
}

/// `(a, b, c, d)` with `ad - bc = 1` for every coprime `(c, d)`,
/// `0 < max(|c|, |d|) ≤ n`, one per `±` pair, sorted by `(|c| + |d|, c, d)`.
pub fn coprime_rows(n: i64) -> Vec<[i64; 4]> {
    let mut rows = Vec::new();
    for c in 0..=n {
        for d in -n..=n {
            if c == 0 && d != 1 {
                continue;
            }
            if c.gcd(&d) != 1 {
                continue;
            }
            let g = c.extended_gcd(&d);
            // c·x + d·y = 1 ⇒ (a, b) = (y, -x)
            let (x, y) = if g.gcd == 1 { (g.x, g.y) } else { (-g.x, -g.y) };
            rows.push([y, -x, c, d]);
        }
    }
    rows.sort_by_key(|r| (r[2].abs() + r[3].abs(), r[2], r[3]));
    rows
}

/// `½ Σ_{(m,n) ≠ 0} u^(-w)·|u|^(-2a)` with `u = mz + n`: exact over the box
/// `max(|m|, |n|) ≤ N`, midpoint-corrected integral outside it.
pub fn homogeneous_lattice_sum(z: Complex64, w: i64, a: f64, n: usize) -> Complex64 {
    let big_n = n as i64;
    let term = |m: i64, k: i64| {
        let u = Complex64::new(m as f64 * z.re + k as f64, m as f64 * z.im);
        let r2 = u.re * u.re + u.im * u.im;
        let hol = if w == 0 { Complex64::new(1.0, 0.0) } else { cpowi(u, -w) };
        hol * real_pow(r2, -a)
    };
    let rows = par::map_range(0, n + 1, |m| {
        let m = m as i64;
        let mut acc = ComplexSum::new();
        if m == 0 {
            for k in (1..=big_n).rev() {
                acc.add(term(0, k));
            }
        } else {
            for k in -big_n..=big_n {
                acc.add(term(m, k));
            }
        }
        acc.value()
    });
    let boxed = csum(rows.into_iter().rev());
    boxed + 0.5 * exterior_integral(z, w, a, n as f64 + 0.5)
}

/// Midpoint-rule value of the lattice sum outside `[-L, L]²`:
/// `∫_ext h - (1/24)∫_ext Δh`, both reduced to angular integrals by
/// homogeneity.
fn exterior_integral(z: Complex64, w: i64, a: f64, l: f64) -> Complex64 {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (xs, ws) = NODES.get_or_init(|| gauss_legendre(ANGLE_NODES));
    let e = 2.0 * a + w as f64;
    let p = -(w as f64) - a;
    let q = -a;
    let zz = z * z + 1.0;
    let zbzb = z.conj() * z.conj() + 1.0;
    let mixed = z.norm_sqr() + 1.0;
    let mut first = ComplexSum::new();
    let mut second = ComplexSum::new();
    // h is even, so the full circle is twice the half turn [-π/4, 3π/4).
    for sector in 0..2 {
        let centre = sector as f64 * PI / 2.0;
        for (x, wt) in xs.iter().zip(ws) {
            let theta = centre + x * PI / 4.0;
            let (s, c) = theta.sin_cos();
            let u = c * z + s;
            let ub = u.conj();
            let r2 = u.norm_sqr();
            let h = if w == 0 { Complex64::new(1.0, 0.0) } else { cpowi(u, -w) } * real_pow(r2, -a);
            let lap = h
                * (p * (p - 1.0) * zz / (u * u) + 2.0 * p * q * mixed / r2 + q * (q - 1.0) * zbzb / (ub * ub));
            let edge = c.abs().max(s.abs());
            let dt = wt * PI / 4.0;
            first.add(h * edge.powf(e - 2.0) * dt);
            second.add(lap * edge.powf(e) * dt);
        }
    }
    let first = 2.0 * first.value() / (e - 2.0);
    let second = 2.0 * second.value() / e;
    first * l.powf(2.0 - e) - second * l.powf(-e) / 24.0
}

/// `E(z, s)`: seed `y^s`, weight 0, eigenvalue `s(1 - s)`.
pub fn real_analytic_seed(s: f64) -> Result<TermSum> {
    if !(s > 1.0) {
        return Err(Error::Divergent(2.0 * s));
    }
    Ok(TermSum::single(crate::wirtinger::Atom::power(1.0, s), 0))
}

/// Harmonic Eisenstein series of weight `2 - 2k`: seed `y^(2k-1)`.
pub fn harmonic_seed(k: i64) -> Result<TermSum> {
    if k < 2 {
        return Err(Error::Divergent(2.0 * k as f64));
    }
    Ok(TermSum::single(crate::wirtinger::Atom::power(1.0, (2 * k - 1) as f64), 2 - 2 * k))
}

/// Holomorphic Eisenstein series `E_k` (constant term 1): seed `1`.
pub fn holomorphic_seed(weight: i64) -> Result<TermSum> {
    if weight <= 2 || weight % 2 != 0 {
        return Err(Error::Divergent(weight as f64));
    }
    Ok(TermSum::constant(1.0, weight))
}
