//! Integral binary quadratic forms `aX² + bXY + cY²` of positive non-square
//! discriminant, their `SL2(Z)` action, automorphs and reduction cycles.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `aX² + bXY + cY²` with integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// `b² - 4ac`.
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// True iff the discriminant is positive and not a perfect square.
    pub fn is_admissible(&self) -> bool {
        let d = self.discriminant();
        d > 0 && !is_square(d)
    }

    /// Error describing why the form is inadmissible, if it is.
    pub fn check_admissible(&self) -> Result<()> {
        let d = self.discriminant();
        if d <= 0 {
            Err(Error::NonPositiveDiscriminant(d))
        } else if is_square(d) {
            Err(Error::SquareDiscriminant(d))
        } else {
            Ok(())
        }
    }

    /// `gcd(a, b, c)`.
    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    /// `(Q∘M)(X, Y) = Q(αX + βY, γX + δY)` for `M = (α β; γ δ)`.
    ///
    /// This is a right action: `act(act(Q, M), N) = act(Q, M·N)`.
    pub fn act(&self, m: &IntMatrix) -> Result<QuadForm> {
        let det = m.det();
        if det != 1 {
            return Err(Error::NotUnimodular(det));
        }
        let big = BigInt::from;
        let (a, b, c) = (big(self.a), big(self.b), big(self.c));
        let (al, be, ga, de) = (big(m.a), big(m.b), big(m.c), big(m.d));
        let na = &a * &al * &al + &b * &al * &ga + &c * &ga * &ga;
        let nb = 2 * &a * &al * &be + &b * (&al * &de + &be * &ga) + 2 * &c * &ga * &de;
        let nc = &a * &be * &be + &b * &be * &de + &c * &de * &de;
        let fit = |v: BigInt| v.to_i64().ok_or(Error::Overflow("form action"));
        Ok(QuadForm::new(fit(na)?, fit(nb)?, fit(nc)?))
    }

    /// Evaluate `Q∘M` for a real matrix, returning real coefficients `[a, b, c]`.
    pub fn act_real(&self, m: &RealMatrix) -> [f64; 3] {
        let (a, b, c) = (self.a as f64, self.b as f64, self.c as f64);
        [
            a * m.a * m.a + b * m.a * m.c + c * m.c * m.c,
            2.0 * a * m.a * m.b + b * (m.a * m.d + m.b * m.c) + 2.0 * c * m.c * m.d,
            a * m.b * m.b + b * m.b * m.d + c * m.d * m.d,
        ]
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a as f64 * x * x + self.b as f64 * x * y + self.c as f64 * y * y
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl std::str::FromStr for QuadForm {
    type Err = Error;

    /// Parses `a,b,c` (optionally wrapped in brackets).
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let bad = || Error::InvalidParameter(format!("expected a,b,c integer triple, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut v = [0i64; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| bad())?;
        }
        Ok(QuadForm::new(v[0], v[1], v[2]))
    }
}

/// `(a b; c d)` with integer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix {
    pub const IDENTITY: IntMatrix = IntMatrix::new(1, 0, 0, 1);
    /// `z ↦ -1/z`
    pub const S: IntMatrix = IntMatrix::new(0, -1, 1, 0);
    /// `z ↦ z + 1`
    pub const T: IntMatrix = IntMatrix::new(1, 1, 0, 1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a, b, c, d }
    }

    pub fn translation(n: i64) -> Self {
        Self::new(1, n, 0, 1)
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    /// Matrix product; panics on overflow, which cannot happen for the
    /// short words used here.
    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        IntMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn checked_mul(&self, o: &IntMatrix) -> Option<IntMatrix> {
        let e = |x: i64, y: i64, u: i64, v: i64| x.checked_mul(y)?.checked_add(u.checked_mul(v)?);
        Some(IntMatrix::new(
            e(self.a, o.a, self.b, o.c)?,
            e(self.a, o.b, self.b, o.d)?,
            e(self.c, o.a, self.d, o.c)?,
            e(self.c, o.b, self.d, o.d)?,
        ))
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> IntMatrix {
        IntMatrix::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn to_real(&self) -> RealMatrix {
        RealMatrix::new(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}

/// `(a b; c d)` with real entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RealMatrix {
    pub const IDENTITY: RealMatrix = RealMatrix::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &RealMatrix) -> RealMatrix {
        RealMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> RealMatrix {
        let det = self.det();
        RealMatrix::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn max_abs_diff(&self, o: &RealMatrix) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = n.sqrt();
    r * r == n
}

/// Γ-equivalent form with `a > 0` and the matrix `M` with `act(Q, M)` equal to it.
///
/// Breadth-first search over words in `T` and `S`; the shortest word wins and
/// `T` is tried before `S` at each level.
pub fn normalize_positive_a(q: &QuadForm) -> Result<(QuadForm, IntMatrix)> {
    q.check_admissible()?;
    if q.a > 0 {
        return Ok((*q, IntMatrix::IDENTITY));
    }
    const MAX_DEPTH: usize = 24;
    let mut queue = VecDeque::from([(*q, IntMatrix::IDENTITY, 0usize)]);
    let mut seen = HashSet::from([*q]);
    while let Some((f, m, depth)) = queue.pop_front() {
        if depth >= MAX_DEPTH {
            break;
        }
        for g in [IntMatrix::T, IntMatrix::S] {
            let next = f.act(&g)?;
            let nm = m.checked_mul(&g).ok_or(Error::Overflow("normalization word"))?;
            if next.a > 0 {
                return Ok((next, nm));
            }
            if seen.insert(next) {
                queue.push_back((next, nm, depth + 1));
            }
        }
    }
    Err(Error::Precondition(format!("no positive-a form found near {q}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BigMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl BigMatrix {
    fn identity() -> Self {
        Self { a: BigInt::one(), b: BigInt::zero(), c: BigInt::zero(), d: BigInt::one() }
    }

    /// Right-multiply by `(0 -1; 1 s)`.
    fn mul_rho(&self, s: i64) -> Self {
        let s = BigInt::from(s);
        Self {
            a: self.b.clone(),
            b: -&self.a + &self.b * &s,
            c: self.d.clone(),
            d: -&self.c + &self.d * &s,
        }
    }
}

/// One step of the reduction operator: `Q ↦ Q∘(0 -1; 1 s)` with `s` chosen so
/// that the new middle coefficient `b'` is normalized for the new leading
/// coefficient `c`. Returns the new form and `s`.
fn rho(f: &QuadForm, disc: i64, root: i64) -> (QuadForm, i64) {
    let c = f.c;
    let two_c = 2 * c.abs();
    let target = -f.b;
    let bp = if c.abs() as i128 * c.abs() as i128 > disc as i128 {
        // b' ≡ -b (mod 2|c|) in (-|c|, |c|]
        let mut v = target.rem_euclid(two_c);
        if v > c.abs() {
            v -= two_c;
        }
        v
    } else {
        // b' ≡ -b (mod 2|c|) in (√D - 2|c|, √D), i.e. the largest such b' ≤ ⌊√D⌋
        root - (root - target).rem_euclid(two_c)
    };
    let s = (f.b + bp) / (2 * c);
    let nc = (bp * bp - disc) / (4 * c);
    (QuadForm::new(c, bp, nc), s)
}

/// `|√D - 2|a|| < b < √D`.
pub fn is_reduced(f: &QuadForm) -> bool {
    let d = f.discriminant() as i128;
    let b = f.b as i128;
    if b <= 0 || b * b >= d {
        return false;
    }
    let a = f.a.unsigned_abs() as i128;
    let lhs = d + 4 * a * a - b * b;
    lhs <= 0 || lhs * lhs < 16 * a * a * d
}

/// Reduce an admissible form by repeated `rho`, returning the reduced form and
/// the accumulated matrix `M` with `act(Q, M)` equal to it.
pub fn reduce(q: &QuadForm) -> Result<(QuadForm, IntMatrix)> {
    q.check_admissible()?;
    let disc = q.discriminant();
    let root = disc.sqrt();
    let mut f = *q;
    let mut m = IntMatrix::IDENTITY;
    let mut steps = 0;
    while !is_reduced(&f) {
        let (next, s) = rho(&f, disc, root);
        m = m
            .checked_mul(&IntMatrix::new(0, -1, 1, s))
            .ok_or(Error::Overflow("reduction"))?;
        f = next;
        steps += 1;
        if steps > 10_000 {
            return Err(Error::Precondition(format!("reduction of {q} did not terminate")));
        }
    }
    Ok((f, m))
}

/// The cycle of reduced forms containing the reduced form `f`.
pub fn reduction_cycle(f: &QuadForm) -> Vec<QuadForm> {
    let disc = f.discriminant();
    let root = disc.sqrt();
    let mut out = vec![*f];
    let mut cur = rho(f, disc, root).0;
    while cur != *f {
        out.push(cur);
        cur = rho(&cur, disc, root).0;
    }
    out
}

/// Fundamental solution `(t, u)` of `t² - D·u² = 4` with `t, u > 0`.
///
/// Computed exactly from the reduction cycle of the principal form: the
/// product of the cycle matrices generates the automorphism group of that
/// form, and its entries encode `(t, u)`.
pub fn pell_fundamental(d: i64) -> Result<(BigInt, BigInt)> {
    if d <= 0 {
        return Err(Error::NonPositiveDiscriminant(d));
    }
    if is_square(d) {
        return Err(Error::SquareDiscriminant(d));
    }
    // Discriminants ≡ 2, 3 (mod 4) carry no forms; solutions there have even
    // t and u and correspond to the discriminant 4D.
    let (disc, u_scale) = if matches!(d.rem_euclid(4), 0 | 1) { (d, 1) } else { (4 * d, 2) };
    let root = disc.sqrt();
    let b0 = if (root - disc).rem_euclid(2) == 0 { root } else { root - 1 };
    let principal = QuadForm::new(1, b0, (b0 * b0 - disc) / 4);
    debug_assert!(is_reduced(&principal));

    let mut m = BigMatrix::identity();
    let mut f = principal;
    loop {
        let (next, s) = rho(&f, disc, root);
        m = m.mul_rho(s);
        f = next;
        if f == principal {
            break;
        }
    }
    // m = ((t - b0·u)/2, -c0·u; u, (t + b0·u)/2)
    let mut t = &m.a + &m.d;
    let mut u = m.c.clone();
    if t.is_negative() {
        t = -t;
        u = -u;
    }
    let u = u.abs() * BigInt::from(u_scale);
    debug_assert_eq!(&t * &t - BigInt::from(d) * &u * &u, BigInt::from(4));
    Ok((t, u))
}

/// Everything needed to parametrize the closed geodesic of a form with `a > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicFrame {
    pub form: QuadForm,
    pub discriminant: i64,
    /// Left endpoint `(-b - √D)/(2a)` of the semicircle.
    pub w: f64,
    /// Right endpoint `(-b + √D)/(2a)`.
    pub w_prime: f64,
    /// `a^{1/2} D^{-1/4} (w' w; 1 1)`, sending `0 ↦ w` and `∞ ↦ w'`.
    pub sigma: RealMatrix,
    /// `ε > 1` with `σ⁻¹·automorph·σ = diag(ε, ε⁻¹)`.
    pub eps: f64,
    /// Generator of the stabilizer of the form in `SL2(Z)` (up to sign).
    pub automorph: IntMatrix,
    /// Fundamental `(t, u)` for the primitive part of the form.
    pub pell: (BigInt, BigInt),
}

impl GeodesicFrame {
    /// Upper limit `ε²` of the parametrizing integral.
    pub fn eps_sq(&self) -> f64 {
        self.eps * self.eps
    }

    /// Hyperbolic length `2·log ε` of the closed geodesic.
    pub fn length(&self) -> f64 {
        2.0 * self.eps.ln()
    }
}

/// Geodesic frame of an admissible form with `a > 0`.
///
/// For an imprimitive form `g·Q'` the stabilizer is that of `Q'`, so the
/// automorph comes from the Pell solution for `D / g²`.
pub fn frame(q: &QuadForm) -> Result<GeodesicFrame> {
    q.check_admissible()?;
    if q.a <= 0 {
        return Err(Error::NonPositiveLeading(q.a));
    }
    let d = q.discriminant();
    let g = q.content();
    let prim = QuadForm::new(q.a / g, q.b / g, q.c / g);
    let dp = prim.discriminant();
    let (t, u) = pell_fundamental(dp)?;

    let big = |x: i64| BigInt::from(x);
    let two = big(2);
    let m11 = (&t - big(prim.b) * &u).div_floor(&two);
    let m12 = -big(prim.c) * &u;
    let m21 = big(prim.a) * &u;
    let m22 = (&t + big(prim.b) * &u).div_floor(&two);
    let fit = |v: &BigInt| v.to_i64().ok_or(Error::Overflow("automorph"));
    let automorph = IntMatrix::new(fit(&m11)?, fit(&m12)?, fit(&m21)?, fit(&m22)?);

    let sqrt_d = (d as f64).sqrt();
    let a = q.a as f64;
    let w = (-(q.b as f64) - sqrt_d) / (2.0 * a);
    let w_prime = (-(q.b as f64) + sqrt_d) / (2.0 * a);
    let scale = a.sqrt() / sqrt_d.sqrt();
    let sigma = RealMatrix::new(scale * w_prime, scale * w, scale, scale);
    let eps = 0.5 * (t.to_f64().unwrap_or(f64::INFINITY) + u.to_f64().unwrap_or(f64::INFINITY) * (dp as f64).sqrt());

    Ok(GeodesicFrame { form: *q, discriminant: d, w, w_prime, sigma, eps, automorph, pell: (t, u) })
}

/// `log ε` for the fundamental solution of discriminant `d`, robust for
/// solutions too large for `f64` arithmetic on `t + u√D` directly.
pub fn log_fundamental_unit(d: i64) -> Result<f64> {
    let (t, u) = pell_fundamental(d)?;
    let bits = t.bits().saturating_sub(900);
    let shift = |x: &BigInt| (x >> bits).to_f64().unwrap_or(f64::INFINITY);
    let val = shift(&t) + shift(&u) * (d as f64).sqrt();
    Ok(val.ln() + bits as f64 * std::f64::consts::LN_2 - std::f64::consts::LN_2)
}

/// One representative (with `a > 0`) per `SL2(Z)` class of forms of
/// discriminant `d`, primitive or not.
///
/// Reduced forms are grouped into `rho` cycles; each cycle is one proper
/// class. The representative is the lexicographically smallest member with
/// `a > 0`, and the output is sorted lexicographically.
pub fn enumerate_classes(d: i64) -> Result<Vec<QuadForm>> {
    if d <= 0 {
        return Err(Error::NonPositiveDiscriminant(d));
    }
    if is_square(d) {
        return Err(Error::SquareDiscriminant(d));
    }
    if !matches!(d.rem_euclid(4), 0 | 1) {
        return Ok(Vec::new());
    }
    let root = d.sqrt();
    let mut reduced = BTreeSet::new();
    let mut b = if (root - d).rem_euclid(2) == 0 { root } else { root - 1 };
    while b > 0 {
        let ac = (b * b - d) / 4;
        let n = ac.abs();
        for a in 1..=n {
            if n % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let f = QuadForm::new(sa, b, ac / sa);
                if is_reduced(&f) {
                    reduced.insert(f);
                }
            }
        }
        b -= 2;
    }
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for f in &reduced {
        if seen.contains(f) {
            continue;
        }
        let cycle = reduction_cycle(f);
        seen.extend(cycle.iter().copied());
        if let Some(rep) = cycle.iter().filter(|g| g.a > 0).min() {
            reps.push(*rep);
        }
    }
    reps.sort();
    Ok(reps)
}
