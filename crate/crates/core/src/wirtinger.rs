//! Closed-form action of the Maass operators on finite sums of atoms
//! `c·y^a·exp(αz + βz̄)`.
//!
//! Wirtinger conventions: `∂y/∂z = 1/(2i)`, `∂y/∂z̄ = i/2`,
//! `∂x/∂z = ∂x/∂z̄ = 1/2`. Under these,
//!
//! * `∂z  (y^a e) = (a/(2i))·y^(a-1) e + α·y^a e`
//! * `∂z̄ (y^a e) = (a·i/2)·y^(a-1) e + β·y^a e`
//!
//! and the operators on weight `w` are
//! `L = -2i y² ∂z̄`, `R_w = 2i ∂z + w/y`, `ξ_w F = 2i y^w conj(∂z̄ F)`,
//! `Δ_w = -(L_{w+2} R_w + w) = -R_{w-2} L_w`, `𝒟 = (2πi)⁻¹ ∂z`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numeric::ComplexSum;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative size below which a merged coefficient counts as cancelled.
pub const ZERO_THRESHOLD: f64 = 1e-15;

/// `coeff · y^ypow · exp(alpha·z + beta·z̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub coeff: Complex64,
    pub ypow: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Atom {
    pub fn new(coeff: Complex64, ypow: f64, alpha: Complex64, beta: Complex64) -> Self {
        Self { coeff, ypow, alpha, beta }
    }

    /// `c·y^a` with no exponential factor.
    pub fn power(coeff: f64, ypow: f64) -> Self {
        Self::new(coeff.into(), ypow, Complex64::default(), Complex64::default())
    }

    /// `c·q^m = c·exp(2πi m z)`.
    pub fn q_power(coeff: Complex64, m: i64) -> Self {
        Self::new(coeff, 0.0, Complex64::new(0.0, 2.0 * PI * m as f64), Complex64::default())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let y = z.im;
        let e = self.alpha * z + self.beta * z.conj();
        self.coeff * y.powf(self.ypow) * e.exp()
    }

    fn key_cmp(&self, o: &Atom) -> Ordering {
        self.ypow
            .total_cmp(&o.ypow)
            .then(self.alpha.re.total_cmp(&o.alpha.re))
            .then(self.alpha.im.total_cmp(&o.alpha.im))
            .then(self.beta.re.total_cmp(&o.beta.re))
            .then(self.beta.im.total_cmp(&o.beta.im))
    }

    fn same_key(&self, o: &Atom) -> bool {
        let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * u.abs().max(v.abs()).max(1.0);
        close(self.ypow, o.ypow)
            && close(self.alpha.re, o.alpha.re)
            && close(self.alpha.im, o.alpha.im)
            && close(self.beta.re, o.beta.re)
            && close(self.beta.im, o.beta.im)
    }

    fn conj(&self) -> Atom {
        Atom::new(self.coeff.conj(), self.ypow, self.beta.conj(), self.alpha.conj())
    }
}

/// Finite sum of atoms with a declared even weight, kept in normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSum {
    atoms: Vec<Atom>,
    weight: i64,
}

impl TermSum {
    /// Builds the normal form: sorted by `(ypow, alpha, beta)`, like keys
    /// merged, cancelled coefficients dropped.
    pub fn new(atoms: Vec<Atom>, weight: i64) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().filter(|a| a.coeff != Complex64::default()).collect();
        atoms.sort_by(|a, b| a.key_cmp(b));
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        let mut scale = 0.0;
        for atom in atoms {
            match out.last_mut() {
                Some(last) if last.same_key(&atom) => {
                    last.coeff += atom.coeff;
                    scale += atom.coeff.norm();
                }
                _ => {
                    if let Some(last) = out.last() {
                        if last.coeff.norm() <= ZERO_THRESHOLD * scale {
                            out.pop();
                        }
                    }
                    scale = atom.coeff.norm();
                    out.push(atom);
                }
            }
        }
        if let Some(last) = out.last() {
            if last.coeff.norm() <= ZERO_THRESHOLD * scale {
                out.pop();
            }
        }
        Self { atoms: out, weight }
    }

    pub fn zero(weight: i64) -> Self {
        Self { atoms: Vec::new(), weight }
    }

    pub fn constant(c: f64, weight: i64) -> Self {
        Self::new(vec![Atom::power(c, 0.0)], weight)
    }

    pub fn single(atom: Atom, weight: i64) -> Self {
        Self::new(vec![atom], weight)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Same atoms under a different declared weight.
    pub fn with_weight(mut self, weight: i64) -> Self {
        self.weight = weight;
        self
    }

    /// True if every atom is a pure power of `y`.
    pub fn is_y_polynomial(&self) -> bool {
        self.atoms
            .iter()
            .all(|a| a.alpha == Complex64::default() && a.beta == Complex64::default())
    }

    /// True if every atom is invariant under `z ↦ z + 1`, i.e. `α + β ∈ 2πiZ`.
    pub fn is_translation_invariant(&self) -> bool {
        self.atoms.iter().all(|a| {
            let s = a.alpha + a.beta;
            let m = s.im / (2.0 * PI);
            s.re.abs() < 1e-12 && (m - m.round()).abs() < 1e-9
        })
    }

    pub fn max_ypow(&self) -> Option<f64> {
        self.atoms.iter().map(|a| a.ypow).reduce(f64::max)
    }

    /// `Σ c·y^a·exp(αz + βz̄)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z.im));
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let mut acc = ComplexSum::new();
        for a in &self.atoms {
            acc.add(a.eval(z));
        }
        acc.value()
    }

    fn map_atoms(&self, weight: i64, f: impl Fn(&Atom, &mut Vec<Atom>)) -> TermSum {
        let mut out = Vec::with_capacity(2 * self.atoms.len());
        for a in &self.atoms {
            f(a, &mut out);
        }
        TermSum::new(out, weight)
    }

    /// `∂/∂z`, weight unchanged.
    pub fn dz(&self) -> TermSum {
        self.map_atoms(self.weight, |a, out| {
            if a.ypow != 0.0 {
                out.push(Atom::new(a.coeff * a.ypow / (2.0 * I), a.ypow - 1.0, a.alpha, a.beta));
            }
            out.push(Atom::new(a.coeff * a.alpha, a.ypow, a.alpha, a.beta));
        })
    }

    /// `∂/∂z̄`, weight unchanged.
    pub fn dzbar(&self) -> TermSum {
        self.map_atoms(self.weight, |a, out| {
            if a.ypow != 0.0 {
                out.push(Atom::new(a.coeff * a.ypow * I / 2.0, a.ypow - 1.0, a.alpha, a.beta));
            }
            out.push(Atom::new(a.coeff * a.beta, a.ypow, a.alpha, a.beta));
        })
    }

    /// Lowering operator `L = -2i y² ∂z̄`: weight `w ↦ w - 2`.
    pub fn lower(&self) -> TermSum {
        self.map_atoms(self.weight - 2, |a, out| {
            if a.ypow != 0.0 {
                out.push(Atom::new(a.coeff * a.ypow, a.ypow + 1.0, a.alpha, a.beta));
            }
            out.push(Atom::new(-2.0 * I * a.coeff * a.beta, a.ypow + 2.0, a.alpha, a.beta));
        })
    }

    /// Raising operator `R_w = 2i ∂z + w/y`: weight `w ↦ w + 2`.
    pub fn raise(&self) -> TermSum {
        let w = self.weight as f64;
        self.map_atoms(self.weight + 2, |a, out| {
            out.push(Atom::new(a.coeff * (a.ypow + w), a.ypow - 1.0, a.alpha, a.beta));
            out.push(Atom::new(2.0 * I * a.alpha * a.coeff, a.ypow, a.alpha, a.beta));
        })
    }

    /// Antilinear `ξ_w F = 2i y^w conj(∂z̄ F)`: weight `w ↦ 2 - w`.
    pub fn xi(&self) -> TermSum {
        let w = self.weight as f64;
        self.map_atoms(2 - self.weight, |a, out| {
            let (alpha, beta) = (a.beta.conj(), a.alpha.conj());
            if a.ypow != 0.0 {
                out.push(Atom::new(a.coeff.conj() * a.ypow, a.ypow - 1.0 + w, alpha, beta));
            }
            out.push(Atom::new(2.0 * I * (a.coeff * a.beta).conj(), a.ypow + w, alpha, beta));
        })
    }

    /// Weight-`w` Laplacian via `Δ_w = -(L_{w+2} R_w + w)`.
    pub fn laplacian(&self) -> TermSum {
        let lr = self.raise().lower();
        let mut atoms = lr.atoms;
        let w = self.weight as f64;
        atoms.extend(self.atoms.iter().map(|a| Atom { coeff: a.coeff * w, ..*a }));
        TermSum::new(atoms, self.weight).scale((-1.0).into())
    }

    /// Second route `Δ_w = -R_{w-2} L_w`, kept as a cross-check of [`laplacian`](Self::laplacian).
    pub fn laplacian_via_lowering(&self) -> TermSum {
        self.lower().raise().scale((-1.0).into())
    }

    /// `𝒟ⁿ` with `𝒟 = (2πi)⁻¹ ∂/∂z`; the declared weight grows by `2n`.
    pub fn bol(&self, n: u32) -> TermSum {
        let mut f = self.clone();
        let factor = (2.0 * PI * I).inv();
        for _ in 0..n {
            f = f.dz().scale(factor);
        }
        f.with_weight(self.weight + 2 * n as i64)
    }

    /// Pointwise complex conjugate. The declared weight is negated, so that
    /// `y^w·conj(h)` ends up with weight `-w(h)` after multiplication.
    pub fn conjugate(&self) -> TermSum {
        TermSum::new(self.atoms.iter().map(Atom::conj).collect(), -self.weight)
    }

    /// Pointwise product; declared weights add.
    pub fn multiply(&self, other: &TermSum) -> TermSum {
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom::new(a.coeff * b.coeff, a.ypow + b.ypow, a.alpha + b.alpha, a.beta + b.beta));
            }
        }
        TermSum::new(atoms, self.weight + other.weight)
    }

    pub fn scale(&self, c: Complex64) -> TermSum {
        TermSum::new(self.atoms.iter().map(|a| Atom { coeff: a.coeff * c, ..*a }).collect(), self.weight)
    }

    pub fn add(&self, other: &TermSum) -> TermSum {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        TermSum::new(atoms, self.weight)
    }

    /// Largest coefficient deviation between two sums with aligned keys,
    /// relative to the larger coefficient magnitude overall.
    pub fn max_atomwise_diff(&self, other: &TermSum) -> f64 {
        let diff = self.add(&other.scale((-1.0).into()));
        let scale = self
            .atoms
            .iter()
            .chain(&other.atoms)
            .map(|a| a.coeff.norm())
            .fold(0.0, f64::max);
        let dev = diff.atoms.iter().map(|a| a.coeff.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            dev / scale
        }
    }
}

/// Finite-difference residuals of the symbolic `∂z` and `∂z̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdResidual {
    pub dz: f64,
    pub dzbar: f64,
}

impl FdResidual {
    pub fn max(&self) -> f64 {
        self.dz.max(self.dzbar)
    }
}

/// Compare symbolic Wirtinger derivatives with central differences in `x`, `y`.
///
/// Each residual is relative to the symbolic value, or absolute when the
/// symbolic derivative is identically zero.
pub fn fd_check(f: &TermSum, z: Complex64, h: f64) -> Result<FdResidual> {
    if !(z.im > h) {
        return Err(Error::Precondition(format!("Im z = {} must exceed the step {h}", z.im)));
    }
    let fx = (f.eval_unchecked(z + h) - f.eval_unchecked(z - h)) / (2.0 * h);
    let fy = (f.eval_unchecked(z + I * h) - f.eval_unchecked(z - I * h)) / (2.0 * h);
    let dz_fd = 0.5 * (fx - I * fy);
    let dzbar_fd = 0.5 * (fx + I * fy);
    let rel = |fd: Complex64, sym: &TermSum| {
        let s = sym.eval_unchecked(z);
        if sym.is_zero() {
            fd.norm()
        } else {
            (fd - s).norm() / s.norm()
        }
    };
    Ok(FdResidual { dz: rel(dz_fd, &f.dz()), dzbar: rel(dzbar_fd, &f.dzbar()) })
}
