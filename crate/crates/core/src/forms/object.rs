use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::numeric::cpowi;
use crate::wirtinger::TermSum;
use crate::{Error, Result};

use super::eisenstein::EisensteinObject;
use super::reduce::fd_reduce;

/// Differential operators that can be pushed through a [`ModularObject`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Lower,
    Raise,
    Xi,
    Laplacian,
    /// `𝒟ⁿ`, `𝒟 = (2πi)⁻¹ ∂z`.
    Bol(u32),
}

impl Operator {
    /// Declared weight after applying the operator to weight `w`.
    pub fn weight_after(&self, w: i64) -> i64 {
        match self {
            Operator::Lower => w - 2,
            Operator::Raise => w + 2,
            Operator::Xi => 2 - w,
            Operator::Laplacian => w,
            Operator::Bol(n) => w + 2 * *n as i64,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Lower => write!(f, "L"),
            Operator::Raise => write!(f, "R"),
            Operator::Xi => write!(f, "xi"),
            Operator::Laplacian => write!(f, "Delta"),
            Operator::Bol(n) => write!(f, "D^{n}"),
        }
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L" | "lower" => Ok(Operator::Lower),
            "R" | "raise" => Ok(Operator::Raise),
            "xi" => Ok(Operator::Xi),
            "Delta" | "laplacian" => Ok(Operator::Laplacian),
            other => {
                let n = other
                    .strip_prefix("D^")
                    .or_else(|| other.strip_prefix("bol"))
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|n| *n > 0);
                n.map(Operator::Bol)
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown operator `{other}`")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evaluator {
    Terms(TermSum),
    Eisenstein(EisensteinObject),
}

/// A function on the upper half-plane with a declared weight, optional Laplace
/// eigenvalue, and a flag saying whether it transforms like a modular form
/// (which licenses evaluation through fundamental-domain reduction).
#[derive(Debug, Clone, PartialEq)]
pub struct ModularObject {
    label: String,
    evaluator: Evaluator,
    eigenvalue: Option<Complex64>,
    modular: bool,
}

impl ModularObject {
    pub fn from_terms(label: impl Into<String>, terms: TermSum, eigenvalue: Option<Complex64>, modular: bool) -> Self {
        Self { label: label.into(), evaluator: Evaluator::Terms(terms), eigenvalue, modular }
    }

    pub fn from_eisenstein(label: impl Into<String>, obj: EisensteinObject, eigenvalue: Option<Complex64>) -> Self {
        Self { label: label.into(), evaluator: Evaluator::Eisenstein(obj), eigenvalue, modular: true }
    }

    /// The constant function `c` of weight 0 (eigenvalue 0).
    pub fn constant(c: f64) -> Self {
        Self::from_terms(format!("{c}"), TermSum::constant(c, 0), Some(Complex64::default()), true)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn weight(&self) -> i64 {
        match &self.evaluator {
            Evaluator::Terms(t) => t.weight(),
            Evaluator::Eisenstein(e) => e.weight(),
        }
    }

    pub fn eigenvalue(&self) -> Option<Complex64> {
        self.eigenvalue
    }

    pub fn is_modular(&self) -> bool {
        self.modular
    }

    pub fn is_zero(&self) -> bool {
        match &self.evaluator {
            Evaluator::Terms(t) => t.is_zero(),
            Evaluator::Eisenstein(e) => e.seed().is_zero(),
        }
    }

    /// Direct evaluation at `z`, without reduction.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z.im));
        }
        Ok(match &self.evaluator {
            Evaluator::Terms(t) => t.eval_unchecked(z),
            Evaluator::Eisenstein(e) => e.eval(z),
        })
    }

    /// `F(z) = (cz + d)^(-w)·F(γz)` with `γz` in the fundamental domain.
    /// Objects not flagged modular are evaluated directly.
    pub fn eval_reduced(&self, z: Complex64) -> Result<Complex64> {
        if !self.modular {
            return self.eval(z);
        }
        let (zr, g) = fd_reduce(z)?;
        let j = g.c as f64 * z + g.d as f64;
        Ok(cpowi(j, -self.weight()) * self.eval(zr)?)
    }

    /// Apply `op`, updating weight and eigenvalue.
    ///
    /// Coset sums push the operator onto the seed, which is valid because
    /// `L`, `R`, `ξ`, `Δ` commute with the slash action. `𝒟ⁿ` commutes with it
    /// only as Bol's identity `n = 1 - w`; other powers are rejected for coset
    /// sums and mark term sums as non-modular.
    pub fn apply(&self, op: Operator) -> Result<ModularObject> {
        let w = self.weight();
        let label = format!("{op}({})", self.label);
        let bol_ok = matches!(op, Operator::Bol(n) if n as i64 == 1 - w);
        let eigenvalue = match op {
            Operator::Lower => self.eigenvalue.map(|l| l - (w as f64) + 2.0),
            Operator::Raise => self.eigenvalue.map(|l| l + w as f64),
            Operator::Xi => self.eigenvalue.map(|l| l.conj()),
            Operator::Laplacian => self.eigenvalue,
            Operator::Bol(n) if bol_ok => self
                .eigenvalue
                .map(|l| (0..n as i64).fold(l, |acc, i| acc + (w + 2 * i) as f64)),
            Operator::Bol(_) => None,
        };
        let apply_terms = |t: &TermSum| match op {
            Operator::Lower => t.lower(),
            Operator::Raise => t.raise(),
            Operator::Xi => t.xi(),
            Operator::Laplacian => t.laplacian(),
            Operator::Bol(n) => t.bol(n),
        };
        match &self.evaluator {
            Evaluator::Terms(t) => Ok(ModularObject {
                label,
                evaluator: Evaluator::Terms(apply_terms(t)),
                eigenvalue,
                modular: self.modular && (!matches!(op, Operator::Bol(_)) || bol_ok),
            }),
            Evaluator::Eisenstein(e) => {
                if matches!(op, Operator::Bol(_)) && !bol_ok {
                    return Err(Error::InvalidParameter(format!(
                        "{op} does not commute with the weight {w} slash action (need n = {})",
                        1 - w
                    )));
                }
                let seed = apply_terms(e.seed());
                Ok(ModularObject { label, evaluator: Evaluator::Eisenstein(e.map_seed(seed)?), eigenvalue, modular: true })
            }
        }
    }

    /// Apply `op` `n` times.
    pub fn apply_n(&self, op: Operator, n: usize) -> Result<ModularObject> {
        (0..n).try_fold(self.clone(), |f, _| f.apply(op))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::IntMatrix;
    use crate::forms::eisenstein::{harmonic_seed, real_analytic_seed};
    use crate::forms::qexp::QExpansion;
    use crate::forms::reduce::mobius;
    use crate::wirtinger::Atom;

    #[test]
    fn operator_parsing_round_trips() {
        for op in [Operator::Lower, Operator::Raise, Operator::Xi, Operator::Laplacian, Operator::Bol(3)] {
            assert_eq!(op.to_string().parse::<Operator>().unwrap(), op);
        }
        assert_eq!("bol3".parse::<Operator>().unwrap(), Operator::Bol(3));
        assert!("D^0".parse::<Operator>().is_err());
        assert!("nabla".parse::<Operator>().is_err());
    }

    #[test]
    fn raising_harmonic_seed_three_times() {
        let f = ModularObject::from_eisenstein(
            "E_-2",
            EisensteinObject::new(harmonic_seed(2).unwrap(), 50).unwrap(),
            Some(Complex64::default()),
        );
        let r3 = f.apply_n(Operator::Raise, 3).unwrap();
        assert_eq!(r3.weight(), 4);
        let Evaluator::Eisenstein(e) = r3.evaluator() else { panic!() };
        assert_eq!(e.seed(), &TermSum::constant(6.0, 4));
        assert_eq!(r3.eigenvalue(), Some(Complex64::default()));
        let Evaluator::Eisenstein(e0) = f.evaluator() else { panic!() };
        assert_eq!(e.convergence_exponent(), e0.convergence_exponent());
        for op in [Operator::Lower, Operator::Xi] {
            let Evaluator::Eisenstein(g) = f.apply(op).unwrap().evaluator().clone() else { panic!() };
            assert_eq!(g.convergence_exponent(), e0.convergence_exponent());
        }
        assert!(f.apply(Operator::Bol(2)).is_err());
        assert_eq!(f.apply(Operator::Bol(3)).unwrap().eigenvalue(), Some(Complex64::default()));
    }

    #[test]
    fn eigenvalue_bookkeeping() {
        let e = ModularObject::from_eisenstein(
            "E(z,1.5)",
            EisensteinObject::new(real_analytic_seed(1.5).unwrap(), 50).unwrap(),
            Some(Complex64::new(-0.75, 0.0)),
        );
        // λ → λ + 2κ under R, λ → λ − 2κ + 2 under L
        assert_eq!(e.apply(Operator::Raise).unwrap().eigenvalue(), Some(Complex64::new(-0.75, 0.0)));
        let r2 = e.apply_n(Operator::Raise, 2).unwrap();
        assert_eq!(r2.eigenvalue(), Some(Complex64::new(1.25, 0.0)));
        let l = e.apply(Operator::Lower).unwrap();
        assert_eq!(l.eigenvalue(), Some(Complex64::new(1.25, 0.0)));
    }

    #[test]
    fn lowering_a_holomorphic_form_gives_zero() {
        let e4 = ModularObject::from_terms(
            "E4",
            QExpansion::standard("E4", 20).unwrap().to_terms(),
            Some(Complex64::default()),
            true,
        );
        assert!(e4.apply(Operator::Lower).unwrap().is_zero());
    }

    #[test]
    fn reduced_evaluation_examples() {
        let one = ModularObject::constant(2.5);
        assert_eq!(one.eval_reduced(Complex64::new(0.3, 0.01)).unwrap(), Complex64::new(2.5, 0.0));
        let e4 = ModularObject::from_terms("E4", QExpansion::standard("E4", 40).unwrap().to_terms(), None, true);
        let z = Complex64::new(0.3, 0.05);
        let (a, b) = (e4.eval_reduced(z).unwrap(), e4.eval_reduced(z + 1.0).unwrap());
        assert!((a - b).norm() < 1e-13 * a.norm(), "{a} {b}");
        // oracle: long q-series at the reduced point times the automorphy factor
        let (zr, g) = fd_reduce(z).unwrap();
        let long = QExpansion::standard("E4", 200).unwrap();
        let want = long.eval(zr) / (g.c as f64 * z + g.d as f64).powi(4);
        let got = e4.eval_reduced(z).unwrap();
        assert!((got - want).norm() < 1e-10 * want.norm(), "{got} {want}");
    }

    #[test]
    fn eisenstein_automorphy() {
        let f = ModularObject::from_eisenstein(
            "E_-2",
            EisensteinObject::new(harmonic_seed(2).unwrap(), 100).unwrap(),
            Some(Complex64::default()),
        );
        let z = Complex64::new(0.1, 1.3);
        let g = IntMatrix::new(2, 1, 1, 1);
        let gz = mobius(&g, z);
        let lhs = f.eval(gz).unwrap();
        let rhs = (g.c as f64 * z + g.d as f64).powi(-2) * f.eval(z).unwrap();
        assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn non_modular_objects_evaluate_directly() {
        let raw = ModularObject::from_terms("y^3", TermSum::single(Atom::power(1.0, 3.0), -2), None, false);
        let z = Complex64::new(0.1, 0.2);
        assert!((raw.eval_reduced(z).unwrap() - Complex64::new(0.008, 0.0)).norm() < 1e-17);
    }
}
