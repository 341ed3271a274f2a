use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::wirtinger::{Atom, TermSum};
use crate::{Error, Result};

use super::eisenstein::{harmonic_seed, holomorphic_seed, real_analytic_seed, EisensteinObject};
use super::object::{ModularObject, Operator};
use super::qexp::QExpansion;

/// Named test-function families.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Constant function, weight 0.
    Constant(f64),
    /// `y^{w(h)}·g(z)·conj(h(z))` for standard q-expansions `g`, `h`.
    Product { g: String, h: String },
    /// `E2*(z) = E2(z) - 3/(πy)`, weight 2, harmonic.
    E2Star,
    /// `E(z, s)`, weight 0, eigenvalue `s(1 - s)`.
    RealAnalytic { s: f64 },
    /// Harmonic Eisenstein series of weight `2 - 2k` (seed `y^(2k-1)`).
    Harmonic { k: i64 },
    /// Holomorphic `E_k` as a lattice sum.
    Holomorphic { weight: i64 },
    /// `y^a` declared with weight `w`: smooth but not modular.
    RawPower { ypow: f64, weight: i64 },
}

/// Truncation choices for building a family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    /// q-expansion terms kept per factor.
    pub m: usize,
    /// Lattice truncation; `None` selects it by doubling against `qtol`.
    pub n: Option<usize>,
    pub qtol: f64,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self { m: 40, n: None, qtol: 1e-9 }
    }
}

/// Standard q-expansion name with its weight.
fn standard_weight(name: &str) -> Result<i64> {
    match name {
        "E4" => Ok(4),
        "E6" => Ok(6),
        "Delta" => Ok(12),
        other => Err(Error::UnknownExpansion(other.to_string())),
    }
}

/// `y^j·g·conj(h)` compiled into atoms; requires `j = weight(h)` so that the
/// result transforms with weight `w(g) - w(h)`.
pub fn product_form(g: &QExpansion, h: &QExpansion, j: i64) -> Result<ModularObject> {
    if j != h.weight {
        return Err(Error::InvalidParameter(format!(
            "y-power {j} must equal the weight {} of the conjugated factor",
            h.weight
        )));
    }
    let terms = TermSum::single(Atom::power(1.0, j as f64), 0)
        .multiply(&g.to_terms())
        .multiply(&h.to_terms().conjugate());
    debug_assert_eq!(terms.weight(), g.weight - h.weight);
    Ok(ModularObject::from_terms(format!("y^{j}*g*conj(h)"), terms, None, true))
}

impl Family {
    pub fn build(&self, params: &FamilyParams) -> Result<ModularObject> {
        let lattice = |seed: TermSum| match params.n {
            Some(n) => EisensteinObject::new(seed, n),
            None => EisensteinObject::adaptive(seed, params.qtol),
        };
        let zero = Some(Complex64::default());
        let obj = match self {
            Family::Constant(c) => ModularObject::constant(*c),
            Family::Product { g, h } => {
                standard_weight(g)?;
                let gq = QExpansion::standard(g, params.m)?;
                let hq = QExpansion::standard(h, params.m)?;
                product_form(&gq, &hq, standard_weight(h)?)?
            }
            Family::E2Star => {
                let e2 = QExpansion::standard("E2", params.m)?.to_terms();
                let terms = e2.add(&TermSum::single(Atom::power(-3.0 / PI, -1.0), 2));
                ModularObject::from_terms("E2*", terms, zero, true)
            }
            Family::RealAnalytic { s } => ModularObject::from_eisenstein(
                "E(z,s)",
                lattice(real_analytic_seed(*s)?)?,
                Some(Complex64::new(s * (1.0 - s), 0.0)),
            ),
            Family::Harmonic { k } => ModularObject::from_eisenstein("E_{2-2k}", lattice(harmonic_seed(*k)?)?, zero),
            Family::Holomorphic { weight } => {
                ModularObject::from_eisenstein("E_k", lattice(holomorphic_seed(*weight)?)?, zero)
            }
            Family::RawPower { ypow, weight } => {
                if weight % 2 != 0 {
                    return Err(Error::InvalidParameter(format!("odd weight {weight}")));
                }
                ModularObject::from_terms("y^a", TermSum::single(Atom::power(1.0, *ypow), *weight), None, false)
            }
        };
        Ok(obj)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Constant(c) => write!(f, "const:{c}"),
            Family::Product { g, h } => write!(f, "product{g}{h}"),
            Family::E2Star => write!(f, "e2star"),
            Family::RealAnalytic { s } => write!(f, "eisenstein:{s}"),
            Family::Harmonic { k } => write!(f, "harmonic:{k}"),
            Family::Holomorphic { weight } => write!(f, "holomorphic:{weight}"),
            Family::RawPower { ypow, weight } => write!(f, "raw:{ypow}:{weight}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `const[:c]`, `productGH` (G, H among E4, E6, Delta), `e2star`,
    /// `eisenstein:s`, `harmonic:k`, `holomorphic:w`, `raw:a:w`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown family `{s}`"));
        let mut parts = s.trim().split(':');
        let head = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let num = |i: usize| -> Result<f64> { args.get(i).ok_or_else(bad)?.parse::<f64>().map_err(|_| bad()) };
        let int = |i: usize| -> Result<i64> { args.get(i).ok_or_else(bad)?.parse::<i64>().map_err(|_| bad()) };
        let fam = match head {
            "const" => Family::Constant(if args.is_empty() { 1.0 } else { num(0)? }),
            "e2star" => Family::E2Star,
            "eisenstein" => Family::RealAnalytic { s: num(0)? },
            "harmonic" => Family::Harmonic { k: int(0)? },
            "holomorphic" => Family::Holomorphic { weight: int(0)? },
            "raw" => Family::RawPower { ypow: num(0)?, weight: int(1)? },
            p if p.starts_with("product") => {
                let rest = &p["product".len()..];
                let names = ["E4", "E6", "Delta"];
                let g = names.iter().find(|n| rest.starts_with(**n)).ok_or_else(bad)?;
                let h = &rest[g.len()..];
                if !names.contains(&h) {
                    return Err(bad());
                }
                Family::Product { g: g.to_string(), h: h.to_string() }
            }
            _ => return Err(bad()),
        };
        Ok(fam)
    }
}

/// A family member with operators applied on top, written `family|op|op`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub ops: Vec<Operator>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        Self { family, ops: Vec::new() }
    }

    pub fn then(mut self, op: Operator) -> Self {
        self.ops.push(op);
        self
    }

    pub fn build(&self, params: &FamilyParams) -> Result<ModularObject> {
        self.ops.iter().try_fold(self.family.build(params)?, |f, op| f.apply(*op))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for op in &self.ops {
            write!(f, "|{op}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('|');
        let family = parts.next().unwrap_or_default().parse()?;
        let ops = parts.map(str::parse).collect::<Result<Vec<_>>>()?;
        Ok(Self { family, ops })
    }
}
