//! Executable identity checks between cycle integrals.
//!
//! Every check returns [`IdentityReport`]s comparing a left- and right-hand
//! side with the symmetric relative residual
//! `|lhs - rhs| / max(|lhs|, |rhs|, 1e-30)`. A [`SuiteConfig`] describes a
//! grid of checks; [`run_suite`] executes it with output order fixed by the
//! grid, whatever the thread count.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bqf::{enumerate_classes, GeodesicFrame, QuadForm};
use crate::cycle::{cycle_integral_framed, normalized_frame, QuadOptions};
use crate::forms::{FamilyParams, FamilySpec, ModularObject, Operator};
use crate::par;
use crate::{Error, Result};

/// Residual floor in the symmetric relative residual.
pub const RESIDUAL_FLOOR: f64 = 1e-30;
/// Tolerance of the harmonicity precondition `|ΔF| / max(1, |F|)`.
pub const HARMONIC_TOL: f64 = 1e-8;
/// Agreement required between the Bol path and the raising path.
pub const PATH_TOL: f64 = 1e-10;

/// `(|lhs - rhs|, |lhs - rhs| / max(|lhs|, |rhs|, 1e-30))`.
pub fn residuals(lhs: Complex64, rhs: Complex64) -> (f64, f64) {
    let abs = (lhs - rhs).norm();
    (abs, abs / lhs.norm().max(rhs.norm()).max(RESIDUAL_FLOOR))
}

/// Outcome of one identity check at one `(F, Q)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub family: String,
    pub form: QuadForm,
    pub discriminant: i64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub wall_time: Duration,
}

impl IdentityReport {
    pub fn new(
        identity: impl Into<String>,
        family: impl Into<String>,
        form: QuadForm,
        lhs: Complex64,
        rhs: Complex64,
        tol: f64,
    ) -> Self {
        let (abs_residual, rel_residual) = residuals(lhs, rhs);
        Self {
            identity: identity.into(),
            family: family.into(),
            form,
            discriminant: form.discriminant(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            tol,
            pass: rel_residual <= tol,
            wall_time: Duration::ZERO,
        }
    }
}

/// Which ladder operator a recursion or harmonic branch iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    R,
    L,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::R => "R",
            Side::L => "L",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" | "raise" => Ok(Side::R),
            "L" | "l" | "lower" => Ok(Side::L),
            other => Err(Error::InvalidParameter(format!("unknown side `{other}`"))),
        }
    }
}

/// Shared numerical settings of a check: the frame of `Q` and the quadrature.
struct Ctx<'a> {
    family: &'a str,
    form: QuadForm,
    frame: GeodesicFrame,
    quad: QuadOptions,
}

impl<'a> Ctx<'a> {
    fn new(family: &'a str, q: &QuadForm, quad_tol: f64) -> Result<Self> {
        Ok(Self { family, form: *q, frame: normalized_frame(q)?, quad: QuadOptions { tol: quad_tol, ..Default::default() } })
    }

    fn cycle(&self, f: &ModularObject) -> Result<Complex64> {
        Ok(cycle_integral_framed(f, &self.frame, &self.quad)?.value)
    }

    fn report(&self, identity: impl Into<String>, lhs: Complex64, rhs: Complex64, tol: f64) -> IdentityReport {
        IdentityReport::new(identity, self.family, self.form, lhs, rhs, tol)
    }
}

fn half_k(f: &ModularObject) -> Result<i64> {
    let w = f.weight();
    if w % 2 != 0 {
        return Err(Error::InvalidParameter(format!("odd weight {w}")));
    }
    Ok((2 - w) / 2)
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// First identity: `𝒞(LF) = 𝒞(RF) = conj 𝒞(ξF)` for `F` of weight
/// `2 - 2k`. Returns the pairwise reports `L=R`, `R=conj(xi)`, `L=conj(xi)`.
pub fn check_first_identity(
    f: &ModularObject,
    family: &str,
    q: &QuadForm,
    tol: f64,
    quad_tol: f64,
) -> Result<Vec<IdentityReport>> {
    half_k(f)?;
    let ctx = Ctx::new(family, q, quad_tol)?;
    let l = ctx.cycle(&f.apply(Operator::Lower)?)?;
    let r = ctx.cycle(&f.apply(Operator::Raise)?)?;
    let x = ctx.cycle(&f.apply(Operator::Xi)?)?.conj();
    Ok(vec![
        ctx.report("theorem:L=R", l, r, tol),
        ctx.report("theorem:R=conj(xi)", r, x, tol),
        ctx.report("theorem:L=conj(xi)", l, x, tol),
    ])
}

/// Recursions for an eigenform of weight `2 - 2k`:
///
/// * `R`: `𝒞(R^(k-ℓ) F) = ((k+ℓ)(k-ℓ-1) - λ)·𝒞(R^(k-ℓ-2) F)` for `ℓ ≤ k - 2`;
/// * `L`: `𝒞(L^(-k-ℓ+2) F) = ((k+ℓ)(k-ℓ-1) - λ)·𝒞(L^(-k-ℓ) F)` for `ℓ ≤ -k`.
pub fn check_recursion(
    f: &ModularObject,
    family: &str,
    q: &QuadForm,
    ell: i64,
    side: Side,
    tol: f64,
    quad_tol: f64,
) -> Result<IdentityReport> {
    let lambda = f
        .eigenvalue()
        .ok_or_else(|| Error::Precondition(format!("{} has no Laplace eigenvalue", f.label())))?;
    let k = half_k(f)?;
    let (op, n) = match side {
        Side::R if ell <= k - 2 => (Operator::Raise, k - ell),
        Side::L if ell <= -k => (Operator::Lower, -k - ell + 2),
        _ => {
            return Err(Error::InvalidParameter(format!("l = {ell} out of range for the {side} recursion with k = {k}")))
        }
    };
    let c = ((k + ell) * (k - ell - 1)) as f64 - lambda;
    let ctx = Ctx::new(family, q, quad_tol)?;
    let low = f.apply_n(op, (n - 2) as usize)?;
    let high = low.apply_n(op, 2)?;
    let lhs = ctx.cycle(&high)?;
    let rhs = c * ctx.cycle(&low)?;
    Ok(ctx.report(format!("recursion:{side}:l={ell}"), lhs, rhs, tol))
}

/// Largest `|ΔF(z)| / max(1, |F(z)|)` over a few fundamental-domain points.
pub fn harmonicity_residual(f: &ModularObject) -> Result<f64> {
    let lap = f.apply(Operator::Laplacian)?;
    let points = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.3, 1.1),
        Complex64::new(-0.4, 0.95),
        Complex64::new(0.1, 2.0),
        Complex64::new(0.5, 0.87),
    ];
    points.iter().try_fold(0.0f64, |acc, z| {
        let r = lap.eval_reduced(*z)?.norm() / f.eval_reduced(*z)?.norm().max(1.0);
        Ok(acc.max(r))
    })
}

fn require_harmonic(f: &ModularObject) -> Result<()> {
    let r = harmonicity_residual(f)?;
    if r < HARMONIC_TOL {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{} is not harmonic (|ΔF| residual {r:e})", f.label())))
    }
}

/// Constant relating the iterated image to `conj 𝒞(ξF)` on the given branch.
pub fn corollary_constant(k: i64, j: i64, side: Side) -> Result<f64> {
    match side {
        Side::R if k >= 1 && (1..=k).contains(&j) => Ok(factorial(j - 1) * factorial(k - j) * factorial(2 * k - 2)
            / (factorial(k - 1) * factorial(2 * k - 2 * j))),
        Side::L if k <= 0 && (0..=-k).contains(&j) => {
            let m = -k;
            Ok(factorial(2 * j) * factorial(m) / (factorial(j) * factorial(m - j)))
        }
        _ => Err(Error::InvalidParameter(format!("j = {j} out of range for the {side} branch with k = {k}"))),
    }
}

/// Harmonic branch identity for `F` of weight `2 - 2k`:
/// `𝒞(R^(2j-1) F)` (resp. `𝒞(L^(2j+1) F)`) against `constant·conj 𝒞(ξF)`.
pub fn check_corollary(
    f: &ModularObject,
    family: &str,
    q: &QuadForm,
    j: i64,
    side: Side,
    tol: f64,
    quad_tol: f64,
) -> Result<IdentityReport> {
    let k = half_k(f)?;
    let c = corollary_constant(k, j, side)?;
    require_harmonic(f)?;
    let ctx = Ctx::new(family, q, quad_tol)?;
    let image = match side {
        Side::R => f.apply_n(Operator::Raise, (2 * j - 1) as usize)?,
        Side::L => f.apply_n(Operator::Lower, (2 * j + 1) as usize)?,
    };
    let lhs = ctx.cycle(&image)?;
    let rhs = c * ctx.cycle(&f.apply(Operator::Xi)?)?.conj();
    Ok(ctx.report(format!("corollary:{side}:j={j}"), lhs, rhs, tol))
}

/// The Bringmann-Guerzhoy-Kane identity through Bol's identity, for harmonic
/// `F` of weight `2 - 2k` with `k ≥ 1`:
/// `𝒞(𝒟^(2k-1) F) = -((2k-2)!/(4π)^(2k-1))·conj 𝒞(ξF)`.
///
/// A second report compares `(-4π)^(2k-1)·𝒞(𝒟^(2k-1) F)` with
/// `𝒞(R^(2k-1) F)` at `path_tol`.
pub fn check_bgk(
    f: &ModularObject,
    family: &str,
    q: &QuadForm,
    tol: f64,
    path_tol: f64,
    quad_tol: f64,
) -> Result<Vec<IdentityReport>> {
    let k = half_k(f)?;
    if k < 1 {
        return Err(Error::InvalidParameter(format!("Bol's identity needs k >= 1, got k = {k}")));
    }
    require_harmonic(f)?;
    let n = 2 * k - 1;
    let ctx = Ctx::new(family, q, quad_tol)?;
    let bol = ctx.cycle(&f.apply(Operator::Bol(n as u32))?)?;
    let xi = ctx.cycle(&f.apply(Operator::Xi)?)?.conj();
    let c = -factorial(2 * k - 2) / (4.0 * PI).powi(n as i32);
    let raised = ctx.cycle(&f.apply_n(Operator::Raise, n as usize)?)?;
    Ok(vec![
        ctx.report("bgk", bol, c * xi, tol),
        ctx.report("bgk:bol=R-path", bol * (-4.0 * PI).powi(n as i32), raised, path_tol),
    ])
}

/// `𝒞(F) = constant·2·log ε` for `F` of weight 0 that is the given constant
/// (possibly after operators, e.g. `L(E2*) = 3/π`).
pub fn check_closed_form(
    f: &ModularObject,
    family: &str,
    q: &QuadForm,
    constant: f64,
    tol: f64,
    quad_tol: f64,
) -> Result<IdentityReport> {
    if f.weight() != 0 {
        return Err(Error::InvalidParameter(format!("closed form needs weight 0, got {}", f.weight())));
    }
    let ctx = Ctx::new(family, q, quad_tol)?;
    let lhs = ctx.cycle(f)?;
    let rhs = Complex64::new(constant * ctx.frame.length(), 0.0);
    Ok(ctx.report(format!("closed-form:C=c*2log(eps),c={constant}"), lhs, rhs, tol))
}

/// A form given explicitly, or by discriminant (first class representative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Form(QuadForm),
    Discriminant(i64),
}

impl Target {
    pub fn resolve(&self) -> Result<QuadForm> {
        match *self {
            Target::Form(q) => {
                q.check_admissible()?;
                Ok(q)
            }
            Target::Discriminant(d) => enumerate_classes(d)?
                .first()
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("no integral forms of discriminant {d}"))),
        }
    }

    fn discriminant(&self) -> i64 {
        match self {
            Target::Form(q) => q.discriminant(),
            Target::Discriminant(d) => *d,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Form(q) => write!(f, "{q}"),
            Target::Discriminant(d) => write!(f, "D={d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    FirstIdentity,
    Recursion { side: Side, ell: i64 },
    Corollary { side: Side, j: i64 },
    Bgk,
    ClosedForm { constant: f64 },
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::FirstIdentity => write!(f, "theorem"),
            Check::Recursion { side, ell } => write!(f, "recursion:{side}:l={ell}"),
            Check::Corollary { side, j } => write!(f, "corollary:{side}:j={j}"),
            Check::Bgk => write!(f, "bgk"),
            Check::ClosedForm { constant } => write!(f, "closed-form:c={constant}"),
        }
    }
}

/// One grid point of a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub family: FamilySpec,
    pub target: Target,
    pub check: Check,
    pub tol: f64,
}

impl Job {
    pub fn new(family: &str, target: Target, check: Check, tol: f64) -> Result<Self> {
        Ok(Self { family: family.parse()?, target, check, tol })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub jobs: Vec<Job>,
    pub params: FamilyParams,
    pub quad_tol: f64,
    /// Replaces every job's identity tolerance (including the path check).
    pub tol_override: Option<f64>,
    /// Runs every job once per listed discriminant instead of its own form.
    pub discriminants: Option<Vec<i64>>,
}

/// Identity tolerance for q-expansion and term-sum backed families.
pub const TOL_QEXP: f64 = 1e-6;
/// Identity tolerance for recursions on lattice-sum eigenforms.
pub const TOL_RECURSION: f64 = 1e-5;
/// Identity tolerance for harmonic lattice sums.
pub const TOL_LATTICE: f64 = 1e-4;
/// Default relative quadrature tolerance.
pub const QUAD_TOL: f64 = 1e-11;

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { jobs: Vec::new(), params: FamilyParams::default(), quad_tol: QUAD_TOL, tol_override: None, discriminants: None }
    }
}

impl SuiteConfig {
    /// Built-in suites: `default`, `theorem`, `recursion`, `harmonic`, and
    /// the empty suite `""`.
    pub fn named(name: &str) -> Result<Self> {
        let f5 = Target::Form(QuadForm::new(1, 1, -1));
        let f8 = Target::Form(QuadForm::new(1, 0, -2));
        let f13 = Target::Form(QuadForm::new(1, 1, -3));
        let theorem = || -> Result<Vec<Job>> {
            let mut jobs = Vec::new();
            for t in [f5, f8, f13] {
                jobs.push(Job::new("productE4E6", t, Check::FirstIdentity, TOL_QEXP)?);
            }
            jobs.push(Job::new("e2star", f8, Check::FirstIdentity, TOL_QEXP)?);
            jobs.push(Job::new("e2star|L", f8, Check::ClosedForm { constant: 3.0 / PI }, TOL_QEXP)?);
            for t in [f8, f5] {
                jobs.push(Job::new("const", t, Check::ClosedForm { constant: 1.0 }, 1e-10)?);
            }
            Ok(jobs)
        };
        let recursion = || -> Result<Vec<Job>> {
            Ok(vec![
                Job::new("eisenstein:1.5", f5, Check::Recursion { side: Side::R, ell: -1 }, TOL_RECURSION)?,
                Job::new("eisenstein:1.5", f5, Check::Recursion { side: Side::L, ell: -1 }, TOL_RECURSION)?,
                Job::new("e2star|R", f8, Check::Recursion { side: Side::L, ell: 1 }, TOL_QEXP)?,
            ])
        };
        let harmonic = || -> Result<Vec<Job>> {
            Ok(vec![
                Job::new("harmonic:2", f5, Check::Corollary { side: Side::R, j: 1 }, TOL_LATTICE)?,
                Job::new("harmonic:2", f5, Check::Corollary { side: Side::R, j: 2 }, TOL_LATTICE)?,
                Job::new("e2star", f8, Check::Corollary { side: Side::L, j: 0 }, TOL_QEXP)?,
                Job::new("harmonic:2", f5, Check::Bgk, TOL_LATTICE)?,
            ])
        };
        let jobs = match name.trim() {
            "" | "empty" => Vec::new(),
            "default" => [theorem()?, recursion()?, harmonic()?].concat(),
            "theorem" => theorem()?,
            "recursion" => recursion()?,
            "harmonic" => harmonic()?,
            other => return Err(Error::InvalidParameter(format!("unknown suite `{other}`"))),
        };
        Ok(Self { jobs, ..Default::default() })
    }

    fn expanded(&self) -> Vec<Job> {
        let with_tol = |mut j: Job| {
            if let Some(t) = self.tol_override {
                j.tol = t;
            }
            j
        };
        match &self.discriminants {
            None => self.jobs.iter().cloned().map(with_tol).collect(),
            Some(ds) => self
                .jobs
                .iter()
                .flat_map(|j| ds.iter().map(move |d| Job { target: Target::Discriminant(*d), ..j.clone() }))
                .map(with_tol)
                .collect(),
        }
    }
}

/// A suite row: a finished report, or a job that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum SuiteRow {
    Report(IdentityReport),
    Failed { check: String, family: String, target: String, discriminant: i64, error: Error, wall_time: Duration },
}

impl SuiteRow {
    pub fn passed(&self) -> bool {
        matches!(self, SuiteRow::Report(r) if r.pass)
    }

    pub fn error(&self) -> Option<&Error> {
        match self {
            SuiteRow::Failed { error, .. } => Some(error),
            SuiteRow::Report(_) => None,
        }
    }

    pub fn wall_time(&self) -> Duration {
        match self {
            SuiteRow::Report(r) => r.wall_time,
            SuiteRow::Failed { wall_time, .. } => *wall_time,
        }
    }

    pub fn to_row(&self) -> ReportRow {
        match self {
            SuiteRow::Report(r) => ReportRow::from(r),
            SuiteRow::Failed { check, family, target, discriminant, error, .. } => {
                let kind = if error.is_numeric() { "numeric-error" } else { "input-error" };
                ReportRow {
                    identity: format!("{kind}: {check}: {error}"),
                    family: family.clone(),
                    form: target.clone(),
                    d: *discriminant,
                    lhs_re: None,
                    lhs_im: None,
                    rhs_re: None,
                    rhs_im: None,
                    abs_residual: None,
                    rel_residual: None,
                    tol: None,
                    pass: false,
                }
            }
        }
    }
}

/// Flat, serializable report row; JSON keys and CSV columns in this order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub identity: String,
    pub family: String,
    pub form: String,
    #[serde(rename = "D")]
    pub d: i64,
    pub lhs_re: Option<f64>,
    pub lhs_im: Option<f64>,
    pub rhs_re: Option<f64>,
    pub rhs_im: Option<f64>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub tol: Option<f64>,
    pub pass: bool,
}

impl From<&IdentityReport> for ReportRow {
    fn from(r: &IdentityReport) -> Self {
        Self {
            identity: r.identity.clone(),
            family: r.family.clone(),
            form: r.form.to_string(),
            d: r.discriminant,
            lhs_re: Some(r.lhs.re),
            lhs_im: Some(r.lhs.im),
            rhs_re: Some(r.rhs.re),
            rhs_im: Some(r.rhs.im),
            abs_residual: Some(r.abs_residual),
            rel_residual: Some(r.rel_residual),
            tol: Some(r.tol),
            pass: r.pass,
        }
    }
}

fn run_job(job: &Job, cfg: &SuiteConfig) -> Vec<SuiteRow> {
    let start = Instant::now();
    let family = job.family.to_string();
    let path_tol = cfg.tol_override.unwrap_or(PATH_TOL);
    let outcome = (|| -> Result<Vec<IdentityReport>> {
        let q = job.target.resolve()?;
        let f = job.family.build(&cfg.params)?;
        let qt = cfg.quad_tol;
        Ok(match job.check {
            Check::FirstIdentity => check_first_identity(&f, &family, &q, job.tol, qt)?,
            Check::Recursion { side, ell } => vec![check_recursion(&f, &family, &q, ell, side, job.tol, qt)?],
            Check::Corollary { side, j } => vec![check_corollary(&f, &family, &q, j, side, job.tol, qt)?],
            Check::Bgk => check_bgk(&f, &family, &q, job.tol, path_tol, qt)?,
            Check::ClosedForm { constant } => vec![check_closed_form(&f, &family, &q, constant, job.tol, qt)?],
        })
    })();
    let wall_time = start.elapsed();
    match outcome {
        Ok(reports) => reports.into_iter().map(|r| SuiteRow::Report(IdentityReport { wall_time, ..r })).collect(),
        Err(error) => vec![SuiteRow::Failed {
            check: job.check.to_string(),
            family,
            target: job.target.to_string(),
            discriminant: job.target.discriminant(),
            error,
            wall_time,
        }],
    }
}

/// Run every job of the suite. Failures become rows; nothing aborts the run.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<SuiteRow> {
    let jobs = cfg.expanded();
    par::map_slice(&jobs, |j| run_job(j, cfg)).into_iter().flatten().collect()
}

/// Build a family from its textual description (convenience for callers that
/// only hold strings).
pub fn build_family(spec: &str, params: &FamilyParams) -> Result<ModularObject> {
    spec.parse::<FamilySpec>()?.build(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> FamilyParams {
        FamilyParams { n: Some(200), ..Default::default() }
    }

    #[test]
    fn residual_definition() {
        let (a, r) = residuals(Complex64::new(1.0, 0.0), Complex64::new(1.0, 1e-3));
        assert!((a - 1e-3).abs() < 1e-15);
        assert!((r - 1e-3 / (1.0 + 1e-6f64).sqrt()).abs() < 1e-15);
        assert_eq!(residuals(Complex64::default(), Complex64::default()), (0.0, 0.0));
        let rep = IdentityReport::new("x", "f", QuadForm::new(1, 1, -1), 1.0.into(), 1.5.into(), 0.3);
        assert!(!rep.pass);
        assert_eq!(rep.discriminant, 5);
    }

    #[test]
    fn corollary_constants() {
        assert_eq!(corollary_constant(2, 1, Side::R).unwrap(), 1.0);
        assert_eq!(corollary_constant(2, 2, Side::R).unwrap(), 2.0);
        assert_eq!(corollary_constant(0, 0, Side::L).unwrap(), 1.0);
        // k = -2, j = 1: 2!·2!/(1!·1!) = 4
        assert_eq!(corollary_constant(-2, 1, Side::L).unwrap(), 4.0);
        assert!(corollary_constant(2, 3, Side::R).is_err());
        assert!(corollary_constant(1, 0, Side::L).is_err());
    }

    #[test]
    fn family_a_first_identity() {
        let f = build_family("productE4E6", &params()).unwrap();
        for q in [QuadForm::new(1, 1, -1), QuadForm::new(1, 0, -2), QuadForm::new(1, 1, -3)] {
            for r in check_first_identity(&f, "productE4E6", &q, 1e-6, QUAD_TOL).unwrap() {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn e2star_closed_form_and_degenerate_corollary() {
        let q = QuadForm::new(1, 0, -2);
        let f = build_family("e2star", &params()).unwrap();
        let lf = f.apply(Operator::Lower).unwrap();
        let r = check_closed_form(&lf, "e2star|L", &q, 3.0 / PI, 1e-8, QUAD_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        let c = check_corollary(&f, "e2star", &q, 0, Side::L, 1e-8, QUAD_TOL).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn recursion_range_and_eigenvalue_required() {
        let q = QuadForm::new(1, 1, -1);
        let f = build_family("eisenstein:1.5", &params()).unwrap();
        assert!(check_recursion(&f, "e", &q, 0, Side::R, 1e-5, QUAD_TOL).is_err());
        assert!(check_recursion(&f, "e", &q, 0, Side::L, 1e-5, QUAD_TOL).is_err());
        let raw = build_family("raw:3:-2", &params()).unwrap();
        assert!(matches!(check_recursion(&raw, "raw", &q, -1, Side::R, 1e-5, QUAD_TOL), Err(Error::Precondition(_))));
    }

    #[test]
    fn recursion_on_raised_e2star() {
        let f = build_family("e2star|R", &params()).unwrap();
        assert_eq!(f.eigenvalue(), Some(Complex64::new(2.0, 0.0)));
        let r = check_recursion(&f, "e2star|R", &QuadForm::new(1, 0, -2), 1, Side::L, 1e-6, QUAD_TOL).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn corollary_rejects_non_harmonic() {
        let f = build_family("eisenstein:1.5", &params()).unwrap().apply(Operator::Lower).unwrap();
        assert!(harmonicity_residual(&f).unwrap() > 1e-3);
        let e = check_corollary(&f, "x", &QuadForm::new(1, 1, -1), 1, Side::R, 1e-4, QUAD_TOL).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)), "{e:?}");
    }

    #[test]
    fn bgk_matches_corollary_at_j_equals_k() {
        let q = QuadForm::new(1, 1, -1);
        let f = build_family("harmonic:2", &params()).unwrap();
        let bgk = check_bgk(&f, "harmonic:2", &q, 1e-4, PATH_TOL, QUAD_TOL).unwrap();
        let cor = check_corollary(&f, "harmonic:2", &q, 2, Side::R, 1e-4, QUAD_TOL).unwrap();
        assert!(bgk.iter().all(|r| r.pass), "{bgk:?}");
        assert!(cor.pass);
        // both sides rescaled to 𝒞(R³F)
        let via_bgk = bgk[0].lhs * (-4.0 * PI).powi(3);
        let (_, rel) = residuals(via_bgk, cor.lhs);
        assert!(rel < 1e-10, "{via_bgk} {}", cor.lhs);
    }

    #[test]
    fn empty_and_invalid_suites() {
        let cfg = SuiteConfig::named("").unwrap();
        assert!(run_suite(&cfg).is_empty());
        assert!(SuiteConfig::named("nope").is_err());
        let cfg = SuiteConfig { discriminants: Some(vec![9]), ..SuiteConfig::named("theorem").unwrap() };
        let rows = run_suite(&cfg);
        assert_eq!(rows.len(), cfg.jobs.len());
        for row in &rows {
            assert_eq!(row.error(), Some(&Error::SquareDiscriminant(9)));
            let r = row.to_row();
            assert!(r.identity.starts_with("input-error: "), "{}", r.identity);
            assert!(r.lhs_re.is_none() && !r.pass);
        }
    }

    #[test]
    fn discriminant_targets_use_first_class() {
        assert_eq!(Target::Discriminant(5).resolve().unwrap(), QuadForm::new(1, 1, -1));
        assert_eq!(Target::Discriminant(8).resolve().unwrap(), QuadForm::new(1, 2, -1));
        assert!(Target::Discriminant(7).resolve().is_err());
    }
}
