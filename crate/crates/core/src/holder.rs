//! Classical and refined Hölder bounds for isotonic linear functionals, and
//! verification of the two-sided refinement chain
//!
//! ```text
//! A(wfg)  <=  Σ_i A^{1/p}(α_i w f^p) A^{1/q}(α_i w g^q)  <=  A^{1/p}(w f^p) A^{1/q}(w g^q)
//! ```
//!
//! where `α_1..α_m` is any partition of unity on the domain. Powers are
//! always applied to absolute values, and the weight function enters as
//! `|w|`, so every functional argument is pointwise nonnegative and the
//! functional's isotonicity applies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::{FunctionSpec, Functional, Partition};

/// Relative slack allowed before an inequality counts as violated.
///
/// Exact inequalities can only be missed through rounding (discrete paths)
/// or quadrature error (integral paths, which add ten times the Richardson
/// estimate on top of this floor).
pub const CHAIN_REL_TOLERANCE: f64 = 1e-10;

/// Smallest accepted exponent in the standard regime; below this the
/// conjugate exponent explodes and the bounds are numerically meaningless.
pub const MIN_STANDARD_P: f64 = 1.0 + 1e-6;

/// Which side of `p = 1` the exponent pair lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `p > 1`: the bound is an upper bound.
    Standard,
    /// `0 < p < 1` (so `q < 0`): the classical inequality reverses.
    Reversed,
}

/// Conjugate exponent of `p`: the `q` with `1/p + 1/q = 1`.
pub fn conjugate_of(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::InvalidExponent(format!("p must be finite, got {p}")));
    }
    if p == 1.0 {
        return Err(Error::InvalidExponent(
            "p = 1 has no finite conjugate exponent".into(),
        ));
    }
    if p == 0.0 {
        return Err(Error::InvalidExponent(
            "p = 0 is not a valid exponent".into(),
        ));
    }
    Ok(p / (p - 1.0))
}

/// An exponent pair `(p, q)` with `1/p + 1/q = 1` and its regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugateExponents {
    p: f64,
    q: f64,
    regime: Regime,
}

impl ConjugateExponents {
    /// Derive `q` from `p`. Accepts `p >= 1 + 1e-6` (standard) and
    /// `0 < p < 1` (reversed); everything else is rejected.
    pub fn new(p: f64) -> Result<ConjugateExponents> {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::InvalidExponent(format!(
                "p must be a positive real, got {p}"
            )));
        }
        let regime = if p > 1.0 {
            if p < MIN_STANDARD_P {
                return Err(Error::InvalidExponent(format!(
                    "p = {p} is too close to 1; require p >= {MIN_STANDARD_P}"
                )));
            }
            Regime::Standard
        } else if p < 1.0 {
            Regime::Reversed
        } else {
            return Err(Error::InvalidExponent(
                "p = 1 has no conjugate exponent".into(),
            ));
        };
        let q = conjugate_of(p)?;
        Ok(ConjugateExponents { p, q, regime })
    }

    /// Accept an explicit pair, checking `1/p + 1/q = 1` to 1e-12.
    pub fn from_pair(p: f64, q: f64) -> Result<ConjugateExponents> {
        let exps = ConjugateExponents::new(p)?;
        if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidExponent(format!(
                "1/{p} + 1/{q} differs from 1 by more than 1e-12"
            )));
        }
        Ok(ConjugateExponents { p, q, ..exps })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    fn require_standard(&self, op: &str) -> Result<()> {
        if self.regime == Regime::Standard {
            Ok(())
        } else {
            Err(Error::RegimeMismatch(format!(
                "{op} requires p > 1; use reversed_holder for 0 < p < 1"
            )))
        }
    }

    fn require_reversed(&self, op: &str) -> Result<()> {
        if self.regime == Regime::Reversed {
            Ok(())
        } else {
            Err(Error::RegimeMismatch(format!(
                "{op} requires 0 < p < 1; use classical_holder for p > 1"
            )))
        }
    }
}

/// Both sides of Young's inequality `a^t b^(1-t) <= t a + (1-t) b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YoungGap {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, nonnegative; zero exactly when `a = b`.
    pub gap: f64,
}

/// Evaluate Young's inequality at `(a, b, t)` with `a, b > 0`, `t` in `[0,1]`.
pub fn young_gap(a: f64, b: f64, t: f64) -> Result<YoungGap> {
    if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Young's inequality needs a, b > 0, got a={a}, b={b}"
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "Young's inequality needs t in [0, 1], got t={t}"
        )));
    }
    let lhs = a.powf(t) * b.powf(1.0 - t);
    let rhs = t * a + (1.0 - t) * b;
    let mut gap = rhs - lhs;
    // in the equality case powf leaves the difference at a few ulps of
    // either sign; below rounding resolution the true gap is zero
    if gap.abs() < 16.0 * f64::EPSILON * rhs.abs() {
        gap = 0.0;
    }
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::NonFinite {
            context: "Young's inequality".into(),
        });
    }
    Ok(YoungGap { lhs, rhs, gap })
}

/// One bound computation: the functional value, the classical product bound,
/// the per-member refined contributions, and derived slack figures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// `A(|w| |f| |g|)`.
    pub lhs: f64,
    /// `A^{1/p}(|w| |f|^p) A^{1/q}(|w| |g|^q)`.
    pub classical: f64,
    /// `A^{1/p}(α_i |w| |f|^p) A^{1/q}(α_i |w| |g|^q)` in member order;
    /// empty when no partition was involved.
    pub terms: Vec<f64>,
    /// Sum of `terms`, or `classical` when there is no partition.
    pub refined: f64,
    /// `refined - lhs`.
    pub slack_refined: f64,
    /// `classical - refined`.
    pub refinement_gap: f64,
    /// `refined / classical`, when `classical > 0`.
    pub tightness: Option<f64>,
    /// Accumulated quadrature error estimates; zero on discrete paths.
    pub quad_error: f64,
}

impl BoundReport {
    fn assemble(lhs: f64, classical: f64, terms: Vec<f64>, quad_error: f64) -> Result<BoundReport> {
        let refined = if terms.is_empty() {
            classical
        } else {
            terms.iter().sum()
        };
        for v in [lhs, classical, refined] {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: "bound computation".into(),
                });
            }
        }
        let tightness = if classical > 0.0 {
            Some(refined / classical)
        } else {
            None
        };
        Ok(BoundReport {
            lhs,
            classical,
            terms,
            refined,
            slack_refined: refined - lhs,
            refinement_gap: classical - refined,
            tightness,
            quad_error,
        })
    }
}

struct Parts<'a> {
    a: &'a Functional,
    w: &'a FunctionSpec,
    f: &'a FunctionSpec,
    g: &'a FunctionSpec,
    p: f64,
    q: f64,
}

impl<'a> Parts<'a> {
    fn check(
        a: &'a Functional,
        w: &'a FunctionSpec,
        f: &'a FunctionSpec,
        g: &'a FunctionSpec,
        exps: &ConjugateExponents,
    ) -> Result<Parts<'a>> {
        for spec in [w, f, g] {
            spec.check_compatible(a.domain())?;
        }
        Ok(Parts {
            a,
            w,
            f,
            g,
            p: exps.p(),
            q: exps.q(),
        })
    }

    /// `A(|w| |f| |g|)` with error estimate.
    fn lhs(&self) -> Result<(f64, f64)> {
        let (w, f, g) = (self.w, self.f, self.g);
        self.a.evaluate_fn_with_estimate(&mut |pt| {
            Ok(w.eval_at(pt)?.abs() * f.eval_at(pt)?.abs() * g.eval_at(pt)?.abs())
        })
    }

    /// `A(|w| |h|^e)` with error estimate.
    fn power_moment(&self, h: &FunctionSpec, e: f64) -> Result<(f64, f64)> {
        let w = self.w;
        self.a.evaluate_fn_with_estimate(&mut |pt| {
            Ok(w.eval_at(pt)?.abs() * powered(h.eval_at(pt)?, e)?)
        })
    }

    /// `A(α |w| |h|^e)` for one partition member, with error estimate.
    fn member_moment(&self, alpha: &FunctionSpec, h: &FunctionSpec, e: f64) -> Result<(f64, f64)> {
        let w = self.w;
        self.a.evaluate_fn_with_estimate(&mut |pt| {
            Ok(alpha.eval_at(pt)? * w.eval_at(pt)?.abs() * powered(h.eval_at(pt)?, e)?)
        })
    }
}

/// `|v|^e`, rejecting the undefined `0^negative`.
fn powered(v: f64, e: f64) -> Result<f64> {
    let base = v.abs();
    if base == 0.0 && e < 0.0 {
        return Err(Error::NonFinite {
            context: format!("0^({e}): zero base under a negative exponent"),
        });
    }
    let r = base.powf(e);
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::NonFinite {
            context: format!("({base})^({e})"),
        })
    }
}

/// Root of a functional moment: `moment^(1/e)`.
///
/// Moments of nonnegative integrands are nonnegative up to rounding; tiny
/// negative values (possible when user partitions dip within tolerance
/// below zero) are clamped to zero, anything worse is an error.
fn moment_root(moment: f64, e: f64, reference: f64) -> Result<f64> {
    let m = if moment < 0.0 {
        if moment >= -1e-9 * (reference.abs() + 1.0) {
            0.0
        } else {
            return Err(Error::NonFinite {
                context: format!("negative functional moment {moment}"),
            });
        }
    } else {
        moment
    };
    powered(m, 1.0 / e)
}

/// Classical Hölder bound `A(wfg) <= A^{1/p}(wf^p) A^{1/q}(wg^q)` for the
/// standard regime `p > 1`.
pub fn classical_holder(
    a: &Functional,
    w: &FunctionSpec,
    f: &FunctionSpec,
    g: &FunctionSpec,
    exps: &ConjugateExponents,
) -> Result<BoundReport> {
    exps.require_standard("classical_holder")?;
    let parts = Parts::check(a, w, f, g, exps)?;
    let (lhs, e0) = parts.lhs()?;
    let (fp, e1) = parts.power_moment(f, parts.p)?;
    let (gq, e2) = parts.power_moment(g, parts.q)?;
    let classical = moment_root(fp, parts.p, fp)? * moment_root(gq, parts.q, gq)?;
    BoundReport::assemble(lhs, classical, Vec::new(), e0 + e1 + e2)
}

/// Refined Hölder bound through a partition of unity: each member
/// contributes `A^{1/p}(α_i w f^p) A^{1/q}(α_i w g^q)` and the sum of the
/// contributions lies between `A(wfg)` and the classical bound.
pub fn improved_holder(
    a: &Functional,
    w: &FunctionSpec,
    f: &FunctionSpec,
    g: &FunctionSpec,
    exps: &ConjugateExponents,
    part: &Partition,
) -> Result<BoundReport> {
    exps.require_standard("improved_holder")?;
    if part.domain() != a.domain() {
        return Err(Error::InvalidPartition(
            "partition domain differs from the functional's domain".into(),
        ));
    }
    let parts = Parts::check(a, w, f, g, exps)?;
    let (lhs, e0) = parts.lhs()?;
    let (fp, e1) = parts.power_moment(f, parts.p)?;
    let (gq, e2) = parts.power_moment(g, parts.q)?;
    let classical = moment_root(fp, parts.p, fp)? * moment_root(gq, parts.q, gq)?;

    let mut terms = Vec::with_capacity(part.len());
    let mut quad_error = e0 + e1 + e2;
    for alpha in part.members() {
        let (afp, ea) = parts.member_moment(alpha, f, parts.p)?;
        let (agq, eb) = parts.member_moment(alpha, g, parts.q)?;
        quad_error += ea + eb;
        terms.push(moment_root(afp, parts.p, fp)? * moment_root(agq, parts.q, gq)?);
    }
    BoundReport::assemble(lhs, classical, terms, quad_error)
}

/// Reversed Hölder inequality for `0 < p < 1`: the product
/// `A^{1/p}(wf^p) A^{1/q}(wg^q)` (with `q < 0`) is a lower bound for
/// `A(wfg)`. Requires `A(wg^q) > 0` and `g` bounded away from zero, since
/// `g^q` is a negative power.
pub fn reversed_holder(
    a: &Functional,
    w: &FunctionSpec,
    f: &FunctionSpec,
    g: &FunctionSpec,
    exps: &ConjugateExponents,
) -> Result<BoundReport> {
    exps.require_reversed("reversed_holder")?;
    let parts = Parts::check(a, w, f, g, exps)?;
    let (lhs, e0) = parts.lhs()?;
    let (fp, e1) = parts.power_moment(f, parts.p)?;
    let (gq, e2) = parts.power_moment(g, parts.q)?;
    if !(gq > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "reversed Hölder requires A(w g^q) > 0, got {gq}"
        )));
    }
    let classical = moment_root(fp, parts.p, fp)? * powered(gq, 1.0 / parts.q)?;
    BoundReport::assemble(lhs, classical, Vec::new(), e0 + e1 + e2)
}

/// Result of checking the full chain `lhs <= refined <= classical`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub lhs: f64,
    pub refined: f64,
    pub classical: f64,
    /// Smaller of the two relative slacks `(refined - lhs)/scale` and
    /// `(classical - refined)/scale`.
    pub min_slack: f64,
    /// Relative tolerance the check ran with.
    pub tolerance: f64,
    pub pass: bool,
    /// Accumulated quadrature error estimate behind `tolerance`.
    pub quad_error: f64,
}

/// Compute the refined bound and verify both chain inequalities within the
/// relative tolerance [`CHAIN_REL_TOLERANCE`] plus ten times the quadrature
/// error estimate on integral paths.
pub fn verify_chain(
    a: &Functional,
    w: &FunctionSpec,
    f: &FunctionSpec,
    g: &FunctionSpec,
    exps: &ConjugateExponents,
    part: &Partition,
) -> Result<ChainReport> {
    let report = improved_holder(a, w, f, g, exps, part)?;
    Ok(chain_from_report(&report))
}

/// Chain verdict for an already-computed refined report.
pub fn chain_from_report(report: &BoundReport) -> ChainReport {
    let scale = report
        .lhs
        .abs()
        .max(report.refined.abs())
        .max(report.classical.abs())
        .max(f64::MIN_POSITIVE);
    let s1 = (report.refined - report.lhs) / scale;
    let s2 = (report.classical - report.refined) / scale;
    let min_slack = s1.min(s2);
    let tolerance = CHAIN_REL_TOLERANCE + 10.0 * report.quad_error / scale;
    ChainReport {
        lhs: report.lhs,
        refined: report.refined,
        classical: report.classical,
        min_slack,
        tolerance,
        pass: min_slack >= -tolerance,
        quad_error: report.quad_error,
    }
}
