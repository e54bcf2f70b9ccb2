//! Hermite-Hadamard-type corner bounds on a rectangle.
//!
//! For a twice partially differentiable `f` on `Δ = [a,b] x [c,d]` with
//! mixed partial `f_st`, the quantity
//!
//! ```text
//! L = (f(a,c) + f(a,d) + f(b,c) + f(b,d))/4 + mean(f) - edge_term(f)
//! ```
//!
//! equals the kernel integral
//!
//! ```text
//! (b-a)(d-c)/4 · ∬ (1-2t)(1-2s) f_st(ta+(1-t)b, sc+(1-s)d) dt ds
//! ```
//!
//! and, when `|f_st|^q` is convex in each coordinate, `|L|` is bounded by a
//! classical constant times the corner mean of `|f_st|^q` — and more tightly
//! by a four-bracket refinement whose weights come from splitting the kernel
//! through the bilinear partition of unity. Both bounds are closed forms in
//! the four corner values of `|f_st|`, with the common constant
//! `∬ ts |1-2t|^p |1-2s|^p dt ds = 1/(4(p+1)^2)` behind the prefactors.
//!
//! A widely circulated statement of the identity carries a `-mean` sign that
//! does not balance (already on `f = xy` the two sides differ by 1/2); the
//! default here is the sign that balances, with
//! [`IdentitySign::PaperVerbatim`] available to reproduce the other
//! convention for audit.

use serde::{Deserialize, Serialize};

use crate::domain::Rectangle;
use crate::error::{Error, Result};
use crate::functional::FunctionSpec;
use crate::holder::{ConjugateExponents, Regime, CHAIN_REL_TOLERANCE};
use crate::quadrature::{
    integrate_fn_1d_with_estimate, integrate_fn_2d_with_estimate, QuadratureRule,
};

/// Which sign convention `hh_left_side` uses for the mean term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentitySign {
    /// `corners/4 + mean - edge_term`; balances against the kernel integral.
    #[default]
    Corrected,
    /// `corners/4 - mean - edge_term`, kept for auditing the discrepancy.
    PaperVerbatim,
}

/// Inputs of the corner-bound computations.
///
/// `f_st` is the mixed partial of `f`, supplied explicitly; differentiating
/// numerically would pollute the inequality tolerances. Use
/// [`check_mixed_partial`] as a diagnostic when in doubt.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerContext {
    rect: Rectangle,
    f: FunctionSpec,
    f_st: FunctionSpec,
    exps: ConjugateExponents,
    rule: QuadratureRule,
    sign: IdentitySign,
}

impl CornerContext {
    /// Validate and assemble a context. Both functions must be expressions
    /// in at most two variables and the exponents must be standard regime.
    /// The quadrature rule defaults to Gauss-Legendre 5 x 32 panels; panel
    /// counts must be even so the kernel kink at 1/2 falls on a boundary.
    pub fn new(
        rect: Rectangle,
        f: FunctionSpec,
        f_st: FunctionSpec,
        exps: ConjugateExponents,
    ) -> Result<CornerContext> {
        if exps.regime() != Regime::Standard {
            return Err(Error::RegimeMismatch("corner bounds require p > 1".into()));
        }
        f.require_expression("corner-bound f")?;
        f_st.require_expression("corner-bound f_st")?;
        Ok(CornerContext {
            rect,
            f,
            f_st,
            exps,
            rule: QuadratureRule::default(),
            sign: IdentitySign::Corrected,
        })
    }

    pub fn with_sign(mut self, sign: IdentitySign) -> CornerContext {
        self.sign = sign;
        self
    }

    pub fn with_rule(mut self, rule: QuadratureRule) -> Result<CornerContext> {
        require_even_panels(&rule)?;
        self.rule = rule;
        Ok(self)
    }

    pub fn rect(&self) -> &Rectangle {
        &self.rect
    }

    pub fn exps(&self) -> &ConjugateExponents {
        &self.exps
    }

    pub fn sign(&self) -> IdentitySign {
        self.sign
    }

    /// `|f_st|` at the four corners, in the order (a,c), (a,d), (b,c), (b,d).
    pub fn corner_values(&self) -> Result<[f64; 4]> {
        let e = self.f_st.require_expression("corner-bound f_st")?;
        let r = &self.rect;
        Ok([
            e.eval2(r.a(), r.c())?.abs(),
            e.eval2(r.a(), r.d())?.abs(),
            e.eval2(r.b(), r.c())?.abs(),
            e.eval2(r.b(), r.d())?.abs(),
        ])
    }
}

fn require_even_panels(rule: &QuadratureRule) -> Result<()> {
    if !rule.panels().is_multiple_of(2) {
        return Err(Error::InvalidRule(
            "corner-bound quadrature needs an even panel count so the kernel kink at 1/2 lands on a panel boundary".into(),
        ));
    }
    Ok(())
}

fn left_side_with_estimate(ctx: &CornerContext) -> Result<(f64, f64)> {
    let r = &ctx.rect;
    let f = ctx.f.require_expression("corner-bound f")?;
    let corners = (f.eval2(r.a(), r.c())?
        + f.eval2(r.a(), r.d())?
        + f.eval2(r.b(), r.c())?
        + f.eval2(r.b(), r.d())?)
        / 4.0;
    let area = r.area();
    let mean_int = integrate_fn_2d_with_estimate(&mut |x, y| f.eval2(x, y), r, &ctx.rule)?;
    let mean = mean_int.value / area;

    let x_iv = r.x_interval();
    let y_iv = r.y_interval();
    let (c, d) = (r.c(), r.d());
    let (a, b) = (r.a(), r.b());
    let x_edges = integrate_fn_1d_with_estimate(
        &mut |x| Ok(f.eval2(x, c)? + f.eval2(x, d)?),
        &x_iv,
        &ctx.rule,
    )?;
    let y_edges = integrate_fn_1d_with_estimate(
        &mut |y| Ok(f.eval2(a, y)? + f.eval2(b, y)?),
        &y_iv,
        &ctx.rule,
    )?;
    let edge_term = 0.5 * (x_edges.value / x_iv.length() + y_edges.value / y_iv.length());

    let value = match ctx.sign {
        IdentitySign::Corrected => corners + mean - edge_term,
        IdentitySign::PaperVerbatim => corners - mean - edge_term,
    };
    let est = mean_int.error_estimate / area
        + 0.5 * (x_edges.error_estimate / x_iv.length() + y_edges.error_estimate / y_iv.length());
    Ok((value, est))
}

/// Edge term: the average of the four one-dimensional boundary means,
/// `½ [ (1/(b-a)) ∫ (f(x,c)+f(x,d)) dx + (1/(d-c)) ∫ (f(a,y)+f(b,y)) dy ]`.
pub fn edge_term(ctx: &CornerContext) -> Result<f64> {
    let r = &ctx.rect;
    let f = ctx.f.require_expression("corner-bound f")?;
    let x_iv = r.x_interval();
    let y_iv = r.y_interval();
    let (a, b, c, d) = (r.a(), r.b(), r.c(), r.d());
    let x_edges = integrate_fn_1d_with_estimate(
        &mut |x| Ok(f.eval2(x, c)? + f.eval2(x, d)?),
        &x_iv,
        &ctx.rule,
    )?;
    let y_edges = integrate_fn_1d_with_estimate(
        &mut |y| Ok(f.eval2(a, y)? + f.eval2(b, y)?),
        &y_iv,
        &ctx.rule,
    )?;
    Ok(0.5 * (x_edges.value / x_iv.length() + y_edges.value / y_iv.length()))
}

/// Left side of the identity: corner average, domain mean, and edge term
/// combined under the context's sign convention.
pub fn hh_left_side(ctx: &CornerContext) -> Result<f64> {
    Ok(left_side_with_estimate(ctx)?.0)
}

/// Right side of the identity: the `(1-2t)(1-2s)` kernel integrated against
/// `f_st(ta+(1-t)b, sc+(1-s)d)` over the unit square, times `(b-a)(d-c)/4`.
pub fn hh_kernel_rhs(ctx: &CornerContext) -> Result<f64> {
    let r = &ctx.rect;
    let f_st = ctx.f_st.require_expression("corner-bound f_st")?;
    let (a, b, c, d) = (r.a(), r.b(), r.c(), r.d());
    let unit = Rectangle::new(0.0, 1.0, 0.0, 1.0)?;
    let kernel = integrate_fn_2d_with_estimate(
        &mut |t, s| {
            let x = t * a + (1.0 - t) * b;
            let y = s * c + (1.0 - s) * d;
            Ok((1.0 - 2.0 * t) * (1.0 - 2.0 * s) * f_st.eval2(x, y)?)
        },
        &unit,
        &ctx.rule,
    )?;
    Ok(r.area() / 4.0 * kernel.value)
}

/// Outcome of checking the identity at the context's quadrature resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub left: f64,
    pub right: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Compare both sides of the identity; passes when `|left - right| <= tol`.
pub fn verify_hh_identity(ctx: &CornerContext, tol: f64) -> Result<IdentityCheck> {
    let left = hh_left_side(ctx)?;
    let right = hh_kernel_rhs(ctx)?;
    let residual = (left - right).abs();
    Ok(IdentityCheck {
        left,
        right,
        residual,
        pass: residual <= tol,
    })
}

/// The classical corner bound
/// `(b-a)(d-c)/(4(p+1)^{2/p}) · [ (Σ corners^q) / 4 ]^{1/q}`.
pub fn corner_bound_classical(ctx: &CornerContext) -> Result<f64> {
    Ok(bound_classical_from_corners(
        ctx.corner_values()?,
        &ctx.rect,
        &ctx.exps,
    ))
}

/// Refined corner bound plus its four bracket terms in order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImprovedBound {
    pub bound: f64,
    pub brackets: [f64; 4],
}

/// The refined corner bound with prefactor
/// `(b-a)(d-c)/(4^{1+1/p}(p+1)^{2/p})` and the four `{4,2,2,1}/36`-weighted
/// bracket terms.
pub fn corner_bound_improved(ctx: &CornerContext) -> Result<ImprovedBound> {
    Ok(bound_improved_from_corners(
        ctx.corner_values()?,
        &ctx.rect,
        &ctx.exps,
    ))
}

/// Classical bound directly from `|f_st|` corner values in the order
/// (a,c), (a,d), (b,c), (b,d).
pub fn bound_classical_from_corners(
    corners: [f64; 4],
    rect: &Rectangle,
    exps: &ConjugateExponents,
) -> f64 {
    let (p, q) = (exps.p(), exps.q());
    let prefactor = rect.area() / (4.0 * (p + 1.0).powf(2.0 / p));
    let mean_q: f64 = corners.iter().map(|c| c.abs().powf(q)).sum::<f64>() / 4.0;
    prefactor * mean_q.powf(1.0 / q)
}

/// Bracket weights of the refined bound, rows in bracket order, columns in
/// corner order (a,c), (a,d), (b,c), (b,d). Each row sums to 9; dividing by
/// 36 makes each bracket a weighted mean.
const BRACKET_WEIGHTS: [[f64; 4]; 4] = [
    [4.0, 2.0, 2.0, 1.0],
    [2.0, 1.0, 4.0, 2.0],
    [2.0, 4.0, 1.0, 2.0],
    [1.0, 2.0, 2.0, 4.0],
];

/// Refined bound directly from `|f_st|` corner values.
pub fn bound_improved_from_corners(
    corners: [f64; 4],
    rect: &Rectangle,
    exps: &ConjugateExponents,
) -> ImprovedBound {
    let (p, q) = (exps.p(), exps.q());
    let prefactor = rect.area() / (4f64.powf(1.0 + 1.0 / p) * (p + 1.0).powf(2.0 / p));
    let powered: Vec<f64> = corners.iter().map(|c| c.abs().powf(q)).collect();
    let mut brackets = [0.0; 4];
    for (i, row) in BRACKET_WEIGHTS.iter().enumerate() {
        let s: f64 = row.iter().zip(&powered).map(|(w, c)| w * c).sum();
        brackets[i] = (s / 36.0).powf(1.0 / q);
    }
    ImprovedBound {
        bound: prefactor * brackets.iter().sum::<f64>(),
        brackets,
    }
}

/// The kernel moment `∬ ts |1-2t|^p |1-2s|^p dt ds` over the unit square,
/// computed by quadrature. Its closed form is [`kernel_moment_closed_form`];
/// the three other weight placements of [`KernelWeight`] give the same value
/// by symmetry.
pub fn kernel_moment(p: f64, rule: &QuadratureRule) -> Result<f64> {
    kernel_moment_weighted(p, KernelWeight::TS, rule)
}

/// Which bilinear weight multiplies the kernel in the moment integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelWeight {
    /// `t · s`
    TS,
    /// `t · (1-s)`
    TOneMinusS,
    /// `(1-t) · s`
    OneMinusTS,
    /// `(1-t) · (1-s)`
    OneMinusTOneMinusS,
}

impl KernelWeight {
    pub const ALL: [KernelWeight; 4] = [
        KernelWeight::TS,
        KernelWeight::TOneMinusS,
        KernelWeight::OneMinusTS,
        KernelWeight::OneMinusTOneMinusS,
    ];

    fn apply(self, t: f64, s: f64) -> f64 {
        match self {
            KernelWeight::TS => t * s,
            KernelWeight::TOneMinusS => t * (1.0 - s),
            KernelWeight::OneMinusTS => (1.0 - t) * s,
            KernelWeight::OneMinusTOneMinusS => (1.0 - t) * (1.0 - s),
        }
    }
}

/// Kernel moment with one of the four bilinear weight placements.
pub fn kernel_moment_weighted(p: f64, weight: KernelWeight, rule: &QuadratureRule) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "kernel moment requires p > 0, got {p}"
        )));
    }
    require_even_panels(rule)?;
    let unit = Rectangle::new(0.0, 1.0, 0.0, 1.0)?;
    let r = integrate_fn_2d_with_estimate(
        &mut |t, s| {
            Ok(weight.apply(t, s) * (1.0 - 2.0 * t).abs().powf(p) * (1.0 - 2.0 * s).abs().powf(p))
        },
        &unit,
        rule,
    )?;
    Ok(r.value)
}

/// All four weighted kernel moments, in [`KernelWeight::ALL`] order.
pub fn kernel_moments_all(p: f64, rule: &QuadratureRule) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for (slot, w) in out.iter_mut().zip(KernelWeight::ALL) {
        *slot = kernel_moment_weighted(p, w, rule)?;
    }
    Ok(out)
}

/// Closed form of the kernel moment: `1/(4(p+1)^2)`.
pub fn kernel_moment_closed_form(p: f64) -> f64 {
    1.0 / (4.0 * (p + 1.0) * (p + 1.0))
}

/// The assembled comparison: identity left side against both corner bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerBounds {
    /// `|corners/4 + mean - edge_term|` (always the balancing sign).
    pub lhs_abs: f64,
    /// The boundary-mean average subtracted inside the left side.
    pub edge_term: f64,
    pub bound_classical: f64,
    pub bound_improved: f64,
    pub brackets: [f64; 4],
    /// Smaller of the two relative slacks in
    /// `lhs_abs <= bound_improved <= bound_classical`.
    pub min_slack: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compute the left side and both bounds, and check
/// `lhs_abs <= bound_improved <= bound_classical`.
///
/// The left side always uses the balancing sign regardless of the context's
/// audit flag. Soundness of the first inequality additionally assumes
/// `|f_st|^q` is convex in each coordinate, which is not checked here.
pub fn compare_corner_bounds(ctx: &CornerContext) -> Result<CornerBounds> {
    let corrected = if ctx.sign == IdentitySign::Corrected {
        ctx.clone()
    } else {
        ctx.clone().with_sign(IdentitySign::Corrected)
    };
    let (left, quad_err) = left_side_with_estimate(&corrected)?;
    let lhs_abs = left.abs();
    let edge = edge_term(&corrected)?;
    let classical = corner_bound_classical(ctx)?;
    let improved = corner_bound_improved(ctx)?;

    let scale = lhs_abs
        .max(improved.bound)
        .max(classical)
        .max(f64::MIN_POSITIVE);
    let s1 = (improved.bound - lhs_abs) / scale;
    let s2 = (classical - improved.bound) / scale;
    let min_slack = s1.min(s2);
    let tolerance = CHAIN_REL_TOLERANCE + 10.0 * quad_err / scale;
    Ok(CornerBounds {
        lhs_abs,
        edge_term: edge,
        bound_classical: classical,
        bound_improved: improved.bound,
        brackets: improved.brackets,
        min_slack,
        tolerance,
        pass: min_slack >= -tolerance,
    })
}

/// Finite-difference spot check that `f_st` matches the mixed partial of
/// `f`, sampled on an interior grid. Diagnostic only: the default step
/// `1e-4` gives roughly `1e-3` accuracy on smooth functions, far coarser
/// than the inequality tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedPartialCheck {
    pub max_abs_diff: f64,
    pub pass: bool,
}

pub fn check_mixed_partial(ctx: &CornerContext, step: f64, tol: f64) -> Result<MixedPartialCheck> {
    let f = ctx.f.require_expression("corner-bound f")?;
    let f_st = ctx.f_st.require_expression("corner-bound f_st")?;
    let r = &ctx.rect;
    let mut max_abs_diff: f64 = 0.0;
    let steps = 5;
    for i in 1..=steps {
        let x = r.a() + (r.b() - r.a()) * i as f64 / (steps + 1) as f64;
        for j in 1..=steps {
            let y = r.c() + (r.d() - r.c()) * j as f64 / (steps + 1) as f64;
            let fd = (f.eval2(x + step, y + step)?
                - f.eval2(x + step, y - step)?
                - f.eval2(x - step, y + step)?
                + f.eval2(x - step, y - step)?)
                / (4.0 * step * step);
            let diff = (fd - f_st.eval2(x, y)?).abs();
            max_abs_diff = max_abs_diff.max(diff);
        }
    }
    Ok(MixedPartialCheck {
        max_abs_diff,
        pass: max_abs_diff <= tol,
    })
}
