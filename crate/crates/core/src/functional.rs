//! Function representations, isotonic linear functionals, and
//! partition-of-unity weight families.
//!
//! A [`Functional`] is a nonnegative measure scheme over a [`Domain`]:
//! a weighted sum over indices, or a quadrature rule over an interval or
//! rectangle. Linearity holds by construction; isotonicity (`f >= 0` implies
//! `A(f) >= 0`) holds because every weight in every scheme is nonnegative.
//!
//! Everything here is immutable after construction and safe to share across
//! threads.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::domain::{Domain, EvalPoint, Interval, Rectangle};
use crate::error::{Error, Result};
use crate::expr::{self, Axis, Expr};
use crate::quadrature::{
    integrate_fn_1d, integrate_fn_1d_with_estimate, integrate_fn_2d, integrate_fn_2d_with_estimate,
    QuadratureRule,
};

/// Absolute tolerance for the partition-of-unity checks.
///
/// Built-in partitions satisfy their identities exactly up to rounding, so
/// anything beyond a few ulps indicates a genuinely broken weight family.
pub const PARTITION_TOLERANCE: f64 = 1e-9;

/// A function given either as a parsed expression or as samples aligned to a
/// discrete domain (row-major for grids).
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Expression(Expr),
    Samples(Vec<f64>),
}

/// Parse an expression string into a function spec.
///
/// This is how `f`, `g`, `w`, and custom partition members enter the system.
pub fn parse_function(text: &str) -> Result<FunctionSpec> {
    FunctionSpec::parse(text)
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<FunctionSpec> {
        Ok(FunctionSpec::Expression(expr::parse(text)?))
    }

    pub fn constant(c: f64) -> FunctionSpec {
        FunctionSpec::Expression(Expr::constant(c))
    }

    pub fn samples(values: Vec<f64>) -> FunctionSpec {
        FunctionSpec::Samples(values)
    }

    pub(crate) fn require_expression(&self, what: &str) -> Result<&Expr> {
        match self {
            FunctionSpec::Expression(e) => Ok(e),
            FunctionSpec::Samples(_) => Err(Error::ShapeMismatch(format!(
                "{what} must be an expression; samples are only valid on discrete domains"
            ))),
        }
    }

    /// Evaluate at a single point. Discrete points index samples directly;
    /// expressions see the index as a real coordinate.
    pub fn eval_at(&self, pt: &EvalPoint) -> Result<f64> {
        match self {
            FunctionSpec::Expression(e) => match *pt {
                EvalPoint::Discrete1 { k, .. } => e.eval1(k as f64),
                EvalPoint::Discrete2 { k, l, .. } => e.eval2(k as f64, l as f64),
                EvalPoint::Continuous1 { t } => e.eval1(t),
                EvalPoint::Continuous2 { x, y } => e.eval2(x, y),
            },
            FunctionSpec::Samples(values) => match *pt {
                EvalPoint::Discrete1 { k, n } => {
                    if values.len() != n {
                        return Err(Error::ShapeMismatch(format!(
                            "samples of length {} on an index range of size {n}",
                            values.len()
                        )));
                    }
                    Ok(values[k - 1])
                }
                EvalPoint::Discrete2 { k, l, n, m } => {
                    if values.len() != n * m {
                        return Err(Error::ShapeMismatch(format!(
                            "samples of length {} on a {n} x {m} grid",
                            values.len()
                        )));
                    }
                    Ok(values[(k - 1) * m + (l - 1)])
                }
                EvalPoint::Continuous1 { .. } | EvalPoint::Continuous2 { .. } => {
                    Err(Error::ShapeMismatch(
                        "sampled functions cannot be evaluated on a continuum".into(),
                    ))
                }
            },
        }
    }

    /// Check that this spec can be evaluated everywhere on `domain`.
    pub fn check_compatible(&self, domain: &Domain) -> Result<()> {
        match self {
            FunctionSpec::Expression(e) => {
                if e.arity() > domain.dim() {
                    Err(Error::ArityMismatch(format!(
                        "expression uses {} variables but the domain is {}-dimensional",
                        e.arity(),
                        domain.dim()
                    )))
                } else {
                    Ok(())
                }
            }
            FunctionSpec::Samples(values) => match domain.point_count() {
                Some(count) if values.len() == count => Ok(()),
                Some(count) => Err(Error::ShapeMismatch(format!(
                    "samples of length {} on a discrete domain of {count} points",
                    values.len()
                ))),
                None => Err(Error::ShapeMismatch(
                    "sampled functions require a discrete domain".into(),
                )),
            },
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Expression(e) => write!(f, "{e}"),
            FunctionSpec::Samples(values) => {
                write!(f, "[")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// The measure scheme behind a functional.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    /// `A(f) = Σ p_k f_k` with all `p_k >= 0`; `None` means unit weights.
    DiscreteSum {
        weights: Option<Vec<f64>>,
    },
    Quadrature1D {
        rule: QuadratureRule,
    },
    Quadrature2D {
        rule: QuadratureRule,
    },
}

/// A positive isotonic linear functional over a domain.
///
/// `scale` is a nonnegative factor applied to every evaluation; restriction
/// onto a subset produces functionals with `scale = 1 / mass(subset)` so that
/// the restricted functional maps the constant one function to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    domain: Domain,
    scheme: Scheme,
    scale: f64,
}

impl Functional {
    /// Unit-weight sum over a discrete domain.
    pub fn discrete_sum(domain: Domain) -> Result<Functional> {
        if !domain.is_discrete() {
            return Err(Error::InvalidDomain(
                "discrete sums require an index range or grid".into(),
            ));
        }
        Ok(Functional {
            domain,
            scheme: Scheme::DiscreteSum { weights: None },
            scale: 1.0,
        })
    }

    /// Weighted sum over a discrete domain; weights row-major for grids.
    pub fn weighted_sum(domain: Domain, weights: Vec<f64>) -> Result<Functional> {
        let count = domain.point_count().ok_or_else(|| {
            Error::InvalidDomain("weighted sums require an index range or grid".into())
        })?;
        if weights.len() != count {
            return Err(Error::InvalidWeights(format!(
                "expected {count} weights, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and nonnegative, found {w}"
            )));
        }
        Ok(Functional {
            domain,
            scheme: Scheme::DiscreteSum {
                weights: Some(weights),
            },
            scale: 1.0,
        })
    }

    /// `A(f) = ∫_a^b f` realized by the given rule.
    pub fn integral_1d(iv: Interval, rule: QuadratureRule) -> Functional {
        Functional {
            domain: Domain::Interval(iv),
            scheme: Scheme::Quadrature1D { rule },
            scale: 1.0,
        }
    }

    /// `A(f) = ∬ f` over a rectangle, tensor product of the 1D rule.
    pub fn integral_2d(rect: Rectangle, rule: QuadratureRule) -> Functional {
        Functional {
            domain: Domain::Rectangle(rect),
            scheme: Scheme::Quadrature2D { rule },
            scale: 1.0,
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.scheme, Scheme::DiscreteSum { .. })
    }

    fn weight_at(&self, flat: usize, weights: &Option<Vec<f64>>) -> f64 {
        match weights {
            Some(w) => w[flat],
            None => 1.0,
        }
    }

    /// Apply the functional to a pointwise-defined function.
    pub fn evaluate_fn(&self, f: &mut dyn FnMut(&EvalPoint) -> Result<f64>) -> Result<f64> {
        let value = match (&self.scheme, &self.domain) {
            (Scheme::DiscreteSum { weights }, Domain::IndexRange1D { n }) => {
                let mut total = 0.0;
                for k in 1..=*n {
                    let w = self.weight_at(k - 1, weights);
                    total += w * f(&EvalPoint::Discrete1 { k, n: *n })?;
                }
                total
            }
            (Scheme::DiscreteSum { weights }, Domain::IndexGrid2D { n, m }) => {
                let mut total = 0.0;
                for k in 1..=*n {
                    for l in 1..=*m {
                        let w = self.weight_at((k - 1) * m + (l - 1), weights);
                        total += w * f(&EvalPoint::Discrete2 { k, l, n: *n, m: *m })?;
                    }
                }
                total
            }
            (Scheme::Quadrature1D { rule }, Domain::Interval(iv)) => {
                integrate_fn_1d(&mut |t| f(&EvalPoint::Continuous1 { t }), iv, rule)?
            }
            (Scheme::Quadrature2D { rule }, Domain::Rectangle(rect)) => {
                integrate_fn_2d(&mut |x, y| f(&EvalPoint::Continuous2 { x, y }), rect, rule)?
            }
            _ => unreachable!("scheme/domain pairing enforced by constructors"),
        };
        let scaled = self.scale * value;
        if scaled.is_finite() {
            Ok(scaled)
        } else {
            Err(Error::NonFinite {
                context: "functional evaluation".into(),
            })
        }
    }

    /// Like [`evaluate_fn`](Self::evaluate_fn) but also returns a quadrature
    /// error estimate (zero on discrete paths).
    pub fn evaluate_fn_with_estimate(
        &self,
        f: &mut dyn FnMut(&EvalPoint) -> Result<f64>,
    ) -> Result<(f64, f64)> {
        match (&self.scheme, &self.domain) {
            (Scheme::Quadrature1D { rule }, Domain::Interval(iv)) => {
                let r = integrate_fn_1d_with_estimate(
                    &mut |t| f(&EvalPoint::Continuous1 { t }),
                    iv,
                    rule,
                )?;
                Ok((self.scale * r.value, self.scale * r.error_estimate))
            }
            (Scheme::Quadrature2D { rule }, Domain::Rectangle(rect)) => {
                let r = integrate_fn_2d_with_estimate(
                    &mut |x, y| f(&EvalPoint::Continuous2 { x, y }),
                    rect,
                    rule,
                )?;
                Ok((self.scale * r.value, self.scale * r.error_estimate))
            }
            _ => Ok((self.evaluate_fn(f)?, 0.0)),
        }
    }

    /// Apply the functional to a function spec: `A(f)`.
    pub fn evaluate(&self, f: &FunctionSpec) -> Result<f64> {
        f.check_compatible(&self.domain)?;
        self.evaluate_fn(&mut |pt| f.eval_at(pt))
    }

    /// `A(f · χ_E1)` for a contiguous subset of the domain.
    ///
    /// Integral schemes integrate directly over the sub-range instead of
    /// evaluating the indicator at nodes, which keeps the restriction
    /// identities exact.
    pub fn evaluate_masked(&self, f: &FunctionSpec, subset: &Indicator) -> Result<f64> {
        subset.check_compatible(&self.domain)?;
        f.check_compatible(&self.domain)?;
        match (&self.scheme, subset) {
            (Scheme::DiscreteSum { .. }, _) => self.evaluate_fn(&mut |pt| {
                if subset.contains(pt) {
                    f.eval_at(pt)
                } else {
                    Ok(0.0)
                }
            }),
            (Scheme::Quadrature1D { rule }, Indicator::SubInterval { lo, hi }) => {
                let sub = Interval::new(*lo, *hi)?;
                let expr = f.require_expression("restricted integrand")?;
                let v = integrate_fn_1d(&mut |t| expr.eval1(t), &sub, rule)?;
                Ok(self.scale * v)
            }
            (
                Scheme::Quadrature2D { rule },
                Indicator::SubRectangle {
                    x_lo,
                    x_hi,
                    y_lo,
                    y_hi,
                },
            ) => {
                let sub = Rectangle::new(*x_lo, *x_hi, *y_lo, *y_hi)?;
                let expr = f.require_expression("restricted integrand")?;
                let v = integrate_fn_2d(&mut |x, y| expr.eval2(x, y), &sub, rule)?;
                Ok(self.scale * v)
            }
            _ => Err(Error::ShapeMismatch(
                "indicator kind incompatible with the functional's domain".into(),
            )),
        }
    }

    /// The normalized restriction `B(f) = A(f · χ_E1) / A(χ_E1)`.
    ///
    /// The result satisfies `B(1) = 1` and is itself a positive isotonic
    /// linear functional.
    pub fn restricted(&self, subset: &Indicator) -> Result<Functional> {
        subset.check_compatible(&self.domain)?;
        match (&self.scheme, subset) {
            (Scheme::DiscreteSum { weights }, _) => {
                let count = self.domain.point_count().expect("discrete domain");
                let mut masked = Vec::with_capacity(count);
                let mut mass = 0.0;
                let points = self.domain.sample_points(0);
                for (flat, pt) in points.iter().enumerate() {
                    let w = if subset.contains(pt) {
                        self.weight_at(flat, weights)
                    } else {
                        0.0
                    };
                    mass += w;
                    masked.push(w);
                }
                if !(mass > 0.0) {
                    return Err(Error::DegenerateRestriction {
                        mass: self.scale * mass,
                    });
                }
                Ok(Functional {
                    domain: self.domain,
                    scheme: Scheme::DiscreteSum {
                        weights: Some(masked),
                    },
                    scale: 1.0 / mass,
                })
            }
            (Scheme::Quadrature1D { rule }, Indicator::SubInterval { lo, hi }) => {
                let sub = Interval::new(*lo, *hi)?;
                let mass = sub.length();
                if !(mass > 0.0) {
                    return Err(Error::DegenerateRestriction { mass });
                }
                Ok(Functional {
                    domain: Domain::Interval(sub),
                    scheme: Scheme::Quadrature1D { rule: *rule },
                    scale: 1.0 / mass,
                })
            }
            (
                Scheme::Quadrature2D { rule },
                Indicator::SubRectangle {
                    x_lo,
                    x_hi,
                    y_lo,
                    y_hi,
                },
            ) => {
                let sub = Rectangle::new(*x_lo, *x_hi, *y_lo, *y_hi)?;
                let mass = sub.area();
                if !(mass > 0.0) {
                    return Err(Error::DegenerateRestriction { mass });
                }
                Ok(Functional {
                    domain: Domain::Rectangle(sub),
                    scheme: Scheme::Quadrature2D { rule: *rule },
                    scale: 1.0 / mass,
                })
            }
            _ => Err(Error::ShapeMismatch(
                "indicator kind incompatible with the functional's domain".into(),
            )),
        }
    }
}

/// A contiguous subset of a domain, playing the role of `χ_E1`.
///
/// Only contiguous ranges are supported (sub-intervals, index spans, and
/// their 2D boxes); that is enough for the restriction identities while
/// keeping complements of prefixes representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Indicator {
    /// Indices `lo..=hi`, 1-based.
    IndexSpan { lo: usize, hi: usize },
    /// `[lo, hi]` inside an interval domain.
    SubInterval { lo: f64, hi: f64 },
    /// `k_lo..=k_hi` by `l_lo..=l_hi` inside an index grid.
    IndexBox {
        k_lo: usize,
        k_hi: usize,
        l_lo: usize,
        l_hi: usize,
    },
    /// `[x_lo, x_hi] x [y_lo, y_hi]` inside a rectangle domain.
    SubRectangle {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
    },
}

impl Indicator {
    fn check_compatible(&self, domain: &Domain) -> Result<()> {
        let ok = match (self, domain) {
            (Indicator::IndexSpan { lo, hi }, Domain::IndexRange1D { n }) => {
                *lo >= 1 && lo <= hi && *hi <= *n
            }
            (
                Indicator::IndexBox {
                    k_lo,
                    k_hi,
                    l_lo,
                    l_hi,
                },
                Domain::IndexGrid2D { n, m },
            ) => {
                *k_lo >= 1
                    && k_lo <= k_hi
                    && *k_hi <= *n
                    && *l_lo >= 1
                    && l_lo <= l_hi
                    && *l_hi <= *m
            }
            (Indicator::SubInterval { lo, hi }, Domain::Interval(iv)) => {
                *lo >= iv.a() && *hi <= iv.b() && lo < hi
            }
            (
                Indicator::SubRectangle {
                    x_lo,
                    x_hi,
                    y_lo,
                    y_hi,
                },
                Domain::Rectangle(r),
            ) => {
                *x_lo >= r.a()
                    && *x_hi <= r.b()
                    && x_lo < x_hi
                    && *y_lo >= r.c()
                    && *y_hi <= r.d()
                    && y_lo < y_hi
            }
            _ => {
                return Err(Error::ShapeMismatch(
                    "indicator kind does not match the domain kind".into(),
                ))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "indicator range falls outside the domain or is empty".into(),
            ))
        }
    }

    /// Pointwise membership, used on discrete domains.
    pub fn contains(&self, pt: &EvalPoint) -> bool {
        match (self, pt) {
            (Indicator::IndexSpan { lo, hi }, EvalPoint::Discrete1 { k, .. }) => k >= lo && k <= hi,
            (
                Indicator::IndexBox {
                    k_lo,
                    k_hi,
                    l_lo,
                    l_hi,
                },
                EvalPoint::Discrete2 { k, l, .. },
            ) => k >= k_lo && k <= k_hi && l >= l_lo && l <= l_hi,
            (Indicator::SubInterval { lo, hi }, EvalPoint::Continuous1 { t }) => {
                *t >= *lo && *t <= *hi
            }
            (
                Indicator::SubRectangle {
                    x_lo,
                    x_hi,
                    y_lo,
                    y_hi,
                },
                EvalPoint::Continuous2 { x, y },
            ) => *x >= *x_lo && *x <= *x_hi && *y >= *y_lo && *y <= *y_hi,
            _ => false,
        }
    }
}

/// Built-in partition-of-unity families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    /// `(b-t)/(b-a)`, `(t-a)/(b-a)` on an interval.
    LinearPair,
    /// `k/n`, `(n-k)/n` on an index range.
    DiscretePair,
    /// The four bilinear corner weights on a rectangle.
    BilinearQuad,
    /// `kl/(nm)`, `(n-k)l/(nm)`, `(n-k)(m-l)/(nm)`, `k(m-l)/(nm)` on a grid.
    DiscreteBilinearQuad,
    /// `m` copies of the constant `1/m` on any domain.
    Uniform,
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PartitionKind::LinearPair => "linear-pair",
            PartitionKind::DiscretePair => "discrete-pair",
            PartitionKind::BilinearQuad => "bilinear-quad",
            PartitionKind::DiscreteBilinearQuad => "discrete-bilinear-quad",
            PartitionKind::Uniform => "uniform",
        };
        f.write_str(s)
    }
}

impl FromStr for PartitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<PartitionKind> {
        Ok(match s {
            "linear-pair" => PartitionKind::LinearPair,
            "discrete-pair" => PartitionKind::DiscretePair,
            "bilinear-quad" => PartitionKind::BilinearQuad,
            "discrete-bilinear-quad" => PartitionKind::DiscreteBilinearQuad,
            "uniform" => PartitionKind::Uniform,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown partition kind `{other}`"
                )))
            }
        })
    }
}

/// An ordered family of nonnegative weight functions summing to one
/// pointwise on its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    members: Vec<FunctionSpec>,
    domain: Domain,
}

impl Partition {
    /// Validate and wrap a weight family.
    ///
    /// Nonnegativity and the sum-to-one identity are checked on a
    /// deterministic sample of the domain (every point of a discrete domain,
    /// about a thousand points of a continuum) within
    /// [`PARTITION_TOLERANCE`].
    pub fn new(members: Vec<FunctionSpec>, domain: Domain) -> Result<Partition> {
        if members.is_empty() {
            return Err(Error::InvalidPartition(
                "a partition needs at least one member".into(),
            ));
        }
        for member in &members {
            member.check_compatible(&domain)?;
        }
        let per_axis = if domain.dim() == 1 { 1000 } else { 32 };
        for pt in domain.sample_points(per_axis) {
            let mut total = 0.0;
            for (i, member) in members.iter().enumerate() {
                let v = member.eval_at(&pt)?;
                if v < -PARTITION_TOLERANCE {
                    return Err(Error::InvalidPartition(format!(
                        "member {i} is negative ({v}) at {pt:?}"
                    )));
                }
                total += v;
            }
            if (total - 1.0).abs() > PARTITION_TOLERANCE {
                return Err(Error::InvalidPartition(format!(
                    "members sum to {total} instead of 1 at {pt:?}"
                )));
            }
        }
        Ok(Partition { members, domain })
    }

    pub fn members(&self) -> &[FunctionSpec] {
        &self.members
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// All member values at one point, in member order.
    pub fn values_at(&self, pt: &EvalPoint) -> Result<Vec<f64>> {
        self.members.iter().map(|m| m.eval_at(pt)).collect()
    }
}

/// Build one of the built-in partitions over `domain`.
///
/// `m` is required for the uniform kind and ignored otherwise. Member order
/// follows the defining formulas listed on [`PartitionKind`].
pub fn make_partition(kind: PartitionKind, domain: &Domain, m: Option<usize>) -> Result<Partition> {
    let members = match (kind, domain) {
        (PartitionKind::LinearPair, Domain::Interval(iv)) => {
            let width = iv.length();
            vec![
                // (b - t) / (b - a)
                FunctionSpec::Expression(
                    (Expr::constant(iv.b()) - Expr::var(Axis::First)) / Expr::constant(width),
                ),
                // (t - a) / (b - a)
                FunctionSpec::Expression(
                    (Expr::var(Axis::First) - Expr::constant(iv.a())) / Expr::constant(width),
                ),
            ]
        }
        (PartitionKind::DiscretePair, Domain::IndexRange1D { n }) => {
            let nf = *n as f64;
            vec![
                // k / n
                FunctionSpec::Expression(Expr::var(Axis::First) / Expr::constant(nf)),
                // (n - k) / n
                FunctionSpec::Expression(
                    (Expr::constant(nf) - Expr::var(Axis::First)) / Expr::constant(nf),
                ),
            ]
        }
        (PartitionKind::BilinearQuad, Domain::Rectangle(r)) => {
            let area = r.area();
            let x = || Expr::var(Axis::First);
            let y = || Expr::var(Axis::Second);
            let bx = || Expr::constant(r.b()) - x();
            let xa = || x() - Expr::constant(r.a());
            let dy = || Expr::constant(r.d()) - y();
            let yc = || y() - Expr::constant(r.c());
            [bx() * dy(), bx() * yc(), xa() * yc(), xa() * dy()]
                .into_iter()
                .map(|num| FunctionSpec::Expression(num / Expr::constant(area)))
                .collect()
        }
        (PartitionKind::DiscreteBilinearQuad, Domain::IndexGrid2D { n, m }) => {
            let nf = *n as f64;
            let mf = *m as f64;
            let total = nf * mf;
            let k = || Expr::var(Axis::First);
            let l = || Expr::var(Axis::Second);
            let nk = || Expr::constant(nf) - k();
            let ml = || Expr::constant(mf) - l();
            [k() * l(), nk() * l(), nk() * ml(), k() * ml()]
                .into_iter()
                .map(|num| FunctionSpec::Expression(num / Expr::constant(total)))
                .collect()
        }
        (PartitionKind::Uniform, _) => {
            let m = m.ok_or_else(|| {
                Error::InvalidArgument("uniform partitions require a member count m".into())
            })?;
            if m < 1 {
                return Err(Error::InvalidArgument(
                    "uniform partitions require m >= 1".into(),
                ));
            }
            vec![FunctionSpec::constant(1.0 / m as f64); m]
        }
        (kind, domain) => {
            return Err(Error::InvalidArgument(format!(
                "partition kind {kind} does not fit domain {domain:?}"
            )))
        }
    };
    Partition::new(members, *domain)
}
