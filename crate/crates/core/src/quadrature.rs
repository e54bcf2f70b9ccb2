//! Deterministic numerical integration on intervals and rectangles.
//!
//! Three composite rule families are provided, all with strictly positive
//! node weights so that the induced functionals stay isotonic:
//!
//! * composite midpoint (order 2, nodes strictly interior),
//! * composite Simpson (order 4, panel endpoints included),
//! * composite Gauss-Legendre (order `2k` for `k` nodes per panel, nodes
//!   strictly interior).
//!
//! Every integration also reports a Richardson-style error estimate obtained
//! by re-running the rule with the panel count doubled. The estimate is
//! advisory; callers that need reproducible values pin the panel count.
//!
//! Panel contributions are accumulated in ascending panel order, so results
//! are bit-reproducible run to run.

use serde::{Deserialize, Serialize};

use crate::domain::{Interval, Rectangle};
use crate::error::{Error, Result};
use crate::functional::FunctionSpec;

/// Rule family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleFamily {
    CompositeMidpoint,
    CompositeSimpson,
    GaussLegendreComposite,
}

/// A composite quadrature rule: a family, a panel count, and (for Gauss)
/// the number of nodes per panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureRule {
    family: RuleFamily,
    panels: usize,
    nodes_per_panel: usize,
}

pub const DEFAULT_GAUSS_NODES: usize = 5;
pub const DEFAULT_PANELS: usize = 32;
const MAX_GAUSS_NODES: usize = 64;

impl QuadratureRule {
    pub fn new(
        family: RuleFamily,
        panels: usize,
        nodes_per_panel: usize,
    ) -> Result<QuadratureRule> {
        if panels == 0 {
            return Err(Error::InvalidRule("panel count must be >= 1".into()));
        }
        let nodes_per_panel = match family {
            RuleFamily::CompositeMidpoint => 1,
            RuleFamily::CompositeSimpson => 3,
            RuleFamily::GaussLegendreComposite => {
                if nodes_per_panel == 0 || nodes_per_panel > MAX_GAUSS_NODES {
                    return Err(Error::InvalidRule(format!(
                        "Gauss-Legendre nodes per panel must be in 1..={MAX_GAUSS_NODES}, got {nodes_per_panel}"
                    )));
                }
                nodes_per_panel
            }
        };
        Ok(QuadratureRule {
            family,
            panels,
            nodes_per_panel,
        })
    }

    pub fn midpoint(panels: usize) -> Result<QuadratureRule> {
        QuadratureRule::new(RuleFamily::CompositeMidpoint, panels, 1)
    }

    pub fn simpson(panels: usize) -> Result<QuadratureRule> {
        QuadratureRule::new(RuleFamily::CompositeSimpson, panels, 3)
    }

    pub fn gauss_legendre(nodes_per_panel: usize, panels: usize) -> Result<QuadratureRule> {
        QuadratureRule::new(RuleFamily::GaussLegendreComposite, panels, nodes_per_panel)
    }

    pub fn family(&self) -> RuleFamily {
        self.family
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    /// Convergence order used in the Richardson denominator.
    pub fn order(&self) -> u32 {
        match self.family {
            RuleFamily::CompositeMidpoint => 2,
            RuleFamily::CompositeSimpson => 4,
            RuleFamily::GaussLegendreComposite => 2 * self.nodes_per_panel as u32,
        }
    }

    /// Same rule with twice the panels.
    pub fn doubled(&self) -> QuadratureRule {
        QuadratureRule {
            panels: self.panels * 2,
            ..*self
        }
    }

    /// Nodes and weights for a single panel `[lo, hi]`.
    fn panel_nodes(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let h = hi - lo;
        match self.family {
            RuleFamily::CompositeMidpoint => vec![(lo + 0.5 * h, h)],
            RuleFamily::CompositeSimpson => {
                vec![(lo, h / 6.0), (lo + 0.5 * h, 4.0 * h / 6.0), (hi, h / 6.0)]
            }
            RuleFamily::GaussLegendreComposite => {
                let (xs, ws) = gauss_legendre_reference(self.nodes_per_panel);
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * h;
                xs.iter()
                    .zip(ws.iter())
                    .map(|(&x, &w)| (mid + half * x, half * w))
                    .collect()
            }
        }
    }
}

impl Default for QuadratureRule {
    /// Composite Gauss-Legendre, 5 nodes per panel, 32 panels per axis.
    ///
    /// The even panel count keeps the midpoint of any interval on a panel
    /// boundary, which matters for kernels with a kink at the centre.
    fn default() -> Self {
        QuadratureRule::gauss_legendre(DEFAULT_GAUSS_NODES, DEFAULT_PANELS)
            .expect("default rule parameters are valid")
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Roots of the Legendre polynomial found by Newton iteration from the
/// Chebyshev initial guess; the classical weight formula
/// `w = 2 / ((1 - x^2) P_n'(x)^2)` keeps every weight strictly positive.
fn gauss_legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        // the weight uses the derivative at the converged root
        let (_, dp) = legendre_with_derivative(n, x);
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    xs.reverse();
    ws.reverse();
    (xs, ws)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x` via the
/// three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integral value plus a Richardson error estimate from panel doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

/// Integrate a plain closure over an interval at the rule's configured
/// panel count, summing panels in ascending order.
pub(crate) fn integrate_fn_1d<F>(g: &mut F, iv: &Interval, rule: &QuadratureRule) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64> + ?Sized,
{
    let (a, b) = (iv.a(), iv.b());
    let panels = rule.panels();
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels {
            b
        } else {
            a + width * (i + 1) as f64
        };
        let mut panel_sum = 0.0;
        for (x, w) in rule.panel_nodes(lo, hi) {
            panel_sum += w * g(x)?;
        }
        total += panel_sum;
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFinite {
            context: "1D quadrature accumulation".into(),
        })
    }
}

/// Tensor-product integration of a closure over a rectangle; the outer loop
/// runs over the x axis, the inner over y, both ascending.
pub(crate) fn integrate_fn_2d<F>(g: &mut F, rect: &Rectangle, rule: &QuadratureRule) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64> + ?Sized,
{
    let xs = axis_nodes(&rect.x_interval(), rule);
    let ys = axis_nodes(&rect.y_interval(), rule);
    let mut total = 0.0;
    for &(x, wx) in &xs {
        let mut row = 0.0;
        for &(y, wy) in &ys {
            row += wy * g(x, y)?;
        }
        total += wx * row;
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFinite {
            context: "2D quadrature accumulation".into(),
        })
    }
}

fn axis_nodes(iv: &Interval, rule: &QuadratureRule) -> Vec<(f64, f64)> {
    let (a, b) = (iv.a(), iv.b());
    let panels = rule.panels();
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * rule.nodes_per_panel());
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels {
            b
        } else {
            a + width * (i + 1) as f64
        };
        nodes.extend(rule.panel_nodes(lo, hi));
    }
    nodes
}

pub(crate) fn integrate_fn_1d_with_estimate<F>(
    g: &mut F,
    iv: &Interval,
    rule: &QuadratureRule,
) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64> + ?Sized,
{
    let coarse = integrate_fn_1d(g, iv, rule)?;
    let fine = integrate_fn_1d(g, iv, &rule.doubled())?;
    Ok(Integral {
        value: coarse,
        error_estimate: richardson_estimate(coarse, fine, rule.order()),
    })
}

pub(crate) fn integrate_fn_2d_with_estimate<F>(
    g: &mut F,
    rect: &Rectangle,
    rule: &QuadratureRule,
) -> Result<Integral>
where
    F: FnMut(f64, f64) -> Result<f64> + ?Sized,
{
    let coarse = integrate_fn_2d(g, rect, rule)?;
    let fine = integrate_fn_2d(g, rect, &rule.doubled())?;
    Ok(Integral {
        value: coarse,
        error_estimate: richardson_estimate(coarse, fine, rule.order()),
    })
}

fn richardson_estimate(coarse: f64, fine: f64, order: u32) -> f64 {
    let denom = 2f64.powi(order.min(52) as i32) - 1.0;
    (fine - coarse).abs() / denom
}

/// Approximate `∫_a^b f(t) dt` for a one-variable function spec.
pub fn integrate_1d(f: &FunctionSpec, iv: &Interval, rule: &QuadratureRule) -> Result<Integral> {
    let expr = f.require_expression("integrand of a 1D integral")?;
    if expr.arity() > 1 {
        return Err(Error::ArityMismatch(
            "1D integrand must use at most the first variable (t or x)".into(),
        ));
    }
    integrate_fn_1d_with_estimate(&mut |t| expr.eval1(t), iv, rule)
}

/// Approximate `∬ f(x, y) dx dy` over a rectangle via the tensor product of
/// the 1D rule on each axis.
pub fn integrate_2d(f: &FunctionSpec, rect: &Rectangle, rule: &QuadratureRule) -> Result<Integral> {
    let expr = f.require_expression("integrand of a 2D integral")?;
    integrate_fn_2d_with_estimate(&mut |x, y| expr.eval2(x, y), rect, rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv01() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn spec(src: &str) -> FunctionSpec {
        FunctionSpec::parse(src).unwrap()
    }

    #[test]
    fn all_rules_integrate_constants_exactly() {
        for rule in [
            QuadratureRule::midpoint(7).unwrap(),
            QuadratureRule::simpson(3).unwrap(),
            QuadratureRule::gauss_legendre(4, 5).unwrap(),
        ] {
            let r = integrate_1d(&spec("1"), &iv01(), &rule).unwrap();
            assert!((r.value - 1.0).abs() < 1e-15, "{rule:?} -> {}", r.value);
        }
    }

    #[test]
    fn simpson_exact_for_cubics() {
        // ∫_0^1 t^3 dt = 1/4, Simpson integrates degree <= 3 exactly
        let rule = QuadratureRule::simpson(2).unwrap();
        let r = integrate_1d(&spec("t^3"), &iv01(), &rule).unwrap();
        assert!((r.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn kinked_square_kernel_converges() {
        // ∫_0^1 |1-2t|^2 dt = 1/3 by the piecewise antiderivative
        let rule = QuadratureRule::default();
        let r = integrate_1d(&spec("abs(1-2*t)^2"), &iv01(), &rule).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn tensor_product_matches_separable_integrals() {
        // ∬ xy over the unit square = (1/2)(1/2) = 1/4
        let rect = Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let rule = QuadratureRule::gauss_legendre(3, 2).unwrap();
        let r = integrate_2d(&spec("x*y"), &rect, &rule).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14);

        let unit = integrate_2d(&spec("1"), &rect, &rule).unwrap();
        assert!((unit.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn weighted_square_kernel_moment() {
        // ∬ ts |1-2t|^2 |1-2s|^2 over the unit square = (1/12)^2 * 4 = 1/36
        let rect = Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let rule = QuadratureRule::default();
        let r = integrate_2d(&spec("t*s*abs(1-2*t)^2*abs(1-2*s)^2"), &rect, &rule).unwrap();
        assert!((r.value - 1.0 / 36.0).abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn gauss_nodes_strictly_interior_weights_positive() {
        for n in 1..=12 {
            let (xs, ws) = gauss_legendre_reference(n);
            assert_eq!(xs.len(), n);
            for (&x, &w) in xs.iter().zip(ws.iter()) {
                assert!(x > -1.0 && x < 1.0);
                assert!(w > 0.0);
            }
            let total: f64 = ws.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} weight sum {total}");
            // nodes ascending
            for pair in xs.windows(2) {
                assert!(pair[0] < pair[1]);
            }
        }
    }

    #[test]
    fn gauss_five_exact_through_degree_nine() {
        let rule = QuadratureRule::gauss_legendre(5, 1).unwrap();
        for deg in 0..=9u32 {
            let f = spec(&format!("t^{deg}"));
            let r = integrate_1d(&f, &iv01(), &rule).unwrap();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!(
                (r.value - exact).abs() < 1e-14,
                "degree {deg}: {} vs {exact}",
                r.value
            );
        }
    }

    #[test]
    fn error_estimate_shrinks_with_panel_doubling() {
        // smooth non-polynomial integrand
        let f = spec("exp(t)*cos(3*t)");
        let mut last = f64::INFINITY;
        for panels in [1usize, 2, 4, 8] {
            let rule = QuadratureRule::simpson(panels).unwrap();
            let r = integrate_1d(&f, &iv01(), &rule).unwrap();
            assert!(
                r.error_estimate <= last,
                "estimate grew at panels={panels}: {} > {last}",
                r.error_estimate
            );
            last = r.error_estimate;
        }
    }

    #[test]
    fn two_variable_integrand_rejected_in_1d() {
        let err = integrate_1d(&spec("t*s"), &iv01(), &QuadratureRule::default());
        assert!(matches!(err, Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn zero_panels_rejected() {
        assert!(QuadratureRule::simpson(0).is_err());
        assert!(QuadratureRule::gauss_legendre(0, 4).is_err());
    }

    #[test]
    fn non_finite_integrand_reported() {
        // 1/t blows up at the Simpson endpoint node t=0
        let err = integrate_1d(&spec("1/t"), &iv01(), &QuadratureRule::simpson(2).unwrap());
        assert!(err.is_err());
    }
}
