//! Seeded randomized verification of the refinement chain.
//!
//! Instances are drawn from one of five built-in families and each trial
//! runs the full chain check (or the corner-bound comparison); the summary
//! reports violation counts, the worst relative slack seen, and tightness
//! statistics of refined/classical.
//!
//! Randomness comes from SplitMix64, a counter-based 64-bit generator that
//! is trivially portable: the same seed produces the same byte-for-byte
//! summary on every platform. Per-trial sub-seeds are derived from
//! `(seed, trial index)`, so results do not depend on evaluation order.
//! Values are drawn log-uniformly over the configured range to stress scale
//! disparities.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::domain::{Domain, Interval, Rectangle};
use crate::error::{Error, Result};
use crate::expr::{Axis, Expr};
use crate::functional::{make_partition, FunctionSpec, Functional, Partition, PartitionKind};
use crate::hh::{bound_classical_from_corners, bound_improved_from_corners};
use crate::holder::{verify_chain, ChainReport, ConjugateExponents, CHAIN_REL_TOLERANCE};
use crate::quadrature::QuadratureRule;

/// SplitMix64: `state` advances by the golden-ratio increment and each
/// output is a finalizing mix of the state. Counter-based, so streams can
/// be indexed directly.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Log-uniform over `[lo, hi]`, `lo > 0`.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (self.uniform(lo.ln(), hi.ln())).exp()
    }

    /// Uniform integer in `lo..=hi`. The modulo bias is negligible for the
    /// small ranges used here.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as usize
    }
}

/// Sub-seed for trial `index` of a run seeded with `seed`; SplitMix64's
/// counter form evaluated directly at that index.
fn trial_seed(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add((index.wrapping_add(1)).wrapping_mul(GOLDEN_GAMMA)))
}

/// Instance family to fuzz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseFamily {
    /// Weighted sums over an index range.
    #[serde(rename = "discrete-1d")]
    Discrete1d,
    /// Weighted sums over an index grid.
    #[serde(rename = "discrete-2d")]
    Discrete2d,
    /// Integrals of piecewise-linear functions on `[0, 1]`.
    #[serde(rename = "integral-1d")]
    Integral1d,
    /// Integrals of products of piecewise-linear factors on `[0, 1]²`.
    #[serde(rename = "integral-2d")]
    Integral2d,
    /// Random corner quadruples through the two corner-bound formulas.
    #[serde(rename = "corner-bounds")]
    CornerBounds,
}

impl CaseFamily {
    pub const ALL: [CaseFamily; 5] = [
        CaseFamily::Discrete1d,
        CaseFamily::Discrete2d,
        CaseFamily::Integral1d,
        CaseFamily::Integral2d,
        CaseFamily::CornerBounds,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseFamily::Discrete1d => "discrete-1d",
            CaseFamily::Discrete2d => "discrete-2d",
            CaseFamily::Integral1d => "integral-1d",
            CaseFamily::Integral2d => "integral-2d",
            CaseFamily::CornerBounds => "corner-bounds",
        }
    }
}

/// Configuration of one fuzzing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    pub case: CaseFamily,
    /// Range of the first (or only) size dimension.
    pub n_range: (usize, usize),
    /// Range of the second size dimension and of uniform partition sizes.
    pub m_range: (usize, usize),
    /// Exponent range, standard regime only.
    pub p_range: (f64, f64),
    /// Function values are drawn log-uniformly from this range.
    pub value_range: (f64, f64),
}

impl FuzzConfig {
    pub fn new(seed: u64, trials: u64, case: CaseFamily) -> FuzzConfig {
        FuzzConfig {
            seed,
            trials,
            case,
            n_range: (2, 8),
            m_range: (2, 5),
            p_range: (1.1, 10.0),
            value_range: (0.1, 10.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_range.0 < 1 || self.n_range.0 > self.n_range.1 {
            return Err(Error::InvalidConfig(format!(
                "n range {:?} is empty or starts below 1",
                self.n_range
            )));
        }
        if self.m_range.0 < 1 || self.m_range.0 > self.m_range.1 {
            return Err(Error::InvalidConfig(format!(
                "m range {:?} is empty or starts below 1",
                self.m_range
            )));
        }
        if !(self.p_range.0 > 1.0 + 1e-6) || self.p_range.0 > self.p_range.1 {
            return Err(Error::InvalidConfig(format!(
                "p range {:?} must lie inside the standard regime (p > 1)",
                self.p_range
            )));
        }
        if !(self.value_range.0 > 0.0) || self.value_range.0 > self.value_range.1 {
            return Err(Error::InvalidConfig(format!(
                "value range {:?} must be positive and nonempty",
                self.value_range
            )));
        }
        Ok(())
    }
}

/// Min/mean/max of the refined/classical ratio across trials; all `None`
/// when no ratio was defined (zero trials).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessStats {
    pub min: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
}

/// Accumulated outcome of a fuzzing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub case: String,
    pub seed: u64,
    pub trials_run: u64,
    /// Trials whose chain (or bound ordering) check failed.
    pub violations: u64,
    /// Trials that errored numerically; counted, never thrown.
    pub errors: u64,
    pub min_relative_slack: Option<f64>,
    /// Deterministic rendering of the instance with the smallest slack.
    pub worst_instance: Option<String>,
    pub tightness: TightnessStats,
}

struct Accumulator {
    violations: u64,
    errors: u64,
    min_slack: Option<f64>,
    worst: Option<String>,
    ratio_min: Option<f64>,
    ratio_max: Option<f64>,
    ratio_sum: f64,
    ratio_count: u64,
}

impl Accumulator {
    fn new() -> Accumulator {
        Accumulator {
            violations: 0,
            errors: 0,
            min_slack: None,
            worst: None,
            ratio_min: None,
            ratio_max: None,
            ratio_sum: 0.0,
            ratio_count: 0,
        }
    }

    fn record(
        &mut self,
        slack: f64,
        pass: bool,
        ratio: Option<f64>,
        describe: impl FnOnce() -> String,
    ) {
        if !pass {
            self.violations += 1;
        }
        if self.min_slack.is_none_or(|m| slack < m) {
            self.min_slack = Some(slack);
            self.worst = Some(describe());
        }
        if let Some(r) = ratio {
            self.ratio_min = Some(self.ratio_min.map_or(r, |m| m.min(r)));
            self.ratio_max = Some(self.ratio_max.map_or(r, |m| m.max(r)));
            self.ratio_sum += r;
            self.ratio_count += 1;
        }
    }

    fn finish(self, cfg: &FuzzConfig, trials_run: u64) -> FuzzSummary {
        FuzzSummary {
            case: cfg.case.name().to_string(),
            seed: cfg.seed,
            trials_run,
            violations: self.violations,
            errors: self.errors,
            min_relative_slack: self.min_slack,
            worst_instance: self.worst,
            tightness: TightnessStats {
                min: self.ratio_min,
                mean: if self.ratio_count > 0 {
                    Some(self.ratio_sum / self.ratio_count as f64)
                } else {
                    None
                },
                max: self.ratio_max,
            },
        }
    }
}

/// Run the configured number of trials, verifying the chain on every one.
///
/// Deterministic: identical configs produce identical summaries
/// byte-for-byte. Per-trial numeric failures increment `errors` and the run
/// continues.
pub fn fuzz_chain(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    cfg.validate()?;
    let mut acc = Accumulator::new();
    for index in 0..cfg.trials {
        let mut rng = SplitMix64::new(trial_seed(cfg.seed, index));
        match run_trial(cfg, &mut rng) {
            Ok(outcome) => {
                acc.record(outcome.slack, outcome.pass, outcome.ratio, || {
                    outcome.description.clone()
                });
            }
            Err(_) => acc.errors += 1,
        }
    }
    Ok(acc.finish(cfg, cfg.trials))
}

/// Same trial loop as [`fuzz_chain`], read for its tightness statistics:
/// how far below 1 the refined/classical ratio sits across the family.
pub fn tightness_stats(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    fuzz_chain(cfg)
}

struct TrialOutcome {
    slack: f64,
    pass: bool,
    ratio: Option<f64>,
    description: String,
}

fn run_trial(cfg: &FuzzConfig, rng: &mut SplitMix64) -> Result<TrialOutcome> {
    match cfg.case {
        CaseFamily::Discrete1d => discrete_1d_trial(cfg, rng),
        CaseFamily::Discrete2d => discrete_2d_trial(cfg, rng),
        CaseFamily::Integral1d => integral_1d_trial(cfg, rng),
        CaseFamily::Integral2d => integral_2d_trial(cfg, rng),
        CaseFamily::CornerBounds => corner_trial(cfg, rng),
    }
}

fn outcome_from_chain(report: ChainReport, description: String) -> TrialOutcome {
    let ratio = if report.classical > 0.0 {
        Some(report.refined / report.classical)
    } else {
        None
    };
    TrialOutcome {
        slack: report.min_slack,
        pass: report.pass,
        ratio,
        description,
    }
}

fn draw_values(rng: &mut SplitMix64, count: usize, range: (f64, f64)) -> Vec<f64> {
    (0..count)
        .map(|_| rng.log_uniform(range.0, range.1))
        .collect()
}

fn describe_values(label: &str, values: &[f64], out: &mut String) {
    let _ = write!(out, " {label}=[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out.push(']');
}

fn pick_partition(
    rng: &mut SplitMix64,
    domain: &Domain,
    pair_kind: PartitionKind,
    m_range: (usize, usize),
) -> Result<(Partition, String)> {
    if rng.next_f64() < 0.5 {
        let part = make_partition(pair_kind, domain, None)?;
        Ok((part, pair_kind.to_string()))
    } else {
        let m = rng.int_in(m_range.0, m_range.1);
        let part = make_partition(PartitionKind::Uniform, domain, Some(m))?;
        Ok((part, format!("uniform({m})")))
    }
}

fn discrete_1d_trial(cfg: &FuzzConfig, rng: &mut SplitMix64) -> Result<TrialOutcome> {
    let n = rng.int_in(cfg.n_range.0.max(2), cfg.n_range.1.max(2));
    let p = rng.uniform(cfg.p_range.0, cfg.p_range.1);
    let weights = draw_values(rng, n, cfg.value_range);
    let f = draw_values(rng, n, cfg.value_range);
    let g = draw_values(rng, n, cfg.value_range);
    let domain = Domain::index_range(n)?;
    let a = Functional::weighted_sum(domain, weights.clone())?;
    let (part, part_name) = pick_partition(rng, &domain, PartitionKind::DiscretePair, cfg.m_range)?;
    let exps = ConjugateExponents::new(p)?;
    let report = verify_chain(
        &a,
        &FunctionSpec::constant(1.0),
        &FunctionSpec::samples(f.clone()),
        &FunctionSpec::samples(g.clone()),
        &exps,
        &part,
    )?;
    let mut desc = format!("discrete-1d n={n} p={p} partition={part_name}");
    describe_values("w", &weights, &mut desc);
    describe_values("f", &f, &mut desc);
    describe_values("g", &g, &mut desc);
    Ok(outcome_from_chain(report, desc))
}

fn discrete_2d_trial(cfg: &FuzzConfig, rng: &mut SplitMix64) -> Result<TrialOutcome> {
    let n = rng.int_in(cfg.n_range.0.max(2), cfg.n_range.1.max(2));
    let m = rng.int_in(cfg.m_range.0.max(2), cfg.m_range.1.max(2));
    let p = rng.uniform(cfg.p_range.0, cfg.p_range.1);
    let weights = draw_values(rng, n * m, cfg.value_range);
    let f = draw_values(rng, n * m, cfg.value_range);
    let g = draw_values(rng, n * m, cfg.value_range);
    let domain = Domain::index_grid(n, m)?;
    let a = Functional::weighted_sum(domain, weights.clone())?;
    let (part, part_name) = pick_partition(
        rng,
        &domain,
        PartitionKind::DiscreteBilinearQuad,
        cfg.m_range,
    )?;
    let exps = ConjugateExponents::new(p)?;
    let report = verify_chain(
        &a,
        &FunctionSpec::constant(1.0),
        &FunctionSpec::samples(f.clone()),
        &FunctionSpec::samples(g.clone()),
        &exps,
        &part,
    )?;
    let mut desc = format!("discrete-2d n={n} m={m} p={p} partition={part_name}");
    describe_values("w", &weights, &mut desc);
    describe_values("f", &f, &mut desc);
    describe_values("g", &g, &mut desc);
    Ok(outcome_from_chain(report, desc))
}

/// A random piecewise-linear function on `[0, 1]` with at most 8 knots,
/// expressed through `abs` hat terms: `c0 + c1 t + Σ γ_i |t - k_i|`.
fn piecewise_linear(rng: &mut SplitMix64, range: (f64, f64), var: Axis) -> Expr {
    let knots = rng.int_in(0, 6);
    let amp = |rng: &mut SplitMix64| {
        let v = rng.log_uniform(range.0, range.1);
        if rng.next_f64() < 0.5 {
            -v
        } else {
            v
        }
    };
    let mut e = Expr::constant(rng.log_uniform(range.0, range.1))
        + Expr::constant(amp(rng)) * Expr::var(var);
    for _ in 0..knots {
        let k = rng.next_f64();
        let hat = Expr::func(crate::expr::Func::Abs, Expr::var(var) - Expr::constant(k));
        e = e + Expr::constant(amp(rng)) * hat;
    }
    e
}

fn light_rule_1d() -> QuadratureRule {
    QuadratureRule::gauss_legendre(3, 4).expect("valid rule")
}

fn light_rule_2d() -> QuadratureRule {
    QuadratureRule::gauss_legendre(3, 2).expect("valid rule")
}

fn integral_1d_trial(cfg: &FuzzConfig, rng: &mut SplitMix64) -> Result<TrialOutcome> {
    let p = rng.uniform(cfg.p_range.0, cfg.p_range.1);
    let iv = Interval::new(0.0, 1.0)?;
    let domain = Domain::Interval(iv);
    let f = piecewise_linear(rng, cfg.value_range, Axis::First);
    let g = piecewise_linear(rng, cfg.value_range, Axis::First);
    let a = Functional::integral_1d(iv, light_rule_1d());
    let (part, part_name) = pick_partition(rng, &domain, PartitionKind::LinearPair, cfg.m_range)?;
    let exps = ConjugateExponents::new(p)?;
    let report = verify_chain(
        &a,
        &FunctionSpec::constant(1.0),
        &FunctionSpec::Expression(f.clone()),
        &FunctionSpec::Expression(g.clone()),
        &exps,
        &part,
    )?;
    let desc = format!("integral-1d p={p} partition={part_name} f={f} g={g}");
    Ok(outcome_from_chain(report, desc))
}

fn integral_2d_trial(cfg: &FuzzConfig, rng: &mut SplitMix64) -> Result<TrialOutcome> {
    let p = rng.uniform(cfg.p_range.0, cfg.p_range.1);
    let rect = Rectangle::new(0.0, 1.0, 0.0, 1.0)?;
    let domain = Domain::Rectangle(rect);
    let separable = |rng: &mut SplitMix64| {
        piecewise_linear(rng, cfg.value_range, Axis::First)
            * piecewise_linear(rng, cfg.value_range, Axis::Second)
    };
    let f = separable(rng);
    let g = separable(rng);
    let a = Functional::integral_2d(rect, light_rule_2d());
    let (part, part_name) = pick_partition(rng, &domain, PartitionKind::BilinearQuad, cfg.m_range)?;
    let exps = ConjugateExponents::new(p)?;
    let report = verify_chain(
        &a,
        &FunctionSpec::constant(1.0),
        &FunctionSpec::Expression(f.clone()),
        &FunctionSpec::Expression(g.clone()),
        &exps,
        &part,
    )?;
    let desc = format!("integral-2d p={p} partition={part_name} f={f} g={g}");
    Ok(outcome_from_chain(report, desc))
}

fn corner_trial(cfg: &FuzzConfig, rng: &mut SplitMix64) -> Result<TrialOutcome> {
    let p = rng.uniform(cfg.p_range.0, cfg.p_range.1);
    let corners = [
        rng.log_uniform(cfg.value_range.0, cfg.value_range.1),
        rng.log_uniform(cfg.value_range.0, cfg.value_range.1),
        rng.log_uniform(cfg.value_range.0, cfg.value_range.1),
        rng.log_uniform(cfg.value_range.0, cfg.value_range.1),
    ];
    let rect = Rectangle::new(0.0, 1.0, 0.0, 1.0)?;
    let exps = ConjugateExponents::new(p)?;
    let classical = bound_classical_from_corners(corners, &rect, &exps);
    let improved = bound_improved_from_corners(corners, &rect, &exps).bound;
    let scale = classical.max(improved).max(f64::MIN_POSITIVE);
    let slack = (classical - improved) / scale;
    let pass = slack >= -CHAIN_REL_TOLERANCE;
    let ratio = if classical > 0.0 {
        Some(improved / classical)
    } else {
        None
    };
    Ok(TrialOutcome {
        slack,
        pass,
        ratio,
        description: format!(
            "corner-bounds p={p} corners=[{},{},{},{}]",
            corners[0], corners[1], corners[2], corners[3]
        ),
    })
}
