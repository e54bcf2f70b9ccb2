//! Run-description files: a single TOML document with a `version` field, a
//! `command`, and one command-specific section. See the README for the full
//! schema and examples.

use serde::Deserialize;

use isoholder::{
    make_partition, CaseFamily, ConjugateExponents, CornerContext, Domain, FunctionSpec,
    Functional, FuzzConfig, IdentitySign, Partition, PartitionKind, QuadratureRule, Rectangle,
    RuleFamily,
};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Bound,
    Chain,
    Hh,
    Moment,
    Fuzz,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Bound => "bound",
            CommandKind::Chain => "chain",
            CommandKind::Hh => "hh",
            CommandKind::Moment => "moment",
            CommandKind::Fuzz => "fuzz",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub command: CommandKind,
    #[serde(default)]
    pub output: OutputConfig,
    pub instance: Option<InstanceConfig>,
    pub hh: Option<HhConfig>,
    pub moment: Option<MomentConfig>,
    pub fuzz: Option<FuzzSection>,
    pub quadrature: Option<QuadratureConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// table | csv | json-lines
    pub format: Option<String>,
    pub path: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub id: Option<String>,
    pub p: f64,
    pub domain: DomainConfig,
    /// Weight function; defaults to the constant 1.
    pub w: Option<FunctionInput>,
    pub f: FunctionInput,
    pub g: FunctionInput,
    /// Per-point measure weights for discrete domains (row-major on grids).
    pub weights: Option<Vec<f64>>,
    pub partition: Option<PartitionConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainConfig {
    Interval { a: f64, b: f64 },
    Rectangle { a: f64, b: f64, c: f64, d: f64 },
    IndexRange { n: usize },
    IndexGrid { n: usize, m: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FunctionInput {
    Expression(String),
    Samples(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionConfig {
    pub kind: PartitionKind,
    pub m: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HhConfig {
    pub id: Option<String>,
    pub p: f64,
    pub f: String,
    pub f_st: String,
    pub rect: RectConfig,
    /// corrected | paper-verbatim
    pub sign: Option<IdentitySign>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentConfig {
    pub id: Option<String>,
    pub p: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzSection {
    pub seed: u64,
    pub trials: u64,
    pub case: CaseFamily,
    pub n: Option<[usize; 2]>,
    pub m: Option<[usize; 2]>,
    pub p: Option<[f64; 2]>,
    pub values: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub family: Option<RuleFamily>,
    pub panels: Option<usize>,
    pub nodes_per_panel: Option<usize>,
}

/// Errors before any computation starts; exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type ConfigResult<T> = Result<T, ConfigError>;

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

pub fn parse_config(text: &str) -> ConfigResult<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
    if cfg.version != CONFIG_VERSION {
        return Err(bad(format!(
            "unsupported config version {} (expected {CONFIG_VERSION})",
            cfg.version
        )));
    }
    Ok(cfg)
}

pub fn build_rule(q: &Option<QuadratureConfig>) -> ConfigResult<QuadratureRule> {
    let Some(q) = q else {
        return Ok(QuadratureRule::default());
    };
    let family = q.family.unwrap_or(RuleFamily::GaussLegendreComposite);
    let panels = q.panels.unwrap_or(isoholder::quadrature::DEFAULT_PANELS);
    let nodes = q
        .nodes_per_panel
        .unwrap_or(isoholder::quadrature::DEFAULT_GAUSS_NODES);
    QuadratureRule::new(family, panels, nodes).map_err(|e| bad(e.to_string()))
}

/// Everything a bound/chain run needs, constructed from the `[instance]`
/// section.
pub struct BuiltInstance {
    pub id: String,
    pub functional: Functional,
    pub w: FunctionSpec,
    pub f: FunctionSpec,
    pub g: FunctionSpec,
    pub exps: ConjugateExponents,
    pub partition: Option<Partition>,
}

fn build_function(input: &FunctionInput, what: &str) -> ConfigResult<FunctionSpec> {
    match input {
        FunctionInput::Expression(src) => {
            FunctionSpec::parse(src).map_err(|e| bad(format!("{what}: {e}")))
        }
        FunctionInput::Samples(values) => Ok(FunctionSpec::samples(values.clone())),
    }
}

pub fn build_instance(
    instance: &Option<InstanceConfig>,
    quadrature: &Option<QuadratureConfig>,
    need_partition: bool,
) -> ConfigResult<BuiltInstance> {
    let inst = instance
        .as_ref()
        .ok_or_else(|| bad("missing [instance] section"))?;
    let domain = match inst.domain {
        DomainConfig::Interval { a, b } => Domain::interval(a, b),
        DomainConfig::Rectangle { a, b, c, d } => Domain::rectangle(a, b, c, d),
        DomainConfig::IndexRange { n } => Domain::index_range(n),
        DomainConfig::IndexGrid { n, m } => Domain::index_grid(n, m),
    }
    .map_err(|e| bad(format!("domain: {e}")))?;

    let rule = build_rule(quadrature)?;
    let functional = match domain {
        Domain::Interval(iv) => {
            if inst.weights.is_some() {
                return Err(bad("weights only apply to discrete domains"));
            }
            Functional::integral_1d(iv, rule)
        }
        Domain::Rectangle(rect) => {
            if inst.weights.is_some() {
                return Err(bad("weights only apply to discrete domains"));
            }
            Functional::integral_2d(rect, rule)
        }
        _ => match &inst.weights {
            Some(w) => Functional::weighted_sum(domain, w.clone())
                .map_err(|e| bad(format!("weights: {e}")))?,
            None => Functional::discrete_sum(domain).expect("domain is discrete"),
        },
    };

    let exps = ConjugateExponents::new(inst.p).map_err(|e| bad(format!("p: {e}")))?;
    let w = match &inst.w {
        Some(input) => build_function(input, "w")?,
        None => FunctionSpec::constant(1.0),
    };
    let f = build_function(&inst.f, "f")?;
    let g = build_function(&inst.g, "g")?;

    let partition = match &inst.partition {
        Some(pc) => Some(
            make_partition(pc.kind, &domain, pc.m).map_err(|e| bad(format!("partition: {e}")))?,
        ),
        None => None,
    };
    if need_partition && partition.is_none() {
        return Err(bad(
            "the chain command requires an [instance.partition] section",
        ));
    }

    Ok(BuiltInstance {
        id: inst.id.clone().unwrap_or_else(|| "instance".to_string()),
        functional,
        w,
        f,
        g,
        exps,
        partition,
    })
}

pub struct BuiltHh {
    pub id: String,
    pub ctx: CornerContext,
}

pub fn build_hh(
    hh: &Option<HhConfig>,
    quadrature: &Option<QuadratureConfig>,
    force_verbatim: bool,
) -> ConfigResult<BuiltHh> {
    let hh = hh.as_ref().ok_or_else(|| bad("missing [hh] section"))?;
    let rect = Rectangle::new(hh.rect.a, hh.rect.b, hh.rect.c, hh.rect.d)
        .map_err(|e| bad(format!("rect: {e}")))?;
    let f = FunctionSpec::parse(&hh.f).map_err(|e| bad(format!("f: {e}")))?;
    let f_st = FunctionSpec::parse(&hh.f_st).map_err(|e| bad(format!("f_st: {e}")))?;
    let exps = ConjugateExponents::new(hh.p).map_err(|e| bad(format!("p: {e}")))?;
    let sign = if force_verbatim {
        IdentitySign::PaperVerbatim
    } else {
        hh.sign.unwrap_or_default()
    };
    let mut ctx = CornerContext::new(rect, f, f_st, exps)
        .map_err(|e| bad(e.to_string()))?
        .with_sign(sign);
    if quadrature.is_some() {
        let rule = build_rule(quadrature)?;
        ctx = ctx.with_rule(rule).map_err(|e| bad(e.to_string()))?;
    }
    Ok(BuiltHh {
        id: hh.id.clone().unwrap_or_else(|| "hh".to_string()),
        ctx,
    })
}

pub fn build_fuzz(
    fuzz: &Option<FuzzSection>,
    seed_override: Option<u64>,
) -> ConfigResult<FuzzConfig> {
    let fz = fuzz.as_ref().ok_or_else(|| bad("missing [fuzz] section"))?;
    let mut cfg = FuzzConfig::new(seed_override.unwrap_or(fz.seed), fz.trials, fz.case);
    if let Some([lo, hi]) = fz.n {
        cfg.n_range = (lo, hi);
    }
    if let Some([lo, hi]) = fz.m {
        cfg.m_range = (lo, hi);
    }
    if let Some([lo, hi]) = fz.p {
        cfg.p_range = (lo, hi);
    }
    if let Some([lo, hi]) = fz.values {
        cfg.value_range = (lo, hi);
    }
    cfg.validate().map_err(|e| bad(e.to_string()))?;
    Ok(cfg)
}

pub fn build_moment(moment: &Option<MomentConfig>) -> ConfigResult<(String, Vec<f64>)> {
    let m = moment
        .as_ref()
        .ok_or_else(|| bad("missing [moment] section"))?;
    if m.p.is_empty() {
        return Err(bad("moment: the p list must not be empty"));
    }
    Ok((
        m.id.clone().unwrap_or_else(|| "moment".to_string()),
        m.p.clone(),
    ))
}
