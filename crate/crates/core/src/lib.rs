//! Classical and refined Hölder bounds for positive isotonic linear
//! functionals.
//!
//! The central objects are [`Functional`] — a weighted sum over an index set
//! or a quadrature-realized integral over an interval or rectangle — and
//! [`Partition`], an ordered family of nonnegative weight functions summing
//! to one pointwise. For conjugate exponents `p, q > 1`, splitting the
//! functional through a partition refines Hölder's inequality into the
//! two-sided chain
//!
//! ```text
//! A(wfg)  <=  Σ_i A^{1/p}(α_i w f^p) A^{1/q}(α_i w g^q)  <=  A^{1/p}(w f^p) A^{1/q}(w g^q)
//! ```
//!
//! so the partitioned sum is a bound at least as sharp as the classical
//! product. The crate computes all three quantities ([`classical_holder`],
//! [`improved_holder`], [`verify_chain`]), handles the reversed regime
//! `0 < p < 1` ([`reversed_holder`]), applies the refinement to
//! Hermite-Hadamard-type corner bounds on rectangles ([`hh`]), and ships a
//! seeded randomized search for chain violations ([`fuzz`]).
//!
//! ```
//! use isoholder::{
//!     make_partition, verify_chain, ConjugateExponents, Domain, FunctionSpec,
//!     Functional, PartitionKind,
//! };
//!
//! // a = (1, 2), b = (1, 1), p = 2, refined through k/n, (n-k)/n weights
//! let domain = Domain::index_range(2).unwrap();
//! let a = Functional::discrete_sum(domain).unwrap();
//! let part = make_partition(PartitionKind::DiscretePair, &domain, None).unwrap();
//! let exps = ConjugateExponents::new(2.0).unwrap();
//! let chain = verify_chain(
//!     &a,
//!     &FunctionSpec::constant(1.0),
//!     &FunctionSpec::samples(vec![1.0, 2.0]),
//!     &FunctionSpec::samples(vec![1.0, 1.0]),
//!     &exps,
//!     &part,
//! )
//! .unwrap();
//! assert!(chain.pass);
//! assert!(chain.lhs <= chain.refined && chain.refined <= chain.classical);
//! ```

// `!(x > 0.0)` rejects NaN along with nonpositives; partial_cmp would obscure that
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod error;
pub mod expr;
pub mod functional;
pub mod fuzz;
pub mod hh;
pub mod holder;
pub mod quadrature;

pub use domain::{Domain, EvalPoint, Interval, Rectangle};
pub use error::{Error, Result};
pub use functional::{
    make_partition, parse_function, FunctionSpec, Functional, Indicator, Partition, PartitionKind,
    PARTITION_TOLERANCE,
};
pub use fuzz::{fuzz_chain, tightness_stats, CaseFamily, FuzzConfig, FuzzSummary, SplitMix64};
pub use hh::{
    compare_corner_bounds, corner_bound_classical, corner_bound_improved, hh_kernel_rhs,
    hh_left_side, kernel_moment, kernel_moment_closed_form, kernel_moments_all, verify_hh_identity,
    CornerBounds, CornerContext, IdentitySign, ImprovedBound,
};
pub use holder::{
    classical_holder, conjugate_of, improved_holder, reversed_holder, verify_chain, young_gap,
    BoundReport, ChainReport, ConjugateExponents, Regime, YoungGap, CHAIN_REL_TOLERANCE,
};
pub use quadrature::{integrate_1d, integrate_2d, Integral, QuadratureRule, RuleFamily};
