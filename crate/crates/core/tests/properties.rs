//! Property suite: linearity and isotonicity of functionals, partition
//! completeness, restriction identities, quadrature exactness, and the
//! two-sided refinement chain on random instances.

use proptest::prelude::*;

use isoholder::{
    classical_holder, improved_holder, make_partition, reversed_holder, verify_chain, young_gap,
    ConjugateExponents, Domain, EvalPoint, FunctionSpec, Functional, Indicator, Partition,
    PartitionKind, QuadratureRule, SplitMix64,
};

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= tol * scale
}

/// Exact antiderivative of a dense polynomial, the oracle for quadrature.
fn poly_integral(coeffs: &[f64], a: f64, b: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * (b.powi(i as i32 + 1) - a.powi(i as i32 + 1)) / (i as f64 + 1.0))
        .sum()
}

/// Horner-form expression for a dense polynomial in one axis.
fn poly_expr(coeffs: &[f64], axis: isoholder::expr::Axis) -> isoholder::expr::Expr {
    use isoholder::expr::Expr;
    let mut it = coeffs.iter().rev();
    let mut e = Expr::constant(*it.next().expect("nonempty coefficients"));
    for c in it {
        e = e * Expr::var(axis) + Expr::constant(*c);
    }
    e
}

proptest! {
    /// A(αf + βg) = α A(f) + β A(g) on discrete domains (exact arithmetic path).
    #[test]
    fn functional_linearity(
        (n, weights, f, g) in (2usize..=12).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0.0..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
        )),
        alpha in -10.0..10.0f64,
        beta in -10.0..10.0f64,
    ) {
        let domain = Domain::index_range(n).unwrap();
        let a = Functional::weighted_sum(domain, weights).unwrap();
        let combo: Vec<f64> = f.iter().zip(&g).map(|(x, y)| alpha * x + beta * y).collect();
        let lhs = a.evaluate(&FunctionSpec::samples(combo)).unwrap();
        let rhs = alpha * a.evaluate(&FunctionSpec::samples(f)).unwrap()
            + beta * a.evaluate(&FunctionSpec::samples(g)).unwrap();
        prop_assert!(rel_close(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    }

    /// f >= g pointwise implies A(f) >= A(g) (isotonicity, condition A2).
    #[test]
    fn functional_isotonicity(
        (n, weights, g, bumps) in (2usize..=12).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0.0..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(0.0..5.0f64, n),
        )),
    ) {
        let domain = Domain::index_range(n).unwrap();
        let a = Functional::weighted_sum(domain, weights).unwrap();
        let f: Vec<f64> = g.iter().zip(&bumps).map(|(x, d)| x + d).collect();
        let af = a.evaluate(&FunctionSpec::samples(f)).unwrap();
        let ag = a.evaluate(&FunctionSpec::samples(g)).unwrap();
        prop_assert!(af >= ag - 1e-12 * (1.0 + ag.abs()));
    }

    /// A(f χ_pre) + A(f χ_suf) = A(f) and the restricted functional is
    /// normalized, for prefix/suffix splits of a weighted sum.
    #[test]
    fn restriction_decomposition(
        (n, weights, f, split) in (2usize..=12).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0.01..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
            1..n,
        )),
    ) {
        let domain = Domain::index_range(n).unwrap();
        let a = Functional::weighted_sum(domain, weights).unwrap();
        let spec = FunctionSpec::samples(f);
        let one = FunctionSpec::constant(1.0);
        let prefix = Indicator::IndexSpan { lo: 1, hi: split };
        let suffix = Indicator::IndexSpan { lo: split + 1, hi: n };

        let whole = a.evaluate(&spec).unwrap();
        let parts = a.evaluate_masked(&spec, &prefix).unwrap()
            + a.evaluate_masked(&spec, &suffix).unwrap();
        prop_assert!(rel_close(parts, whole, 1e-12));

        let mass = a.evaluate_masked(&one, &prefix).unwrap()
            + a.evaluate_masked(&one, &suffix).unwrap();
        prop_assert!(rel_close(mass, a.evaluate(&one).unwrap(), 1e-12));

        let b = a.restricted(&prefix).unwrap();
        prop_assert!((b.evaluate(&one).unwrap() - 1.0).abs() <= 1e-12);
    }

    /// Composite Simpson integrates every cubic exactly on any panel count.
    #[test]
    fn simpson_polynomial_exactness(
        coeffs in prop::collection::vec(-10.0..10.0f64, 4),
        (a, width) in (-5.0..5.0f64, 0.1..5.0f64),
        panels in 1usize..=8,
    ) {
        let b = a + width;
        let iv = isoholder::Interval::new(a, b).unwrap();
        let rule = QuadratureRule::simpson(panels).unwrap();
        let f = FunctionSpec::Expression(poly_expr(&coeffs, isoholder::expr::Axis::First));
        let got = isoholder::integrate_1d(&f, &iv, &rule).unwrap().value;
        let exact = poly_integral(&coeffs, a, b);
        let scale = coeffs.iter().map(|c| c.abs()).sum::<f64>()
            * width.max(1.0) * b.abs().max(a.abs()).max(1.0).powi(3);
        prop_assert!((got - exact).abs() <= 1e-13 * scale.max(1.0), "{got} vs {exact}");
    }

    /// Tensor-product consistency: ∬ f(x) g(y) = (∫f)(∫g).
    #[test]
    fn tensor_product_consistency(
        fx in prop::collection::vec(-5.0..5.0f64, 4),
        gy in prop::collection::vec(-5.0..5.0f64, 4),
    ) {
        use isoholder::expr::Axis;
        let rect = isoholder::Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let rule = QuadratureRule::gauss_legendre(4, 2).unwrap();
        let product = FunctionSpec::Expression(
            poly_expr(&fx, Axis::First) * poly_expr(&gy, Axis::Second),
        );
        let together = isoholder::integrate_2d(&product, &rect, &rule).unwrap().value;
        let iv = isoholder::Interval::new(0.0, 1.0).unwrap();
        let fx_spec = FunctionSpec::Expression(poly_expr(&fx, Axis::First));
        let gy_spec = FunctionSpec::Expression(poly_expr(&gy, Axis::First));
        let apart = isoholder::integrate_1d(&fx_spec, &iv, &rule).unwrap().value
            * isoholder::integrate_1d(&gy_spec, &iv, &rule).unwrap().value;
        prop_assert!(rel_close(together, apart, 1e-12), "{together} vs {apart}");
    }

    /// The chain lhs <= refined <= classical on random 1D discrete
    /// instances, through both built-in partition kinds.
    #[test]
    fn chain_discrete_1d(
        (n, weights, f, g) in (2usize..=16).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0.001..10.0f64, n),
            prop::collection::vec(0.001..10.0f64, n),
            prop::collection::vec(0.001..10.0f64, n),
        )),
        p in 1.1..10.0f64,
        m in 2usize..=5,
    ) {
        let domain = Domain::index_range(n).unwrap();
        let a = Functional::weighted_sum(domain, weights).unwrap();
        let exps = ConjugateExponents::new(p).unwrap();
        let f = FunctionSpec::samples(f);
        let g = FunctionSpec::samples(g);
        let one = FunctionSpec::constant(1.0);
        for part in [
            make_partition(PartitionKind::DiscretePair, &domain, None).unwrap(),
            make_partition(PartitionKind::Uniform, &domain, Some(m)).unwrap(),
        ] {
            let c = verify_chain(&a, &one, &f, &g, &exps, &part).unwrap();
            prop_assert!(c.min_slack >= -1e-10, "slack {} on {c:?}", c.min_slack);
            prop_assert!(c.pass);
        }
    }

    /// Same chain on 2D grids through the bilinear grid partition.
    #[test]
    fn chain_discrete_2d(
        (n, m, f, g) in (2usize..=5, 2usize..=5).prop_flat_map(|(n, m)| (
            Just(n),
            Just(m),
            prop::collection::vec(0.001..10.0f64, n * m),
            prop::collection::vec(0.001..10.0f64, n * m),
        )),
        p in 1.1..10.0f64,
    ) {
        let domain = Domain::index_grid(n, m).unwrap();
        let a = Functional::discrete_sum(domain).unwrap();
        let exps = ConjugateExponents::new(p).unwrap();
        let part = make_partition(PartitionKind::DiscreteBilinearQuad, &domain, None).unwrap();
        let c = verify_chain(
            &a,
            &FunctionSpec::constant(1.0),
            &FunctionSpec::samples(f),
            &FunctionSpec::samples(g),
            &exps,
            &part,
        ).unwrap();
        prop_assert!(c.min_slack >= -1e-10, "slack {}", c.min_slack);
    }

    /// Uniform m-term partitions collapse the refinement: every term is
    /// classical/m, so refined = classical.
    #[test]
    fn uniform_partition_matches_classical(
        (n, f, g) in (2usize..=10).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0.001..10.0f64, n),
            prop::collection::vec(0.001..10.0f64, n),
        )),
        p in 1.1..10.0f64,
        m in 2usize..=5,
    ) {
        let domain = Domain::index_range(n).unwrap();
        let a = Functional::discrete_sum(domain).unwrap();
        let exps = ConjugateExponents::new(p).unwrap();
        let part = make_partition(PartitionKind::Uniform, &domain, Some(m)).unwrap();
        let r = improved_holder(
            &a,
            &FunctionSpec::constant(1.0),
            &FunctionSpec::samples(f),
            &FunctionSpec::samples(g),
            &exps,
            &part,
        ).unwrap();
        prop_assert!(rel_close(r.refined, r.classical, 1e-12), "{} vs {}", r.refined, r.classical);
        for term in &r.terms {
            prop_assert!(rel_close(*term, r.classical / m as f64, 1e-12));
        }
    }

    /// Scaling f by λ > 0 scales lhs, refined, and classical by λ and leaves
    /// the tightness ratio unchanged.
    #[test]
    fn chain_homogeneity(
        (n, f, g) in (2usize..=10).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0.001..10.0f64, n),
            prop::collection::vec(0.001..10.0f64, n),
        )),
        p in 1.1..10.0f64,
        lambda in 0.01..100.0f64,
    ) {
        let domain = Domain::index_range(n).unwrap();
        let a = Functional::discrete_sum(domain).unwrap();
        let exps = ConjugateExponents::new(p).unwrap();
        let part = make_partition(PartitionKind::DiscretePair, &domain, None).unwrap();
        let one = FunctionSpec::constant(1.0);
        let scaled: Vec<f64> = f.iter().map(|x| lambda * x).collect();
        let base = improved_holder(&a, &one, &FunctionSpec::samples(f), &FunctionSpec::samples(g.clone()), &exps, &part).unwrap();
        let big = improved_holder(&a, &one, &FunctionSpec::samples(scaled), &FunctionSpec::samples(g), &exps, &part).unwrap();
        prop_assert!(rel_close(big.lhs, lambda * base.lhs, 1e-12));
        prop_assert!(rel_close(big.refined, lambda * base.refined, 1e-12));
        prop_assert!(rel_close(big.classical, lambda * base.classical, 1e-12));
        prop_assert!(rel_close(big.tightness.unwrap(), base.tightness.unwrap(), 1e-12));
    }

    /// Reversed regime: the product bound sits below A(wfg) for 0 < p < 1 on
    /// strictly positive instances.
    #[test]
    fn reversed_regime_lower_bound(
        (n, f, g) in (2usize..=12).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0.001..10.0f64, n),
            prop::collection::vec(0.001..10.0f64, n),
        )),
        p in 0.1..0.9f64,
    ) {
        let domain = Domain::index_range(n).unwrap();
        let a = Functional::discrete_sum(domain).unwrap();
        let exps = ConjugateExponents::new(p).unwrap();
        let r = reversed_holder(
            &a,
            &FunctionSpec::constant(1.0),
            &FunctionSpec::samples(f),
            &FunctionSpec::samples(g),
            &exps,
        ).unwrap();
        let scale = r.lhs.abs().max(r.classical.abs()).max(f64::MIN_POSITIVE);
        prop_assert!(r.lhs >= r.classical - 1e-10 * scale, "lhs {} bound {}", r.lhs, r.classical);
    }

    /// Young's gap is strictly positive away from the equality line.
    #[test]
    fn young_gap_positive_off_diagonal(
        a in 1e-3..1e3f64,
        ratio in prop::sample::select(vec![0.5, 0.9, 0.999, 1.001, 1.1, 2.0, 10.0]),
        t in 0.01..0.99f64,
    ) {
        let b = a * ratio;
        let y = young_gap(a, b, t).unwrap();
        prop_assert!(y.gap >= 0.0);
        if (a - b).abs() > 1e-5 * a.max(b) {
            prop_assert!(y.gap > 0.0, "gap vanished for a={a} b={b} t={t}");
        }
    }

    /// Expression printing re-parses to the identical tree.
    #[test]
    fn expr_display_round_trip(e in arb_expr()) {
        let printed = e.to_string();
        let reparsed = isoholder::expr::parse(&printed);
        prop_assert!(reparsed.is_ok(), "`{printed}` failed to reparse: {reparsed:?}");
        prop_assert_eq!(reparsed.unwrap(), e, "changed through `{}`", printed);
    }
}

fn arb_expr() -> impl Strategy<Value = isoholder::expr::Expr> {
    use isoholder::expr::{Axis, BinOp, Expr, Func};
    // literals are nonnegative: the tokenizer never produces a negative
    // constant, it produces a Neg node, so only nonnegative leaves can
    // round-trip as identical trees
    let leaf = prop_oneof![
        (0i32..100).prop_map(|c| Expr::constant(c as f64 / 4.0)),
        Just(Expr::var(Axis::First)),
        Just(Expr::var(Axis::Second)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| -e),
            (
                inner.clone(),
                inner.clone(),
                prop::sample::select(vec![
                    BinOp::Add,
                    BinOp::Sub,
                    BinOp::Mul,
                    BinOp::Div,
                    BinOp::Pow
                ])
            )
                .prop_map(|(l, r, op)| Expr::bin(op, l, r)),
            (
                inner,
                prop::sample::select(vec![
                    Func::Abs,
                    Func::Exp,
                    Func::Ln,
                    Func::Sqrt,
                    Func::Sin,
                    Func::Cos
                ])
            )
                .prop_map(|(e, f)| Expr::func(f, e)),
        ]
    })
}

/// 10^4 seeded draws: the Young gap never goes negative, and the equality
/// case closes it.
#[test]
fn young_gap_bulk_nonnegative() {
    let mut rng = SplitMix64::new(0x1234_5678);
    for _ in 0..10_000 {
        let a = rng.log_uniform(1e-3, 1e3);
        let b = rng.log_uniform(1e-3, 1e3);
        let t = rng.next_f64();
        let y = young_gap(a, b, t).unwrap();
        assert!(y.gap >= 0.0, "negative gap at a={a} b={b} t={t}");
    }
    for _ in 0..100 {
        let a = rng.log_uniform(1e-3, 1e3);
        let y = young_gap(a, a, rng.next_f64()).unwrap();
        assert_eq!(y.gap, 0.0, "equality case left a gap at a={a}");
    }
}

/// Built-in partitions stay within 1e-12 of the unity identity across a
/// thousand sample points.
#[test]
fn builtin_partitions_are_complete() {
    let cases: Vec<(Partition, Domain)> = vec![
        {
            let d = Domain::interval(-1.5, 2.5).unwrap();
            (
                make_partition(PartitionKind::LinearPair, &d, None).unwrap(),
                d,
            )
        },
        {
            let d = Domain::index_range(11).unwrap();
            (
                make_partition(PartitionKind::DiscretePair, &d, None).unwrap(),
                d,
            )
        },
        {
            let d = Domain::rectangle(0.0, 2.0, -1.0, 1.0).unwrap();
            (
                make_partition(PartitionKind::BilinearQuad, &d, None).unwrap(),
                d,
            )
        },
        {
            let d = Domain::index_grid(6, 7).unwrap();
            (
                make_partition(PartitionKind::DiscreteBilinearQuad, &d, None).unwrap(),
                d,
            )
        },
        {
            let d = Domain::interval(0.0, 1.0).unwrap();
            (
                make_partition(PartitionKind::Uniform, &d, Some(5)).unwrap(),
                d,
            )
        },
    ];
    for (part, domain) in cases {
        let per_axis = if domain.dim() == 1 { 1000 } else { 32 };
        let mut worst_sum: f64 = 0.0;
        let mut worst_min: f64 = f64::INFINITY;
        for pt in domain.sample_points(per_axis) {
            let vals = part.values_at(&pt).unwrap();
            let total: f64 = vals.iter().sum();
            worst_sum = worst_sum.max((total - 1.0).abs());
            worst_min = worst_min.min(vals.iter().cloned().fold(f64::INFINITY, f64::min));
        }
        assert!(worst_sum <= 1e-12, "sum defect {worst_sum} for {domain:?}");
        assert!(
            worst_min >= -1e-12,
            "member dipped to {worst_min} for {domain:?}"
        );
    }
}

/// Grid restriction: row-prefix boxes decompose the functional like 1D
/// prefixes do.
#[test]
fn grid_restriction_decomposition() {
    let domain = Domain::index_grid(4, 3).unwrap();
    let weights: Vec<f64> = (0..12).map(|i| 0.5 + i as f64).collect();
    let a = Functional::weighted_sum(domain, weights).unwrap();
    let f = FunctionSpec::parse("t*s+1").unwrap();
    let front = Indicator::IndexBox {
        k_lo: 1,
        k_hi: 2,
        l_lo: 1,
        l_hi: 3,
    };
    let back = Indicator::IndexBox {
        k_lo: 3,
        k_hi: 4,
        l_lo: 1,
        l_hi: 3,
    };
    let whole = a.evaluate(&f).unwrap();
    let split = a.evaluate_masked(&f, &front).unwrap() + a.evaluate_masked(&f, &back).unwrap();
    assert!(rel_close(split, whole, 1e-12));

    let b = a.restricted(&front).unwrap();
    assert!((b.evaluate(&FunctionSpec::constant(1.0)).unwrap() - 1.0).abs() <= 1e-12);
}

/// Restriction of an integral functional matches closed-form sub-interval
/// means: the restriction of ∫ over [0,2] to [0,1] sends t^k to 1/(k+1).
#[test]
fn integral_restriction_means() {
    let a = Functional::integral_1d(
        isoholder::Interval::new(0.0, 2.0).unwrap(),
        QuadratureRule::default(),
    );
    let b = a
        .restricted(&Indicator::SubInterval { lo: 0.0, hi: 1.0 })
        .unwrap();
    for k in 0..5u32 {
        let f = FunctionSpec::parse(&format!("t^{k}")).unwrap();
        let got = b.evaluate(&f).unwrap();
        let want = 1.0 / (k as f64 + 1.0);
        assert!(rel_close(got, want, 1e-12), "k={k}: {got} vs {want}");
    }
}

/// Quadrature functionals evaluate pointwise-nonnegative inputs to
/// nonnegative values, mirroring the discrete isotonicity property.
#[test]
fn quadrature_functional_is_isotonic_on_nodes() {
    let a = Functional::integral_1d(
        isoholder::Interval::new(0.0, 1.0).unwrap(),
        QuadratureRule::gauss_legendre(4, 3).unwrap(),
    );
    // |sin(7t)| >= 0 everywhere
    let f = FunctionSpec::parse("abs(sin(7*t))").unwrap();
    assert!(a.evaluate(&f).unwrap() >= 0.0);
}

/// classical_holder on an integral instance agrees with the closed forms
/// lhs = 1/2, bound = 1/sqrt(3), independently recomputed here from exact
/// antiderivatives.
#[test]
fn classical_integral_instance_oracle() {
    let iv = isoholder::Interval::new(0.0, 1.0).unwrap();
    let a = Functional::integral_1d(iv, QuadratureRule::default());
    let exps = ConjugateExponents::new(2.0).unwrap();
    let r = classical_holder(
        &a,
        &FunctionSpec::constant(1.0),
        &FunctionSpec::parse("t").unwrap(),
        &FunctionSpec::constant(1.0),
        &exps,
    )
    .unwrap();
    // oracle: ∫ t = 1/2; (∫ t^2)^(1/2) (∫ 1)^(1/2) = (1/3)^(1/2)
    let oracle_lhs = poly_integral(&[0.0, 1.0], 0.0, 1.0);
    let oracle_bound = poly_integral(&[0.0, 0.0, 1.0], 0.0, 1.0).sqrt();
    assert!(rel_close(r.lhs, oracle_lhs, 1e-12));
    assert!(rel_close(r.classical, oracle_bound, 1e-12));
}

/// Larger partition check: EvalPoint probing matches functional splitting,
/// i.e. Σ_i A(α_i f) = A(f) for built-in partitions.
#[test]
fn partition_members_split_the_functional() {
    let domain = Domain::index_range(9).unwrap();
    let weights: Vec<f64> = (1..=9).map(|k| (k as f64).sqrt()).collect();
    let a = Functional::weighted_sum(domain, weights).unwrap();
    let f = FunctionSpec::parse("t^2+1").unwrap();
    let whole = a.evaluate(&f).unwrap();
    for kind in [PartitionKind::DiscretePair, PartitionKind::Uniform] {
        let part = make_partition(kind, &domain, Some(4)).unwrap();
        let mut split = 0.0;
        for member in part.members() {
            split += a
                .evaluate_fn(&mut |pt: &EvalPoint| Ok(member.eval_at(pt)? * f.eval_at(pt)?))
                .unwrap();
        }
        assert!(rel_close(split, whole, 1e-12), "{kind}: {split} vs {whole}");
    }
}
