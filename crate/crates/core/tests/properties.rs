use catconv::exactnum::{pochhammer, rat, Rational};
use catconv::hyperseries::{
    default_rational_grid, pfq_truncate, product_sides, series_mul, Argument, ProductFormula,
    SeriesSpec, TruncatedSeries,
};
use catconv::identities::{
    check_substitutions, dictionary_holds, lhs_value, odd_vanishing, GridSpec, IdentityId,
    IdentityParams,
};
use catconv::numerics::{
    gamma_quotient, integral_check, BigFloat, GammaQuotientSpec, IntegralKind, Precision,
};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn series(order: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(small_rational(), order as usize + 1)
        .prop_map(TruncatedSeries::from_coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_splits(x in small_rational(), m in 0u32..=30, n in 0u32..=30) {
        let shifted = Rational::from(&x + m);
        prop_assert_eq!(pochhammer(&x, m + n), pochhammer(&x, m) * pochhammer(&shifted, n));
    }

    #[test]
    fn rationals_stay_canonical(a in small_rational(), b in small_rational(), c in small_rational()) {
        let mut values = vec![
            Rational::from(&a + &b),
            Rational::from(&a - &c),
            Rational::from(&a * &b) * &c,
        ];
        if b.cmp0().is_ne() {
            values.push(Rational::from(&a / &b) + &c);
        }
        for v in values {
            prop_assert!(v.denom().cmp0().is_gt());
            prop_assert_eq!(v.numer().clone().gcd(v.denom()), 1);
        }
    }

    #[test]
    fn series_mul_commutes(a in series(12), b in series(12)) {
        prop_assert_eq!(series_mul(&a, &b), series_mul(&b, &a));
    }

    #[test]
    fn series_mul_associates(a in series(8), b in series(8), c in series(8)) {
        prop_assert_eq!(
            series_mul(&series_mul(&a, &b), &c),
            series_mul(&a, &series_mul(&b, &c))
        );
    }

    #[test]
    fn terminating_series_vanish_past_degree(m in 0i64..=12, extra in 0u32..=10, b in small_rational(), minus in any::<bool>()) {
        prop_assume!(b.cmp0().is_gt());
        let argument = if minus { Argument::Minus } else { Argument::Plus };
        let spec = SeriesSpec::new(vec![rat(-m, 1)], vec![b], argument);
        let order = m as u32 + extra;
        let s = pfq_truncate(&spec, order).unwrap();
        for k in (m as u32 + 1)..=order {
            prop_assert_eq!(s.coeff(k).cmp0(), std::cmp::Ordering::Equal);
        }
        prop_assert!(s.coeff(m as u32).cmp0().is_ne());
    }

    #[test]
    fn dixon_product_has_no_odd_terms(a in small_rational(), c in small_rational()) {
        prop_assume!(!(c.denom() == &1 && c.cmp0().is_le()));
        let one_f_one = |arg| pfq_truncate(&SeriesSpec::new(vec![a.clone()], vec![c.clone()], arg), 24).unwrap();
        let product = series_mul(&one_f_one(Argument::Plus), &one_f_one(Argument::Minus));
        for k in (1..=24).step_by(2) {
            prop_assert_eq!(product.coeff(k).cmp0(), std::cmp::Ordering::Equal);
        }
    }

    #[test]
    fn theorem_sums_are_integers(n in 0u32..=40, lambda in 0u32..=12, pick in 0usize..4) {
        let id = [IdentityId::ThmA, IdentityId::ThmB, IdentityId::ThmC, IdentityId::ThmD][pick];
        prop_assume!(!(id == IdentityId::ThmD && n == 0 && lambda > 0));
        let v = lhs_value(id, &IdentityParams::n(n).lambda(lambda)).unwrap();
        prop_assert_eq!(v.denom(), &1);
    }

    #[test]
    fn gamma_quotient_absorbs_repeated_argument(p in 1i64..=200, q in 1i64..=17, extra in 1i64..=90) {
        let prec = Precision::new(40).unwrap();
        let bits = prec.bits() + 64;
        let x = BigFloat::with_val(bits, p) / (q as u32);
        let y = BigFloat::with_val(bits, extra) / 7u32;
        let base = GammaQuotientSpec::new(vec![x.clone()], vec![BigFloat::with_val(bits, 3)]);
        let padded = GammaQuotientSpec::new(vec![x, y.clone()], vec![BigFloat::with_val(bits, 3), y]);
        let u = gamma_quotient(&base, prec).unwrap();
        let v = gamma_quotient(&padded, prec).unwrap();
        let diff = BigFloat::with_val(bits, &u - &v).abs();
        // ulp at the reported 40 digits
        let ulp = BigFloat::with_val(bits, u.abs_ref()) >> prec.bits();
        prop_assert!(diff <= ulp);
    }
}

#[test]
fn lemma_at_c_minus_one_matches_variant_on_grid() {
    let grid = default_rational_grid();
    for a in &grid {
        for c in &grid {
            if *c == 1 {
                continue;
            }
            let lambda = Rational::from(c - 1u32);
            let lemma = product_sides(ProductFormula::LemmaLinear, a, c, &lambda, 48).unwrap();
            let variant = product_sides(ProductFormula::VariantLinear, a, c, &lambda, 48).unwrap();
            assert_eq!(lemma.0, variant.0);
            assert_eq!(lemma.1, variant.1);
        }
    }
}

#[test]
fn dictionary_conversions() {
    for k in 0..=40 {
        for lambda in 0..=12 {
            assert_eq!(
                dictionary_holds(k, lambda),
                [true; 4],
                "k = {k}, lambda = {lambda}"
            );
        }
    }
}

#[test]
fn theorems_follow_from_propositions() {
    let grid = GridSpec::new(0..=16).with_lambda(0..=5).with_mu(0..=5);
    for theorem in [
        IdentityId::ThmA,
        IdentityId::ThmB,
        IdentityId::ThmC,
        IdentityId::ThmD,
        IdentityId::ThmE,
    ] {
        let outcomes = check_substitutions(theorem, &grid).unwrap();
        assert!(
            outcomes.iter().any(|o| o.holds && o.checked > 0),
            "{theorem:?}: {outcomes:?}"
        );
    }
}

#[test]
fn parity_identities_vanish_at_odd_n() {
    let grid = GridSpec::new(0..=40)
        .with_lambda(0..=12)
        .with_mu(0..=6)
        .with_rationals(default_rational_grid(), default_rational_grid());
    for id in IdentityId::ALL
        .into_iter()
        .filter(|id| id.has_parity_factor())
    {
        let report = odd_vanishing(id, &grid).unwrap();
        assert!(report.cases_run > 0);
        assert!(report.passed(), "{id:?}: {:?}", report.failures.first());
    }
}

#[test]
fn odd_integrals_both_weights() {
    let prec = Precision::new(40).unwrap();
    for n in (1..=11).step_by(2) {
        for lambda in 0..=3 {
            for kind in IntegralKind::ALL {
                let report = integral_check(kind, n, lambda, prec).unwrap();
                assert!(report.passed(), "{kind} n={n} lambda={lambda}");
                if kind == IntegralKind::ThmAIntegral {
                    assert_eq!(report.checks[0].reference, 0);
                } else {
                    // no parity factor on this side: the odd-n values are genuinely nonzero
                    assert!(report.checks[0].reference > 0);
                }
            }
        }
    }
}
