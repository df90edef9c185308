use std::collections::BTreeMap;

use darboux_invariants::selftest::{random_operator, random_poly, rng};
use darboux_invariants::{
    DiffPolynomial, GaugeParameter, JetVariable, LaplaceOperator, LinearDiffOperator, NormalizedM,
};
use proptest::prelude::*;

fn ops(max_order: u32) -> impl Strategy<Value = LinearDiffOperator> {
    any::<u64>().prop_map(move |s| random_operator(&mut rng(s), max_order))
}

/// Replaces every jet of `from` with the matching jet of `with`.
fn rename_gauge(
    max_order: u32,
    from: &GaugeParameter,
    with: &DiffPolynomial,
) -> BTreeMap<JetVariable, DiffPolynomial> {
    let mut map = BTreeMap::new();
    for nx in 0..=max_order {
        for ny in 0..=max_order - nx {
            map.insert(from.jet_var(nx, ny), with.derivative(nx, ny));
        }
    }
    map
}

fn is_mixed_free(op: &LinearDiffOperator) -> bool {
    op.terms().all(|(&(i, j), _)| i == 0 || j == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_is_a_ring_homomorphism(p in ops(2), q in ops(2)) {
        let alpha = GaugeParameter::default();
        prop_assert_eq!(
            p.compose(&q).gauge_conjugate(&alpha),
            p.gauge_conjugate(&alpha).compose(&q.gauge_conjugate(&alpha))
        );
        prop_assert_eq!((&p + &q).gauge_conjugate(&alpha), &p.gauge_conjugate(&alpha) + &q.gauge_conjugate(&alpha));
    }

    #[test]
    fn successive_gauges_add(p in ops(2)) {
        let alpha = GaugeParameter::new("alpha");
        let beta = GaugeParameter::new("beta");
        let twice = p.gauge_conjugate(&alpha).gauge_conjugate(&beta);
        let sum = &DiffPolynomial::symbol("alpha") + &DiffPolynomial::symbol("beta");
        let once = p.gauge_conjugate(&alpha).map_coefficients(|c| c.substitute(&rename_gauge(4, &alpha, &sum)));
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn zero_gauge_is_identity(p in ops(3)) {
        let alpha = GaugeParameter::default();
        let zero = rename_gauge(5, &alpha, &DiffPolynomial::zero());
        prop_assert_eq!(p.gauge_conjugate(&alpha).map_coefficients(|c| c.substitute(&zero)), p);
    }

    #[test]
    fn apply_respects_composition(p in ops(2), q in ops(2), seed in any::<u64>()) {
        let f = random_poly(&mut rng(seed), &["a", "b"], 3, 2, 1);
        prop_assert_eq!(p.compose(&q).apply(&f), p.apply(&q.apply(&f)));
    }

    #[test]
    fn principal_symbol_is_gauge_invariant(p in ops(3)) {
        let alpha = GaugeParameter::default();
        prop_assume!(!p.is_zero());
        prop_assert_eq!(p.principal_symbol().unwrap(), p.gauge_conjugate(&alpha).principal_symbol().unwrap());
    }

    #[test]
    fn laplace_action_matches_conjugation(seed in any::<u64>()) {
        let r = &mut rng(seed);
        let l = LaplaceOperator::new(
            random_poly(r, &["a", "b"], 3, 2, 1),
            random_poly(r, &["a", "b"], 3, 2, 1),
            random_poly(r, &["c"], 3, 2, 1),
        );
        let alpha = GaugeParameter::default();
        prop_assert_eq!(l.gauge_action(&alpha).to_operator(), l.to_operator().gauge_conjugate(&alpha));
    }
}

#[test]
fn gauged_m_stays_mixed_free() {
    let alpha = GaugeParameter::default();
    for d in 1..=8 {
        let m = NormalizedM::generic(d);
        assert!(
            is_mixed_free(&m.to_operator().gauge_conjugate(&alpha)),
            "d = {d}"
        );
        assert_eq!(
            m.gauge_conjugate(&alpha).to_operator(),
            m.to_operator().gauge_conjugate(&alpha),
            "d = {d}"
        );
    }
}

#[test]
fn fresh_parameter_detection() {
    let l = LaplaceOperator::generic().to_operator();
    assert!(GaugeParameter::default().is_fresh_for(&l));
    assert!(!GaugeParameter::new("a").is_fresh_for(&l));
    let m = NormalizedM::generic(2).to_operator();
    assert!(!GaugeParameter::new("m[0]").is_fresh_for(&m));
}
