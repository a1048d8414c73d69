use std::collections::BTreeMap;

use borsuk_core::arith::{binomial, ExactInt};
use borsuk_core::bounds::{
    counterexample_range, plan_cover, spectrum_analytic, verify_chain, ChainConfig,
};
use borsuk_core::construction::{dist_sq_direct, enumerate_points, make_params};
use borsuk_core::oracle::{run_suite, Caps, Suite, DEFAULT_SEARCH_BUDGET};
use borsuk_core::Error;

#[test]
fn enumerated_points_reproduce_the_counted_spectrum() {
    for k in 1..=3 {
        let p = make_params(k).unwrap();
        let points: Vec<_> = enumerate_points(&p, 4).unwrap().map(|(_, x)| x).collect();
        assert_eq!(ExactInt::from(points.len()) * 2, binomial(4 * k, 2 * k));

        let mut census: BTreeMap<u64, u64> = BTreeMap::new();
        for (i, x) in points.iter().enumerate() {
            for y in &points[i + 1..] {
                *census.entry(dist_sq_direct(x, y).unwrap()).or_default() += 1;
            }
        }
        let counted: BTreeMap<u64, u64> = spectrum_analytic(k)
            .unwrap()
            .into_iter()
            .map(|e| (e.dist_sq, e.count.try_into().unwrap()))
            .collect();
        assert_eq!(census, counted, "k={k}");
        assert_eq!(census.keys().max(), Some(&(4 * k * k)));
    }
}

#[test]
fn plans_land_inside_their_ranges() {
    for dim in (1325..40_000).step_by(997) {
        let plan = plan_cover(dim).unwrap();
        let Some(k) = plan.chosen_k else {
            continue;
        };
        let range = counterexample_range(k).unwrap();
        assert!(range.covers(dim), "dim {dim} k {k}");
        // No smaller prime power covers it.
        for smaller in 2..k {
            let r = counterexample_range(smaller).unwrap();
            assert!(
                r.prime_power.is_none() || !r.covers(dim),
                "dim {dim}: {smaller} < {k}"
            );
        }
    }
}

#[test]
fn chain_reaches_past_the_last_power() {
    let report = verify_chain(&ChainConfig {
        k_max: 256,
        ..ChainConfig::default()
    })
    .unwrap();
    assert!(report.passed, "{:?}", report.failure);
    assert_eq!(report.through_dim, make_params(512).unwrap().d);
}

#[test]
fn every_suite_passes_at_k_2_and_caps_are_enforced() {
    let caps = Caps::default();
    for name in ["identities", "diameter", "fw", "rank", "cover", "spectrum"] {
        let suite: Suite = name.parse().unwrap();
        let report = run_suite(suite, 2, &caps, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(report.passed, "{name}: {:?}", report.witnesses);
    }
    let err = run_suite(Suite::Rank, 3, &caps, DEFAULT_SEARCH_BUDGET).unwrap_err();
    assert!(matches!(err, Error::CapExceeded { .. }));
}
