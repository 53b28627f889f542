//! Monte Carlo walks: statistics, seeds and the posets built from them.

use influence_core::simulation::{
    build_poset, coarse_grain, path_from_poset, simulate, simulate_replica, simulate_replicas, EmissionRule,
    ScenarioConfig,
};
use influence_core::verify::verify_poset;
use influence_core::{FrameRelation, Poset, Step};

fn within_sigma(pr: f64, n: u64, seed: u64, k: f64) -> bool {
    let path = simulate(&ScenarioConfig::free(pr, n, 1000, seed)).unwrap();
    let sigma = (pr * (1.0 - pr) / n as f64).sqrt();
    (path.pr_right().unwrap() - pr).abs() <= k * sigma
}

#[test]
fn free_walks_hit_their_probability() {
    assert!(within_sigma(0.5, 100_000, 7, 3.0));
    assert!(within_sigma(0.6, 100_000, 8, 3.0));
}

#[test]
fn seed_36_gives_the_two_observer_walk() {
    let path = simulate_replica(&ScenarioConfig::free(0.6, 5, 10, 36), 0).unwrap();
    assert_eq!(path.tags(), "PQPQP");
    assert_eq!((path.n_p(), path.n_q()), (3, 2));

    let built = build_poset(&path).unwrap();
    let kinds: Vec<Step> = built.emission_events(&path).map(|(s, _)| s).collect();
    assert_eq!(kinds.iter().filter(|&&s| s == Step::P).count(), 3);
    assert_eq!(kinds.iter().filter(|&&s| s == Step::Q).count(), 2);
}

#[test]
fn unaccelerated_bernoulli_walk_matches_the_fair_free_walk() {
    let mut accel = ScenarioConfig::accelerated(0.0, 0.0, 2000, 100, 11);
    accel.emission = EmissionRule::Bernoulli;
    let free = ScenarioConfig::free(0.5, 2000, 100, 11);
    let a = simulate(&accel).unwrap();
    let f = simulate(&free).unwrap();
    assert_eq!(a.n_receipts_right() + a.n_receipts_left(), 0);
    assert_eq!(a.tags(), f.tags());
}

#[test]
fn realized_rate_tracks_the_configured_rate() {
    let path = simulate(&ScenarioConfig::accelerated(0.01, 0.0, 100_000, 1000, 42)).unwrap();
    let rate = path.realized_rate().unwrap();
    assert!(((rate - 0.01) / 0.01).abs() <= 0.02, "rate {rate}");
}

#[test]
fn seeds_fix_the_walk() {
    let mut cfg = ScenarioConfig::accelerated(0.02, 0.1, 20_000, 500, 5);
    cfg.replicas = 4;
    let a = simulate_replicas(&cfg).unwrap();
    let b = simulate_replicas(&cfg).unwrap();
    assert_eq!(a, b);
    for (i, p) in a.iter().enumerate() {
        assert_eq!(*p, simulate_replica(&cfg, i as u64).unwrap());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    assert_eq!(pool.install(|| simulate_replicas(&cfg).unwrap()), a);
    assert_ne!(a[0], a[1]);
}

#[test]
fn step_counts_do_not_depend_on_the_frame() {
    let path = simulate(&ScenarioConfig::free(0.7, 10_000, 1000, 3)).unwrap();
    let rest = path.step_stats(&FrameRelation::identity()).unwrap();
    for k in [0.2, 0.9, 3.0] {
        let s = path.step_stats(&FrameRelation::from_k(k).unwrap()).unwrap();
        assert_eq!((s.n_p, s.n_total), (rest.n_p, rest.n_total));
        assert_eq!(s.pr_right, rest.pr_right);
        assert_eq!(s.rest_mass, rest.rest_mass);
        assert!(((s.dp * s.dq) / (rest.dp * rest.dq) - 1.0).abs() <= 1e-14);
        assert!((s.dp / rest.dp - k).abs() <= 1e-12 * k);
    }
}

fn windows_within(emission: EmissionRule, k: f64) -> (usize, usize) {
    let mut cfg = ScenarioConfig::accelerated(0.01, 0.0, 100_000, 1000, 42);
    cfg.emission = emission;
    let m = coarse_grain(&simulate(&cfg).unwrap(), cfg.window).unwrap();
    let hits = m
        .samples
        .iter()
        .filter(|s| (s.beta_hat - s.beta_bookkeeping).abs() <= k * s.stderr)
        .count();
    (hits, m.samples.len())
}

#[test]
fn windows_follow_the_bookkeeping() {
    let (all, n) = windows_within(EmissionRule::Bernoulli, 4.0);
    assert_eq!(all, n);
    let (two, n) = windows_within(EmissionRule::Bernoulli, 2.0);
    assert!(two * 10 >= n * 9, "{two} of {n} within 2 sigma");
    let (one, n) = windows_within(EmissionRule::Balanced, 1.0);
    assert_eq!(one, n);
}

#[test]
fn simulated_posets_are_coordinated_and_round_trip() {
    let path = simulate(&ScenarioConfig::accelerated(0.05, 0.0, 300, 30, 9)).unwrap();
    assert!(path.n_receipts_right() > 0);
    let built = build_poset(&path).unwrap();
    for outcome in verify_poset(&built.poset) {
        assert!(outcome.passed(), "{}: {}", outcome.name, outcome.detail);
    }
    let reread = Poset::from_text(&built.poset.to_text()).unwrap();
    let chain = |name| reread.chain_by_name(name).unwrap();
    let back = path_from_poset(&reread, chain("P"), chain("Q"), chain("Pi")).unwrap();
    assert_eq!(back.tags(), path.tags());
}
