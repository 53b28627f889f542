use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use influence_core::simulation::{build_poset, random_poset, replica_rng, simulate, ScenarioConfig};
use influence_core::{evolve_ode, DynamicState, EventId, InfluenceRates};

fn poset(c: &mut Criterion) {
    let mut g = c.benchmark_group("poset");
    for n in [1_000usize, 10_000] {
        g.bench_with_input(BenchmarkId::new("random_build", n), &n, |b, &n| {
            b.iter(|| random_poset(&mut replica_rng(1, 0), n, 8, 3.0 / n as f64))
        });
        let p = random_poset(&mut replica_rng(1, 0), n, 8, 3.0 / n as f64);
        let ids: Vec<EventId> = p.events().collect();
        let chain = p.chains()[0].id();
        g.bench_with_input(BenchmarkId::new("leq_and_project", n), &n, |b, _| {
            b.iter(|| {
                let mut hits = 0usize;
                for (i, &x) in ids.iter().enumerate().step_by(7) {
                    let y = ids[(i * 31 + 17) % ids.len()];
                    hits += usize::from(p.leq(x, y).unwrap());
                    hits += usize::from(p.forward_project(x, chain).unwrap().is_some());
                }
                hits
            })
        });
    }
    g.finish();
}

fn walks(c: &mut Criterion) {
    let cfg = ScenarioConfig::accelerated(0.01, 0.0, 100_000, 1000, 42);
    c.bench_function("simulate_accelerated_1e5", |b| b.iter(|| simulate(black_box(&cfg)).unwrap()));
    let path = simulate(&ScenarioConfig::accelerated(0.05, 0.0, 2_000, 100, 9)).unwrap();
    c.bench_function("build_poset_2e3", |b| b.iter(|| build_poset(black_box(&path)).unwrap()));
}

fn ode(c: &mut Criterion) {
    let start = DynamicState::from_rapidity(1.0, 0.0, 1.0).unwrap();
    c.bench_function("evolve_ode_9e3_steps", |b| {
        b.iter(|| evolve_ode(start, |_, _| InfluenceRates::net(0.05), 9.0, black_box(1e-3)).unwrap())
    });
}

criterion_group!(benches, poset, walks, ode);
criterion_main!(benches);
