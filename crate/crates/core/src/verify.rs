//! Randomized invariant suites and fixture checks, shared by the test suite
//! and `influence verify`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::DynamicState;
use crate::error::{Error, Result};
use crate::fixtures::two_observer_walk;
use crate::kinematics::{emergent_state, lorentz, transform_interval, FrameRelation};
use crate::poset::{EventId, Poset};
use crate::quantification::{quantify_interval, CoordinatedPair};
use crate::simulation::build::build_poset;
use crate::simulation::oracle::{oracle_descendants, oracle_projections, random_poset};
use crate::simulation::rng::replica_rng;
use crate::simulation::walk::{Step, ZitterPath};

pub const SUITES: [&str; 6] = [
    "mass-shell",
    "minkowski",
    "receipt-invariance",
    "projection-oracle",
    "lorentz",
    "coordination",
];

pub const MASS_SHELL_TOL: f64 = 1e-12;
pub const MINKOWSKI_TOL: f64 = 1e-12;
pub const RECEIPT_DRIFT_TOL: f64 = 1e-9;
pub const LORENTZ_TOL: f64 = 1e-12;

/// Posets up to this size are checked against graph search from every event.
pub const FIXTURE_ORACLE_FULL: usize = 2000;
/// Source events checked in larger posets.
pub const FIXTURE_ORACLE_SOURCES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    /// Largest observed error in the suite's own units.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn failed(name: &str, detail: String) -> Self {
        Self {
            name: name.to_string(),
            trials: 1,
            failures: 1,
            worst: f64::NAN,
            tolerance: 0.0,
            detail,
        }
    }
}

pub fn default_trials(suite: &str) -> Option<u64> {
    Some(match suite {
        "mass-shell" | "minkowski" | "lorentz" => 100_000,
        "receipt-invariance" => 1_000_000,
        "projection-oracle" => 1000,
        "coordination" => 50,
        _ => return None,
    })
}

/// Runs the named suite; `trials` defaults per suite.
pub fn run_suite(name: &str, trials: Option<u64>, seed: u64) -> Result<SuiteOutcome> {
    let index = SUITES
        .iter()
        .position(|&s| s == name)
        .ok_or_else(|| Error::config("suite", format!("unknown suite `{name}`, expected one of {SUITES:?}")))?;
    let trials = trials.unwrap_or_else(|| default_trials(name).expect("listed suite"));
    let mut rng = replica_rng(seed, index as u64);
    Ok(match name {
        "mass-shell" => mass_shell(trials, &mut rng),
        "minkowski" => minkowski(trials, &mut rng),
        "receipt-invariance" => receipt_invariance(trials, &mut rng),
        "projection-oracle" => projection_oracle(trials, seed),
        "lorentz" => lorentz_suite(trials, &mut rng),
        "coordination" => coordination(trials, seed),
        _ => unreachable!("checked above"),
    })
}

/// All suites, or the one named by `only`.
pub fn run_suites(only: Option<&str>, trials: Option<u64>, seed: u64) -> Result<Vec<SuiteOutcome>> {
    match only {
        Some(name) => Ok(vec![run_suite(name, trials, seed)?]),
        None => SUITES.iter().map(|s| run_suite(s, trials, seed)).collect(),
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo_exp: f64, hi_exp: f64) -> f64 {
    10f64.powf(rng.random_range(lo_exp..hi_exp))
}

/// Interval pair with both sides in `[1e-3, 1e5]` and ratio at most 100.
fn random_interval(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let scale = log_uniform(rng, -3.0, 3.0);
    (scale * log_uniform(rng, 0.0, 2.0), scale * log_uniform(rng, 0.0, 2.0))
}

struct Tally {
    name: &'static str,
    trials: u64,
    failures: u64,
    worst: f64,
    tolerance: f64,
    first: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            trials: 0,
            failures: 0,
            worst: 0.0,
            tolerance,
            first: None,
        }
    }

    fn record(&mut self, err: f64, what: impl FnOnce() -> String) {
        self.trials += 1;
        if err > self.worst || err.is_nan() {
            self.worst = err;
        }
        if !(err <= self.tolerance) {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name.to_string(),
            trials: self.trials,
            failures: self.failures,
            worst: self.worst,
            tolerance: self.tolerance,
            detail: self.first.unwrap_or_default(),
        }
    }
}

/// `|E^2 - P^2 - M^2| / M^2` over random `(N, dp, dq)`.
pub fn mass_shell(trials: u64, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut t = Tally::new("mass-shell", MASS_SHELL_TOL);
    for _ in 0..trials {
        let n = rng.random_range(1..=1_000_000u64) as f64;
        let (dp, dq) = random_interval(rng);
        let s = emergent_state(n, dp, dq).expect("positive inputs");
        let m2 = s.mass * s.mass;
        let err = (s.energy * s.energy - s.momentum * s.momentum - m2).abs() / m2;
        t.record(err, || format!("N={n}, dp={dp}, dq={dq}"));
    }
    t.finish()
}

/// `|dt^2 - dx^2 - dp dq| / |dp dq|` over random `(dp, dq)`.
pub fn minkowski(trials: u64, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut t = Tally::new("minkowski", MINKOWSKI_TOL);
    for _ in 0..trials {
        let (dp, dq) = random_interval(rng);
        let iq = quantify_interval(dp, dq);
        let err = (iq.dt * iq.dt - iq.dx * iq.dx - iq.ds2).abs() / iq.ds2.abs();
        t.record(err, || format!("dp={dp}, dq={dq}"));
    }
    t.finish()
}

/// Relative drift of `dp dq` along one chain of `steps` unit receipts from
/// randomly chosen sides, starting at rest.
pub fn receipt_invariance(steps: u64, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut t = Tally::new("receipt-invariance", RECEIPT_DRIFT_TOL);
    let mut state = DynamicState::new(1.0, 1.0, 1.0).expect("valid start");
    let product = state.dp * state.dq;
    let mut worst: f64 = 0.0;
    let mut at = 0;
    for i in 0..steps {
        state = if rng.random::<bool>() {
            state.receive_right()
        } else {
            state.receive_left()
        };
        let drift = (state.dp * state.dq / product - 1.0).abs();
        if drift > worst || drift.is_nan() {
            worst = drift;
            at = i;
        }
    }
    t.record(worst, || format!("drift {worst:e} at step {at}"));
    SuiteOutcome {
        trials: steps,
        ..t.finish()
    }
}

/// Index-based projections and order against graph search on random posets
/// of up to 200 events, plus the two-observer fixture.
pub fn projection_oracle(trials: u64, seed: u64) -> SuiteOutcome {
    let per_poset: Vec<(u64, Option<String>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = replica_rng(seed, 1000 + i);
            let n = rng.random_range(1..=200usize);
            let chains = rng.random_range(1..=8usize);
            let p = (3.0 / n as f64).min(1.0);
            let poset = random_poset(&mut rng, n, chains, p);
            match compare_with_oracle(&poset) {
                Ok(0) => (0, None),
                Ok(k) => (k, Some(format!("random poset #{i}: {k} disagreements"))),
                Err(e) => (1, Some(format!("random poset #{i}: {e}"))),
            }
        })
        .collect();
    let mut failures: u64 = per_poset.iter().map(|(k, _)| k).sum();
    let mut detail = per_poset.into_iter().find_map(|(_, d)| d);
    if let Some(problem) = two_observer_problem() {
        failures += 1;
        detail.get_or_insert(problem);
    }
    SuiteOutcome {
        name: "projection-oracle".to_string(),
        trials: trials + 1,
        failures,
        worst: failures as f64,
        tolerance: 0.0,
        detail: detail.unwrap_or_default(),
    }
}

fn two_observer_problem() -> Option<String> {
    let f = two_observer_walk();
    let poset = &f.poset;
    let [p1, p2, _] = f.p_events;
    let q1 = f.q_events[0];
    let expected = [
        (f.a, f.p, p1, "Pa = P1"),
        (f.b, f.p, p2, "Pb = P2"),
        (f.a, f.q, q1, "Qa = Q1"),
        (f.b, f.q, q1, "Qb = Q1"),
    ];
    for (x, chain, want, label) in expected {
        let got = poset.forward_project(x, chain).ok().flatten();
        let oracle = crate::simulation::oracle::oracle_project(poset, x, chain).ok().flatten();
        if got != Some(want) || oracle != Some(want) {
            return Some(format!("two-observer fixture: expected {label}"));
        }
    }
    None
}

/// Number of (event, chain) projections and (event, event) order queries
/// where the index and graph search disagree.
pub fn compare_with_oracle(poset: &Poset) -> Result<u64> {
    compare_sampled_with_oracle(poset, usize::MAX)
}

/// [`compare_with_oracle`] from at most `max_sources` evenly spaced source
/// events, each against every event and chain.
pub fn compare_sampled_with_oracle(poset: &Poset, max_sources: usize) -> Result<u64> {
    let mut ids: Vec<EventId> = poset.events().collect();
    ids.sort();
    let stride = ids.len().div_ceil(max_sources.max(1)).max(1);
    let mut bad = 0;
    for &x in ids.iter().step_by(stride) {
        let oracle = oracle_projections(poset, x)?;
        for (chain, (fwd, bwd)) in poset.chains().iter().zip(oracle) {
            bad += u64::from(poset.forward_project(x, chain.id())? != fwd);
            bad += u64::from(poset.backward_project(x, chain.id())? != bwd);
        }
        let below = oracle_descendants(poset, x)?;
        let mut reach = vec![false; ids.len()];
        for y in below {
            reach[ids.binary_search(&y).expect("listed event")] = true;
        }
        for (j, &y) in ids.iter().enumerate() {
            bad += u64::from(poset.leq(x, y)? != reach[j]);
        }
    }
    Ok(bad)
}

/// Interval invariance, composition by adding rapidities, and agreement
/// with the step-ratio transform, relative to the size of the result.
pub fn lorentz_suite(trials: u64, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut t = Tally::new("lorentz", LORENTZ_TOL);
    for _ in 0..trials {
        let a = log_uniform(rng, -2.0, 2.0);
        let b = a * rng.random_range(-0.9..0.9);
        let (dt, dx) = if rng.random::<bool>() { (a, b) } else { (b, a) };
        let v1 = rng.random_range(-0.9..0.9);
        let v2 = rng.random_range(-0.9..0.9);
        let (t1, x1) = lorentz(dt, dx, v1).expect("|v| < 1");
        let (t12, x12) = lorentz(t1, x1, v2).expect("|v| < 1");

        let s2 = dt * dt - dx * dx;
        let invariance = (t1 * t1 - x1 * x1 - s2).abs() / s2.abs();

        let v12 = (v1.atanh() + v2.atanh()).tanh();
        let (td, xd) = lorentz(dt, dx, v12).expect("|v| < 1");
        let scale = t12.abs().max(x12.abs());
        let composed = (t12 - td).abs().max((x12 - xd).abs()) / scale;

        let k = FrameRelation::from_velocity(-v1)
            .and_then(|f1| Ok(f1.then(&FrameRelation::from_velocity(-v2)?)))
            .expect("|v| < 1");
        let (dp, dq) = transform_interval(&k, dt + dx, dt - dx);
        let (tk, xk) = ((dp + dq) / 2.0, (dp - dq) / 2.0);
        let ratio = (t12 - tk).abs().max((x12 - xk).abs()) / scale;

        let err = invariance.max(composed).max(ratio);
        t.record(err, || format!("dt={dt}, dx={dx}, v1={v1}, v2={v2}"));
    }
    t.finish()
}

/// Builds posets from random walks and checks that the observers are
/// coordinated, that every emission event projects onto both, and that
/// each emitter's projection equals its integer coordinate.
pub fn coordination(trials: u64, seed: u64) -> SuiteOutcome {
    let results: Vec<Option<String>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = replica_rng(seed, 2000 + i);
            let len = rng.random_range(0..300usize);
            let steps = (0..len)
                .map(|_| match rng.random_range(0..6) {
                    0 | 1 => Step::P,
                    2 | 3 => Step::Q,
                    4 => Step::ReceiptRight,
                    _ => Step::ReceiptLeft,
                })
                .collect();
            coordination_problem(&ZitterPath::from_steps(steps)).map(|p| format!("walk #{i}: {p}"))
        })
        .collect();
    let failures = results.iter().filter(|r| r.is_some()).count() as u64;
    SuiteOutcome {
        name: "coordination".to_string(),
        trials,
        failures,
        worst: failures as f64,
        tolerance: 0.0,
        detail: results.into_iter().flatten().next().unwrap_or_default(),
    }
}

fn coordination_problem(path: &ZitterPath) -> Option<String> {
    let built = match build_poset(path) {
        Ok(b) => b,
        Err(e) => return Some(e.to_string()),
    };
    let pair = match CoordinatedPair::new(&built.poset, built.p, built.q) {
        Ok(p) => p,
        Err(e) => return Some(e.to_string()),
    };
    let poset = pair.poset();
    let start = built.shift + 1;
    let (mut cp, mut cq) = (start, start);
    for (&step, &e) in path.steps().iter().zip(&built.step_events) {
        for c in [built.p, built.q] {
            if !step.is_emission() {
                break;
            }
            let covered = poset.forward_project(e, c).ok().flatten().is_some()
                && poset.backward_project(e, c).ok().flatten().is_some();
            if !covered {
                return Some(format!("emitter {e} does not project onto both observers"));
            }
        }
        let (chain, want) = match step {
            Step::P => (built.p, cp),
            Step::Q => (built.q, cq),
            _ => (built.p, -1),
        };
        if want > 0 && poset.forward_valuation(e, chain).ok().flatten() != Some(want) {
            return Some(format!("emitter {e} does not project to label {want}"));
        }
        match step {
            Step::P | Step::ReceiptRight => cp += 1,
            Step::Q | Step::ReceiptLeft => cq += 1,
        }
    }
    None
}

/// Checks of a poset read from text: structure (parsing enforces the
/// structural invariants), projection and order against graph search, and
/// coordination of chains named `P` and `Q` when both exist.
pub fn verify_poset_text(text: &str) -> Vec<SuiteOutcome> {
    match Poset::from_text(text) {
        Ok(poset) => {
            let mut out = vec![SuiteOutcome {
                name: "structure".to_string(),
                trials: 1,
                failures: 0,
                worst: 0.0,
                tolerance: 0.0,
                detail: format!("{} events, {} chains", poset.len(), poset.chains().len()),
            }];
            out.extend(verify_poset(&poset));
            out
        }
        Err(Error::Invariant(v)) => vec![SuiteOutcome::failed(v.name(), v.to_string())],
        Err(e) => vec![SuiteOutcome::failed("format", e.to_string())],
    }
}

pub fn verify_poset(poset: &Poset) -> Vec<SuiteOutcome> {
    let (limit, sources, detail) = if poset.len() <= FIXTURE_ORACLE_FULL {
        (usize::MAX, poset.len(), String::new())
    } else {
        let stride = poset.len().div_ceil(FIXTURE_ORACLE_SOURCES);
        let n = poset.len().div_ceil(stride);
        (FIXTURE_ORACLE_SOURCES, n, format!("{n} of {} source events sampled", poset.len()))
    };
    let oracle = match compare_sampled_with_oracle(poset, limit) {
        Ok(0) => SuiteOutcome {
            name: "projection-oracle".to_string(),
            trials: sources as u64,
            failures: 0,
            worst: 0.0,
            tolerance: 0.0,
            detail,
        },
        Ok(k) => SuiteOutcome {
            failures: k,
            worst: k as f64,
            trials: sources as u64,
            ..SuiteOutcome::failed("projection-oracle", format!("{k} disagreements"))
        },
        Err(e) => SuiteOutcome::failed("projection-oracle", e.to_string()),
    };
    let mut out = vec![oracle];
    if let (Some(p), Some(q)) = (poset.chain_by_name("P"), poset.chain_by_name("Q")) {
        let outcome = match CoordinatedPair::unchecked(poset, p, q) {
            Ok(pair) => {
                let report = pair.check_coordination();
                match report.issues.first() {
                    None => SuiteOutcome {
                        name: "coordination".to_string(),
                        trials: 1,
                        failures: 0,
                        worst: 0.0,
                        tolerance: 0.0,
                        detail: String::new(),
                    },
                    Some(issue) => SuiteOutcome::failed("coordination", issue.to_string()),
                }
            }
            Err(e) => SuiteOutcome::failed("coordination", e.to_string()),
        };
        out.push(outcome);
    }
    out
}
