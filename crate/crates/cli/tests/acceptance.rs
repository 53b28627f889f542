//! Acceptance criteria 1-10. Prints one line per criterion and exits
//! non-zero if any fails.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use influence_core::verify::{
    lorentz_suite, mass_shell, minkowski, projection_oracle, receipt_invariance, LORENTZ_TOL, MASS_SHELL_TOL,
    MINKOWSKI_TOL, RECEIPT_DRIFT_TOL,
};
use influence_core::simulation::replica_rng;
use influence_core::{evolve_ode, AnalyticAccel, DynamicState, InfluenceRates, Trajectory};

const SEED: u64 = 20240601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed<F: FnOnce() -> Outcome>(limit: Option<Duration>, f: F) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    out.detail = format!("{}; {:.3} s", out.detail, took.as_secs_f64());
    if let Some(limit) = limit {
        if took >= limit {
            out.pass = false;
            out.detail = format!("{} (limit {} s)", out.detail, limit.as_secs_f64());
        }
    }
    out
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn suite(o: influence_core::verify::SuiteOutcome, tol: f64) -> Outcome {
    Outcome {
        pass: o.passed() && o.worst <= tol,
        detail: format!(
            "{} trials, {} failures, worst {:.3e} (tol {:.0e})",
            o.trials, o.failures, o.worst, tol
        ),
    }
}

fn criterion_4_command(out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_influence"))
        .args(["simulate", "--kind", "accel", "--r", "0.01", "--phi0", "0", "--n", "100000", "--seed", "42", "--out"])
        .arg(out)
        .env_remove("INFLUENCE_SEED")
        .output()
        .expect("binary runs")
}

fn constant_acceleration(dir: &Path) -> Outcome {
    let out = criterion_4_command(dir);
    if !out.status.success() {
        return Outcome {
            pass: false,
            detail: format!("simulate failed: {}", String::from_utf8_lossy(&out.stderr)),
        };
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).expect("summary written")).expect("json");
    let residual = summary["max_abs_residual"].as_f64().unwrap_or(f64::INFINITY);
    let slope = summary["slope"].as_f64().unwrap_or(f64::NAN);
    let rel = ((slope - 0.01) / 0.01).abs();
    Outcome {
        pass: residual <= 0.02 && rel <= 0.05,
        detail: format!("max |residual| {residual:.4} (tol 0.02), slope {slope:.5} ({:.2}% off, tol 5%)", 100.0 * rel),
    }
}

fn trajectory(dtau: f64) -> Trajectory {
    let start = DynamicState::from_rapidity(1.0, 0.0, 1.0).unwrap();
    evolve_ode(start, |_, _| InfluenceRates::net(0.05), 9.0, dtau).unwrap()
}

/// Largest relative error of `d(value)/dtau` by centered differences against
/// `rhs` over interior samples.
fn centered<V: Fn(usize) -> f64, R: Fn(usize) -> f64>(t: &Trajectory, value: V, rhs: R) -> f64 {
    let s = &t.samples;
    (1..s.len() - 1)
        .map(|i| {
            let d = (value(i + 1) - value(i - 1)) / (s[i + 1].tau - s[i - 1].tau);
            let want = rhs(i);
            ((d - want) / want).abs()
        })
        .fold(0.0, f64::max)
}

fn newton() -> Outcome {
    let t = trajectory(1e-3);
    let s = &t.samples;
    let worst = centered(&t, |i| s[i].momentum, |i| s[i].mass * s[i].gamma * 0.05);
    Outcome {
        pass: worst <= 1e-6,
        detail: format!("{} interior samples, worst relative {worst:.3e} (tol 1e-6)", s.len() - 2),
    }
}

fn power_law() -> Outcome {
    let t = trajectory(1e-3);
    let s = &t.samples;
    let d = |i: usize| (s[i + 1].energy - s[i - 1].energy) / (s[i + 1].tau - s[i - 1].tau);
    // F beta vanishes only at tau0, which is not an interior sample
    let mut worst = 0.0f64;
    for i in 1..s.len() - 1 {
        let want = s[i].force * s[i].beta;
        worst = worst.max(((d(i) - want) / want).abs());
    }
    Outcome {
        pass: worst <= 1e-6,
        detail: format!("{} interior samples, worst relative {worst:.3e} (tol 1e-6)", s.len() - 2),
    }
}

fn ode_error(dtau: f64) -> f64 {
    let t = trajectory(dtau);
    let exact = AnalyticAccel::through(0.05, &DynamicState::from_rapidity(1.0, 0.0, 1.0).unwrap());
    t.samples
        .iter()
        .map(|s| {
            let ep = ((s.dp - exact.delta_p(s.tau)) / exact.delta_p(s.tau)).abs();
            let eq = ((s.dq - exact.delta_q(s.tau)) / exact.delta_q(s.tau)).abs();
            ep.max(eq)
        })
        .fold(0.0, f64::max)
}

fn convergence() -> Outcome {
    let hs = [0.2, 0.1, 0.05];
    let errs: Vec<f64> = hs.iter().map(|&h| ode_error(h)).collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = ratios.iter().all(|r| (r / 16.0 - 1.0).abs() <= 0.2);
    Outcome {
        pass: ok,
        detail: format!(
            "dtau {hs:?}: errors {:.3e}, {:.3e}, {:.3e}; ratios {:.2}, {:.2} (want 16 ± 20%)",
            errs[0], errs[1], errs[2], ratios[0], ratios[1]
        ),
    }
}

fn determinism(a: &Path, b: &Path) -> Outcome {
    let first = criterion_4_command(a);
    let second = criterion_4_command(b);
    if !(first.status.success() && second.status.success()) {
        return Outcome {
            pass: false,
            detail: "simulate failed".to_string(),
        };
    }
    let mut same = Vec::new();
    for name in ["trajectory.csv", "summary.json"] {
        let x = fs::read(a.join(name)).expect("written");
        let y = fs::read(b.join(name)).expect("written");
        same.push((name, x == y));
    }
    let manifest = |dir: &Path| {
        let mut v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).expect("written")).expect("json");
        v.as_object_mut().expect("object").remove("timing");
        v
    };
    same.push(("manifest.json without timing", manifest(a) == manifest(b)));
    Outcome {
        pass: same.iter().all(|s| s.1),
        detail: same
            .iter()
            .map(|(n, ok)| format!("{n} {}", if *ok { "identical" } else { "DIFFERS" }))
            .collect::<Vec<_>>()
            .join(", "),
    }
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(&str, Outcome)> = vec![
        (
            "mass-shell identity",
            timed(secs(1), || suite(mass_shell(100_000, &mut replica_rng(SEED, 1)), MASS_SHELL_TOL)),
        ),
        (
            "Minkowski emergence",
            timed(secs(1), || suite(minkowski(100_000, &mut replica_rng(SEED, 2)), MINKOWSKI_TOL)),
        ),
        (
            "receipt invariance",
            timed(secs(1), || {
                suite(receipt_invariance(1_000_000, &mut replica_rng(SEED, 3)), RECEIPT_DRIFT_TOL)
            }),
        ),
        (
            "constant-acceleration law",
            timed(secs(30), || constant_acceleration(&tmp.path().join("c4"))),
        ),
        ("Newton's second law", timed(secs(5), newton)),
        ("power law", timed(secs(5), power_law)),
        ("ODE convergence", timed(secs(10), convergence)),
        (
            "projection oracle equivalence",
            timed(secs(30), || suite(projection_oracle(1000, SEED), 0.0)),
        ),
        (
            "Lorentz consistency",
            timed(secs(1), || suite(lorentz_suite(100_000, &mut replica_rng(SEED, 9)), LORENTZ_TOL)),
        ),
        (
            "determinism",
            timed(None, || determinism(&tmp.path().join("d1"), &tmp.path().join("d2"))),
        ),
    ];
    let mut failed = 0;
    for (i, (name, o)) in criteria.iter().enumerate() {
        println!(
            "criterion {:>2} {:<30} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
