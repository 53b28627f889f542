//! `influence simulate`: runs a scenario and writes `trajectory.csv`,
//! `summary.json`, `manifest.json` and optionally `poset.txt`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use influence_core::simulation::{simulate_replicas, ConfigFile, Scenario, SCHEMA_VERSION};
use influence_core::{build_poset, coarse_grain, MeasuredTrajectory, ScenarioConfig, ZitterPath};
use serde::Serialize;

use crate::args::{Kind, SimulateArgs};
use crate::{CmdResult, Failure, EXIT_OK};

/// Largest accepted `|beta_hat - tanh(r tau + phi0)|` over windows.
pub const RESIDUAL_TOL: f64 = 0.02;
/// Largest accepted relative error of the fitted rapidity slope.
pub const SLOPE_REL_TOL: f64 = 0.05;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const POSET_FILE: &str = "poset.txt";

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub kind: String,
    pub n_events: u64,
    pub window: u64,
    pub windows: usize,
    pub replicas: u32,
    pub seed: u64,
    pub steps_per_tau: f64,
    pub receipts_right: u64,
    pub receipts_left: u64,
    pub mean_beta_hat: f64,
    pub expected_mean_beta: Option<f64>,
    pub realized_rate: Option<f64>,
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
    pub intercept: Option<f64>,
    pub expected_slope: f64,
    pub max_abs_residual: f64,
    pub residual_tolerance: f64,
    pub check: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub path: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub version: String,
    pub config: ConfigFile,
    pub seed: u64,
    pub artifacts: Vec<Artifact>,
    pub timing: Timing,
}

pub fn run(args: SimulateArgs) -> CmdResult {
    let started = Instant::now();
    let config = resolve_config(&args, std::env::var("INFLUENCE_SEED").ok())?;
    let paths = simulate_replicas(&config).map_err(Failure::from_core)?;
    let measured = paths
        .iter()
        .map(|p| coarse_grain(p, config.window))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::from_core)?;
    let trajectory = MeasuredTrajectory::average(&measured).map_err(Failure::from_core)?;
    let summary = summarize(&config, &paths, &trajectory);

    fs::create_dir_all(&args.out).map_err(|e| Failure::io(&args.out, e))?;
    let mut artifacts = Vec::new();

    let mut csv = Vec::new();
    trajectory
        .write_csv(&mut csv, |tau| config.expected_beta(tau))
        .expect("writing to memory");
    artifacts.push(write(&args.out, TRAJECTORY_FILE, &csv)?);

    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    artifacts.push(write(&args.out, SUMMARY_FILE, json.as_bytes())?);

    if args.emit_poset {
        let built = build_poset(&paths[0]).map_err(Failure::from_core)?;
        artifacts.push(write(&args.out, POSET_FILE, built.poset.to_text().as_bytes())?);
    }

    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        command: "simulate".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.to_file(),
        seed: config.seed,
        artifacts,
        timing: Timing {
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    write(&args.out, MANIFEST_FILE, json.as_bytes())?;

    println!(
        "{} run: {} windows, mean beta_hat {:.5}, max residual {:.5}, {}",
        summary.kind,
        summary.windows,
        summary.mean_beta_hat,
        summary.max_abs_residual,
        if summary.pass { "pass" } else { "FAIL" }
    );
    Ok(EXIT_OK)
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<Artifact, Failure> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Failure::io(&path, e))?;
    Ok(Artifact {
        path: name.to_string(),
        bytes: bytes.len() as u64,
    })
}

/// Config file (if any), then flags on top, then `env_seed` if no seed was
/// given either way.
pub fn resolve_config(args: &SimulateArgs, env_seed: Option<String>) -> Result<ScenarioConfig, Failure> {
    let base = match &args.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };
    let flags = ConfigFile {
        kind: args.kind.map(|k| {
            match k {
                Kind::Free => "free",
                Kind::Accel => "accelerated",
            }
            .to_string()
        }),
        pr_right: args.pr_right,
        r: args.r,
        phi0: args.phi0,
        tau0: args.tau0,
        steps_per_tau: args.steps_per_tau,
        n_events: args.n,
        window: args.window,
        seed: args.seed,
        replicas: args.replicas,
        emission: args.emission.clone(),
        receipts: args.receipts.clone(),
        ..ConfigFile::default()
    };
    let mut file = base.overlay(flags);
    if file.seed.is_none() {
        if let Some(s) = env_seed {
            let seed = s.trim().parse().map_err(|_| {
                Failure::usage(format!("config error in field `seed`: INFLUENCE_SEED is not an integer: `{s}`"))
            })?;
            file.seed = Some(seed);
        }
    }
    file.resolve().map_err(Failure::from_core)
}

/// Reads TOML, or the `config` object of a JSON run manifest.
pub fn load_config(path: &PathBuf) -> Result<ConfigFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("config error in field `config`: {}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("config error in field `config`: {}: {e}", path.display())))?;
        let config = value.get("config").cloned().unwrap_or(value);
        serde_json::from_value(config)
            .map_err(|e| Failure::usage(format!("config error in field `config`: {}: {e}", path.display())))
    } else {
        ConfigFile::from_toml(&text).map_err(Failure::from_core)
    }
}

pub fn summarize(config: &ScenarioConfig, paths: &[ZitterPath], m: &MeasuredTrajectory) -> Summary {
    let fit = m.rapidity_fit();
    let max_abs_residual = m.max_abs_residual(|tau| config.expected_beta(tau));
    let mean_beta_hat = m.mean_beta();
    let rates: Vec<f64> = paths.iter().filter_map(ZitterPath::realized_rate).collect();
    let realized_rate = (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64);

    let (expected_mean_beta, expected_slope, check, pass) = match config.scenario {
        Scenario::Free { pr_right } => {
            let expected = 2.0 * pr_right - 1.0;
            let n: u64 = m.samples.iter().map(|s| s.n_p + s.n_q).sum();
            let se = 2.0 * (pr_right * (1.0 - pr_right) / n as f64).sqrt();
            (
                Some(expected),
                0.0,
                format!("|mean beta_hat - (2 pr_right - 1)| <= 3 stderr ({:.3e})", 3.0 * se),
                (mean_beta_hat - expected).abs() <= 3.0 * se,
            )
        }
        Scenario::Accelerated { r, .. } => {
            let slope_ok = match fit {
                Some(f) if r != 0.0 => ((f.slope - r) / r).abs() <= SLOPE_REL_TOL,
                Some(f) => f.slope.abs() <= 3.0 * f.slope_stderr,
                None => false,
            };
            (
                None,
                r,
                format!(
                    "max |beta_hat - tanh(r tau + phi0)| <= {RESIDUAL_TOL} and |slope - r| <= {SLOPE_REL_TOL} |r|"
                ),
                slope_ok && max_abs_residual <= RESIDUAL_TOL,
            )
        }
    };

    Summary {
        kind: config.kind_name().to_string(),
        n_events: config.n_events,
        window: config.window,
        windows: m.samples.len(),
        replicas: config.replicas,
        seed: config.seed,
        steps_per_tau: paths[0].steps_per_tau(),
        receipts_right: paths.iter().map(ZitterPath::n_receipts_right).sum(),
        receipts_left: paths.iter().map(ZitterPath::n_receipts_left).sum(),
        mean_beta_hat,
        expected_mean_beta,
        realized_rate,
        slope: fit.map(|f| f.slope),
        slope_stderr: fit.map(|f| f.slope_stderr),
        intercept: fit.map(|f| f.intercept),
        expected_slope,
        max_abs_residual,
        residual_tolerance: RESIDUAL_TOL,
        check,
        pass,
    }
}
