//! Scenario configuration and its key-value file form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_WINDOW: u64 = 1000;
pub const DEFAULT_TAU0: f64 = 1.0;

/// How the direction of each emission is drawn from the current emission
/// probability `pi = dp / (dp + dq)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmissionRule {
    /// Independent draws with probability `pi`.
    Bernoulli,
    /// Error-diffusion rounding of `pi`: every prefix of the emission
    /// sequence holds the expected number of P-steps to within one.
    Balanced,
}

/// How receipts are placed after qualifying emissions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReceiptSchedule {
    /// A receipt follows each qualifying emission with probability `|r| tau`.
    Bernoulli,
    /// Receipts at deterministic intervals with the same expected count.
    Interval,
}

impl EmissionRule {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bernoulli" => Some(Self::Bernoulli),
            "balanced" => Some(Self::Balanced),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::Balanced => "balanced",
        }
    }
}

impl ReceiptSchedule {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bernoulli" => Some(Self::Bernoulli),
            "interval" => Some(Self::Interval),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::Interval => "interval",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Every emission is a P-step with probability `pr_right`.
    Free { pr_right: f64 },
    /// Constant net receipt rate `r` (positive: from the right), starting at
    /// proper time `tau0` on the curve `beta = tanh(r tau + phi0)`.
    ///
    /// `steps_per_tau` is the number of unit steps per unit of proper time.
    /// When absent it is chosen so the run ends at `|r| tau = 0.9`, just
    /// inside the one-receipt-per-emission resolution limit.
    Accelerated {
        r: f64,
        phi0: f64,
        tau0: f64,
        steps_per_tau: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub scenario: Scenario,
    /// Number of emissions; receipts come on top.
    pub n_events: u64,
    /// Coarse-graining width in emissions.
    pub window: u64,
    pub seed: u64,
    pub replicas: u32,
    pub emission: EmissionRule,
    pub receipts: ReceiptSchedule,
}

impl ScenarioConfig {
    pub fn free(pr_right: f64, n_events: u64, window: u64, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scenario: Scenario::Free { pr_right },
            n_events,
            window,
            seed,
            replicas: 1,
            emission: EmissionRule::Bernoulli,
            receipts: ReceiptSchedule::Bernoulli,
        }
    }

    pub fn accelerated(r: f64, phi0: f64, n_events: u64, window: u64, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scenario: Scenario::Accelerated {
                r,
                phi0,
                tau0: DEFAULT_TAU0,
                steps_per_tau: None,
            },
            n_events,
            window,
            seed,
            replicas: 1,
            emission: EmissionRule::Balanced,
            receipts: ReceiptSchedule::Bernoulli,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.scenario {
            Scenario::Free { .. } => "free",
            Scenario::Accelerated { .. } => "accelerated",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        match self.scenario {
            Scenario::Free { pr_right } => {
                if !(pr_right > 0.0 && pr_right < 1.0) {
                    return Err(Error::config("pr_right", format!("must lie in (0, 1), got {pr_right}")));
                }
            }
            Scenario::Accelerated {
                r,
                phi0,
                tau0,
                steps_per_tau,
            } => {
                if !r.is_finite() {
                    return Err(Error::config("r", "must be finite"));
                }
                if !phi0.is_finite() {
                    return Err(Error::config("phi0", "must be finite"));
                }
                if !(tau0 > 0.0 && tau0.is_finite()) {
                    return Err(Error::config("tau0", format!("must be positive, got {tau0}")));
                }
                if let Some(s) = steps_per_tau {
                    if !(s > 0.0 && s.is_finite()) {
                        return Err(Error::config("steps_per_tau", format!("must be positive, got {s}")));
                    }
                }
            }
        }
        if self.window < 10 {
            return Err(Error::config("window", format!("must be at least 10, got {}", self.window)));
        }
        if self.n_events < 10 * self.window {
            return Err(Error::config(
                "n_events",
                format!(
                    "must be at least 10 windows ({}), got {}",
                    10 * self.window,
                    self.n_events
                ),
            ));
        }
        if self.replicas == 0 {
            return Err(Error::config("replicas", "must be at least 1"));
        }
        Ok(())
    }

    /// Velocity the scenario should show at proper time `tau`.
    pub fn expected_beta(&self, tau: f64) -> f64 {
        match self.scenario {
            Scenario::Free { pr_right } => 2.0 * pr_right - 1.0,
            Scenario::Accelerated { r, phi0, .. } => (r * tau + phi0).tanh(),
        }
    }

    pub fn to_file(&self) -> ConfigFile {
        let mut file = ConfigFile {
            schema_version: Some(self.schema_version),
            kind: Some(self.kind_name().to_string()),
            n_events: Some(self.n_events),
            window: Some(self.window),
            seed: Some(self.seed),
            replicas: Some(self.replicas),
            emission: Some(self.emission.as_str().to_string()),
            receipts: Some(self.receipts.as_str().to_string()),
            ..ConfigFile::default()
        };
        match self.scenario {
            Scenario::Free { pr_right } => file.pr_right = Some(pr_right),
            Scenario::Accelerated {
                r,
                phi0,
                tau0,
                steps_per_tau,
            } => {
                file.r = Some(r);
                file.phi0 = Some(phi0);
                file.tau0 = Some(tau0);
                file.steps_per_tau = steps_per_tau;
            }
        }
        file
    }
}

/// Flat key-value form of [`ScenarioConfig`] as read from a TOML file or
/// assembled from command-line flags. Every key is optional here; required
/// keys are enforced by [`ConfigFile::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pr_right: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps_per_tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_events: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emission: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub receipts: Option<String>,
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let field = message
                .split('`')
                .nth(1)
                .filter(|_| message.contains("field"))
                .unwrap_or("<file>")
                .to_string();
            Error::Config { field, message }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    /// Keys set in `over` replace those in `self`.
    pub fn overlay(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            schema_version: over.schema_version.or(self.schema_version),
            kind: over.kind.or(self.kind),
            pr_right: over.pr_right.or(self.pr_right),
            r: over.r.or(self.r),
            phi0: over.phi0.or(self.phi0),
            tau0: over.tau0.or(self.tau0),
            steps_per_tau: over.steps_per_tau.or(self.steps_per_tau),
            n_events: over.n_events.or(self.n_events),
            window: over.window.or(self.window),
            seed: over.seed.or(self.seed),
            replicas: over.replicas.or(self.replicas),
            emission: over.emission.or(self.emission),
            receipts: over.receipts.or(self.receipts),
        }
    }

    /// Fills defaults, checks required keys and validates.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        fn need<T: Copy>(v: Option<T>, field: &str) -> Result<T> {
            v.ok_or_else(|| Error::config(field, "missing required field"))
        }
        let kind = self
            .kind
            .as_deref()
            .ok_or_else(|| Error::config("kind", "missing required field"))?;
        let scenario = match kind {
            "free" => Scenario::Free {
                pr_right: need(self.pr_right, "pr_right")?,
            },
            "accelerated" | "accel" => Scenario::Accelerated {
                r: need(self.r, "r")?,
                phi0: self.phi0.unwrap_or(0.0),
                tau0: self.tau0.unwrap_or(DEFAULT_TAU0),
                steps_per_tau: self.steps_per_tau,
            },
            other => {
                return Err(Error::config(
                    "kind",
                    format!("expected `free` or `accelerated`, got `{other}`"),
                ))
            }
        };
        let is_free = matches!(scenario, Scenario::Free { .. });
        if is_free {
            for (set, field) in [
                (self.r.is_some(), "r"),
                (self.phi0.is_some(), "phi0"),
                (self.tau0.is_some(), "tau0"),
                (self.steps_per_tau.is_some(), "steps_per_tau"),
            ] {
                if set {
                    return Err(Error::config(field, "only applies to accelerated scenarios"));
                }
            }
        } else if self.pr_right.is_some() {
            return Err(Error::config("pr_right", "only applies to free scenarios"));
        }
        let emission = match self.emission.as_deref() {
            None if is_free => EmissionRule::Bernoulli,
            None => EmissionRule::Balanced,
            Some(s) => EmissionRule::parse(s).ok_or_else(|| {
                Error::config("emission", format!("expected `bernoulli` or `balanced`, got `{s}`"))
            })?,
        };
        let receipts = match self.receipts.as_deref() {
            None => ReceiptSchedule::Bernoulli,
            Some(s) => ReceiptSchedule::parse(s).ok_or_else(|| {
                Error::config("receipts", format!("expected `bernoulli` or `interval`, got `{s}`"))
            })?,
        };
        let config = ScenarioConfig {
            schema_version: self.schema_version.unwrap_or(SCHEMA_VERSION),
            scenario,
            n_events: need(self.n_events, "n_events")?,
            window: self.window.unwrap_or(DEFAULT_WINDOW),
            seed: need(self.seed, "seed")?,
            replicas: self.replicas.unwrap_or(1),
            emission,
            receipts,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(err: Error) -> String {
        match err {
            Error::Config { field, .. } => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn accelerated_file_resolves_with_defaults() {
        let file = ConfigFile::from_toml(
            "schema_version = 1\nkind = \"accelerated\"\nr = 0.01\nn_events = 100000\nseed = 42\n",
        )
        .unwrap();
        let config = file.resolve().unwrap();
        assert_eq!(config, ScenarioConfig::accelerated(0.01, 0.0, 100_000, 1000, 42));
    }

    #[test]
    fn config_survives_a_file_roundtrip() {
        let mut config = ScenarioConfig::free(0.6, 20_000, 100, 7);
        config.replicas = 4;
        let text = config.to_file().to_toml();
        let back = ConfigFile::from_toml(&text).unwrap().resolve().unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn missing_fields_are_named() {
        let base = ConfigFile {
            kind: Some("accelerated".into()),
            n_events: Some(100_000),
            seed: Some(1),
            ..ConfigFile::default()
        };
        assert_eq!(field_of(base.resolve().unwrap_err()), "r");
        let no_kind = ConfigFile::default();
        assert_eq!(field_of(no_kind.resolve().unwrap_err()), "kind");
        let no_seed = ConfigFile {
            seed: None,
            r: Some(0.1),
            ..base
        };
        assert_eq!(field_of(no_seed.resolve().unwrap_err()), "seed");
    }

    #[test]
    fn invalid_values_are_named() {
        let cases = [
            (ScenarioConfig::free(1.0, 10_000, 100, 0), "pr_right"),
            (ScenarioConfig::free(0.5, 10_000, 5, 0), "window"),
            (ScenarioConfig::free(0.5, 999, 100, 0), "n_events"),
            (ScenarioConfig::accelerated(f64::NAN, 0.0, 10_000, 100, 0), "r"),
        ];
        for (config, field) in cases {
            assert_eq!(field_of(config.validate().unwrap_err()), field);
        }
        let mut wrong_version = ScenarioConfig::free(0.5, 10_000, 100, 0);
        wrong_version.schema_version = 2;
        assert_eq!(field_of(wrong_version.validate().unwrap_err()), "schema_version");
    }

    #[test]
    fn unknown_keys_and_kinds_are_rejected() {
        assert!(ConfigFile::from_toml("speed = 3\n").is_err());
        let file = ConfigFile {
            kind: Some("warp".into()),
            ..ConfigFile::default()
        };
        assert_eq!(field_of(file.resolve().unwrap_err()), "kind");
    }

    #[test]
    fn overlay_prefers_the_second_file() {
        let a = ConfigFile {
            seed: Some(1),
            window: Some(50),
            ..ConfigFile::default()
        };
        let b = ConfigFile {
            seed: Some(2),
            ..ConfigFile::default()
        };
        let merged = a.overlay(b);
        assert_eq!((merged.seed, merged.window), (Some(2), Some(50)));
    }
}
