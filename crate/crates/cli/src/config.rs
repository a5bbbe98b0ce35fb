//! Run configuration documents.

use std::path::PathBuf;

use jamnet_core::model::{validate_scenario, SensorParams};
use jamnet_core::{NetworkScenario, Setting};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ClosedForm,
    SolveAsym,
    Simulate,
    Verify,
    CeoCurve,
    Maxcorr,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ClosedForm => "closed-form",
            Command::SolveAsym => "solve-asym",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::CeoCurve => "ceo-curve",
            Command::Maxcorr => "maxcorr",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shorthand {
    pub count: usize,
    pub alpha: f64,
    pub beta: f64,
    pub power: f64,
}

/// Either one entry per sensor or `count` identical sensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SensorSpec {
    List(Vec<SensorParams<f64>>),
    Shorthand(Shorthand),
}

impl SensorSpec {
    fn expand(&self) -> Vec<SensorParams<f64>> {
        match self {
            SensorSpec::List(v) => v.clone(),
            SensorSpec::Shorthand(s) => vec![SensorParams::new(s.alpha, s.beta, s.power); s.count],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSpec {
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "one")]
    pub chunks: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        (0..self.steps)
            .map(|i| self.from + (self.to - self.from) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// The document as written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub setting: Setting,
    pub transmitters: SensorSpec,
    pub adversaries: SensorSpec,
    pub sum_power_transmit: Option<f64>,
    pub sum_power_attack: Option<f64>,
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub monte_carlo: Option<MonteCarloSpec>,
    pub sweep: Option<SweepSpec>,
    pub output_path: Option<PathBuf>,
}

/// Parameters a `sweep` command can vary.
pub const SWEEP_PARAMS: [&str; 7] = [
    "sum_power_attack",
    "sum_power_transmit",
    "power",
    "alpha",
    "beta",
    "epsilon",
    "eta",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: NetworkScenario,
    pub command: Command,
    pub monte_carlo: Option<MonteCarloSpec>,
    pub sweep: Option<SweepSpec>,
    pub output_path: Option<PathBuf>,
}

fn parse_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Builds the scenario described by `doc`, validated.
pub fn scenario_from_doc(doc: &ConfigDoc) -> Result<NetworkScenario, CliError> {
    if doc.setting == Setting::SymIII {
        if doc.eta.is_none() {
            return Err(parse_error("eta required for SymIII"));
        }
        if doc.epsilon.is_none() {
            return Err(parse_error("epsilon required for SymIII"));
        }
    }
    let s = NetworkScenario {
        transmitters: doc.transmitters.expand(),
        adversaries: doc.adversaries.expand(),
        source_variance: 1.0,
        channel_noise_variance: 1.0,
        sum_power_transmit: doc.sum_power_transmit,
        sum_power_attack: doc.sum_power_attack,
        epsilon: doc.epsilon.unwrap_or(1.0),
        eta: doc.eta.unwrap_or(1.0),
        setting: doc.setting,
        rescaling: None,
    };
    Ok(validate_scenario(s)?)
}

/// Parses a configuration document for `command`.
pub fn parse_config(document: &str, command: Command) -> Result<RunConfig, CliError> {
    let doc: ConfigDoc = serde_json::from_str(document).map_err(|e| parse_error(e.to_string()))?;
    let scenario = scenario_from_doc(&doc)?;

    match command {
        Command::Simulate if doc.monte_carlo.is_none() => {
            return Err(parse_error("simulate requires monte_carlo"));
        }
        Command::Sweep | Command::CeoCurve | Command::Maxcorr => {
            let sweep = doc
                .sweep
                .as_ref()
                .ok_or_else(|| parse_error(format!("{} requires sweep", command.name())))?;
            let allowed: &[&str] = match command {
                Command::CeoCurve => &["rate"],
                Command::Maxcorr => &["rho"],
                _ => &SWEEP_PARAMS,
            };
            if !allowed.contains(&sweep.param.as_str()) {
                return Err(parse_error(format!(
                    "sweep.param {:?} not supported by {} (expected one of {allowed:?})",
                    sweep.param,
                    command.name()
                )));
            }
            if sweep.steps == 0 {
                return Err(parse_error("sweep.steps must be at least 1"));
            }
        }
        Command::SolveAsym if scenario.setting.is_symmetric() => {
            return Err(parse_error("solve-asym needs setting AsymI or AsymII"));
        }
        _ => {}
    }
    if let Some(mc) = &doc.monte_carlo {
        if mc.samples == 0 || mc.chunks == 0 {
            return Err(parse_error(
                "monte_carlo.samples and monte_carlo.chunks must be positive",
            ));
        }
    }
    Ok(RunConfig {
        scenario,
        command,
        monte_carlo: doc.monte_carlo,
        sweep: doc.sweep,
        output_path: doc.output_path,
    })
}

/// Copy of `s` with one sweep parameter replaced, validated again.
pub fn with_param(s: &NetworkScenario, param: &str, value: f64) -> Result<NetworkScenario, CliError> {
    let mut s = s.clone();
    match param {
        "sum_power_attack" => s.sum_power_attack = Some(value),
        "sum_power_transmit" => s.sum_power_transmit = Some(value),
        "epsilon" => s.epsilon = value,
        "eta" => s.eta = value,
        "power" | "alpha" | "beta" => {
            for p in s.transmitters.iter_mut().chain(s.adversaries.iter_mut()) {
                match param {
                    "power" => p.power = value,
                    "alpha" => p.alpha = value,
                    _ => p.beta = value,
                }
            }
        }
        other => return Err(parse_error(format!("unknown sweep parameter {other:?}"))),
    }
    Ok(validate_scenario(s)?)
}
