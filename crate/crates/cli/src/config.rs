//! Run configuration embedded in every JSON report.

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qutrit_ecc::error_model::ErrorMenu;
use qutrit_ecc::SamplingMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Verify,
    Demo,
    Montecarlo,
    Decompose,
    TruthTable,
    CompareBlock,
    PhaseDemo,
    Bound,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    #[default]
    Discrete,
    Continuous,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MenuArg {
    #[default]
    Standard,
    Extended,
}

pub fn sampling_mode(mode: ModeArg, menu: MenuArg) -> SamplingMode {
    match mode {
        ModeArg::Continuous => SamplingMode::Continuous,
        ModeArg::Discrete => SamplingMode::Discrete(match menu {
            MenuArg::Standard => ErrorMenu::Standard,
            MenuArg::Extended => ErrorMenu::Extended,
        }),
    }
}

/// A named error placed on one qutrit. `theta`/`phi` apply to `Rtheta` only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorSpec {
    pub name: String,
    pub position: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixSource {
    Gate(String),
    /// Row-major entries.
    Entries(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_spec: Option<ErrorSpec>,
    #[serde(default)]
    pub output_format: OutputFormat,
    #[serde(default)]
    pub mode: ModeArg,
    #[serde(default)]
    pub menu: MenuArg,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<String>,
}

impl RunConfig {
    pub fn new(command: CommandKind, seed: u64) -> Self {
        Self {
            command,
            seed,
            p: Vec::new(),
            trials: None,
            error_spec: None,
            output_format: OutputFormat::Json,
            mode: ModeArg::Discrete,
            menu: MenuArg::Standard,
            matrix: None,
            digits: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_json() {
        let config = RunConfig {
            p: vec![0.01, 0.02],
            trials: Some(50),
            error_spec: Some(ErrorSpec { name: "Rtheta".into(), position: 3, theta: Some(0.5), phi: Some(-1.0) }),
            matrix: Some(MatrixSource::Entries(vec![Complex64::new(1.0, -2.0); 9])),
            ..RunConfig::new(CommandKind::Montecarlo, 42)
        };
        let text = serde_json::to_string(&config).unwrap();
        assert!(text.contains("[1.0,-2.0]"));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), config);
    }

    #[test]
    fn mode_and_menu_select_the_sampler() {
        assert_eq!(sampling_mode(ModeArg::Continuous, MenuArg::Extended), SamplingMode::Continuous);
        assert_eq!(sampling_mode(ModeArg::Discrete, MenuArg::Extended), SamplingMode::Discrete(ErrorMenu::Extended));
    }
}
