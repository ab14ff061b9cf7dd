//! Experiment configuration: a sectioned key-value file (TOML syntax)
//! validated strictly — unknown keys are errors, so a typo cannot
//! silently reconfigure a run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use landmod::landscape::{LandscapeParams, PenaltyFunction, Threshold};
use landmod::models::{IsingModel, ModelSpec, PottsModel};
use landmod::sim::Schedule;
use landmod::StateId;

use crate::error::CliError;
use crate::tabular_io;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub model: ModelSection,
    #[serde(default)]
    pub landscape: LandscapeSection,
    pub schedule: Option<ScheduleSection>,
    #[serde(default)]
    pub run: RunSection,
    pub observable: Option<ObservableSection>,
    #[serde(default)]
    pub estimate: EstimateSection,
    #[serde(default)]
    pub analyze: AnalyzeSection,
    #[serde(default)]
    pub bench: BenchSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ModelSection {
    pub kind: String,
    /// Hypercube dimension (`ising-hypercube`).
    pub dim: Option<u32>,
    /// Vertex count (`ising-complete`).
    pub n: Option<u32>,
    /// Torus side (`potts`).
    pub side: Option<u32>,
    /// Color count (`potts`).
    pub colors: Option<u32>,
    pub j: Option<f64>,
    pub h: Option<f64>,
    /// Model file (`tabular`).
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LandscapeSection {
    /// Penalty kind: zero | linear | quadratic | exp-minus-one.
    #[serde(default = "default_penalty")]
    pub f: String,
    #[serde(default = "default_one")]
    pub alpha: f64,
    /// Threshold mode: absolute | ground-offset.
    #[serde(default = "default_c_mode")]
    pub c_mode: String,
    /// Absolute threshold, or the offset above the ground energy.
    #[serde(default = "default_half")]
    pub c: f64,
}

fn default_penalty() -> String {
    "quadratic".into()
}
fn default_c_mode() -> String {
    "ground-offset".into()
}
fn default_one() -> f64 {
    1.0
}
fn default_half() -> f64 {
    0.5
}

impl Default for LandscapeSection {
    fn default() -> Self {
        Self { f: "quadratic".into(), alpha: 1.0, c_mode: "ground-offset".into(), c: 0.5 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ScheduleSection {
    /// constant | exponential | logarithmic.
    pub kind: String,
    pub alpha: Option<f64>,
    pub scale: Option<f64>,
    pub rate: Option<f64>,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunSection {
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub x0: u64,
    /// Checkpoint or run-length grid for `estimate` and `anneal`.
    #[serde(default)]
    pub t_grid: Vec<f64>,
}

fn default_horizon() -> f64 {
    1000.0
}
fn default_replicas() -> usize {
    1000
}

impl Default for RunSection {
    fn default() -> Self {
        Self { horizon: 1000.0, replicas: 1000, seed: 0, x0: 0, t_grid: vec![] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ObservableSection {
    /// indicator | energy | constant.
    pub kind: String,
    pub state: Option<u64>,
    pub value: Option<f64>,
    pub sup_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct EstimateSection {
    /// Deviation level for the exceedance column.
    #[serde(default = "default_half")]
    pub eta: f64,
    /// Starting states; defaults to `[run.x0]`.
    #[serde(default)]
    pub starts: Option<Vec<u64>>,
}

impl Default for EstimateSection {
    fn default() -> Self {
        Self { eta: 0.5, starts: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct AnalyzeSection {
    /// Reciprocal penalty grid for the gap-decay certificate.
    #[serde(default = "default_beta_grid")]
    pub beta_grid: Vec<f64>,
    /// Gap-decay constant used in schedule and bound derivations.
    #[serde(default = "default_one")]
    pub k: f64,
    /// The explicit universal-constant knob (default 1).
    #[serde(default = "default_one")]
    pub c_const: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Times for TV-curve and envelope output; empty means an automatic
    /// grid spanning three gap timescales.
    #[serde(default)]
    pub t_grid: Vec<f64>,
}

fn default_beta_grid() -> Vec<f64> {
    vec![1.0, 2.0, 4.0, 8.0]
}
fn default_eps() -> f64 {
    0.1
}

impl Default for AnalyzeSection {
    fn default() -> Self {
        Self { beta_grid: vec![1.0, 2.0, 4.0, 8.0], k: 1.0, c_const: 1.0, eps: 0.1, t_grid: vec![] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BenchSection {
    /// Sizes per suite: hypercube dimensions, complete-graph vertex
    /// counts, or torus sides.
    #[serde(default)]
    pub sizes: Option<Vec<u32>>,
    #[serde(default = "default_half")]
    pub delta: f64,
    #[serde(default = "default_one")]
    pub alpha: f64,
    #[serde(default)]
    pub j: Option<f64>,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default = "default_colors")]
    pub colors: u32,
    /// Largest state count for which the convergence envelope is checked
    /// per row (it needs eigenvectors, not just eigenvalues).
    #[serde(default = "default_envelope_cap")]
    pub envelope_cap: u64,
}

fn default_colors() -> u32 {
    2
}
fn default_envelope_cap() -> u64 {
    512
}

impl Default for BenchSection {
    fn default() -> Self {
        Self { sizes: None, delta: 0.5, alpha: 1.0, j: None, h: None, colors: 2, envelope_cap: 512 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct OracleSection {
    #[serde(default = "default_triples")]
    pub triples: usize,
    /// Also sweep the variant exponential form that takes absolute
    /// energies as the penalty argument.
    #[serde(default)]
    pub unshifted_exp: bool,
}

fn default_triples() -> usize {
    1000
}

impl Default for OracleSection {
    fn default() -> Self {
        Self { triples: 1000, unshifted_exp: false }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: None, format: None }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    /// Default configuration for commands run without a config file.
    pub fn built_in_default() -> Self {
        Self::parse("[model]\nkind = \"double-well-five\"\n").expect("built-in config parses")
    }

    /// Instantiate the model.
    pub fn build_model(&self) -> Result<Box<dyn ModelSpec>, CliError> {
        let m = &self.model;
        let j = m.j.unwrap_or(1.0);
        let h = m.h.unwrap_or(1.0);
        let need = |opt: Option<u32>, what: &str| {
            opt.ok_or_else(|| CliError::config(format!("model.{what} required for kind {}", m.kind)))
        };
        Ok(match m.kind.as_str() {
            "ising-hypercube" => Box::new(IsingModel::hypercube(need(m.dim, "dim")?, j, h)?),
            "ising-complete" => Box::new(IsingModel::complete(need(m.n, "n")?, j, h)?),
            "potts" => {
                Box::new(PottsModel::new(need(m.side, "side")?, need(m.colors, "colors")?, j)?)
            }
            "tabular" => {
                let path = m
                    .path
                    .as_ref()
                    .ok_or_else(|| CliError::config("model.path required for kind tabular"))?;
                Box::new(tabular_io::load_tabular(path)?)
            }
            "two-state" => Box::new(landmod::models::reference::two_state()),
            "three-state-path" => Box::new(landmod::models::reference::three_state_path()),
            "single-well-four" => Box::new(landmod::models::reference::single_well_four()),
            "double-well-five" => Box::new(landmod::models::reference::double_well_five()),
            other => return Err(CliError::config(format!("unknown model kind `{other}`"))),
        })
    }

    pub fn penalty(&self) -> Result<PenaltyFunction, CliError> {
        Ok(match self.landscape.f.as_str() {
            "zero" => PenaltyFunction::Zero,
            "linear" => PenaltyFunction::Linear,
            "quadratic" => PenaltyFunction::Quadratic,
            "exp-minus-one" => PenaltyFunction::ExpMinusOne,
            other => return Err(CliError::config(format!("unknown penalty `{other}`"))),
        })
    }

    /// Resolve the threshold against the model's ground energy.
    pub fn threshold(&self, model: &dyn ModelSpec) -> Result<f64, CliError> {
        let spec = match self.landscape.c_mode.as_str() {
            "absolute" => Threshold::Absolute(self.landscape.c),
            "ground-offset" => Threshold::GroundOffset(self.landscape.c),
            other => return Err(CliError::config(format!("unknown c-mode `{other}`"))),
        };
        let ground = model
            .ground()
            .ok_or_else(|| CliError::config("model has no computable ground state"))?
            .1;
        Ok(spec.resolve(ground))
    }

    /// Landscape parameters at the configured constant strength.
    pub fn params(&self, model: &dyn ModelSpec) -> Result<LandscapeParams, CliError> {
        let c = self.threshold(model)?;
        Ok(LandscapeParams::new(self.landscape.alpha, c, self.penalty()?)?)
    }

    pub fn schedule(&self) -> Result<Option<Schedule>, CliError> {
        let Some(s) = &self.schedule else { return Ok(None) };
        let need = |opt: Option<f64>, what: &str| {
            opt.ok_or_else(|| CliError::config(format!("schedule.{what} required for kind {}", s.kind)))
        };
        let schedule = match s.kind.as_str() {
            "constant" => Schedule::Constant(need(s.alpha, "alpha")?),
            "exponential" => {
                Schedule::Exponential { scale: need(s.scale, "scale")?, rate: need(s.rate, "rate")? }
            }
            "logarithmic" => Schedule::Logarithmic { p: need(s.p, "p")? },
            other => return Err(CliError::config(format!("unknown schedule kind `{other}`"))),
        };
        schedule.validate().map_err(CliError::config)?;
        Ok(Some(schedule))
    }

    pub fn x0(&self) -> StateId {
        StateId(self.run.x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = Config::parse("[model]\nkind = \"three-state-path\"\n").unwrap();
        assert_eq!(cfg.run.seed, 0);
        assert_eq!(cfg.landscape.alpha, 1.0);
        let model = cfg.build_model().unwrap();
        assert_eq!(model.state_count(), Some(3));
        let params = cfg.params(model.as_ref()).unwrap();
        assert_eq!(params.c, 0.5); // ground 0 + default offset 0.5
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = "[model]\nkind = \"two-state\"\nbogus = 1\n";
        assert!(Config::parse(bad).is_err());
        let bad_section = "[model]\nkind = \"two-state\"\n[nonsense]\nx = 1\n";
        assert!(Config::parse(bad_section).is_err());
    }

    #[test]
    fn absolute_threshold_mode() {
        let text = r#"
[model]
kind = "three-state-path"

[landscape]
f = "linear"
alpha = 2.0
c-mode = "absolute"
c = 1.25
"#;
        let cfg = Config::parse(text).unwrap();
        let model = cfg.build_model().unwrap();
        let p = cfg.params(model.as_ref()).unwrap();
        assert_eq!(p.c, 1.25);
        assert_eq!(p.alpha, 2.0);
        assert!(matches!(p.f, PenaltyFunction::Linear));
    }

    #[test]
    fn schedule_parsing_and_validation() {
        let text = "[model]\nkind = \"two-state\"\n[schedule]\nkind = \"logarithmic\"\np = 0.5\n";
        let cfg = Config::parse(text).unwrap();
        assert_eq!(cfg.schedule().unwrap(), Some(Schedule::Logarithmic { p: 0.5 }));

        let bad = "[model]\nkind = \"two-state\"\n[schedule]\nkind = \"logarithmic\"\np = 0.0\n";
        assert!(Config::parse(bad).unwrap().schedule().is_err());

        let missing = "[model]\nkind = \"two-state\"\n[schedule]\nkind = \"exponential\"\nscale = 1.0\n";
        assert!(Config::parse(missing).unwrap().schedule().is_err());
    }
}
