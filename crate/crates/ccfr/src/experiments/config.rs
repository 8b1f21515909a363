//! Experiment configuration files (TOML; unknown keys rejected).

use serde::{Deserialize, Serialize};

use crate::efg::Player;
use crate::error::{Error, Result};
use crate::solver::{CcfrConfig, StepRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Solve,
    TransitSweep,
    LpCompare,
    OpponentModel,
    BoundAudit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSelect {
    /// kuhn | leduc | transit
    pub name: String,
    /// Transit size parameter.
    pub w: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSection {
    /// constant | decaying | corollary
    pub kind: String,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub g: Option<f64>,
}

impl StepSection {
    fn to_rule(&self) -> Result<StepRule> {
        match self.kind.as_str() {
            "constant" => Ok(StepRule::Constant {
                alpha: self.alpha.unwrap_or(1.0),
            }),
            "decaying" => Ok(StepRule::Decaying {
                c: self
                    .c
                    .ok_or_else(|| Error::Config("decaying step needs `c`".into()))?,
            }),
            "corollary" => Ok(StepRule::Corollary { g: self.g }),
            other => Err(Error::Config(format!("unknown step rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub iterations: usize,
    pub beta: Option<f64>,
    #[serde(default = "default_player")]
    pub constrained_player: u8,
    #[serde(default = "default_true")]
    pub clamp_lambda: bool,
    #[serde(default)]
    pub beta_doubling: bool,
    #[serde(default = "default_theta")]
    pub doubling_theta: f64,
    #[serde(default = "default_cap")]
    pub doubling_cap: u32,
    #[serde(default = "default_cpd")]
    pub checkpoints_per_decade: u32,
    pub step: Option<StepSection>,
}

fn default_player() -> u8 {
    1
}
fn default_true() -> bool {
    true
}
fn default_theta() -> f64 {
    0.9
}
fn default_cap() -> u32 {
    10
}
fn default_cpd() -> u32 {
    8
}

impl SolverSection {
    pub fn to_ccfr_config(&self, seed: u64) -> Result<CcfrConfig> {
        let mut cfg = CcfrConfig::new(self.iterations);
        cfg.beta = self.beta;
        cfg.constrained_player = match self.constrained_player {
            1 => Player::One,
            2 => Player::Two,
            p => return Err(Error::Config(format!("constrained_player must be 1 or 2, got {p}"))),
        };
        cfg.clamp_lambda = self.clamp_lambda;
        cfg.beta_doubling = self.beta_doubling;
        cfg.doubling_theta = self.doubling_theta;
        cfg.doubling_cap = self.doubling_cap;
        cfg.checkpoints_per_decade = self.checkpoints_per_decade;
        if let Some(step) = &self.step {
            cfg.step_rule = step.to_rule()?;
        }
        cfg.seed = seed;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    /// sequence_bound | risk
    pub kind: String,
    /// Poker sequence bound: infoset key, action label, sense, bound.
    pub infoset: Option<String>,
    pub action: Option<String>,
    /// le | ge
    pub sense: Option<String>,
    pub bound: Option<f64>,
    /// Transit risk bound.
    pub b_r: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitSweepSection {
    pub risk_bounds: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpponentModelSection {
    pub game_counts: Vec<usize>,
    pub gammas: Vec<f64>,
    pub seeds: u32,
    #[serde(default = "default_true")]
    pub include_exact: bool,
    /// Abstraction name used to generate the target profile.
    pub target_abstraction: String,
    pub target_iterations: usize,
    #[serde(default = "default_true")]
    pub use_estimated_own_reach: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub out_dir: Option<String>,
    pub game: GameSelect,
    pub solver: Option<SolverSection>,
    #[serde(default)]
    pub constraints: Vec<ConstraintSpec>,
    pub transit_sweep: Option<TransitSweepSection>,
    pub opponent_model: Option<OpponentModelSection>,
}

fn default_seed() -> u64 {
    1
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self.game.name.as_str() {
            "kuhn" | "leduc" => {}
            "transit" => {
                if self.game.w.is_none() {
                    return Err(Error::Config("transit game needs `game.w`".into()));
                }
            }
            other => return Err(Error::Config(format!("unknown game `{other}`"))),
        }
        match self.kind {
            ExperimentKind::Solve | ExperimentKind::LpCompare | ExperimentKind::BoundAudit => {
                if self.solver.is_none() {
                    return Err(Error::Config("missing [solver] section".into()));
                }
            }
            ExperimentKind::TransitSweep => {
                if self.solver.is_none() || self.transit_sweep.is_none() {
                    return Err(Error::Config(
                        "transit_sweep needs [solver] and [transit_sweep]".into(),
                    ));
                }
                if self.game.name != "transit" {
                    return Err(Error::Config("transit_sweep needs the transit game".into()));
                }
            }
            ExperimentKind::OpponentModel => {
                if self.solver.is_none() || self.opponent_model.is_none() {
                    return Err(Error::Config(
                        "opponent_model needs [solver] and [opponent_model]".into(),
                    ));
                }
                if self.game.name == "transit" {
                    return Err(Error::Config("opponent_model needs a poker game".into()));
                }
            }
        }
        Ok(())
    }
}
