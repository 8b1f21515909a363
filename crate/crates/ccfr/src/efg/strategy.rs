//! Behavioral and sequence-form strategies.
//!
//! Both are stored as flat vectors over a player's sequence ids: entry
//! `first_seq(I) + a` holds σ(I,a) for behavioral strategies and the
//! realization probability x_{(I,a)} for sequence-form strategies. Index 0 is
//! the empty sequence (always 1 in sequence form, unused in behavioral
//! strategies).

use rand::Rng;

use crate::efg::tree::{GameTree, InfosetId, Player, SeqLayout};
use crate::error::{Error, Result};

const DIST_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BehavioralStrategy {
    pub player: Player,
    /// σ(I,a) at index `first_seq(I) + a`; index 0 is unused and fixed to 1.
    pub probs: Vec<f64>,
}

impl BehavioralStrategy {
    pub fn uniform(layout: &SeqLayout, player: Player) -> Self {
        let mut probs = vec![0.0; layout.num_seqs];
        probs[0] = 1.0;
        for slot in &layout.sets {
            let p = 1.0 / slot.actions as f64;
            for s in slot.first_seq..slot.first_seq + slot.actions {
                probs[s] = p;
            }
        }
        BehavioralStrategy { player, probs }
    }

    pub fn from_flat(layout: &SeqLayout, player: Player, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != layout.num_seqs {
            return Err(Error::InvalidParam(format!(
                "strategy vector length {} != {}",
                probs.len(),
                layout.num_seqs
            )));
        }
        let s = BehavioralStrategy { player, probs };
        s.check_distributions(layout)?;
        Ok(s)
    }

    /// Random strategy: each infoset distribution drawn from a flat
    /// Dirichlet (normalized unit exponentials).
    pub fn random(layout: &SeqLayout, player: Player, rng: &mut dyn rand::RngCore) -> Self {
        let mut probs = vec![0.0; layout.num_seqs];
        probs[0] = 1.0;
        for slot in &layout.sets {
            let mut sum = 0.0;
            for s in slot.first_seq..slot.first_seq + slot.actions {
                let u: f64 = rng.gen_range(f64::EPSILON..1.0);
                probs[s] = -u.ln();
                sum += probs[s];
            }
            for s in slot.first_seq..slot.first_seq + slot.actions {
                probs[s] /= sum;
            }
        }
        BehavioralStrategy { player, probs }
    }

    pub fn dist(&self, layout: &SeqLayout, infoset: InfosetId) -> &[f64] {
        &self.probs[layout.seq_range(infoset)]
    }

    pub fn check_distributions(&self, layout: &SeqLayout) -> Result<()> {
        for (id, slot) in layout.sets.iter().enumerate() {
            let range = slot.first_seq..slot.first_seq + slot.actions;
            let sum: f64 = self.probs[range.clone()].iter().sum();
            if (sum - 1.0).abs() > DIST_SUM_TOL || self.probs[range].iter().any(|&p| p < 0.0) {
                return Err(Error::BadDistribution {
                    infoset: format!("#{id}"),
                    sum,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFormStrategy {
    pub player: Player,
    /// x over the player's sequence index; `values[0]` = x_∅ = 1.
    pub values: Vec<f64>,
}

impl SequenceFormStrategy {
    pub fn from_values(player: Player, values: Vec<f64>) -> Self {
        SequenceFormStrategy { player, values }
    }
}

/// SEQ(σ): entry (I,a) is the product of the owner's own action
/// probabilities along the unique path to I, times σ(I,a).
pub fn seq_of(strategy: &BehavioralStrategy, game: &GameTree) -> Result<SequenceFormStrategy> {
    let index = game.seq_index(strategy.player)?;
    strategy.check_distributions(&index.layout)?;
    let mut values = vec![0.0; index.num_seqs()];
    seq_of_into(&strategy.probs, game, strategy.player, &mut values)?;
    Ok(SequenceFormStrategy {
        player: strategy.player,
        values,
    })
}

/// Allocation-free core of [`seq_of`]; `probs` is a flat behavioral vector.
pub fn seq_of_into(
    probs: &[f64],
    game: &GameTree,
    player: Player,
    out: &mut [f64],
) -> Result<()> {
    let index = game.seq_index(player)?;
    out[0] = 1.0;
    for infoset in index.topo() {
        let base = out[index.parent_seq[infoset]];
        for s in index.layout.seq_range(infoset) {
            out[s] = base * probs[s];
        }
    }
    Ok(())
}

/// Inverse of [`seq_of`]: σ(I,a) = x_{(I,a)} / x_I where x_I > 0; uniform at
/// infosets the plan never reaches.
pub fn behavioral_of(x: &SequenceFormStrategy, game: &GameTree) -> Result<BehavioralStrategy> {
    let index = game.seq_index(x.player)?;
    let mut probs = vec![0.0; index.num_seqs()];
    probs[0] = 1.0;
    for (id, slot) in index.layout.sets.iter().enumerate() {
        let range = index.layout.seq_range(id);
        let mass: f64 = x.values[range.clone()].iter().sum();
        if mass > 0.0 {
            for s in range {
                probs[s] = x.values[s] / mass;
            }
        } else {
            let u = 1.0 / slot.actions as f64;
            for s in range {
                probs[s] = u;
            }
        }
    }
    Ok(BehavioralStrategy {
        player: x.player,
        probs,
    })
}

/// Violation report for the sequence-form polytope constraints.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// |x_∅ − 1|
    pub empty_violation: f64,
    /// max(0, −min_s x_s)
    pub negativity_violation: f64,
    /// max over infosets of |x_I − Σ_a x_{(I,a)}|
    pub flow_violation: f64,
    /// Infoset attaining the flow violation, if any.
    pub worst_infoset: Option<InfosetId>,
}

impl ValidationReport {
    pub fn max_violation(&self) -> f64 {
        self.empty_violation
            .max(self.negativity_violation)
            .max(self.flow_violation)
    }

    pub fn ok(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }
}

/// Reports the largest violation of x_∅ = 1, x ≥ 0, and the flow
/// constraints x_I = Σ_a x_{(I,a)}.
pub fn validate(x: &SequenceFormStrategy, game: &GameTree) -> Result<ValidationReport> {
    let index = game.seq_index(x.player)?;
    if x.values.len() != index.num_seqs() {
        return Err(Error::InvalidParam(format!(
            "sequence vector length {} != {}",
            x.values.len(),
            index.num_seqs()
        )));
    }
    let empty_violation = (x.values[0] - 1.0).abs();
    let negativity_violation = x
        .values
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(-v.min(0.0)));
    let mut flow_violation = 0.0f64;
    let mut worst_infoset = None;
    for id in 0..index.layout.sets.len() {
        let parent = x.values[index.parent_seq[id]];
        let sum: f64 = x.values[index.layout.seq_range(id)].iter().sum();
        let v = (parent - sum).abs();
        if v > flow_violation {
            flow_violation = v;
            worst_infoset = Some(id);
        }
    }
    Ok(ValidationReport {
        empty_violation,
        negativity_violation,
        flow_violation,
        worst_infoset,
    })
}

/// Random point of the sequence-form polytope (image of a random behavioral
/// strategy).
pub fn random_realization(
    game: &GameTree,
    player: Player,
    rng: &mut impl Rng,
) -> Result<SequenceFormStrategy> {
    let layout = &game.seq_index(player)?.layout;
    let b = BehavioralStrategy::random(layout, player, rng);
    seq_of(&b, game)
}
