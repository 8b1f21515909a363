//! Extensive-form game representation: tree arena, information sets,
//! behavioral/sequence-form strategies, reach and utility evaluation.

mod eval;
mod strategy;
mod tree;

pub use eval::{expected_utility, expected_utility_behavioral, reach_probability, Reach};
pub use strategy::{
    behavioral_of, random_realization, seq_of, seq_of_into, validate, BehavioralStrategy,
    SequenceFormStrategy, ValidationReport,
};
pub use tree::{
    GameTree, GameTreeBuilder, Infoset, InfosetId, Node, NodeId, NodeKind, Player, SeqId,
    SeqLayout, SequenceIndex, SetSlot, PLAYERS,
};
