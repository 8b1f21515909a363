//! Immutable arena representation of a two-player zero-sum extensive-form
//! game.
//!
//! Nodes are decision, chance, or terminal. Only player 1's utility is stored
//! at terminals; player 2's utility is its negation by construction. Each
//! decision node belongs to an information set; all member nodes of an
//! information set share one ordered action list. After `finish` the tree is
//! immutable and safe to share across threads.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type InfosetId = usize;

/// Sequence id within a player's [`SequenceIndex`]. Id 0 is the empty
/// sequence; ids `first_seq(I) + a` are the (infoset, action) pairs.
pub type SeqId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn from_index(i: usize) -> Player {
        match i {
            0 => Player::One,
            1 => Player::Two,
            _ => panic!("player index {i} out of range"),
        }
    }

    /// Sign of player 1's utility from this player's perspective.
    pub fn sign(self) -> f64 {
        match self {
            Player::One => 1.0,
            Player::Two => -1.0,
        }
    }
}

pub const PLAYERS: [Player; 2] = [Player::One, Player::Two];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum NodeKind {
    Decision { player: Player, infoset: InfosetId },
    Chance { probs: Vec<f64> },
    Terminal { utility: f64 },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    pub children: Vec<NodeId>,
    /// Parent node and the action index taken there; `None` at the root.
    pub parent: Option<(NodeId, usize)>,
}

impl Node {
    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, NodeKind::Terminal { .. })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Infoset {
    pub player: Player,
    /// Stable key identifying the infoset (private observations + history).
    pub key: String,
    pub actions: Vec<String>,
    /// Member decision nodes, in construction order.
    pub nodes: Vec<NodeId>,
}

/// Flat layout of a player's decision slots: one contiguous block of
/// sequence ids per infoset. Shared between tree games and other
/// solver-compatible game views.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeqLayout {
    pub num_seqs: usize,
    pub sets: Vec<SetSlot>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SetSlot {
    pub first_seq: SeqId,
    pub actions: usize,
}

impl SeqLayout {
    pub fn slot(&self, infoset: InfosetId) -> SetSlot {
        self.sets[infoset]
    }

    pub fn seq(&self, infoset: InfosetId, action: usize) -> SeqId {
        let s = self.sets[infoset];
        debug_assert!(action < s.actions);
        s.first_seq + action
    }

    pub fn seq_range(&self, infoset: InfosetId) -> std::ops::Range<usize> {
        let s = self.sets[infoset];
        s.first_seq..s.first_seq + s.actions
    }
}

/// Per-player index over `{∅} ∪ {(I,a)}` for a perfect-recall player.
#[derive(Debug, Clone)]
pub struct SequenceIndex {
    pub layout: SeqLayout,
    /// Per infoset: the sequence entering it (0 = ∅).
    pub parent_seq: Vec<SeqId>,
    /// Per node: this player's sequence entering the node.
    pub node_seq: Vec<SeqId>,
    /// Infosets ordered children-first (deepest own-action depth first).
    pub reverse_topo: Vec<InfosetId>,
    /// Per sequence id >= 1: the (infoset, action index) it denotes.
    pub seq_owner: Vec<(InfosetId, usize)>,
    /// Own-action depth per infoset (number of own actions before acting).
    pub depth: Vec<usize>,
}

impl SequenceIndex {
    pub fn num_seqs(&self) -> usize {
        self.layout.num_seqs
    }

    /// Infosets ordered root-first (parents before descendants).
    pub fn topo(&self) -> impl Iterator<Item = InfosetId> + '_ {
        self.reverse_topo.iter().rev().copied()
    }
}

/// Immutable game tree with per-player information-set partition.
#[derive(Debug, Clone)]
pub struct GameTree {
    nodes: Vec<Node>,
    root: NodeId,
    infosets: [Vec<Infoset>; 2],
    perfect_recall: [bool; 2],
    /// Node ids with parents before children.
    preorder: Vec<NodeId>,
    terminals: Vec<NodeId>,
    /// Chance reach π_c(z), aligned with `terminals`.
    terminal_chance: Vec<f64>,
    seq: [Option<SequenceIndex>; 2],
    utility_range: (f64, f64),
    hash: String,
}

const CHANCE_SUM_TOL: f64 = 1e-9;

impl GameTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// Chance reach of the i-th entry of `terminals()`.
    pub fn terminal_chance(&self) -> &[f64] {
        &self.terminal_chance
    }

    pub fn infosets(&self, player: Player) -> &[Infoset] {
        &self.infosets[player.index()]
    }

    pub fn infoset(&self, player: Player, id: InfosetId) -> &Infoset {
        &self.infosets[player.index()][id]
    }

    pub fn has_perfect_recall(&self, player: Player) -> bool {
        self.perfect_recall[player.index()]
    }

    /// Sequence index of a perfect-recall player.
    pub fn seq_index(&self, player: Player) -> Result<&SequenceIndex> {
        self.seq[player.index()]
            .as_ref()
            .ok_or(Error::ImperfectRecall(player))
    }

    pub fn num_seqs(&self, player: Player) -> Result<usize> {
        Ok(self.seq_index(player)?.num_seqs())
    }

    /// Player-1 utility at a terminal node.
    pub fn utility(&self, node: NodeId) -> f64 {
        match self.nodes[node].kind {
            NodeKind::Terminal { utility } => utility,
            _ => panic!("utility() on non-terminal node"),
        }
    }

    pub fn utility_range(&self) -> (f64, f64) {
        self.utility_range
    }

    pub fn delta_u(&self) -> f64 {
        self.utility_range.1 - self.utility_range.0
    }

    /// Stable textual hash of topology plus utilities.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn lookup_infoset(&self, player: Player, key: &str) -> Option<InfosetId> {
        self.infosets[player.index()]
            .iter()
            .position(|i| i.key == key)
    }

    /// Resolve `(infoset key, action label)` to the player's sequence id.
    pub fn lookup_seq(&self, player: Player, key: &str, action: &str) -> Result<SeqId> {
        let id = self
            .lookup_infoset(player, key)
            .ok_or_else(|| Error::UnknownInfoset(key.to_string()))?;
        let info = self.infoset(player, id);
        let a = info
            .actions
            .iter()
            .position(|x| x == action)
            .ok_or_else(|| Error::UnknownAction {
                infoset: key.to_string(),
                action: action.to_string(),
            })?;
        Ok(self.seq_index(player)?.layout.seq(id, a))
    }

    /// Transposed game: players swapped, utilities negated. Infoset and
    /// sequence enumeration per seat is preserved, so a strategy vector for
    /// player 2 of the original indexes player 1 of the transposed game
    /// unchanged.
    pub fn transposed(&self) -> GameTree {
        let mut nodes = self.nodes.clone();
        for n in &mut nodes {
            match &mut n.kind {
                NodeKind::Decision { player, .. } => *player = player.other(),
                NodeKind::Terminal { utility } => *utility = -*utility,
                NodeKind::Chance { .. } => {}
            }
        }
        let mut infosets = [self.infosets[1].clone(), self.infosets[0].clone()];
        for side in infosets.iter_mut() {
            for i in side.iter_mut() {
                i.player = i.player.other();
            }
        }
        let (lo, hi) = self.utility_range;
        GameTree {
            nodes,
            root: self.root,
            infosets,
            perfect_recall: [self.perfect_recall[1], self.perfect_recall[0]],
            preorder: self.preorder.clone(),
            terminals: self.terminals.clone(),
            terminal_chance: self.terminal_chance.clone(),
            seq: [self.seq[1].clone(), self.seq[0].clone()],
            utility_range: (-hi, -lo),
            hash: format!("transposed:{}", self.hash),
        }
    }
}

/// Incremental tree builder. Children are created before their parent; the
/// completed root is passed to [`GameTreeBuilder::finish`].
pub struct GameTreeBuilder {
    nodes: Vec<Node>,
    infosets: [Vec<Infoset>; 2],
    lookup: HashMap<(usize, String), InfosetId>,
}

impl Default for GameTreeBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GameTreeBuilder {
    pub fn new() -> Self {
        GameTreeBuilder {
            nodes: Vec::new(),
            infosets: [Vec::new(), Vec::new()],
            lookup: HashMap::new(),
        }
    }

    pub fn terminal(&mut self, utility: f64) -> NodeId {
        self.push(Node {
            kind: NodeKind::Terminal { utility },
            children: Vec::new(),
            parent: None,
        })
    }

    pub fn chance(&mut self, outcomes: Vec<(f64, NodeId)>) -> Result<NodeId> {
        let sum: f64 = outcomes.iter().map(|(p, _)| *p).sum();
        if (sum - 1.0).abs() > CHANCE_SUM_TOL || outcomes.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::MalformedTree(format!(
                "chance distribution invalid (sum = {sum})"
            )));
        }
        let (probs, children): (Vec<f64>, Vec<NodeId>) = outcomes.into_iter().unzip();
        Ok(self.push(Node {
            kind: NodeKind::Chance { probs },
            children,
            parent: None,
        }))
    }

    pub fn decision(
        &mut self,
        player: Player,
        key: &str,
        actions: &[String],
        children: Vec<NodeId>,
    ) -> Result<NodeId> {
        if actions.len() != children.len() || actions.is_empty() {
            return Err(Error::MalformedTree(format!(
                "decision `{key}`: {} actions vs {} children",
                actions.len(),
                children.len()
            )));
        }
        let side = player.index();
        let id = match self.lookup.get(&(side, key.to_string())) {
            Some(&id) => {
                if self.infosets[side][id].actions != actions {
                    return Err(Error::MalformedTree(format!(
                        "infoset `{key}` members disagree on action lists"
                    )));
                }
                id
            }
            None => {
                let id = self.infosets[side].len();
                self.infosets[side].push(Infoset {
                    player,
                    key: key.to_string(),
                    actions: actions.to_vec(),
                    nodes: Vec::new(),
                });
                self.lookup.insert((side, key.to_string()), id);
                id
            }
        };
        let node = self.push(Node {
            kind: NodeKind::Decision {
                player,
                infoset: id,
            },
            children,
            parent: None,
        });
        self.infosets[side][id].nodes.push(node);
        Ok(node)
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn finish(mut self, root: NodeId) -> Result<GameTree> {
        // Parent links; each non-root node must be referenced exactly once.
        let mut seen = vec![false; self.nodes.len()];
        for id in 0..self.nodes.len() {
            for a in 0..self.nodes[id].children.len() {
                let c = self.nodes[id].children[a];
                if seen[c] || c == root {
                    return Err(Error::MalformedTree(format!(
                        "node {c} referenced more than once or is the root"
                    )));
                }
                seen[c] = true;
                self.nodes[c].parent = Some((id, a));
            }
        }

        // Preorder walk; also collects terminals with their chance reach.
        let mut preorder = Vec::with_capacity(self.nodes.len());
        let mut terminals = Vec::new();
        let mut terminal_chance = Vec::new();
        let mut stack = vec![(root, 1.0f64)];
        let mut visited = 0usize;
        while let Some((id, pc)) = stack.pop() {
            preorder.push(id);
            visited += 1;
            let node = &self.nodes[id];
            match &node.kind {
                NodeKind::Terminal { .. } => {
                    terminals.push(id);
                    terminal_chance.push(pc);
                }
                NodeKind::Chance { probs } => {
                    for (i, &c) in node.children.iter().enumerate().rev() {
                        stack.push((c, pc * probs[i]));
                    }
                }
                NodeKind::Decision { .. } => {
                    for &c in node.children.iter().rev() {
                        stack.push((c, pc));
                    }
                }
            }
        }
        if visited != self.nodes.len() {
            return Err(Error::MalformedTree(format!(
                "{} of {} nodes unreachable from root",
                self.nodes.len() - visited,
                self.nodes.len()
            )));
        }

        let mut utility_range = (f64::INFINITY, f64::NEG_INFINITY);
        for &z in &terminals {
            if let NodeKind::Terminal { utility } = self.nodes[z].kind {
                utility_range.0 = utility_range.0.min(utility);
                utility_range.1 = utility_range.1.max(utility);
            }
        }
        if terminals.is_empty() {
            utility_range = (0.0, 0.0);
        }

        let mut tree = GameTree {
            hash: String::new(),
            nodes: self.nodes,
            root,
            infosets: self.infosets,
            perfect_recall: [false, false],
            preorder,
            terminals,
            terminal_chance,
            seq: [None, None],
            utility_range,
        };
        for p in PLAYERS {
            tree.perfect_recall[p.index()] = tree.check_perfect_recall(p);
            if tree.perfect_recall[p.index()] {
                tree.seq[p.index()] = Some(tree.build_seq_index(p)?);
            }
        }
        tree.hash = tree.compute_hash();
        Ok(tree)
    }
}

impl GameTree {
    /// Own past (infoset, action) sequence of `player` leading to `node`.
    fn own_sequence(&self, player: Player, node: NodeId) -> Vec<(InfosetId, usize)> {
        let mut out = Vec::new();
        let mut cur = node;
        while let Some((parent, action)) = self.nodes[cur].parent {
            if let NodeKind::Decision { player: q, infoset } = self.nodes[parent].kind {
                if q == player {
                    out.push((infoset, action));
                }
            }
            cur = parent;
        }
        out.reverse();
        out
    }

    fn check_perfect_recall(&self, player: Player) -> bool {
        for info in &self.infosets[player.index()] {
            let mut reference: Option<Vec<(InfosetId, usize)>> = None;
            for &n in &info.nodes {
                let seq = self.own_sequence(player, n);
                match &reference {
                    None => reference = Some(seq),
                    Some(r) => {
                        if *r != seq {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn build_seq_index(&self, player: Player) -> Result<SequenceIndex> {
        let side = player.index();
        let infosets = &self.infosets[side];
        let mut sets = Vec::with_capacity(infosets.len());
        let mut next = 1usize; // 0 = ∅
        let mut seq_owner = vec![(usize::MAX, 0usize)];
        for (id, info) in infosets.iter().enumerate() {
            sets.push(SetSlot {
                first_seq: next,
                actions: info.actions.len(),
            });
            for a in 0..info.actions.len() {
                seq_owner.push((id, a));
            }
            next += info.actions.len();
        }
        let layout = SeqLayout {
            num_seqs: next,
            sets,
        };

        // Walk the arena carrying this player's current sequence; record the
        // entering sequence per node and the unique parent sequence per
        // infoset.
        let mut node_seq = vec![0usize; self.nodes.len()];
        let mut parent_seq = vec![usize::MAX; infosets.len()];
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, cur)) = stack.pop() {
            node_seq[id] = cur;
            let node = &self.nodes[id];
            match node.kind {
                NodeKind::Decision { player: q, infoset } if q == player => {
                    if parent_seq[infoset] == usize::MAX {
                        parent_seq[infoset] = cur;
                    } else if parent_seq[infoset] != cur {
                        return Err(Error::MalformedTree(format!(
                            "infoset `{}` has two distinct parent sequences",
                            infosets[infoset].key
                        )));
                    }
                    for (a, &c) in node.children.iter().enumerate() {
                        stack.push((c, layout.seq(infoset, a)));
                    }
                }
                _ => {
                    for &c in node.children.iter().rev() {
                        stack.push((c, cur));
                    }
                }
            }
        }
        for (id, &p) in parent_seq.iter().enumerate() {
            if p == usize::MAX {
                return Err(Error::MalformedTree(format!(
                    "infoset `{}` has no member node reachable from the root",
                    infosets[id].key
                )));
            }
        }

        // Depth = number of own actions before acting; descending depth is a
        // valid children-first order because own depth strictly increases
        // along own-action chains.
        let mut depth = vec![0usize; infosets.len()];
        let mut seq_depth = vec![0usize; layout.num_seqs];
        // parent_seq of an infoset always points at a sequence allocated for
        // an earlier-seen infoset or ∅, but infoset ids are in construction
        // order, not necessarily ancestor-first; iterate until fixpoint-free
        // formulation instead: process infosets sorted by parent chain.
        let mut order: Vec<InfosetId> = (0..infosets.len()).collect();
        // Compute depths via repeated passes (chains are short; typically
        // construction order already works, this is robust either way).
        let mut changed = true;
        while changed {
            changed = false;
            for id in 0..infosets.len() {
                let d = seq_depth[parent_seq[id]];
                if depth[id] != d {
                    depth[id] = d;
                    changed = true;
                }
                for a in 0..layout.slot(id).actions {
                    let s = layout.seq(id, a);
                    if seq_depth[s] != d + 1 {
                        seq_depth[s] = d + 1;
                        changed = true;
                    }
                }
            }
        }
        order.sort_by_key(|&id| std::cmp::Reverse(depth[id]));

        Ok(SequenceIndex {
            layout,
            parent_seq,
            node_seq,
            reverse_topo: order,
            seq_owner,
            depth,
        })
    }

    fn compute_hash(&self) -> String {
        let repr = self.to_repr();
        let text = serde_json::to_string(&repr).expect("tree repr serializes");
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        let digest = hasher.finalize();
        let mut out = String::with_capacity(16);
        for b in digest.iter().take(8) {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

// --- serialization -------------------------------------------------------
//
// The on-disk format is JSON listing nodes, infosets, and the root. Only the
// defining data is stored; parent links, orders, sequence indexes, and
// perfect-recall flags are rebuilt on load, so a round trip is exact for
// every utility and chance probability representable in binary floating
// point.

#[derive(Debug, Serialize, Deserialize)]
struct NodeRepr {
    kind: NodeKind,
    children: Vec<NodeId>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeRepr {
    root: NodeId,
    nodes: Vec<NodeRepr>,
    infosets: [Vec<Infoset>; 2],
}

impl GameTree {
    fn to_repr(&self) -> TreeRepr {
        TreeRepr {
            root: self.root,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRepr {
                    kind: n.kind.clone(),
                    children: n.children.clone(),
                })
                .collect(),
            infosets: [
                self.infosets[0]
                    .iter()
                    .map(|i| Infoset {
                        nodes: Vec::new(),
                        ..i.clone()
                    })
                    .collect(),
                self.infosets[1]
                    .iter()
                    .map(|i| Infoset {
                        nodes: Vec::new(),
                        ..i.clone()
                    })
                    .collect(),
            ],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_repr()).expect("tree serializes")
    }

    pub fn from_json(text: &str) -> Result<GameTree> {
        let repr: TreeRepr =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut builder = GameTreeBuilder::new();
        // Recreate nodes in the original id order so child references hold.
        for node in &repr.nodes {
            match &node.kind {
                NodeKind::Terminal { utility } => {
                    builder.terminal(*utility);
                }
                NodeKind::Chance { probs } => {
                    builder.chance(
                        probs
                            .iter()
                            .copied()
                            .zip(node.children.iter().copied())
                            .collect(),
                    )?;
                }
                NodeKind::Decision { player, infoset } => {
                    let info = &repr.infosets[player.index()][*infoset];
                    builder.decision(*player, &info.key, &info.actions, node.children.clone())?;
                }
            }
        }
        builder.finish(repr.root)
    }
}
