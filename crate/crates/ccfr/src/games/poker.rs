//! Parametric heads-up limit poker builder.
//!
//! Kuhn poker and Leduc hold'em are both instances: private deals, one or
//! two fixed-size betting rounds, an optional public card between rounds,
//! and fold/showdown terminals. Alongside the game tree the builder records
//! the metadata the opponent-modeling pipeline needs: the public tree,
//! per-node chance reach and dealt hands, and fold/showdown classification.

use std::collections::HashMap;

use crate::efg::{GameTree, GameTreeBuilder, NodeId, Player};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Card {
    pub rank: u8,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShowdownRule {
    /// Higher rank wins; equal ranks tie.
    HighCard,
    /// A private card pairing the public card wins; otherwise higher rank.
    PairThenHigh,
}

#[derive(Debug, Clone)]
pub struct PokerRules {
    pub name: String,
    pub deck: Vec<Card>,
    pub ante: f64,
    /// Wager size per round; a raise adds the same amount.
    pub bet_sizes: Vec<f64>,
    /// Maximum wagers per round (the opening bet counts as the first).
    pub max_raises: Vec<u32>,
    pub rounds: usize,
    /// Number of public cards revealed before each round.
    pub public_cards_before_round: Vec<usize>,
    pub showdown: ShowdownRule,
}

pub const ACTION_CHECK: &str = "check";
pub const ACTION_BET: &str = "bet";
pub const ACTION_FOLD: &str = "fold";
pub const ACTION_CALL: &str = "call";
pub const ACTION_RAISE: &str = "raise";

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TerminalClass {
    /// Utility does not depend on private cards.
    Fold,
    Showdown,
}

/// Edge of the public tree: a betting action everyone observes, or a public
/// card reveal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PublicEdge {
    Action { player: Player, label: String },
    Card { label: String },
}

#[derive(Debug, Clone)]
pub struct PublicNode {
    pub key: String,
    pub parent: Option<(usize, PublicEdge)>,
    /// Set when terminals occur at this public node; the split is purely
    /// public, so all deals agree.
    pub terminal: Option<TerminalClass>,
}

/// Structured description of an infoset, used by abstractions.
#[derive(Debug, Clone)]
pub struct InfosetDetail {
    pub card: u8,
    pub publics: Vec<u8>,
    pub round: usize,
    /// Betting string only (round separators, no card identities).
    pub betting: String,
}

#[derive(Debug, Clone)]
pub struct PokerMeta {
    pub public_nodes: Vec<PublicNode>,
    /// Per tree node: public node id.
    pub node_public: Vec<usize>,
    /// Per tree node: chance reach π_c(h).
    pub node_chance: Vec<f64>,
    /// Per tree node: dealt private cards, if any.
    pub node_hands: Vec<[Option<u8>; 2]>,
    /// Per tree node: terminal classification (None off terminals).
    pub terminal_class: Vec<Option<TerminalClass>>,
    pub infoset_detail: [Vec<InfosetDetail>; 2],
}

#[derive(Debug, Clone)]
pub struct PokerGame {
    pub tree: GameTree,
    pub rules: PokerRules,
    pub meta: PokerMeta,
}

impl PokerGame {
    pub fn num_cards(&self) -> usize {
        self.rules.deck.len()
    }

    /// Showdown terminal node ids.
    pub fn showdown_terminals(&self) -> Vec<NodeId> {
        self.tree
            .terminals()
            .iter()
            .copied()
            .filter(|&z| self.meta.terminal_class[z] == Some(TerminalClass::Showdown))
            .collect()
    }
}

struct PokerBuilder {
    rules: PokerRules,
    b: GameTreeBuilder,
    public_nodes: Vec<PublicNode>,
    public_lookup: HashMap<String, usize>,
    node_public: Vec<usize>,
    node_chance: Vec<f64>,
    node_hands: Vec<[Option<u8>; 2]>,
    terminal_class: Vec<Option<TerminalClass>>,
    detail: [HashMap<String, InfosetDetail>; 2],
}

#[derive(Debug, Clone)]
struct HandState {
    cards: [u8; 2],
    publics: Vec<u8>,
    round: usize,
    invested: [f64; 2],
    to_act: usize,
    raises: u32,
    to_call: f64,
    /// Whether the non-acting player already checked this round.
    checked: bool,
    public_id: usize,
    chance: f64,
    /// Full public history (betting letters and card reveals).
    history: String,
    /// Betting-only history with round separators.
    betting: String,
}

impl PokerBuilder {
    fn public_child(&mut self, parent: usize, key: String, edge: PublicEdge) -> usize {
        if let Some(&id) = self.public_lookup.get(&key) {
            return id;
        }
        let id = self.public_nodes.len();
        self.public_nodes.push(PublicNode {
            key: key.clone(),
            parent: Some((parent, edge)),
            terminal: None,
        });
        self.public_lookup.insert(key, id);
        id
    }

    fn record(
        &mut self,
        id: NodeId,
        public: usize,
        chance: f64,
        hands: [Option<u8>; 2],
        class: Option<TerminalClass>,
    ) {
        debug_assert_eq!(id, self.node_public.len());
        self.node_public.push(public);
        self.node_chance.push(chance);
        self.node_hands.push(hands);
        self.terminal_class.push(class);
        if let Some(c) = class {
            let existing = &mut self.public_nodes[public].terminal;
            match existing {
                None => *existing = Some(c),
                Some(e) => assert_eq!(*e, c, "terminal class must be public"),
            }
        }
    }

    fn terminal(&mut self, st: &HandState, utility: f64, class: TerminalClass) -> NodeId {
        let id = self.b.terminal(utility);
        self.record(
            id,
            st.public_id,
            st.chance,
            [Some(st.cards[0]), Some(st.cards[1])],
            Some(class),
        );
        id
    }

    fn deal_first(&mut self) -> Result<NodeId> {
        let n = self.rules.deck.len();
        let mut outcomes = Vec::with_capacity(n);
        for c1 in 0..n {
            let child = self.deal_second(c1 as u8)?;
            outcomes.push((1.0 / n as f64, child));
        }
        let id = self.b.chance(outcomes)?;
        self.record(id, 0, 1.0, [None, None], None);
        Ok(id)
    }

    fn deal_second(&mut self, c1: u8) -> Result<NodeId> {
        let n = self.rules.deck.len();
        let mut outcomes = Vec::with_capacity(n - 1);
        for c2 in 0..n {
            if c2 as u8 == c1 {
                continue;
            }
            let st = HandState {
                cards: [c1, c2 as u8],
                publics: Vec::new(),
                round: 0,
                invested: [self.rules.ante, self.rules.ante],
                to_act: 0,
                raises: 0,
                to_call: 0.0,
                checked: false,
                public_id: 0,
                chance: 1.0 / (n as f64 * (n - 1) as f64),
                history: String::new(),
                betting: String::new(),
            };
            let child = self.betting(st)?;
            outcomes.push((1.0 / (n - 1) as f64, child));
        }
        let id = self.b.chance(outcomes)?;
        self.record(
            id,
            0,
            1.0 / n as f64,
            [Some(c1), None],
            None,
        );
        Ok(id)
    }

    fn betting(&mut self, st: HandState) -> Result<NodeId> {
        let actor = st.to_act;
        let player = if actor == 0 { Player::One } else { Player::Two };
        let round = st.round;
        let mut actions: Vec<(&str, char)> = Vec::new();
        if st.to_call == 0.0 {
            actions.push((ACTION_CHECK, 'k'));
            if st.raises < self.rules.max_raises[round] {
                actions.push((ACTION_BET, 'b'));
            }
        } else {
            actions.push((ACTION_FOLD, 'f'));
            actions.push((ACTION_CALL, 'c'));
            if st.raises < self.rules.max_raises[round] {
                actions.push((ACTION_RAISE, 'r'));
            }
        }

        let mut children = Vec::with_capacity(actions.len());
        for &(label, letter) in &actions {
            let mut next = st.clone();
            next.history.push(letter);
            next.betting.push(letter);
            next.public_id = self.public_child(
                st.public_id,
                next.history.clone(),
                PublicEdge::Action {
                    player,
                    label: label.to_string(),
                },
            );
            let child = match label {
                ACTION_CHECK => {
                    if st.checked {
                        self.round_end(next)?
                    } else {
                        next.checked = true;
                        next.to_act = 1 - actor;
                        self.betting(next)?
                    }
                }
                ACTION_BET => {
                    let size = self.rules.bet_sizes[round];
                    next.invested[actor] += size;
                    next.to_call = size;
                    next.raises += 1;
                    next.to_act = 1 - actor;
                    self.betting(next)?
                }
                ACTION_FOLD => {
                    let u1 = if actor == 0 {
                        -st.invested[0]
                    } else {
                        st.invested[1]
                    };
                    self.terminal(&next, u1, TerminalClass::Fold)
                }
                ACTION_CALL => {
                    next.invested[actor] += st.to_call;
                    next.to_call = 0.0;
                    self.round_end(next)?
                }
                ACTION_RAISE => {
                    let size = self.rules.bet_sizes[round];
                    next.invested[actor] += st.to_call + size;
                    next.to_call = size;
                    next.raises += 1;
                    next.to_act = 1 - actor;
                    self.betting(next)?
                }
                _ => unreachable!(),
            };
            children.push(child);
        }

        let card_label = &self.rules.deck[st.cards[actor] as usize].label;
        let key = format!("{card_label}:{}", st.history);
        let action_names: Vec<String> = actions.iter().map(|(l, _)| l.to_string()).collect();
        let id = self.b.decision(player, &key, &action_names, children)?;
        self.record(
            id,
            st.public_id,
            st.chance,
            [Some(st.cards[0]), Some(st.cards[1])],
            None,
        );
        self.detail[player.index()]
            .entry(key)
            .or_insert_with(|| InfosetDetail {
                card: st.cards[actor],
                publics: st.publics.clone(),
                round: st.round,
                betting: st.betting.clone(),
            });
        Ok(id)
    }

    fn round_end(&mut self, mut st: HandState) -> Result<NodeId> {
        st.round += 1;
        if st.round >= self.rounds() {
            let u1 = self.showdown_utility(&st);
            return Ok(self.terminal(&st, u1, TerminalClass::Showdown));
        }
        st.to_act = 0;
        st.raises = 0;
        st.to_call = 0.0;
        st.checked = false;
        st.history.push('/');
        st.betting.push('/');
        let reveals = self.rules.public_cards_before_round[st.round];
        if reveals == 0 {
            return self.betting(st);
        }
        assert_eq!(reveals, 1, "at most one public card per round supported");
        let n = self.rules.deck.len();
        let used: Vec<u8> = st
            .publics
            .iter()
            .copied()
            .chain(st.cards.iter().copied())
            .collect();
        let avail: Vec<u8> = (0..n as u8).filter(|c| !used.contains(c)).collect();
        let mut outcomes = Vec::with_capacity(avail.len());
        let parent_public = st.public_id;
        let parent_history = st.history.clone();
        for &card in &avail {
            let mut next = st.clone();
            next.publics.push(card);
            next.chance /= avail.len() as f64;
            let label = self.rules.deck[card as usize].label.clone();
            next.history = format!("{parent_history}[{label}]");
            next.public_id = self.public_child(
                parent_public,
                next.history.clone(),
                PublicEdge::Card { label },
            );
            let child = self.betting(next)?;
            outcomes.push((1.0 / avail.len() as f64, child));
        }
        let id = self.b.chance(outcomes)?;
        self.record(
            id,
            parent_public,
            st.chance,
            [Some(st.cards[0]), Some(st.cards[1])],
            None,
        );
        Ok(id)
    }

    fn rounds(&self) -> usize {
        self.rules.rounds
    }

    fn showdown_utility(&self, st: &HandState) -> f64 {
        use std::cmp::Ordering;
        let r1 = self.rules.deck[st.cards[0] as usize].rank;
        let r2 = self.rules.deck[st.cards[1] as usize].rank;
        let ord = match self.rules.showdown {
            ShowdownRule::HighCard => r1.cmp(&r2),
            ShowdownRule::PairThenHigh => {
                let public_rank = self.rules.deck[st.publics[0] as usize].rank;
                match (r1 == public_rank, r2 == public_rank) {
                    (true, false) => Ordering::Greater,
                    (false, true) => Ordering::Less,
                    _ => r1.cmp(&r2),
                }
            }
        };
        match ord {
            Ordering::Greater => st.invested[1],
            Ordering::Less => -st.invested[0],
            Ordering::Equal => 0.0,
        }
    }
}

pub fn build_poker(rules: PokerRules) -> Result<PokerGame> {
    if rules.rounds == 0
        || rules.bet_sizes.len() != rules.rounds
        || rules.max_raises.len() != rules.rounds
        || rules.public_cards_before_round.len() != rules.rounds
        || rules.public_cards_before_round[0] != 0
    {
        return Err(Error::InvalidParam("inconsistent poker rules".into()));
    }
    let mut builder = PokerBuilder {
        rules,
        b: GameTreeBuilder::new(),
        public_nodes: vec![PublicNode {
            key: String::new(),
            parent: None,
            terminal: None,
        }],
        public_lookup: HashMap::from([(String::new(), 0usize)]),
        node_public: Vec::new(),
        node_chance: Vec::new(),
        node_hands: Vec::new(),
        terminal_class: Vec::new(),
        detail: [HashMap::new(), HashMap::new()],
    };
    let root = builder.deal_first()?;
    let tree = builder.b.finish(root)?;

    // Infoset details aligned with final infoset ids.
    let mut infoset_detail = [Vec::new(), Vec::new()];
    for p in [Player::One, Player::Two] {
        let details = &builder.detail[p.index()];
        infoset_detail[p.index()] = tree
            .infosets(p)
            .iter()
            .map(|i| details.get(&i.key).expect("detail recorded").clone())
            .collect();
    }

    Ok(PokerGame {
        meta: PokerMeta {
            public_nodes: builder.public_nodes,
            node_public: builder.node_public,
            node_chance: builder.node_chance,
            node_hands: builder.node_hands,
            terminal_class: builder.terminal_class,
            infoset_detail,
        },
        rules: builder.rules,
        tree,
    })
}

/// Three-card Kuhn poker: ante 1, a single one-chip bet round.
pub fn build_kuhn() -> PokerGame {
    let deck = ["J", "Q", "K"]
        .iter()
        .enumerate()
        .map(|(i, l)| Card {
            rank: i as u8,
            label: l.to_string(),
        })
        .collect();
    build_poker(PokerRules {
        name: "kuhn".into(),
        deck,
        ante: 1.0,
        bet_sizes: vec![1.0],
        max_raises: vec![1],
        rounds: 1,
        public_cards_before_round: vec![0],
        showdown: ShowdownRule::HighCard,
    })
    .expect("kuhn rules are consistent")
}

/// Leduc hold'em: six cards in two suits, ante 1, bets of 2 then 4, at most
/// two wagers per round, one public card before the second round.
pub fn build_leduc() -> PokerGame {
    let mut deck = Vec::new();
    for (rank, r) in ["J", "Q", "K"].iter().enumerate() {
        for s in ["s", "h"] {
            deck.push(Card {
                rank: rank as u8,
                label: format!("{r}{s}"),
            });
        }
    }
    build_poker(PokerRules {
        name: "leduc".into(),
        deck,
        ante: 1.0,
        bet_sizes: vec![2.0, 4.0],
        max_raises: vec![2, 2],
        rounds: 2,
        public_cards_before_round: vec![0, 1],
        showdown: ShowdownRule::PairThenHigh,
    })
    .expect("leduc rules are consistent")
}
