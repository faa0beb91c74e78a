//! Bitstring thread addresses for branching recurrence: finite and
//! ultimately periodic bitstrings, split trees and thread projections.

use std::collections::BTreeSet;
use std::fmt;

use super::{LabeledMove, Move, Player, Run};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn empty() -> Self {
        BitString(Vec::new())
    }

    /// Parses a string of `0`s and `1`s.
    pub fn parse(text: &str) -> Option<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<bool>>>()
            .map(BitString)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, bit: bool) -> BitString {
        let mut v = self.0.clone();
        v.push(bit);
        BitString(v)
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The infinite bitstring `prefix · block · block · ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UltimatelyPeriodic {
    prefix: BitString,
    block: BitString,
}

impl UltimatelyPeriodic {
    /// `None` if `block` is empty.
    pub fn new(prefix: BitString, block: BitString) -> Option<Self> {
        (!block.is_empty()).then_some(UltimatelyPeriodic { prefix, block })
    }

    /// `w` followed by infinitely many zeros.
    pub fn zeros_after(w: BitString) -> Self {
        UltimatelyPeriodic {
            prefix: w,
            block: BitString(vec![false]),
        }
    }

    pub fn prefix(&self) -> &BitString {
        &self.prefix
    }

    pub fn block(&self) -> &BitString {
        &self.block
    }

    pub fn bit(&self, i: usize) -> bool {
        let p = self.prefix.len();
        if i < p {
            self.prefix.0[i]
        } else {
            self.block.0[(i - p) % self.block.len()]
        }
    }

    /// The first `n` bits.
    pub fn take(&self, n: usize) -> BitString {
        BitString((0..n).map(|i| self.bit(i)).collect())
    }
}

/// Only finitely many ones.
pub fn is_essentially_finite(v: &UltimatelyPeriodic) -> bool {
    v.block.0.iter().all(|&b| !b)
}

/// A (finite or infinite) thread address, probed for its initial segments.
pub trait ThreadPath {
    fn has_initial_segment(&self, u: &BitString) -> bool;
}

impl ThreadPath for BitString {
    fn has_initial_segment(&self, u: &BitString) -> bool {
        u.is_prefix_of(self)
    }
}

impl ThreadPath for UltimatelyPeriodic {
    fn has_initial_segment(&self, u: &BitString) -> bool {
        u.0.iter().enumerate().all(|(i, &b)| self.bit(i) == b)
    }
}

/// The surface form of a move inside a branching recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchMove {
    /// `w:`, splitting thread `w`.
    Replicate(BitString),
    /// `w.α`, move `α` in every thread through `w`.
    Play(BitString, Move),
}

/// Reads the longest `[01]*` prefix, then requires `:` (ending the move) or
/// `.` followed by a nonempty move.
pub fn parse_branch_move(mv: &Move) -> Option<BranchMove> {
    let text = mv.as_str();
    let cut = text.find(|c| c != '0' && c != '1').unwrap_or(text.len());
    let w = BitString::parse(&text[..cut]).expect("prefix is a bitstring");
    let rest = &text[cut..];
    if rest == ":" {
        Some(BranchMove::Replicate(w))
    } else {
        let alpha = rest.strip_prefix('.')?;
        Move::new(alpha).ok().map(|a| BranchMove::Play(w, a))
    }
}

pub fn replicate_move(w: &BitString) -> Move {
    Move::new(&format!("{w}:")).expect("a replicative move is nonempty")
}

pub fn play_move(w: &BitString, alpha: &Move) -> Move {
    Move::new(&format!("{w}.{alpha}")).expect("a prefixed move is a move")
}

/// Deletes every move except those `u.β` with `u` an initial segment of
/// `v`, and strips the `u.`.
pub fn proj_thread(run: &[LabeledMove], v: &impl ThreadPath) -> Run {
    run.iter()
        .filter_map(|lm| match parse_branch_move(&lm.mv)? {
            BranchMove::Play(u, beta) if v.has_initial_segment(&u) => Some(LabeledMove {
                player: lm.player,
                mv: beta,
            }),
            _ => None,
        })
        .collect()
}

/// The active nodes of a position, as a binary tree: `ε` is active, and
/// `u0`, `u1` are active once `⊥` has made the replicative move `u:`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTree {
    nodes: BTreeSet<BitString>,
    split: BTreeSet<BitString>,
}

impl SplitTree {
    pub fn of_position(position: &[LabeledMove]) -> Self {
        let mut nodes = BTreeSet::from([BitString::empty()]);
        let mut split = BTreeSet::new();
        for lm in position {
            if lm.player != Player::Environment {
                continue;
            }
            if let Some(BranchMove::Replicate(u)) = parse_branch_move(&lm.mv) {
                if nodes.contains(&u) && split.insert(u.clone()) {
                    nodes.insert(u.child(false));
                    nodes.insert(u.child(true));
                }
            }
        }
        SplitTree { nodes, split }
    }

    pub fn active_nodes(&self) -> &BTreeSet<BitString> {
        &self.nodes
    }

    pub fn is_active(&self, w: &BitString) -> bool {
        self.nodes.contains(w)
    }

    pub fn is_leaf(&self, w: &BitString) -> bool {
        self.nodes.contains(w) && !self.split.contains(w)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &BitString> {
        self.nodes.iter().filter(|w| !self.split.contains(*w))
    }

    pub fn leaves_under<'a>(&'a self, w: &'a BitString) -> impl Iterator<Item = &'a BitString> {
        self.leaves().filter(move |l| w.is_prefix_of(l))
    }

    /// The leaf that the infinite path `v` passes through.
    pub fn leaf_on_path(&self, v: &UltimatelyPeriodic) -> BitString {
        let mut w = BitString::empty();
        while self.split.contains(&w) {
            w = w.child(v.bit(w.len()));
        }
        w
    }
}

pub fn active_nodes(position: &[LabeledMove]) -> BTreeSet<BitString> {
    SplitTree::of_position(position).nodes
}
