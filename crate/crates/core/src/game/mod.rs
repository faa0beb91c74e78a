//! Finite-run game semantics: constant games given by finite trees, and the
//! operators built on them.
//!
//! Runs are judged only when finite. Every game answers three questions
//! about a legal position: which moves each player may make (a finite menu),
//! whether a given move is legal, and who wins a finite legal run.
//!
//! Move syntax inside composite games:
//!
//! | game                   | moves                                   |
//! |------------------------|-----------------------------------------|
//! | `∧`, `∨` of `n` games  | `i.α`, `i < n` in canonical decimal     |
//! | `⊓`, `⊔` of `n` games  | first `i` by the selector, then `α`     |
//! | `∧|`                   | `i.α` for any canonical decimal `i`     |
//! | `∘|`, `∘|^ℵ0`          | `w:` (environment only) and `w.α`       |

mod thread;

use std::fmt;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use thread::{
    active_nodes, is_essentially_finite, parse_branch_move, play_move, proj_thread, replicate_move, BitString,
    BranchMove, SplitTree, ThreadPath, UltimatelyPeriodic,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    /// `⊤`, written `T`.
    Machine,
    /// `⊥`, written `B`.
    Environment,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Machine => Player::Environment,
            Player::Environment => Player::Machine,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Player::Machine => "T",
            Player::Environment => "B",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Player> {
        match tag {
            "T" => Some(Player::Machine),
            "B" => Some(Player::Environment),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid move {0:?}: moves are nonempty and contain no whitespace")]
    InvalidMove(String),
    #[error("duplicate edge ({player}, {mv}) at one node")]
    DuplicateEdge { player: Player, mv: Move },
    #[error("{0} needs at least one component")]
    NoComponents(&'static str),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move(Arc<str>);

impl Move {
    pub fn new(text: &str) -> Result<Move, GameError> {
        if text.is_empty() || text.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(GameError::InvalidMove(text.to_string()));
        }
        Ok(Move(text.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledMove {
    pub player: Player,
    pub mv: Move,
}

impl LabeledMove {
    pub fn new(player: Player, mv: &str) -> Result<Self, GameError> {
        Ok(LabeledMove {
            player,
            mv: Move::new(mv)?,
        })
    }
}

impl fmt::Display for LabeledMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.player, self.mv)
    }
}

pub type Run = Vec<LabeledMove>;

/// Flips every label.
pub fn neg_run(run: &[LabeledMove]) -> Run {
    run.iter()
        .map(|lm| LabeledMove {
            player: lm.player.other(),
            mv: lm.mv.clone(),
        })
        .collect()
}

/// Keeps the moves `prefix α` and strips the prefix.
pub fn proj_component(run: &[LabeledMove], prefix: &str) -> Run {
    run.iter()
        .filter_map(|lm| {
            let rest = lm.mv.as_str().strip_prefix(prefix)?;
            Some(LabeledMove {
                player: lm.player,
                mv: Move::new(rest).ok()?,
            })
        })
        .collect()
}

/// A node of a finite game tree: who wins if play stops here, and the
/// moves available from here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTree {
    pub winner: Player,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub player: Player,
    pub mv: Move,
    pub next: GameTree,
}

impl GameTree {
    pub fn leaf(winner: Player) -> Self {
        GameTree {
            winner,
            edges: Vec::new(),
        }
    }

    pub fn with_edge(mut self, player: Player, mv: &str, next: GameTree) -> Result<Self, GameError> {
        self.edges.push(Edge {
            player,
            mv: Move::new(mv)?,
            next,
        });
        Ok(self)
    }

    fn validate(&self) -> Result<(), GameError> {
        for (i, e) in self.edges.iter().enumerate() {
            if self.edges[..i].iter().any(|d| d.player == e.player && d.mv == e.mv) {
                return Err(GameError::DuplicateEdge {
                    player: e.player,
                    mv: e.mv.clone(),
                });
            }
            e.next.validate()?;
        }
        Ok(())
    }

    fn step(&self, lm: &LabeledMove) -> Option<&GameTree> {
        self.edges
            .iter()
            .find(|e| e.player == lm.player && e.mv == lm.mv)
            .map(|e| &e.next)
    }

    fn walk(&self, run: &[LabeledMove]) -> Option<&GameTree> {
        run.iter().try_fold(self, |node, lm| node.step(lm))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Junction {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Game {
    Atomic(Arc<GameTree>),
    Neg(Arc<Game>),
    /// Parallel conjunction or disjunction.
    Parallel(Junction, Arc<[Game]>),
    /// Choice conjunction (`⊓`, environment selects) or disjunction (`⊔`).
    Choice(Junction, Arc<[Game]>),
    /// `∧|`: infinitely many parallel copies, all of which must be won.
    ParallelRecurrence(Arc<Game>),
    /// `∘|` or, with `countable`, `∘|^ℵ0`.
    BranchingRecurrence {
        arg: Arc<Game>,
        countable: bool,
    },
}

pub fn atomic_game(tree: GameTree) -> Result<Game, GameError> {
    tree.validate()?;
    Ok(Game::Atomic(Arc::new(tree)))
}

pub fn neg(a: &Game) -> Game {
    Game::Neg(Arc::new(a.clone()))
}

fn components(games: &[Game], what: &'static str) -> Result<Arc<[Game]>, GameError> {
    if games.is_empty() {
        return Err(GameError::NoComponents(what));
    }
    Ok(games.iter().cloned().collect())
}

pub fn pand(games: &[Game]) -> Result<Game, GameError> {
    Ok(Game::Parallel(
        Junction::And,
        components(games, "parallel conjunction")?,
    ))
}

pub fn por(games: &[Game]) -> Result<Game, GameError> {
    Ok(Game::Parallel(Junction::Or, components(games, "parallel disjunction")?))
}

pub fn choice_conj(games: &[Game]) -> Result<Game, GameError> {
    Ok(Game::Choice(Junction::And, components(games, "choice conjunction")?))
}

pub fn choice_disj(games: &[Game]) -> Result<Game, GameError> {
    Ok(Game::Choice(Junction::Or, components(games, "choice disjunction")?))
}

/// `a → b` is `¬a ∨ b`; its moves are `0.α` (in `a`) and `1.α` (in `b`).
pub fn arrow(a: &Game, b: &Game) -> Game {
    Game::Parallel(Junction::Or, Arc::from(vec![neg(a), b.clone()]))
}

pub fn prec(a: &Game) -> Game {
    Game::ParallelRecurrence(Arc::new(a.clone()))
}

pub fn brec(a: &Game) -> Game {
    Game::BranchingRecurrence {
        arg: Arc::new(a.clone()),
        countable: false,
    }
}

pub fn brec_countable(a: &Game) -> Game {
    Game::BranchingRecurrence {
        arg: Arc::new(a.clone()),
        countable: true,
    }
}

/// `a >– b`.
pub fn reduce_p(a: &Game, b: &Game) -> Game {
    arrow(&prec(a), b)
}

/// `a ∘–^ℵ0 b`.
pub fn reduce_bc(a: &Game, b: &Game) -> Game {
    arrow(&brec_countable(a), b)
}

/// `a ∘– b`.
pub fn reduce_b(a: &Game, b: &Game) -> Game {
    arrow(&brec(a), b)
}

/// Splits `i.α` with `i` in canonical decimal (no leading zeros).
fn split_index(mv: &Move) -> Option<(usize, Move)> {
    let text = mv.as_str();
    let (digits, rest) = text.split_once('.')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0'))
    {
        return None;
    }
    Some((digits.parse().ok()?, Move::new(rest).ok()?))
}

fn parse_selection(mv: &Move, n: usize) -> Option<usize> {
    let text = mv.as_str();
    if !text.bytes().all(|b| b.is_ascii_digit()) || (text.len() > 1 && text.starts_with('0')) {
        return None;
    }
    text.parse().ok().filter(|&i| i < n)
}

fn indexed(i: usize, mv: &Move) -> Move {
    Move::new(&format!("{i}.{mv}")).expect("a prefixed move is a move")
}

fn touched_indices(position: &[LabeledMove]) -> std::collections::BTreeSet<usize> {
    position
        .iter()
        .filter_map(|lm| split_index(&lm.mv))
        .map(|(i, _)| i)
        .collect()
}

impl Game {
    /// Whether `player` may make `mv` at the (legal) `position`.
    pub fn is_legal_move(&self, position: &[LabeledMove], player: Player, mv: &Move) -> bool {
        match self {
            Game::Atomic(tree) => tree
                .walk(position)
                .is_some_and(|node| node.edges.iter().any(|e| e.player == player && e.mv == *mv)),
            Game::Neg(a) => a.is_legal_move(&neg_run(position), player.other(), mv),
            Game::Parallel(_, comps) => split_index(mv).is_some_and(|(i, alpha)| {
                i < comps.len() && comps[i].is_legal_move(&proj_component(position, &format!("{i}.")), player, &alpha)
            }),
            Game::Choice(kind, comps) => match position.split_first() {
                None => player == selector(*kind) && parse_selection(mv, comps.len()).is_some(),
                Some((first, rest)) => {
                    let i = parse_selection(&first.mv, comps.len()).expect("legal position starts with a selection");
                    comps[i].is_legal_move(rest, player, mv)
                }
            },
            Game::ParallelRecurrence(a) => split_index(mv)
                .is_some_and(|(i, alpha)| a.is_legal_move(&proj_component(position, &format!("{i}.")), player, &alpha)),
            Game::BranchingRecurrence { arg, .. } => {
                let tree = SplitTree::of_position(position);
                match parse_branch_move(mv) {
                    Some(BranchMove::Replicate(w)) => player == Player::Environment && tree.is_leaf(&w),
                    // Legal in every thread through `w`; each such thread
                    // passes through exactly one leaf under `w`.
                    Some(BranchMove::Play(w, alpha)) => {
                        tree.is_active(&w)
                            && tree
                                .leaves_under(&w)
                                .all(|leaf| arg.is_legal_move(&proj_thread(position, leaf), player, &alpha))
                    }
                    None => false,
                }
            }
        }
    }

    /// Every legal move of `player` at `position`. For `∧|` the menu is the
    /// touched copies plus one fresh copy.
    pub fn legal_moves(&self, position: &[LabeledMove], player: Player) -> Vec<Move> {
        match self {
            Game::Atomic(tree) => tree.walk(position).map_or_else(Vec::new, |node| {
                node.edges
                    .iter()
                    .filter(|e| e.player == player)
                    .map(|e| e.mv.clone())
                    .collect()
            }),
            Game::Neg(a) => a.legal_moves(&neg_run(position), player.other()),
            Game::Parallel(_, comps) => comps
                .iter()
                .enumerate()
                .flat_map(|(i, c)| {
                    c.legal_moves(&proj_component(position, &format!("{i}.")), player)
                        .into_iter()
                        .map(move |alpha| indexed(i, &alpha))
                })
                .collect(),
            Game::Choice(kind, comps) => match position.split_first() {
                None if player == selector(*kind) => (0..comps.len())
                    .map(|i| Move::new(&i.to_string()).expect("digits"))
                    .collect(),
                None => Vec::new(),
                Some((first, rest)) => {
                    let i = parse_selection(&first.mv, comps.len()).expect("legal position starts with a selection");
                    comps[i].legal_moves(rest, player)
                }
            },
            Game::ParallelRecurrence(a) => {
                let mut copies = touched_indices(position);
                copies.insert(copies.last().map_or(0, |m| m + 1));
                copies
                    .into_iter()
                    .flat_map(|i| {
                        a.legal_moves(&proj_component(position, &format!("{i}.")), player)
                            .into_iter()
                            .map(move |alpha| indexed(i, &alpha))
                    })
                    .collect()
            }
            Game::BranchingRecurrence { arg, .. } => {
                let tree = SplitTree::of_position(position);
                let mut out = Vec::new();
                if player == Player::Environment {
                    out.extend(tree.leaves().map(replicate_move));
                }
                for w in tree.active_nodes() {
                    let mut leaves = tree.leaves_under(w);
                    let first = leaves.next().expect("every node has a leaf below it");
                    let mut common = arg.legal_moves(&proj_thread(position, first), player);
                    for leaf in leaves {
                        let here = arg.legal_moves(&proj_thread(position, leaf), player);
                        common.retain(|m| here.contains(m));
                    }
                    out.extend(common.iter().map(|alpha| play_move(w, alpha)));
                }
                out
            }
        }
    }

    /// The winner of a finite legal run; see [`adjudicate`] for arbitrary runs.
    pub fn winner(&self, run: &[LabeledMove]) -> Player {
        let won = |p: Player| p == Player::Machine;
        let from = |b: bool| if b { Player::Machine } else { Player::Environment };
        match self {
            Game::Atomic(tree) => tree.walk(run).map_or_else(
                || {
                    debug_assert!(false, "winner asked of an illegal run");
                    tree.winner
                },
                |node| node.winner,
            ),
            Game::Neg(a) => a.winner(&neg_run(run)).other(),
            Game::Parallel(kind, comps) => {
                let mut wins = comps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| won(c.winner(&proj_component(run, &format!("{i}.")))));
                from(match kind {
                    Junction::And => wins.all(|w| w),
                    Junction::Or => wins.any(|w| w),
                })
            }
            Game::Choice(kind, comps) => match run.split_first() {
                None => selector(*kind).other(),
                Some((first, rest)) => {
                    let i = parse_selection(&first.mv, comps.len()).expect("legal run starts with a selection");
                    comps[i].winner(rest)
                }
            },
            // The untouched copies are all still at the empty run.
            Game::ParallelRecurrence(a) => from(
                won(a.winner(&[]))
                    && touched_indices(run)
                        .into_iter()
                        .all(|i| won(a.winner(&proj_component(run, &format!("{i}."))))),
            ),
            Game::BranchingRecurrence { arg, countable: false } => {
                let tree = SplitTree::of_position(run);
                let all_won = tree.leaves().all(|leaf| won(arg.winner(&proj_thread(run, leaf))));
                from(all_won)
            }
            // Every essentially finite thread runs `w000...` for some active
            // node `w` and agrees with it on the recorded moves.
            Game::BranchingRecurrence { arg, countable: true } => {
                let tree = SplitTree::of_position(run);
                from(tree.active_nodes().iter().all(|w| {
                    let v = UltimatelyPeriodic::zeros_after(w.clone());
                    won(arg.winner(&proj_thread(run, &v)))
                }))
            }
        }
    }
}

fn selector(kind: Junction) -> Player {
    match kind {
        Junction::And => Player::Environment,
        Junction::Or => Player::Machine,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Illegal {
    pub index: usize,
    pub offender: Player,
}

/// The first illegal move, if any.
pub fn is_legal_run(g: &Game, run: &[LabeledMove]) -> Result<(), Illegal> {
    for (index, lm) in run.iter().enumerate() {
        if !g.is_legal_move(&run[..index], lm.player, &lm.mv) {
            return Err(Illegal {
                index,
                offender: lm.player,
            });
        }
    }
    Ok(())
}

/// The winner of any finite run: an illegal run is lost by whoever made the
/// first illegal move.
pub fn adjudicate(g: &Game, run: &[LabeledMove]) -> Player {
    match is_legal_run(g, run) {
        Ok(()) => g.winner(run),
        Err(illegal) => illegal.offender.other(),
    }
}

/// A reproducible random legal run: a target length is drawn from
/// `0..=max_moves`, then moves are drawn uniformly from both players' menus
/// until the target is reached or neither player can move.
pub fn random_legal_run(g: &Game, max_moves: usize, seed: u64) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.random_range(0..=max_moves);
    let mut run = Run::new();
    while run.len() < target {
        let options: Vec<LabeledMove> = [Player::Machine, Player::Environment]
            .into_iter()
            .flat_map(|player| {
                g.legal_moves(&run, player)
                    .into_iter()
                    .map(move |mv| LabeledMove { player, mv })
            })
            .collect();
        let Some(next) = options.choose(&mut rng) else { break };
        run.push(next.clone());
    }
    run
}
