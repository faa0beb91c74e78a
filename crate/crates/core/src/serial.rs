//! JSON documents for proofs, one-sided proofs, runs and game expressions.
//!
//! Top-level documents carry `"format": "cl-toolkit/1"`; unknown keys are
//! rejected everywhere. Sequents are stored in their text syntax.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cl7::{ProofTree, Rule};
use crate::game::{
    arrow, atomic_game, brec, brec_countable, choice_conj, choice_disj, neg, pand, por, prec, reduce_b, reduce_bc,
    reduce_p, Edge, Game, GameTree, Junction, LabeledMove, Move, Player, Run,
};
use crate::onesided::{OneSidedProof, OneSidedRule};
use crate::syntax::{parse_one_sided, parse_sequent};

pub const FORMAT: &str = "cl-toolkit/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct SchemaError {
    /// Location in the document, e.g. `premises[1].sequent`; `.` for the root.
    pub path: String,
    pub message: String,
}

impl SchemaError {
    fn at(path: &str, message: impl Into<String>) -> Self {
        SchemaError {
            path: if path.is_empty() { ".".into() } else { path.into() },
            message: message.into(),
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else if key.starts_with('[') {
        format!("{path}{key}")
    } else {
        format!("{path}.{key}")
    }
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, SchemaError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        SchemaError::at(if path == "." { "" } else { &path }, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| SchemaError::at("", e.to_string()))?;
    Ok(value)
}

fn encode<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents always serialize");
    text.push('\n');
    text
}

fn check_format(format: &str) -> Result<(), SchemaError> {
    if format == FORMAT {
        Ok(())
    } else {
        Err(SchemaError::at(
            "format",
            format!("unsupported format {format:?} (expected {FORMAT:?})"),
        ))
    }
}

// ---- proofs -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProofDoc {
    format: String,
    rule: String,
    sequent: String,
    premises: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    rule: String,
    sequent: String,
    premises: Vec<NodeDoc>,
}

fn node_doc(rule: &str, sequent: String, premises: Vec<NodeDoc>) -> NodeDoc {
    NodeDoc {
        rule: rule.to_string(),
        sequent,
        premises,
    }
}

fn top_doc(node: NodeDoc) -> ProofDoc {
    ProofDoc {
        format: FORMAT.to_string(),
        rule: node.rule,
        sequent: node.sequent,
        premises: node.premises,
    }
}

fn read_top(text: &str) -> Result<NodeDoc, SchemaError> {
    let doc: ProofDoc = decode(text)?;
    check_format(&doc.format)?;
    Ok(node_doc(&doc.rule, doc.sequent, doc.premises))
}

pub fn proof_to_json(t: &ProofTree) -> String {
    fn go(t: &ProofTree) -> NodeDoc {
        node_doc(
            t.rule.name(),
            t.conclusion.to_string(),
            t.premises.iter().map(go).collect(),
        )
    }
    encode(&top_doc(go(t)))
}

/// Reads a proof document. Only the shape is validated here; use
/// [`crate::cl7::check_proof`] for the rules.
pub fn proof_from_json(text: &str) -> Result<ProofTree, SchemaError> {
    fn go(n: NodeDoc, path: &str) -> Result<ProofTree, SchemaError> {
        let rule = Rule::from_name(&n.rule)
            .ok_or_else(|| SchemaError::at(&join(path, "rule"), format!("unknown rule {:?}", n.rule)))?;
        let conclusion =
            parse_sequent(&n.sequent).map_err(|e| SchemaError::at(&join(path, "sequent"), e.to_string()))?;
        let premises = n
            .premises
            .into_iter()
            .enumerate()
            .map(|(i, p)| go(p, &join(path, &format!("premises[{i}]"))))
            .collect::<Result<_, _>>()?;
        Ok(ProofTree {
            conclusion,
            rule,
            premises,
        })
    }
    go(read_top(text)?, "")
}

pub fn one_sided_proof_to_json(p: &OneSidedProof) -> String {
    fn go(p: &OneSidedProof) -> NodeDoc {
        node_doc(
            p.rule.name(),
            p.conclusion.to_string(),
            p.premises.iter().map(go).collect(),
        )
    }
    encode(&top_doc(go(p)))
}

pub fn one_sided_proof_from_json(text: &str) -> Result<OneSidedProof, SchemaError> {
    fn go(n: NodeDoc, path: &str) -> Result<OneSidedProof, SchemaError> {
        let rule = OneSidedRule::from_name(&n.rule)
            .ok_or_else(|| SchemaError::at(&join(path, "rule"), format!("unknown rule {:?}", n.rule)))?;
        let conclusion =
            parse_one_sided(&n.sequent).map_err(|e| SchemaError::at(&join(path, "sequent"), e.to_string()))?;
        let premises = n
            .premises
            .into_iter()
            .enumerate()
            .map(|(i, p)| go(p, &join(path, &format!("premises[{i}]"))))
            .collect::<Result<_, _>>()?;
        Ok(OneSidedProof {
            conclusion,
            rule,
            premises,
        })
    }
    go(read_top(text)?, "")
}

// ---- runs ---------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveDoc {
    player: String,
    #[serde(rename = "move")]
    mv: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunDoc {
    format: String,
    run: Vec<MoveDoc>,
}

fn player_from(tag: &str, path: &str) -> Result<Player, SchemaError> {
    Player::from_tag(tag).ok_or_else(|| SchemaError::at(path, format!("player must be \"T\" or \"B\", found {tag:?}")))
}

fn move_from(text: &str, path: &str) -> Result<Move, SchemaError> {
    Move::new(text).map_err(|e| SchemaError::at(path, e.to_string()))
}

pub fn run_to_json(run: &[LabeledMove]) -> String {
    encode(&RunDoc {
        format: FORMAT.to_string(),
        run: run
            .iter()
            .map(|lm| MoveDoc {
                player: lm.player.tag().to_string(),
                mv: lm.mv.to_string(),
            })
            .collect(),
    })
}

/// Accepts a run document or a bare array of moves.
pub fn run_from_json(text: &str) -> Result<Run, SchemaError> {
    let value: serde_json::Value = decode(text)?;
    let moves = if value.is_array() {
        decode::<Vec<MoveDoc>>(text)?
    } else {
        let doc: RunDoc = decode(text)?;
        check_format(&doc.format)?;
        doc.run
    };
    let base = if value.is_array() { "" } else { "run" };
    moves
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let at = join(base, &format!("[{i}]"));
            Ok(LabeledMove {
                player: player_from(&m.player, &join(&at, "player"))?,
                mv: move_from(&m.mv, &join(&at, "move"))?,
            })
        })
        .collect()
}

// ---- games --------------------------------------------------------------

/// A game expression as written in game documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum GameExpr {
    Atomic { tree: TreeDoc },
    Neg { arg: Box<GameExpr> },
    Arrow { args: Vec<GameExpr> },
    Pand { args: Vec<GameExpr> },
    Por { args: Vec<GameExpr> },
    Cconj { args: Vec<GameExpr> },
    Cdisj { args: Vec<GameExpr> },
    Prec { arg: Box<GameExpr> },
    Brec { arg: Box<GameExpr> },
    BrecC { arg: Box<GameExpr> },
    ReduceP { args: Vec<GameExpr> },
    ReduceBc { args: Vec<GameExpr> },
    ReduceB { args: Vec<GameExpr> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub winner: String,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub player: String,
    #[serde(rename = "move")]
    pub mv: String,
    pub next: TreeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    format: String,
    game: GameExpr,
}

impl TreeDoc {
    fn build(&self, path: &str) -> Result<GameTree, SchemaError> {
        let winner = player_from(&self.winner, &join(path, "winner"))?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let at = join(path, &format!("edges[{i}]"));
                Ok(Edge {
                    player: player_from(&e.player, &join(&at, "player"))?,
                    mv: move_from(&e.mv, &join(&at, "move"))?,
                    next: e.next.build(&join(&at, "next"))?,
                })
            })
            .collect::<Result<_, SchemaError>>()?;
        Ok(GameTree { winner, edges })
    }

    fn of(tree: &GameTree) -> TreeDoc {
        TreeDoc {
            winner: tree.winner.tag().to_string(),
            edges: tree
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    player: e.player.tag().to_string(),
                    mv: e.mv.to_string(),
                    next: TreeDoc::of(&e.next),
                })
                .collect(),
        }
    }
}

impl GameExpr {
    pub fn build(&self) -> Result<Game, SchemaError> {
        self.build_at("")
    }

    fn build_at(&self, path: &str) -> Result<Game, SchemaError> {
        let one = |arg: &GameExpr| arg.build_at(&join(path, "arg"));
        let list = |args: &[GameExpr]| -> Result<Vec<Game>, SchemaError> {
            if args.is_empty() {
                return Err(SchemaError::at(&join(path, "args"), "needs at least one game"));
            }
            args.iter()
                .enumerate()
                .map(|(i, a)| a.build_at(&join(path, &format!("args[{i}]"))))
                .collect()
        };
        let pair = |args: &[GameExpr]| -> Result<(Game, Game), SchemaError> {
            if args.len() != 2 {
                return Err(SchemaError::at(
                    &join(path, "args"),
                    format!("needs exactly two games, found {}", args.len()),
                ));
            }
            let mut games = list(args)?;
            let b = games.pop().expect("two games");
            let a = games.pop().expect("two games");
            Ok((a, b))
        };
        let wrap = |r: Result<Game, crate::game::GameError>| r.map_err(|e| SchemaError::at(path, e.to_string()));
        Ok(match self {
            GameExpr::Atomic { tree } => wrap(atomic_game(tree.build(&join(path, "tree"))?))?,
            GameExpr::Neg { arg } => neg(&one(arg)?),
            GameExpr::Prec { arg } => prec(&one(arg)?),
            GameExpr::Brec { arg } => brec(&one(arg)?),
            GameExpr::BrecC { arg } => brec_countable(&one(arg)?),
            GameExpr::Pand { args } => wrap(pand(&list(args)?))?,
            GameExpr::Por { args } => wrap(por(&list(args)?))?,
            GameExpr::Cconj { args } => wrap(choice_conj(&list(args)?))?,
            GameExpr::Cdisj { args } => wrap(choice_disj(&list(args)?))?,
            GameExpr::Arrow { args } => {
                let (a, b) = pair(args)?;
                arrow(&a, &b)
            }
            GameExpr::ReduceP { args } => {
                let (a, b) = pair(args)?;
                reduce_p(&a, &b)
            }
            GameExpr::ReduceBc { args } => {
                let (a, b) = pair(args)?;
                reduce_bc(&a, &b)
            }
            GameExpr::ReduceB { args } => {
                let (a, b) = pair(args)?;
                reduce_b(&a, &b)
            }
        })
    }

    /// An expression for `g` over the primitive operators; derived
    /// operators such as `arrow` come back as their definitions.
    pub fn of(g: &Game) -> GameExpr {
        let list = |comps: &[Game]| comps.iter().map(GameExpr::of).collect();
        match g {
            Game::Atomic(tree) => GameExpr::Atomic {
                tree: TreeDoc::of(tree),
            },
            Game::Neg(a) => GameExpr::Neg {
                arg: Box::new(GameExpr::of(a)),
            },
            Game::Parallel(Junction::And, comps) => GameExpr::Pand { args: list(comps) },
            Game::Parallel(Junction::Or, comps) => GameExpr::Por { args: list(comps) },
            Game::Choice(Junction::And, comps) => GameExpr::Cconj { args: list(comps) },
            Game::Choice(Junction::Or, comps) => GameExpr::Cdisj { args: list(comps) },
            Game::ParallelRecurrence(a) => GameExpr::Prec {
                arg: Box::new(GameExpr::of(a)),
            },
            Game::BranchingRecurrence { arg, countable } => {
                let arg = Box::new(GameExpr::of(arg));
                if *countable {
                    GameExpr::BrecC { arg }
                } else {
                    GameExpr::Brec { arg }
                }
            }
        }
    }
}

pub fn game_expr_to_json(e: &GameExpr) -> String {
    encode(&GameDoc {
        format: FORMAT.to_string(),
        game: e.clone(),
    })
}

/// Accepts a game document or a bare expression.
pub fn game_expr_from_json(text: &str) -> Result<GameExpr, SchemaError> {
    let value: serde_json::Value = decode(text)?;
    if value.get("op").is_some() {
        return decode(text);
    }
    let doc: GameDoc = decode(text)?;
    check_format(&doc.format)?;
    Ok(doc.game)
}

pub fn game_from_json(text: &str) -> Result<Game, SchemaError> {
    let expr = game_expr_from_json(text)?;
    let bare = serde_json::from_str::<serde_json::Value>(text).is_ok_and(|v| v.get("op").is_some());
    expr.build_at(if bare { "" } else { "game" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cl7::prove_exhaustive;
    use crate::game::adjudicate;

    #[test]
    fn axiom_round_trips_byte_identically() {
        let t = ProofTree::axiom(parse_sequent("P => P").unwrap());
        let text = proof_to_json(&t);
        assert_eq!(
            text,
            "{\n  \"format\": \"cl-toolkit/1\",\n  \"rule\": \"axiom\",\n  \"sequent\": \"P => P\",\n  \"premises\": []\n}\n"
        );
        let back = proof_from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(proof_to_json(&back), text);
    }

    #[test]
    fn nested_proofs_round_trip() {
        let t = prove_exhaustive(&parse_sequent("P->Q, P => Q").unwrap()).unwrap();
        let text = proof_to_json(&t);
        assert_eq!(proof_from_json(&text).unwrap(), t);
        assert_eq!(text.matches("format").count(), 1);
    }

    #[test]
    fn proof_schema_errors_carry_paths() {
        let e = proof_from_json(r#"{"format":"cl-toolkit/1","rule":"axiom","sequent":"P => P","premises":[],"x":1}"#)
            .unwrap_err();
        assert!(e.message.contains("unknown field"), "{e}");
        let e = proof_from_json(
            r#"{"format":"cl-toolkit/1","rule":"right_imp","sequent":"=> P->P","premises":[{"rule":"ax","sequent":"P => P","premises":[]}]}"#,
        )
        .unwrap_err();
        assert_eq!(e.path, "premises[0].rule");
        let e = proof_from_json(r#"{"format":"v2","rule":"axiom","sequent":"P => P","premises":[]}"#).unwrap_err();
        assert_eq!(e.path, "format");
        let e = proof_from_json(
            r#"{"format":"cl-toolkit/1","rule":"right_imp","sequent":"=> P->P","premises":[{"rule":"axiom","sequent":"P =>","premises":[]}]}"#,
        )
        .unwrap_err();
        assert_eq!(e.path, "premises[0].sequent");
    }

    #[test]
    fn runs() {
        let run = vec![
            LabeledMove::new(Player::Environment, "q").unwrap(),
            LabeledMove::new(Player::Machine, "1.a").unwrap(),
        ];
        let text = run_to_json(&run);
        assert_eq!(run_from_json(&text).unwrap(), run);
        assert_eq!(run_to_json(&run_from_json(&text).unwrap()), text);
        assert_eq!(
            run_from_json(r#"[{"player":"B","move":"q"}]"#).unwrap(),
            run[..1].to_vec()
        );
        let e = run_from_json(r#"[{"player":"X","move":"q"}]"#).unwrap_err();
        assert_eq!(e.path, "[0].player");
        let e = run_from_json(r#"{"format":"cl-toolkit/1","run":[{"player":"T","move":"a b"}]}"#).unwrap_err();
        assert_eq!(e.path, "run[0].move");
    }

    #[test]
    fn games() {
        let text = r#"{"op":"brec","arg":{"op":"atomic","tree":{"winner":"T","edges":[{"player":"B","move":"q","next":{"winner":"B"}}]}}}"#;
        let g = game_from_json(text).unwrap();
        assert!(matches!(g, Game::BranchingRecurrence { countable: false, .. }));
        let r = run_from_json(r#"[{"player":"B","move":".q"}]"#).unwrap();
        assert_eq!(adjudicate(&g, &r), Player::Environment);
        let expr = game_expr_from_json(text).unwrap();
        let doc = game_expr_to_json(&expr);
        assert_eq!(game_expr_from_json(&doc).unwrap(), expr);
        assert_eq!(game_expr_to_json(&game_expr_from_json(&doc).unwrap()), doc);
        assert_eq!(GameExpr::of(&expr.build().unwrap()), expr);
        assert!(game_from_json(r#"{"op":"brec","arg":{"op":"atomic","tree":{"winner":"T"}},"x":0}"#).is_err());
        let e = game_from_json(r#"{"op":"arrow","args":[{"op":"atomic","tree":{"winner":"T"}}]}"#).unwrap_err();
        assert_eq!(e.path, "args");
        let e = game_from_json(
            r#"{"format":"cl-toolkit/1","game":{"op":"neg","arg":{"op":"atomic","tree":{"winner":"Q"}}}}"#,
        )
        .unwrap_err();
        assert_eq!(e.path, "game.arg.tree.winner");
    }
}
