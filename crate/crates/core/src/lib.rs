//! Toolkit for the contraction-free implicational calculus CL7, its
//! extension by Contraction (implicational intuitionistic logic), the
//! binary-tautology oracle, the one-sided translation and finite-run game
//! semantics for the reduction operators.

pub mod cl7;
pub mod cli;
pub mod formula;
pub mod game;
pub mod int;
pub mod onesided;
pub mod oracle;
pub mod serial;
pub mod syntax;

pub use cl7::{check_proof, provable_cl7, prove_binary_guided, prove_exhaustive, ProofTree, Rule, System};
pub use formula::{Atom, ClassicalFormula, Formula, Sequent, Substitution};
pub use int::{int_provable, int_prove};
pub use onesided::{check_one_sided, nnf, to_one_sided, translate_proof, Nnf, OneSidedProof, OneSidedSequent};
pub use oracle::{binary_anti_instance, enumerate_formulas, is_instance_of_binary_tautology};
pub use syntax::{parse_formula, parse_sequent, ParseError};
