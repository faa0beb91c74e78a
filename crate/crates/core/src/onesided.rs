//! One-sided, negation-normal presentation of the contraction-free calculus.
//!
//! `E1, ..., En => F` becomes `¬E1, ..., ¬En, F`, with every `E -> F`
//! rewritten as `¬E ∨ F` and negations pushed to the atoms.

use std::fmt;

use crate::cl7::{ProofTree, Rule, Violation};
use crate::formula::{multiset, Atom, ClassicalFormula, Formula, Sequent};

/// A negation-normal formula. `Lit(a, true)` is `a`, `Lit(a, false)` is `¬a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nnf {
    Lit(Atom, bool),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
}

impl Nnf {
    /// The negation of `self`, again in negation normal form.
    pub fn dual(&self) -> Nnf {
        match self {
            Nnf::Lit(a, p) => Nnf::Lit(a.clone(), !p),
            Nnf::And(l, r) => Nnf::Or(Box::new(l.dual()), Box::new(r.dual())),
            Nnf::Or(l, r) => Nnf::And(Box::new(l.dual()), Box::new(r.dual())),
        }
    }

    pub fn atom_occurrences(&self) -> usize {
        match self {
            Nnf::Lit(..) => 1,
            Nnf::And(l, r) | Nnf::Or(l, r) => l.atom_occurrences() + r.atom_occurrences(),
        }
    }

    /// Normalizes a classical formula under the given outer polarity.
    /// Returns `None` for an empty conjunction or disjunction, which has no
    /// negation-normal image here.
    pub fn from_classical(c: &ClassicalFormula, positive: bool) -> Option<Nnf> {
        let fold = |parts: &[ClassicalFormula], conj: bool| -> Option<Nnf> {
            let mut items: Vec<Nnf> = parts
                .iter()
                .map(|p| Nnf::from_classical(p, positive))
                .collect::<Option<_>>()?;
            let mut acc = items.pop()?;
            while let Some(prev) = items.pop() {
                acc = if conj {
                    Nnf::And(Box::new(prev), Box::new(acc))
                } else {
                    Nnf::Or(Box::new(prev), Box::new(acc))
                };
            }
            Some(acc)
        };
        match c {
            ClassicalFormula::Atom(a) => Some(Nnf::Lit(a.clone(), positive)),
            ClassicalFormula::Not(inner) => Nnf::from_classical(inner, !positive),
            // Under negation a conjunction becomes a disjunction of negations.
            ClassicalFormula::And(parts) => fold(parts, positive),
            ClassicalFormula::Or(parts) => fold(parts, !positive),
            ClassicalFormula::Imp(l, r) => {
                let l = Nnf::from_classical(l, !positive)?;
                let r = Nnf::from_classical(r, positive)?;
                Some(if positive {
                    Nnf::Or(Box::new(l), Box::new(r))
                } else {
                    Nnf::And(Box::new(l), Box::new(r))
                })
            }
        }
    }

    pub fn to_classical(&self) -> ClassicalFormula {
        match self {
            Nnf::Lit(a, true) => ClassicalFormula::Atom(a.clone()),
            Nnf::Lit(a, false) => ClassicalFormula::Not(Box::new(ClassicalFormula::Atom(a.clone()))),
            Nnf::And(l, r) => ClassicalFormula::And(vec![l.to_classical(), r.to_classical()]),
            Nnf::Or(l, r) => ClassicalFormula::Or(vec![l.to_classical(), r.to_classical()]),
        }
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nnf::Lit(a, true) => write!(f, "{a}"),
            Nnf::Lit(a, false) => write!(f, "~{a}"),
            Nnf::And(l, r) => write!(f, "({l} & {r})"),
            Nnf::Or(l, r) => write!(f, "({l} | {r})"),
        }
    }
}

/// `nnf(f, true)` normalizes `f`, `nnf(f, false)` normalizes `¬f`.
pub fn nnf(f: &Formula, positive: bool) -> Nnf {
    match (f.as_imp(), positive) {
        (None, _) => Nnf::Lit(f.head().clone(), positive),
        (Some((e, g)), true) => Nnf::Or(Box::new(nnf(e, false)), Box::new(nnf(g, true))),
        (Some((e, g)), false) => Nnf::And(Box::new(nnf(e, true)), Box::new(nnf(g, false))),
    }
}

/// A multiset of negation-normal formulas, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneSidedSequent(Vec<Nnf>);

impl OneSidedSequent {
    pub fn new(mut items: Vec<Nnf>) -> Self {
        items.sort();
        OneSidedSequent(items)
    }

    pub fn items(&self) -> &[Nnf] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atom_occurrences(&self) -> usize {
        self.0.iter().map(Nnf::atom_occurrences).sum()
    }

    pub fn is_axiom(&self) -> bool {
        self.0.iter().any(|x| {
            let d = x.dual();
            self.0.binary_search(&d).is_ok()
        })
    }
}

impl fmt::Display for OneSidedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

pub fn to_one_sided(s: &Sequent) -> OneSidedSequent {
    OneSidedSequent::new(
        s.antecedent()
            .iter()
            .map(|e| nnf(e, false))
            .chain(std::iter::once(nnf(s.succedent(), true)))
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OneSidedRule {
    Axiom,
    RightImp,
    LeftImp,
}

impl OneSidedRule {
    pub fn name(self) -> &'static str {
        match self {
            OneSidedRule::Axiom => "axiom",
            OneSidedRule::RightImp => "right_imp_1s",
            OneSidedRule::LeftImp => "left_imp_1s",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "axiom" => OneSidedRule::Axiom,
            "right_imp_1s" => OneSidedRule::RightImp,
            "left_imp_1s" => OneSidedRule::LeftImp,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            OneSidedRule::Axiom => 0,
            OneSidedRule::RightImp => 1,
            OneSidedRule::LeftImp => 2,
        }
    }
}

/// For `LeftImp` the first premise holds `¬F` (with `Γ, G`) and the second
/// holds `E` (with `Δ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneSidedProof {
    pub conclusion: OneSidedSequent,
    pub rule: OneSidedRule,
    pub premises: Vec<OneSidedProof>,
}

impl OneSidedProof {
    pub fn nodes(&self) -> Vec<&OneSidedProof> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("contraction at {path:?} has no one-sided counterpart")]
pub struct TranslateError {
    pub path: Vec<usize>,
}

pub fn translate_proof(t: &ProofTree) -> Result<OneSidedProof, TranslateError> {
    fn go(t: &ProofTree, path: &mut Vec<usize>) -> Result<OneSidedProof, TranslateError> {
        let rule = match t.rule {
            Rule::Axiom => OneSidedRule::Axiom,
            Rule::RightImp => OneSidedRule::RightImp,
            Rule::LeftImp => OneSidedRule::LeftImp,
            Rule::Contraction => return Err(TranslateError { path: path.clone() }),
        };
        let mut premises = Vec::with_capacity(t.premises.len());
        for (i, p) in t.premises.iter().enumerate() {
            path.push(i);
            premises.push(go(p, path)?);
            path.pop();
        }
        Ok(OneSidedProof {
            conclusion: to_one_sided(&t.conclusion),
            rule,
            premises,
        })
    }
    go(t, &mut Vec::new())
}

pub fn check_one_sided(p: &OneSidedProof) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    check_node(p, &mut Vec::new(), &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_node(p: &OneSidedProof, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    if p.premises.len() != p.rule.arity() {
        out.push(Violation::mismatch(
            path,
            &format!("{} takes a fixed number of premises", p.rule.name()),
            p.rule.arity(),
            p.premises.len(),
        ));
    } else if let Some(v) = check_local(p, path) {
        out.push(v);
    }
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        check_node(q, path, out);
        path.pop();
    }
}

fn check_local(p: &OneSidedProof, path: &[usize]) -> Option<Violation> {
    let c = p.conclusion.items();
    match p.rule {
        OneSidedRule::Axiom => (!p.conclusion.is_axiom())
            .then(|| Violation::new(path, format!("`{}` has no complementary pair", p.conclusion))),
        OneSidedRule::RightImp => {
            let premise = &p.premises[0].conclusion;
            let ok = c.iter().any(|x| {
                let Nnf::Or(a, b) = x else { return false };
                let mut rebuilt = c.to_vec();
                multiset::remove_one(&mut rebuilt, x);
                rebuilt.push((**a).clone());
                rebuilt.push((**b).clone());
                OneSidedSequent::new(rebuilt) == *premise
            });
            (!ok).then(|| {
                Violation::mismatch(
                    path,
                    "right_imp_1s premise must split a disjunction",
                    &p.conclusion,
                    premise,
                )
            })
        }
        OneSidedRule::LeftImp => {
            let left = p.premises[0].conclusion.items();
            let right = p.premises[1].conclusion.items();
            let ok = c.iter().any(|x| {
                let Nnf::And(a, b) = x else { return false };
                let (Some(gamma), Some(delta)) = (
                    multiset::difference(left, std::slice::from_ref(&**b)),
                    multiset::difference(right, std::slice::from_ref(&**a)),
                ) else {
                    return false;
                };
                let mut rebuilt = gamma;
                rebuilt.extend(delta);
                rebuilt.push(x.clone());
                OneSidedSequent::new(rebuilt) == p.conclusion
            });
            (!ok).then(|| {
                Violation::mismatch(
                    path,
                    "left_imp_1s conclusion is not Γ, Δ, E ∧ ¬F, G for the given premises",
                    format!("{}  and  {}", p.premises[0].conclusion, p.premises[1].conclusion),
                    &p.conclusion,
                )
            })
        }
    }
}
