//! The contraction-free calculus: axioms `Γ, F => F`, Right→ and Left→.
//!
//! ```text
//!   Γ, E => F            Γ, F => G    Δ => E          Γ, E, E => F
//!  ------------ R→      ------------------------ L→   -------------- C (Int only)
//!   Γ => E->F             Γ, Δ, E->F => G              Γ, E => F
//! ```

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{multiset, relevant_indices, Formula, Sequent, Substitution};
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom,
    RightImp,
    LeftImp,
    Contraction,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::RightImp => "right_imp",
            Rule::LeftImp => "left_imp",
            Rule::Contraction => "contraction",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Some(match name {
            "axiom" => Rule::Axiom,
            "right_imp" => Rule::RightImp,
            "left_imp" => Rule::LeftImp,
            "contraction" => Rule::Contraction,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Rule::Axiom => 0,
            Rule::RightImp | Rule::Contraction => 1,
            Rule::LeftImp => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Cl7,
    Int,
}

impl std::str::FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cl7" => Ok(System::Cl7),
            "int" => Ok(System::Int),
            _ => Err(format!("unknown system {s:?} (expected cl7 or int)")),
        }
    }
}

/// A derivation in the multiset calculus. For `LeftImp` the first premise
/// is `Γ, F => G` and the second is `Δ => E`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn axiom(conclusion: Sequent) -> Self {
        ProofTree {
            conclusion,
            rule: Rule::Axiom,
            premises: Vec::new(),
        }
    }

    pub fn right_imp(conclusion: Sequent, premise: ProofTree) -> Self {
        ProofTree {
            conclusion,
            rule: Rule::RightImp,
            premises: vec![premise],
        }
    }

    pub fn left_imp(conclusion: Sequent, left: ProofTree, right: ProofTree) -> Self {
        ProofTree {
            conclusion,
            rule: Rule::LeftImp,
            premises: vec![left, right],
        }
    }

    pub fn contraction(conclusion: Sequent, premise: ProofTree) -> Self {
        ProofTree {
            conclusion,
            rule: Rule::Contraction,
            premises: vec![premise],
        }
    }

    /// Pre-order traversal of every node.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.premises.iter().rev());
        }
        out
    }

    pub fn size(&self) -> usize {
        self.nodes().len()
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        self.nodes().into_iter().filter(|t| t.rule == rule).count()
    }
}

impl fmt::Debug for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &ProofTree, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(
                f,
                "{:width$}{} [{}]",
                "",
                t.conclusion,
                t.rule.name(),
                width = depth * 2
            )?;
            t.premises.iter().try_for_each(|p| go(p, depth + 1, f))
        }
        go(self, 0, f)
    }
}

/// One failed local check, located by the premise indices leading from the
/// root to the offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub message: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl Violation {
    pub(crate) fn new(path: &[usize], message: impl Into<String>) -> Self {
        Violation {
            path: path.to_vec(),
            message: message.into(),
            expected: None,
            actual: None,
        }
    }

    pub(crate) fn mismatch(
        path: &[usize],
        message: &str,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        Violation {
            path: path.to_vec(),
            message: message.to_string(),
            expected: Some(expected.to_string()),
            actual: Some(actual.to_string()),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.path, self.message)?;
        if let (Some(e), Some(a)) = (&self.expected, &self.actual) {
            write!(f, " (expected `{e}`, found `{a}`)")?;
        }
        Ok(())
    }
}

pub fn is_axiom(s: &Sequent) -> bool {
    s.antecedent().contains(s.succedent())
}

/// Validates every node of `t` against the rule shapes of `system`.
pub fn check_proof(t: &ProofTree, system: System) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let mut path = Vec::new();
    check_node(t, system, &mut path, &mut violations);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

fn check_node(t: &ProofTree, system: System, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    if t.premises.len() != t.rule.arity() {
        out.push(Violation::mismatch(
            path,
            &format!("{} takes a fixed number of premises", t.rule.name()),
            t.rule.arity(),
            t.premises.len(),
        ));
    } else if let Some(v) = check_local(t, system, path) {
        out.push(v);
    }
    for (i, p) in t.premises.iter().enumerate() {
        path.push(i);
        check_node(p, system, path, out);
        path.pop();
    }
}

fn check_local(t: &ProofTree, system: System, path: &[usize]) -> Option<Violation> {
    let c = &t.conclusion;
    match t.rule {
        Rule::Axiom => (!is_axiom(c))
            .then(|| Violation::new(path, format!("`{c}` is not an axiom: succedent absent from antecedent"))),
        Rule::RightImp => {
            let Some((e, f)) = c.succedent().as_imp() else {
                return Some(Violation::new(path, "right_imp needs an implication in the succedent"));
            };
            let expected = Sequent::new(
                c.antecedent().iter().cloned().chain(std::iter::once(e.clone())),
                f.clone(),
            );
            let actual = &t.premises[0].conclusion;
            (expected != *actual).then(|| Violation::mismatch(path, "right_imp premise", &expected, actual))
        }
        Rule::LeftImp => {
            let left = &t.premises[0].conclusion;
            let right = &t.premises[1].conclusion;
            if left.succedent() != c.succedent() {
                return Some(Violation::mismatch(
                    path,
                    "left_imp left premise must keep the succedent",
                    c.succedent(),
                    left.succedent(),
                ));
            }
            let e = right.succedent();
            let matches = c.antecedent().iter().any(|principal| {
                let Some((pe, pf)) = principal.as_imp() else {
                    return false;
                };
                if pe != e {
                    return false;
                }
                let Some(gamma) = multiset::difference(left.antecedent(), std::slice::from_ref(pf)) else {
                    return false;
                };
                let mut rebuilt = gamma;
                rebuilt.extend(right.antecedent().iter().cloned());
                rebuilt.push(principal.clone());
                multiset::equal(&rebuilt, c.antecedent())
            });
            (!matches).then(|| {
                Violation::mismatch(
                    path,
                    "left_imp conclusion is not Γ, Δ, E->F => G for the given premises",
                    format!("{left}  and  {right}"),
                    c,
                )
            })
        }
        Rule::Contraction => {
            if system == System::Cl7 {
                return Some(Violation::new(path, "contraction not in CL7"));
            }
            let premise = &t.premises[0].conclusion;
            if premise.succedent() != c.succedent() {
                return Some(Violation::mismatch(
                    path,
                    "contraction keeps the succedent",
                    c.succedent(),
                    premise.succedent(),
                ));
            }
            let ok = multiset::difference(premise.antecedent(), c.antecedent())
                .is_some_and(|extra| extra.len() == 1 && c.antecedent().contains(&extra[0]));
            (!ok).then(|| Violation::mismatch(path, "contraction premise must be Γ, E, E => F", c, premise))
        }
    }
}

/// Complete backward search for a CL7 proof.
///
/// Exploration order is fixed: axiom, then Right→, then Left→ over each
/// antecedent implication in canonical order and every split of the
/// remaining antecedent in increasing bitmask order. Results are memoized on
/// the (canonical) sequent for the duration of the call.
pub fn prove_exhaustive(s: &Sequent) -> Option<ProofTree> {
    ExhaustiveSearch::default().prove(s)
}

#[derive(Default)]
struct ExhaustiveSearch {
    memo: HashMap<Sequent, Option<ProofTree>>,
}

impl ExhaustiveSearch {
    fn prove(&mut self, s: &Sequent) -> Option<ProofTree> {
        if let Some(done) = self.memo.get(s) {
            return done.clone();
        }
        let result = self.search(s);
        self.memo.insert(s.clone(), result.clone());
        result
    }

    fn search(&mut self, s: &Sequent) -> Option<ProofTree> {
        if is_axiom(s) {
            return Some(ProofTree::axiom(s.clone()));
        }
        let ante = s.antecedent();
        if let Some((e, f)) = s.succedent().as_imp() {
            let premise = s.with_extra([e]);
            let premise = Sequent::new(premise.into_parts().0, f.clone());
            if let Some(p) = self.prove(&premise) {
                return Some(ProofTree::right_imp(s.clone(), p));
            }
        }
        for (i, principal) in ante.iter().enumerate() {
            if i > 0 && ante[i - 1] == *principal {
                continue;
            }
            let Some((e, f)) = principal.as_imp() else {
                continue;
            };
            let rest: Vec<&Formula> = ante
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g)
                .collect();
            for mask in 0u64..(1u64 << rest.len()) {
                let (mut delta, mut gamma) = (Vec::new(), Vec::new());
                for (j, &g) in rest.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        delta.push(g.clone());
                    } else {
                        gamma.push(g.clone());
                    }
                }
                let right = Sequent::new(delta, e.clone());
                let Some(rp) = self.prove(&right) else {
                    continue;
                };
                let left = Sequent::new(
                    gamma.into_iter().chain(std::iter::once(f.clone())),
                    s.succedent().clone(),
                );
                if let Some(lp) = self.prove(&left) {
                    return Some(ProofTree::left_imp(s.clone(), lp, rp));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuidedError {
    #[error("sequent `{0}` is not binary")]
    NotBinary(Sequent),
    #[error("sequent `{0}` is not a tautology")]
    NotTautological(Sequent),
    #[error("internal: no antecedent implication with head {head} in `{sequent}`")]
    InternalNoHead { sequent: Sequent, head: String },
    #[error("internal: relevant sets overlap in `{0}`")]
    InternalOverlap(Sequent),
}

/// Builds a CL7 proof of a binary tautological sequent by following
/// relevance: the succedent is made atomic, then the unique implication
/// whose head is the succedent atom is split over the disjoint relevant
/// parts of the rest of the antecedent. Unused formulas are added back by
/// [`weaken_proof`].
pub fn prove_binary_guided(s: &Sequent) -> Result<ProofTree, GuidedError> {
    if !s.is_binary() {
        return Err(GuidedError::NotBinary(s.clone()));
    }
    if !s.is_tautology() {
        return Err(GuidedError::NotTautological(s.clone()));
    }
    guided(s)
}

fn guided(s: &Sequent) -> Result<ProofTree, GuidedError> {
    if let Some((e, f)) = s.succedent().as_imp() {
        let premise = Sequent::new(
            s.antecedent().iter().cloned().chain(std::iter::once(e.clone())),
            f.clone(),
        );
        return Ok(ProofTree::right_imp(s.clone(), guided(&premise)?));
    }
    if is_axiom(s) {
        return Ok(ProofTree::axiom(s.clone()));
    }
    let goal = s.succedent();
    let head = goal.head();
    let ante = s.antecedent();
    let Some(k) = ante.iter().position(|g| g.as_imp().is_some() && g.head() == head) else {
        return Err(GuidedError::InternalNoHead {
            sequent: s.clone(),
            head: head.to_string(),
        });
    };
    let (e, f) = ante[k].as_imp().expect("selected an implication");
    let gamma: Vec<Formula> = ante
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, g)| g.clone())
        .collect();

    // Indices refer to `gamma`; the F copy sits at the end of `with_f`.
    let with_f: Vec<Formula> = gamma.iter().cloned().chain(std::iter::once(f.clone())).collect();
    let gamma1: Vec<usize> = relevant_indices(&with_f, goal)
        .into_iter()
        .filter(|&j| j < gamma.len())
        .collect();
    let gamma2 = relevant_indices(&gamma, e);
    if gamma1.iter().any(|j| gamma2.contains(j)) {
        return Err(GuidedError::InternalOverlap(s.clone()));
    }

    let pick = |idx: &[usize]| idx.iter().map(|&j| gamma[j].clone()).collect::<Vec<_>>();
    let left_goal = Sequent::new(
        pick(&gamma1).into_iter().chain(std::iter::once(f.clone())),
        goal.clone(),
    );
    let right_goal = Sequent::new(pick(&gamma2), e.clone());
    let left = guided(&left_goal)?;
    let right = guided(&right_goal)?;
    let joined = Sequent::new(
        pick(&gamma1)
            .into_iter()
            .chain(pick(&gamma2))
            .chain(std::iter::once(ante[k].clone())),
        goal.clone(),
    );
    let combined = ProofTree::left_imp(joined, left, right);
    let leftovers: Vec<Formula> = (0..gamma.len())
        .filter(|j| !gamma1.contains(j) && !gamma2.contains(j))
        .map(|j| gamma[j].clone())
        .collect();
    let proof = weaken_proof(&combined, &leftovers);
    debug_assert_eq!(proof.conclusion, *s);
    Ok(proof)
}

/// Adds `extra` to the antecedent of every sequent on one path of `t`:
/// at Left→ nodes the formulas go to the `Γ, F => G` premise, and they end
/// up as slack in an axiom.
pub fn weaken_proof(t: &ProofTree, extra: &[Formula]) -> ProofTree {
    if extra.is_empty() {
        return t.clone();
    }
    let conclusion = t.conclusion.with_extra(extra);
    let premises = match t.rule {
        Rule::Axiom => Vec::new(),
        Rule::RightImp | Rule::Contraction => vec![weaken_proof(&t.premises[0], extra)],
        Rule::LeftImp => vec![weaken_proof(&t.premises[0], extra), t.premises[1].clone()],
    };
    ProofTree {
        conclusion,
        rule: t.rule,
        premises,
    }
}

/// Applies `subst` to every sequent of `t`; the rules are schematic, so the
/// result is again a proof.
pub fn substitute_proof(t: &ProofTree, subst: &Substitution) -> ProofTree {
    ProofTree {
        conclusion: t.conclusion.substitute(subst),
        rule: t.rule,
        premises: t.premises.iter().map(|p| substitute_proof(p, subst)).collect(),
    }
}

pub fn provable_cl7(h: &Formula) -> bool {
    prove_exhaustive(&Sequent::of_formula(h.clone())).is_some()
}

/// Proves `h` by finding a binary tautology it instantiates, proving that
/// template with [`prove_binary_guided`] and substituting back.
pub fn prove_via_abstraction(h: &Formula) -> Option<ProofTree> {
    prove_sequent_via_abstraction(&Sequent::of_formula(h.clone()))
}

pub fn prove_sequent_via_abstraction(s: &Sequent) -> Option<ProofTree> {
    let abstraction = oracle::sequent_anti_instance(s)?;
    let template_proof = prove_binary_guided(&abstraction.template).expect("oracle templates are binary tautologies");
    let proof = substitute_proof(&template_proof, &abstraction.substitution);
    debug_assert_eq!(proof.conclusion, *s);
    Some(proof)
}
