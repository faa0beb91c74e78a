//! Implicative intuitionistic logic: the contraction-free calculus plus
//! Contraction, decided by backward search over set-sequents.
//!
//! With antecedents read as sets, Left→ keeps `E -> F` in the `=> E`
//! premise, which is where the search implicitly contracts. Proofs are
//! rebuilt in the multiset calculus with explicit Contraction nodes.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::cl7::{weaken_proof, ProofTree};
use crate::formula::{multiset, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSequent {
    pub antecedent: BTreeSet<Formula>,
    pub succedent: Formula,
}

impl From<&Sequent> for SetSequent {
    fn from(s: &Sequent) -> Self {
        SetSequent {
            antecedent: s.antecedent().iter().cloned().collect(),
            succedent: s.succedent().clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct set-sequents expanded.
    pub visited: usize,
    /// `2^n · n` for `n` distinct subformulas of the input; `None` if it
    /// does not fit in a `u128`.
    pub bound: Option<u128>,
}

pub fn int_provable(s: &Sequent) -> bool {
    int_provable_with_stats(s).0
}

pub fn int_provable_with_stats(s: &Sequent) -> (bool, SearchStats) {
    let (proof, stats) = run_search(s);
    (proof.is_some(), stats)
}

/// A multiset proof of `s`, possibly using Contraction.
pub fn int_prove(s: &Sequent) -> Option<ProofTree> {
    let (proof, _) = run_search(s);
    let core = to_multiset_proof(&proof?);
    let extra = multiset::difference(s.antecedent(), core.conclusion.antecedent())
        .expect("reconstructed antecedent is a subset of the input");
    let proof = weaken_proof(&core, &extra);
    debug_assert_eq!(proof.conclusion, *s);
    Some(proof)
}

fn run_search(s: &Sequent) -> (Option<Arc<SetProof>>, SearchStats) {
    let n = s
        .formulas()
        .flat_map(Formula::subformulas)
        .collect::<HashSet<_>>()
        .len();
    let bound = 1u128
        .checked_shl(n as u32)
        .and_then(|b| b.checked_mul(n as u128))
        .filter(|_| n < 127);
    let mut search = Search::default();
    let (proof, _) = search.prove(&SetSequent::from(s), 0);
    let stats = SearchStats {
        visited: search.visited.len(),
        bound,
    };
    if let Some(b) = bound {
        assert!(
            stats.visited as u128 <= b,
            "visited {} set-sequents, bound {b}",
            stats.visited
        );
    }
    (proof, stats)
}

#[derive(Debug)]
enum SetRule {
    Axiom,
    RightImp,
    LeftImp(Formula),
}

#[derive(Debug)]
struct SetProof {
    conclusion: SetSequent,
    rule: SetRule,
    premises: Vec<Arc<SetProof>>,
}

#[derive(Default)]
struct Search {
    memo: HashMap<SetSequent, Option<Arc<SetProof>>>,
    in_progress: HashMap<SetSequent, usize>,
    visited: HashSet<SetSequent>,
}

const NO_DEPENDENCY: usize = usize::MAX;

impl Search {
    /// Returns the proof (if any) and the shallowest in-progress depth a
    /// failure relied on. A failure is only memoized once it relies on
    /// nothing above the current node.
    fn prove(&mut self, s: &SetSequent, depth: usize) -> (Option<Arc<SetProof>>, usize) {
        if let Some(v) = self.memo.get(s) {
            return (v.clone(), NO_DEPENDENCY);
        }
        if let Some(&d) = self.in_progress.get(s) {
            return (None, d);
        }
        self.visited.insert(s.clone());
        self.in_progress.insert(s.clone(), depth);
        let (proof, low) = self.expand(s, depth);
        self.in_progress.remove(s);
        if proof.is_some() || low >= depth {
            self.memo.insert(s.clone(), proof.clone());
        }
        (proof, if low >= depth { NO_DEPENDENCY } else { low })
    }

    fn expand(&mut self, s: &SetSequent, depth: usize) -> (Option<Arc<SetProof>>, usize) {
        let done = |rule, premises| {
            Some(Arc::new(SetProof {
                conclusion: s.clone(),
                rule,
                premises,
            }))
        };
        if s.antecedent.contains(&s.succedent) {
            return (done(SetRule::Axiom, vec![]), NO_DEPENDENCY);
        }
        let mut low = NO_DEPENDENCY;
        if let Some((e, f)) = s.succedent.as_imp() {
            let mut antecedent = s.antecedent.clone();
            antecedent.insert(e.clone());
            let premise = SetSequent {
                antecedent,
                succedent: f.clone(),
            };
            let (p, l) = self.prove(&premise, depth + 1);
            if let Some(p) = p {
                return (done(SetRule::RightImp, vec![p]), NO_DEPENDENCY);
            }
            low = l;
        }
        for principal in &s.antecedent {
            let Some((e, f)) = principal.as_imp() else { continue };
            let minor = SetSequent {
                antecedent: s.antecedent.clone(),
                succedent: e.clone(),
            };
            let (p1, l1) = self.prove(&minor, depth + 1);
            low = low.min(l1);
            let Some(p1) = p1 else { continue };
            let mut antecedent = s.antecedent.clone();
            antecedent.remove(principal);
            antecedent.insert(f.clone());
            let major = SetSequent {
                antecedent,
                succedent: s.succedent.clone(),
            };
            let (p2, l2) = self.prove(&major, depth + 1);
            low = low.min(l2);
            if let Some(p2) = p2 {
                return (done(SetRule::LeftImp(principal.clone()), vec![p1, p2]), NO_DEPENDENCY);
            }
        }
        (None, low)
    }
}

/// Rebuilds a multiset proof of `U => G` where `U` lists distinct members
/// of the set-sequent's antecedent.
fn to_multiset_proof(p: &Arc<SetProof>) -> ProofTree {
    let goal = p.conclusion.succedent.clone();
    match &p.rule {
        SetRule::Axiom => ProofTree::axiom(Sequent::new([goal.clone()], goal)),
        SetRule::RightImp => {
            let (e, _) = goal.as_imp().expect("right_imp on an implication");
            let mut sub = to_multiset_proof(&p.premises[0]);
            if !sub.conclusion.antecedent().contains(e) {
                sub = weaken_proof(&sub, std::slice::from_ref(e));
            }
            let mut gamma = sub.conclusion.antecedent().to_vec();
            multiset::remove_one(&mut gamma, e);
            ProofTree::right_imp(Sequent::new(gamma, goal), sub)
        }
        SetRule::LeftImp(principal) => {
            let (_, f) = principal.as_imp().expect("left_imp on an implication");
            let minor = to_multiset_proof(&p.premises[0]);
            let major = to_multiset_proof(&p.premises[1]);
            if !major.conclusion.antecedent().contains(f) {
                return major;
            }
            let mut gamma = major.conclusion.antecedent().to_vec();
            multiset::remove_one(&mut gamma, f);
            let mut antecedent = gamma;
            antecedent.extend(minor.conclusion.antecedent().iter().cloned());
            antecedent.push(principal.clone());
            let mut proof = ProofTree::left_imp(Sequent::new(antecedent, goal.clone()), major, minor);
            // Each duplicate comes from the two premises sharing a formula.
            loop {
                let ante = proof.conclusion.antecedent();
                let Some(dup) = ante.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].clone()) else {
                    break;
                };
                let mut contracted = ante.to_vec();
                multiset::remove_one(&mut contracted, &dup);
                proof = ProofTree::contraction(Sequent::new(contracted, goal.clone()), proof);
            }
            proof
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cl7::{check_proof, Rule, System};
    use crate::syntax::parse_sequent;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    #[test]
    fn decides_examples() {
        assert!(int_provable(&seq("=> (P->(P->Q))->(P->Q)")));
        assert!(!int_provable(&seq("=> ((P->Q)->P)->P")));
        assert!(int_provable(&seq("=> P->Q->P")));
        assert!(!int_provable(&seq("=> P")));
        assert!(int_provable(&seq("P, P->Q => Q")));
        assert!(!int_provable(&seq("=> (P->Q)->P")));
    }

    #[test]
    fn contraction_proof_checks() {
        let s = seq("=> (P->(P->Q))->(P->Q)");
        let t = int_prove(&s).unwrap();
        assert_eq!(t.conclusion, s);
        assert_eq!(check_proof(&t, System::Int), Ok(()));
        assert!(t.count_rule(Rule::Contraction) >= 1);
        assert!(check_proof(&t, System::Cl7).is_err());
    }

    #[test]
    fn simple_proof_has_no_contraction() {
        let t = int_prove(&seq("=> P->P")).unwrap();
        assert_eq!(t.count_rule(Rule::Contraction), 0);
        assert_eq!(check_proof(&t, System::Cl7), Ok(()));
        assert!(int_prove(&seq("=> ((P->Q)->P)->P")).is_none());
    }

    #[test]
    fn duplicated_antecedents_are_kept() {
        let s = seq("P, P, P->Q, R => Q");
        let t = int_prove(&s).unwrap();
        assert_eq!(t.conclusion, s);
        assert_eq!(check_proof(&t, System::Int), Ok(()));
    }

    #[test]
    fn loop_prone_sequents_terminate() {
        // `(P->Q)->P` feeds its own premise; the loop check must cut it.
        let (v, stats) = int_provable_with_stats(&seq("(P->Q)->P => P"));
        assert!(!v);
        assert!(stats.visited as u128 <= stats.bound.unwrap());
        assert!(int_provable(&seq("((P->Q)->Q)->Q => P->Q")));
        assert!(int_provable(&seq("(P->Q)->P, (Q->P)->Q => P")));
        assert!(int_provable(&seq("=> ((((P->Q)->P)->P)->Q)->Q")));
    }
}
