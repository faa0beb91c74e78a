mod common;

use cltk::cl7::weaken_proof;
use cltk::game::{
    arrow, brec, choice_conj, choice_disj, is_legal_run, neg, neg_run, pand, por, prec, proj_component,
    random_legal_run, Game, Player,
};
use cltk::serial::{proof_from_json, proof_to_json, run_from_json, run_to_json};
use cltk::{
    check_proof, int_provable, int_prove, is_instance_of_binary_tautology, nnf, parse_formula, parse_sequent,
    prove_exhaustive, to_one_sided, Atom, Formula, Nnf, Sequent, Substitution, System,
};
use proptest::prelude::*;

use common::{echo, initiative, question};

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![Just("P"), Just("Q"), Just("R")].prop_map(|n| Atom::new(n).unwrap())
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_map(Formula::Atom).prop_recursive(4, 12, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Formula::imp(l, r))
    })
}

fn sequent() -> impl Strategy<Value = Sequent> {
    (prop::collection::vec(formula(), 0..4), formula()).prop_map(|(a, s)| Sequent::new(a, s))
}

/// Sequents small enough for the exponential provers.
fn small_sequent() -> impl Strategy<Value = Sequent> {
    let small = || {
        atom().prop_map(Formula::Atom).prop_recursive(3, 6, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| Formula::imp(l, r))
        })
    };
    (prop::collection::vec(small(), 0..3), small()).prop_map(|(a, s)| Sequent::new(a, s))
}

fn renaming() -> impl Strategy<Value = Substitution> {
    prop::collection::vec(atom(), 3).prop_map(|targets| {
        ["P", "Q", "R"]
            .iter()
            .zip(targets)
            .map(|(src, dst)| (Atom::new(src).unwrap(), Formula::Atom(dst)))
            .collect()
    })
}

fn game() -> impl Strategy<Value = Game> {
    let base = prop_oneof![Just(question()), Just(echo()), Just(initiative())];
    base.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|g| neg(&g)),
            inner.clone().prop_map(|g| prec(&g)),
            inner.clone().prop_map(|g| brec(&g)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| pand(&[a, b]).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| por(&[a, b]).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| choice_conj(&[a, b]).unwrap()),
            (inner.clone(), inner).prop_map(|(a, b)| choice_disj(&[a, b]).unwrap()),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_identity(f in formula(), s in sequent()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        prop_assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn tautology_routes_agree(s in sequent()) {
        prop_assert_eq!(s.is_tautology(), s.to_classical().is_tautology());
    }

    #[test]
    fn restriction_is_idempotent(s in sequent()) {
        let once = s.restrict_to_relevant();
        prop_assert_eq!(once.restrict_to_relevant(), once.clone());
        prop_assert_eq!(once.relevant_indices().len(), once.antecedent().len());
    }

    #[test]
    fn head_commutes_with_renaming(f in formula(), sigma in renaming()) {
        let expected = sigma[f.head()].head().clone();
        prop_assert_eq!(f.substitute(&sigma).head().clone(), expected);
    }

    #[test]
    fn relevance_ignores_antecedent_order(s in sequent(), rotation in 0usize..4) {
        let mut ante = s.antecedent().to_vec();
        let k = rotation % ante.len().max(1);
        ante.rotate_left(k);
        let pick = |ante: &[Formula]| {
            let mut v: Vec<Formula> = cltk::formula::relevant_indices(ante, s.succedent()).into_iter().map(|i| ante[i].clone()).collect();
            v.sort();
            v
        };
        prop_assert_eq!(pick(&ante), pick(s.antecedent()));
    }

    #[test]
    fn weakening_preserves_provability(s in small_sequent(), extra in formula()) {
        if let Some(t) = prove_exhaustive(&s) {
            let weakened = s.with_extra([&extra]);
            prop_assert!(prove_exhaustive(&weakened).is_some());
            let w = weaken_proof(&t, std::slice::from_ref(&extra));
            prop_assert_eq!(&w.conclusion, &weakened);
            prop_assert!(check_proof(&w, System::Cl7).is_ok());
        }
        if int_provable(&s) {
            prop_assert!(int_provable(&s.with_extra([&extra])));
        }
    }

    #[test]
    fn proof_serialization_is_deterministic(s in small_sequent()) {
        for t in prove_exhaustive(&s).into_iter().chain(int_prove(&s)) {
            let text = proof_to_json(&t);
            let back = proof_from_json(&text).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(proof_to_json(&back), text);
        }
    }

    #[test]
    fn int_ignores_duplicate_antecedents(s in small_sequent()) {
        let doubled = s.with_extra(s.antecedent());
        prop_assert_eq!(int_provable(&doubled), int_provable(&s));
        if let Some(t) = int_prove(&doubled) {
            prop_assert!(check_proof(&t, System::Int).is_ok());
            prop_assert_eq!(t.conclusion, doubled);
        }
    }

    #[test]
    fn nnf_is_a_fixed_point(f in formula(), positive in any::<bool>()) {
        let n = nnf(&f, positive);
        prop_assert_eq!(Nnf::from_classical(&n.to_classical(), true), Some(n.clone()));
        prop_assert_eq!(n.dual().dual(), n.clone());
        prop_assert_eq!(nnf(&f, !positive), n.dual());
    }

    #[test]
    fn one_sided_keeps_atom_occurrences(s in sequent()) {
        let count: usize = s.formulas().map(|f| f.connectives() + 1).sum();
        prop_assert_eq!(to_one_sided(&s).atom_occurrences(), count);
        prop_assert_eq!(to_one_sided(&s).len(), s.antecedent().len() + 1);
    }

    #[test]
    fn binary_verdict_is_tautologicity(f in formula()) {
        if f.is_binary() {
            prop_assert_eq!(is_instance_of_binary_tautology(&f), f.is_tautology());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn run_serialization_is_deterministic(g in game(), seed in any::<u64>()) {
        let r = random_legal_run(&g, 10, seed);
        let text = run_to_json(&r);
        prop_assert_eq!(run_from_json(&text).unwrap(), r);
    }

    #[test]
    fn de_morgan_for_parallel_operators(a in game(), b in game(), seed in any::<u64>()) {
        let lhs = neg(&pand(&[a.clone(), b.clone()]).unwrap());
        let rhs = por(&[neg(&a), neg(&b)]).unwrap();
        let r = random_legal_run(&lhs, 10, seed);
        prop_assert_eq!(is_legal_run(&rhs, &r), Ok(()));
        prop_assert_eq!(lhs.winner(&r), rhs.winner(&r));
        let r = random_legal_run(&rhs, 10, seed);
        prop_assert_eq!(is_legal_run(&lhs, &r), Ok(()));
        prop_assert_eq!(lhs.winner(&r), rhs.winner(&r));
    }

    #[test]
    fn double_negation_is_identity(g in game(), seed in any::<u64>()) {
        let gg = neg(&neg(&g));
        let r = random_legal_run(&g, 10, seed);
        prop_assert_eq!(is_legal_run(&gg, &r), Ok(()));
        prop_assert_eq!(gg.winner(&r), g.winner(&r));
        prop_assert_eq!(neg(&g).winner(&neg_run(&r)), g.winner(&r).other());
    }

    #[test]
    fn arrow_is_negated_antecedent_or_consequent(a in game(), b in game(), seed in any::<u64>()) {
        let g = arrow(&a, &b);
        let r = random_legal_run(&g, 10, seed);
        let won = b.winner(&proj_component(&r, "1.")) == Player::Machine
            || a.winner(&neg_run(&proj_component(&r, "0."))) == Player::Environment;
        prop_assert_eq!(g.winner(&r) == Player::Machine, won);
    }

    #[test]
    fn legality_passes_to_components_and_prefixes(a in game(), b in game(), seed in any::<u64>(), cut in 0usize..10) {
        let g = pand(&[a.clone(), b.clone()]).unwrap();
        let r = random_legal_run(&g, 10, seed);
        prop_assert_eq!(is_legal_run(&a, &proj_component(&r, "0.")), Ok(()));
        prop_assert_eq!(is_legal_run(&b, &proj_component(&r, "1.")), Ok(()));
        prop_assert_eq!(is_legal_run(&g, &r[..cut.min(r.len())]), Ok(()));
    }

    #[test]
    fn parallel_recurrence_counts_untouched_copies(a in game(), seed in any::<u64>()) {
        let g = prec(&a);
        let r = random_legal_run(&g, 10, seed);
        let touched: std::collections::BTreeSet<&str> = r
            .iter()
            .filter_map(|lm| lm.mv.as_str().split_once('.').map(|(i, _)| i))
            .collect();
        let won = a.winner(&[]) == Player::Machine
            && touched.iter().all(|i| a.winner(&proj_component(&r, &format!("{i}."))) == Player::Machine);
        prop_assert_eq!(g.winner(&r) == Player::Machine, won);
    }
}
