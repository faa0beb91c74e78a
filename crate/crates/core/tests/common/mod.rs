//! Generators shared by the integration tests: formula shapes, canonical
//! atom labelings, random formulas and a small suite of games.

#![allow(dead_code)]

use std::collections::HashSet;

use cltk::game::{
    atomic_game, brec, brec_countable, choice_conj, neg, pand, reduce_b, reduce_bc, Game, GameTree, Player,
};
use cltk::{Atom, Formula, Sequent};
use rand::Rng;

pub fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| Atom::new(n).unwrap()).collect()
}

pub fn pq() -> Vec<Atom> {
    atoms(&["P", "Q"])
}

/// A formula with unlabeled leaves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Shape {
    Leaf,
    Imp(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Imp(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Fills the leaves left to right from `labels`.
    pub fn fill(&self, labels: &mut impl Iterator<Item = Atom>) -> Formula {
        match self {
            Shape::Leaf => Formula::Atom(labels.next().expect("enough labels")),
            Shape::Imp(l, r) => {
                let l = l.fill(labels);
                Formula::imp(l, r.fill(labels))
            }
        }
    }
}

/// `by_size[n]` lists every shape with `n` connectives.
pub fn shapes_up_to(max_conn: usize) -> Vec<Vec<Shape>> {
    let mut by_size: Vec<Vec<Shape>> = vec![vec![Shape::Leaf]];
    for n in 1..=max_conn {
        let mut level = Vec::new();
        for l in 0..n {
            for a in &by_size[l] {
                for b in &by_size[n - 1 - l] {
                    level.push(Shape::Imp(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
        }
        by_size.push(level);
    }
    by_size
}

/// Calls `visit` with every restricted-growth labeling of `n` leaves (label
/// `i` first appears after labels `0..i`) using at most `max_labels` labels,
/// each at most `max_block` times.
pub fn labelings(n: usize, max_block: usize, max_labels: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(
        labels: &mut Vec<usize>,
        counts: &mut Vec<usize>,
        n: usize,
        max_block: usize,
        max_labels: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if labels.len() == n {
            visit(labels);
            return;
        }
        for k in 0..counts.len() {
            if counts[k] < max_block {
                counts[k] += 1;
                labels.push(k);
                go(labels, counts, n, max_block, max_labels, visit);
                labels.pop();
                counts[k] -= 1;
            }
        }
        if counts.len() < max_labels {
            counts.push(1);
            labels.push(counts.len() - 1);
            go(labels, counts, n, max_block, max_labels, visit);
            labels.pop();
            counts.pop();
        }
    }
    go(&mut Vec::new(), &mut Vec::new(), n, max_block, max_labels, visit);
}

pub fn atom_name(i: usize) -> Atom {
    const NAMES: [&str; 8] = ["P", "Q", "R", "S", "T", "U", "V", "W"];
    Atom::new(NAMES.get(i).copied().unwrap_or("Z")).unwrap()
}

/// Non-decreasing index tuples of length `k` over `0..n`, so multisets of
/// shapes are generated once.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    multisets(n, k - 1)
        .into_iter()
        .flat_map(|prefix| {
            let start = prefix.last().copied().unwrap_or(0);
            (start..n).map(move |i| {
                let mut v = prefix.clone();
                v.push(i);
                v
            })
        })
        .collect()
}

/// Every binary sequent satisfying `keep` with at most `max_ante`
/// antecedent formulas and `max_conn` connectives in total, up to renaming
/// of atoms. `max_atoms` large enough to label every leaf makes the list
/// complete.
pub fn binary_sequents(
    max_ante: usize,
    max_conn: usize,
    max_atoms: usize,
    keep: impl Fn(&Sequent) -> bool,
) -> Vec<Sequent> {
    let by_size = shapes_up_to(max_conn);
    let all: Vec<(usize, &Shape)> = by_size
        .iter()
        .enumerate()
        .flat_map(|(n, v)| v.iter().map(move |s| (n, s)))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for k in 0..=max_ante {
        for ante in multisets(all.len(), k) {
            let ante_conn: usize = ante.iter().map(|&i| all[i].0).sum();
            if ante_conn > max_conn {
                continue;
            }
            for &(succ_conn, succ) in &all {
                if ante_conn + succ_conn > max_conn {
                    continue;
                }
                let shapes: Vec<&Shape> = ante.iter().map(|&i| all[i].1).chain(std::iter::once(succ)).collect();
                let leaves: usize = shapes.iter().map(|s| s.leaves()).sum();
                labelings(leaves, 2, max_atoms, &mut |labels| {
                    let mut it = labels.iter().map(|&i| atom_name(i));
                    let mut formulas: Vec<Formula> = shapes.iter().map(|s| s.fill(&mut it)).collect();
                    let succedent = formulas.pop().unwrap();
                    let s = Sequent::new(formulas, succedent);
                    if keep(&s) && seen.insert(s.clone()) {
                        out.push(s);
                    }
                });
            }
        }
    }
    out
}

/// Calls `visit(Γ, E, F)` for every `Γ ⇒ E`, `Γ ⇒ F` pair that is binary
/// on both sides with `E`, `F` sharing no atom, with at most `max_gamma`
/// antecedent formulas and `max_conn` connectives over `Γ, E, F`.
/// Only the `part`-th of `parts` slices of the antecedent multisets is
/// visited, so callers can split the work across threads.
pub fn disjoint_pairs(
    max_gamma: usize,
    max_conn: usize,
    (part, parts): (usize, usize),
    visit: &mut dyn FnMut(&[Formula], &Formula, &Formula),
) {
    let by_size = shapes_up_to(max_conn);
    let all: Vec<(usize, &Shape)> = by_size
        .iter()
        .enumerate()
        .flat_map(|(n, v)| v.iter().map(move |s| (n, s)))
        .collect();
    let names: Vec<Atom> = (0..2 * (max_conn + 2))
        .map(|i| Atom::new(&format!("A{i}")).unwrap())
        .collect();
    let slices = (0..=max_gamma).flat_map(|k| multisets(all.len(), k)).enumerate();
    for (_, gamma) in slices.filter(|(i, _)| i % parts == part) {
        {
            let gamma_conn: usize = gamma.iter().map(|&i| all[i].0).sum();
            for &(ce, e) in &all {
                for &(cf, f) in &all {
                    if gamma_conn + ce + cf > max_conn {
                        continue;
                    }
                    let shapes: Vec<&Shape> = gamma.iter().map(|&i| all[i].1).chain([e, f]).collect();
                    let leaves: usize = shapes.iter().map(|s| s.leaves()).sum();
                    let (le, lf) = (e.leaves(), f.leaves());
                    let split = leaves - le - lf;
                    // Disjoint E, F and binarity on both sides leave every
                    // atom with at most two occurrences overall.
                    labelings(leaves, 2, usize::MAX, &mut |labels| {
                        let in_e = &labels[split..split + le];
                        let in_f = &labels[split + le..];
                        if in_e.iter().any(|x| in_f.contains(x)) {
                            return;
                        }
                        let mut it = labels.iter().map(|&i| names[i].clone());
                        let mut formulas: Vec<Formula> = shapes.iter().map(|s| s.fill(&mut it)).collect();
                        let fe2 = formulas.pop().unwrap();
                        let fe1 = formulas.pop().unwrap();
                        visit(&formulas, &fe1, &fe2);
                    });
                }
            }
        }
    }
}

/// A random formula with at most `max_conn` connectives; the size is drawn
/// uniformly, then the tree is split uniformly at each node.
pub fn random_formula(rng: &mut impl Rng, atoms: &[Atom], max_conn: usize) -> Formula {
    let n = rng.random_range(0..=max_conn);
    random_of_size(rng, atoms, n)
}

pub fn random_of_size(rng: &mut impl Rng, atoms: &[Atom], n: usize) -> Formula {
    if n == 0 {
        return Formula::Atom(atoms[rng.random_range(0..atoms.len())].clone());
    }
    let l = rng.random_range(0..n);
    let left = random_of_size(rng, atoms, l);
    Formula::imp(left, random_of_size(rng, atoms, n - 1 - l))
}

pub fn random_sequent(rng: &mut impl Rng, atoms: &[Atom], max_ante: usize, max_conn: usize) -> Sequent {
    let k = rng.random_range(0..=max_ante);
    let ante: Vec<Formula> = (0..k).map(|_| random_formula(rng, atoms, max_conn)).collect();
    Sequent::new(ante, random_formula(rng, atoms, max_conn))
}

// ---- games --------------------------------------------------------------

use Player::{Environment as B, Machine as T};

/// `⊥` asks `q`; `⊤` answers `yes` (winning) or `no` (losing).
pub fn question() -> Game {
    let asked = GameTree::leaf(B)
        .with_edge(T, "yes", GameTree::leaf(T))
        .unwrap()
        .with_edge(T, "no", GameTree::leaf(B))
        .unwrap();
    atomic_game(GameTree::leaf(T).with_edge(B, "q", asked).unwrap()).unwrap()
}

/// `⊥` picks `a` or `b`; `⊤` must echo it.
pub fn echo() -> Game {
    let mut root = GameTree::leaf(T);
    for pick in ["a", "b"] {
        let mut node = GameTree::leaf(B);
        for reply in ["a", "b"] {
            let winner = if reply == pick { T } else { B };
            node = node.with_edge(T, reply, GameTree::leaf(winner)).unwrap();
        }
        root = root.with_edge(B, pick, node).unwrap();
    }
    atomic_game(root).unwrap()
}

/// `⊤` must move first, with `go` (winning) or `stop` (losing); `⊥` may
/// then `undo` for a win.
pub fn initiative() -> Game {
    let after_go = GameTree::leaf(T).with_edge(B, "undo", GameTree::leaf(B)).unwrap();
    let root = GameTree::leaf(B)
        .with_edge(T, "go", after_go)
        .unwrap()
        .with_edge(T, "stop", GameTree::leaf(B))
        .unwrap();
    atomic_game(root).unwrap()
}

/// One game in the branching-recurrence suite.
pub struct SuiteGame {
    pub name: &'static str,
    pub game: Game,
    /// The same game with every `∘|` replaced by `∘|^ℵ0`.
    pub countable: Game,
    /// Where the outermost branching recurrence sits (`""` or `"0."`) and
    /// which player may replicate there.
    pub recurrence_prefix: &'static str,
    pub replicator: Player,
}

pub fn branching_suite() -> Vec<SuiteGame> {
    let (h, k, a) = (question(), echo(), initiative());
    let build = |rec: &dyn Fn(&Game) -> Game, reduce: &dyn Fn(&Game, &Game) -> Game| {
        vec![
            rec(&h),
            rec(&pand(&[h.clone(), k.clone()]).unwrap()),
            reduce(&h, &a),
            rec(&rec(&k)),
            neg(&rec(&choice_conj(&[h.clone(), k.clone()]).unwrap())),
        ]
    };
    let plain = build(&brec, &reduce_b);
    let countable = build(&brec_countable, &reduce_bc);
    let meta = [
        ("brec(H)", "", B),
        ("brec(H and K)", "", B),
        ("H reduce_b A", "0.", T),
        ("brec(brec(K))", "", B),
        ("neg brec(H choice-and K)", "", T),
    ];
    plain
        .into_iter()
        .zip(countable)
        .zip(meta)
        .map(|((game, countable), (name, recurrence_prefix, replicator))| SuiteGame {
            name,
            game,
            countable,
            recurrence_prefix,
            replicator,
        })
        .collect()
}
