//! Formula enumeration and the brute-force decision of "instance of a binary
//! tautology".
//!
//! A binary template `B` with `Bσ = H` is determined by a *cut* of `H`'s
//! syntax tree (an antichain of positions covering every leaf, where
//! `B`'s atoms sit) and a grouping of the cut points into label classes of
//! size at most two, each class carrying one subformula. The search
//! enumerates all of them and tests each template by truth table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::formula::{Atom, Formula, Sequent, Substitution};

/// Stream of every formula over `atoms` with at most `max_connectives`
/// implications: by number of connectives, then in `Formula`'s order.
pub fn enumerate_formulas(atoms: &[Atom], max_connectives: usize) -> FormulaStream {
    let atoms: BTreeSet<Atom> = atoms.iter().cloned().collect();
    FormulaStream {
        atoms: atoms.into_iter().map(Formula::Atom).collect(),
        max_connectives,
        by_size: Vec::new(),
        cursor: 0,
    }
}

pub struct FormulaStream {
    atoms: Vec<Formula>,
    max_connectives: usize,
    by_size: Vec<Vec<Formula>>,
    cursor: usize,
}

impl FormulaStream {
    fn fill_next_level(&mut self) -> bool {
        let n = self.by_size.len();
        if n > self.max_connectives || self.atoms.is_empty() {
            return false;
        }
        let level = if n == 0 {
            self.atoms.clone()
        } else {
            let mut level = Vec::new();
            for left_size in 0..n {
                for l in &self.by_size[left_size] {
                    for r in &self.by_size[n - 1 - left_size] {
                        level.push(Formula::imp(l.clone(), r.clone()));
                    }
                }
            }
            level.sort();
            level
        };
        self.by_size.push(level);
        self.cursor = 0;
        true
    }
}

impl Iterator for FormulaStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if let Some(level) = self.by_size.last() {
                if self.cursor < level.len() {
                    self.cursor += 1;
                    return Some(level[self.cursor - 1].clone());
                }
            }
            if !self.fill_next_level() {
                return None;
            }
        }
    }
}

pub fn enumerate_binary_tautologies(atoms: &[Atom], max_connectives: usize) -> impl Iterator<Item = Formula> {
    enumerate_formulas(atoms, max_connectives).filter(|f| f.is_binary() && f.is_tautology())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A node of a sequent's syntax forest: `root` indexes the antecedent
/// formulas in order, then the succedent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub root: usize,
    pub path: Vec<Side>,
}

/// A binary tautological template together with the substitution that
/// maps it onto the concrete sequent, and the cut it was read off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abstraction {
    pub template: Sequent,
    pub substitution: Substitution,
    pub cut: Vec<Position>,
}

/// The first binary tautology (with its substitution) that `h` instantiates.
pub fn binary_anti_instance(h: &Formula) -> Option<(Formula, Substitution)> {
    let a = sequent_anti_instance(&Sequent::of_formula(h.clone()))?;
    let (_, template) = a.template.into_parts();
    Some((template, a.substitution))
}

pub fn is_instance_of_binary_tautology(h: &Formula) -> bool {
    binary_anti_instance(h).is_some()
}

/// Searches every cut of the sequent's formulas (fewer points first) and
/// every grouping of the cut points for a binary tautological template.
///
/// Only groupings that leave at most one unpaired point among equal
/// subformulas are tried. Pairing two such singletons is a substitution
/// instance of the template, so it stays tautological; nothing is lost.
pub fn sequent_anti_instance(s: &Sequent) -> Option<Abstraction> {
    let roots: Vec<&Formula> = s.formulas().collect();
    let mut cuts: Vec<Vec<Position>> = vec![Vec::new()];
    for (root, f) in roots.iter().enumerate() {
        let mut here = Vec::new();
        tree_cuts(f, &mut Vec::new(), &mut here);
        cuts = cuts
            .iter()
            .flat_map(|prefix| {
                here.iter().map(move |cut| {
                    let mut c = prefix.clone();
                    c.extend(cut.iter().map(|path| Position {
                        root,
                        path: path.clone(),
                    }));
                    c
                })
            })
            .collect();
    }
    cuts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let reserved: BTreeSet<String> = s.atoms().into_iter().map(|a| a.name().to_string()).collect();
    for cut in cuts {
        let subformulas: Vec<&Formula> = cut.iter().map(|p| subformula_at(roots[p.root], &p.path)).collect();
        let mut groups: BTreeMap<&Formula, Vec<usize>> = BTreeMap::new();
        for (i, f) in subformulas.iter().enumerate() {
            groups.entry(*f).or_default().push(i);
        }
        let group_matchings: Vec<Vec<Vec<Vec<usize>>>> =
            groups.values().map(|members| maximal_matchings(members)).collect();
        let mut choice = vec![0usize; group_matchings.len()];
        loop {
            let mut classes: Vec<Vec<usize>> = group_matchings
                .iter()
                .zip(&choice)
                .flat_map(|(options, &k)| options[k].iter().cloned())
                .collect();
            classes.sort_by_key(|c| c[0]);
            if let Some(found) = try_template(&roots, &cut, &subformulas, &classes, &reserved) {
                return Some(found);
            }
            // Odometer over the per-group matching choices.
            let mut g = 0;
            loop {
                if g == choice.len() {
                    break;
                }
                choice[g] += 1;
                if choice[g] < group_matchings[g].len() {
                    break;
                }
                choice[g] = 0;
                g += 1;
            }
            if g == choice.len() {
                break;
            }
        }
    }
    None
}

fn try_template(
    roots: &[&Formula],
    cut: &[Position],
    subformulas: &[&Formula],
    classes: &[Vec<usize>],
    reserved: &BTreeSet<String>,
) -> Option<Abstraction> {
    let mut labels: HashMap<&Position, Atom> = HashMap::new();
    let mut substitution = Substitution::new();
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut fresh = 0usize;
    for class in classes {
        let carried = subformulas[class[0]];
        let name = match carried {
            Formula::Atom(a) if !taken.contains(a.name()) => a.clone(),
            _ => loop {
                fresh += 1;
                let candidate = format!("X{fresh}");
                if !reserved.contains(&candidate) {
                    break Atom::new(&candidate).expect("fresh names are valid atoms");
                }
            },
        };
        taken.insert(name.name().to_string());
        for &i in class {
            labels.insert(&cut[i], name.clone());
        }
        substitution.insert(name, carried.clone());
    }
    let mut formulas: Vec<Formula> = roots
        .iter()
        .enumerate()
        .map(|(root, f)| build_template(f, root, &mut Vec::new(), &labels))
        .collect();
    let succedent = formulas.pop().expect("a sequent has a succedent");
    let template = Sequent::new(formulas, succedent);
    if !template.is_tautology() {
        return None;
    }
    let concrete = Sequent::new(
        roots[..roots.len() - 1].iter().map(|f| (*f).clone()),
        roots[roots.len() - 1].clone(),
    );
    assert!(template.is_binary(), "template {template} is not binary");
    assert_eq!(
        template.substitute(&substitution),
        concrete,
        "template does not instantiate to the input"
    );
    Some(Abstraction {
        template,
        substitution,
        cut: cut.to_vec(),
    })
}

fn build_template(f: &Formula, root: usize, path: &mut Vec<Side>, labels: &HashMap<&Position, Atom>) -> Formula {
    let here = Position {
        root,
        path: path.clone(),
    };
    if let Some(a) = labels.get(&here) {
        return Formula::Atom(a.clone());
    }
    let (l, r) = f.as_imp().expect("a cut covers every leaf");
    path.push(Side::Left);
    let left = build_template(l, root, path, labels);
    path.pop();
    path.push(Side::Right);
    let right = build_template(r, root, path, labels);
    path.pop();
    Formula::imp(left, right)
}

/// Every cut of the tree below `f`: the node itself, or (for an
/// implication) a cut of the left child joined with a cut of the right.
fn tree_cuts(f: &Formula, path: &mut Vec<Side>, out: &mut Vec<Vec<Vec<Side>>>) {
    out.push(vec![path.clone()]);
    if let Some((l, r)) = f.as_imp() {
        let mut left = Vec::new();
        path.push(Side::Left);
        tree_cuts(l, path, &mut left);
        path.pop();
        let mut right = Vec::new();
        path.push(Side::Right);
        tree_cuts(r, path, &mut right);
        path.pop();
        for lc in &left {
            for rc in &right {
                out.push(lc.iter().chain(rc).cloned().collect());
            }
        }
    }
}

fn subformula_at<'a>(mut f: &'a Formula, path: &[Side]) -> &'a Formula {
    for side in path {
        let (l, r) = f.as_imp().expect("path stays inside the tree");
        f = match side {
            Side::Left => l,
            Side::Right => r,
        };
    }
    f
}

/// Partitions of `items` into pairs, with exactly one singleton when the
/// count is odd.
fn maximal_matchings(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn go(items: &[usize], single_left: bool, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, rest)) = items.split_first() else {
            out.push(current.clone());
            return;
        };
        for (j, &partner) in rest.iter().enumerate() {
            let remaining: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &x)| x)
                .collect();
            current.push(vec![first, partner]);
            go(&remaining, single_left, current, out);
            current.pop();
        }
        if single_left {
            current.push(vec![first]);
            go(rest, false, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(items, items.len() % 2 == 1, &mut Vec::new(), &mut out);
    out
}
