//! Implicative formulas, two-sided multiset sequents and the classical
//! vocabulary (heads, binarity, relevance, substitution, truth tables) that
//! the provers and the oracle share.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid atom name {0:?}: expected [A-Za-z][A-Za-z0-9_]*")]
    InvalidAtom(String),
    #[error("atom {0} has no value in the assignment")]
    MissingAtom(Atom),
}

/// A propositional atom. Names follow `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Result<Self, FormulaError> {
        if is_atom_name(name) {
            Ok(Atom(Arc::from(name)))
        } else {
            Err(FormulaError::InvalidAtom(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An implicative formula: an atom or `left -> right`.
///
/// Children are reference counted so that sequents and proof trees can share
/// subformulas freely.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Imp(Arc<Formula>, Arc<Formula>),
}

pub type Substitution = BTreeMap<Atom, Formula>;

impl Formula {
    /// Builds an atomic formula. Panics on an invalid name; use
    /// [`Atom::new`] for fallible construction.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("valid atom name"))
    }

    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::Imp(Arc::new(left), Arc::new(right))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(l, r) => Some((l, r)),
            Formula::Atom(_) => None,
        }
    }

    /// The atom with the rightmost occurrence.
    pub fn head(&self) -> &Atom {
        let mut f = self;
        loop {
            match f {
                Formula::Atom(a) => return a,
                Formula::Imp(_, r) => f = r,
            }
        }
    }

    /// Number of implication nodes.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Imp(l, r) => 1 + l.connectives() + r.connectives(),
        }
    }

    pub fn occurrences(&self, atom: &Atom) -> usize {
        match self {
            Formula::Atom(a) => usize::from(a == atom),
            Formula::Imp(l, r) => l.occurrences(atom) + r.occurrences(atom),
        }
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        match self {
            Formula::Atom(a) => a == atom,
            Formula::Imp(l, r) => l.contains_atom(atom) || r.contains_atom(atom),
        }
    }

    pub(crate) fn count_atoms(&self, counts: &mut BTreeMap<Atom, usize>) {
        match self {
            Formula::Atom(a) => *counts.entry(a.clone()).or_default() += 1,
            Formula::Imp(l, r) => {
                l.count_atoms(counts);
                r.count_atoms(counts);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut counts = BTreeMap::new();
        self.count_atoms(&mut counts);
        counts.into_keys().collect()
    }

    /// No atom occurs more than twice.
    pub fn is_binary(&self) -> bool {
        let mut counts = BTreeMap::new();
        self.count_atoms(&mut counts);
        counts.values().all(|&n| n <= 2)
    }

    /// Simultaneous replacement of atoms; atoms outside the map are kept.
    pub fn substitute(&self, subst: &Substitution) -> Formula {
        match self {
            Formula::Atom(a) => subst.get(a).cloned().unwrap_or_else(|| self.clone()),
            Formula::Imp(l, r) => Formula::Imp(Arc::new(l.substitute(subst)), Arc::new(r.substitute(subst))),
        }
    }

    /// Looks for `s` with `pattern.substitute(s) == *self`. The substitution,
    /// when it exists, is unique on the atoms of `pattern`.
    pub fn match_instance(&self, pattern: &Formula) -> Option<Substitution> {
        let mut subst = Substitution::new();
        match_into(self, pattern, &mut subst).then_some(subst)
    }

    /// All subformulas, including `self`, in pre-order (with repetitions).
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            if let Formula::Imp(l, r) = f {
                stack.push(r);
                stack.push(l);
            }
        }
        out
    }

    /// Classical tautology check by bit-parallel truth tables.
    pub fn is_tautology(&self) -> bool {
        Sequent::new(Vec::new(), self.clone()).is_tautology()
    }
}

pub(crate) fn match_into(concrete: &Formula, pattern: &Formula, subst: &mut Substitution) -> bool {
    match (pattern, concrete) {
        (Formula::Atom(a), _) => match subst.get(a) {
            Some(bound) => bound == concrete,
            None => {
                subst.insert(a.clone(), concrete.clone());
                true
            }
        },
        (Formula::Imp(pl, pr), Formula::Imp(cl, cr)) => match_into(cl, pl, subst) && match_into(cr, pr, subst),
        (Formula::Imp(..), Formula::Atom(_)) => false,
    }
}

impl fmt::Display for Formula {
    /// Minimal parenthesization: `->` associates to the right.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Imp(l, r) => {
                if l.as_imp().is_some() {
                    write!(f, "({l})->{r}")
                } else {
                    write!(f, "{l}->{r}")
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A two-sided sequent `Γ => F` with a multiset antecedent.
///
/// The antecedent is kept sorted, so derived equality and hashing are
/// multiset equality and the printed form is canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    antecedent: Vec<Formula>,
    succedent: Formula,
}

impl Sequent {
    pub fn new(antecedent: impl IntoIterator<Item = Formula>, succedent: Formula) -> Self {
        let mut antecedent: Vec<Formula> = antecedent.into_iter().collect();
        antecedent.sort();
        Sequent { antecedent, succedent }
    }

    pub fn of_formula(f: Formula) -> Self {
        Sequent::new(Vec::new(), f)
    }

    pub fn antecedent(&self) -> &[Formula] {
        &self.antecedent
    }

    pub fn succedent(&self) -> &Formula {
        &self.succedent
    }

    pub fn into_parts(self) -> (Vec<Formula>, Formula) {
        (self.antecedent, self.succedent)
    }

    /// Same succedent, `extra` added to the antecedent.
    pub fn with_extra<'a>(&self, extra: impl IntoIterator<Item = &'a Formula>) -> Sequent {
        let mut ante = self.antecedent.clone();
        ante.extend(extra.into_iter().cloned());
        Sequent::new(ante, self.succedent.clone())
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(std::iter::once(&self.succedent))
    }

    pub fn connectives(&self) -> usize {
        self.formulas().map(Formula::connectives).sum()
    }

    pub fn occurrences(&self, atom: &Atom) -> usize {
        self.formulas().map(|f| f.occurrences(atom)).sum()
    }

    pub fn atom_counts(&self) -> BTreeMap<Atom, usize> {
        let mut counts = BTreeMap::new();
        for f in self.formulas() {
            f.count_atoms(&mut counts);
        }
        counts
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.atom_counts().into_keys().collect()
    }

    pub fn is_binary(&self) -> bool {
        self.atom_counts().values().all(|&n| n <= 2)
    }

    pub fn substitute(&self, subst: &Substitution) -> Sequent {
        Sequent::new(
            self.antecedent.iter().map(|f| f.substitute(subst)),
            self.succedent.substitute(subst),
        )
    }

    /// Indices of the relevant antecedent occurrences (see [`relevant_indices`]).
    pub fn relevant_indices(&self) -> Vec<usize> {
        relevant_indices(&self.antecedent, &self.succedent)
    }

    pub fn relevant_formulas(&self) -> Vec<Formula> {
        self.relevant_indices()
            .into_iter()
            .map(|i| self.antecedent[i].clone())
            .collect()
    }

    /// The sequent with every irrelevant antecedent formula deleted.
    pub fn restrict_to_relevant(&self) -> Sequent {
        Sequent::new(self.relevant_formulas(), self.succedent.clone())
    }

    /// `E1 ∧ … ∧ En → F`, or just `F` for an empty antecedent.
    pub fn to_classical(&self) -> ClassicalFormula {
        let succ = ClassicalFormula::from(&self.succedent);
        if self.antecedent.is_empty() {
            return succ;
        }
        let ante = if self.antecedent.len() == 1 {
            ClassicalFormula::from(&self.antecedent[0])
        } else {
            ClassicalFormula::And(self.antecedent.iter().map(ClassicalFormula::from).collect())
        };
        ClassicalFormula::Imp(Box::new(ante), Box::new(succ))
    }

    /// Bit-parallel truth table: the sequent is a tautology iff no
    /// assignment makes every antecedent formula true and the succedent false.
    pub fn is_tautology(&self) -> bool {
        let atoms: Vec<Atom> = self.atoms().into_iter().collect();
        let index: BTreeMap<&Atom, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let k = atoms.len();
        let used = if k >= 6 { !0u64 } else { (1u64 << (1usize << k)) - 1 };
        let blocks: u64 = if k > 6 { 1u64 << (k - 6) } else { 1 };
        (0..blocks).all(|block| {
            let word = |i: usize| -> u64 {
                if i < 6 {
                    BIT_PATTERNS[i]
                } else if (block >> (i - 6)) & 1 == 1 {
                    !0
                } else {
                    0
                }
            };
            let mut falsifying = !eval_word(&self.succedent, &index, &word);
            for f in &self.antecedent {
                falsifying &= eval_word(f, &index, &word);
            }
            falsifying & used == 0
        })
    }
}

/// Relevant occurrences of `antecedent` for the goal `succedent`: the least
/// set closed under "head occurs in the succedent" and "head occurs in a
/// member". Every copy of a repeated formula is classified on its own, and
/// indices refer to the slice as given.
pub fn relevant_indices(antecedent: &[Formula], succedent: &Formula) -> Vec<usize> {
    let n = antecedent.len();
    let mut relevant = vec![false; n];
    let mut frontier: Vec<usize> = (0..n)
        .filter(|&i| succedent.contains_atom(antecedent[i].head()))
        .collect();
    for &i in &frontier {
        relevant[i] = true;
    }
    while let Some(j) = frontier.pop() {
        for i in 0..n {
            if !relevant[i] && antecedent[j].contains_atom(antecedent[i].head()) {
                relevant[i] = true;
                frontier.push(i);
            }
        }
    }
    (0..n).filter(|&i| relevant[i]).collect()
}

/// Truth columns of the first six variables over a 64-row block.
const BIT_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn eval_word(f: &Formula, index: &BTreeMap<&Atom, usize>, word: &impl Fn(usize) -> u64) -> u64 {
    match f {
        Formula::Atom(a) => word(index[a]),
        Formula::Imp(l, r) => !eval_word(l, index, word) | eval_word(r, index, word),
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if self.antecedent.is_empty() {
            write!(f, "=> {}", self.succedent)
        } else {
            write!(f, " => {}", self.succedent)
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Truth assignment used by [`ClassicalFormula::eval`].
pub type Assignment = BTreeMap<Atom, bool>;

/// Classical propositional formulas over `¬ ∧ ∨ →`. Implication is kept as
/// a constructor and evaluated as `¬E ∨ F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalFormula {
    Atom(Atom),
    Not(Box<ClassicalFormula>),
    And(Vec<ClassicalFormula>),
    Or(Vec<ClassicalFormula>),
    Imp(Box<ClassicalFormula>, Box<ClassicalFormula>),
}

impl ClassicalFormula {
    pub fn eval(&self, assignment: &Assignment) -> Result<bool, FormulaError> {
        Ok(match self {
            ClassicalFormula::Atom(a) => *assignment.get(a).ok_or_else(|| FormulaError::MissingAtom(a.clone()))?,
            ClassicalFormula::Not(x) => !x.eval(assignment)?,
            ClassicalFormula::And(xs) => {
                let mut v = true;
                for x in xs {
                    v &= x.eval(assignment)?;
                }
                v
            }
            ClassicalFormula::Or(xs) => {
                let mut v = false;
                for x in xs {
                    v |= x.eval(assignment)?;
                }
                v
            }
            ClassicalFormula::Imp(l, r) => !l.eval(assignment)? || r.eval(assignment)?,
        })
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            ClassicalFormula::Atom(a) => {
                out.insert(a.clone());
            }
            ClassicalFormula::Not(x) => x.collect_atoms(out),
            ClassicalFormula::And(xs) | ClassicalFormula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            ClassicalFormula::Imp(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Evaluates under all `2^k` assignments; atoms are enumerated in sorted
    /// name order with the last atom varying fastest.
    pub fn is_tautology(&self) -> bool {
        let atoms: Vec<Atom> = self.atoms().into_iter().collect();
        let k = atoms.len();
        (0u64..1u64 << k).all(|row| {
            let assignment: Assignment = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), (row >> (k - 1 - i)) & 1 == 1))
                .collect();
            self.eval(&assignment).expect("assignment covers every atom")
        })
    }
}

impl From<&Formula> for ClassicalFormula {
    fn from(f: &Formula) -> Self {
        match f {
            Formula::Atom(a) => ClassicalFormula::Atom(a.clone()),
            Formula::Imp(l, r) => ClassicalFormula::Imp(
                Box::new(ClassicalFormula::from(&**l)),
                Box::new(ClassicalFormula::from(&**r)),
            ),
        }
    }
}

impl fmt::Display for ClassicalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, xs: &[ClassicalFormula], op: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(op)?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        }
        match self {
            ClassicalFormula::Atom(a) => write!(f, "{a}"),
            ClassicalFormula::Not(x) => write!(f, "~{x}"),
            ClassicalFormula::And(xs) => join(f, xs, " & "),
            ClassicalFormula::Or(xs) => join(f, xs, " | "),
            ClassicalFormula::Imp(l, r) => write!(f, "({l} -> {r})"),
        }
    }
}

/// Multiset utilities over sorted or unsorted vectors.
pub(crate) mod multiset {
    /// Removes one copy of `x`; returns whether a copy existed.
    pub fn remove_one<T: PartialEq>(items: &mut Vec<T>, x: &T) -> bool {
        match items.iter().position(|y| y == x) {
            Some(i) => {
                items.remove(i);
                true
            }
            None => false,
        }
    }

    /// `big − small`, or `None` when `small` is not a sub-multiset of `big`.
    pub fn difference<T: PartialEq + Clone>(big: &[T], small: &[T]) -> Option<Vec<T>> {
        let mut rest = big.to_vec();
        for x in small {
            if !remove_one(&mut rest, x) {
                return None;
            }
        }
        Some(rest)
    }

    pub fn equal<T: Ord + Clone>(a: &[T], b: &[T]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort();
        b.sort();
        a == b
    }
}
