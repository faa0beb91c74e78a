//! Python bindings: formulas, sequents, proofs, the provers, the oracle and
//! the game judge.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use cltk_core::cl7::prove_sequent_via_abstraction;
use cltk_core::game::{is_legal_run, Player};
use cltk_core::serial::{game_from_json, one_sided_proof_to_json, proof_from_json, proof_to_json, run_from_json};
use cltk_core::{
    binary_anti_instance, check_proof, enumerate_formulas, int_prove, is_instance_of_binary_tautology, parse_formula,
    parse_sequent, prove_binary_guided, prove_exhaustive, to_one_sided, translate_proof, Atom, ProofTree, System,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn hash_of(x: &impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

fn system_of(name: &str) -> PyResult<System> {
    name.parse().map_err(PyValueError::new_err)
}

/// An implicational formula, e.g. `Formula("(P->Q)->P")`.
#[pyclass(frozen, from_py_object, module = "cltk")]
#[derive(Clone)]
struct Formula(cltk_core::Formula);

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_formula(text).map(Formula).map_err(value_error)
    }

    #[staticmethod]
    fn atom(name: &str) -> PyResult<Self> {
        Atom::new(name)
            .map(|a| Formula(cltk_core::Formula::Atom(a)))
            .map_err(value_error)
    }

    fn imp(&self, consequent: &Formula) -> Formula {
        Formula(cltk_core::Formula::imp(self.0.clone(), consequent.0.clone()))
    }

    fn head(&self) -> String {
        self.0.head().name().to_string()
    }

    fn atoms(&self) -> Vec<String> {
        self.0.atoms().iter().map(|a| a.name().to_string()).collect()
    }

    fn connectives(&self) -> usize {
        self.0.connectives()
    }

    fn is_binary(&self) -> bool {
        self.0.is_binary()
    }

    fn is_tautology(&self) -> bool {
        self.0.is_tautology()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &Formula) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.0)
    }
}

/// `Γ => F` with a multiset antecedent, e.g. `Sequent("P->Q, P => Q")`.
#[pyclass(frozen, from_py_object, module = "cltk")]
#[derive(Clone)]
struct Sequent(cltk_core::Sequent);

/// Sequent arguments accept either a `Sequent` or its text.
#[derive(FromPyObject)]
enum SequentArg {
    Parsed(Sequent),
    Text(String),
}

impl SequentArg {
    fn get(self) -> PyResult<cltk_core::Sequent> {
        match self {
            SequentArg::Parsed(s) => Ok(s.0),
            SequentArg::Text(t) => parse_sequent(&t).map_err(value_error),
        }
    }
}

#[pymethods]
impl Sequent {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_sequent(text).map(Sequent).map_err(value_error)
    }

    #[staticmethod]
    fn of(antecedent: Vec<Formula>, succedent: Formula) -> Sequent {
        Sequent(cltk_core::Sequent::new(
            antecedent.into_iter().map(|f| f.0),
            succedent.0,
        ))
    }

    #[getter]
    fn antecedent(&self) -> Vec<Formula> {
        self.0.antecedent().iter().cloned().map(Formula).collect()
    }

    #[getter]
    fn succedent(&self) -> Formula {
        Formula(self.0.succedent().clone())
    }

    fn is_binary(&self) -> bool {
        self.0.is_binary()
    }

    fn is_tautology(&self) -> bool {
        self.0.is_tautology()
    }

    fn relevant_indices(&self) -> Vec<usize> {
        self.0.relevant_indices()
    }

    fn restrict_to_relevant(&self) -> Sequent {
        Sequent(self.0.restrict_to_relevant())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Sequent({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &Sequent) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.0)
    }
}

/// A derivation in CL7 or Int.
#[pyclass(frozen, from_py_object, module = "cltk")]
#[derive(Clone)]
struct Proof(ProofTree);

#[pymethods]
impl Proof {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Proof> {
        proof_from_json(text).map(Proof).map_err(value_error)
    }

    fn to_json(&self) -> String {
        proof_to_json(&self.0)
    }

    #[getter]
    fn conclusion(&self) -> Sequent {
        Sequent(self.0.conclusion.clone())
    }

    #[getter]
    fn rule(&self) -> &'static str {
        self.0.rule.name()
    }

    #[getter]
    fn premises(&self) -> Vec<Proof> {
        self.0.premises.iter().cloned().map(Proof).collect()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    /// Rule violations under `system`; empty when the proof is correct.
    #[pyo3(signature = (system = "cl7"))]
    fn check(&self, system: &str) -> PyResult<Vec<String>> {
        let system = system_of(system)?;
        Ok(match check_proof(&self.0, system) {
            Ok(()) => Vec::new(),
            Err(vs) => vs.iter().map(ToString::to_string).collect(),
        })
    }

    /// The one-sided image of this CL7 proof, as a JSON document.
    fn translate(&self) -> PyResult<String> {
        translate_proof(&self.0)
            .map(|p| one_sided_proof_to_json(&p))
            .map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Proof({} by {})", self.0.conclusion, self.0.rule.name())
    }
}

/// A proof of `sequent`, or `None` when there is none. `engine` selects the
/// CL7 strategy: `exhaustive` (default), `abstraction` or `guided`.
#[pyfunction]
#[pyo3(signature = (sequent, system = "cl7", engine = None))]
fn prove(sequent: SequentArg, system: &str, engine: Option<&str>) -> PyResult<Option<Proof>> {
    let s = sequent.get()?;
    let proof = match (system_of(system)?, engine) {
        (System::Cl7, None | Some("exhaustive")) => prove_exhaustive(&s),
        (System::Cl7, Some("abstraction")) => prove_sequent_via_abstraction(&s),
        (System::Cl7, Some("guided")) => {
            if !s.is_binary() {
                return Err(PyValueError::new_err(format!("sequent `{s}` is not binary")));
            }
            prove_binary_guided(&s).ok()
        }
        (System::Int, None) => int_prove(&s),
        (_, Some(other)) => {
            return Err(PyValueError::new_err(format!(
                "engine {other:?} is not available for {system}"
            )))
        }
    };
    Ok(proof.map(Proof))
}

#[pyfunction]
fn int_provable(sequent: SequentArg) -> PyResult<bool> {
    Ok(cltk_core::int_provable(&sequent.get()?))
}

#[pyfunction]
#[pyo3(name = "is_instance_of_binary_tautology")]
fn instance_of_binary_tautology(h: &Formula) -> bool {
    is_instance_of_binary_tautology(&h.0)
}

/// A binary tautology `h'` and substitution `σ` with `h'σ = h`, if any.
#[pyfunction]
#[pyo3(name = "binary_anti_instance")]
fn anti_instance(h: &Formula) -> Option<(Formula, Vec<(String, Formula)>)> {
    binary_anti_instance(&h.0).map(|(template, sigma)| {
        let sigma = sigma
            .into_iter()
            .map(|(a, f)| (a.name().to_string(), Formula(f)))
            .collect();
        (Formula(template), sigma)
    })
}

/// The one-sided sequent of `sequent`, one NNF formula per entry.
#[pyfunction]
#[pyo3(name = "to_one_sided")]
fn one_sided(sequent: SequentArg) -> PyResult<Vec<String>> {
    Ok(to_one_sided(&sequent.get()?)
        .items()
        .iter()
        .map(ToString::to_string)
        .collect())
}

/// Every formula over `atoms` with at most `max_connectives` implications,
/// by size.
#[pyfunction]
#[pyo3(name = "enumerate_formulas")]
fn enumerate(atoms: Vec<String>, max_connectives: usize) -> PyResult<Vec<Formula>> {
    let atoms = atoms
        .iter()
        .map(|a| Atom::new(a))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_error)?;
    Ok(enumerate_formulas(&atoms, max_connectives).map(Formula).collect())
}

/// Winner of a run (both JSON documents) as `"T"` or `"B"`, and the index
/// and offender of the first illegal move, if any.
#[pyfunction]
fn judge(game: &str, run: &str) -> PyResult<(&'static str, Option<(usize, &'static str)>)> {
    let g = game_from_json(game).map_err(value_error)?;
    let r = run_from_json(run).map_err(value_error)?;
    Ok(match is_legal_run(&g, &r) {
        Ok(()) => (g.winner(&r).tag(), None),
        Err(illegal) => (
            illegal.offender.other().tag(),
            Some((illegal.index, illegal.offender.tag())),
        ),
    })
}

#[pymodule]
fn cltk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<Sequent>()?;
    m.add_class::<Proof>()?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(int_provable, m)?)?;
    m.add_function(wrap_pyfunction!(instance_of_binary_tautology, m)?)?;
    m.add_function(wrap_pyfunction!(anti_instance, m)?)?;
    m.add_function(wrap_pyfunction!(one_sided, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(judge, m)?)?;
    m.add("MACHINE", Player::Machine.tag())?;
    m.add("ENVIRONMENT", Player::Environment.tag())?;
    Ok(())
}
