//! The `cltk` command line.
//!
//! Exit status: 0 for provable / valid / won by the machine, 1 for
//! unprovable / invalid / lost by the machine, 2 for input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cl7::{
    check_proof, prove_binary_guided, prove_exhaustive, prove_sequent_via_abstraction, GuidedError, System,
};
use crate::formula::{Atom, Sequent};
use crate::game::{is_legal_run, Player};
use crate::int::{int_provable, int_prove};
use crate::onesided::{check_one_sided, to_one_sided, translate_proof};
use crate::oracle::{
    binary_anti_instance, enumerate_binary_tautologies, enumerate_formulas, is_instance_of_binary_tautology,
};
use crate::serial::{game_from_json, one_sided_proof_to_json, proof_from_json, proof_to_json, run_from_json};
use crate::syntax::{parse_formula, parse_sequent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser)]
#[command(
    name = "cltk",
    version,
    about = "Provers, oracle and game judge for CL7 and implicational intuitionistic logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Cl7,
    Int,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Exhaustive,
    Guided,
    Abstraction,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a proof and print it as JSON.
    Prove {
        #[arg(long, value_enum)]
        system: SystemArg,
        /// CL7 engine (default: exhaustive). The int system has a single engine.
        #[arg(long, value_enum)]
        engine: Option<Engine>,
        sequent: String,
    },
    /// Check a JSON proof document.
    CheckProof {
        #[arg(long, value_enum)]
        system: SystemArg,
        file: PathBuf,
    },
    /// Decide whether a formula is an instance of a binary tautology.
    InstanceCheck { formula: String },
    /// Print the one-sided form of a sequent, and translate a proof of it.
    Translate {
        sequent: String,
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// List formulas in size-major order.
    Enumerate {
        #[arg(long)]
        atoms: usize,
        #[arg(long = "max-conn")]
        max_conn: usize,
        #[arg(long)]
        binary_tautologies: bool,
    },
    /// Adjudicate a finite run of a game.
    Judge {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        run: PathBuf,
    },
    /// Cross-check exhaustive search, the binary-tautology oracle and the
    /// guided prover on every formula over P, Q.
    Selftest {
        #[arg(long = "max-conn")]
        max_conn: usize,
    },
}

/// Atom names used by `enumerate`: P, Q, R, S, T, U, V, W, X, Y, then P10, P11, ...
pub fn atom_names(k: usize) -> Vec<Atom> {
    const BASE: [&str; 10] = ["P", "Q", "R", "S", "T", "U", "V", "W", "X", "Y"];
    (0..k)
        .map(|i| {
            let name = BASE.get(i).map_or_else(|| format!("P{i}"), |s| s.to_string());
            Atom::new(&name).expect("generated atom names are valid")
        })
        .collect()
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Outcome = Result<i32, String>;

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    let outcome = dispatch(cli.command, &mut io);
    match outcome {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(io.err, "error: {message}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Prove {
            system,
            engine,
            sequent,
        } => prove(system, engine, &sequent, io),
        Command::CheckProof { system, file } => check(system, &file, io),
        Command::InstanceCheck { formula } => instance_check(&formula, io),
        Command::Translate { sequent, proof } => translate(&sequent, proof.as_deref(), io),
        Command::Enumerate {
            atoms,
            max_conn,
            binary_tautologies,
        } => enumerate(atoms, max_conn, binary_tautologies, io),
        Command::Judge { game, run } => judge(&game, &run, io),
        Command::Selftest { max_conn } => selftest(max_conn, io),
    }
}

fn system_of(s: SystemArg) -> System {
    match s {
        SystemArg::Cl7 => System::Cl7,
        SystemArg::Int => System::Int,
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn sequent_arg(text: &str) -> Result<Sequent, String> {
    parse_sequent(text).map_err(|e| format!("sequent: {e}"))
}

fn emit(io: &mut Io, text: &str) -> Result<(), String> {
    io.out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn prove(system: SystemArg, engine: Option<Engine>, text: &str, io: &mut Io) -> Outcome {
    let s = sequent_arg(text)?;
    let proof = match (system, engine) {
        (SystemArg::Int, Some(_)) => return Err("--engine applies to cl7 only; int has a single search".into()),
        (SystemArg::Int, None) => int_prove(&s),
        (SystemArg::Cl7, None | Some(Engine::Exhaustive)) => prove_exhaustive(&s),
        (SystemArg::Cl7, Some(Engine::Abstraction)) => prove_sequent_via_abstraction(&s),
        (SystemArg::Cl7, Some(Engine::Guided)) => match prove_binary_guided(&s) {
            Ok(t) => Some(t),
            Err(GuidedError::NotTautological(_)) => None,
            Err(e @ GuidedError::NotBinary(_)) => return Err(e.to_string()),
            Err(e) => panic!("guided construction failed on a binary tautology: {e}"),
        },
    };
    match proof {
        Some(t) => {
            emit(io, &proof_to_json(&t))?;
            Ok(EXIT_OK)
        }
        None => {
            emit(io, &format!("unprovable: {s}\n"))?;
            Ok(EXIT_NO)
        }
    }
}

fn check(system: SystemArg, file: &Path, io: &mut Io) -> Outcome {
    let t = proof_from_json(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?;
    match check_proof(&t, system_of(system)) {
        Ok(()) => {
            emit(io, &format!("ok: {}\n", t.conclusion))?;
            Ok(EXIT_OK)
        }
        Err(violations) => {
            for v in violations {
                emit(io, &format!("violation {v}\n"))?;
            }
            Ok(EXIT_NO)
        }
    }
}

fn instance_check(text: &str, io: &mut Io) -> Outcome {
    let h = parse_formula(text).map_err(|e| format!("formula: {e}"))?;
    match binary_anti_instance(&h) {
        Some((template, subst)) => {
            let mapping: Vec<String> = subst.iter().map(|(a, f)| format!("{a} := {f}")).collect();
            emit(
                io,
                &format!("instance of {template} under {{{}}}\n", mapping.join(", ")),
            )?;
            Ok(EXIT_OK)
        }
        None => {
            emit(io, &format!("not an instance of a binary tautology: {h}\n"))?;
            Ok(EXIT_NO)
        }
    }
}

fn translate(text: &str, proof: Option<&Path>, io: &mut Io) -> Outcome {
    let s = sequent_arg(text)?;
    let Some(file) = proof else {
        emit(io, &format!("{}\n", to_one_sided(&s)))?;
        return Ok(EXIT_OK);
    };
    let t = proof_from_json(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?;
    if t.conclusion != s {
        return Err(format!("proof concludes `{}`, not `{s}`", t.conclusion));
    }
    if let Err(violations) = check_proof(&t, System::Cl7) {
        let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(format!("not a CL7 proof: {}", listed.join("; ")));
    }
    let p = translate_proof(&t).map_err(|e| e.to_string())?;
    debug_assert!(check_one_sided(&p).is_ok());
    emit(io, &one_sided_proof_to_json(&p))?;
    Ok(EXIT_OK)
}

fn enumerate(atoms: usize, max_conn: usize, binary_tautologies: bool, io: &mut Io) -> Outcome {
    if atoms == 0 {
        return Err("--atoms must be at least 1".into());
    }
    let names = atom_names(atoms);
    let stream: Box<dyn Iterator<Item = _>> = if binary_tautologies {
        Box::new(enumerate_binary_tautologies(&names, max_conn))
    } else {
        Box::new(enumerate_formulas(&names, max_conn))
    };
    let mut buf = String::new();
    for f in stream {
        buf.push_str(&f.to_string());
        buf.push('\n');
        if buf.len() > 1 << 16 {
            emit(io, &buf)?;
            buf.clear();
        }
    }
    emit(io, &buf)?;
    Ok(EXIT_OK)
}

fn judge(game: &Path, run: &Path, io: &mut Io) -> Outcome {
    let g = game_from_json(&read(game)?).map_err(|e| format!("{}: {e}", game.display()))?;
    let r = run_from_json(&read(run)?).map_err(|e| format!("{}: {e}", run.display()))?;
    let winner = match is_legal_run(&g, &r) {
        Ok(()) => {
            let w = g.winner(&r);
            emit(io, &format!("{w}\n"))?;
            w
        }
        Err(illegal) => {
            let w = illegal.offender.other();
            emit(
                io,
                &format!("{w}\nillegal move at index {} by {}\n", illegal.index, illegal.offender),
            )?;
            w
        }
    };
    Ok(if winner == Player::Machine { EXIT_OK } else { EXIT_NO })
}

fn selftest(max_conn: usize, io: &mut Io) -> Outcome {
    let mut total = 0usize;
    let mut provable = 0usize;
    let mut disagreements = 0usize;
    let mut int_only = 0usize;
    for h in enumerate_formulas(&atom_names(2), max_conn) {
        total += 1;
        let s = Sequent::of_formula(h.clone());
        let exhaustive = prove_exhaustive(&s);
        let oracle = is_instance_of_binary_tautology(&h);
        let via_template = prove_sequent_via_abstraction(&s);
        let checked = |t: &Option<_>| t.as_ref().is_none_or(|t| check_proof(t, System::Cl7).is_ok());
        let agree = exhaustive.is_some() == oracle
            && via_template.is_some() == oracle
            && checked(&exhaustive)
            && checked(&via_template);
        if !agree {
            disagreements += 1;
            emit(
                io,
                &format!(
                    "disagreement on {h}: exhaustive={} oracle={oracle} abstraction={}\n",
                    exhaustive.is_some(),
                    via_template.is_some()
                ),
            )?;
        }
        if oracle {
            provable += 1;
        } else if int_provable(&s) {
            int_only += 1;
        }
    }
    emit(
        io,
        &format!(
            "{total} formulas over P, Q with at most {max_conn} connectives: {provable} CL7-provable, \
             {int_only} provable only with contraction, {disagreements} disagreements\n"
        ),
    )?;
    let _ = io.err.flush();
    Ok(if disagreements == 0 { EXIT_OK } else { EXIT_NO })
}
