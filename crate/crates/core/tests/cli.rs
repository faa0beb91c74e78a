//! The `cltk` binary, end to end through files.

use std::path::Path;
use std::process::{Command, Output};

use cltk::serial::{one_sided_proof_from_json, proof_from_json};
use cltk::{check_one_sided, parse_sequent, to_one_sided};

fn cltk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cltk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &[u8]) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn prove_then_translate() {
    let dir = tempfile::tempdir().unwrap();
    let sequent = "P->Q, Q->R, P => R";
    let proved = cltk(&["prove", "--system", "cl7", sequent]);
    assert_eq!(proved.status.code(), Some(0));
    let proof = write(dir.path(), "proof.json", &proved.stdout);
    assert_eq!(
        proof_from_json(std::str::from_utf8(&proved.stdout).unwrap())
            .unwrap()
            .conclusion,
        parse_sequent(sequent).unwrap()
    );

    let translated = cltk(&["translate", sequent, "--proof", &proof]);
    assert_eq!(translated.status.code(), Some(0));
    let one_sided = one_sided_proof_from_json(std::str::from_utf8(&translated.stdout).unwrap()).unwrap();
    assert_eq!(check_one_sided(&one_sided), Ok(()));
    assert_eq!(one_sided.conclusion, to_one_sided(&parse_sequent(sequent).unwrap()));

    // A proof of a different sequent is an input error.
    let mismatch = cltk(&["translate", "P => P", "--proof", &proof]);
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(!mismatch.stderr.is_empty());
}

#[test]
fn judge_reduction_runs() {
    let dir = tempfile::tempdir().unwrap();
    // Oracle question answered by consulting one copy of the resource.
    let tree = r#"{"winner":"T","edges":[{"player":"B","move":"q","next":{"winner":"B","edges":[
        {"player":"T","move":"yes","next":{"winner":"T"}},{"player":"T","move":"no","next":{"winner":"B"}}]}}]}"#;
    let game = format!(
        r#"{{"format":"cl-toolkit/1","game":{{"op":"reduce_b","args":[{{"op":"atomic","tree":{tree}}},{{"op":"atomic","tree":{tree}}}]}}}}"#
    );
    let game = write(dir.path(), "game.json", game.as_bytes());
    let cases = [
        (r#"[]"#, Some(0), "T\n"),
        (r#"[{"player":"B","move":"1.q"}]"#, Some(1), "B\n"),
        (
            r#"[{"player":"B","move":"1.q"},{"player":"T","move":"0..q"},{"player":"B","move":"0..yes"},{"player":"T","move":"1.yes"}]"#,
            Some(0),
            "T\n",
        ),
        (
            r#"[{"player":"B","move":"1.q"},{"player":"T","move":"0..q"},{"player":"B","move":"0..yes"},{"player":"T","move":"1.no"}]"#,
            Some(1),
            "B\n",
        ),
        (r#"[{"player":"T","move":"0.:"}]"#, Some(0), "T\n"),
        (
            r#"[{"player":"B","move":"0.:"}]"#,
            Some(0),
            "T\nillegal move at index 0 by B\n",
        ),
    ];
    for (i, (run, code, stdout)) in cases.iter().enumerate() {
        let run_file = write(dir.path(), &format!("run{i}.json"), run.as_bytes());
        let judged = cltk(&["judge", "--game", &game, "--run", &run_file]);
        assert_eq!(judged.status.code(), *code, "run {run}");
        assert_eq!(std::str::from_utf8(&judged.stdout).unwrap(), *stdout, "run {run}");
    }
}

#[test]
fn malformed_documents_name_the_offending_field() {
    let dir = tempfile::tempdir().unwrap();
    let proof = write(
        dir.path(),
        "bad.json",
        br#"{"format":"cl-toolkit/1","sequent":"P => P","rule":"axiom","premises":[],"extra":1}"#,
    );
    let checked = cltk(&["check-proof", "--system", "cl7", &proof]);
    assert_eq!(checked.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&checked.stderr).contains("extra"));
}
