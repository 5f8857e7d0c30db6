use endok::cli::corpus::{run_corpus, BUILTIN};
use endok::cli::report::{emit_human, emit_machine};
use endok::cli::{emit_doc, parse_doc, parse_spec, SpecError};
use endok::Settings;
use std::path::PathBuf;
use std::process::Command;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn endok(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_endok")).args(args).current_dir(corpus_dir()).env_remove("ENDOK_SEED").output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn builtin_corpus_matches_the_files() {
    for (name, text) in BUILTIN {
        let disk = std::fs::read_to_string(corpus_dir().join(name)).unwrap();
        assert_eq!(&disk, text, "{} is stale", name);
    }
}

#[test]
fn minimal_and_shipped_specs_parse() {
    let k = parse_spec(r#"{"format": "endok-spec/1", "algebras": {"k": {"family": {"ground": {}}}}}"#).unwrap();
    assert_eq!(k.algebras["k"].dim(), 1);
    let a = parse_spec(&std::fs::read_to_string(corpus_dir().join("two_cycle_A.alg")).unwrap()).unwrap();
    assert_eq!(a.algebras["A"].dim(), 5);
}

#[test]
fn decimal_literal_is_rejected() {
    let src = std::fs::read_to_string(corpus_dir().join("triangular_T.alg")).unwrap().replace(r#"{"e11": "1"}"#, r#"{"e11": "0.5"}"#);
    let e = parse_spec(&src).unwrap_err();
    assert!(matches!(e.0[0], SpecError::NonRationalLiteral { line: 9, .. }), "{}", e);
}

#[test]
fn round_trip_on_every_corpus_file() {
    for (name, text) in BUILTIN.iter().filter(|(n, _)| n.ends_with(".alg")) {
        let d = parse_doc(text).unwrap();
        let again = emit_doc(&d);
        assert_eq!(parse_doc(&again).unwrap(), d, "{}", name);
        // emitting is canonical
        assert_eq!(emit_doc(&parse_doc(&again).unwrap()), again);
    }
}

#[test]
fn machine_reports_are_byte_identical() {
    let a = emit_machine(&run_corpus(None, Settings::default()));
    let b = emit_machine(&run_corpus(None, Settings::default()));
    assert_eq!(a, b);
    let (c, code) = endok(&["--format", "machine", "corpus"]);
    assert_eq!(code, 0);
    assert_eq!(a, c);
}

#[test]
fn both_renderings_carry_the_same_verdicts() {
    let r = run_corpus(None, Settings::default());
    let human = emit_human(&r);
    let machine = emit_machine(&r);
    assert!(machine.contains(r#""cases":31,"passed":31,"failed":0"#), "{}", machine);
    for line in machine.lines().skip(1) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if let Some(id) = v.get("id").and_then(|x| x.as_str()) {
            assert!(human.contains(id));
        }
    }
    let (h, _) = endok(&["verify", "--thm", "ideal-split-projective", "--e", "e1", "two_cycle_A.alg"]);
    let (m, _) = endok(&["--format", "machine", "verify", "--thm", "ideal-split-projective", "--e", "e1", "two_cycle_A.alg"]);
    for needle in ["HypothesisFailsFormulaFails", "2 ≠ 1 + 2", "_R I projective"] {
        assert!(h.contains(needle) && m.contains(needle), "{}", needle);
    }
}

#[test]
fn exit_code_contract() {
    assert_eq!(endok(&["k0", "triangular_T.alg"]).1, 0);
    assert_eq!(endok(&["verify", "--thm", "ideal-split-projective", "--e", "e1", "two_cycle_A.alg"]).1, 1);
    assert_eq!(endok(&["k0", "no-such-file.alg"]).1, 2);
    assert_eq!(endok(&["verify", "--thm", "no-such-statement", "triangular_T.alg"]).1, 2);
    assert_eq!(endok(&["stratify", "--search-budget", "1", "two_cycle_B.alg"]).1, 3);
    assert_eq!(endok(&["frobnicate"]).1, 2);
}

#[test]
fn k0_of_triangular_ring() {
    let (out, code) = endok(&["--format", "machine", "k0", "triangular_T.alg"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""rank":2"#));
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_endok")).args(["--format", "machine", "k0", "triangular_T.alg"]).current_dir(corpus_dir()).env("ENDOK_SEED", "11").output().unwrap();
    let out = String::from_utf8(out.stdout).unwrap();
    assert!(out.lines().next().unwrap().contains(r#""seed":11"#));
}
