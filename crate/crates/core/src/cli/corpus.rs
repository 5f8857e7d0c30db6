//! Golden corpus: spec files plus a manifest of commands and expected
//! record fields. The built-in copy is compiled into the binary.

use super::report::{Exit, Record, Report};
use super::run::{execute, FsLoader, Loader};
use super::spec::{emit_doc, parse_doc};
use super::Cli;
use crate::settings::Settings;
use clap::Parser;
use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const MANIFEST: &str = "golden.json";

/// The shipped corpus, by file name.
pub const BUILTIN: &[(&str, &str)] = &[
    (MANIFEST, include_str!("../../corpus/golden.json")),
    ("two_cycle_A.alg", include_str!("../../corpus/two_cycle_A.alg")),
    ("two_cycle_B.alg", include_str!("../../corpus/two_cycle_B.alg")),
    ("triangular_T.alg", include_str!("../../corpus/triangular_T.alg")),
    ("corollaries.alg", include_str!("../../corpus/corollaries.alg")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub cases: Vec<Case>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub id: String,
    /// Command line without the program name.
    pub args: Vec<String>,
    pub exit: i32,
    #[serde(default)]
    pub expect: Vec<Expectation>,
}

/// `value` at JSON pointer `pointer` in the `index`-th record of `kind`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub kind: String,
    #[serde(default)]
    pub index: usize,
    pub pointer: String,
    pub value: Value,
}

struct MapLoader(BTreeMap<String, String>);

impl Loader for MapLoader {
    fn load(&self, path: &Path) -> Result<String, String> {
        let key = path.to_string_lossy();
        self.0.get(key.as_ref()).cloned().ok_or_else(|| format!("{}: not in the corpus", key))
    }
}

struct DirLoader(PathBuf);

impl Loader for DirLoader {
    fn load(&self, path: &Path) -> Result<String, String> {
        FsLoader.load(&self.0.join(path))
    }
}

fn builtin() -> BTreeMap<String, String> {
    BUILTIN.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn read_dir(dir: &Path) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|e| format!("{}: {}", dir.display(), e))?;
    for e in entries {
        let p = e.map_err(|e| e.to_string())?.path();
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if name == MANIFEST || name.ends_with(".alg") {
            out.insert(name, FsLoader.load(&p)?);
        }
    }
    Ok(out)
}

/// Checks one case against a finished report; returns the mismatches.
pub fn check_case(case: &Case, report: &Report) -> Vec<String> {
    let mut bad = Vec::new();
    if report.exit.code() != case.exit {
        bad.push(format!("exit {} (expected {})", report.exit.code(), case.exit));
    }
    let values: Vec<Value> = report.records.iter().map(Record::to_value).collect();
    for x in &case.expect {
        let found = values.iter().filter(|v| v.get("kind").and_then(Value::as_str) == Some(&x.kind)).nth(x.index);
        match found.map(|v| v.pointer(&x.pointer)) {
            None => bad.push(format!("no {} record #{}", x.kind, x.index)),
            Some(None) => bad.push(format!("{}#{}: nothing at {}", x.kind, x.index, x.pointer)),
            Some(Some(v)) if *v != x.value => bad.push(format!("{}#{}{}: {} (expected {})", x.kind, x.index, x.pointer, v, x.value)),
            _ => {}
        }
    }
    bad
}

/// Runs every case, in manifest order, plus a round-trip check of every
/// spec file. Any mismatch makes the exit code negative.
pub fn run_corpus(dir: Option<&Path>, s: Settings) -> Report {
    let files = match dir {
        None => Ok(builtin()),
        Some(d) => read_dir(d),
    };
    let inputs: Vec<&[u8]> = match &files {
        Ok(f) => f.values().map(|v| v.as_bytes()).collect(),
        Err(_) => Vec::new(),
    };
    let mut report = Report::new("corpus", s, &inputs);
    let files = match files {
        Ok(f) => f,
        Err(message) => {
            report.push(Record::Error { file: dir.map(|d| d.display().to_string()).unwrap_or_default(), exit: Exit::Input.code(), message }, Exit::Input);
            return report;
        }
    };
    let manifest: Manifest = match files.get(MANIFEST).ok_or_else(|| format!("{} missing", MANIFEST)).and_then(|m| serde_json::from_str(m).map_err(|e| e.to_string())) {
        Ok(m) => m,
        Err(message) => {
            report.push(Record::Error { file: MANIFEST.into(), exit: Exit::Input.code(), message }, Exit::Input);
            return report;
        }
    };
    let loader: Box<dyn Loader> = match dir {
        None => Box::new(MapLoader(files.clone())),
        Some(d) => Box::new(DirLoader(d.to_path_buf())),
    };
    let (mut passed, mut failed) = (0, 0);
    let mut tally = |report: &mut Report, id: String, exit: i32, expected_exit: i32, mismatches: Vec<String>| {
        let ok = mismatches.is_empty();
        if ok {
            passed += 1;
        } else {
            failed += 1;
        }
        report.push(Record::Case { id, passed: ok, exit, expected_exit, mismatches }, if ok { Exit::Ok } else { Exit::Negative });
    };
    for (name, src) in files.iter().filter(|(n, _)| n.ends_with(".alg")) {
        let bad = match parse_doc(src) {
            Ok(d) => match parse_doc(&emit_doc(&d)) {
                Ok(back) if back == d => Vec::new(),
                Ok(_) => vec!["document changed after emit and parse".to_string()],
                Err(e) => vec![e.to_string()],
            },
            Err(e) => vec![e.to_string()],
        };
        tally(&mut report, format!("round-trip {}", name), 0, 0, bad);
    }
    for case in &manifest.cases {
        let argv = std::iter::once("endok".to_string()).chain(case.args.iter().cloned());
        let (exit, bad) = match Cli::try_parse_from(argv) {
            Ok(cli) if matches!(cli.command, super::Command::Corpus { .. }) => (Exit::Input.code(), vec!["corpus cases cannot run the corpus".to_string()]),
            Ok(cli) => {
                let r = execute(&cli.command, cli.global.settings(), loader.as_ref());
                (r.exit.code(), check_case(case, &r))
            }
            Err(e) => (Exit::Input.code(), vec![e.to_string()]),
        };
        tally(&mut report, case.id.clone(), exit, case.exit, bad);
    }
    report.push(Record::Summary { cases: passed + failed, passed, failed }, Exit::Ok);
    report
}
