//! Report records and their two renderings.
//!
//! The machine format is JSON Lines: a header, one line per record, and a
//! closing line with the exit code. It carries no timings, so equal inputs
//! and seeds give byte-identical output. The human format is rendered from
//! the same JSON values, so both always show the same verdict fields.

use crate::endo::CovarianceReport;
use crate::homalg::TorProfile;
use crate::ktheory::{DecompositionVerdict, K0Report};
use crate::settings::Settings;
use crate::strat::StratChain;
use crate::verdict::Verdict;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::time::Duration;

pub const REPORT_SCHEMA: &str = "endok-report/1";
pub const TOOL: &str = "endok";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exit {
    Ok = 0,
    /// A check came out negative.
    Negative = 1,
    /// Malformed or inconsistent input.
    Input = 2,
    /// A budget ran out or a verdict stayed undecided.
    Undecided = 3,
    /// Certified hypotheses with a failing equation, or disagreeing
    /// independent computations.
    Tripwire = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn severity(self) -> u8 {
        match self {
            Exit::Ok => 0,
            Exit::Negative => 1,
            Exit::Undecided => 2,
            Exit::Input => 3,
            Exit::Tripwire => 4,
        }
    }

    /// The more severe of two outcomes.
    pub fn worst(self, o: Exit) -> Exit {
        if o.severity() > self.severity() {
            o
        } else {
            self
        }
    }

    pub fn from_code(c: i32) -> Option<Exit> {
        [Exit::Ok, Exit::Negative, Exit::Input, Exit::Undecided, Exit::Tripwire].into_iter().find(|e| e.code() == c)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSummary {
    pub dim: usize,
    pub field: String,
    pub provenance: String,
    pub radical_dim: Option<usize>,
    pub commutative: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleSummary {
    pub dim: usize,
    pub radical_series: Option<Vec<usize>>,
    pub projective: Verdict,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Algebra {
        file: String,
        name: String,
        #[serde(flatten)]
        summary: AlgebraSummary,
    },
    Module {
        file: String,
        name: String,
        #[serde(flatten)]
        summary: ModuleSummary,
    },
    K0 {
        file: String,
        algebra: String,
        #[serde(flatten)]
        report: K0Report,
    },
    Ideal {
        file: String,
        algebra: String,
        ideal: String,
        dim: usize,
        properties: Vec<(String, Verdict)>,
        ranks: Vec<(String, usize)>,
    },
    Decomposition {
        file: String,
        target: String,
        equation: String,
        #[serde(flatten)]
        verdict: DecompositionVerdict,
    },
    Covariance {
        file: String,
        map: String,
        property: String,
        holds: bool,
        #[serde(flatten)]
        report: CovarianceReport,
    },
    Tor {
        file: String,
        left: String,
        right: String,
        #[serde(flatten)]
        profile: TorProfile,
    },
    Stratification {
        file: String,
        algebra: String,
        quasi_hereditary: Verdict,
        explored: usize,
        chain: Option<StratChain>,
    },
    Construct {
        file: String,
        algebra: String,
        document: Value,
    },
    Case {
        id: String,
        passed: bool,
        exit: i32,
        expected_exit: i32,
        mismatches: Vec<String>,
    },
    Summary {
        cases: usize,
        passed: usize,
        failed: usize,
    },
    Error {
        file: String,
        exit: i32,
        message: String,
    },
}

impl Record {
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("records serialize")
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub settings: Settings,
    pub input_digest: String,
    pub records: Vec<Record>,
    pub exit: Exit,
    /// Shown in the human format only.
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: &str, settings: Settings, inputs: &[&[u8]]) -> Report {
        Report { command: command.into(), settings, input_digest: digest(inputs), records: Vec::new(), exit: Exit::Ok, elapsed: Duration::ZERO }
    }

    pub fn push(&mut self, r: Record, outcome: Exit) {
        self.exit = self.exit.worst(outcome);
        self.records.push(r);
    }
}

/// SHA-256 over length-prefixed inputs.
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i);
    }
    let out = h.finalize();
    let mut s = String::from("sha256:");
    for b in out {
        let _ = write!(s, "{:02x}", b);
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => emit_machine(report),
        Format::Human => emit_human(report),
    }
}

fn header(report: &Report) -> Value {
    serde_json::json!({
        "schema": REPORT_SCHEMA,
        "tool": TOOL,
        "version": VERSION,
        "command": report.command,
        "seed": report.settings.seed,
        "settings": report.settings,
        "input_digest": report.input_digest,
    })
}

pub fn emit_machine(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&header(report).to_string());
    out.push('\n');
    for r in &report.records {
        out.push_str(&r.to_value().to_string());
        out.push('\n');
    }
    let end = serde_json::json!({"kind": "end", "records": report.records.len(), "exit": report.exit.code()});
    out.push_str(&end.to_string());
    out.push('\n');
    out
}

fn is_verdict(v: &Value) -> Option<String> {
    let o = v.as_object()?;
    if o.len() != 2 {
        return None;
    }
    let status = o.get("status")?.as_str()?;
    let detail = o.get("detail")?.as_str()?;
    Some(format!("{} ({})", status.to_lowercase(), detail))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => is_verdict(v),
    }
}

/// Arrays of scalars fit on one line.
fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let a = v.as_array()?;
    let parts = a.iter().map(|x| inline(x).filter(|_| !x.is_object())).collect::<Option<Vec<_>>>()?;
    let s = format!("[{}]", parts.join(", "));
    (s.len() <= 100).then_some(s)
}

fn render(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    if let Some(s) = inline(v) {
        let _ = writeln!(out, "{}{:<18} {}", pad, key, s);
        return;
    }
    match v {
        Value::Object(o) => {
            let _ = writeln!(out, "{}{}", pad, key);
            for (k, x) in o {
                render(out, k, x, indent + 2);
            }
        }
        Value::Array(a) => {
            let _ = writeln!(out, "{}{}", pad, key);
            for x in a {
                // (name, value) pairs read as "name: value"
                if let Some([Value::String(n), y]) = x.as_array().map(|p| p.as_slice()) {
                    render(out, &format!("{}:", n), y, indent + 2);
                } else {
                    render(out, "-", x, indent + 2);
                }
            }
        }
        _ => unreachable!("scalars are inline"),
    }
}

pub fn emit_human(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}  command: {}  seed: {}", TOOL, VERSION, report.command, report.settings.seed);
    let _ = writeln!(out, "input {}", report.input_digest);
    for r in &report.records {
        let v = r.to_value();
        let o = v.as_object().expect("records are objects");
        let kind = o.get("kind").and_then(Value::as_str).unwrap_or("?");
        let _ = writeln!(out, "\n== {}", kind);
        for (k, x) in o {
            if k != "kind" {
                render(&mut out, k, x, 2);
            }
        }
    }
    let _ = writeln!(out, "\nexit {} ({:?}), {} records, {:.1} ms", report.exit.code(), report.exit, report.records.len(), report.elapsed.as_secs_f64() * 1e3);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new("k0", Settings::default(), &[b"x"]);
        let m = emit_machine(&r);
        let lines: Vec<&str> = m.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains(REPORT_SCHEMA));
        assert!(!m.contains("elapsed"));
        assert!(emit_human(&r).contains("0 records"));
    }

    #[test]
    fn exit_priority() {
        assert_eq!(Exit::Ok.worst(Exit::Negative), Exit::Negative);
        assert_eq!(Exit::Undecided.worst(Exit::Negative), Exit::Undecided);
        assert_eq!(Exit::Input.worst(Exit::Tripwire), Exit::Tripwire);
        assert_eq!(Exit::from_code(3), Some(Exit::Undecided));
    }

    #[test]
    fn digests_differ() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
    }
}
