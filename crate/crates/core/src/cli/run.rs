//! Dispatch of parsed commands to the library.

use super::report::{AlgebraSummary, Exit, ModuleSummary, Record, Report};
use super::spec::{parse_spec, table_doc, Spec};
use super::{Command, IdealSel, Property, Target};
use crate::algebra::{ideal_generated, opposite, radical, AlgError, Elem};
use crate::endo::{check_covariance, EndoError};
use crate::exactla::Q;
use crate::homalg::{is_homological_ideal, is_stratifying, tor, HomalgError};
use crate::ktheory::{
    k0, pd_verdict, rank_end, rank_of, verify_corollary, verify_ideal, verify_map, Classification, CorollaryInstance, DecompositionVerdict, IdealInput, IdealStatement, KtError,
    MapStatement,
};
use crate::modules::{is_projective, resolution, right_regular, AlgRef, CoverMode, ModError, Module};
use crate::settings::Settings;
use crate::strat::{find_stratification, is_quasi_hereditary, k0_stratified_decomposition, StratError};
use crate::verdict::Verdict;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

/// Where spec files come from.
pub trait Loader {
    fn load(&self, path: &Path) -> Result<String, String>;
}

pub struct FsLoader;

impl Loader for FsLoader {
    fn load(&self, path: &Path) -> Result<String, String> {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))
    }
}

/// A failed step and the exit code it maps to.
#[derive(Debug)]
pub struct Fail(pub Exit, pub String);

impl From<String> for Fail {
    fn from(s: String) -> Fail {
        Fail(Exit::Input, s)
    }
}

fn alg_exit(e: &AlgError) -> Exit {
    match e {
        AlgError::RandomizedSearchExhausted(_) => Exit::Undecided,
        _ => Exit::Input,
    }
}

impl From<AlgError> for Fail {
    fn from(e: AlgError) -> Fail {
        Fail(alg_exit(&e), e.to_string())
    }
}

impl From<ModError> for Fail {
    fn from(e: ModError) -> Fail {
        match e {
            ModError::Alg(a) => a.into(),
            e => Fail(Exit::Input, e.to_string()),
        }
    }
}

impl From<HomalgError> for Fail {
    fn from(e: HomalgError) -> Fail {
        match e {
            HomalgError::BoundExceeded(_) => Fail(Exit::Undecided, e.to_string()),
            HomalgError::Module(m) => m.into(),
            HomalgError::Alg(a) => a.into(),
            e => Fail(Exit::Input, e.to_string()),
        }
    }
}

impl From<EndoError> for Fail {
    fn from(e: EndoError) -> Fail {
        match e {
            EndoError::HypothesisNotEstablished(_) => Fail(Exit::Undecided, e.to_string()),
            EndoError::Module(m) => m.into(),
            EndoError::Alg(a) => a.into(),
            EndoError::Homalg(h) => h.into(),
            e => Fail(Exit::Input, e.to_string()),
        }
    }
}

impl From<KtError> for Fail {
    fn from(e: KtError) -> Fail {
        match e {
            KtError::Tripwire(_) | KtError::CrossCheck(_) => Fail(Exit::Tripwire, e.to_string()),
            KtError::BadInput(_) => Fail(Exit::Input, e.to_string()),
            KtError::Alg(a) => a.into(),
            KtError::Module(m) => m.into(),
            KtError::Endo(x) => x.into(),
            KtError::Homalg(h) => h.into(),
        }
    }
}

impl From<StratError> for Fail {
    fn from(e: StratError) -> Fail {
        match e {
            StratError::BudgetExhausted { .. } => Fail(Exit::Undecided, e.to_string()),
            StratError::InvalidChain(_) => Fail(Exit::Tripwire, e.to_string()),
            StratError::Alg(a) => a.into(),
            StratError::Module(m) => m.into(),
            StratError::Endo(x) => x.into(),
            StratError::Kt(k) => k.into(),
        }
    }
}

type R<T> = Result<T, Fail>;

/// Parses `e1 + 1/2*e2 - alpha*beta` in the basis of `a`. A leading factor
/// that reads as a rational is a coefficient; the rest is a basis label.
pub fn parse_elem_expr(a: &crate::algebra::Algebra, s: &str) -> Result<Elem, String> {
    let f = a.field();
    let mut v = a.zero();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        match ch {
            '+' | '-' if !cur.trim().is_empty() => {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            }
            '+' => {}
            '-' => neg = !neg,
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur));
    }
    if terms.is_empty() {
        return Err(format!("empty element expression {:?}", s));
    }
    for (neg, t) in terms {
        let t = t.trim();
        let (c, label) = match t.split_once('*') {
            Some((c, rest)) if c.trim().parse::<Q>().is_ok() => (c.trim().parse::<Q>().expect("checked"), rest.trim()),
            _ => (Q::one(), t),
        };
        let i = a.labels().iter().position(|l| l == label).ok_or_else(|| format!("unknown basis label {:?} in {:?}", label, s))?;
        let c = f.embed(&c).map_err(|e| e.to_string())?;
        let c = if neg { f.neg(&c) } else { c };
        v[i] = f.add(&v[i], &c);
    }
    Ok(v)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| p.display().to_string())
}

/// Algebras a command acts on: the named one, else the document's main
/// algebra, else all of them.
fn select(spec: &Spec, t: &Target) -> R<Vec<(String, AlgRef)>> {
    let pick = |n: &str| spec.algebras.get(n).cloned().ok_or_else(|| Fail(Exit::Input, format!("no algebra named {:?}", n)));
    let chosen = match (&t.algebra, &spec.doc.main) {
        (Some(n), _) | (None, Some(n)) => vec![(n.clone(), pick(n)?)],
        (None, None) => spec.algebras.iter().map(|(n, a)| (n.clone(), a.clone())).collect(),
    };
    Ok(chosen
        .into_iter()
        .map(|(n, a)| if t.opposite { (format!("{}^op", n), Arc::new(opposite(&a))) } else { (n, a) })
        .collect())
}

fn select_one(spec: &Spec, t: &Target) -> R<(String, AlgRef)> {
    let mut v = select(spec, t)?;
    match v.len() {
        1 => Ok(v.remove(0)),
        0 => Err(Fail(Exit::Input, "the document defines no algebra".into())),
        _ => Err(Fail(Exit::Input, "several algebras; pick one with --algebra".into())),
    }
}

/// The ideal named on the command line and a label for it.
fn ideal_of(a: &AlgRef, sel: &IdealSel) -> R<(IdealInput, String)> {
    if let Some(e) = &sel.e {
        let x = parse_elem_expr(a, e)?;
        return Ok((IdealInput::from_idempotent(a, &x)?, format!("ideal generated by the idempotent {}", e)));
    }
    if sel.ideal.is_empty() {
        return Err(Fail(Exit::Input, "name the ideal with --e or --ideal".into()));
    }
    let gens = sel.ideal.iter().map(|g| parse_elem_expr(a, g)).collect::<Result<Vec<_>, _>>()?;
    let space = ideal_generated(a, &gens).space;
    Ok((IdealInput::from_space(a, space)?, format!("ideal generated by {}", sel.ideal.join(", "))))
}

fn verdict_exit(v: &Verdict) -> Exit {
    match v {
        Verdict::Yes(_) => Exit::Ok,
        Verdict::No(_) => Exit::Negative,
        Verdict::Unknown(_) => Exit::Undecided,
    }
}

fn classification_exit(c: Classification) -> Exit {
    match c {
        Classification::ConfirmsTheorem => Exit::Ok,
        Classification::HypothesisFailsFormulaFails | Classification::HypothesisFailsFormulaHolds => Exit::Negative,
        Classification::Inconclusive => Exit::Undecided,
    }
}

fn decomposition(file: &str, target: &str, v: DecompositionVerdict) -> Record {
    Record::Decomposition { file: file.into(), target: target.into(), equation: v.equation(), verdict: v }
}

/// Runs one command. Per-file failures become `error` records, so the
/// report is always complete.
pub fn execute(cmd: &Command, s: Settings, loader: &dyn Loader) -> Report {
    let start = Instant::now();
    if let Command::Corpus { dir } = cmd {
        let mut r = super::corpus::run_corpus(dir.as_deref(), s);
        r.elapsed = start.elapsed();
        return r;
    }
    let files = match cmd {
        Command::Analyze { files } | Command::CheckCovariant { files, .. } | Command::Tor { files, .. } => files,
        Command::K0(t) | Command::Stratify(t) | Command::Construct(t) => &t.files,
        Command::CheckIdeal { target, .. } | Command::Verify { target, .. } => &target.files,
        Command::Corpus { .. } => unreachable!(),
    };
    let mut sources = Vec::new();
    for p in files {
        sources.push((file_name(p), loader.load(p)));
    }
    let bytes: Vec<&[u8]> = sources.iter().map(|(_, s)| s.as_ref().map_or(&[][..], |x| x.as_bytes())).collect();
    let mut report = Report::new(cmd.name(), s, &bytes);
    for (name, src) in &sources {
        let res = src.clone().map_err(Fail::from).and_then(|src| {
            let spec = parse_spec(&src).map_err(|e| Fail(Exit::Input, e.to_string()))?;
            run_file(cmd, name, &spec, &s, &mut report)
        });
        if let Err(Fail(exit, message)) = res {
            report.push(Record::Error { file: name.clone(), exit: exit.code(), message }, exit);
        }
    }
    report.elapsed = start.elapsed();
    report
}

fn run_file(cmd: &Command, file: &str, spec: &Spec, s: &Settings, out: &mut Report) -> R<()> {
    match cmd {
        Command::Analyze { .. } => analyze(file, spec, s, out),
        Command::K0(t) => {
            for (name, a) in select(spec, t)? {
                let rep = k0(&a, s.seed, s.retries)?;
                out.push(Record::K0 { file: file.into(), algebra: name, report: rep }, Exit::Ok);
            }
            Ok(())
        }
        Command::CheckIdeal { target, ideal } => check_ideal(file, spec, target, ideal, s, out),
        Command::CheckCovariant { map, property, .. } => {
            let h = spec.maps.get(map).ok_or_else(|| Fail(Exit::Input, format!("no map named {:?}", map)))?;
            let rep = check_covariance(h)?;
            let (holds, label) = match property {
                Property::Covariant => (rep.covariant, "covariant"),
                Property::XCovariant => (rep.x_covariant, "x-covariant"),
                Property::Contravariant => (rep.contravariant, "contravariant"),
                Property::YContravariant => (rep.y_contravariant, "y-contravariant"),
            };
            let exit = if holds { Exit::Ok } else { Exit::Negative };
            out.push(Record::Covariance { file: file.into(), map: map.clone(), property: label.into(), holds, report: rep }, exit);
            Ok(())
        }
        Command::Tor { left, right, .. } => {
            let get = |n: &str| spec.modules.get(n).map(|m| m.module.clone()).ok_or_else(|| Fail(Exit::Input, format!("no module named {:?}", n)));
            let (m, n) = (get(left)?, get(right)?);
            let p = tor(&m, &n, s.tor_bound, s.seed, s.retries)?;
            out.push(Record::Tor { file: file.into(), left: left.clone(), right: right.clone(), profile: p }, Exit::Ok);
            Ok(())
        }
        Command::Stratify(t) => {
            for (name, a) in select(spec, t)? {
                let qh = is_quasi_hereditary(&a, s)?;
                let exit = verdict_exit(&qh.verdict);
                let chain = match qh.chain {
                    Some(c) => Some(c),
                    // report the longest stratifying chain anyway
                    None => find_stratification(&a, s).ok().map(|st| st.chain),
                };
                if let Some(c) = &chain {
                    let v = k0_stratified_decomposition(&a, c, s)?;
                    out.push(decomposition(file, &name, v), Exit::Ok);
                }
                out.push(Record::Stratification { file: file.into(), algebra: name, quasi_hereditary: qh.verdict, explored: qh.explored, chain }, exit);
            }
            Ok(())
        }
        Command::Verify { target, thm, ideal, map } => verify(file, spec, target, thm, ideal, map.as_deref(), s, out),
        Command::Construct(t) => {
            for (name, a) in select(spec, t)? {
                let doc = table_doc(&name, &a);
                out.push(Record::Construct { file: file.into(), algebra: name, document: serde_json::to_value(&doc).expect("documents serialize") }, Exit::Ok);
            }
            Ok(())
        }
        Command::Corpus { .. } => unreachable!("handled by execute"),
    }
}

fn analyze(file: &str, spec: &Spec, s: &Settings, out: &mut Report) -> R<()> {
    let mut errors = Vec::new();
    for (name, a) in &spec.algebras {
        let summary = AlgebraSummary {
            dim: a.dim(),
            field: a.field().to_string(),
            provenance: a.provenance.to_string(),
            radical_dim: radical(a).ok().map(|r| r.dim()),
            commutative: a.is_commutative(),
        };
        out.push(Record::Algebra { file: file.into(), name: name.clone(), summary }, Exit::Ok);
        match k0(a, s.seed, s.retries) {
            Ok(rep) => out.push(Record::K0 { file: file.into(), algebra: name.clone(), report: rep }, Exit::Ok),
            Err(e) => errors.push(Fail::from(e)),
        }
    }
    for (name, m) in &spec.modules {
        let m = &m.module;
        let projective = match is_projective(m) {
            Ok(p) => Verdict::from_bool(p, "has a projective cover with zero kernel", "projective cover has a nonzero kernel"),
            Err(e) => Verdict::unknown(e.to_string()),
        };
        let summary = ModuleSummary { dim: m.dim, radical_series: m.radical_series().ok(), projective };
        out.push(Record::Module { file: file.into(), name: name.clone(), summary }, Exit::Ok);
    }
    for (name, h) in &spec.maps {
        match check_covariance(h) {
            Ok(rep) => out.push(Record::Covariance { file: file.into(), map: name.clone(), property: "covariant".into(), holds: rep.covariant, report: rep }, Exit::Ok),
            Err(e) => errors.push(Fail::from(e)),
        }
    }
    for (name, inst) in &spec.instances {
        match verify_corollary(inst, s) {
            Ok(v) => out.push(decomposition(file, name, v), Exit::Ok),
            Err(e) => errors.push(Fail::from(e)),
        }
    }
    for Fail(exit, message) in errors {
        out.push(Record::Error { file: file.into(), exit: exit.code(), message }, exit);
    }
    Ok(())
}

fn check_ideal(file: &str, spec: &Spec, target: &Target, sel: &IdealSel, s: &Settings, out: &mut Report) -> R<()> {
    let (name, a) = select_one(spec, target)?;
    let (input, label) = ideal_of(&a, sel)?;
    let j = &input.space;
    let mut props = Vec::new();
    let sq = a.product_space(j, j);
    props.push(("I² = I".to_string(), Verdict::from_bool(sq.dim() == j.dim(), "the ideal is idempotent", format!("dim I² = {} < dim I = {}", sq.dim(), j.dim()))));
    let left = Module::regular(&a).submodule(j)?.module;
    let right = right_regular(&a).1.submodule(j)?.module;
    let proj = |m: &Module, side: &str| -> R<Verdict> {
        let p = is_projective(m)?;
        Ok(Verdict::from_bool(p, format!("projective as a {} module", side), format!("not projective as a {} module", side)))
    };
    props.push(("I projective (left)".to_string(), proj(&left, "left")?));
    props.push(("I projective (right)".to_string(), proj(&right, "right")?));
    let quot = Module::regular(&a).quotient(j)?.module;
    let bound = s.resolution_bound(a.dim());
    let pd = if quot.dim == 0 { Verdict::yes("R/I is zero") } else { pd_verdict(&resolution(&quot, bound, CoverMode::Minimal, s.seed, s.retries)?.status) };
    props.push(("R/I finite projective dimension (left)".to_string(), pd));
    let mut ranks = vec![("K0(R)".to_string(), rank_of((*a).clone(), s.seed, s.retries)?)];
    ranks.push(("K0(R/I)".to_string(), rank_of(crate::algebra::quotient(&a, j), s.seed, s.retries)?));
    ranks.push(("K0(End(I))".to_string(), rank_end(&left, s.seed, s.retries)?));
    if let Some(e) = &input.idempotent {
        let h = is_homological_ideal(&a, e, s.tor_bound, s.seed, s.retries)?;
        props.push(("homological".to_string(), h.verdict));
        let st = is_stratifying(&a, e, s.tor_bound, s.seed, s.retries)?;
        props.push(("stratifying".to_string(), st.verdict));
        let c = crate::algebra::corner(&a, e)?;
        ranks.push(("K0(eRe)".to_string(), rank_of(c.algebra, s.seed, s.retries)?));
    }
    let exit = props.iter().fold(Exit::Ok, |acc, (_, v)| acc.worst(verdict_exit(v)));
    out.push(Record::Ideal { file: file.into(), algebra: name, ideal: label, dim: j.dim(), properties: props, ranks }, exit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(file: &str, spec: &Spec, target: &Target, thm: &str, sel: &IdealSel, map: Option<&str>, s: &Settings, out: &mut Report) -> R<()> {
    let v = if let Some(st) = IdealStatement::from_id(thm) {
        let (name, a) = select_one(spec, target)?;
        let (input, _) = ideal_of(&a, sel)?;
        (name, verify_ideal(&a, &input, st, s)?)
    } else if let Some(st) = MapStatement::from_id(thm) {
        let m = map.ok_or_else(|| Fail(Exit::Input, format!("{} needs --map", thm)))?;
        let h = spec.maps.get(m).ok_or_else(|| Fail(Exit::Input, format!("no map named {:?}", m)))?;
        (m.to_string(), verify_map(h, st, s)?)
    } else if thm == "stratified" {
        let (name, a) = select_one(spec, target)?;
        let st = find_stratification(&a, s)?;
        (name.clone(), k0_stratified_decomposition(&a, &st.chain, s)?)
    } else if thm == "socle" {
        let (name, a) = select_one(spec, target)?;
        (name, verify_corollary(&CorollaryInstance::Socle { base: (*a).clone() }, s)?)
    } else {
        let (name, _) = select_one(spec, target)?;
        let inst = spec.instances.get(&name).filter(|i| i.id() == thm).ok_or_else(|| Fail(Exit::Input, format!("unknown statement {:?} for algebra {:?}", thm, name)))?;
        (name, verify_corollary(inst, s)?)
    };
    let exit = classification_exit(v.1.classification);
    out.push(decomposition(file, &v.0, v.1), exit);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::families::upper_triangular_k;
    use crate::exactla::FieldSpec;

    #[test]
    fn element_expressions() {
        let t = upper_triangular_k(FieldSpec::Rationals, 2);
        let x = parse_elem_expr(&t, "e11 + 1/2*e12 - e22").unwrap();
        let i = |l: &str| t.labels().iter().position(|x| x == l).unwrap();
        assert_eq!(x[i("e11")], Q::one());
        assert_eq!(x[i("e12")], "1/2".parse().unwrap());
        assert_eq!(x[i("e22")], Q::from_i64(-1));
        assert!(parse_elem_expr(&t, "e33").is_err());
        assert!(parse_elem_expr(&t, "").is_err());
        assert_eq!(parse_elem_expr(&t, "-e12").unwrap()[i("e12")], Q::from_i64(-1));
    }
}
