//! Spec documents: JSON objects describing algebras, modules and maps, with
//! every scalar written as an exact rational string such as `"3/7"`.

use crate::algebra::families::{
    checkerboard, ground, invariants, matrix_algebra, morita_context, number_field, skew_group_ring, tiled, triangular_ring, trivial_extension, upper_triangular_k, Bimodule,
    MoritaData,
};
use crate::algebra::{corner, direct_product, ideal_generated, opposite, path_algebra, quotient, radical, AlgError, Algebra, Elem, Provenance, QuiverPresentation};
use crate::endo::{end_algebra, ModuleHom};
use crate::exactla::{FieldSpec, Mat, Poly, Q, Subspace};
use crate::ktheory::CorollaryInstance;
use crate::modules::{right_regular, AlgRef, Module};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const SPEC_FORMAT: &str = "endok-spec/1";

/// An exact rational literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

const NON_RATIONAL: &str = "non-rational literal";

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational literal string such as \"3/7\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        v.parse::<Q>().map(Rat).map_err(|_| E::custom(format!("{} {:?}", NON_RATIONAL, v)))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Err(E::custom(format!("{} {} (write scalars as strings, e.g. \"{}\")", NON_RATIONAL, v, v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Err(E::custom(format!("{} {} (write scalars as strings, e.g. \"{}\")", NON_RATIONAL, v, v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rat, E> {
        Err(E::custom(format!("{} {} (write fractions as \"p/q\")", NON_RATIONAL, v)))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// An element as a map from basis labels to coefficients.
pub type ElemLit = BTreeMap<String, Rat>;
/// A matrix as a list of rows.
pub type MatLit = Vec<Vec<Rat>>;

fn default_field() -> String {
    "Q".into()
}

fn is_default_field(f: &str) -> bool {
    f == "Q"
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub format: String,
    /// `"Q"` or `"F<p>"`.
    #[serde(default = "default_field", skip_serializing_if = "is_default_field")]
    pub field: String,
    /// Algebra that commands use when none is named.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub main: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraDef {
    Table(TableDef),
    Quiver(QuiverDef),
    Family(FamilyDef),
    Corner { of: String, idempotent: ElemLit },
    Quotient { of: String, ideal: IdealDef },
    Opposite { of: String },
    Product { factors: Vec<String> },
    Endomorphism { module: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDef {
    pub labels: Vec<String>,
    pub unit: ElemLit,
    /// Nonzero products of basis elements; the rest are zero.
    pub products: Vec<ProductDef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDef {
    pub left: String,
    pub right: String,
    pub value: ElemLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDef {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDef>,
    /// Each relation maps paths (arrow names joined by `*`, read left to
    /// right) to coefficients.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<ElemLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDef {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyDef {
    Ground {},
    UpperTriangular { n: usize },
    Matrix { base: String, n: usize },
    /// `k[x]/(p)`, coefficients from the constant term up.
    NumberField { coefficients: Vec<Rat> },
    Triangular { left: String, right: String, bimodule: BimoduleDef },
    Morita { r: String, s: String, m: BimoduleDef, n: BimoduleDef, phi: Vec<PairingDef>, psi: Vec<PairingDef> },
    Tiled { base: String, j: IdealDef, upper: Vec<UpperDef>, n: usize },
    JiZero { base: String, i: IdealDef, j: IdealDef, n: usize },
    Checkerboard { base: String, x: ElemLit, y: ElemLit, n: usize },
    SkewGroup { base: String, generators: Vec<MatLit> },
    TrivialExtension { base: String, bimodule: BimoduleDef },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BimoduleDef {
    /// An ideal of an algebra, acted on from both sides.
    Ideal { of: String, ideal: IdealDef },
    /// Explicit action matrices (column vectors; `right[j]` is `m ↦ m·b_j`).
    Actions { dim: usize, left: Vec<MatLit>, right: Vec<MatLit> },
}

/// One value of a pairing on basis vectors, indices from 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingDef {
    pub left: usize,
    pub right: usize,
    pub value: ElemLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpperDef {
    pub row: usize,
    pub col: usize,
    pub ideal: IdealDef,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum IdealDef {
    GeneratedBy(Vec<ElemLit>),
    /// A subspace that must already be a two-sided ideal.
    Span(Vec<ElemLit>),
    Radical,
    Zero,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDef {
    Regular { over: String },
    /// `A_A`, as a left module over the opposite algebra.
    RightRegular { over: String },
    Projective { over: String, idempotent: ElemLit },
    Simple { over: String, idempotent: ElemLit },
    /// A two-sided ideal as a left module.
    Ideal { over: String, ideal: IdealDef },
    Socle { of: String },
    Radical { of: String },
    Top { of: String },
    /// `M / JM`.
    Quotient { of: String, ideal: IdealDef },
    DirectSum { summands: Vec<String> },
    /// `Hom_k(M, k)` over the opposite algebra.
    Dual { of: String },
    Actions { over: String, action: Vec<MatLit> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDef {
    /// Inclusion of a module declared as a socle, radical or ideal.
    Inclusion { of: String },
    /// Projection onto a module declared as a top or quotient.
    Projection { onto: String },
    Identity { of: String },
    Matrix { source: String, target: String, matrix: MatLit },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}, column {column}: {msg}")]
    Schema { line: usize, column: usize, msg: String },
    #[error("line {line}, column {column}: {msg}")]
    NonRationalLiteral { line: usize, column: usize, msg: String },
    #[error("line {line}: unresolved {kind} reference {name:?}")]
    UnresolvedReference { kind: &'static str, name: String, line: usize },
    #[error("{kind} {name:?}: {msg}")]
    Invalid { kind: &'static str, name: String, msg: String },
}

/// All problems found in one document.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct SpecErrors(pub Vec<SpecError>);

impl fmt::Display for SpecErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", e)?;
        }
        Ok(())
    }
}

/// A module together with how it sits inside or over another module.
#[derive(Clone, Debug)]
pub struct ModuleEntry {
    pub module: Module,
    /// Ambient module and the subspace this module is.
    pub inside: Option<(Module, Subspace)>,
    /// Module this one is a quotient of, and the kernel.
    pub quotient_of: Option<(Module, Subspace)>,
}

/// A resolved document.
#[derive(Clone, Debug)]
pub struct Spec {
    pub doc: SpecDoc,
    pub field: FieldSpec,
    pub algebras: BTreeMap<String, AlgRef>,
    pub modules: BTreeMap<String, ModuleEntry>,
    pub maps: BTreeMap<String, ModuleHom>,
    /// Family instances that have a rank formula.
    pub instances: BTreeMap<String, CorollaryInstance>,
}

/// Parses JSON text into a document, without resolving names.
pub fn parse_doc(src: &str) -> Result<SpecDoc, SpecErrors> {
    let doc: SpecDoc = serde_json::from_str(src).map_err(|e| {
        let msg = e.to_string();
        // serde_json appends " at line L column C"
        let msg = msg.rsplit_once(" at line ").map(|(m, _)| m.to_string()).unwrap_or(msg);
        let (line, column) = (e.line(), e.column());
        if msg.contains(NON_RATIONAL) {
            SpecErrors(vec![SpecError::NonRationalLiteral { line, column, msg }])
        } else {
            SpecErrors(vec![SpecError::Schema { line, column, msg }])
        }
    })?;
    if doc.format != SPEC_FORMAT {
        let (line, column) = locate(src, &doc.format);
        return Err(SpecErrors(vec![SpecError::Schema { line, column, msg: format!("unknown format {:?}, expected {:?}", doc.format, SPEC_FORMAT) }]));
    }
    Ok(doc)
}

/// Parses and resolves a document.
pub fn parse_spec(src: &str) -> Result<Spec, SpecErrors> {
    let doc = parse_doc(src)?;
    let missing = unresolved(&doc, src);
    if !missing.is_empty() {
        return Err(SpecErrors(missing));
    }
    resolve(doc).map_err(|e| SpecErrors(vec![e]))
}

/// Canonical JSON rendering; `parse_doc(&emit_doc(d)) == d`.
pub fn emit_doc(doc: &SpecDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// 1-based line and column of the first use of `"name"` as a value.
fn locate(src: &str, name: &str) -> (usize, usize) {
    let quoted = format!("\"{}\"", name);
    let mut first = None;
    for (off, _) in src.match_indices(&quoted) {
        first.get_or_insert(off);
        let rest = src[off + quoted.len()..].trim_start();
        if !rest.starts_with(':') {
            first = Some(off);
            break;
        }
    }
    let off = first.unwrap_or(0);
    let before = &src[..off];
    let line = before.matches('\n').count() + 1;
    let column = off - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Algebra,
    Module,
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Algebra => "algebra",
        Kind::Module => "module",
    }
}

fn algebra_refs(d: &AlgebraDef) -> Vec<(Kind, &str)> {
    use Kind::*;
    match d {
        AlgebraDef::Table(_) | AlgebraDef::Quiver(_) => Vec::new(),
        AlgebraDef::Family(f) => match f {
            FamilyDef::Ground {} | FamilyDef::UpperTriangular { .. } | FamilyDef::NumberField { .. } => Vec::new(),
            FamilyDef::Matrix { base, .. }
            | FamilyDef::Tiled { base, .. }
            | FamilyDef::JiZero { base, .. }
            | FamilyDef::Checkerboard { base, .. }
            | FamilyDef::SkewGroup { base, .. } => vec![(Algebra, base.as_str())],
            FamilyDef::TrivialExtension { base, bimodule } => {
                let mut v = vec![(Algebra, base.as_str())];
                v.extend(bimodule_refs(bimodule));
                v
            }
            FamilyDef::Triangular { left, right, bimodule } => {
                let mut v = vec![(Algebra, left.as_str()), (Algebra, right.as_str())];
                v.extend(bimodule_refs(bimodule));
                v
            }
            FamilyDef::Morita { r, s, m, n, .. } => {
                let mut v = vec![(Algebra, r.as_str()), (Algebra, s.as_str())];
                v.extend(bimodule_refs(m));
                v.extend(bimodule_refs(n));
                v
            }
        },
        AlgebraDef::Corner { of, .. } | AlgebraDef::Quotient { of, .. } | AlgebraDef::Opposite { of } => vec![(Algebra, of.as_str())],
        AlgebraDef::Product { factors } => factors.iter().map(|f| (Algebra, f.as_str())).collect(),
        AlgebraDef::Endomorphism { module } => vec![(Module, module.as_str())],
    }
}

fn bimodule_refs(b: &BimoduleDef) -> Vec<(Kind, &str)> {
    match b {
        BimoduleDef::Ideal { of, .. } => vec![(Kind::Algebra, of.as_str())],
        BimoduleDef::Actions { .. } => Vec::new(),
    }
}

fn module_refs(d: &ModuleDef) -> Vec<(Kind, &str)> {
    use Kind::*;
    match d {
        ModuleDef::Regular { over }
        | ModuleDef::RightRegular { over }
        | ModuleDef::Projective { over, .. }
        | ModuleDef::Simple { over, .. }
        | ModuleDef::Ideal { over, .. }
        | ModuleDef::Actions { over, .. } => vec![(Algebra, over.as_str())],
        ModuleDef::Socle { of } | ModuleDef::Radical { of } | ModuleDef::Top { of } | ModuleDef::Quotient { of, .. } | ModuleDef::Dual { of } => vec![(Module, of.as_str())],
        ModuleDef::DirectSum { summands } => summands.iter().map(|s| (Module, s.as_str())).collect(),
    }
}

fn map_refs(d: &MapDef) -> Vec<&str> {
    match d {
        MapDef::Inclusion { of } | MapDef::Identity { of } => vec![of.as_str()],
        MapDef::Projection { onto } => vec![onto.as_str()],
        MapDef::Matrix { source, target, .. } => vec![source.as_str(), target.as_str()],
    }
}

fn unresolved(doc: &SpecDoc, src: &str) -> Vec<SpecError> {
    let mut out = Vec::new();
    if let Some(m) = &doc.main {
        if !doc.algebras.contains_key(m) {
            out.push(SpecError::UnresolvedReference { kind: "algebra", name: m.clone(), line: locate(src, m).0 });
        }
    }
    let mut check = |k: Kind, name: &str| {
        let ok = match k {
            Kind::Algebra => doc.algebras.contains_key(name),
            Kind::Module => doc.modules.contains_key(name),
        };
        if !ok {
            out.push(SpecError::UnresolvedReference { kind: kind_name(k), name: name.to_string(), line: locate(src, name).0 });
        }
    };
    for d in doc.algebras.values() {
        for (k, n) in algebra_refs(d) {
            check(k, n);
        }
    }
    for d in doc.modules.values() {
        for (k, n) in module_refs(d) {
            check(k, n);
        }
    }
    for d in doc.maps.values() {
        for n in map_refs(d) {
            check(Kind::Module, n);
        }
    }
    out
}

pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    match s {
        "Q" | "QQ" => Ok(FieldSpec::Rationals),
        _ => {
            let p = s.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()).ok_or_else(|| format!("unknown field {:?} (use \"Q\" or \"F<p>\")", s))?;
            FieldSpec::prime(p).map_err(|e| e.to_string())
        }
    }
}

struct Resolver {
    doc: SpecDoc,
    field: FieldSpec,
    algebras: BTreeMap<String, AlgRef>,
    modules: BTreeMap<String, ModuleEntry>,
    instances: BTreeMap<String, CorollaryInstance>,
    visiting: BTreeSet<(u8, String)>,
}

type R<T> = Result<T, String>;

/// Reads an element literal in the basis of `a`.
pub fn elem_in(a: &Algebra, lit: &ElemLit) -> R<Elem> {
    let f = a.field();
    let mut v = a.zero();
    for (label, c) in lit {
        let i = a.labels().iter().position(|l| l == label).ok_or_else(|| format!("unknown basis label {:?}", label))?;
        v[i] = f.add(&v[i], &f.embed(&c.0).map_err(|e| e.to_string())?);
    }
    Ok(v)
}

fn mat_in(f: FieldSpec, m: &MatLit, rows: usize, cols: usize) -> R<Mat> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(format!("expected a {}x{} matrix", rows, cols));
    }
    let rows_q = m.iter().map(|r| r.iter().map(|x| f.embed(&x.0).map_err(|e| e.to_string())).collect::<R<Vec<Q>>>()).collect::<R<Vec<_>>>()?;
    Ok(Mat::from_rows(rows_q, cols, f))
}

pub fn ideal_in(a: &Algebra, d: &IdealDef) -> R<Subspace> {
    Ok(match d {
        IdealDef::GeneratedBy(gens) => {
            let g = gens.iter().map(|x| elem_in(a, x)).collect::<R<Vec<_>>>()?;
            ideal_generated(a, &g).space
        }
        IdealDef::Span(vs) => {
            let g = vs.iter().map(|x| elem_in(a, x)).collect::<R<Vec<_>>>()?;
            let s = Subspace::span(a.dim(), a.field(), &g);
            if !crate::algebra::construct::is_ideal(a, &s) {
                return Err("span is not a two-sided ideal".into());
            }
            s
        }
        IdealDef::Radical => radical(a).map_err(|e| e.to_string())?,
        IdealDef::Zero => Subspace::zero(a.dim(), a.field()),
        IdealDef::Full => Subspace::full(a.dim(), a.field()),
    })
}

fn alg_err(e: AlgError) -> String {
    e.to_string()
}

impl Resolver {
    fn algebra(&mut self, name: &str) -> R<AlgRef> {
        if let Some(a) = self.algebras.get(name) {
            return Ok(a.clone());
        }
        let key = (0, name.to_string());
        if !self.visiting.insert(key.clone()) {
            return Err(format!("algebra {:?} is defined in terms of itself", name));
        }
        let def = self.doc.algebras.get(name).cloned().ok_or_else(|| format!("unresolved algebra reference {:?}", name))?;
        let a = self.build_algebra(name, &def).map_err(|m| if m.starts_with("algebra ") || m.starts_with("module ") { m } else { format!("algebra {:?}: {}", name, m) })?;
        self.visiting.remove(&key);
        let a = Arc::new(a);
        self.algebras.insert(name.to_string(), a.clone());
        Ok(a)
    }

    fn bimodule(&mut self, d: &BimoduleDef, left: &Algebra, right: &Algebra) -> R<Bimodule> {
        match d {
            BimoduleDef::Ideal { of, ideal } => {
                let a = self.algebra(of)?;
                if *a != *left || *a != *right {
                    return Err(format!("ideal bimodule over {:?} does not match the corner algebras", of));
                }
                Bimodule::from_subspace(&a, &ideal_in(&a, ideal)?).map_err(alg_err)
            }
            BimoduleDef::Actions { dim, left: l, right: r } => {
                let f = self.field;
                if l.len() != left.dim() || r.len() != right.dim() {
                    return Err("bimodule needs one action matrix per basis element on each side".into());
                }
                Ok(Bimodule {
                    dim: *dim,
                    left: l.iter().map(|m| mat_in(f, m, *dim, *dim)).collect::<R<_>>()?,
                    right: r.iter().map(|m| mat_in(f, m, *dim, *dim)).collect::<R<_>>()?,
                })
            }
        }
    }

    fn build_algebra(&mut self, name: &str, def: &AlgebraDef) -> R<Algebra> {
        let f = self.field;
        Ok(match def {
            AlgebraDef::Table(t) => {
                let dim = t.labels.len();
                let idx = |l: &str| t.labels.iter().position(|x| x == l).ok_or_else(|| format!("unknown basis label {:?}", l));
                let read = |lit: &ElemLit| -> R<Elem> {
                    let mut v = vec![Q::zero(); dim];
                    for (l, c) in lit {
                        let i = idx(l)?;
                        v[i] = f.add(&v[i], &f.embed(&c.0).map_err(|e| e.to_string())?);
                    }
                    Ok(v)
                };
                let mut products = vec![Vec::new(); dim * dim];
                for p in &t.products {
                    let (i, j) = (idx(&p.left)?, idx(&p.right)?);
                    let v = read(&p.value)?;
                    if !products[i * dim + j].is_empty() {
                        return Err(format!("product {} * {} given twice", p.left, p.right));
                    }
                    products[i * dim + j] = v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                }
                Algebra::from_sparse(f, dim, products, read(&t.unit)?, Some(t.labels.clone()), Provenance::Table).map_err(alg_err)?
            }
            AlgebraDef::Quiver(q) => {
                let vidx = |v: &str| q.vertices.iter().position(|x| x == v).ok_or_else(|| format!("unknown vertex {:?}", v));
                let mut p = QuiverPresentation {
                    vertices: q.vertices.clone(),
                    arrows: q.arrows.iter().map(|a| Ok((a.name.clone(), vidx(&a.from)?, vidx(&a.to)?))).collect::<R<_>>()?,
                    relations: Vec::new(),
                    nilpotency_bound: q.nilpotency_bound.unwrap_or(crate::algebra::quiver::DEFAULT_NILPOTENCY_BOUND),
                };
                for rel in &q.relations {
                    let mut terms = Vec::new();
                    for (path, c) in rel {
                        terms.push((f.embed(&c.0).map_err(|e| e.to_string())?, p.parse_path(path).map_err(alg_err)?));
                    }
                    p.relations.push(terms);
                }
                path_algebra(&p, f).map_err(alg_err)?
            }
            AlgebraDef::Family(fam) => self.build_family(name, fam)?,
            AlgebraDef::Corner { of, idempotent } => {
                let a = self.algebra(of)?;
                let e = elem_in(&a, idempotent)?;
                corner(&a, &e).map_err(alg_err)?.algebra
            }
            AlgebraDef::Quotient { of, ideal } => {
                let a = self.algebra(of)?;
                quotient(&a, &ideal_in(&a, ideal)?)
            }
            AlgebraDef::Opposite { of } => opposite(&*self.algebra(of)?),
            AlgebraDef::Product { factors } => {
                let parts = factors.iter().map(|x| self.algebra(x)).collect::<R<Vec<_>>>()?;
                let refs: Vec<&Algebra> = parts.iter().map(|a| &**a).collect();
                direct_product(&refs).map_err(alg_err)?
            }
            AlgebraDef::Endomorphism { module } => {
                let m = self.module(module)?.module;
                (*end_algebra(&m).map_err(|e| e.to_string())?.algebra).clone()
            }
        })
    }

    fn build_family(&mut self, name: &str, fam: &FamilyDef) -> R<Algebra> {
        let f = self.field;
        let inst = |s: &mut Resolver, i: CorollaryInstance| {
            s.instances.insert(name.to_string(), i);
        };
        Ok(match fam {
            FamilyDef::Ground {} => ground(f),
            FamilyDef::UpperTriangular { n } => {
                if *n == 0 {
                    return Err("n must be positive".into());
                }
                upper_triangular_k(f, *n)
            }
            FamilyDef::Matrix { base, n } => {
                if *n == 0 {
                    return Err("n must be positive".into());
                }
                matrix_algebra(&*self.algebra(base)?, *n)
            }
            FamilyDef::NumberField { coefficients } => {
                if coefficients.len() < 2 {
                    return Err("polynomial must have positive degree".into());
                }
                number_field(&Poly::new(coefficients.iter().map(|c| c.0.clone()).collect()))
            }
            FamilyDef::Triangular { left, right, bimodule } => {
                let (l, r) = (self.algebra(left)?, self.algebra(right)?);
                let m = self.bimodule(bimodule, &l, &r)?;
                let out = triangular_ring(&l, &r, &m).map_err(alg_err)?.algebra;
                inst(self, CorollaryInstance::Triangular { left: (*l).clone(), right: (*r).clone(), bimodule: m });
                out
            }
            FamilyDef::Morita { r, s, m, n, phi, psi } => {
                let (ra, sa) = (self.algebra(r)?, self.algebra(s)?);
                let mb = self.bimodule(m, &ra, &sa)?;
                let nb = self.bimodule(n, &sa, &ra)?;
                let table = |ps: &[PairingDef], rows: usize, cols: usize, target: &Algebra| -> R<Vec<Vec<Elem>>> {
                    let mut t = vec![vec![target.zero(); cols]; rows];
                    for p in ps {
                        if p.left == 0 || p.left > rows || p.right == 0 || p.right > cols {
                            return Err(format!("pairing index ({}, {}) out of range", p.left, p.right));
                        }
                        t[p.left - 1][p.right - 1] = elem_in(target, &p.value)?;
                    }
                    Ok(t)
                };
                let data = MoritaData {
                    phi: table(phi, mb.dim, nb.dim, &ra)?,
                    psi: table(psi, nb.dim, mb.dim, &sa)?,
                    r: (*ra).clone(),
                    s: (*sa).clone(),
                    m: mb,
                    n: nb,
                };
                let out = morita_context(&data).map_err(alg_err)?.algebra;
                inst(self, CorollaryInstance::MoritaContext(data));
                out
            }
            FamilyDef::Tiled { base, j, upper, n } => {
                let b = self.algebra(base)?;
                let jj = ideal_in(&b, j)?;
                let mut up = vec![vec![None; *n]; *n];
                for u in upper {
                    if u.row == 0 || u.col > *n || u.row >= u.col {
                        return Err(format!("upper entry ({}, {}) is not above the diagonal", u.row, u.col));
                    }
                    up[u.row - 1][u.col - 1] = Some(ideal_in(&b, &u.ideal)?);
                }
                let out = tiled(&b, &jj, &up, *n).map_err(alg_err)?.algebra;
                inst(self, CorollaryInstance::Tiled { base: (*b).clone(), j: jj, upper: up, n: *n });
                out
            }
            FamilyDef::JiZero { base, i, j, n } => {
                let b = self.algebra(base)?;
                let (ii, jj) = (ideal_in(&b, i)?, ideal_in(&b, j)?);
                let out = crate::algebra::families::ji_zero(&b, &ii, &jj, *n).map_err(alg_err)?.algebra;
                inst(self, CorollaryInstance::JiZero { base: (*b).clone(), i: ii, j: jj, n: *n });
                out
            }
            FamilyDef::Checkerboard { base, x, y, n } => {
                let b = self.algebra(base)?;
                checkerboard(&b, &elem_in(&b, x)?, &elem_in(&b, y)?, *n).map_err(alg_err)?.algebra
            }
            FamilyDef::SkewGroup { base, generators } => {
                let b = self.algebra(base)?;
                let gens = generators.iter().map(|g| mat_in(f, g, b.dim(), b.dim())).collect::<R<Vec<_>>>()?;
                let sg = skew_group_ring(&b, &gens).map_err(alg_err)?;
                // fail early if the invariants are not a subalgebra
                let _ = invariants(&b, &sg.group);
                inst(self, CorollaryInstance::SkewGroup { base: (*b).clone(), generators: gens });
                sg.algebra
            }
            FamilyDef::TrivialExtension { base, bimodule } => {
                let b = self.algebra(base)?;
                let m = self.bimodule(bimodule, &b, &b)?;
                trivial_extension(&b, &m).map_err(alg_err)?
            }
        })
    }

    fn module(&mut self, name: &str) -> R<ModuleEntry> {
        if let Some(m) = self.modules.get(name) {
            return Ok(m.clone());
        }
        let key = (1, name.to_string());
        if !self.visiting.insert(key.clone()) {
            return Err(format!("module {:?} is defined in terms of itself", name));
        }
        let def = self.doc.modules.get(name).cloned().ok_or_else(|| format!("unresolved module reference {:?}", name))?;
        let mut m = self.build_module(&def).map_err(|m| if m.starts_with("algebra ") || m.starts_with("module ") { m } else { format!("module {:?}: {}", name, m) })?;
        self.visiting.remove(&key);
        m.module.name = name.to_string();
        self.modules.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn build_module(&mut self, def: &ModuleDef) -> R<ModuleEntry> {
        let plain = |module: Module| ModuleEntry { module, inside: None, quotient_of: None };
        let me = |e: crate::modules::ModError| e.to_string();
        Ok(match def {
            ModuleDef::Regular { over } => plain(Module::regular(&self.algebra(over)?)),
            ModuleDef::RightRegular { over } => plain(right_regular(&self.algebra(over)?).1),
            ModuleDef::Projective { over, idempotent } => {
                let a = self.algebra(over)?;
                let s = Module::projective(&a, &elem_in(&a, idempotent)?).map_err(me)?;
                ModuleEntry { module: s.module, inside: Some((Module::regular(&a), s.space)), quotient_of: None }
            }
            ModuleDef::Simple { over, idempotent } => {
                let a = self.algebra(over)?;
                plain(Module::simple_top(&a, &elem_in(&a, idempotent)?).map_err(me)?)
            }
            ModuleDef::Ideal { over, ideal } => {
                let a = self.algebra(over)?;
                let reg = Module::regular(&a);
                let sp = ideal_in(&a, ideal)?;
                let s = reg.submodule(&sp).map_err(me)?;
                ModuleEntry { module: s.module, inside: Some((reg, sp)), quotient_of: None }
            }
            ModuleDef::Socle { of } | ModuleDef::Radical { of } => {
                let m = self.module(of)?.module;
                let sp = if matches!(def, ModuleDef::Socle { .. }) { m.socle() } else { m.radical_sub() }.map_err(me)?;
                let s = m.submodule(&sp).map_err(me)?;
                ModuleEntry { module: s.module, inside: Some((m, sp)), quotient_of: None }
            }
            ModuleDef::Top { of } => {
                let m = self.module(of)?.module;
                let sp = m.radical_sub().map_err(me)?;
                let q = m.quotient(&sp).map_err(me)?;
                ModuleEntry { module: q.module, inside: None, quotient_of: Some((m, sp)) }
            }
            ModuleDef::Quotient { of, ideal } => {
                let m = self.module(of)?.module;
                let sp = m.ideal_times(&ideal_in(&m.parent, ideal)?);
                let q = m.quotient(&sp).map_err(me)?;
                ModuleEntry { module: q.module, inside: None, quotient_of: Some((m, sp)) }
            }
            ModuleDef::DirectSum { summands } => {
                let parts = summands.iter().map(|s| self.module(s).map(|e| e.module)).collect::<R<Vec<_>>>()?;
                let refs: Vec<&Module> = parts.iter().collect();
                plain(Module::direct_sum(&refs).map_err(me)?)
            }
            ModuleDef::Dual { of } => {
                let m = self.module(of)?.module;
                let op = Arc::new(opposite(&m.parent));
                plain(m.dual(&op))
            }
            ModuleDef::Actions { over, action } => {
                let a = self.algebra(over)?;
                if action.len() != a.dim() {
                    return Err(format!("need {} action matrices, one per basis element", a.dim()));
                }
                let d = action.first().map_or(0, |m| m.len());
                let mats = action.iter().map(|m| mat_in(self.field, m, d, d)).collect::<R<Vec<_>>>()?;
                plain(Module::new(a, mats, "").map_err(me)?)
            }
        })
    }

    fn map(&mut self, name: &str, def: &MapDef) -> R<ModuleHom> {
        let ee = |e: crate::endo::EndoError| format!("map {:?}: {}", name, e);
        match def {
            MapDef::Inclusion { of } => {
                let m = self.module(of)?;
                let (amb, sp) = m.inside.ok_or_else(|| format!("map {:?}: module {:?} is not declared as a submodule", name, of))?;
                ModuleHom::inclusion(&amb, &sp).map_err(ee)
            }
            MapDef::Projection { onto } => {
                let m = self.module(onto)?;
                let (amb, sp) = m.quotient_of.ok_or_else(|| format!("map {:?}: module {:?} is not declared as a quotient", name, onto))?;
                ModuleHom::projection(&amb, &sp).map_err(ee)
            }
            MapDef::Identity { of } => Ok(ModuleHom::identity(&self.module(of)?.module)),
            MapDef::Matrix { source, target, matrix } => {
                let (s, t) = (self.module(source)?.module, self.module(target)?.module);
                let m = mat_in(self.field, matrix, t.dim, s.dim).map_err(|e| format!("map {:?}: {}", name, e))?;
                ModuleHom::new(s, t, m).map_err(ee)
            }
        }
    }
}

fn invalid(msg: String) -> SpecError {
    // messages are prefixed with the object kind and quoted name
    for kind in ["algebra", "module", "map"] {
        if let Some(rest) = msg.strip_prefix(&format!("{} \"", kind)) {
            if let Some((name, tail)) = rest.split_once("\": ") {
                let kind = match kind {
                    "algebra" => "algebra",
                    "module" => "module",
                    _ => "map",
                };
                return SpecError::Invalid { kind, name: name.to_string(), msg: tail.to_string() };
            }
        }
    }
    SpecError::Invalid { kind: "document", name: String::new(), msg }
}

fn resolve(doc: SpecDoc) -> Result<Spec, SpecError> {
    let field = parse_field(&doc.field).map_err(|m| SpecError::Invalid { kind: "document", name: "field".into(), msg: m })?;
    let mut r = Resolver { doc: doc.clone(), field, algebras: BTreeMap::new(), modules: BTreeMap::new(), instances: BTreeMap::new(), visiting: BTreeSet::new() };
    for name in doc.algebras.keys() {
        r.algebra(name).map_err(invalid)?;
    }
    for name in doc.modules.keys() {
        r.module(name).map_err(invalid)?;
    }
    let mut maps = BTreeMap::new();
    for (name, def) in &doc.maps {
        maps.insert(name.clone(), r.map(name, def).map_err(invalid)?);
    }
    Ok(Spec { doc, field, algebras: r.algebras, modules: r.modules, maps, instances: r.instances })
}

/// A table document describing `a`, for `construct`.
pub fn table_doc(name: &str, a: &Algebra) -> SpecDoc {
    let lit = |v: &[Q]| -> ElemLit { v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (a.labels()[i].clone(), Rat(c.clone()))).collect() };
    let n = a.dim();
    let mut products = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = a.mul(&a.basis(i), &a.basis(j));
            if p.iter().any(|c| !c.is_zero()) {
                products.push(ProductDef { left: a.labels()[i].clone(), right: a.labels()[j].clone(), value: lit(&p) });
            }
        }
    }
    let def = AlgebraDef::Table(TableDef { labels: a.labels().to_vec(), unit: lit(a.unit()), products });
    SpecDoc { format: SPEC_FORMAT.into(), field: a.field().to_string(), main: Some(name.to_string()), algebras: BTreeMap::from([(name.to_string(), def)]), modules: BTreeMap::new(), maps: BTreeMap::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A5: &str = r#"{
  "format": "endok-spec/1",
  "algebras": {
    "A": {"quiver": {"vertices": ["1", "2"],
                     "arrows": [{"name": "alpha", "from": "1", "to": "2"}, {"name": "beta", "from": "2", "to": "1"}],
                     "relations": [{"beta*alpha": "1"}]}}
  }
}"#;

    #[test]
    fn ground_field() {
        let s = parse_spec(r#"{"format": "endok-spec/1", "algebras": {"k": {"family": {"ground": {}}}}}"#).unwrap();
        assert_eq!(s.algebras["k"].dim(), 1);
    }

    #[test]
    fn quiver_document() {
        let s = parse_spec(A5).unwrap();
        assert_eq!(s.algebras["A"].dim(), 5);
    }

    #[test]
    fn decimals_are_rejected() {
        let src = A5.replace("\"beta*alpha\": \"1\"", "\"beta*alpha\": \"0.5\"");
        let e = parse_spec(&src).unwrap_err();
        assert!(matches!(e.0[0], SpecError::NonRationalLiteral { line: 6, .. }), "{:?}", e);
        let src = A5.replace("\"beta*alpha\": \"1\"", "\"beta*alpha\": 0.5");
        let e = parse_spec(&src).unwrap_err();
        assert!(matches!(e.0[0], SpecError::NonRationalLiteral { .. }), "{:?}", e);
    }

    #[test]
    fn unresolved_names_are_listed() {
        let src = r#"{
  "format": "endok-spec/1",
  "algebras": {"E": {"corner": {"of": "B", "idempotent": {"e1": "1"}}}},
  "modules": {"M": {"regular": {"over": "C"}}}
}"#;
        let e = parse_spec(src).unwrap_err();
        assert_eq!(e.0.len(), 2);
        assert!(matches!(&e.0[0], SpecError::UnresolvedReference { name, line: 3, .. } if name == "B"));
        assert!(matches!(&e.0[1], SpecError::UnresolvedReference { name, line: 4, .. } if name == "C"));
    }

    #[test]
    fn schema_errors_have_positions() {
        let e = parse_spec("{\"format\": \"endok-spec/1\",\n \"algebras\": {\"A\": {\"bogus\": {}}}}").unwrap_err();
        assert!(matches!(e.0[0], SpecError::Schema { line: 2, .. }), "{:?}", e);
    }

    #[test]
    fn round_trip() {
        let d = parse_doc(A5).unwrap();
        assert_eq!(parse_doc(&emit_doc(&d)).unwrap(), d);
        let s = parse_spec(A5).unwrap();
        let t = table_doc("A", &s.algebras["A"]);
        let back = parse_spec(&emit_doc(&t)).unwrap();
        assert_eq!(*back.algebras["A"], *s.algebras["A"]);
    }

    #[test]
    fn cycles_are_reported() {
        let src = r#"{"format": "endok-spec/1", "algebras": {"A": {"opposite": {"of": "B"}}, "B": {"opposite": {"of": "A"}}}}"#;
        assert!(matches!(parse_spec(src).unwrap_err().0[0], SpecError::Invalid { .. }));
    }
}
