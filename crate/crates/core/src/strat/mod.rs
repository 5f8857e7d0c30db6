//! Chains of standardly stratifying ideals and quasi-heredity.
//!
//! A chain `0 = J_{n+1} ⊆ J_n ⊆ ... ⊆ J_1 = R` is built from the bottom:
//! each step picks an idempotent `e` of the current quotient `Q = R/J_{i+1}`
//! whose ideal `QeQ` is projective as a left `Q`-module, then passes to
//! `Q/QeQ`. The standard module of the step is `Qe`.

use crate::algebra::construct::quotient_lift;
use crate::algebra::decompose::idempotent_classes;
use crate::algebra::{ideal_generated, primitive_decomposition, quotient, AlgError, Elem, Tri};
use crate::endo::{end_algebra, EndoError};
use crate::exactla::{vecops, Subspace};
use crate::ktheory::{k0, rank_end, DecompositionVerdict, KtError};
use crate::modules::{is_projective, AlgRef, ModError, Module};
use crate::settings::Settings;
use crate::verdict::Verdict;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

pub use crate::algebra::division_ring_test;

#[derive(Debug, Error)]
pub enum StratError {
    #[error("search budget of {budget} candidates exhausted")]
    BudgetExhausted { budget: usize },
    #[error("chain does not re-validate: {0}")]
    InvalidChain(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Kt(#[from] KtError),
}

/// One step of a chain.
#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    /// The idempotent, in coordinates of the quotient `R/J_{i+1}`.
    #[serde(skip)]
    pub idempotent: Elem,
    pub idempotent_label: String,
    /// `J_{i+1}` as a subspace of `R`.
    #[serde(skip)]
    pub below: Subspace,
    /// `J_i` as a subspace of `R`.
    #[serde(skip)]
    pub ideal: Subspace,
    /// `dim J_i/J_{i+1}`.
    pub layer_dim: usize,
    /// The standard module `(R/J_{i+1})e`, over the quotient.
    #[serde(skip)]
    pub standard: Module,
    pub standard_dim: usize,
    #[serde(skip)]
    pub end_algebra: AlgRef,
    pub end_dim: usize,
    /// Whether `End(Δ)` is a division ring.
    pub division: Tri,
}

/// Stages listed bottom first: `stages[0]` generates `J_n`.
#[derive(Clone, Debug, Serialize)]
pub struct StratChain {
    pub stages: Vec<Stage>,
    pub complete: bool,
}

impl StratChain {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn all_division(&self) -> bool {
        self.stages.iter().all(|s| s.division == Tri::Yes)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StratSearch {
    pub chain: StratChain,
    /// Candidate idempotents examined.
    pub explored: usize,
    /// The whole search space was explored (or a chain of maximal length found).
    pub exhaustive: bool,
    /// Upper bound on chain length: the number of simple modules.
    pub max_length: usize,
}

/// Quotient `R/J` and its stage candidates.
struct Level {
    q: AlgRef,
    reps: Vec<Elem>,
}

fn level(a: &AlgRef, j: &Subspace, s: &Settings) -> Result<Level, StratError> {
    let q = Arc::new(quotient(a, j));
    if q.dim() == 0 {
        return Ok(Level { q, reps: Vec::new() });
    }
    let prims = primitive_decomposition(&q, s.seed, s.retries)?;
    let classes = idempotent_classes(&q, &prims)?;
    let reps = classes.iter().map(|c| prims[c[0]].clone()).collect();
    Ok(Level { q, reps })
}

/// Preimage in `R` of a subspace of `R/J`.
fn preimage(a: &AlgRef, j: &Subspace, k: &Subspace) -> Subspace {
    let lifts: Vec<Elem> = k.basis.iter().map(|v| quotient_lift(a, j, v)).collect();
    j.add_vectors(&lifts)
}

fn make_stage(a: &AlgRef, j: &Subspace, q: &AlgRef, e: Elem, k: &Subspace, s: &Settings) -> Result<Stage, StratError> {
    let delta = Module::projective(q, &e)?.module;
    let end = end_algebra(&delta)?.algebra;
    let division = division_ring_test(&end, s.seed, s.retries)?;
    Ok(Stage {
        idempotent_label: q.format_elem(&e),
        idempotent: e,
        below: j.clone(),
        ideal: preimage(a, j, k),
        layer_dim: k.dim(),
        standard_dim: delta.dim,
        standard: delta,
        end_dim: end.dim(),
        end_algebra: end,
        division,
    })
}

struct Search<'a> {
    a: &'a AlgRef,
    s: &'a Settings,
    qh_only: bool,
    explored: usize,
    out_of_budget: bool,
    /// A division test came back Unknown and its branch was dropped.
    pruned_unknown: bool,
    max_length: usize,
    best: Option<Vec<Stage>>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.out_of_budget || self.best.as_ref().is_some_and(|b| b.len() == self.max_length)
    }

    fn dfs(&mut self, j: &Subspace, path: &mut Vec<Stage>) -> Result<(), StratError> {
        let lv = level(self.a, j, self.s)?;
        if lv.q.dim() == 0 {
            if self.best.as_ref().map_or(true, |b| path.len() > b.len()) {
                self.best = Some(path.clone());
            }
            return Ok(());
        }
        let c = lv.reps.len();
        // every later stage removes at least one simple
        if let Some(b) = &self.best {
            if path.len() + c <= b.len() {
                return Ok(());
            }
        }
        let mut masks: Vec<u32> = (1..(1u32 << c)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let mut seen: Vec<Subspace> = Vec::new();
        for mask in masks {
            if self.done() {
                return Ok(());
            }
            let mut e = lv.q.zero();
            for (i, r) in lv.reps.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    e = lv.q.add(&e, r);
                }
            }
            let k = ideal_generated(&lv.q, &[e.clone()]).space;
            if seen.contains(&k) {
                continue;
            }
            seen.push(k.clone());
            if self.explored >= self.s.search_budget {
                self.out_of_budget = true;
                return Ok(());
            }
            self.explored += 1;
            if !is_projective(&Module::regular(&lv.q).submodule(&k)?.module)? {
                continue;
            }
            let stage = make_stage(self.a, j, &lv.q, e, &k, self.s)?;
            if self.qh_only {
                match stage.division {
                    Tri::Yes => {}
                    Tri::Unknown => {
                        self.pruned_unknown = true;
                        continue;
                    }
                    Tri::No => continue,
                }
            }
            let next = stage.ideal.clone();
            path.push(stage);
            self.dfs(&next, path)?;
            path.pop();
        }
        Ok(())
    }
}

fn run<'a>(a: &'a AlgRef, s: &'a Settings, qh_only: bool) -> Result<Search<'a>, StratError> {
    let max_length = if a.dim() == 0 { 0 } else { k0(a, s.seed, s.retries)?.rank };
    let mut st = Search { a, s, qh_only, explored: 0, out_of_budget: false, pruned_unknown: false, max_length, best: None };
    let zero = Subspace::zero(a.dim(), a.field());
    st.dfs(&zero, &mut Vec::new())?;
    Ok(st)
}

/// Longest chain of standardly stratifying ideals found by search. The
/// trivial chain `0 ⊆ R` always qualifies, so a chain is always returned
/// unless the budget runs out first.
pub fn find_stratification(a: &AlgRef, s: &Settings) -> Result<StratSearch, StratError> {
    let st = run(a, s, false)?;
    let exhaustive = !st.out_of_budget || st.best.as_ref().is_some_and(|b| b.len() == st.max_length);
    let stages = st.best.ok_or(StratError::BudgetExhausted { budget: s.search_budget })?;
    let chain = StratChain { stages, complete: true };
    validate_chain(a, &chain)?;
    Ok(StratSearch { chain, explored: st.explored, exhaustive, max_length: st.max_length })
}

#[derive(Clone, Debug, Serialize)]
pub struct QhReport {
    pub verdict: Verdict,
    pub chain: Option<StratChain>,
    pub explored: usize,
}

/// Searches only chains whose standard modules have division endomorphism
/// rings. `No` is claimed only after the whole space is explored.
pub fn is_quasi_hereditary(a: &AlgRef, s: &Settings) -> Result<QhReport, StratError> {
    let st = run(a, s, true)?;
    let explored = st.explored;
    if let Some(stages) = st.best {
        let chain = StratChain { stages, complete: true };
        validate_chain(a, &chain)?;
        let v = Verdict::yes(format!("chain of length {} with division endomorphism rings", chain.len()));
        return Ok(QhReport { verdict: v, chain: Some(chain), explored });
    }
    let verdict = if st.out_of_budget {
        Verdict::unknown(format!("budget of {} candidates exhausted", s.search_budget))
    } else if st.pruned_unknown {
        Verdict::unknown("a division-ring test was undecided")
    } else {
        Verdict::no(format!("no such chain among {} candidates (exhaustive)", explored))
    };
    Ok(QhReport { verdict, chain: None, explored })
}

/// Re-runs every certificate of a chain from scratch.
pub fn validate_chain(a: &AlgRef, chain: &StratChain) -> Result<(), StratError> {
    let bad = |s: String| Err(StratError::InvalidChain(s));
    let mut j = Subspace::zero(a.dim(), a.field());
    for (i, st) in chain.stages.iter().enumerate() {
        if st.below != j {
            return bad(format!("stage {} does not start where stage {} ends", i + 1, i));
        }
        let q: AlgRef = Arc::new(quotient(a, &j));
        if st.idempotent.len() != q.dim() || !q.is_idempotent(&st.idempotent) || vecops::is_zero(&st.idempotent) {
            return bad(format!("stage {}: not a nonzero idempotent of the quotient", i + 1));
        }
        let k = ideal_generated(&q, &[st.idempotent.clone()]).space;
        if preimage(a, &j, &k) != st.ideal || !st.ideal.contains_space(&j) || st.ideal == j {
            return bad(format!("stage {}: ideal is not generated by the idempotent", i + 1));
        }
        if !a.product_space(&st.ideal, &st.ideal).sum(&j).map_or(false, |p| p == st.ideal) {
            return bad(format!("stage {}: ideal is not idempotent modulo the stage below", i + 1));
        }
        if !is_projective(&Module::regular(&q).submodule(&k)?.module)? {
            return bad(format!("stage {}: ideal is not projective over the quotient", i + 1));
        }
        j = st.ideal.clone();
    }
    if chain.complete && !j.is_full() {
        return bad("chain does not reach R".into());
    }
    Ok(())
}

/// `rank K0(R) = Σ rank K0(End(Δ(j)))` along a complete chain.
pub fn k0_stratified_decomposition(a: &AlgRef, chain: &StratChain, s: &Settings) -> Result<DecompositionVerdict, StratError> {
    if !chain.complete {
        return Err(KtError::BadInput("chain does not reach R".into()).into());
    }
    let check = match validate_chain(a, chain) {
        Ok(()) => Verdict::yes(format!("{} stages re-validated", chain.len())),
        Err(StratError::InvalidChain(why)) => Verdict::no(why),
        Err(e) => return Err(e),
    };
    let lhs = if a.dim() == 0 { 0 } else { k0(a, s.seed, s.retries)?.rank };
    let mut rhs = Vec::new();
    for (i, st) in chain.stages.iter().enumerate() {
        rhs.push((format!("End(Δ{})", i + 1), rank_end(&st.standard, s.seed, s.retries)?));
    }
    Ok(DecompositionVerdict::new("stratified", "rank R = Σ rank End(Δ(j))", vec![("standardly stratifying chain".into(), check)], ("R", lhs), rhs, Vec::new())?)
}
