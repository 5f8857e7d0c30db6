//! Rank of `K0` and rank-level checks of the splitting formulas.
//!
//! Everything here is at the level of `K0` ranks: the number of
//! isomorphism classes of indecomposable projectives.

pub mod corollary;
pub mod theorems;

pub use corollary::{verify_corollary, CorollaryInstance};
pub use theorems::{pd_verdict, verify_ideal, verify_map, IdealInput, IdealStatement, MapStatement};

use crate::algebra::decompose::{block_count, idempotent_classes};
use crate::algebra::{primitive_decomposition, AlgError, Algebra, Elem};
use crate::endo::{end_algebra, EndoError};
use crate::exactla::{Q, Subspace};
use crate::homalg::HomalgError;
use crate::modules::{hom_space, AlgRef, ModError, Module};
use crate::verdict::Verdict;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KtError {
    /// All hypotheses were certified but the rank equation failed. This can
    /// only come from a bug.
    #[error("soundness tripwire: {0}")]
    Tripwire(String),
    #[error("independent rank computations disagree: {0}")]
    CrossCheck(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
}

#[derive(Clone, Debug, Serialize)]
pub struct K0Report {
    pub rank: usize,
    /// One representative idempotent per class of indecomposable projectives.
    pub class_labels: Vec<String>,
    #[serde(skip)]
    pub representatives: Vec<Elem>,
    /// Isomorphism classes of simple modules, counted by Schur's lemma.
    pub simple_count: usize,
    /// Simple components of `A/rad A`.
    pub block_count: usize,
    /// `cartan[i][j] = dim Hom(P_i, P_j)`.
    pub cartan: Vec<Vec<usize>>,
}

/// `K0` rank with three independent counts that must agree.
pub fn k0(a: &AlgRef, seed: u64, retries: usize) -> Result<K0Report, KtError> {
    if a.dim() == 0 {
        return Ok(K0Report { rank: 0, class_labels: Vec::new(), representatives: Vec::new(), simple_count: 0, block_count: 0, cartan: Vec::new() });
    }
    let prims = primitive_decomposition(a, seed, retries)?;
    let classes = idempotent_classes(a, &prims)?;
    let reps: Vec<Elem> = classes.iter().map(|c| prims[c[0]].clone()).collect();

    // Simples up to isomorphism: nonzero Hom between simples means isomorphic.
    let simples: Vec<Module> = prims.iter().map(|e| Module::simple_top(a, e)).collect::<Result<_, _>>()?;
    let mut simple_reps: Vec<&Module> = Vec::new();
    for s in &simples {
        let mut seen = false;
        for r in &simple_reps {
            if !hom_space(s, r)?.is_empty() {
                seen = true;
                break;
            }
        }
        if !seen {
            simple_reps.push(s);
        }
    }
    let blocks = block_count(a, seed, retries)?;

    let rank = reps.len();
    if simple_reps.len() != rank || blocks != rank {
        return Err(KtError::CrossCheck(format!("{} projective classes, {} simple classes, {} blocks of A/rad", rank, simple_reps.len(), blocks)));
    }
    let cartan = reps
        .iter()
        .map(|ei| reps.iter().map(|ej| peirce_dim(a, ei, ej)).collect())
        .collect();
    Ok(K0Report { rank, class_labels: reps.iter().map(|e| a.format_elem(e)).collect(), representatives: reps, simple_count: simple_reps.len(), block_count: blocks, cartan })
}

/// `dim e A f`.
fn peirce_dim(a: &Algebra, e: &[Q], f: &[Q]) -> usize {
    let v: Vec<Elem> = (0..a.dim()).map(|i| a.mul(&a.mul(e, &a.basis(i)), f)).collect();
    Subspace::span(a.dim(), a.field(), &v).dim()
}

pub fn rank_of(a: Algebra, seed: u64, retries: usize) -> Result<usize, KtError> {
    Ok(k0(&Arc::new(a), seed, retries)?.rank)
}

/// `rank K0(End(M))`, zero for the zero module.
pub fn rank_end(m: &Module, seed: u64, retries: usize) -> Result<usize, KtError> {
    if m.dim == 0 {
        return Ok(0);
    }
    Ok(k0(&end_algebra(m)?.algebra, seed, retries)?.rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    ConfirmsTheorem,
    HypothesisFailsFormulaFails,
    HypothesisFailsFormulaHolds,
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::ConfirmsTheorem => "ConfirmsTheorem",
            Classification::HypothesisFailsFormulaFails => "HypothesisFailsFormulaFails",
            Classification::HypothesisFailsFormulaHolds => "HypothesisFailsFormulaHolds",
            Classification::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// A rank-level comparison `lhs = Σ rhs` with its gating hypotheses.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionVerdict {
    pub theorem_id: String,
    /// The rank equation in words.
    pub statement: String,
    pub hypotheses: Vec<(String, Verdict)>,
    pub lhs: String,
    pub lhs_rank: usize,
    pub rhs_ranks: Vec<(String, usize)>,
    pub equation_holds: bool,
    pub classification: Classification,
    pub notes: Vec<String>,
}

impl DecompositionVerdict {
    /// Classifies the comparison; certified hypotheses with a failing
    /// equation abort with [`KtError::Tripwire`].
    pub fn new(
        theorem_id: &str,
        statement: &str,
        hypotheses: Vec<(String, Verdict)>,
        lhs: (&str, usize),
        rhs_ranks: Vec<(String, usize)>,
        notes: Vec<String>,
    ) -> Result<DecompositionVerdict, KtError> {
        let total: usize = rhs_ranks.iter().map(|r| r.1).sum();
        let equation_holds = lhs.1 == total;
        let all_yes = hypotheses.iter().all(|h| h.1.is_yes());
        let some_no = hypotheses.iter().any(|h| h.1.is_no());
        let classification = if all_yes && equation_holds {
            Classification::ConfirmsTheorem
        } else if all_yes {
            return Err(KtError::Tripwire(format!("{}: all hypotheses certified but {} = {} ≠ {}", theorem_id, lhs.0, lhs.1, total)));
        } else if some_no && equation_holds {
            Classification::HypothesisFailsFormulaHolds
        } else if some_no {
            Classification::HypothesisFailsFormulaFails
        } else {
            Classification::Inconclusive
        };
        Ok(DecompositionVerdict {
            theorem_id: theorem_id.into(),
            statement: statement.into(),
            hypotheses,
            lhs: lhs.0.into(),
            lhs_rank: lhs.1,
            rhs_ranks,
            equation_holds,
            classification,
            notes,
        })
    }

    pub fn rhs_total(&self) -> usize {
        self.rhs_ranks.iter().map(|r| r.1).sum()
    }

    /// `2 = 1 + 1` or `2 ≠ 2 + 1`.
    pub fn equation(&self) -> String {
        let rhs: Vec<String> = self.rhs_ranks.iter().map(|r| r.1.to_string()).collect();
        let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
        format!("{} {} {}", self.lhs_rank, if self.equation_holds { "=" } else { "≠" }, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::families::{ground, matrix_algebra, number_field};
    use crate::exactla::{FieldSpec, Poly};
    use crate::modules::testmod::*;

    #[test]
    fn ranks() {
        let k = arc(ground(FieldSpec::Rationals));
        assert_eq!(k0(&k, 0, 64).unwrap().rank, 1);
        assert_eq!(k0(&t(), 0, 64).unwrap().rank, 2);
        assert_eq!(k0(&a5(), 0, 64).unwrap().rank, 2);
        assert_eq!(k0(&dual(), 0, 64).unwrap().rank, 1);
        let qi = arc(number_field(&Poly::from_i64(&[1, 0, 1])));
        assert_eq!(k0(&qi, 0, 64).unwrap().rank, 1);
    }

    #[test]
    fn cartan_and_morita() {
        let k = ground(FieldSpec::Rationals);
        let m3 = arc(matrix_algebra(&k, 3));
        let r = k0(&m3, 0, 64).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.cartan, vec![vec![1]]);
        let t = t();
        let r = k0(&t, 0, 64).unwrap();
        let mut c = r.cartan.clone();
        c.sort();
        assert_eq!(c.iter().flatten().sum::<usize>(), 3);
        // M_2(T) has the same rank
        assert_eq!(k0(&arc(matrix_algebra(&t, 2)), 0, 64).unwrap().rank, 2);
        // and so does End_T(T ⊕ P) for a progenerator
        let reg = Module::regular(&t);
        let p = Module::projective(&t, &basis(&t, "e22")).unwrap().module;
        assert_eq!(rank_end(&Module::direct_sum(&[&reg, &p]).unwrap(), 0, 64).unwrap(), 2);
    }

    #[test]
    fn semisimple_cartan_is_identity() {
        let k = ground(FieldSpec::Rationals);
        let kk = arc(crate::algebra::direct_product(&[&k, &k, &k]).unwrap());
        let r = k0(&kk, 0, 64).unwrap();
        assert_eq!(r.rank, 3);
        for (i, row) in r.cartan.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(c, usize::from(i == j));
            }
        }
    }

    #[test]
    fn classification_rules() {
        let y = || ("h".to_string(), Verdict::yes(""));
        let n = || ("h".to_string(), Verdict::no(""));
        let u = || ("h".to_string(), Verdict::unknown(""));
        let r = |v: Vec<(String, Verdict)>, l: usize| DecompositionVerdict::new("t", "", v, ("x", l), vec![("a".into(), 1), ("b".into(), 1)], vec![]);
        assert_eq!(r(vec![y()], 2).unwrap().classification, Classification::ConfirmsTheorem);
        assert!(matches!(r(vec![y()], 3), Err(KtError::Tripwire(_))));
        assert_eq!(r(vec![y(), n()], 3).unwrap().classification, Classification::HypothesisFailsFormulaFails);
        assert_eq!(r(vec![n()], 2).unwrap().classification, Classification::HypothesisFailsFormulaHolds);
        assert_eq!(r(vec![u()], 3).unwrap().classification, Classification::Inconclusive);
        assert_eq!(r(vec![y()], 2).unwrap().equation(), "2 = 1 + 1");
    }
}
