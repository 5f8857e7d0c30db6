//! Rank-level checks of the ideal and covariant splitting formulas.

use super::{rank_end, rank_of, DecompositionVerdict, KtError};
use crate::algebra::construct::is_ideal;
use crate::algebra::{corner, ideal_generated, quotient, Elem};
use crate::endo::{check_covariance, end_quotient, ModuleHom};
use crate::exactla::Subspace;
use crate::homalg::{add_re_member, is_homological_ideal};
use crate::modules::{is_projective, resolution, AlgRef, CoverMode, Module, PdStatus};
use crate::settings::Settings;
use crate::verdict::Verdict;
use serde::Serialize;

/// An ideal, optionally generated by an idempotent.
#[derive(Clone, Debug)]
pub struct IdealInput {
    pub space: Subspace,
    pub idempotent: Option<Elem>,
}

impl IdealInput {
    pub fn from_idempotent(a: &AlgRef, e: &[crate::exactla::Q]) -> Result<IdealInput, KtError> {
        if !a.is_idempotent(e) {
            return Err(KtError::BadInput(format!("{} is not idempotent", a.format_elem(e))));
        }
        Ok(IdealInput { space: ideal_generated(a, &[e.to_vec()]).space, idempotent: Some(e.to_vec()) })
    }

    pub fn from_space(a: &AlgRef, space: Subspace) -> Result<IdealInput, KtError> {
        if !is_ideal(a, &space) {
            return Err(KtError::BadInput("subspace is not a two-sided ideal".into()));
        }
        Ok(IdealInput { space, idempotent: None })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdealStatement {
    /// `End(R ⊕ I)` splits as `R/I` and `End(I)` when `I² = I`.
    IdealSplit,
    /// `R` splits as `R/I` and `End(I)` when `I² = I` and `_R I` is projective.
    IdealSplitProjective,
    /// `R` splits as `R/J` and `eRe` when `J = ReR` is homological with a
    /// finite resolution.
    IdempotentSplit,
}

impl IdealStatement {
    pub const ALL: [IdealStatement; 3] = [IdealStatement::IdealSplit, IdealStatement::IdealSplitProjective, IdealStatement::IdempotentSplit];

    pub fn id(self) -> &'static str {
        match self {
            IdealStatement::IdealSplit => "ideal-split",
            IdealStatement::IdealSplitProjective => "ideal-split-projective",
            IdealStatement::IdempotentSplit => "idempotent-split",
        }
    }

    pub fn from_id(s: &str) -> Option<IdealStatement> {
        IdealStatement::ALL.into_iter().find(|t| t.id() == s)
    }
}

/// Finite projective dimension as a verdict.
pub fn pd_verdict(status: &PdStatus) -> Verdict {
    match status {
        PdStatus::FiniteLength(n) => Verdict::yes(format!("projective dimension {}", n)),
        PdStatus::PeriodicHenceInfinite { start, period } => Verdict::no(format!("syzygies periodic from degree {} with period {}", start, period)),
        PdStatus::UnknownBeyond(n) => Verdict::unknown(format!("no finite resolution within length {}", n)),
    }
}

/// Checks one of the ideal splitting formulas at the level of `K0` ranks.
pub fn verify_ideal(a: &AlgRef, input: &IdealInput, statement: IdealStatement, s: &Settings) -> Result<DecompositionVerdict, KtError> {
    let i = &input.space;
    let (seed, retries) = (s.seed, s.retries);
    let reg = Module::regular(a);
    let ideal = reg.submodule(i)?.module;
    let idempotent = || {
        let sq = a.product_space(i, i);
        Verdict::from_bool(sq == *i, "I² = I", format!("dim I² = {} < dim I = {}", sq.dim(), i.dim()))
    };
    let projective = || -> Result<Verdict, KtError> {
        Ok(Verdict::from_bool(ideal.dim == 0 || is_projective(&ideal)?, "_R I is projective", "_R I is not projective"))
    };
    let r_mod_i = rank_of(quotient(a, i), seed, retries)?;
    let mut notes = Vec::new();
    match statement {
        IdealStatement::IdealSplit => {
            let lhs = rank_end(&Module::direct_sum(&[&reg, &ideal])?, seed, retries)?;
            let rhs = vec![("R/I".to_string(), r_mod_i), ("End(I)".to_string(), rank_end(&ideal, seed, retries)?)];
            DecompositionVerdict::new(statement.id(), "rank End(R⊕I) = rank R/I + rank End(I)", vec![("I² = I".into(), idempotent())], ("End(R⊕I)", lhs), rhs, notes)
        }
        IdealStatement::IdealSplitProjective => {
            let lhs = rank_of((**a).clone(), seed, retries)?;
            let rhs = vec![("R/I".to_string(), r_mod_i), ("End(I)".to_string(), rank_end(&ideal, seed, retries)?)];
            let hyps = vec![("I² = I".into(), idempotent()), ("_R I projective".into(), projective()?)];
            DecompositionVerdict::new(statement.id(), "rank R = rank R/I + rank End(I)", hyps, ("R", lhs), rhs, notes)
        }
        IdealStatement::IdempotentSplit => {
            let e = input.idempotent.as_ref().ok_or_else(|| KtError::BadInput("idempotent-split needs a generating idempotent".into()))?;
            let homological = is_homological_ideal(a, e, s.tor_bound, seed, retries)?.verdict;
            let finite = if ideal.dim == 0 {
                Verdict::yes("J = 0")
            } else {
                pd_verdict(&resolution(&ideal, s.resolution_bound(a.dim()), CoverMode::Minimal, seed, retries)?.status)
            };
            let lhs = rank_of((**a).clone(), seed, retries)?;
            let ere = corner(a, e)?.algebra;
            let rhs = vec![("R/J".to_string(), r_mod_i), ("eRe".to_string(), rank_of(ere, seed, retries)?)];
            if ideal.dim > 0 && is_projective(&ideal)? {
                // End(J) and eRe have the same rank once add(Re) = add(_R J).
                // Re ⊆ J is split by x ↦ xe, so only J ∈ add(Re) needs checking.
                let member = add_re_member(a, e, &ideal)?;
                notes.push(format!("add(Re) = add(_R J): {}", if member { "verified" } else { "not verified" }));
                notes.push(format!("rank End(J) = {}", rank_end(&ideal, seed, retries)?));
            }
            let hyps = vec![("J homological".into(), homological), ("_R J finite resolution".into(), finite)];
            DecompositionVerdict::new(statement.id(), "rank R = rank R/J + rank eRe", hyps, ("R", lhs), rhs, notes)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapStatement {
    /// Covariant `λ`: `End(X⊕Y)` splits as `End(X)/[Y]` and `End(Y)`.
    Covariant,
    /// `X`-covariant `λ`: splits as `End(X)` and `End(Y)/[X]`.
    XCovariant,
    /// Contravariant `λ`: splits as `End(X)` and `End(Y)/[X]`.
    Contravariant,
    /// `Y`-contravariant `λ`: splits as `End(X)/[Y]` and `End(Y)`.
    YContravariant,
}

impl MapStatement {
    pub const ALL: [MapStatement; 4] = [MapStatement::Covariant, MapStatement::XCovariant, MapStatement::Contravariant, MapStatement::YContravariant];

    pub fn id(self) -> &'static str {
        match self {
            MapStatement::Covariant => "covariant-split",
            MapStatement::XCovariant => "x-covariant-split",
            MapStatement::Contravariant => "contravariant-split",
            MapStatement::YContravariant => "y-contravariant-split",
        }
    }

    pub fn from_id(s: &str) -> Option<MapStatement> {
        MapStatement::ALL.into_iter().find(|t| t.id() == s)
    }
}

/// Checks one covariant splitting formula for `λ: Y → X`.
pub fn verify_map(lambda: &ModuleHom, statement: MapStatement, s: &Settings) -> Result<DecompositionVerdict, KtError> {
    let (x, y) = (&lambda.target, &lambda.source);
    let (seed, retries) = (s.seed, s.retries);
    let report = check_covariance(lambda)?;
    let why = |ok: bool, name: &str| {
        let failure = report.failures.iter().find(|f| f.condition.contains(name)).map(|f| f.detail.clone());
        Verdict::from_bool(ok, format!("λ is {}", name), failure.unwrap_or_else(|| format!("λ is not {}", name)))
    };
    let (hyp, x_side) = match statement {
        MapStatement::Covariant => (why(report.covariant, "covariant"), false),
        MapStatement::XCovariant => (why(report.x_covariant, "X-covariant"), true),
        MapStatement::Contravariant => (why(report.contravariant, "contravariant"), true),
        MapStatement::YContravariant => (why(report.y_contravariant, "Y-contravariant"), false),
    };
    let lhs = rank_end(&Module::direct_sum(&[x, y])?, seed, retries)?;
    let rhs = if x_side {
        vec![("End(X)".to_string(), rank_end(x, seed, retries)?), ("End(Y)/[X]".to_string(), quotient_rank(y, x, s)?)]
    } else {
        vec![("End(X)/[Y]".to_string(), quotient_rank(x, y, s)?), ("End(Y)".to_string(), rank_end(y, seed, retries)?)]
    };
    let stmt = format!("rank End(X⊕Y) = rank {} + rank {}", rhs[0].0, rhs[1].0);
    DecompositionVerdict::new(statement.id(), &stmt, vec![(hypothesis_name(statement).into(), hyp)], ("End(X⊕Y)", lhs), rhs, Vec::new())
}

fn hypothesis_name(t: MapStatement) -> &'static str {
    match t {
        MapStatement::Covariant => "λ covariant",
        MapStatement::XCovariant => "λ X-covariant",
        MapStatement::Contravariant => "λ contravariant",
        MapStatement::YContravariant => "λ Y-contravariant",
    }
}

/// `rank K0(End(M)/[N])`, where `[N]` is the ideal of maps factoring through `N`.
fn quotient_rank(m: &Module, n: &Module, s: &Settings) -> Result<usize, KtError> {
    if m.dim == 0 {
        return Ok(0);
    }
    rank_of(end_quotient(m, n)?, s.seed, s.retries)
}

#[cfg(test)]
mod tests {
    use super::super::Classification;
    use super::*;
    use crate::algebra::opposite;
    use crate::endo::ModuleHom;
    use crate::modules::testmod::*;

    fn strict_upper(t: &AlgRef) -> Subspace {
        Subspace::span(t.dim(), t.field(), &[basis(t, "e12")])
    }

    #[test]
    fn positive_ideal_instance() {
        let t = t();
        let input = IdealInput::from_idempotent(&t, &basis(&t, "e11")).unwrap();
        let s = Settings::default();
        for st in IdealStatement::ALL {
            let v = verify_ideal(&t, &input, st, &s).unwrap();
            assert_eq!(v.classification, Classification::ConfirmsTheorem, "{:?}", v);
        }
        let v = verify_ideal(&t, &input, IdealStatement::IdealSplitProjective, &s).unwrap();
        assert_eq!((v.lhs_rank, v.rhs_total()), (2, 2));
        assert_eq!(v.equation(), "2 = 1 + 1");
    }

    #[test]
    fn nilpotent_ideal_breaks_the_formula() {
        let t = t();
        let input = IdealInput::from_space(&t, strict_upper(&t)).unwrap();
        let v = verify_ideal(&t, &input, IdealStatement::IdealSplitProjective, &Settings::default()).unwrap();
        assert!(v.hypotheses[0].1.is_no());
        assert!(v.hypotheses[1].1.is_yes());
        assert_eq!(v.classification, Classification::HypothesisFailsFormulaFails);
        assert_eq!(v.equation(), "2 ≠ 2 + 1");
    }

    #[test]
    fn non_projective_idempotent_ideal() {
        let a = arc(opposite(&a5()));
        let e1 = basis(&a, "e1");
        let input = IdealInput::from_idempotent(&a, &e1).unwrap();
        let s = Settings::default();
        let v = verify_ideal(&a, &input, IdealStatement::IdealSplitProjective, &s).unwrap();
        assert!(v.hypotheses[0].1.is_yes());
        assert!(v.hypotheses[1].1.is_no());
        assert_eq!(v.rhs_ranks[0].1, 1);
        assert_eq!(v.rhs_ranks[1].1, 2);
        assert_eq!(v.classification, Classification::HypothesisFailsFormulaFails);
        let v = verify_ideal(&a, &input, IdealStatement::IdempotentSplit, &s).unwrap();
        assert!(v.hypotheses[0].1.is_no());
        // the first form only needs I² = I
        let v = verify_ideal(&a, &input, IdealStatement::IdealSplit, &s).unwrap();
        assert_eq!(v.classification, Classification::ConfirmsTheorem);
    }

    #[test]
    fn covariant_instances() {
        let s = Settings::default();
        let t = t();
        let reg = Module::regular(&t);
        let j = ideal_generated(&t, &[basis(&t, "e11")]).space;
        let lambda = ModuleHom::inclusion(&reg, &j).unwrap();
        let v = verify_map(&lambda, MapStatement::Covariant, &s).unwrap();
        assert_eq!(v.classification, Classification::ConfirmsTheorem);
        assert_eq!(v.equation(), "2 = 1 + 1");

        let r = dual();
        let reg = Module::regular(&r);
        let soc = reg.socle().unwrap();
        let lambda = ModuleHom::inclusion(&reg, &soc).unwrap();
        let v = verify_map(&lambda, MapStatement::Covariant, &s).unwrap();
        assert_eq!(v.classification, Classification::ConfirmsTheorem);
        assert_eq!(v.equation(), "2 = 1 + 1");

        let id = ModuleHom::identity(&reg);
        let v = verify_map(&id, MapStatement::Covariant, &s).unwrap();
        assert_eq!(v.classification, Classification::ConfirmsTheorem);
        assert_eq!(v.equation(), "1 = 0 + 1");
        for st in MapStatement::ALL {
            let v = verify_map(&id, st, &s).unwrap();
            assert_ne!(v.classification, Classification::Inconclusive);
        }
    }
}
