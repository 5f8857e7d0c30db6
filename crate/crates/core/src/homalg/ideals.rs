//! Homological and stratifying ideals `J = ReR`.

use super::tor::{tor, TorProfile};
use super::{tensor_over, HomalgError};
use crate::algebra::{corner, ideal_generated, opposite, Tri};
use crate::exactla::{vecops, Mat, Q, Subspace};
use crate::modules::{right_regular, AlgRef, Module};
use crate::verdict::Verdict;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomologicalReport {
    pub ideal_dim: usize,
    pub verdict: Verdict,
    /// `(j, dim Tor_j(R/J, R/J))` for the first nonvanishing `j ≥ 1`.
    pub witness: Option<(usize, usize)>,
    pub profile: Option<TorProfile>,
}

fn vanishing_verdict(p: &TorProfile, what: &str) -> (Verdict, Option<(usize, usize)>) {
    match p.vanishing_from(1) {
        Tri::Yes => {
            let how = match &p.pd_status {
                crate::modules::PdStatus::FiniteLength(n) => format!("finite resolution of length {}", n),
                s => format!("zeros over a full period, {}", s),
            };
            (Verdict::yes(format!("{} vanishes in all positive degrees ({})", what, how)), None)
        }
        Tri::No => {
            let (j, d) = p.first_nonzero(1).expect("a nonzero degree");
            (Verdict::no(format!("dim {} in degree {} is {}", what, j, d)), Some((j, d)))
        }
        Tri::Unknown => (Verdict::unknown(format!("{} vanishes through degree {}; no certificate beyond", what, p.top_degree())), None),
    }
}

fn check_idempotent(a: &AlgRef, e: &[Q]) -> Result<(), HomalgError> {
    if !a.is_idempotent(e) {
        return Err(HomalgError::Alg(crate::algebra::AlgError::NotIdempotent));
    }
    Ok(())
}

/// `R/J` as a right module (over `R^op`) and as a left module.
pub fn quotient_sides(a: &AlgRef, j: &Subspace) -> Result<(Module, Module), HomalgError> {
    let left = Module::regular(a).quotient(j)?.module;
    let (_, rr) = right_regular(a);
    let right = rr.quotient(j)?.module;
    Ok((right, left))
}

/// Whether `J = ReR` has `Tor_j^R(R/J, R/J) = 0` for all `j > 0`.
pub fn is_homological_ideal(a: &AlgRef, e: &[Q], bound: usize, seed: u64, retries: usize) -> Result<HomologicalReport, HomalgError> {
    check_idempotent(a, e)?;
    let j = ideal_generated(a, &[e.to_vec()]).space;
    if j.is_zero() || j.is_full() {
        let why = if j.is_zero() { "J = 0" } else { "J = R" };
        return Ok(HomologicalReport { ideal_dim: j.dim(), verdict: Verdict::yes(why), witness: None, profile: None });
    }
    let (right, left) = quotient_sides(a, &j)?;
    let profile = tor(&right, &left, bound, seed, retries)?;
    let (verdict, witness) = vanishing_verdict(&profile, "Tor(R/J, R/J)");
    Ok(HomologicalReport { ideal_dim: j.dim(), verdict, witness, profile: Some(profile) })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StratifyingReport {
    pub ideal_dim: usize,
    pub tensor_dim: usize,
    /// `Re ⊗_{eRe} eR → ReR` is bijective.
    pub multiplication: Verdict,
    /// `Tor_j^{eRe}(Re, eR) = 0` for `j ≥ 1`.
    pub tor_vanishing: Verdict,
    pub verdict: Verdict,
    pub profile: Option<TorProfile>,
}

/// The corner `C = eRe` with `Re` as a right `C`-module and `eR` as a left one.
pub struct CornerSides {
    pub corner: AlgRef,
    pub corner_op: AlgRef,
    /// `Re` over `C^op`, with its inclusion into `R`.
    pub re: crate::modules::Sub,
    /// `eR` over `C`, with its inclusion into `R`.
    pub er: crate::modules::Sub,
}

pub fn corner_sides(a: &AlgRef, e: &[Q]) -> Result<CornerSides, HomalgError> {
    let c = corner(a, e)?;
    let emb = Mat::from_cols(&c.embedding, a.dim(), a.field());
    let cor: AlgRef = Arc::new(c.algebra);
    let cor_op: AlgRef = Arc::new(opposite(&cor));
    let er = Module::regular(a).restrict_to_corner(&cor, &emb, e)?;
    let (_, rr) = right_regular(a);
    let re = rr.restrict_to_corner(&cor_op, &emb, e)?;
    Ok(CornerSides { corner: cor, corner_op: cor_op, re, er })
}

/// Whether `J = ReR` is a stratifying ideal; both conditions are reported.
pub fn is_stratifying(a: &AlgRef, e: &[Q], bound: usize, seed: u64, retries: usize) -> Result<StratifyingReport, HomalgError> {
    check_idempotent(a, e)?;
    let j = ideal_generated(a, &[e.to_vec()]).space;
    if vecops::is_zero(e) {
        let y = Verdict::yes("e = 0");
        return Ok(StratifyingReport { ideal_dim: 0, tensor_dim: 0, multiplication: y.clone(), tor_vanishing: y.clone(), verdict: y, profile: None });
    }
    let sides = corner_sides(a, e)?;
    let t = tensor_over(&sides.re.module, &sides.er.module)?;
    // Image of the multiplication map x ⊗ y ↦ xy.
    let mut prods = Vec::new();
    for x in &sides.re.space.basis {
        for y in &sides.er.space.basis {
            let p = a.mul(x, y);
            if !vecops::is_zero(&p) {
                prods.push(p);
            }
        }
    }
    let image = Subspace::span(a.dim(), a.field(), &prods);
    let multiplication = if image != j {
        Verdict::no("the products Re·eR do not span ReR")
    } else if t.dim == j.dim() {
        Verdict::yes(format!("dim Re ⊗ eR = dim ReR = {}", j.dim()))
    } else {
        Verdict::no(format!("dim Re ⊗ eR = {} but dim ReR = {}", t.dim, j.dim()))
    };
    let profile = tor(&sides.re.module, &sides.er.module, bound, seed, retries)?;
    let (tor_vanishing, _) = vanishing_verdict(&profile, "Tor^{eRe}(Re, eR)");
    let verdict = multiplication.clone().and(tor_vanishing.clone());
    Ok(StratifyingReport { ideal_dim: j.dim(), tensor_dim: t.dim, multiplication, tor_vanishing, verdict, profile: Some(profile) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::families::matrix_algebra;
    use crate::algebra::families::ground;
    use crate::exactla::FieldSpec;
    use crate::modules::testmod::*;

    #[test]
    fn homological_verdicts() {
        let t = t();
        assert!(is_homological_ideal(&t, &basis(&t, "e11"), 10, 0, 16).unwrap().verdict.is_yes());
        let a = a5();
        let r = is_homological_ideal(&a, &basis(&a, "e1"), 10, 0, 16).unwrap();
        assert!(r.verdict.is_no(), "{:?}", r.verdict);
        assert!(r.witness.unwrap().0 >= 1);
        let b = b7();
        assert!(is_homological_ideal(&b, &basis(&b, "e1"), 10, 0, 16).unwrap().verdict.is_yes());
    }

    #[test]
    fn stratifying_verdicts() {
        let t = t();
        let s = is_stratifying(&t, &basis(&t, "e11"), 10, 0, 16).unwrap();
        assert!(s.multiplication.is_yes() && s.tor_vanishing.is_yes());
        let a = a5();
        assert!(is_stratifying(&a, &basis(&a, "e1"), 10, 0, 16).unwrap().verdict.is_no());
        let m2 = arc(matrix_algebra(&ground(FieldSpec::Rationals), 2));
        let s = is_stratifying(&m2, &basis(&m2, "e11"), 10, 0, 16).unwrap();
        assert!(s.verdict.is_yes(), "{:?}", s);
        assert_eq!(s.ideal_dim, 4);
    }

    #[test]
    fn homological_iff_stratifying_on_small_algebras() {
        for a in [t(), a5(), b7(), dual()] {
            for i in 0..a.dim() {
                let e = a.basis(i);
                if !a.is_idempotent(&e) {
                    continue;
                }
                let h = is_homological_ideal(&a, &e, 8, 0, 16).unwrap().verdict;
                let s = is_stratifying(&a, &e, 8, 0, 16).unwrap().verdict;
                if !h.is_unknown() && !s.is_unknown() {
                    assert_eq!(h.is_yes(), s.is_yes(), "{:?} {}: {:?} vs {:?}", a, a.labels()[i], h, s);
                }
            }
        }
    }
}
