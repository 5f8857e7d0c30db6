//! Rank-level checks for the ring families that reduce to the ideal
//! splitting formulas.

use super::{rank_end, rank_of, DecompositionVerdict, KtError};
use crate::algebra::Provenance;
use crate::algebra::families::{invariants, ji_zero, morita_context, skew_group_ring, tiled, triangular_ring, Bimodule, MoritaData};
use crate::algebra::{ideal_generated, opposite, quotient, subalgebra, Algebra};
use crate::endo::{check_covariance, is_weak_trace, ModuleHom};
use crate::exactla::{Mat, Subspace};
use crate::homalg::tensor_over;
use crate::modules::{is_projective, right_regular, AlgRef, Module};
use crate::settings::Settings;
use crate::verdict::Verdict;
use std::sync::Arc;

/// A member of one of the families with a rank formula.
#[derive(Clone, Debug)]
pub enum CorollaryInstance {
    /// `[[R, M], [N, S]]` with pairings.
    MoritaContext(MoritaData),
    /// `[[R1, M], [0, R2]]`.
    Triangular { left: Algebra, right: Algebra, bimodule: Bimodule },
    /// `R` on the diagonal, powers of `J` below, the ideals `upper` above.
    Tiled { base: Algebra, j: Subspace, upper: Vec<Vec<Option<Subspace>>>, n: usize },
    /// `R` on the diagonal, `I` above and `J` below, with `JI = 0`.
    JiZero { base: Algebra, i: Subspace, j: Subspace, n: usize },
    /// `S*G` for a finite group of automorphisms.
    SkewGroup { base: Algebra, generators: Vec<Mat> },
    /// `End(R ⊕ soc R)`.
    Socle { base: Algebra },
}

impl CorollaryInstance {
    pub fn id(&self) -> &'static str {
        match self {
            CorollaryInstance::MoritaContext(_) => "morita-context",
            CorollaryInstance::Triangular { .. } => "triangular",
            CorollaryInstance::Tiled { .. } => "tiled",
            CorollaryInstance::JiZero { .. } => "ji-zero",
            CorollaryInstance::SkewGroup { .. } => "skew-group",
            CorollaryInstance::Socle { .. } => "socle",
        }
    }
}

fn projective_verdict(m: &Module, what: &str) -> Result<Verdict, KtError> {
    let p = m.dim == 0 || is_projective(m)?;
    Ok(Verdict::from_bool(p, format!("{} is projective", what), format!("{} is not projective", what)))
}

/// `J` as a left and as a right module over `a`.
fn ideal_sides(a: &AlgRef, j: &Subspace) -> Result<(Module, Module), KtError> {
    let left = Module::regular(a).submodule(j)?.module;
    let right = right_regular(a).1.submodule(j)?.module;
    Ok((left, right))
}

pub fn verify_corollary(inst: &CorollaryInstance, s: &Settings) -> Result<DecompositionVerdict, KtError> {
    let (seed, retries) = (s.seed, s.retries);
    let id = inst.id();
    match inst {
        CorollaryInstance::MoritaContext(data) => {
            let ring = morita_context(data)?;
            let r = Arc::new(data.r.clone());
            let sa = Arc::new(data.s.clone());
            let s_op = Arc::new(opposite(&data.s));
            let m = Module::new(s_op, data.m.right.clone(), "M")?;
            let n = Module::new(sa.clone(), data.n.left.clone(), "N")?;
            let t = tensor_over(&m, &n)?;
            let values: Vec<_> = data.phi.iter().flatten().cloned().collect();
            let mn = Subspace::span(r.dim(), r.field(), &values);
            let injective = Verdict::from_bool(t.dim == mn.dim(), "φ is injective", format!("dim M⊗N = {} but dim MN = {}", t.dim, mn.dim()));
            let hyps = vec![("φ injective".into(), injective), ("_S N projective".into(), projective_verdict(&n, "_S N")?)];
            let lhs = rank_of(ring.algebra, seed, retries)?;
            let rhs = vec![("S".to_string(), rank_of(data.s.clone(), seed, retries)?), ("R/MN".to_string(), rank_of(quotient(&r, &mn), seed, retries)?)];
            DecompositionVerdict::new(id, "rank T = rank S + rank R/MN", hyps, ("T", lhs), rhs, Vec::new())
        }
        CorollaryInstance::Triangular { left, right, bimodule } => {
            let ring = triangular_ring(left, right, bimodule)?;
            let lhs = rank_of(ring.algebra, seed, retries)?;
            let rhs = vec![("R1".to_string(), rank_of(left.clone(), seed, retries)?), ("R2".to_string(), rank_of(right.clone(), seed, retries)?)];
            DecompositionVerdict::new(id, "rank S = rank R1 + rank R2", Vec::new(), ("S", lhs), rhs, Vec::new())
        }
        CorollaryInstance::Tiled { base, j, upper, n } => {
            let ring = tiled(base, j, upper, *n)?;
            let r = Arc::new(base.clone());
            let (jl, _) = ideal_sides(&r, j)?;
            let hyps = vec![("_R J projective".into(), projective_verdict(&jl, "_R J")?)];
            let lhs = rank_of(ring.algebra, seed, retries)?;
            let mut rhs = vec![("R".to_string(), rank_of(base.clone(), seed, retries)?)];
            for k in 0..n.saturating_sub(1) {
                let ij = upper[k][k + 1].as_ref().expect("checked by the construction");
                let q = quotient(base, &base.product_space(ij, j));
                rhs.push((format!("R/I{}{}J", k + 1, k + 2), rank_of(q, seed, retries)?));
            }
            DecompositionVerdict::new(id, "rank S = rank R + Σ rank R/I(j,j+1)J", hyps, ("S", lhs), rhs, Vec::new())
        }
        CorollaryInstance::JiZero { base, i, j, n } => {
            let ring = ji_zero(base, i, j, *n)?;
            let r = Arc::new(base.clone());
            let (il, _) = ideal_sides(&r, i)?;
            let (_, jr) = ideal_sides(&r, j)?;
            let either = projective_verdict(&il, "_R I")?.or(projective_verdict(&jr, "J_R")?);
            let hyps = vec![("_R I or J_R projective".into(), either)];
            let lhs = rank_of(ring.algebra, seed, retries)?;
            let rr = rank_of(base.clone(), seed, retries)?;
            let rhs = (0..*n).map(|k| (format!("R[{}]", k + 1), rr)).collect();
            DecompositionVerdict::new(id, "rank S = n · rank R", hyps, ("S", lhs), rhs, Vec::new())
        }
        CorollaryInstance::SkewGroup { base, generators } => {
            let sg = skew_group_ring(base, generators)?;
            let e = sg.averaging_idempotent();
            let r = Arc::new(sg.algebra.clone());
            let j = ideal_generated(&r, &[e]).space;
            let (jl, jr) = ideal_sides(&r, &j)?;
            let either = projective_verdict(&jl, "_R ReR")?.or(projective_verdict(&jr, "ReR_R")?);
            let fixed = invariants(base, &sg.group);
            let (sgx, _) = subalgebra(base, &fixed.basis, base.unit(), Provenance::Derived("invariants".into()))?;
            let lhs = rank_of(sg.algebra.clone(), seed, retries)?;
            let rhs = vec![("R/ReR".to_string(), rank_of(quotient(&r, &j), seed, retries)?), ("S^G".to_string(), rank_of(sgx, seed, retries)?)];
            let notes = vec![format!("|G| = {}, dim ReR = {}", sg.group.len(), j.dim())];
            DecompositionVerdict::new(id, "rank R = rank R/ReR + rank S^G", vec![("_R ReR or ReR_R projective".into(), either)], ("R", lhs), rhs, notes)
        }
        CorollaryInstance::Socle { base } => {
            let r = Arc::new(base.clone());
            let reg = Module::regular(&r);
            let soc = reg.socle()?;
            let inc = ModuleHom::inclusion(&reg, &soc)?;
            let cov = check_covariance(&inc)?;
            let hyp = Verdict::from_bool(cov.covariant, "soc R ↪ R is covariant", "soc R ↪ R is not covariant");
            let notes = vec![format!("weak trace: {}", is_weak_trace(&inc)?)];
            let socm = &inc.source;
            let lhs = rank_end(&Module::direct_sum(&[&reg, socm])?, seed, retries)?;
            let rhs = vec![("End(soc R)".to_string(), rank_end(socm, seed, retries)?), ("R/soc R".to_string(), rank_of(quotient(base, &soc), seed, retries)?)];
            DecompositionVerdict::new(id, "rank End(R⊕soc R) = rank End(soc R) + rank R/soc R", vec![("soc R ↪ R covariant".into(), hyp)], ("End(R⊕soc R)", lhs), rhs, notes)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Classification;
    use super::*;
    use crate::algebra::families::{ground, upper_triangular_k};
    use crate::exactla::{FieldSpec, Q};

    const QQ: FieldSpec = FieldSpec::Rationals;

    fn k_bimodule() -> Bimodule {
        let k = ground(QQ);
        Bimodule::from_subspace(&k, &Subspace::full(1, QQ)).unwrap()
    }

    fn confirms(inst: CorollaryInstance, eq: &str) {
        let v = verify_corollary(&inst, &Settings::default()).unwrap();
        assert_eq!(v.classification, Classification::ConfirmsTheorem, "{:?}", v);
        assert_eq!(v.equation(), eq);
    }

    #[test]
    fn triangular_and_morita() {
        let k = ground(QQ);
        confirms(CorollaryInstance::Triangular { left: k.clone(), right: k.clone(), bimodule: k_bimodule() }, "2 = 1 + 1");
        let data = MoritaData { r: k.clone(), s: k.clone(), m: k_bimodule(), n: k_bimodule(), phi: vec![vec![vec![Q::one()]]], psi: vec![vec![vec![Q::one()]]] };
        confirms(CorollaryInstance::MoritaContext(data), "1 = 1 + 0");
        // zero pairings: M⊗N = k but MN = 0
        let data = MoritaData { r: k.clone(), s: k.clone(), m: k_bimodule(), n: k_bimodule(), phi: vec![vec![vec![Q::zero()]]], psi: vec![vec![vec![Q::zero()]]] };
        let v = verify_corollary(&CorollaryInstance::MoritaContext(data), &Settings::default()).unwrap();
        assert!(v.hypotheses[0].1.is_no());
    }

    #[test]
    fn tiled_and_ji_zero() {
        let t = upper_triangular_k(QQ, 2);
        let e11 = t.basis(0);
        let j = ideal_generated(&t, &[e11]).space;
        let full = Subspace::full(t.dim(), QQ);
        let upper = vec![vec![None, Some(full)], vec![None, None]];
        confirms(CorollaryInstance::Tiled { base: t.clone(), j, upper, n: 2 }, "3 = 2 + 1");
        let strict = Subspace::span(3, QQ, &[t.basis(1)]);
        confirms(CorollaryInstance::JiZero { base: t.clone(), i: strict.clone(), j: strict, n: 2 }, "4 = 2 + 2");
    }

    #[test]
    fn skew_group_swap() {
        let k = ground(QQ);
        let kk = crate::algebra::direct_product(&[&k, &k]).unwrap();
        let swap = Mat::from_i64(2, 2, &[0, 1, 1, 0], QQ);
        confirms(CorollaryInstance::SkewGroup { base: kk, generators: vec![swap] }, "1 = 0 + 1");
    }

    #[test]
    fn socle() {
        let r = crate::algebra::families::number_field(&crate::exactla::Poly::from_i64(&[0, 0, 1]));
        confirms(CorollaryInstance::Socle { base: r }, "2 = 1 + 1");
    }
}
