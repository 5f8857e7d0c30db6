//! Resolutions by summands of `Re`, built from the trace argument: when
//! `JM = M` for `J = ReR`, the vectors of `eM` generate `M`.

use super::ideals::quotient_sides;
use super::tor::tor;
use super::HomalgError;
use crate::algebra::decompose::{idempotent_classes, primitive_decomposition};
use crate::algebra::{corner, ideal_generated, Elem};
use crate::exactla::{vecops, Mat, Q};
use crate::modules::{is_projective, AlgRef, CoverMode, Module, PdStatus, ProjSum, Resolution};

#[derive(Clone, Debug)]
pub struct AddReResolution {
    /// Every term is a sum of indecomposable summands of `Re`.
    pub resolution: Resolution,
    /// Membership of each term in `add(Re)`, tested independently.
    pub membership: Vec<bool>,
}

/// Primitive orthogonal idempotents summing to `e`.
fn split_idempotent(a: &AlgRef, e: &[Q], seed: u64, retries: usize) -> Result<Vec<Elem>, HomalgError> {
    let frame = a.frame();
    if frame.primitive {
        let inside: Vec<Elem> = frame.idempotents.iter().filter(|p| a.mul(e, p) == **p && a.mul(p, e) == **p).cloned().collect();
        let sum = inside.iter().fold(a.zero(), |s, p| a.add(&s, p));
        if sum == e {
            return Ok(inside);
        }
    }
    let c = corner(a, e)?;
    let prims = primitive_decomposition(&c.algebra, seed, retries)?;
    Ok(prims.iter().map(|p| c.embed(p)).collect())
}

/// Whether `x` lies in `add(Re)`: projective with every top constituent
/// among those of `Re`.
pub fn add_re_member(a: &AlgRef, e: &[Q], x: &Module) -> Result<bool, HomalgError> {
    if x.dim == 0 {
        return Ok(true);
    }
    if !is_projective(x)? {
        return Ok(false);
    }
    let frame = a.frame();
    let re = Module::projective(a, e)?.module;
    let (tx, tre) = (x.top()?.module, re.top()?.module);
    for class in idempotent_classes(a, &frame.idempotents)? {
        let r = &frame.idempotents[class[0]];
        if tx.idempotent_rank(r) > 0 && tre.idempotent_rank(r) == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A resolution of `m` whose terms lie in `add(Re)`, after checking
/// `Tor_j(R/J, M) = 0` through `bound`.
pub fn add_re_resolution(a: &AlgRef, e: &[Q], m: &Module, bound: usize, seed: u64, retries: usize) -> Result<AddReResolution, HomalgError> {
    if !a.is_idempotent(e) || vecops::is_zero(e) {
        return Err(HomalgError::Alg(crate::algebra::AlgError::NotIdempotent));
    }
    let j = ideal_generated(a, &[e.to_vec()]).space;
    if !j.is_full() {
        let (right, _) = quotient_sides(a, &j)?;
        let prof = tor(&right, m, bound, seed, retries)?;
        if let Some((degree, dim)) = prof.first_nonzero(0) {
            return Err(HomalgError::PreconditionFailed { degree, dim });
        }
    }
    let f = m.field();
    let pieces = split_idempotent(a, e, seed, retries)?;
    let mut res = Resolution {
        parent: a.clone(),
        terms: Vec::new(),
        differentials: Vec::new(),
        augmentation: Vec::new(),
        syzygy_dims: vec![m.dim],
        status: PdStatus::UnknownBeyond(bound),
        mode: CoverMode::Redundant,
    };
    if m.dim == 0 {
        res.status = PdStatus::FiniteLength(0);
        return Ok(AddReResolution { resolution: res, membership: Vec::new() });
    }
    let mut cur = m.clone();
    let mut incl: Option<Mat> = None;
    for step in 0..=bound {
        // Generators from the e-parts, independent modulo the radical.
        let mut covered = cur.radical_sub()?;
        let mut chosen: Vec<(usize, Elem)> = Vec::new();
        for (k, p) in pieces.iter().enumerate() {
            for v in cur.act(p).col_vecs() {
                if covered.contains(&v) {
                    continue;
                }
                covered = covered.sum(&cur.generated_by(std::slice::from_ref(&v))).expect("same ambient");
                chosen.push((k, v));
            }
        }
        if !covered.is_full() {
            return Err(HomalgError::PreconditionFailed { degree: 0, dim: cur.dim - covered.dim() });
        }
        let proj = ProjSum::new(a, chosen.iter().map(|(k, _)| pieces[*k].clone()).collect())?;
        let gens: Vec<Elem> = chosen.into_iter().map(|(_, v)| v).collect();
        let mut epi = Mat::zeros(cur.dim, proj.dim(), f);
        for (g, (space, &o)) in proj.spaces.iter().zip(&proj.offsets).enumerate() {
            for (t, b) in space.basis.iter().enumerate() {
                for (i, c) in cur.act(b).mul_vec(&gens[g]).into_iter().enumerate() {
                    epi.set(i, o + t, c);
                }
            }
        }
        match &incl {
            None => res.augmentation = gens.clone(),
            Some(inc) => {
                let prev = res.terms.last().expect("previous term");
                res.differentials.push(gens.iter().map(|g| prev.to_tuple(&inc.mul_vec(g))).collect());
            }
        }
        let kernel = crate::modules::kernel(&epi);
        res.terms.push(proj);
        if kernel.is_zero() {
            res.status = PdStatus::FiniteLength(step);
            let membership = res.terms.iter().map(|t| add_re_member(a, e, &t.module)).collect::<Result<Vec<_>, _>>()?;
            return Ok(AddReResolution { resolution: res, membership });
        }
        let sub = res.terms.last().unwrap().module.submodule(&kernel)?;
        res.syzygy_dims.push(sub.module.dim);
        cur = sub.module;
        incl = Some(sub.inclusion);
    }
    Err(HomalgError::BoundExceeded(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::testmod::*;

    #[test]
    fn summands_of_re_have_length_zero() {
        let t = t();
        let e = basis(&t, "e11");
        let re = Module::projective(&t, &e).unwrap().module;
        let r = add_re_resolution(&t, &e, &re, 6, 0, 16).unwrap();
        assert_eq!(r.resolution.status, PdStatus::FiniteLength(0));
        let two = re.power(2).unwrap();
        let r = add_re_resolution(&t, &e, &two, 6, 0, 16).unwrap();
        assert_eq!(r.resolution.status, PdStatus::FiniteLength(0));
        assert_eq!(r.resolution.terms[0].len(), 2);
        assert!(r.membership.iter().all(|&x| x));
        assert!(r.resolution.verify(&two));
    }

    #[test]
    fn trace_ideal_over_t() {
        let t = t();
        let e = basis(&t, "e11");
        let j = ideal_generated(&t, &[e.clone()]).space;
        let jm = Module::left_ideal(&t, &j).unwrap().module;
        let r = add_re_resolution(&t, &e, &jm, 6, 0, 16).unwrap();
        assert!(r.resolution.verify(&jm));
        assert!(r.membership.iter().all(|&x| x));
        assert_eq!(r.resolution.terms[0].len(), 2);
    }

    #[test]
    fn precondition_is_checked() {
        let t = t();
        let e = basis(&t, "e11");
        let s2 = Module::simple_top(&t, &basis(&t, "e22")).unwrap();
        assert!(matches!(add_re_resolution(&t, &e, &s2, 6, 0, 16), Err(HomalgError::PreconditionFailed { degree: 0, .. })));
        let p2 = Module::projective(&t, &basis(&t, "e22")).unwrap().module;
        assert!(!add_re_member(&t, &e, &p2).unwrap());
    }
}
