//! Hom spaces and module isomorphism.
//!
//! `Hom(M, N)` is solved blockwise: a hom maps `e_a M` into `e_a N` for each
//! frame idempotent, and it only has to commute with the frame generators.

use super::{is_hom, same_parent, ModError, Module};
use crate::algebra::decompose::rng_for;
use crate::exactla::{Mat, Q};
use rand::Rng;

/// Basis and coordinate maps of the pieces `ρ(e_a)M`.
pub(crate) struct Split {
    /// `dim M × d_a`.
    pub bases: Vec<Mat>,
    /// `d_a × dim M`, vanishing on the other pieces.
    pub coords: Vec<Mat>,
}

pub(crate) fn split(m: &Module) -> Split {
    let frame = m.parent.frame();
    let mut bases = Vec::new();
    let mut coords = Vec::new();
    for e in &frame.idempotents {
        let p = m.act(e);
        let r = p.rref();
        bases.push(p.select_cols(&r.pivots));
        coords.push(r.mat.select_rows(&(0..r.rank).collect::<Vec<_>>()));
    }
    Split { bases, coords }
}

/// Basis of `Hom_A(M, N)` as `dim N × dim M` matrices.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<Mat>, ModError> {
    if !same_parent(&m.parent, &n.parent) {
        return Err(ModError::ParentMismatch);
    }
    let f = m.field();
    if m.dim == 0 || n.dim == 0 {
        return Ok(Vec::new());
    }
    let frame = m.parent.frame();
    let sm = split(m);
    let sn = split(n);
    let k = frame.len();
    let dm: Vec<usize> = sm.bases.iter().map(|b| b.cols).collect();
    let dn: Vec<usize> = sn.bases.iter().map(|b| b.cols).collect();
    let mut off = vec![0usize; k + 1];
    for a in 0..k {
        off[a + 1] = off[a] + dn[a] * dm[a];
    }
    let unknowns = off[k];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let var = |a: usize, r: usize, c: usize| off[a] + r * dm[a] + c;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (p, q, g) in &frame.generators {
        let (p, q) = (*p, *q);
        let gm = sm.coords[p].mul(&m.act(g)).mul(&sm.bases[q]);
        let gn = sn.coords[p].mul(&n.act(g)).mul(&sn.bases[q]);
        // F_p · gm − gn · F_q = 0, entry (r, c)
        for r in 0..dn[p] {
            for c in 0..dm[q] {
                let mut row = vec![Q::zero(); unknowns];
                for t in 0..dm[p] {
                    let v = gm.get(t, c);
                    if !v.is_zero() {
                        let i = var(p, r, t);
                        row[i] = f.add(&row[i], v);
                    }
                }
                for t in 0..dn[q] {
                    let v = gn.get(r, t);
                    if !v.is_zero() {
                        let i = var(q, t, c);
                        row[i] = f.sub(&row[i], v);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let sols: Vec<Vec<Q>> = if rows.is_empty() {
        (0..unknowns).map(|i| crate::exactla::vecops::unit(unknowns, i)).collect()
    } else {
        Mat::from_rows(rows, unknowns, f).nullspace()
    };
    let mut out = Vec::with_capacity(sols.len());
    for s in sols {
        let mut fm = Mat::zeros(n.dim, m.dim, f);
        for a in 0..k {
            if dm[a] == 0 || dn[a] == 0 {
                continue;
            }
            let mut blk = Mat::zeros(dn[a], dm[a], f);
            for r in 0..dn[a] {
                for c in 0..dm[a] {
                    blk.set(r, c, s[var(a, r, c)].clone());
                }
            }
            fm = fm.add(&sn.bases[a].mul(&blk).mul(&sm.coords[a]));
        }
        debug_assert!(is_hom(m, n, &fm));
        out.push(fm);
    }
    Ok(out)
}

/// Hom space by the full intertwining system over every basis element; an
/// independent oracle for [`hom_space`].
pub fn hom_space_naive(m: &Module, n: &Module) -> Result<Vec<Mat>, ModError> {
    if !same_parent(&m.parent, &n.parent) {
        return Err(ModError::ParentMismatch);
    }
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    let u = dm * dn;
    if u == 0 {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for (am, an) in m.action.iter().zip(&n.action) {
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![Q::zero(); u];
                for t in 0..dm {
                    let i = r * dm + t;
                    row[i] = f.add(&row[i], am.get(t, c));
                }
                for t in 0..dn {
                    let i = t * dm + c;
                    row[i] = f.sub(&row[i], an.get(r, t));
                }
                rows.push(row);
            }
        }
    }
    let sols = Mat::from_rows(rows, u, f).nullspace();
    Ok(sols.into_iter().map(|s| Mat::from_rows(s.chunks(dm).map(|c| c.to_vec()).collect(), dm, f)).collect())
}

#[derive(Clone, Debug)]
pub enum ModIso {
    /// An invertible intertwiner `M → N`.
    Yes(Mat),
    No(String),
    Unknown,
}

impl ModIso {
    pub fn is_yes(&self) -> bool {
        matches!(self, ModIso::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, ModIso::No(_))
    }
}

/// Dimensions of `ρ(e_a)M` over the frame idempotents.
pub fn frame_profile(m: &Module) -> Vec<usize> {
    m.parent.frame().idempotents.iter().map(|e| m.idempotent_rank(e)).collect()
}

/// Isomorphism test: `Yes` with a verified invertible intertwiner, `No` from
/// an invariant mismatch, `Unknown` after `retries` random combinations.
pub fn iso_test(m: &Module, n: &Module, seed: u64, retries: usize) -> Result<ModIso, ModError> {
    if !same_parent(&m.parent, &n.parent) {
        return Err(ModError::ParentMismatch);
    }
    let f = m.field();
    if m.dim != n.dim {
        return Ok(ModIso::No(format!("dimensions {} vs {}", m.dim, n.dim)));
    }
    if m.dim == 0 {
        return Ok(ModIso::Yes(Mat::zeros(0, 0, f)));
    }
    let (pm, pn) = (frame_profile(m), frame_profile(n));
    if pm != pn {
        return Ok(ModIso::No(format!("idempotent ranks {:?} vs {:?}", pm, pn)));
    }
    if let (Ok(rm), Ok(rn)) = (m.radical_series(), n.radical_series()) {
        if rm != rn {
            return Ok(ModIso::No(format!("radical series {:?} vs {:?}", rm, rn)));
        }
    }
    let h = hom_space(m, n)?;
    let hmm = hom_space(m, m)?.len();
    if h.len() != hmm {
        return Ok(ModIso::No(format!("dim Hom(M,M) = {} but dim Hom(M,N) = {}", hmm, h.len())));
    }
    let hnm = hom_space(n, m)?.len();
    let hnn = hom_space(n, n)?.len();
    if hnm != hnn {
        return Ok(ModIso::No(format!("dim Hom(N,N) = {} but dim Hom(N,M) = {}", hnn, hnm)));
    }
    let mut rng = rng_for(seed, 29);
    for t in 0..retries.max(1) {
        let mut cand = Mat::zeros(n.dim, m.dim, f);
        for b in &h {
            let c = if t == 0 { Q::one() } else { Q::from_i64(rng.gen_range(-4..=4)) };
            cand = cand.add(&b.scale(&c));
        }
        if cand.is_invertible() && is_hom(m, n, &cand) {
            return Ok(ModIso::Yes(cand));
        }
    }
    Ok(ModIso::Unknown)
}

#[cfg(test)]
mod tests {
    use super::super::testmod::*;
    use super::*;

    #[test]
    fn hom_dims_over_t() {
        let t = t();
        let p1 = Module::projective(&t, &basis(&t, "e11")).unwrap().module;
        let p2 = Module::projective(&t, &basis(&t, "e22")).unwrap().module;
        assert_eq!(hom_space(&p1, &p2).unwrap().len(), 1);
        assert_eq!(hom_space(&p2, &p1).unwrap().len(), 0);
        let reg = Module::regular(&t);
        // Hom(A, M) ≅ M
        assert_eq!(hom_space(&reg, &p2).unwrap().len(), 2);
        assert!(hom_space(&p2, &p2).unwrap().iter().any(|h| h.is_identity()) || hom_space(&p2, &p2).unwrap().len() == 1);
    }

    #[test]
    fn blockwise_matches_naive() {
        for a in [t(), a5(), b7(), dual()] {
            let reg = Module::regular(&a);
            let top = reg.top().unwrap().module;
            let soc = reg.submodule(&reg.socle().unwrap()).unwrap().module;
            let mods = [reg.clone(), top, soc];
            for x in &mods {
                for y in &mods {
                    assert_eq!(hom_space(x, y).unwrap().len(), hom_space_naive(x, y).unwrap().len());
                }
            }
        }
    }

    #[test]
    fn iso_tests() {
        let a = a5();
        let e1 = basis(&a, "e1");
        let p = Module::projective(&a, &e1).unwrap().module;
        // the same projective presented on a permuted basis
        let perm = Mat::from_i64(p.dim, p.dim, &{
            let mut v = vec![0; p.dim * p.dim];
            for i in 0..p.dim {
                v[i * p.dim + (p.dim - 1 - i)] = 1;
            }
            v
        }, a.field());
        let q = Module::new(a.clone(), p.action.iter().map(|m| perm.mul(m).mul(&perm)).collect(), "perm").unwrap();
        match iso_test(&p, &q, 0, 16).unwrap() {
            ModIso::Yes(f) => assert!(is_hom(&p, &q, &f) && f.is_invertible()),
            v => panic!("{:?}", v),
        }
        let e2 = basis(&a, "e2");
        let p2 = Module::projective(&a, &e2).unwrap().module;
        assert!(iso_test(&p, &p2, 0, 16).unwrap().is_no() || p.dim != p2.dim);
    }
}
