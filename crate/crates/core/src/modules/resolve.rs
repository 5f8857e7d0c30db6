//! Projective covers and projective resolutions.
//!
//! A projective here is a direct sum `⊕_j A e_j` of left ideals. A map
//! `A e_s → A e_r` is right multiplication by some `v ∈ e_s A e_r`, so a
//! differential is stored as a matrix of algebra elements.

use super::hom::iso_test;
use super::{AlgRef, ModError, Module};
use crate::algebra::decompose::idempotent_classes;
use crate::algebra::{AlgError, Elem};
use crate::exactla::{vecops, Mat, Q, Subspace};
use serde::{Deserialize, Serialize};

/// `⊕_j A e_j` with its concrete module structure.
#[derive(Clone, Debug)]
pub struct ProjSum {
    pub parent: AlgRef,
    pub idems: Vec<Elem>,
    /// `A e_j` inside `A`.
    pub spaces: Vec<Subspace>,
    pub offsets: Vec<usize>,
    pub module: Module,
}

impl ProjSum {
    pub fn new(parent: &AlgRef, idems: Vec<Elem>) -> Result<ProjSum, ModError> {
        let mut spaces = Vec::new();
        let mut mods = Vec::new();
        let mut offsets = Vec::new();
        let mut off = 0;
        for e in &idems {
            let s = Module::projective(parent, e)?;
            offsets.push(off);
            off += s.module.dim;
            spaces.push(s.space);
            mods.push(s.module);
        }
        let module = if mods.is_empty() {
            Module::zero(parent)
        } else {
            Module::direct_sum(&mods.iter().collect::<Vec<_>>())?
        };
        Ok(ProjSum { parent: parent.clone(), idems, spaces, offsets, module })
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }

    pub fn len(&self) -> usize {
        self.idems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idems.is_empty()
    }

    /// Components in `A` of a vector of the sum.
    pub fn to_tuple(&self, v: &[Q]) -> Vec<Elem> {
        let f = self.parent.field();
        let n = self.parent.dim();
        self.spaces
            .iter()
            .zip(&self.offsets)
            .map(|(s, &o)| {
                let mut x = vecops::zero(n);
                for (t, b) in s.basis.iter().enumerate() {
                    vecops::axpy(f, &mut x, &v[o + t], b);
                }
                x
            })
            .collect()
    }

    pub fn from_tuple(&self, t: &[Elem]) -> Elem {
        let mut v = vecops::zero(self.dim());
        for ((s, &o), x) in self.spaces.iter().zip(&self.offsets).zip(t) {
            let co = s.coords(x).expect("component lies in A e");
            for (i, c) in co.into_iter().enumerate() {
                v[o + i] = c;
            }
        }
        v
    }

    /// Matrix of the map to `target` given by right multiplication with
    /// `d[s][r] ∈ e_s A e_r` from summand `s` to summand `r`.
    pub fn map_matrix(&self, target: &ProjSum, d: &[Vec<Elem>]) -> Mat {
        let a = &self.parent;
        let f = a.field();
        let mut m = Mat::zeros(target.dim(), self.dim(), f);
        for (s, (space, &o)) in self.spaces.iter().zip(&self.offsets).enumerate() {
            for (t, b) in space.basis.iter().enumerate() {
                let comps: Vec<Elem> = (0..target.len()).map(|r| a.mul(b, &d[s][r])).collect();
                let col = target.from_tuple(&comps);
                for (i, c) in col.into_iter().enumerate() {
                    m.set(i, o + t, c);
                }
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverMode {
    /// Projective cover: kernel inside the radical.
    Minimal,
    /// One summand per basis vector of each `e_a M`; surjective but not minimal.
    Redundant,
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub proj: ProjSum,
    /// `gens[j] ∈ e_j M`, the image of `e_j` in summand `j`.
    pub gens: Vec<Elem>,
    /// `dim M × dim P`.
    pub epi: Mat,
    pub kernel: Subspace,
}

fn require_primitive_frame(m: &Module) -> Result<(), ModError> {
    let fr = m.parent.frame();
    if !fr.primitive {
        return Err(ModError::Alg(AlgError::UnsupportedField(m.field())));
    }
    Ok(())
}

/// A surjection from a sum of indecomposable projectives onto `m`.
pub fn projective_cover(m: &Module, mode: CoverMode) -> Result<Cover, ModError> {
    if m.dim == 0 {
        return Err(ModError::ZeroModule);
    }
    require_primitive_frame(m)?;
    let a = m.parent.clone();
    let frame = a.frame();
    let f = m.field();
    let mut chosen: Vec<(usize, Elem)> = Vec::new();
    match mode {
        CoverMode::Minimal => {
            let reps: Vec<usize> = idempotent_classes(&a, &frame.idempotents)?.into_iter().map(|c| c[0]).collect();
            let mut covered = m.radical_sub()?;
            for &r in &reps {
                let cols = m.act(&frame.idempotents[r]).col_vecs();
                for v in cols {
                    if covered.contains(&v) {
                        continue;
                    }
                    let gen = m.generated_by(std::slice::from_ref(&v));
                    covered = covered.sum(&gen).expect("same ambient");
                    chosen.push((r, v));
                }
            }
            if !covered.is_full() {
                return Err(ModError::Alg(AlgError::Malformed("cover generators do not span the top".into())));
            }
        }
        CoverMode::Redundant => {
            for (r, e) in frame.idempotents.iter().enumerate() {
                let p = m.act(e);
                let rr = p.rref();
                for c in p.select_cols(&rr.pivots).col_vecs() {
                    chosen.push((r, c));
                }
            }
        }
    }
    let proj = ProjSum::new(&a, chosen.iter().map(|(r, _)| frame.idempotents[*r].clone()).collect())?;
    let gens: Vec<Elem> = chosen.into_iter().map(|(_, v)| v).collect();
    let mut epi = Mat::zeros(m.dim, proj.dim(), f);
    for (j, (space, &o)) in proj.spaces.iter().zip(&proj.offsets).enumerate() {
        for (t, b) in space.basis.iter().enumerate() {
            let img = m.act(b).mul_vec(&gens[j]);
            for (i, c) in img.into_iter().enumerate() {
                epi.set(i, o + t, c);
            }
        }
    }
    if epi.rank() != m.dim {
        return Err(ModError::Alg(AlgError::Malformed("cover is not surjective".into())));
    }
    let kernel = super::kernel(&epi);
    Ok(Cover { proj, gens, epi, kernel })
}

/// Whether the module is projective (its projective cover is injective).
pub fn is_projective(m: &Module) -> Result<bool, ModError> {
    if m.dim == 0 {
        return Ok(true);
    }
    Ok(projective_cover(m, CoverMode::Minimal)?.kernel.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PdStatus {
    /// The resolution stops: `0 → P_n → ... → P_0`.
    FiniteLength(usize),
    /// Syzygy `Ω_{start+period} ≅ Ω_start` with `Ω_start` nonzero.
    PeriodicHenceInfinite { start: usize, period: usize },
    /// Neither finished nor certified periodic within the bound.
    UnknownBeyond(usize),
}

impl PdStatus {
    pub fn is_finite(&self) -> bool {
        matches!(self, PdStatus::FiniteLength(_))
    }
}

impl std::fmt::Display for PdStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PdStatus::FiniteLength(n) => write!(f, "FiniteLength({})", n),
            PdStatus::PeriodicHenceInfinite { start, period } => write!(f, "PeriodicHenceInfinite(start {}, period {})", start, period),
            PdStatus::UnknownBeyond(b) => write!(f, "UnknownBeyond({})", b),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub parent: AlgRef,
    /// `P_0, P_1, ...`.
    pub terms: Vec<ProjSum>,
    /// `differentials[j-1]` maps `P_j → P_{j-1}`; entry `[s][r] ∈ e_s A e_r`.
    pub differentials: Vec<Vec<Vec<Elem>>>,
    /// Images of the summand idempotents of `P_0` in `M`.
    pub augmentation: Vec<Elem>,
    /// `dim Ω_j` for the computed syzygies, `Ω_0 = M`.
    pub syzygy_dims: Vec<usize>,
    pub status: PdStatus,
    pub mode: CoverMode,
}

impl Resolution {
    pub fn differential_matrix(&self, j: usize) -> Mat {
        self.terms[j].map_matrix(&self.terms[j - 1], &self.differentials[j - 1])
    }

    pub fn augmentation_matrix(&self, m: &Module) -> Mat {
        let p = &self.terms[0];
        let mut eps = Mat::zeros(m.dim, p.dim(), m.field());
        for (j, (space, &o)) in p.spaces.iter().zip(&p.offsets).enumerate() {
            for (t, b) in space.basis.iter().enumerate() {
                for (i, c) in m.act(b).mul_vec(&self.augmentation[j]).into_iter().enumerate() {
                    eps.set(i, o + t, c);
                }
            }
        }
        eps
    }

    /// Length of the computed part.
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    /// Exactness at every computed position, projectivity of every term
    /// (by construction) and termination when finite.
    pub fn verify(&self, m: &Module) -> bool {
        if m.dim == 0 {
            return self.terms.is_empty();
        }
        let eps = self.augmentation_matrix(m);
        if eps.rank() != m.dim {
            return false;
        }
        let mut prev_kernel = super::kernel(&eps);
        for j in 1..self.terms.len() {
            let d = self.differential_matrix(j);
            if super::image(&d) != prev_kernel {
                return false;
            }
            prev_kernel = super::kernel(&d);
        }
        match self.status {
            PdStatus::FiniteLength(_) => prev_kernel.is_zero(),
            _ => true,
        }
    }

    /// Minimality: every differential maps into the radical of its target.
    pub fn is_minimal(&self) -> Result<bool, ModError> {
        for j in 1..self.terms.len() {
            let d = self.differential_matrix(j);
            let rad = self.terms[j - 1].module.radical_sub()?;
            if !rad.contains_space(&super::image(&d)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Iterated covers of `m` for at most `bound` steps.
///
/// In minimal mode a syzygy isomorphic to an earlier nonzero one certifies
/// infinite projective dimension.
pub fn resolution(m: &Module, bound: usize, mode: CoverMode, seed: u64, retries: usize) -> Result<Resolution, ModError> {
    resolve(m, bound, mode, Some((seed, retries)))
}

/// Covers through `P_len` (or until a kernel vanishes) without looking for
/// periodicity; the status is `FiniteLength` or `UnknownBeyond(len)`.
pub fn resolution_to_length(m: &Module, len: usize, mode: CoverMode) -> Result<Resolution, ModError> {
    resolve(m, len, mode, None)
}

/// Largest syzygy a resolution will carry. Past it the status is
/// `UnknownBeyond(j)`: radical-square-zero algebras with several loops have
/// syzygies growing geometrically and would otherwise stall every caller.
pub const MAX_SYZYGY_DIM: usize = 64;

fn resolve(m: &Module, bound: usize, mode: CoverMode, period_check: Option<(u64, usize)>) -> Result<Resolution, ModError> {
    let parent = m.parent.clone();
    let mut res = Resolution {
        parent: parent.clone(),
        terms: Vec::new(),
        differentials: Vec::new(),
        augmentation: Vec::new(),
        syzygy_dims: vec![m.dim],
        status: PdStatus::UnknownBeyond(bound),
        mode,
    };
    if m.dim == 0 {
        res.status = PdStatus::FiniteLength(0);
        return Ok(res);
    }
    let mut cur = m.clone();
    let mut incl: Option<Mat> = None;
    let mut syzygies: Vec<Module> = Vec::new();
    for j in 0..=bound {
        let cover = projective_cover(&cur, mode)?;
        match &incl {
            None => res.augmentation = cover.gens.clone(),
            Some(inc) => {
                let prev = res.terms.last().expect("previous term");
                let d: Vec<Vec<Elem>> = cover.gens.iter().map(|g| prev.to_tuple(&inc.mul_vec(g))).collect();
                res.differentials.push(d);
            }
        }
        let kernel = cover.kernel.clone();
        res.terms.push(cover.proj);
        if kernel.is_zero() {
            res.status = PdStatus::FiniteLength(j);
            return Ok(res);
        }
        if j == bound {
            break;
        }
        if kernel.dim() > MAX_SYZYGY_DIM {
            res.status = PdStatus::UnknownBeyond(j);
            return Ok(res);
        }
        let sub = res.terms.last().unwrap().module.submodule(&kernel)?;
        res.syzygy_dims.push(sub.module.dim);
        if let (CoverMode::Minimal, Some((seed, retries))) = (mode, period_check) {
            for (i, earlier) in syzygies.iter().enumerate() {
                if earlier.dim == sub.module.dim && iso_test(earlier, &sub.module, seed, retries)?.is_yes() {
                    res.status = PdStatus::PeriodicHenceInfinite { start: i + 1, period: j + 1 - (i + 1) };
                    return Ok(res);
                }
            }
        }
        syzygies.push(sub.module.clone());
        cur = sub.module;
        incl = Some(sub.inclusion);
    }
    res.status = PdStatus::UnknownBeyond(bound);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::super::testmod::*;
    use super::*;
    use crate::algebra::ideal_generated;

    #[test]
    fn cover_of_simple_over_t() {
        let t = t();
        let s2 = Module::simple_top(&t, &basis(&t, "e22")).unwrap();
        let c = projective_cover(&s2, CoverMode::Minimal).unwrap();
        assert_eq!(c.proj.dim(), 2);
        assert_eq!(c.kernel.dim(), 1);
        let r = resolution(&s2, 6, CoverMode::Minimal, 0, 16).unwrap();
        assert_eq!(r.status, PdStatus::FiniteLength(1));
        assert!(r.verify(&s2));
        assert!(r.is_minimal().unwrap());
        let s1 = Module::simple_top(&t, &basis(&t, "e11")).unwrap();
        let c = projective_cover(&Module::direct_sum(&[&s1, &s1]).unwrap(), CoverMode::Minimal).unwrap();
        assert_eq!(c.proj.len(), 2);
        assert!(c.kernel.is_zero());
    }

    #[test]
    fn projectivity_verdicts() {
        let a = a5();
        assert!(is_projective(&Module::regular(&a)).unwrap());
        let i = ideal_generated(&a, &[basis(&a, "e1")]);
        assert_eq!(i.dim(), 4);
        let im = Module::left_ideal(&a, &i.space).unwrap().module;
        assert!(!is_projective(&im).unwrap());
        let t = t();
        let it = ideal_generated(&t, &[basis(&t, "e11")]);
        assert!(is_projective(&Module::left_ideal(&t, &it.space).unwrap().module).unwrap());
    }

    #[test]
    fn periodic_resolution_over_b() {
        // representations of the quiver are modules over the opposite ring
        // when paths concatenate left to right
        let b = arc(crate::algebra::opposite(&b7()));
        let i = ideal_generated(&b, &[basis(&b, "e1")]);
        let q = Module::regular(&b).quotient(&i.space).unwrap().module;
        assert_eq!(q.dim, 1);
        let r = resolution(&q, 14, CoverMode::Minimal, 0, 16).unwrap();
        assert!(matches!(r.status, PdStatus::PeriodicHenceInfinite { .. }), "{:?}", r.status);
        assert!(r.verify(&q));
        // the other side has a projective ideal
        let b = b7();
        let i = ideal_generated(&b, &[basis(&b, "e1")]);
        let q = Module::regular(&b).quotient(&i.space).unwrap().module;
        let r = resolution(&q, 14, CoverMode::Minimal, 0, 16).unwrap();
        assert_eq!(r.status, PdStatus::FiniteLength(1));
    }

    #[test]
    fn redundant_resolution_is_exact() {
        let a = a5();
        let s = Module::simple_top(&a, &basis(&a, "e2")).unwrap();
        let r = resolution(&s, 8, CoverMode::Redundant, 0, 16).unwrap();
        assert!(r.verify(&s));
        let rm = resolution(&s, 8, CoverMode::Minimal, 0, 16).unwrap();
        assert!(rm.verify(&s));
        assert!(rm.status.is_finite());
    }

    #[test]
    fn growing_syzygies_hit_the_cap() {
        use crate::algebra::{path_algebra, QuiverPresentation};
        use crate::exactla::{FieldSpec, Q};
        // one vertex, three loops, radical square zero: Ω_j = S^(3^j)
        let arrows = (0..3).map(|i| (format!("x{}", i), 0, 0)).collect();
        let relations = (0..3).flat_map(|i| (0..3).map(move |j| vec![(Q::one(), vec![i, j])])).collect();
        let q = QuiverPresentation { vertices: vec!["1".into()], arrows, relations, nilpotency_bound: 4 };
        let a = arc(path_algebra(&q, FieldSpec::Rationals).unwrap());
        let s = Module::regular(&a).top().unwrap().module;
        let r = resolution(&s, 12, CoverMode::Minimal, 0, 16).unwrap();
        assert_eq!(r.status, PdStatus::UnknownBeyond(3));
        assert!(r.verify(&s));
    }
}
