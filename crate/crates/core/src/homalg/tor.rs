//! `Tor_j^A(M, N)` as the homology of `M ⊗_A P_•` for a projective
//! resolution `P_•` of `N`.
//!
//! With `P_j = ⊕ A e_s`, `M ⊗_A A e_s = M e_s`, and the differential given by
//! right multiplication with `v ∈ e_s A e_r` becomes `u ↦ u·v`.

use super::tensor::check_sides;
use super::HomalgError;
use crate::algebra::Tri;
use crate::exactla::{Mat, Subspace};
use crate::modules::{resolution, resolution_to_length, CoverMode, Module, PdStatus, Resolution};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorStatus {
    /// Degrees up to this bound are exact; nothing is claimed beyond.
    CompleteThrough(usize),
    /// The resolution is finite, so every higher degree vanishes.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorProfile {
    /// `(j, dim Tor_j)` for `j = 0, 1, ...`.
    pub degrees: Vec<(usize, usize)>,
    pub status: TorStatus,
    /// Projective-dimension status of the resolved (second) module.
    pub pd_status: PdStatus,
}

impl TorProfile {
    /// `dim Tor_j`, if known.
    pub fn dim(&self, j: usize) -> Option<usize> {
        match self.degrees.iter().find(|(d, _)| *d == j) {
            Some((_, v)) => Some(*v),
            None if self.status == TorStatus::Exact => Some(0),
            None => None,
        }
    }

    /// Smallest `j ≥ from` with `Tor_j ≠ 0` among the computed degrees.
    pub fn first_nonzero(&self, from: usize) -> Option<(usize, usize)> {
        self.degrees.iter().copied().find(|&(j, d)| j >= from && d > 0)
    }

    /// Whether `Tor_j` vanishes for all `j ≥ from`: certified by a finite
    /// resolution or by zeros over one full period of the syzygies.
    pub fn vanishing_from(&self, from: usize) -> Tri {
        if self.first_nonzero(from).is_some() {
            return Tri::No;
        }
        match (&self.status, &self.pd_status) {
            (TorStatus::Exact, _) => Tri::Yes,
            (_, PdStatus::PeriodicHenceInfinite { start, period }) => {
                // Tor_j for j > start repeats with the syzygies.
                let top = (start + period).max(from);
                if (from..=top).all(|j| self.dim(j) == Some(0)) {
                    Tri::Yes
                } else {
                    Tri::Unknown
                }
            }
            _ => Tri::Unknown,
        }
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.last().map(|d| d.0).unwrap_or(0)
    }
}

/// Bases of `M e_s` for the summands of a projective term.
fn summand_bases(m: &Module, term: &crate::modules::ProjSum) -> Vec<Subspace> {
    term.idems.iter().map(|e| crate::exactla::subspace::column_space(&m.act(e))).collect()
}

/// Matrices of `M ⊗ P_j → M ⊗ P_{j-1}` for `j = 1..=len`, with the dims of `M ⊗ P_j`.
pub fn tensored_complex(m: &Module, res: &Resolution) -> (Vec<usize>, Vec<Mat>) {
    let f = m.field();
    let bases: Vec<Vec<Subspace>> = res.terms.iter().map(|p| summand_bases(m, p)).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.iter().map(|s| s.dim()).sum()).collect();
    let mut mats = Vec::new();
    for j in 1..res.terms.len() {
        let d = &res.differentials[j - 1];
        let (src, dst) = (&bases[j], &bases[j - 1]);
        let mut mat = Mat::zeros(dims[j - 1], dims[j], f);
        let mut col = 0;
        for (s, bs) in src.iter().enumerate() {
            for u in &bs.basis {
                let mut row = 0;
                for (r, br) in dst.iter().enumerate() {
                    let img = m.act(&d[s][r]).mul_vec(u);
                    let co = br.coords(&img).expect("u·v lies in M e_r");
                    for (i, c) in co.into_iter().enumerate() {
                        mat.set(row + i, col, c);
                    }
                    row += br.dim();
                }
                col += 1;
            }
        }
        mats.push(mat);
    }
    (dims, mats)
}

/// `dim Tor_j` for every degree the resolution determines: through its
/// length when finite, one less otherwise.
pub fn tor_from_resolution(m: &Module, res: &Resolution) -> Result<Vec<usize>, HomalgError> {
    if res.terms.is_empty() {
        return Ok(vec![0]);
    }
    if m.dim == 0 {
        let top = if res.status.is_finite() { res.length() } else { res.length().saturating_sub(1) };
        return Ok(vec![0; top + 1]);
    }
    let (dims, mats) = tensored_complex(m, res);
    let ranks: Vec<usize> = mats.iter().map(|x| x.rank()).collect();
    let len = res.length();
    let top = if res.status.is_finite() { len } else { len.saturating_sub(1) };
    let mut out = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let into = if j == 0 { 0 } else { ranks[j - 1] };
        let from = if j < len { ranks[j] } else { 0 };
        out.push(dims[j] - into - from);
    }
    Ok(out)
}

/// Tor profile of a right module `m` and a left module `n` through degree `bound`.
pub fn tor(m: &Module, n: &Module, bound: usize, seed: u64, retries: usize) -> Result<TorProfile, HomalgError> {
    check_sides(m, n)?;
    let first = resolution(n, bound + 1, CoverMode::Minimal, seed, retries)?;
    let pd_status = first.status.clone();
    let (res, status) = match &first.status {
        PdStatus::FiniteLength(_) => (first, TorStatus::Exact),
        PdStatus::PeriodicHenceInfinite { start, period } => {
            let top = bound.max(start + period);
            (resolution_to_length(n, top + 1, CoverMode::Minimal)?, TorStatus::CompleteThrough(top))
        }
        PdStatus::UnknownBeyond(_) => (first, TorStatus::CompleteThrough(bound)),
    };
    let dims = tor_from_resolution(m, &res)?;
    // a resolution cut short by the size cap determines fewer degrees
    let status = match status {
        TorStatus::CompleteThrough(t) => TorStatus::CompleteThrough(t.min(dims.len().saturating_sub(1))),
        s => s,
    };
    let degrees = dims.into_iter().enumerate().collect();
    Ok(TorProfile { degrees, status, pd_status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ideal_generated;
    use crate::homalg::tensor_over;
    use crate::modules::testmod::*;
    use crate::modules::{right_regular, Module};

    fn quotients(a: &crate::modules::AlgRef, label: &str) -> (Module, Module) {
        let j = ideal_generated(a, &[basis(a, label)]).space;
        let left = Module::regular(a).quotient(&j).unwrap().module;
        let (_, rr) = right_regular(a);
        let right = rr.quotient(&j).unwrap().module;
        (right, left)
    }

    #[test]
    fn projective_second_argument() {
        let a = a5();
        let (r, _) = quotients(&a, "e1");
        let p = Module::projective(&a, &basis(&a, "e2")).unwrap().module;
        let prof = tor(&r, &p, 6, 0, 16).unwrap();
        assert_eq!(prof.status, TorStatus::Exact);
        assert_eq!(prof.vanishing_from(1), Tri::Yes);
    }

    #[test]
    fn tor_zero_is_the_tensor() {
        for a in [t(), a5(), b7()] {
            for v in ["e1", "e2", "e11", "e22"] {
                if !a.labels().iter().any(|l| l == v) {
                    continue;
                }
                let (r, l) = quotients(&a, v);
                let prof = tor(&r, &l, 6, 0, 16).unwrap();
                assert_eq!(prof.dim(0), Some(tensor_over(&r, &l).unwrap().dim));
                assert_eq!(prof.dim(0), Some(l.dim));
            }
        }
    }

    #[test]
    fn a5_ideal_is_not_homological() {
        let a = a5();
        let (r, l) = quotients(&a, "e1");
        let prof = tor(&r, &l, 10, 0, 16).unwrap();
        assert_eq!(prof.vanishing_from(1), Tri::No, "{:?}", prof);
    }

    #[test]
    fn b7_ideal_is_homological_on_both_sides() {
        let b = b7();
        let (r, l) = quotients(&b, "e1");
        assert_eq!(tor(&r, &l, 10, 0, 16).unwrap().vanishing_from(1), Tri::Yes);
        let op = arc(crate::algebra::opposite(&b));
        let (r, l) = quotients(&op, "e1");
        let prof = tor(&r, &l, 10, 0, 16).unwrap();
        assert!(matches!(prof.pd_status, PdStatus::PeriodicHenceInfinite { .. }));
        assert_eq!(prof.vanishing_from(1), Tri::Yes, "{:?}", prof);
    }
}
