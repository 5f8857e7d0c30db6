//! `M ⊗_A N` as a quotient of `M ⊗_k N`.

use super::HomalgError;
use crate::algebra::opposite;
use crate::exactla::{vecops, Mat, Q, Subspace};
use crate::modules::Module;

/// `M ⊗_A N`; the vector `m_i ⊗ n_j` sits at index `i·dim N + j`.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub dim: usize,
    pub left_dim: usize,
    pub right_dim: usize,
    /// Span of `ma ⊗ n − m ⊗ an`.
    pub relations: Subspace,
}

impl Tensor {
    /// `dim × (dim M · dim N)` matrix of the quotient map.
    pub fn projection(&self) -> Mat {
        let total = self.left_dim * self.right_dim;
        let f = self.relations.field;
        let mut p = Mat::zeros(self.dim, total, f);
        for t in 0..total {
            for (i, c) in self.relations.quotient_coords(&vecops::unit(total, t)).into_iter().enumerate() {
                p.set(i, t, c);
            }
        }
        p
    }
}

pub(crate) fn check_sides(m: &Module, n: &Module) -> Result<(), HomalgError> {
    if m.parent.dim() != n.parent.dim() || opposite(&n.parent) != *m.parent {
        return Err(HomalgError::AlgebraMismatch);
    }
    Ok(())
}

fn push_relations(m: &Module, n: &Module, g: &[Q], out: &mut Vec<Vec<Q>>) {
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    let rm = m.act(g);
    let rn = n.act(g);
    for i in 0..dm {
        for j in 0..dn {
            let mut v = vecops::zero(dm * dn);
            for k in 0..dm {
                let c = rm.get(k, i);
                if !c.is_zero() {
                    v[k * dn + j] = f.add(&v[k * dn + j], c);
                }
            }
            for l in 0..dn {
                let c = rn.get(l, j);
                if !c.is_zero() {
                    v[i * dn + l] = f.sub(&v[i * dn + l], c);
                }
            }
            if !vecops::is_zero(&v) {
                out.push(v);
            }
        }
    }
}

fn build(m: &Module, n: &Module, gens: &[Vec<Q>]) -> Tensor {
    let mut rels = Vec::new();
    for g in gens {
        push_relations(m, n, g, &mut rels);
    }
    let total = m.dim * n.dim;
    let relations = Subspace::span(total, m.field(), &rels);
    Tensor { dim: total - relations.dim(), left_dim: m.dim, right_dim: n.dim, relations }
}

/// `M ⊗_A N` for a right module `m` (over `A^op`) and a left module `n`.
///
/// Relations are imposed only for generators of `A` as an algebra: if they
/// hold for `a` and `b` they hold for `ab` and for linear combinations.
pub fn tensor_over(m: &Module, n: &Module) -> Result<Tensor, HomalgError> {
    check_sides(m, n)?;
    let frame = n.parent.frame();
    let mut gens: Vec<Vec<Q>> = frame.idempotents.clone();
    gens.extend(frame.generators.iter().map(|(_, _, g)| g.clone()));
    Ok(build(m, n, &gens))
}

/// The same quotient with relations for every basis element.
pub fn tensor_over_naive(m: &Module, n: &Module) -> Result<Tensor, HomalgError> {
    check_sides(m, n)?;
    let gens: Vec<Vec<Q>> = (0..n.parent.dim()).map(|i| n.parent.basis(i)).collect();
    Ok(build(m, n, &gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::testmod::*;
    use crate::modules::{right_regular, Module};

    #[test]
    fn unit_module() {
        for a in [t(), a5(), dual()] {
            let (_, rr) = right_regular(&a);
            let p = Module::projective(&a, &basis(&a, a.labels()[0].as_str())).unwrap().module;
            assert_eq!(tensor_over(&rr, &p).unwrap().dim, p.dim);
            assert_eq!(tensor_over_naive(&rr, &p).unwrap().dim, p.dim);
        }
    }

    #[test]
    fn idempotent_columns_over_t() {
        let t = t();
        let e = basis(&t, "e11");
        let (_, rr) = right_regular(&t);
        // e11·T as a right module: the vectors e·x.
        let et = rr.generated_by(&[e.clone()]);
        let et = rr.submodule(&et).unwrap().module;
        let te = Module::projective(&t, &e).unwrap().module;
        assert_eq!(tensor_over(&et, &te).unwrap().dim, 1);
        assert!(matches!(tensor_over(&te, &te), Err(HomalgError::AlgebraMismatch)));
    }
}
