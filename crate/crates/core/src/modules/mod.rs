//! Finite-dimensional left modules given by action matrices, homomorphism
//! spaces, projective covers and resolutions.
//!
//! A module assigns to every basis element `b` of its algebra a matrix
//! `ρ(b)` acting on column vectors, with `ρ(a)ρ(b) = ρ(ab)`. A homomorphism
//! `M → N` is a `dim N × dim M` matrix `F` with `F ρ_M(b) = ρ_N(b) F`.
//! Right modules are left modules over the opposite algebra.

pub mod hom;
pub mod resolve;

pub use hom::{hom_space, iso_test, ModIso};
pub use resolve::{is_projective, projective_cover, resolution, resolution_to_length, Cover, CoverMode, PdStatus, ProjSum, Resolution};

use crate::algebra::{opposite, radical, AlgError, Algebra, Elem};
use crate::exactla::{vecops, FieldSpec, Mat, Q, Subspace};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModError {
    #[error("modules live over different algebras")]
    ParentMismatch,
    #[error("the zero module has no projective cover")]
    ZeroModule,
    #[error("not a submodule: {0}")]
    NotASubmodule(String),
    #[error("not a representation: {0}")]
    NotRepresentation(String),
    #[error("{0} must be a nonzero idempotent")]
    NotIdempotent(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

pub type AlgRef = Arc<Algebra>;

#[derive(Clone, Debug)]
pub struct Module {
    pub parent: AlgRef,
    pub dim: usize,
    /// `action[i] = ρ(b_i)`.
    pub action: Vec<Mat>,
    pub name: String,
}

/// A submodule together with its module structure and the inclusion map.
#[derive(Clone, Debug)]
pub struct Sub {
    pub module: Module,
    /// `dim M × dim S`, columns are the basis of the submodule.
    pub inclusion: Mat,
    pub space: Subspace,
}

/// A quotient module with its projection.
#[derive(Clone, Debug)]
pub struct Quot {
    pub module: Module,
    /// `dim Q × dim M`.
    pub projection: Mat,
}

pub fn same_parent(a: &AlgRef, b: &AlgRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Above this dimension the representation law is spot-checked.
const FULL_REP_CHECK: usize = 64;

impl Module {
    /// Builds a module from action matrices and checks the representation law.
    pub fn new(parent: AlgRef, action: Vec<Mat>, name: impl Into<String>) -> Result<Module, ModError> {
        let dim = action.first().map(|m| m.rows).unwrap_or(0);
        if action.len() != parent.dim() {
            return Err(ModError::NotRepresentation(format!("{} action matrices for an algebra of dim {}", action.len(), parent.dim())));
        }
        if action.iter().any(|m| m.rows != dim || m.cols != dim || m.field != parent.field()) {
            return Err(ModError::NotRepresentation("action matrices must be square of equal size".into()));
        }
        let m = Module { parent, dim, action, name: name.into() };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(parent: AlgRef, dim: usize, action: Vec<Mat>, name: impl Into<String>) -> Module {
        Module { parent, dim, action, name: name.into() }
    }

    pub fn field(&self) -> FieldSpec {
        self.parent.field()
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// `ρ(x)` for an arbitrary element.
    pub fn act(&self, x: &[Q]) -> Mat {
        let f = self.field();
        let mut m = Mat::zeros(self.dim, self.dim, f);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.action[i].scale(c));
            }
        }
        m
    }

    /// Checks `ρ(1) = id` and `ρ(b_i)ρ(b_j) = ρ(b_i b_j)`; all pairs when
    /// `dim ≤ 64`, otherwise a deterministic sample.
    pub fn validate(&self) -> Result<(), ModError> {
        let a = &self.parent;
        if !self.act(a.unit()).is_identity() {
            return Err(ModError::NotRepresentation("the unit does not act as the identity".into()));
        }
        let n = a.dim();
        let pairs: Vec<(usize, usize)> = if self.dim <= FULL_REP_CHECK {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
        } else {
            (0..4 * n).map(|t| ((t * 7 + 3) % n, (t * 13 + 5) % n)).collect()
        };
        for (i, j) in pairs {
            let lhs = self.action[i].mul(&self.action[j]);
            let rhs = self.act(&a.mul(&a.basis(i), &a.basis(j)));
            if lhs != rhs {
                return Err(ModError::NotRepresentation(format!("ρ(b{})ρ(b{}) ≠ ρ(b{} b{})", i, j, i, j)));
            }
        }
        Ok(())
    }

    /// The left regular module `A`.
    pub fn regular(a: &AlgRef) -> Module {
        let action = (0..a.dim()).map(|i| a.left_mat(&a.basis(i))).collect();
        Module::new_unchecked(a.clone(), a.dim(), action, "A")
    }

    /// The zero module.
    pub fn zero(a: &AlgRef) -> Module {
        Module::new_unchecked(a.clone(), 0, (0..a.dim()).map(|_| Mat::zeros(0, 0, a.field())).collect(), "0")
    }

    /// The left ideal `A e` as a submodule of the regular module.
    pub fn projective(a: &AlgRef, e: &[Q]) -> Result<Sub, ModError> {
        if vecops::is_zero(e) || !a.is_idempotent(e) {
            return Err(ModError::NotIdempotent(a.format_elem(e)));
        }
        let vecs: Vec<Elem> = (0..a.dim()).map(|i| a.mul(&a.basis(i), e)).collect();
        let s = Subspace::span(a.dim(), a.field(), &vecs);
        let mut sub = Module::regular(a).submodule(&s)?;
        sub.module.name = format!("A·({})", a.format_elem(e));
        Ok(sub)
    }

    /// `A e / rad(A) e`, simple when `e` is primitive.
    pub fn simple_top(a: &AlgRef, e: &[Q]) -> Result<Module, ModError> {
        let p = Module::projective(a, e)?.module;
        let mut s = p.top()?.module;
        s.name = format!("top of A·({})", a.format_elem(e));
        Ok(s)
    }

    /// A two-sided or left ideal, given as a subspace of `A`, as a left module.
    pub fn left_ideal(a: &AlgRef, s: &Subspace) -> Result<Sub, ModError> {
        Module::regular(a).submodule(s)
    }

    /// The submodule on an invariant subspace.
    pub fn submodule(&self, s: &Subspace) -> Result<Sub, ModError> {
        if s.ambient_dim != self.dim {
            return Err(ModError::NotASubmodule("ambient dimension mismatch".into()));
        }
        let k = s.dim();
        let f = self.field();
        let mut action = Vec::with_capacity(self.action.len());
        for (i, r) in self.action.iter().enumerate() {
            let mut m = Mat::zeros(k, k, f);
            for (c, v) in s.basis.iter().enumerate() {
                let img = r.mul_vec(v);
                let co = s.coords(&img).ok_or_else(|| ModError::NotASubmodule(format!("not stable under b{}", i)))?;
                for (row, x) in co.into_iter().enumerate() {
                    m.set(row, c, x);
                }
            }
            action.push(m);
        }
        let inclusion = Mat::from_cols(&s.basis, self.dim, f);
        let module = Module::new_unchecked(self.parent.clone(), k, action, format!("sub of {}", self.name));
        Ok(Sub { module, inclusion, space: s.clone() })
    }

    /// The quotient by an invariant subspace, on the complement coordinates.
    pub fn quotient(&self, s: &Subspace) -> Result<Quot, ModError> {
        if s.ambient_dim != self.dim {
            return Err(ModError::NotASubmodule("ambient dimension mismatch".into()));
        }
        for (i, r) in self.action.iter().enumerate() {
            if s.basis.iter().any(|v| !s.contains(&r.mul_vec(v))) {
                return Err(ModError::NotASubmodule(format!("not stable under b{}", i)));
            }
        }
        let f = self.field();
        let comp = s.complement_indices();
        let q = comp.len();
        let mut projection = Mat::zeros(q, self.dim, f);
        for i in 0..self.dim {
            for (row, x) in s.quotient_coords(&vecops::unit(self.dim, i)).into_iter().enumerate() {
                projection.set(row, i, x);
            }
        }
        let action = self
            .action
            .iter()
            .map(|r| {
                let mut m = Mat::zeros(q, q, f);
                for (c, &j) in comp.iter().enumerate() {
                    for (row, x) in s.quotient_coords(&r.col(j)).into_iter().enumerate() {
                        m.set(row, c, x);
                    }
                }
                m
            })
            .collect();
        let module = Module::new_unchecked(self.parent.clone(), q, action, format!("quotient of {}", self.name));
        Ok(Quot { module, projection })
    }

    /// The span of `A·v` for the given vectors.
    pub fn generated_by(&self, vecs: &[Elem]) -> Subspace {
        let f = self.field();
        let mut s = Subspace::span(self.dim, f, vecs);
        loop {
            let mut new = Vec::new();
            for v in &s.basis {
                for r in &self.action {
                    let w = r.mul_vec(v);
                    if !s.contains(&w) {
                        new.push(w);
                    }
                }
            }
            if new.is_empty() {
                return s;
            }
            s = s.add_vectors(&new);
        }
    }

    /// `I·M` for a subspace `I` of the algebra.
    pub fn ideal_times(&self, ideal: &Subspace) -> Subspace {
        let f = self.field();
        let mut vecs = Vec::new();
        for x in &ideal.basis {
            let r = self.act(x);
            vecs.extend(r.col_vecs());
        }
        Subspace::span(self.dim, f, &vecs)
    }

    /// `rad(A)·M`.
    pub fn radical_sub(&self) -> Result<Subspace, ModError> {
        let r = radical(&self.parent)?;
        Ok(self.ideal_times(&r))
    }

    /// `M / rad(A)M`.
    pub fn top(&self) -> Result<Quot, ModError> {
        let r = self.radical_sub()?;
        self.quotient(&r)
    }

    /// Vectors killed by `rad(A)`: the largest semisimple submodule.
    pub fn socle(&self) -> Result<Subspace, ModError> {
        let r = radical(&self.parent)?;
        let f = self.field();
        if r.is_zero() || self.dim == 0 {
            return Ok(Subspace::full(self.dim, f));
        }
        let mut stacked = Mat::zeros(0, self.dim, f);
        for x in &r.basis {
            stacked = stacked.vstack(&self.act(x));
        }
        Ok(crate::exactla::subspace::kernel(&stacked))
    }

    /// Dimensions of `rad^k M` for `k = 0, 1, ...` down to zero.
    pub fn radical_series(&self) -> Result<Vec<usize>, ModError> {
        let r = radical(&self.parent)?;
        let mut cur = Subspace::full(self.dim, self.field());
        let mut out = vec![cur.dim()];
        while !cur.is_zero() {
            let mut vecs = Vec::new();
            for x in &r.basis {
                let a = self.act(x);
                vecs.extend(cur.basis.iter().map(|v| a.mul_vec(v)));
            }
            let next = Subspace::span(self.dim, self.field(), &vecs);
            if next.dim() == cur.dim() {
                break;
            }
            cur = next;
            out.push(cur.dim());
        }
        Ok(out)
    }

    /// `dim ρ(e)M`.
    pub fn idempotent_rank(&self, e: &[Q]) -> usize {
        self.act(e).rank()
    }

    /// Direct sum with block-diagonal actions.
    pub fn direct_sum(parts: &[&Module]) -> Result<Module, ModError> {
        let first = parts.first().ok_or(ModError::NotRepresentation("empty direct sum".into()))?;
        if parts.iter().any(|p| !same_parent(&p.parent, &first.parent)) {
            return Err(ModError::ParentMismatch);
        }
        let n = first.parent.dim();
        let f = first.field();
        let action = (0..n)
            .map(|i| parts.iter().fold(Mat::zeros(0, 0, f), |acc, p| acc.direct_sum(&p.action[i])))
            .collect();
        let dim = parts.iter().map(|p| p.dim).sum();
        let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(" ⊕ ");
        Ok(Module::new_unchecked(first.parent.clone(), dim, action, name))
    }

    /// Injection of the `k`-th summand and projection onto it, for a sum of the given dimensions.
    pub fn summand_maps(dims: &[usize], k: usize, f: FieldSpec) -> (Mat, Mat) {
        let total: usize = dims.iter().sum();
        let off: usize = dims[..k].iter().sum();
        let mut inj = Mat::zeros(total, dims[k], f);
        let mut proj = Mat::zeros(dims[k], total, f);
        for i in 0..dims[k] {
            inj.set(off + i, i, Q::one());
            proj.set(i, off + i, Q::one());
        }
        (inj, proj)
    }

    /// `k`-fold direct sum.
    pub fn power(&self, k: usize) -> Result<Module, ModError> {
        if k == 0 {
            return Ok(Module::zero(&self.parent));
        }
        let parts: Vec<&Module> = std::iter::repeat(self).take(k).collect();
        Module::direct_sum(&parts)
    }

    /// The vector-space dual, a left module over the opposite algebra.
    pub fn dual(&self, op: &AlgRef) -> Module {
        let action = self.action.iter().map(|m| m.transpose()).collect();
        Module::new_unchecked(op.clone(), self.dim, action, format!("D({})", self.name))
    }

    /// `eM` as a module over the corner `eAe`, whose basis is embedded by `embedding`
    /// (columns are corner basis elements in the coordinates of `A`).
    pub fn restrict_to_corner(&self, corner: &AlgRef, embedding: &Mat, e: &[Q]) -> Result<Sub, ModError> {
        let f = self.field();
        let pe = self.act(e);
        let space = crate::exactla::subspace::column_space(&pe);
        let k = space.dim();
        let mut action = Vec::with_capacity(corner.dim());
        for c in 0..corner.dim() {
            let r = self.act(&embedding.col(c));
            let mut m = Mat::zeros(k, k, f);
            for (col, v) in space.basis.iter().enumerate() {
                let co = space.coords(&r.mul_vec(v)).ok_or_else(|| ModError::NotASubmodule("corner does not preserve eM".into()))?;
                for (row, x) in co.into_iter().enumerate() {
                    m.set(row, col, x);
                }
            }
            action.push(m);
        }
        let module = Module::new_unchecked(corner.clone(), k, action, format!("e·{}", self.name));
        let inclusion = Mat::from_cols(&space.basis, self.dim, f);
        Ok(Sub { module, inclusion, space })
    }
}

/// Right regular module `A_A` as a left module over `A^op`, with the same basis.
pub fn right_regular(a: &AlgRef) -> (AlgRef, Module) {
    let op = Arc::new(opposite(a));
    let m = Module::regular(&op);
    (op, m)
}

/// Whether `F` intertwines the actions.
pub fn is_hom(m: &Module, n: &Module, f: &Mat) -> bool {
    f.rows == n.dim && f.cols == m.dim && m.action.iter().zip(&n.action).all(|(a, b)| f.mul(a) == b.mul(f))
}

/// Image of a hom as a submodule of the target.
pub fn image(f: &Mat) -> Subspace {
    crate::exactla::subspace::column_space(f)
}

/// Kernel of a hom as a submodule of the source.
pub fn kernel(f: &Mat) -> Subspace {
    crate::exactla::subspace::kernel(f)
}

#[cfg(test)]
pub(crate) mod testmod {
    use super::*;
    use crate::algebra::testalg;

    pub fn arc(a: Algebra) -> AlgRef {
        Arc::new(a)
    }

    pub fn t() -> AlgRef {
        arc(testalg::triangular())
    }

    pub fn a5() -> AlgRef {
        arc(testalg::a5())
    }

    pub fn b7() -> AlgRef {
        arc(testalg::b7())
    }

    pub fn dual() -> AlgRef {
        arc(testalg::dual_numbers())
    }

    pub fn basis(a: &AlgRef, label: &str) -> Elem {
        let i = a.labels().iter().position(|l| l == label).unwrap_or_else(|| panic!("no label {}", label));
        a.basis(i)
    }
}

#[cfg(test)]
mod tests {
    use super::testmod::*;
    use super::*;

    #[test]
    fn regular_and_projectives_over_t() {
        let t = t();
        let r = Module::regular(&t);
        r.validate().unwrap();
        let p1 = Module::projective(&t, &basis(&t, "e11")).unwrap().module;
        let p2 = Module::projective(&t, &basis(&t, "e22")).unwrap().module;
        assert_eq!((p1.dim, p2.dim), (1, 2));
        p2.validate().unwrap();
        let s2 = Module::simple_top(&t, &basis(&t, "e22")).unwrap();
        assert_eq!(s2.dim, 1);
        s2.validate().unwrap();
        assert_eq!(p2.radical_series().unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn socle_of_dual_numbers() {
        let r = dual();
        let m = Module::regular(&r);
        let s = m.socle().unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&basis(&r, "x")));
    }

    #[test]
    fn bad_representation_rejected() {
        let r = dual();
        let f = r.field();
        // x acting as the identity is not nilpotent
        let err = Module::new(r.clone(), vec![Mat::identity(1, f), Mat::identity(1, f)], "bad");
        assert!(matches!(err, Err(ModError::NotRepresentation(_))));
    }

    #[test]
    fn quotient_and_direct_sum() {
        let a = a5();
        let reg = Module::regular(&a);
        let top = reg.top().unwrap().module;
        assert_eq!(top.dim, 2);
        top.validate().unwrap();
        let s = Module::direct_sum(&[&top, &reg]).unwrap();
        assert_eq!(s.dim, 7);
        s.validate().unwrap();
    }
}
