//! Endomorphism algebras, ideals of maps factoring through a module, and
//! the covariance conditions on a morphism `λ: Y → X`.
//!
//! Homs compose left to right: the product `h·k` in `End(M)` is "first `h`,
//! then `k`", which on matrices is `K·H`.

pub mod covariance;
pub mod lemmas;

pub use covariance::{check_covariance, CovarianceReport, Failure};
pub use lemmas::{corner_criterion, verify_factorization_lemmas, CornerCriterion, FactorizationReport, LemmaCheck, Side};

use crate::algebra::{quotient, AlgError, Algebra, Elem, Provenance};
use crate::exactla::{vecops, LaError, Mat, Q, Subspace};
use crate::homalg::HomalgError;
use crate::modules::{hom_space, is_hom, same_parent, AlgRef, ModError, Module};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EndoError {
    #[error("the zero module has no endomorphism algebra")]
    ZeroModule,
    #[error("not a module homomorphism: {0}")]
    NotAHom(String),
    #[error("not a submodule: {0}")]
    NotASubmodule(String),
    #[error("hypothesis not established: {0}")]
    HypothesisNotEstablished(String),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error(transparent)]
    La(#[from] LaError),
}

/// A homomorphism `source → target`, stored as a `dim target × dim source` matrix.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub source: Module,
    pub target: Module,
    pub matrix: Mat,
}

impl ModuleHom {
    pub fn new(source: Module, target: Module, matrix: Mat) -> Result<ModuleHom, EndoError> {
        if !same_parent(&source.parent, &target.parent) {
            return Err(ModError::ParentMismatch.into());
        }
        if matrix.rows != target.dim || matrix.cols != source.dim {
            return Err(EndoError::NotAHom(format!("matrix is {}x{}, expected {}x{}", matrix.rows, matrix.cols, target.dim, source.dim)));
        }
        if !is_hom(&source, &target, &matrix) {
            return Err(EndoError::NotAHom("does not intertwine the actions".into()));
        }
        Ok(ModuleHom { source, target, matrix })
    }

    pub fn identity(m: &Module) -> ModuleHom {
        ModuleHom { source: m.clone(), target: m.clone(), matrix: Mat::identity(m.dim, m.field()) }
    }

    /// Inclusion of an invariant subspace.
    pub fn inclusion(ambient: &Module, sub: &Subspace) -> Result<ModuleHom, EndoError> {
        let s = ambient.submodule(sub).map_err(|e| EndoError::NotASubmodule(e.to_string()))?;
        Ok(ModuleHom { source: s.module, target: ambient.clone(), matrix: s.inclusion })
    }

    /// Projection onto the quotient by an invariant subspace.
    pub fn projection(ambient: &Module, sub: &Subspace) -> Result<ModuleHom, EndoError> {
        let q = ambient.quotient(sub).map_err(|e| EndoError::NotASubmodule(e.to_string()))?;
        Ok(ModuleHom { source: ambient.clone(), target: q.module, matrix: q.projection })
    }

    /// The transpose `D(target) → D(source)` over the opposite algebra.
    pub fn dual(&self, op: &AlgRef) -> ModuleHom {
        ModuleHom { source: self.target.dual(op), target: self.source.dual(op), matrix: self.matrix.transpose() }
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim
    }
}

/// A basis of matrices with a fast coordinate map.
#[derive(Clone, Debug)]
pub struct MatBasis {
    pub mats: Vec<Mat>,
    rows: usize,
    cols: usize,
    /// Entry positions on which the basis is independent.
    pivots: Vec<usize>,
    /// Inverse of the basis restricted to `pivots`.
    solve: Mat,
}

impl MatBasis {
    pub fn new(mats: Vec<Mat>, rows: usize, cols: usize, f: crate::exactla::FieldSpec) -> MatBasis {
        let d = mats.len();
        let flat = Mat::from_rows(mats.iter().map(|m| m.data.clone()).collect(), rows * cols, f);
        let pivots = flat.rref().pivots;
        assert_eq!(pivots.len(), d, "basis matrices must be independent");
        let sub = flat.select_cols(&pivots).transpose();
        let solve = sub.inverse().unwrap_or_else(|| Mat::identity(0, f));
        MatBasis { mats, rows, cols, pivots, solve }
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// Coordinates of `m`, or `None` when it lies outside the span.
    pub fn coords(&self, m: &Mat) -> Option<Elem> {
        if m.rows != self.rows || m.cols != self.cols {
            return None;
        }
        let picked: Vec<Q> = self.pivots.iter().map(|&p| m.data[p].clone()).collect();
        let c = self.solve.mul_vec(&picked);
        if self.combine(&c) == *m {
            Some(c)
        } else {
            None
        }
    }

    pub fn combine(&self, c: &[Q]) -> Mat {
        let f = self.solve.field;
        let mut out = Mat::zeros(self.rows, self.cols, f);
        for (x, m) in c.iter().zip(&self.mats) {
            if !x.is_zero() {
                out = out.add(&m.scale(x));
            }
        }
        out
    }

    /// Matrix whose columns are coordinates of `g(b_i)`.
    pub fn matrix_of(&self, source: &MatBasis, g: impl Fn(&Mat) -> Mat) -> Mat {
        let cols: Vec<Elem> = source.mats.iter().map(|m| self.coords(&g(m)).expect("image lies in the target space")).collect();
        Mat::from_cols(&cols, self.len(), self.solve.field)
    }
}

/// `Hom(m, n)` with coordinates.
pub fn hom_basis(m: &Module, n: &Module) -> Result<MatBasis, EndoError> {
    Ok(MatBasis::new(hom_space(m, n)?, n.dim, m.dim, m.field()))
}

/// `End(M)` as an algebra on a basis of `Hom(M, M)`.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub algebra: AlgRef,
    pub homs: MatBasis,
}

impl EndAlgebra {
    pub fn coords(&self, h: &Mat) -> Option<Elem> {
        self.homs.coords(h)
    }

    pub fn to_hom(&self, x: &[Q]) -> Mat {
        self.homs.combine(x)
    }
}

pub fn end_algebra(m: &Module) -> Result<EndAlgebra, EndoError> {
    if m.dim == 0 {
        return Err(EndoError::ZeroModule);
    }
    let f = m.field();
    let homs = hom_basis(m, m)?;
    let d = homs.len();
    let mut products = Vec::with_capacity(d * d);
    for hi in &homs.mats {
        for hj in &homs.mats {
            let c = homs.coords(&hj.mul(hi)).expect("End(M) is closed under composition");
            products.push(c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
        }
    }
    let unit = homs.coords(&Mat::identity(m.dim, f)).expect("identity is an endomorphism");
    let labels = (0..d).map(|i| format!("h{}", i + 1)).collect();
    let alg = Algebra::new_unchecked(f, d, products, unit, Some(labels), Provenance::Endomorphism(m.name.clone()))?;
    Ok(EndAlgebra { algebra: Arc::new(alg), homs })
}

/// The span of all `y`-factoring endomorphisms "`h` then `g`" of `x`, with
/// `h: X → Y`, `g: Y → X`, in coordinates of `end`. Maps factoring through
/// a sum of copies of `Y` are sums of these, so this is the whole ideal.
pub fn trace_ideal_in(end: &EndAlgebra, x: &Module, y: &Module) -> Result<Subspace, EndoError> {
    let d = end.homs.len();
    let f = x.field();
    if y.dim == 0 {
        return Ok(Subspace::zero(d, f));
    }
    let to_y = hom_space(x, y)?;
    let from_y = hom_space(y, x)?;
    let mut vecs = Vec::new();
    for h in &to_y {
        for g in &from_y {
            let c = end.coords(&g.mul(h)).expect("composite is an endomorphism");
            if !vecops::is_zero(&c) {
                vecs.push(c);
            }
        }
    }
    Ok(Subspace::span(d, f, &vecs))
}

pub fn trace_ideal_through(x: &Module, y: &Module) -> Result<(EndAlgebra, Subspace), EndoError> {
    let end = end_algebra(x)?;
    let ideal = trace_ideal_in(&end, x, y)?;
    Ok((end, ideal))
}

/// `End(X)` modulo the maps factoring through `add(Y)`.
pub fn end_quotient(x: &Module, y: &Module) -> Result<Algebra, EndoError> {
    let (end, ideal) = trace_ideal_through(x, y)?;
    Ok(quotient(&end.algebra, &ideal).with_provenance(Provenance::Quotient(format!("End({}) mod maps through {}", x.name, y.name))))
}

fn check_inclusion(inc: &ModuleHom) -> Result<(), EndoError> {
    if !inc.is_injective() {
        return Err(EndoError::NotASubmodule("the map is not injective".into()));
    }
    Ok(())
}

/// `Hom(Y, X/Y) = 0` for the image `Y` of an injective hom.
pub fn is_trace(inc: &ModuleHom) -> Result<bool, EndoError> {
    check_inclusion(inc)?;
    let x = &inc.target;
    let img = crate::modules::image(&inc.matrix);
    let q = x.quotient(&img)?.module;
    if q.dim == 0 || inc.source.dim == 0 {
        return Ok(true);
    }
    Ok(hom_space(&inc.source, &q)?.is_empty())
}

/// The inclusion induces an isomorphism `Hom(Y, Y) → Hom(Y, X)`.
pub fn is_weak_trace(inc: &ModuleHom) -> Result<bool, EndoError> {
    check_inclusion(inc)?;
    let y = &inc.source;
    if y.dim == 0 {
        return Ok(true);
    }
    let yy = hom_basis(y, y)?;
    let yx = hom_basis(y, &inc.target)?;
    if yy.len() != yx.len() {
        return Ok(false);
    }
    let m = yx.matrix_of(&yy, |s| inc.matrix.mul(s));
    Ok(m.rank() == yx.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ideal_generated;
    use crate::modules::testmod::*;

    #[test]
    fn end_of_regular_is_the_algebra() {
        for a in [t(), a5(), dual()] {
            let e = end_algebra(&Module::regular(&a)).unwrap();
            assert_eq!(e.algebra.dim(), a.dim());
            e.algebra.validate().unwrap();
            // h ↦ h(1) is an isomorphism onto A: "h then k" sends 1 to h(1)·k(1).
            let one = a.unit().clone();
            let map = Mat::from_cols(&e.homs.mats.iter().map(|h| h.mul_vec(&one)).collect::<Vec<_>>(), a.dim(), a.field());
            assert!(crate::algebra::iso::verify_isomorphism(&e.algebra, &a, &map));
        }
    }

    #[test]
    fn end_of_simple_is_the_field() {
        let t = t();
        let s = Module::simple_top(&t, &basis(&t, "e11")).unwrap();
        assert_eq!(end_algebra(&s).unwrap().algebra.dim(), 1);
        assert!(matches!(end_algebra(&Module::zero(&t)), Err(EndoError::ZeroModule)));
    }

    #[test]
    fn factoring_ideals() {
        let a = a5();
        let reg = Module::regular(&a);
        // y = x gives everything
        assert_eq!(end_quotient(&reg, &reg).unwrap().dim(), 0);
        // End_{R,I}(R) ≅ R/I
        let i = ideal_generated(&a, &[basis(&a, "e1")]).space;
        let im = Module::left_ideal(&a, &i).unwrap().module;
        let q = end_quotient(&reg, &im).unwrap();
        assert_eq!(q.dim(), a.dim() - i.dim());
        // closed under composition on both sides
        let (end, ideal) = trace_ideal_through(&reg, &im).unwrap();
        for v in &ideal.basis {
            for k in 0..end.algebra.dim() {
                let b = end.algebra.basis(k);
                assert!(ideal.contains(&end.algebra.mul(v, &b)));
                assert!(ideal.contains(&end.algebra.mul(&b, v)));
            }
        }
    }

    #[test]
    fn traces() {
        let r = dual();
        let reg = Module::regular(&r);
        let soc = reg.socle().unwrap();
        let inc = ModuleHom::inclusion(&reg, &soc).unwrap();
        assert!(is_weak_trace(&inc).unwrap());
        assert!(!is_trace(&inc).unwrap());
        let t = t();
        let treg = Module::regular(&t);
        let j = ideal_generated(&t, &[basis(&t, "e11")]).space;
        let inc = ModuleHom::inclusion(&treg, &j).unwrap();
        assert!(is_trace(&inc).unwrap() && is_weak_trace(&inc).unwrap());
        let zero = ModuleHom::inclusion(&treg, &Subspace::zero(3, t.field())).unwrap();
        assert!(is_trace(&zero).unwrap() && is_weak_trace(&zero).unwrap());
    }
}
