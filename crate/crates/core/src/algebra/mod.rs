//! Finite-dimensional unital associative algebras given by structure constants.

pub mod construct;
pub mod decompose;
pub mod families;
pub mod iso;
pub mod quiver;
pub mod radical;
pub mod random;

use crate::exactla::{vecops, FieldSpec, Mat, Q, Subspace};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub use construct::{center, corner, direct_product, ideal_generated, opposite, quotient, subalgebra, Corner, Ideal};
pub use decompose::{division_ring_test, primitive_decomposition, Tri};
pub use families::FamilySpec;
pub use iso::{find_isomorphism, IsoVerdict};
pub use quiver::{path_algebra, QuiverPresentation};
pub use radical::radical;

/// Coordinate vector of an algebra element.
pub type Elem = Vec<Q>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    AssociativityViolation(usize, usize, usize),
    #[error("unit axiom fails at basis element {0}")]
    UnitViolation(usize),
    #[error("malformed structure constants: {0}")]
    Malformed(String),
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("paths of length {bound} survive the relations; algebra is not finite-dimensional within the bound")]
    NotFiniteDimensional { bound: usize },
    #[error("relation is not admissible: {0}")]
    NonAdmissible(String),
    #[error("invalid quiver: {0}")]
    BadQuiver(String),
    #[error("closure condition fails at block ({0}, {1}): {2}")]
    ClosureViolation(usize, usize, String),
    #[error("operation needs characteristic zero, field is {0}")]
    UnsupportedField(FieldSpec),
    #[error("randomized search exhausted after {0} samples")]
    RandomizedSearchExhausted(usize),
    #[error("invalid family data: {0}")]
    BadFamily(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Construction record carried for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Table,
    Quiver { vertices: Vec<String>, arrows: Vec<String> },
    Family(String),
    Corner(String),
    Quotient(String),
    Opposite(String),
    Endomorphism(String),
    Product(Vec<String>),
    Derived(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Table => write!(f, "structure constants"),
            Provenance::Quiver { vertices, arrows } => {
                write!(f, "quiver with {} vertices and {} arrows", vertices.len(), arrows.len())
            }
            Provenance::Family(s) => write!(f, "family {}", s),
            Provenance::Corner(s) => write!(f, "corner {}", s),
            Provenance::Quotient(s) => write!(f, "quotient {}", s),
            Provenance::Opposite(s) => write!(f, "opposite of {}", s),
            Provenance::Endomorphism(s) => write!(f, "endomorphism algebra of {}", s),
            Provenance::Product(v) => write!(f, "product of {}", v.join(", ")),
            Provenance::Derived(s) => write!(f, "{}", s),
        }
    }
}

/// Structural facts known from the construction, so later computations can
/// skip randomized work. Every hint is re-verified before use.
#[derive(Clone, Debug, Default)]
pub struct Hints {
    /// Complete set of orthogonal primitive idempotents.
    pub primitive_idempotents: Option<Vec<Elem>>,
    /// A basis of the Jacobson radical.
    pub radical: Option<Vec<Elem>>,
}

type DecompKey = (u64, usize);

#[derive(Default)]
struct Caches {
    radical: OnceLock<Result<Subspace, AlgError>>,
    decomposition: Mutex<HashMap<DecompKey, Result<Vec<Elem>, AlgError>>>,
    frame: OnceLock<Arc<frame::PeirceFrame>>,
    left_mats: OnceLock<Vec<Mat>>,
}

pub struct Algebra {
    dim: usize,
    field: FieldSpec,
    products: Vec<Vec<(usize, Q)>>,
    unit: Elem,
    labels: Vec<String>,
    pub provenance: Provenance,
    pub hints: Hints,
    caches: Caches,
}

impl Clone for Algebra {
    fn clone(&self) -> Algebra {
        Algebra {
            dim: self.dim,
            field: self.field,
            products: self.products.clone(),
            unit: self.unit.clone(),
            labels: self.labels.clone(),
            provenance: self.provenance.clone(),
            hints: self.hints.clone(),
            caches: Caches::default(),
        }
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(dim {}, {}, {})", self.dim, self.field, self.provenance)
    }
}

impl PartialEq for Algebra {
    /// Bit-identical tables, units and fields; labels and provenance are ignored.
    fn eq(&self, o: &Algebra) -> bool {
        self.dim == o.dim && self.field == o.field && self.unit == o.unit && self.products == o.products
    }
}

/// Full associativity check up to this dimension; above it, a seeded sample.
const FULL_CHECK_DIM: usize = 48;

impl Algebra {
    /// Builds and validates an algebra from a dense table `table[i][j]` = b_i b_j.
    pub fn from_table(field: FieldSpec, table: Vec<Vec<Elem>>, unit: Elem, labels: Option<Vec<String>>) -> Result<Algebra, AlgError> {
        let dim = unit.len();
        if table.len() != dim || table.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(AlgError::Malformed(format!("table must be {}x{} vectors of length {}", dim, dim, dim)));
        }
        let products = table
            .into_iter()
            .flatten()
            .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        Algebra::from_sparse(field, dim, products, unit, labels, Provenance::Table)
    }

    /// Builds and validates an algebra from sparse products, indexed `i*dim + j`.
    pub fn from_sparse(
        field: FieldSpec,
        dim: usize,
        products: Vec<Vec<(usize, Q)>>,
        unit: Elem,
        labels: Option<Vec<String>>,
        provenance: Provenance,
    ) -> Result<Algebra, AlgError> {
        let a = Algebra::new_unchecked(field, dim, products, unit, labels, provenance)?;
        a.validate()?;
        Ok(a)
    }

    pub(crate) fn new_unchecked(
        field: FieldSpec,
        dim: usize,
        products: Vec<Vec<(usize, Q)>>,
        unit: Elem,
        labels: Option<Vec<String>>,
        provenance: Provenance,
    ) -> Result<Algebra, AlgError> {
        if products.len() != dim * dim || unit.len() != dim {
            return Err(AlgError::Malformed("table size does not match dimension".into()));
        }
        if products.iter().flatten().any(|(k, _)| *k >= dim) {
            return Err(AlgError::Malformed("product index out of range".into()));
        }
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("b{}", i)).collect());
        if labels.len() != dim {
            return Err(AlgError::Malformed("label count does not match dimension".into()));
        }
        Ok(Algebra { dim, field, products, unit, labels, provenance, hints: Hints::default(), caches: Caches::default() })
    }

    /// Checks associativity and the unit axioms.
    pub fn validate(&self) -> Result<(), AlgError> {
        let n = self.dim;
        for i in 0..n {
            let b = vecops::unit(n, i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(AlgError::UnitViolation(i));
            }
        }
        let check = |i: usize, j: usize, k: usize| -> Result<(), AlgError> {
            let ij = self.basis_product(i, j);
            let jk = self.basis_product(j, k);
            let mut left = vecops::zero(n);
            for (t, c) in ij {
                for (s, d) in &self.products[t * n + k] {
                    self.field.fma(&mut left[*s], c, d);
                }
            }
            let mut right = vecops::zero(n);
            for (t, c) in jk {
                for (s, d) in &self.products[i * n + t] {
                    self.field.fma(&mut right[*s], c, d);
                }
            }
            if left != right {
                return Err(AlgError::AssociativityViolation(i, j, k));
            }
            Ok(())
        };
        if n <= FULL_CHECK_DIM {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..FULL_CHECK_DIM.pow(3) {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn unit(&self) -> &Elem {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Algebra {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn with_provenance(mut self, p: Provenance) -> Algebra {
        self.provenance = p;
        self
    }

    pub fn with_hints(mut self, h: Hints) -> Algebra {
        self.hints = h;
        self
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.products[i * self.dim + j]
    }

    pub fn basis(&self, i: usize) -> Elem {
        vecops::unit(self.dim, i)
    }

    pub fn zero(&self) -> Elem {
        vecops::zero(self.dim)
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Elem {
        let n = self.dim;
        let f = self.field;
        let mut out = vecops::zero(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, v) in &self.products[i * n + j] {
                    f.fma(&mut out[*k], &c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[Q], y: &[Q]) -> Elem {
        vecops::add(self.field, x, y)
    }

    pub fn sub(&self, x: &[Q], y: &[Q]) -> Elem {
        vecops::sub(self.field, x, y)
    }

    pub fn scale(&self, c: &Q, x: &[Q]) -> Elem {
        vecops::scale(self.field, c, x)
    }

    pub fn is_idempotent(&self, e: &[Q]) -> bool {
        self.mul(e, e) == e
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i + 1..n).all(|j| {
            let mut a = self.products[i * n + j].clone();
            let mut b = self.products[j * n + i].clone();
            a.sort_by_key(|p| p.0);
            b.sort_by_key(|p| p.0);
            a == b
        }))
    }

    /// Matrix of `y ↦ x·y` on column coordinates.
    pub fn left_mat(&self, x: &[Q]) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(n, n, self.field);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for k in 0..n {
                for (t, v) in &self.products[i * n + k] {
                    let cell = &mut m.data[t * n + k];
                    *cell = self.field.add(cell, &self.field.mul(xi, v));
                }
            }
        }
        m
    }

    /// Matrix of `y ↦ y·x` on column coordinates.
    pub fn right_mat(&self, x: &[Q]) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(n, n, self.field);
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for k in 0..n {
                for (t, v) in &self.products[k * n + j] {
                    let cell = &mut m.data[t * n + k];
                    *cell = self.field.add(cell, &self.field.mul(xj, v));
                }
            }
        }
        m
    }

    /// Left-multiplication matrices of all basis elements (cached).
    pub fn left_basis_mats(&self) -> &[Mat] {
        self.caches.left_mats.get_or_init(|| (0..self.dim).map(|i| self.left_mat(&self.basis(i))).collect())
    }

    /// `x^k` with `x^0 = 1`.
    pub fn pow(&self, x: &[Q], k: usize) -> Elem {
        let mut r = self.unit.clone();
        for _ in 0..k {
            r = self.mul(&r, x);
        }
        r
    }

    /// Span of all products `u·v` with `u ∈ U`, `v ∈ V`.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in &u.basis {
            for y in &v.basis {
                let p = self.mul(x, y);
                if !vecops::is_zero(&p) {
                    vecs.push(p);
                }
            }
        }
        Subspace::span(self.dim, self.field, &vecs)
    }

    /// Renders an element using basis labels.
    pub fn format_elem(&self, x: &[Q]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { self.labels[i].clone() } else { format!("{}*{}", c, self.labels[i]) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn require_char_zero(&self) -> Result<(), AlgError> {
        if self.field.is_rationals() {
            Ok(())
        } else {
            Err(AlgError::UnsupportedField(self.field))
        }
    }

    pub(crate) fn radical_cache(&self) -> &OnceLock<Result<Subspace, AlgError>> {
        &self.caches.radical
    }

    pub(crate) fn decomposition_cache(&self) -> &Mutex<HashMap<DecompKey, Result<Vec<Elem>, AlgError>>> {
        &self.caches.decomposition
    }

    /// A cached Peirce frame used to split Hom computations into blocks.
    pub fn frame(&self) -> Arc<frame::PeirceFrame> {
        self.caches.frame.get_or_init(|| Arc::new(frame::PeirceFrame::build(self))).clone()
    }

    /// All structure constants as a dense table; mostly for emitting specs.
    pub fn dense_table(&self) -> Vec<Vec<Elem>> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vecops::zero(n);
                        for (k, c) in &self.products[i * n + j] {
                            v[*k] = c.clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

pub mod frame {
    //! Complete sets of orthogonal idempotents plus Peirce-homogeneous
    //! generators, used to cut linear systems into small blocks.

    use super::*;

    #[derive(Debug, Clone)]
    pub struct PeirceFrame {
        /// Orthogonal idempotents summing to one.
        pub idempotents: Vec<Elem>,
        /// Whether the idempotents are known to be primitive.
        pub primitive: bool,
        /// Basis of each piece `ε_a A ε_b`, indexed `a * m + b`.
        pub pieces: Vec<Vec<Elem>>,
        /// Elements `(a, b, g)` with `g ∈ ε_a A ε_b` that generate the algebra.
        pub generators: Vec<(usize, usize, Elem)>,
    }

    impl PeirceFrame {
        pub fn build(a: &Algebra) -> PeirceFrame {
            let (idempotents, primitive) = if let Some(p) = a.hints.primitive_idempotents.clone() {
                (p, true)
            } else if a.field().is_rationals() && a.dim() > 0 {
                match primitive_decomposition(a, 0, 64) {
                    Ok(p) => (p, true),
                    Err(_) => (vec![a.unit().clone()], false),
                }
            } else if a.dim() == 0 {
                (Vec::new(), true)
            } else {
                (vec![a.unit().clone()], false)
            };
            PeirceFrame::with_idempotents(a, idempotents, primitive)
        }

        pub fn with_idempotents(a: &Algebra, idempotents: Vec<Elem>, primitive: bool) -> PeirceFrame {
            let m = idempotents.len();
            let mut pieces = Vec::with_capacity(m * m);
            for ea in &idempotents {
                let left: Vec<Elem> = (0..a.dim()).map(|i| a.mul(ea, &a.basis(i))).collect();
                for eb in &idempotents {
                    let vecs: Vec<Elem> = left.iter().map(|x| a.mul(x, eb)).filter(|v| !vecops::is_zero(v)).collect();
                    pieces.push(Subspace::span(a.dim(), a.field(), &vecs).basis);
                }
            }
            let generators = homogeneous_generators(a, &idempotents, &pieces);
            PeirceFrame { idempotents, primitive, pieces, generators }
        }

        pub fn len(&self) -> usize {
            self.idempotents.len()
        }

        pub fn is_empty(&self) -> bool {
            self.idempotents.is_empty()
        }

        pub fn piece(&self, a: usize, b: usize) -> &[Elem] {
            &self.pieces[a * self.len() + b]
        }
    }

    /// Greedy choice of Peirce-homogeneous elements generating the algebra
    /// together with the frame idempotents.
    fn homogeneous_generators(a: &Algebra, idem: &[Elem], pieces: &[Vec<Elem>]) -> Vec<(usize, usize, Elem)> {
        let m = idem.len();
        let n = a.dim();
        let f = a.field();
        let mut gens: Vec<(usize, usize, Elem)> = Vec::new();
        // Subalgebra generated so far, as a subspace closed under products.
        let mut span = Subspace::span(n, f, idem);
        let close = |span: &Subspace, gens: &[(usize, usize, Elem)]| -> Subspace {
            let mut s = span.clone();
            loop {
                let mut new = Vec::new();
                for x in &s.basis {
                    for (_, _, g) in gens {
                        let p = a.mul(x, g);
                        if !s.contains(&p) {
                            new.push(p);
                        }
                        let p = a.mul(g, x);
                        if !s.contains(&p) {
                            new.push(p);
                        }
                    }
                }
                if new.is_empty() {
                    return s;
                }
                s = s.add_vectors(&new);
            }
        };
        // Off-diagonal pieces first (they usually generate the radical layers),
        // then diagonal ones; within a piece, basis order.
        let mut order: Vec<(usize, usize)> = Vec::new();
        for x in 0..m {
            for y in 0..m {
                if x != y {
                    order.push((x, y));
                }
            }
        }
        for x in 0..m {
            order.push((x, x));
        }
        for (x, y) in order {
            for v in &pieces[x * m + y] {
                if span.contains(v) {
                    continue;
                }
                gens.push((x, y, v.clone()));
                span = close(&span, &gens);
            }
            if span.is_full() {
                break;
            }
        }
        gens
    }
}

#[cfg(test)]
pub(crate) mod testalg {
    //! Small algebras shared by unit tests.
    use super::*;
    use crate::exactla::FieldSpec;

    pub const QQ: FieldSpec = FieldSpec::Rationals;

    /// k[x]/(x^2) on basis {1, x}.
    pub fn dual_numbers() -> Algebra {
        let z = || vec![Q::zero(), Q::zero()];
        let one = vec![Q::one(), Q::zero()];
        let x = vec![Q::zero(), Q::one()];
        Algebra::from_table(QQ, vec![vec![one.clone(), x.clone()], vec![x, z()]], one, Some(vec!["1".into(), "x".into()])).unwrap()
    }

    /// Upper triangular 2x2 matrices on basis {e11, e12, e22}.
    pub fn triangular() -> Algebra {
        families::upper_triangular_k(QQ, 2)
    }

    pub fn a5() -> Algebra {
        quiver::example_a5(QQ)
    }

    pub fn b7() -> Algebra {
        quiver::example_b7(QQ)
    }
}

#[cfg(test)]
mod tests {
    use super::testalg::*;
    use super::*;

    #[test]
    fn ground_field_and_dual_numbers() {
        let k = Algebra::from_table(QQ, vec![vec![vec![Q::one()]]], vec![Q::one()], None).unwrap();
        assert_eq!(k.dim(), 1);
        let r = dual_numbers();
        let x = r.basis(1);
        assert!(vecops::is_zero(&r.mul(&x, &x)));
        assert!(r.is_commutative());
    }

    #[test]
    fn broken_table_rejected() {
        // b0 is the unit, b1*b1 = b2, b1*b2 = 0 but b2*b1 = b2 forces (b1 b1) b1 != b1 (b1 b1).
        let n = 3;
        let e = |i: usize| vecops::unit(n, i);
        let z = vecops::zero(n);
        let table = vec![
            vec![e(0), e(1), e(2)],
            vec![e(1), e(2), z.clone()],
            vec![e(2), e(2), z.clone()],
        ];
        assert_eq!(Algebra::from_table(QQ, table, e(0), None).unwrap_err(), AlgError::AssociativityViolation(1, 1, 1));
        let table = vec![vec![e(0), e(1), e(2)], vec![e(1), z.clone(), z.clone()], vec![e(2), z.clone(), z.clone()]];
        assert_eq!(Algebra::from_table(QQ, table, e(1), None).unwrap_err(), AlgError::UnitViolation(0));
    }

    #[test]
    fn left_right_mats() {
        let t = triangular();
        for i in 0..3 {
            for j in 0..3 {
                let x = t.basis(i);
                let y = t.basis(j);
                assert_eq!(t.left_mat(&x).mul_vec(&y), t.mul(&x, &y));
                assert_eq!(t.right_mat(&y).mul_vec(&x), t.mul(&x, &y));
            }
        }
    }

    #[test]
    fn frame_generates() {
        let a = a5();
        let fr = a.frame();
        assert!(fr.primitive);
        assert_eq!(fr.len(), 2);
        // alpha and beta suffice.
        assert_eq!(fr.generators.len(), 2);
    }
}
