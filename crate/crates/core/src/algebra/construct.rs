//! Ideals, quotients, corners, opposites, products and subalgebras.

use super::{AlgError, Algebra, Elem, Hints, Provenance};
use crate::exactla::{vecops, Mat, Q, Subspace};

/// A two-sided ideal together with the generators it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub space: Subspace,
    pub generators: Vec<Elem>,
}

impl Ideal {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.space.contains(x)
    }

    /// `I·J` as a subspace (again an ideal when both are).
    pub fn product(&self, a: &Algebra, o: &Ideal) -> Subspace {
        a.product_space(&self.space, &o.space)
    }

    pub fn is_idempotent(&self, a: &Algebra) -> bool {
        self.product(a, self) == self.space
    }
}

/// Smallest two-sided ideal containing `gens`: first the left ideal `A·gens`,
/// then its right closure.
pub fn ideal_generated(a: &Algebra, gens: &[Elem]) -> Ideal {
    let n = a.dim();
    let f = a.field();
    let mut left = Vec::new();
    for g in gens {
        for i in 0..n {
            let p = a.mul(&a.basis(i), g);
            if !vecops::is_zero(&p) {
                left.push(p);
            }
        }
    }
    let l = Subspace::span(n, f, &left);
    let mut both = Vec::new();
    for x in &l.basis {
        for j in 0..n {
            let p = a.mul(x, &a.basis(j));
            if !vecops::is_zero(&p) {
                both.push(p);
            }
        }
    }
    Ideal { space: Subspace::span(n, f, &both), generators: gens.to_vec() }
}

/// Checks that a subspace is a two-sided ideal.
pub fn is_ideal(a: &Algebra, s: &Subspace) -> bool {
    (0..a.dim()).all(|i| {
        let b = a.basis(i);
        s.basis.iter().all(|x| s.contains(&a.mul(&b, x)) && s.contains(&a.mul(x, &b)))
    })
}

pub fn left_ideal_generated(a: &Algebra, gens: &[Elem]) -> Subspace {
    let mut v = Vec::new();
    for g in gens {
        for i in 0..a.dim() {
            v.push(a.mul(&a.basis(i), g));
        }
    }
    Subspace::span(a.dim(), a.field(), &v)
}

pub fn right_ideal_generated(a: &Algebra, gens: &[Elem]) -> Subspace {
    let mut v = Vec::new();
    for g in gens {
        for i in 0..a.dim() {
            v.push(a.mul(g, &a.basis(i)));
        }
    }
    Subspace::span(a.dim(), a.field(), &v)
}

/// Quotient by an ideal, on the basis of standard vectors complementary to
/// the ideal's pivots.
pub fn quotient(a: &Algebra, ideal: &Subspace) -> Algebra {
    let keep = ideal.complement_indices();
    let m = keep.len();
    let f = a.field();
    let mut products = Vec::with_capacity(m * m);
    for &i in &keep {
        for &j in &keep {
            let p = a.mul(&a.basis(i), &a.basis(j));
            let c = ideal.quotient_coords(&p);
            products.push(c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
        }
    }
    let unit = ideal.quotient_coords(a.unit());
    let labels = keep.iter().map(|&i| a.labels()[i].clone()).collect();
    Algebra::new_unchecked(f, m, products, unit, Some(labels), Provenance::Quotient(format!("by ideal of dim {}", ideal.dim())))
        .expect("quotient table well formed")
}

/// Map from `A` to a quotient built by [`quotient`].
pub fn quotient_map(a: &Algebra, ideal: &Subspace) -> Mat {
    let cols: Vec<Vec<Q>> = (0..a.dim()).map(|i| ideal.quotient_coords(&a.basis(i))).collect();
    Mat::from_cols(&cols, ideal.complement_indices().len(), a.field())
}

/// Lifts quotient coordinates back to `A` (a section, not multiplicative).
pub fn quotient_lift(a: &Algebra, ideal: &Subspace, c: &[Q]) -> Elem {
    let mut v = a.zero();
    for (k, &i) in ideal.complement_indices().iter().enumerate() {
        v[i] = c[k].clone();
    }
    v
}

/// Subalgebra spanned by `basis` (which must be closed under products and
/// contain `unit`), expressed in coordinates of that basis.
pub fn subalgebra(a: &Algebra, basis: &[Elem], unit: &[Q], provenance: Provenance) -> Result<(Algebra, Subspace), AlgError> {
    let space = Subspace::span(a.dim(), a.field(), basis);
    let vecs = space.basis.clone();
    let m = vecs.len();
    let mut products = Vec::with_capacity(m * m);
    for x in &vecs {
        for y in &vecs {
            let p = a.mul(x, y);
            let c = space
                .coords(&p)
                .ok_or_else(|| AlgError::Malformed("subspace not closed under multiplication".into()))?;
            products.push(c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
        }
    }
    let u = space.coords(unit).ok_or_else(|| AlgError::Malformed("unit outside subspace".into()))?;
    let labels = vecs.iter().map(|v| a.format_elem(v)).collect();
    let alg = Algebra::new_unchecked(a.field(), m, products, u, Some(labels), provenance)?;
    Ok((alg, space))
}

/// A corner algebra `eAe` with its embedding into `A`.
#[derive(Debug, Clone)]
pub struct Corner {
    pub algebra: Algebra,
    /// Images in `A` of the corner's basis vectors.
    pub embedding: Vec<Elem>,
    pub space: Subspace,
}

impl Corner {
    pub fn embed(&self, x: &[Q]) -> Elem {
        let f = self.algebra.field();
        let mut v = vecops::zero(self.space.ambient_dim);
        for (c, b) in x.iter().zip(&self.embedding) {
            vecops::axpy(f, &mut v, c, b);
        }
        v
    }

    pub fn restrict(&self, x: &[Q]) -> Option<Elem> {
        self.space.coords(x)
    }
}

pub fn corner(a: &Algebra, e: &[Q]) -> Result<Corner, AlgError> {
    if !a.is_idempotent(e) {
        return Err(AlgError::NotIdempotent);
    }
    let vecs: Vec<Elem> = (0..a.dim()).map(|i| a.mul(&a.mul(e, &a.basis(i)), e)).collect();
    let (mut alg, space) = subalgebra(a, &vecs, e, Provenance::Corner(a.format_elem(e)))?;
    // Inherit known idempotent data when e is a sum of them.
    if let Some(prims) = &a.hints.primitive_idempotents {
        let inside: Vec<Elem> = prims.iter().filter(|p| a.mul(e, p) == **p && a.mul(p, e) == **p).cloned().collect();
        let mut sum = a.zero();
        for p in &inside {
            sum = a.add(&sum, p);
        }
        if sum == e {
            let mapped: Option<Vec<Elem>> = inside.iter().map(|p| space.coords(p)).collect();
            // rad(eAe) = e·rad(A)·e
            let rad = a.hints.radical.as_ref().and_then(|r| {
                r.iter().map(|x| a.mul(&a.mul(e, x), e)).filter(|x| !vecops::is_zero(x)).map(|x| space.coords(&x)).collect::<Option<Vec<_>>>()
            });
            alg.hints = Hints { primitive_idempotents: mapped, radical: rad };
        }
    }
    let embedding = space.basis.clone();
    Ok(Corner { algebra: alg, embedding, space })
}

/// Opposite algebra: same basis, products reversed.
pub fn opposite(a: &Algebra) -> Algebra {
    let n = a.dim();
    let mut products = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            products.push(a.basis_product(j, i).to_vec());
        }
    }
    let prov = match &a.provenance {
        Provenance::Opposite(s) => Provenance::Derived(format!("opposite of opposite of {}", s)),
        p => Provenance::Opposite(p.to_string()),
    };
    let mut out = Algebra::new_unchecked(a.field(), n, products, a.unit().clone(), Some(a.labels().to_vec()), prov)
        .expect("opposite table well formed");
    out.hints = a.hints.clone();
    out
}

/// Direct product `A_1 × ... × A_r` on the concatenated bases.
pub fn direct_product(parts: &[&Algebra]) -> Result<Algebra, AlgError> {
    let f = parts.first().map(|p| p.field()).unwrap_or(crate::exactla::FieldSpec::Rationals);
    if parts.iter().any(|p| p.field() != f) {
        return Err(AlgError::Malformed("factors over different fields".into()));
    }
    let n: usize = parts.iter().map(|p| p.dim()).sum();
    let mut products = vec![Vec::new(); n * n];
    let mut unit = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut off = 0;
    let mut prims = Some(Vec::new());
    let mut rad = Some(Vec::new());
    for (pi, p) in parts.iter().enumerate() {
        let d = p.dim();
        for i in 0..d {
            for j in 0..d {
                products[(off + i) * n + off + j] = p.basis_product(i, j).iter().map(|(k, c)| (off + k, c.clone())).collect();
            }
        }
        unit.extend(p.unit().iter().cloned());
        labels.extend(p.labels().iter().map(|l| format!("{}.{}", pi + 1, l)));
        let widen = |v: &Elem| -> Elem {
            let mut w = vecops::zero(n);
            w[off..off + d].clone_from_slice(v);
            w
        };
        match (&mut prims, &p.hints.primitive_idempotents) {
            (Some(acc), Some(ps)) => acc.extend(ps.iter().map(widen)),
            _ => prims = None,
        }
        match (&mut rad, &p.hints.radical) {
            (Some(acc), Some(rs)) => acc.extend(rs.iter().map(widen)),
            _ => rad = None,
        }
        off += d;
    }
    let mut alg = Algebra::new_unchecked(f, n, products, unit, Some(labels), Provenance::Product(parts.iter().map(|p| p.provenance.to_string()).collect()))?;
    alg.hints = Hints { primitive_idempotents: prims, radical: rad };
    Ok(alg)
}

/// Center of the algebra as a subspace.
pub fn center(a: &Algebra) -> Subspace {
    let n = a.dim();
    if n == 0 {
        return Subspace::zero(0, a.field());
    }
    let f = a.field();
    // z ↦ z b - b z for each basis element b, stacked.
    let mut rows = Mat::zeros(0, n, f);
    for i in 0..n {
        let b = a.basis(i);
        let m = a.right_mat(&b).sub(&a.left_mat(&b));
        rows = rows.vstack(&m);
        if rows.rows > 4 * n {
            let r = rows.rref();
            rows = r.mat.select_rows(&(0..r.rank).collect::<Vec<_>>());
        }
    }
    Subspace::span(n, f, &rows.nullspace())
}

/// Ordered basis of a quotient algebra's image of `x`.
pub fn reduce_mod(ideal: &Subspace, x: &[Q]) -> Elem {
    ideal.quotient_coords(x)
}
