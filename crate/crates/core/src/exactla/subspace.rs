use super::field::FieldSpec;
use super::mat::{vecops, LaError, Mat};
use super::scalar::Q;

/// A subspace of `k^n` stored by its canonical RREF basis, so equal
/// subspaces compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<Q>>,
    pub pivots: Vec<usize>,
    pub field: FieldSpec,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, field: FieldSpec) -> Subspace {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new(), field }
    }

    pub fn full(ambient_dim: usize, field: FieldSpec) -> Subspace {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| vecops::unit(ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
            field,
        }
    }

    pub fn span(ambient_dim: usize, field: FieldSpec, vecs: &[Vec<Q>]) -> Subspace {
        if vecs.is_empty() {
            return Subspace::zero(ambient_dim, field);
        }
        let m = Mat::from_rows(vecs.to_vec(), ambient_dim, field);
        Subspace::from_rref(m)
    }

    fn from_rref(mut m: Mat) -> Subspace {
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace { ambient_dim: m.cols, basis, pivots, field: m.field }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn as_mat(&self) -> Mat {
        Mat::from_rows(self.basis.clone(), self.ambient_dim, self.field)
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is a member.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let f = self.field;
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let c = f.neg(&r[p]);
                vecops::axpy(f, &mut r, &c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        vecops::is_zero(&self.reduce(v))
    }

    /// Coordinates with respect to the canonical basis, when `v` is a member.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn contains_space(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn add_vectors(&self, vecs: &[Vec<Q>]) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(vecs.iter().filter(|v| !self.contains(v)).cloned());
        if all.len() == self.basis.len() {
            return self.clone();
        }
        Subspace::span(self.ambient_dim, self.field, &all)
    }

    fn check(&self, o: &Subspace) -> Result<(), LaError> {
        if self.ambient_dim != o.ambient_dim {
            return Err(LaError::Dimension(format!("ambient {} vs {}", self.ambient_dim, o.ambient_dim)));
        }
        if self.field != o.field {
            return Err(LaError::Field(self.field, o.field));
        }
        Ok(())
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace, LaError> {
        self.check(o)?;
        Ok(self.add_vectors(&o.basis))
    }

    /// Linear functionals vanishing on the subspace, as row vectors.
    pub fn annihilator(&self) -> Vec<Vec<Q>> {
        if self.basis.is_empty() {
            return (0..self.ambient_dim).map(|i| vecops::unit(self.ambient_dim, i)).collect();
        }
        self.as_mat().nullspace()
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace, LaError> {
        self.check(o)?;
        if self.is_full() {
            return Ok(o.clone());
        }
        if o.is_full() || self == o {
            return Ok(self.clone());
        }
        let mut ann = self.annihilator();
        ann.extend(o.annihilator());
        let m = Mat::from_rows(ann, self.ambient_dim, self.field);
        Ok(Subspace::span(self.ambient_dim, self.field, &m.nullspace()))
    }

    /// Indices of standard basis vectors whose images form a basis of the
    /// quotient `k^n / self`.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_p[p] = true;
        }
        (0..self.ambient_dim).filter(|&i| !is_p[i]).collect()
    }

    /// Coordinates of the class of `v` in the quotient, on the basis given by
    /// [`complement_indices`](Self::complement_indices).
    pub fn quotient_coords(&self, v: &[Q]) -> Vec<Q> {
        let r = self.reduce(v);
        self.complement_indices().into_iter().map(|i| r[i].clone()).collect()
    }

    /// Image of this subspace under a linear map given as a matrix acting on columns.
    pub fn image_under(&self, m: &Mat) -> Subspace {
        let imgs: Vec<Vec<Q>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows, self.field, &imgs)
    }
}

/// Column space of a matrix.
pub fn column_space(m: &Mat) -> Subspace {
    Subspace::span(m.rows, m.field, &m.col_vecs())
}

/// Kernel of a matrix acting on column vectors.
pub fn kernel(m: &Mat) -> Subspace {
    Subspace::span(m.cols, m.field, &m.nullspace())
}

#[cfg(test)]
mod tests {
    use super::*;

    const QQ: FieldSpec = FieldSpec::Rationals;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| Q::from_i64(x)).collect()
    }

    #[test]
    fn canonical_form() {
        let a = Subspace::span(3, QQ, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, QQ, &[v(&[1, 2, 1]), v(&[2, 1, -1])]);
        assert_eq!(a, b);
        assert!(a.contains(&v(&[1, 0, -1])));
        assert!(!a.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn lattice_ops() {
        let u = Subspace::span(4, QQ, &[v(&[1, 0, 0, 0]), v(&[0, 1, 1, 0])]);
        let z = Subspace::zero(4, QQ);
        assert_eq!(u.sum(&z).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);
        let w = Subspace::span(4, QQ, &[v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])]);
        let i = u.intersect(&w).unwrap();
        assert_eq!(i, Subspace::span(4, QQ, &[v(&[0, 1, 1, 0])]));
        let s = u.sum(&w).unwrap();
        assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        assert_eq!(s.complement_indices(), vec![3]);
        assert!(u.sum(&Subspace::zero(3, QQ)).is_err());
    }
}
