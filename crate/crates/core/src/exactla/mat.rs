use super::field::FieldSpec;
use super::scalar::Q;
use std::fmt;

/// Dense row-major matrix over a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
    pub field: FieldSpec,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Outcome of `a·x = b`.
#[derive(Clone, Debug)]
pub enum Solution {
    /// `particular` is `a.cols × b.cols`; `kernel` holds basis vectors of `{x : a·x = 0}`.
    Solved { particular: Mat, kernel: Vec<Vec<Q>> },
    /// The system is inconsistent. `certificate` is a row vector `y` with
    /// `y·a = 0` and `y·b ≠ 0` when available.
    NoSolution { certificate: Option<Vec<Q>> },
}

impl Solution {
    pub fn particular(&self) -> Option<&Mat> {
        match self {
            Solution::Solved { particular, .. } => Some(particular),
            Solution::NoSolution { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field mismatch: {0} vs {1}")]
    Field(FieldSpec, FieldSpec),
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Mat {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols], field }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Mat {
        let mut m = Mat::zeros(n, n, field);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize, field: FieldSpec) -> Mat {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols, data, field }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Q>], rows: usize, field: FieldSpec) -> Mat {
        let mut m = Mat::zeros(rows, cols.len(), field);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for i in 0..rows {
                m.data[i * cols.len() + j] = c[i].clone();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64], field: FieldSpec) -> Mat {
        assert_eq!(vals.len(), rows * cols);
        Mat { rows, cols, data: vals.iter().map(|&v| field.from_i64(v)).collect(), field }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j { v.is_one() } else { v.is_zero() }
            }))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let f = self.field;
        let mut r = Mat::zeros(self.rows, o.cols, f);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let orow = o.row(k);
                let out = &mut r.data[i * o.cols..(i + 1) * o.cols];
                for (dst, b) in out.iter_mut().zip(orow) {
                    f.fma(dst, a, b);
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    f.fma(&mut acc, a, b);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = self.field;
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| f.add(a, b)).collect(), field: f }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = self.field;
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| f.sub(a, b)).collect(), field: f }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        let f = self.field;
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.mul(a, c)).collect(), field: f }
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let cols = self.cols + o.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(o.row(i));
        }
        Mat { rows: self.rows, cols, data, field: self.field }
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Mat { rows: self.rows + o.rows, cols: self.cols, data, field: self.field }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + o.rows, self.cols + o.cols, self.field);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, o);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols, self.field);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat { rows: idx.len(), cols: self.cols, data, field: self.field }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, idx.len(), self.field);
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    /// Gauss-Jordan elimination to the unique reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        Rref { mat: m, pivots, rank }
    }

    /// Reduces in place and returns pivot columns. Zero multipliers are skipped,
    /// and among candidate pivots the one of smallest height is chosen to slow
    /// coefficient growth.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for i in r..rows {
                let v = &self.data[i * cols + c];
                if !v.is_zero() {
                    let h = v.height();
                    if best.map_or(true, |(_, bh)| h < bh) {
                        best = Some((i, h));
                        if h <= 2 {
                            break;
                        }
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&self.data[r * cols + c]).unwrap();
            if !inv.is_one() {
                for j in c..cols {
                    let v = &self.data[r * cols + j];
                    if !v.is_zero() {
                        self.data[r * cols + j] = f.mul(v, &inv);
                    }
                }
            }
            let prow: Vec<(usize, Q)> =
                (c..cols).filter_map(|j| { let v = &self.data[r * cols + j]; (!v.is_zero()).then(|| (j, v.clone())) }).collect();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c].clone();
                if factor.is_zero() {
                    continue;
                }
                for (j, pv) in &prow {
                    let cell = &mut self.data[i * cols + j];
                    *cell = f.sub(cell, &f.mul(&factor, pv));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let Rref { mat, pivots, .. } = self.rref();
        kernel_from_rref(&mat, &pivots)
    }

    /// Basis of `{y : y·self = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Q>> {
        self.transpose().nullspace()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n, self.field));
        let Rref { mat, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(mat.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn trace(&self) -> Q {
        let mut t = Q::zero();
        for i in 0..self.rows.min(self.cols) {
            t = self.field.add(&t, self.get(i, i));
        }
        t
    }
}

fn kernel_from_rref(mat: &Mat, pivots: &[usize]) -> Vec<Vec<Q>> {
    let f = mat.field;
    let mut is_pivot = vec![false; mat.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..mat.cols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Q::zero(); mat.cols];
        v[free] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(mat.get(i, free));
        }
        out.push(v);
    }
    out
}

/// Solves `a·x = b` exactly.
pub fn solve_linear(a: &Mat, b: &Mat) -> Result<Solution, LaError> {
    if a.rows != b.rows {
        return Err(LaError::Dimension(format!("a has {} rows, b has {}", a.rows, b.rows)));
    }
    if a.field != b.field {
        return Err(LaError::Field(a.field, b.field));
    }
    let f = a.field;
    let n = a.cols;
    let aug = a.hstack(b);
    let Rref { mat, pivots, .. } = aug.rref();
    if pivots.iter().any(|&p| p >= n) {
        // An inconsistent row; recover a certificate from the left kernel of a.
        let certificate = a
            .left_nullspace()
            .into_iter()
            .find(|y| (0..b.cols).any(|j| {
                let mut acc = Q::zero();
                for i in 0..b.rows {
                    f.fma(&mut acc, &y[i], b.get(i, j));
                }
                !acc.is_zero()
            }));
        return Ok(Solution::NoSolution { certificate });
    }
    let mut particular = Mat::zeros(n, b.cols, f);
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            particular.set(p, j, mat.get(i, n + j).clone());
        }
    }
    let left = mat.select_cols(&(0..n).collect::<Vec<_>>());
    let kernel = kernel_from_rref(&left, &pivots);
    Ok(Solution::Solved { particular, kernel })
}

/// Vector helpers over a field.
pub mod vecops {
    use super::*;

    pub fn zero(n: usize) -> Vec<Q> {
        vec![Q::zero(); n]
    }

    pub fn unit(n: usize, i: usize) -> Vec<Q> {
        let mut v = zero(n);
        v[i] = Q::one();
        v
    }

    pub fn is_zero(v: &[Q]) -> bool {
        v.iter().all(Q::is_zero)
    }

    pub fn add(f: FieldSpec, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }

    pub fn sub(f: FieldSpec, a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }

    pub fn scale(f: FieldSpec, c: &Q, a: &[Q]) -> Vec<Q> {
        a.iter().map(|x| f.mul(c, x)).collect()
    }

    /// `y += c·x`
    pub fn axpy(f: FieldSpec, y: &mut [Q], c: &Q, x: &[Q]) {
        if c.is_zero() {
            return;
        }
        for (yi, xi) in y.iter_mut().zip(x) {
            f.fma(yi, c, xi);
        }
    }

    pub fn dot(f: FieldSpec, a: &[Q], b: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (x, y) in a.iter().zip(b) {
            f.fma(&mut acc, x, y);
        }
        acc
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized as a list of rows of rational strings.
impl serde::Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QQ: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn rref_basics() {
        let id = Mat::identity(3, QQ);
        let r = id.rref();
        assert_eq!(r.mat, id);
        assert_eq!(r.rank, 3);
        let m = Mat::from_i64(2, 2, &[1, 2, 2, 4], QQ);
        let r = m.rref();
        assert_eq!(r.mat, Mat::from_i64(2, 2, &[1, 2, 0, 0], QQ));
        assert_eq!(r.rank, 1);
        assert_eq!(r.mat.rref().mat, r.mat);
    }

    #[test]
    fn solve_cases() {
        let b = Mat::from_i64(2, 1, &[3, -4], QQ);
        match solve_linear(&Mat::identity(2, QQ), &b).unwrap() {
            Solution::Solved { particular, kernel } => {
                assert_eq!(particular, b);
                assert!(kernel.is_empty());
            }
            _ => panic!(),
        }
        match solve_linear(&Mat::zeros(2, 2, QQ), &Mat::zeros(2, 1, QQ)).unwrap() {
            Solution::Solved { particular, kernel } => {
                assert!(particular.is_zero());
                assert_eq!(kernel.len(), 2);
            }
            _ => panic!(),
        }
        let a = Mat::from_i64(2, 2, &[1, 1, 0, 0], QQ);
        let b = Mat::from_i64(2, 1, &[1, 1], QQ);
        match solve_linear(&a, &b).unwrap() {
            Solution::NoSolution { certificate } => {
                let y = certificate.unwrap();
                assert!(vecops::is_zero(&a.transpose().mul_vec(&y)));
            }
            _ => panic!(),
        }
        assert!(solve_linear(&a, &Mat::zeros(3, 1, QQ)).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_i64(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4], QQ);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Mat::from_i64(2, 2, &[1, 2, 2, 4], QQ).inverse().is_none());
    }

    #[test]
    fn prime_field_rank() {
        let f7 = FieldSpec::prime(7).unwrap();
        let m = Mat::from_i64(2, 2, &[3, 1, 1, 4], f7);
        assert_eq!(m.rank(), 2);
        // det = 7: singular mod 7, invertible over Q.
        assert_eq!(Mat::from_i64(2, 2, &[1, 3, 2, 13], QQ).rank(), 2);
        let s = Mat::from_i64(2, 2, &[1, 3, 2, 13], f7);
        assert_eq!(s.rank(), 1);
    }
}
