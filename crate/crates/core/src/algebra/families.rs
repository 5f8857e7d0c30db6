//! Matrix-ring constructions over a base algebra: full and triangular
//! matrix rings, Morita contexts, tiled rings cut out by ideals, skew group
//! rings and trivial extensions.

use super::construct::ideal_generated;
use super::{AlgError, Algebra, Elem, Hints, Provenance};
use crate::exactla::{vecops, FieldSpec, Mat, Poly, Q, Subspace};

/// The ground field as a one-dimensional algebra.
pub fn ground(field: FieldSpec) -> Algebra {
    let mut a = Algebra::new_unchecked(field, 1, vec![vec![(0, Q::one())]], vec![Q::one()], Some(vec!["1".into()]), Provenance::Family("ground field".into()))
        .expect("well formed");
    a.hints = Hints { primitive_idempotents: Some(vec![vec![Q::one()]]), radical: Some(Vec::new()) };
    a
}

/// Upper triangular `n×n` matrices over the field, basis `e_ij` (i ≤ j).
pub fn upper_triangular_k(field: FieldSpec, n: usize) -> Algebra {
    let mut idx = vec![vec![None; n]; n];
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i..n {
            idx[i][j] = Some(labels.len());
            labels.push(format!("e{}{}", i + 1, j + 1));
        }
    }
    let d = labels.len();
    let mut products = vec![Vec::new(); d * d];
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let a = idx[i][j].unwrap();
                let b = idx[j][k].unwrap();
                products[a * d + b] = vec![(idx[i][k].unwrap(), Q::one())];
            }
        }
    }
    let mut unit = vecops::zero(d);
    for i in 0..n {
        unit[idx[i][i].unwrap()] = Q::one();
    }
    let mut a = Algebra::new_unchecked(field, d, products, unit, Some(labels), Provenance::Family(format!("upper triangular {}x{}", n, n)))
        .expect("well formed");
    let prims = (0..n).map(|i| vecops::unit(d, idx[i][i].unwrap())).collect();
    let rad = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| vecops::unit(d, idx[i][j].unwrap())).collect();
    a.hints = Hints { primitive_idempotents: Some(prims), radical: Some(rad) };
    a
}

/// `Q[x]/(p)` with basis `1, x, x^2, ...`.
pub fn number_field(p: &Poly) -> Algebra {
    let p = p.monic();
    let d = p.degree().expect("nonzero polynomial");
    let f = FieldSpec::Rationals;
    let mut products = vec![Vec::new(); d * d];
    for i in 0..d {
        for j in 0..d {
            let mut c = vec![Q::zero(); i + j + 1];
            c[i + j] = Q::one();
            let r = Poly::new(c).rem(&p);
            products[i * d + j] = r.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect();
        }
    }
    let labels = (0..d)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x{}", i),
        })
        .collect();
    Algebra::new_unchecked(f, d, products, vecops::unit(d, 0), Some(labels), Provenance::Family("polynomial quotient".into())).expect("well formed")
}

/// A bimodule `_L M_R` by action matrices on column vectors: `left[i]` is
/// the action of the `i`-th basis element of `L`, `right[j]` maps `m` to `m·b_j`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub dim: usize,
    pub left: Vec<Mat>,
    pub right: Vec<Mat>,
}

impl Bimodule {
    /// A two-sided ideal (or any sub-bimodule) of `a`, in the coordinates of
    /// its RREF basis.
    pub fn from_subspace(a: &Algebra, s: &Subspace) -> Result<Bimodule, AlgError> {
        let d = s.dim();
        let f = a.field();
        let act = |side_left: bool, i: usize| -> Result<Mat, AlgError> {
            let b = a.basis(i);
            let mut m = Mat::zeros(d, d, f);
            for (c, v) in s.basis.iter().enumerate() {
                let p = if side_left { a.mul(&b, v) } else { a.mul(v, &b) };
                let co = s.coords(&p).ok_or_else(|| AlgError::BadFamily("subspace is not closed under the actions".into()))?;
                for (r, x) in co.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            Ok(m)
        };
        let left = (0..a.dim()).map(|i| act(true, i)).collect::<Result<_, _>>()?;
        let right = (0..a.dim()).map(|i| act(false, i)).collect::<Result<_, _>>()?;
        Ok(Bimodule { dim: d, left, right })
    }

    /// The zero bimodule.
    pub fn zero(l: &Algebra, r: &Algebra) -> Bimodule {
        Bimodule {
            dim: 0,
            left: (0..l.dim()).map(|_| Mat::zeros(0, 0, l.field())).collect(),
            right: (0..r.dim()).map(|_| Mat::zeros(0, 0, r.field())).collect(),
        }
    }

    fn check_shape(&self, l: &Algebra, r: &Algebra) -> Result<(), AlgError> {
        let ok = self.left.len() == l.dim()
            && self.right.len() == r.dim()
            && self.left.iter().chain(&self.right).all(|m| m.rows == self.dim && m.cols == self.dim);
        if ok {
            Ok(())
        } else {
            Err(AlgError::BadFamily("bimodule action matrices have the wrong shape".into()))
        }
    }
}

/// Accumulates sparse products on a concatenated basis.
struct TableBuilder {
    dim: usize,
    field: FieldSpec,
    products: Vec<Vec<Q>>,
}

impl TableBuilder {
    fn new(dim: usize, field: FieldSpec) -> TableBuilder {
        TableBuilder { dim, field, products: vec![Vec::new(); dim * dim] }
    }

    fn add(&mut self, i: usize, j: usize, k: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        let slot = &mut self.products[i * self.dim + j];
        if slot.is_empty() {
            *slot = vecops::zero(self.dim);
        }
        slot[k] = self.field.add(&slot[k], c);
    }

    fn finish(self, unit: Elem, labels: Vec<String>, prov: Provenance) -> Result<Algebra, AlgError> {
        let products = self.products.into_iter().map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()).collect();
        Algebra::from_sparse(self.field, self.dim, products, unit, Some(labels), prov)
    }
}

fn clean_label(s: &str) -> String {
    s.replace('*', ".")
}

/// Morita context ring `[[R, M], [N, S]]` with pairings
/// `phi: M ⊗ N → R` and `psi: N ⊗ M → S` given on basis pairs.
#[derive(Clone, Debug)]
pub struct MoritaData {
    pub r: Algebra,
    pub s: Algebra,
    pub m: Bimodule,
    pub n: Bimodule,
    pub phi: Vec<Vec<Elem>>,
    pub psi: Vec<Vec<Elem>>,
}

/// Layout of a Morita context ring: offsets of the four corners.
#[derive(Clone, Debug)]
pub struct MoritaRing {
    pub algebra: Algebra,
    pub offsets: [usize; 4],
}

impl MoritaRing {
    /// `diag(1, 0)` and `diag(0, 1)`.
    pub fn corner_idempotents(&self) -> (Elem, Elem) {
        let d = self.algebra.dim();
        let mut e1 = vecops::zero(d);
        let mut e2 = vecops::zero(d);
        for (k, c) in self.algebra.unit().iter().enumerate() {
            if k < self.offsets[1] {
                e1[k] = c.clone();
            } else if k >= self.offsets[3] {
                e2[k] = c.clone();
            }
        }
        (e1, e2)
    }
}

pub fn morita_context(data: &MoritaData) -> Result<MoritaRing, AlgError> {
    let MoritaData { r, s, m, n, phi, psi } = data;
    if r.field() != s.field() {
        return Err(AlgError::BadFamily("corner rings over different fields".into()));
    }
    m.check_shape(r, s)?;
    n.check_shape(s, r)?;
    if phi.len() != m.dim || phi.iter().any(|row| row.len() != n.dim || row.iter().any(|x| x.len() != r.dim())) {
        return Err(AlgError::BadFamily("pairing M x N -> R has the wrong shape".into()));
    }
    if psi.len() != n.dim || psi.iter().any(|row| row.len() != m.dim || row.iter().any(|x| x.len() != s.dim())) {
        return Err(AlgError::BadFamily("pairing N x M -> S has the wrong shape".into()));
    }
    let f = r.field();
    let (dr, dm, dn, ds) = (r.dim(), m.dim, n.dim, s.dim());
    let o = [0, dr, dr + dm, dr + dm + dn];
    let d = o[3] + ds;
    let mut t = TableBuilder::new(d, f);
    for i in 0..dr {
        for j in 0..dr {
            for (k, c) in r.basis_product(i, j) {
                t.add(o[0] + i, o[0] + j, o[0] + k, c);
            }
        }
        // r · m
        for j in 0..dm {
            for k in 0..dm {
                t.add(o[0] + i, o[1] + j, o[1] + k, m.left[i].get(k, j));
            }
        }
        // n · r
        for j in 0..dn {
            for k in 0..dn {
                t.add(o[2] + j, o[0] + i, o[2] + k, n.right[i].get(k, j));
            }
        }
    }
    for i in 0..ds {
        for j in 0..ds {
            for (k, c) in s.basis_product(i, j) {
                t.add(o[3] + i, o[3] + j, o[3] + k, c);
            }
        }
        for j in 0..dm {
            for k in 0..dm {
                t.add(o[1] + j, o[3] + i, o[1] + k, m.right[i].get(k, j));
            }
        }
        for j in 0..dn {
            for k in 0..dn {
                t.add(o[3] + i, o[2] + j, o[2] + k, n.left[i].get(k, j));
            }
        }
    }
    for a in 0..dm {
        for b in 0..dn {
            for (k, c) in phi[a][b].iter().enumerate() {
                t.add(o[1] + a, o[2] + b, o[0] + k, c);
            }
            for (k, c) in psi[b][a].iter().enumerate() {
                t.add(o[2] + b, o[1] + a, o[3] + k, c);
            }
        }
    }
    let mut unit = vecops::zero(d);
    unit[..dr].clone_from_slice(r.unit());
    unit[o[3]..].clone_from_slice(s.unit());
    let mut labels: Vec<String> = r.labels().iter().map(|l| format!("r.{}", clean_label(l))).collect();
    labels.extend((0..dm).map(|i| format!("m{}", i + 1)));
    labels.extend((0..dn).map(|i| format!("n{}", i + 1)));
    labels.extend(s.labels().iter().map(|l| format!("s.{}", clean_label(l))));
    let prov = Provenance::Family(format!("Morita context: R at 0..{}, M at {}..{}, N at {}..{}, S at {}..{}", o[1], o[1], o[2], o[2], o[3], o[3], d));
    let mut alg = t.finish(unit, labels, prov).map_err(|e| match e {
        AlgError::AssociativityViolation(..) | AlgError::UnitViolation(_) => AlgError::BadFamily(format!("context data is not compatible: {}", e)),
        e => e,
    })?;
    if let (Some(pr), Some(ps)) = (&r.hints.primitive_idempotents, &s.hints.primitive_idempotents) {
        let mut prims: Vec<Elem> = Vec::new();
        for p in pr {
            let mut v = vecops::zero(d);
            v[..dr].clone_from_slice(p);
            prims.push(v);
        }
        for p in ps {
            let mut v = vecops::zero(d);
            v[o[3]..].clone_from_slice(p);
            prims.push(v);
        }
        alg.hints.primitive_idempotents = Some(prims);
    }
    Ok(MoritaRing { algebra: alg, offsets: o })
}

/// Triangular ring `[[R1, M], [0, R2]]` for an `R1-R2` bimodule `M`.
pub fn triangular_ring(r1: &Algebra, r2: &Algebra, m: &Bimodule) -> Result<MoritaRing, AlgError> {
    let data = MoritaData {
        r: r1.clone(),
        s: r2.clone(),
        m: m.clone(),
        n: Bimodule::zero(r2, r1),
        phi: vec![Vec::new(); m.dim],
        psi: Vec::new(),
    };
    let mut out = morita_context(&data)?;
    if let (Some(a), Some(b)) = (&r1.hints.radical, &r2.hints.radical) {
        let d = out.algebra.dim();
        let o = out.offsets;
        let mut rad: Vec<Elem> = Vec::new();
        for v in a {
            let mut w = vecops::zero(d);
            w[..o[1]].clone_from_slice(v);
            rad.push(w);
        }
        rad.extend((o[1]..o[2]).map(|k| vecops::unit(d, k)));
        for v in b {
            let mut w = vecops::zero(d);
            w[o[3]..].clone_from_slice(v);
            rad.push(w);
        }
        out.algebra.hints.radical = Some(rad);
    }
    out.algebra.provenance = Provenance::Family(format!("triangular ring: R1 at 0..{}, M at {}..{}, R2 at {}..{}", out.offsets[1], out.offsets[1], out.offsets[2], out.offsets[3], out.algebra.dim()));
    Ok(out)
}

/// An `n×n` block algebra whose `(i,j)` entry is a subspace of the base
/// algebra, with multiplication induced by matrix multiplication.
#[derive(Clone, Debug)]
pub struct BlockAlgebra {
    pub algebra: Algebra,
    pub n: usize,
    pub entries: Vec<Vec<Subspace>>,
    /// Offset of block `(i,j)` in the basis.
    pub offsets: Vec<Vec<usize>>,
}

impl BlockAlgebra {
    /// Places `x` (an element of the base lying in entry `(i,j)`) into the block algebra.
    pub fn embed(&self, i: usize, j: usize, x: &[Q]) -> Option<Elem> {
        let co = self.entries[i][j].coords(x)?;
        let mut v = vecops::zero(self.algebra.dim());
        for (t, c) in co.into_iter().enumerate() {
            v[self.offsets[i][j] + t] = c;
        }
        Some(v)
    }

    /// The matrix unit `1` at diagonal position `i`.
    pub fn diagonal_idempotent(&self, base_unit: &[Q], i: usize) -> Elem {
        self.embed(i, i, base_unit).expect("diagonal entries contain the unit")
    }
}

/// Builds a block algebra after checking `entry(i,j)·entry(j,k) ⊆ entry(i,k)`
/// for all positions. Diagonal entries must contain the unit.
pub fn block_matrix(base: &Algebra, entries: Vec<Vec<Subspace>>, name: &str) -> Result<BlockAlgebra, AlgError> {
    let n = entries.len();
    let f = base.field();
    if entries.iter().any(|r| r.len() != n) {
        return Err(AlgError::BadFamily("block pattern must be square".into()));
    }
    if entries.iter().flatten().any(|s| s.ambient_dim != base.dim()) {
        return Err(AlgError::BadFamily("block entries must be subspaces of the base".into()));
    }
    for (i, row) in entries.iter().enumerate() {
        if !row[i].contains(base.unit()) {
            return Err(AlgError::BadFamily(format!("diagonal entry ({},{}) does not contain the unit", i + 1, i + 1)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = base.product_space(&entries[i][j], &entries[j][k]);
                if !entries[i][k].contains_space(&p) {
                    return Err(AlgError::ClosureViolation(i + 1, k + 1, format!("entry ({},{}) times entry ({},{}) leaves entry ({},{})", i + 1, j + 1, j + 1, k + 1, i + 1, k + 1)));
                }
            }
        }
    }
    let mut offsets = vec![vec![0; n]; n];
    let mut labels = Vec::new();
    let mut d = 0;
    for i in 0..n {
        for j in 0..n {
            offsets[i][j] = d;
            for v in &entries[i][j].basis {
                let l = if base.dim() == 1 {
                    format!("e{}{}", i + 1, j + 1)
                } else {
                    let s = base.format_elem(v);
                    let s = if base.labels().contains(&s) { clean_label(&s) } else { format!("v{}", labels.len() + 1) };
                    format!("{}_{}{}", s, i + 1, j + 1)
                };
                labels.push(l);
            }
            d += entries[i][j].dim();
        }
    }
    let mut t = TableBuilder::new(d, f);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for (a, x) in entries[i][j].basis.iter().enumerate() {
                    for (b, y) in entries[j][k].basis.iter().enumerate() {
                        let p = base.mul(x, y);
                        let co = entries[i][k].coords(&p).expect("closure checked");
                        for (c, v) in co.iter().enumerate() {
                            t.add(offsets[i][j] + a, offsets[j][k] + b, offsets[i][k] + c, v);
                        }
                    }
                }
            }
        }
    }
    let mut unit = vecops::zero(d);
    for i in 0..n {
        for (c, v) in entries[i][i].coords(base.unit()).unwrap().into_iter().enumerate() {
            unit[offsets[i][i] + c] = v;
        }
    }
    let mut layout = String::new();
    for i in 0..n {
        for j in 0..n {
            layout.push_str(&format!(" ({},{})@{}+{}", i + 1, j + 1, offsets[i][j], entries[i][j].dim()));
        }
    }
    let prov = Provenance::Family(format!("{} block algebra over {}:{}", name, base.provenance, layout));
    let mut alg = t.finish(unit, labels, prov)?;
    let mut out = BlockAlgebra { algebra: alg.clone(), n, entries, offsets };
    if let Some(ps) = &base.hints.primitive_idempotents {
        let mut prims = Vec::new();
        for i in 0..n {
            for p in ps {
                prims.push(out.embed(i, i, p).expect("diagonal entries are full enough"));
            }
        }
        if out.entries.iter().enumerate().all(|(i, r)| r[i].is_full()) {
            alg.hints.primitive_idempotents = Some(prims);
            out.algebra = alg;
        }
    }
    Ok(out)
}

/// `M_n(base)`.
pub fn matrix_algebra(base: &Algebra, n: usize) -> Algebra {
    let full = Subspace::full(base.dim(), base.field());
    let entries = vec![vec![full; n]; n];
    block_matrix(base, entries, &format!("{}x{} matrix", n, n)).expect("full matrix ring is closed").algebra
}

/// Powers of an ideal: `J^0 = base`, `J^k = J^{k-1}·J`.
pub fn ideal_power(base: &Algebra, j: &Subspace, k: usize) -> Subspace {
    let mut p = Subspace::full(base.dim(), base.field());
    for _ in 0..k {
        p = base.product_space(&p, j);
    }
    p
}

fn require_ideal(base: &Algebra, s: &Subspace, what: &str) -> Result<(), AlgError> {
    if super::construct::is_ideal(base, s) {
        Ok(())
    } else {
        Err(AlgError::BadFamily(format!("{} is not a two-sided ideal", what)))
    }
}

/// Tiled ring with `R` on the diagonal, `J^{i-j}` below it and the ideals
/// `upper[i][j]` (for `i < j`) above it. The three containments
/// `I_{i,j+1}J ⊆ I_{ij}`, `J I_{ij} ⊆ I_{i+1,j}`, `I_{ij}I_{jk} ⊆ I_{ik}` are
/// checked and reported by position.
pub fn tiled(base: &Algebra, j: &Subspace, upper: &[Vec<Option<Subspace>>], n: usize) -> Result<BlockAlgebra, AlgError> {
    require_ideal(base, j, "J")?;
    let get = |a: usize, b: usize| -> Result<&Subspace, AlgError> {
        upper.get(a).and_then(|r| r.get(b)).and_then(|x| x.as_ref()).ok_or_else(|| AlgError::BadFamily(format!("missing ideal I_{}{}", a + 1, b + 1)))
    };
    for a in 0..n {
        for b in a + 1..n {
            require_ideal(base, get(a, b)?, &format!("I_{}{}", a + 1, b + 1))?;
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let iab = get(a, b)?;
            if b + 1 < n && !iab.contains_space(&base.product_space(get(a, b + 1)?, j)) {
                return Err(AlgError::ClosureViolation(a + 1, b + 1, format!("I_{}{}·J is not inside I_{}{}", a + 1, b + 2, a + 1, b + 1)));
            }
            if a + 1 < b && !get(a + 1, b)?.contains_space(&base.product_space(j, iab)) {
                return Err(AlgError::ClosureViolation(a + 2, b + 1, format!("J·I_{}{} is not inside I_{}{}", a + 1, b + 1, a + 2, b + 1)));
            }
            for c in b + 1..n {
                if !get(a, c)?.contains_space(&base.product_space(iab, get(b, c)?)) {
                    return Err(AlgError::ClosureViolation(a + 1, c + 1, format!("I_{}{}·I_{}{} is not inside I_{}{}", a + 1, b + 1, b + 1, c + 1, a + 1, c + 1)));
                }
            }
        }
    }
    let mut entries = Vec::new();
    for a in 0..n {
        let mut row = Vec::new();
        for b in 0..n {
            row.push(if a == b {
                Subspace::full(base.dim(), base.field())
            } else if a < b {
                get(a, b)?.clone()
            } else {
                ideal_power(base, j, a - b)
            });
        }
        entries.push(row);
    }
    block_matrix(base, entries, "tiled")
}

/// `R` on the diagonal, `I` above, `J` below; requires `JI = 0`.
pub fn ji_zero(base: &Algebra, i: &Subspace, j: &Subspace, n: usize) -> Result<BlockAlgebra, AlgError> {
    require_ideal(base, i, "I")?;
    require_ideal(base, j, "J")?;
    if !base.product_space(j, i).is_zero() {
        return Err(AlgError::ClosureViolation(2, 1, "J·I is not zero".into()));
    }
    let full = Subspace::full(base.dim(), base.field());
    let entries = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| match a.cmp(&b) {
                    std::cmp::Ordering::Equal => full.clone(),
                    std::cmp::Ordering::Less => i.clone(),
                    std::cmp::Ordering::Greater => j.clone(),
                })
                .collect()
        })
        .collect();
    block_matrix(base, entries, "JI=0")
}

/// `R` on the diagonal, `Rx` above and `Ry` below, over a commutative base.
pub fn checkerboard(base: &Algebra, x: &[Q], y: &[Q], n: usize) -> Result<BlockAlgebra, AlgError> {
    if !base.is_commutative() {
        return Err(AlgError::BadFamily("checkerboard ring needs a commutative base".into()));
    }
    let rx = ideal_generated(base, &[x.to_vec()]).space;
    let ry = ideal_generated(base, &[y.to_vec()]).space;
    let full = Subspace::full(base.dim(), base.field());
    let entries = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| match a.cmp(&b) {
                    std::cmp::Ordering::Equal => full.clone(),
                    std::cmp::Ordering::Less => rx.clone(),
                    std::cmp::Ordering::Greater => ry.clone(),
                })
                .collect()
        })
        .collect();
    block_matrix(base, entries, "checkerboard")
}

/// Skew group ring `S*G` with basis `s_i g` and `(s g)(t h) = s g(t) gh`.
#[derive(Clone, Debug)]
pub struct SkewGroupRing {
    pub algebra: Algebra,
    /// Automorphisms of `S` as matrices, index 0 the identity.
    pub group: Vec<Mat>,
    pub base_dim: usize,
}

impl SkewGroupRing {
    /// `(1/|G|) Σ_g g`.
    pub fn averaging_idempotent(&self) -> Elem {
        let a = &self.algebra;
        let f = a.field();
        let inv = f.inv(&f.from_i64(self.group.len() as i64)).expect("group order invertible");
        let mut e = a.zero();
        for g in 0..self.group.len() {
            let u = self.group_element(g);
            vecops::axpy(f, &mut e, &inv, &u);
        }
        e
    }

    /// The basis element `1·g`.
    pub fn group_element(&self, g: usize) -> Elem {
        // S's unit times g
        let a = &self.algebra;
        let mut v = a.zero();
        let unit_s = &a.unit()[..self.base_dim];
        for (i, c) in unit_s.iter().enumerate() {
            v[g * self.base_dim + i] = c.clone();
        }
        v
    }

    /// The copy of `s` in `S·1`.
    pub fn embed_base(&self, s: &[Q]) -> Elem {
        let mut v = self.algebra.zero();
        v[..self.base_dim].clone_from_slice(s);
        v
    }
}

fn is_automorphism(s: &Algebra, g: &Mat) -> bool {
    if g.rows != s.dim() || g.cols != s.dim() || !g.is_invertible() || g.mul_vec(s.unit()) != *s.unit() {
        return false;
    }
    (0..s.dim()).all(|i| (0..s.dim()).all(|j| g.mul_vec(&s.mul(&s.basis(i), &s.basis(j))) == s.mul(&g.col(i), &g.col(j))))
}

/// Closes the generators under composition; fails beyond `limit` elements.
fn generate_group(gens: &[Mat], n: usize, f: FieldSpec, limit: usize) -> Result<Vec<Mat>, AlgError> {
    let mut els = vec![Mat::identity(n, f)];
    let mut i = 0;
    while i < els.len() {
        for g in gens {
            let h = els[i].mul(g);
            if !els.contains(&h) {
                els.push(h);
                if els.len() > limit {
                    return Err(AlgError::BadFamily(format!("group generated by the action exceeds {} elements", limit)));
                }
            }
        }
        i += 1;
    }
    Ok(els)
}

pub fn skew_group_ring(s: &Algebra, generators: &[Mat]) -> Result<SkewGroupRing, AlgError> {
    let f = s.field();
    for (i, g) in generators.iter().enumerate() {
        if !is_automorphism(s, g) {
            return Err(AlgError::BadFamily(format!("generator {} is not an algebra automorphism", i + 1)));
        }
    }
    let group = generate_group(generators, s.dim(), f, 720)?;
    if f.characteristic() != 0 && group.len() as u64 % f.characteristic() == 0 {
        return Err(AlgError::BadFamily("group order is not invertible in the field".into()));
    }
    let m = group.len();
    let ds = s.dim();
    let idx = |g: &Mat| group.iter().position(|h| h == g).expect("group closed");
    let mut gmul = vec![vec![0; m]; m];
    for a in 0..m {
        for b in 0..m {
            gmul[a][b] = idx(&group[a].mul(&group[b]));
        }
    }
    let d = ds * m;
    let mut t = TableBuilder::new(d, f);
    for g in 0..m {
        for h in 0..m {
            let gh = gmul[g][h];
            for i in 0..ds {
                for j in 0..ds {
                    // s_i g · s_j h = s_i g(s_j) gh
                    let p = s.mul(&s.basis(i), &group[g].col(j));
                    for (k, c) in p.iter().enumerate() {
                        t.add(g * ds + i, h * ds + j, gh * ds + k, c);
                    }
                }
            }
        }
    }
    let mut unit = vecops::zero(d);
    unit[..ds].clone_from_slice(s.unit());
    let labels = (0..m).flat_map(|g| s.labels().iter().map(move |l| format!("{}#g{}", clean_label(l), g))).collect();
    let prov = Provenance::Family(format!("skew group ring of {} by a group of order {}", s.provenance, m));
    let alg = t.finish(unit, labels, prov)?;
    Ok(SkewGroupRing { algebra: alg, group, base_dim: ds })
}

/// Fixed points `S^G` as a subspace of `S`.
pub fn invariants(s: &Algebra, group: &[Mat]) -> Subspace {
    let f = s.field();
    let n = s.dim();
    let mut stacked = Mat::zeros(0, n, f);
    for g in group {
        stacked = stacked.vstack(&g.sub(&Mat::identity(n, f)));
    }
    crate::exactla::subspace::kernel(&stacked)
}

/// Trivial extension `R ⋉ L` on `R ⊕ L` with `L·L = 0`.
pub fn trivial_extension(r: &Algebra, l: &Bimodule) -> Result<Algebra, AlgError> {
    l.check_shape(r, r)?;
    let f = r.field();
    let (dr, dl) = (r.dim(), l.dim);
    let d = dr + dl;
    let mut t = TableBuilder::new(d, f);
    for i in 0..dr {
        for j in 0..dr {
            for (k, c) in r.basis_product(i, j) {
                t.add(i, j, *k, c);
            }
        }
        for j in 0..dl {
            for k in 0..dl {
                t.add(i, dr + j, dr + k, l.left[i].get(k, j));
                t.add(dr + j, i, dr + k, l.right[i].get(k, j));
            }
        }
    }
    let mut unit = vecops::zero(d);
    unit[..dr].clone_from_slice(r.unit());
    let mut labels: Vec<String> = r.labels().iter().map(|s| clean_label(s)).collect();
    labels.extend((0..dl).map(|i| format!("l{}", i + 1)));
    let prov = Provenance::Family(format!("trivial extension of {} by a bimodule of dim {}", r.provenance, dl));
    let mut alg = t.finish(unit, labels, prov)?;
    let widen = |v: &Elem| {
        let mut w = vecops::zero(d);
        w[..dr].clone_from_slice(v);
        w
    };
    if let Some(rad) = &r.hints.radical {
        let mut rv: Vec<Elem> = rad.iter().map(widen).collect();
        rv.extend((dr..d).map(|k| vecops::unit(d, k)));
        alg.hints.radical = Some(rv);
    }
    alg.hints.primitive_idempotents = r.hints.primitive_idempotents.as_ref().map(|ps| ps.iter().map(widen).collect());
    Ok(alg)
}

/// A family instance with all of its data resolved.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    Ground(FieldSpec),
    UpperTriangular { field: FieldSpec, n: usize },
    Matrix { base: Algebra, n: usize },
    Triangular { left: Algebra, right: Algebra, bimodule: Bimodule },
    Morita(MoritaData),
    Blocks { base: Algebra, entries: Vec<Vec<Subspace>> },
    Tiled { base: Algebra, j: Subspace, upper: Vec<Vec<Option<Subspace>>>, n: usize },
    JiZero { base: Algebra, i: Subspace, j: Subspace, n: usize },
    Checkerboard { base: Algebra, x: Elem, y: Elem, n: usize },
    SkewGroup { base: Algebra, generators: Vec<Mat> },
    TrivialExtension { base: Algebra, bimodule: Bimodule },
    NumberField(Poly),
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Ground(_) => "ground",
            FamilySpec::UpperTriangular { .. } => "upper_triangular",
            FamilySpec::Matrix { .. } => "matrix",
            FamilySpec::Triangular { .. } => "triangular",
            FamilySpec::Morita(_) => "morita",
            FamilySpec::Blocks { .. } => "block_matrix",
            FamilySpec::Tiled { .. } => "tiled",
            FamilySpec::JiZero { .. } => "ji_zero",
            FamilySpec::Checkerboard { .. } => "checkerboard",
            FamilySpec::SkewGroup { .. } => "skew_group",
            FamilySpec::TrivialExtension { .. } => "trivial_extension",
            FamilySpec::NumberField(_) => "number_field",
        }
    }

    pub fn build(&self) -> Result<Algebra, AlgError> {
        Ok(match self {
            FamilySpec::Ground(f) => ground(*f),
            FamilySpec::UpperTriangular { field, n } => upper_triangular_k(*field, *n),
            FamilySpec::Matrix { base, n } => matrix_algebra(base, *n),
            FamilySpec::Triangular { left, right, bimodule } => triangular_ring(left, right, bimodule)?.algebra,
            FamilySpec::Morita(d) => morita_context(d)?.algebra,
            FamilySpec::Blocks { base, entries } => block_matrix(base, entries.clone(), "custom")?.algebra,
            FamilySpec::Tiled { base, j, upper, n } => tiled(base, j, upper, *n)?.algebra,
            FamilySpec::JiZero { base, i, j, n } => ji_zero(base, i, j, *n)?.algebra,
            FamilySpec::Checkerboard { base, x, y, n } => checkerboard(base, x, y, *n)?.algebra,
            FamilySpec::SkewGroup { base, generators } => skew_group_ring(base, generators)?.algebra,
            FamilySpec::TrivialExtension { base, bimodule } => trivial_extension(base, bimodule)?,
            FamilySpec::NumberField(p) => number_field(p),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::iso::{find_isomorphism, IsoVerdict};
    use crate::algebra::testalg::*;

    fn strict_upper(t: &Algebra) -> Subspace {
        Subspace::span(3, QQ, &[t.basis(1)])
    }

    #[test]
    fn triangular_of_fields_is_t() {
        let k = ground(QQ);
        let m = Bimodule { dim: 1, left: vec![Mat::identity(1, QQ)], right: vec![Mat::identity(1, QQ)] };
        let s = triangular_ring(&k, &k, &m).unwrap();
        assert_eq!(s.algebra.dim(), 3);
        assert!(matches!(find_isomorphism(&s.algebra, &triangular(), 0, 64), IsoVerdict::Yes(_)));
    }

    #[test]
    fn ji_zero_over_t() {
        let t = triangular();
        let i = strict_upper(&t);
        let s = ji_zero(&t, &i, &i, 2).unwrap();
        assert_eq!(s.algebra.dim(), 8);
        // block multiplication oracle: (x at (1,2)) * (y at (2,1)) = x*y at (1,1)
        let x = s.embed(0, 1, &t.basis(1)).unwrap();
        let y = s.embed(1, 0, &t.basis(1)).unwrap();
        assert!(vecops::is_zero(&s.algebra.mul(&x, &y)));
        let e = s.embed(0, 0, &t.basis(0)).unwrap();
        assert_eq!(s.algebra.mul(&e, &x), x);
    }

    #[test]
    fn ji_zero_rejects_nonzero_product() {
        let t = triangular();
        let full = Subspace::full(3, QQ);
        assert!(matches!(ji_zero(&t, &full, &full, 2), Err(AlgError::ClosureViolation(..))));
    }

    #[test]
    fn tiled_checks_closure() {
        let t = triangular();
        let u = strict_upper(&t);
        let ok = tiled(&t, &u, &[vec![None, Some(u.clone())], vec![None, None]], 2).unwrap();
        assert_eq!(ok.algebra.dim(), 3 + 1 + 1 + 3);
        // I_12 = 0 with J = T violates nothing for n=2; n=3 with I_13 too small fails I_12 I_23 ⊆ I_13
        let z = Subspace::zero(3, QQ);
        let full = Subspace::full(3, QQ);
        let bad = tiled(&t, &z, &[vec![None, Some(full.clone()), Some(z.clone())], vec![None, None, Some(full.clone())], vec![None, None, None]], 3);
        assert!(matches!(bad, Err(AlgError::ClosureViolation(1, 3, _))));
    }

    #[test]
    fn skew_group_swap_is_matrix_ring() {
        let kk = crate::algebra::direct_product(&[&ground(QQ), &ground(QQ)]).unwrap();
        let swap = Mat::from_i64(2, 2, &[0, 1, 1, 0], QQ);
        let r = skew_group_ring(&kk, &[swap]).unwrap();
        assert_eq!(r.algebra.dim(), 4);
        let m2 = matrix_algebra(&ground(QQ), 2);
        assert!(matches!(find_isomorphism(&r.algebra, &m2, 0, 64), IsoVerdict::Yes(_)));
        let e = r.averaging_idempotent();
        assert!(r.algebra.is_idempotent(&e));
        assert_eq!(invariants(&kk, &r.group).dim(), 1);
    }

    #[test]
    fn trivial_extension_of_field_is_dual_numbers() {
        let k = ground(QQ);
        let l = Bimodule { dim: 1, left: vec![Mat::identity(1, QQ)], right: vec![Mat::identity(1, QQ)] };
        let te = trivial_extension(&k, &l).unwrap();
        assert!(matches!(find_isomorphism(&te, &dual_numbers(), 0, 64), IsoVerdict::Yes(_)));
    }

    #[test]
    fn morita_context_rejects_bad_pairing() {
        let k = ground(QQ);
        let one = Bimodule { dim: 1, left: vec![Mat::identity(1, QQ)], right: vec![Mat::identity(1, QQ)] };
        // phi = 1 and psi = 0 breaks (m n) m = m (n m)
        let d = MoritaData { r: k.clone(), s: k.clone(), m: one.clone(), n: one.clone(), phi: vec![vec![vec![Q::one()]]], psi: vec![vec![vec![Q::zero()]]] };
        assert!(matches!(morita_context(&d), Err(AlgError::BadFamily(_))));
        let good = MoritaData { psi: vec![vec![vec![Q::one()]]], ..d };
        let m2 = morita_context(&good).unwrap();
        assert!(matches!(find_isomorphism(&m2.algebra, &matrix_algebra(&k, 2), 0, 64), IsoVerdict::Yes(_)));
    }

    #[test]
    fn checkerboard_small() {
        // R = Q x Q, x = (1,0), y = (0,1): Rx + Ry = R
        let kk = crate::algebra::direct_product(&[&ground(QQ), &ground(QQ)]).unwrap();
        let s = checkerboard(&kk, &kk.basis(0), &kk.basis(1), 2).unwrap();
        assert_eq!(s.algebra.dim(), 6);
    }
}
