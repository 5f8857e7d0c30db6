//! Algebra isomorphism search with certificates.
//!
//! Invariants rule out isomorphism soundly. Otherwise primitive idempotents
//! are matched by a permutation respecting Peirce dimensions, and images of
//! Peirce-homogeneous generators are chosen one at a time: each image is a
//! random point of the affine space cut out by the linear conditions coming
//! from products with what is already mapped. The resulting map is built on
//! words and verified in full before `Yes` is returned.

use super::decompose::rng_for;
use super::frame::PeirceFrame;
use super::radical::radical_powers;
use super::{center, AlgError, Algebra, Elem};
use crate::exactla::{solve_linear, vecops, Mat, Q, Solution, Subspace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    /// Columns are the images of the basis of the first algebra.
    Yes(Mat),
    No(String),
    Unknown,
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }
}

/// Whether `m` is a unital, multiplicative, bijective map `a → b`.
pub fn verify_isomorphism(a: &Algebra, b: &Algebra, m: &Mat) -> bool {
    let n = a.dim();
    if b.dim() != n || m.rows != n || m.cols != n || !m.is_invertible() {
        return false;
    }
    if m.mul_vec(a.unit()) != *b.unit() {
        return false;
    }
    let imgs: Vec<Elem> = (0..n).map(|i| m.col(i)).collect();
    (0..n).all(|i| (0..n).all(|j| m.mul_vec(&a.mul(&a.basis(i), &a.basis(j))) == b.mul(&imgs[i], &imgs[j])))
}

/// Incrementally learned linear map from pairs `(x, φ(x))`.
#[derive(Clone)]
struct PartialMap {
    field: crate::exactla::FieldSpec,
    rows: Vec<(usize, Elem, Elem)>,
}

enum Insert {
    New,
    Known,
    Inconsistent,
}

impl PartialMap {
    fn new(field: crate::exactla::FieldSpec) -> PartialMap {
        PartialMap { field, rows: Vec::new() }
    }

    fn reduce(&self, x: &[Q], y: &[Q]) -> (Elem, Elem) {
        let f = self.field;
        let mut a = x.to_vec();
        let mut b = y.to_vec();
        for (p, ra, rb) in &self.rows {
            if !a[*p].is_zero() {
                let c = f.div(&a[*p], &ra[*p]);
                vecops::axpy(f, &mut a, &f.neg(&c), ra);
                vecops::axpy(f, &mut b, &f.neg(&c), rb);
            }
        }
        (a, b)
    }

    fn insert(&mut self, x: &[Q], y: &[Q]) -> Insert {
        let (a, b) = self.reduce(x, y);
        match a.iter().position(|c| !c.is_zero()) {
            None if vecops::is_zero(&b) => Insert::Known,
            None => Insert::Inconsistent,
            Some(p) => {
                self.rows.push((p, a, b));
                Insert::New
            }
        }
    }

    /// `φ(x)` when `x` lies in the known domain.
    fn eval(&self, x: &[Q], target_dim: usize) -> Option<Elem> {
        let (a, b) = self.reduce(x, &vecops::zero(target_dim));
        if vecops::is_zero(&a) {
            Some(vecops::scale(self.field, &Q::from_i64(-1), &b))
        } else {
            None
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Largest `k` with `x ∈ rad^k` (0 when outside the radical).
fn depth(powers: &[Subspace], x: &[Q]) -> usize {
    powers.iter().take_while(|p| p.contains(x)).count()
}

struct Side<'a> {
    alg: &'a Algebra,
    frame: PeirceFrame,
    powers: Option<Vec<Subspace>>,
}

impl<'a> Side<'a> {
    fn new(alg: &'a Algebra) -> Side<'a> {
        Side { alg, frame: PeirceFrame::build(alg), powers: radical_powers(alg).ok() }
    }

    fn piece_dim(&self, x: usize, y: usize) -> usize {
        self.frame.piece(x, y).len()
    }
}

/// Cheap invariants; a mismatch certifies non-isomorphism.
fn invariant_mismatch(a: &Side, b: &Side) -> Option<String> {
    let (x, y) = (a.alg, b.alg);
    if x.field() != y.field() {
        return Some(format!("fields differ: {} vs {}", x.field(), y.field()));
    }
    if x.dim() != y.dim() {
        return Some(format!("dimensions differ: {} vs {}", x.dim(), y.dim()));
    }
    if x.is_commutative() != y.is_commutative() {
        return Some("one algebra is commutative and the other is not".into());
    }
    let (cx, cy) = (center(x).dim(), center(y).dim());
    if cx != cy {
        return Some(format!("centers have dimensions {} vs {}", cx, cy));
    }
    if let (Some(px), Some(py)) = (&a.powers, &b.powers) {
        let dx: Vec<usize> = px.iter().map(|s| s.dim()).collect();
        let dy: Vec<usize> = py.iter().map(|s| s.dim()).collect();
        if dx != dy {
            return Some(format!("radical series dimensions {:?} vs {:?}", dx, dy));
        }
    }
    if a.frame.primitive && b.frame.primitive {
        if a.frame.len() != b.frame.len() {
            return Some(format!("{} vs {} primitive idempotents", a.frame.len(), b.frame.len()));
        }
        let mut sx: Vec<usize> = (0..a.frame.len()).map(|i| a.piece_dim(i, i)).collect();
        let mut sy: Vec<usize> = (0..b.frame.len()).map(|i| b.piece_dim(i, i)).collect();
        sx.sort();
        sy.sort();
        if sx != sy {
            return Some(format!("local corner dimensions {:?} vs {:?}", sx, sy));
        }
    }
    None
}

/// Permutations `σ` with `dim e_i A e_j = dim f_σi B f_σj`, up to `cap`.
fn matching_permutations(a: &Side, b: &Side, cap: usize) -> Vec<Vec<usize>> {
    let m = a.frame.len();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; m];
    fn rec(a: &Side, b: &Side, m: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        let i = cur.len();
        if i == m {
            out.push(cur.clone());
            return;
        }
        for s in 0..m {
            if used[s] {
                continue;
            }
            let ok = (0..i).all(|j| a.piece_dim(i, j) == b.piece_dim(s, cur[j]) && a.piece_dim(j, i) == b.piece_dim(cur[j], s)) && a.piece_dim(i, i) == b.piece_dim(s, s);
            if ok {
                used[s] = true;
                cur.push(s);
                rec(a, b, m, cur, used, out, cap);
                cur.pop();
                used[s] = false;
            }
        }
    }
    rec(a, b, m, &mut cur, &mut used, &mut out, cap);
    out
}

/// Closes the partial map under multiplication by the mapped generators.
fn close(a: &Algebra, b: &Algebra, map: &mut PartialMap, gens: &[(Elem, Elem)], start: usize) -> bool {
    let mut i = start;
    while i < map.rows.len() {
        let (_, x, y) = map.rows[i].clone();
        for (ga, gb) in gens {
            for (p, q) in [(a.mul(&x, ga), b.mul(&y, gb)), (a.mul(ga, &x), b.mul(gb, &y))] {
                if let Insert::Inconsistent = map.insert(&p, &q) {
                    return false;
                }
            }
        }
        i += 1;
    }
    true
}

fn attempt(a: &Side, b: &Side, perm: &[usize], rng: &mut ChaCha8Rng) -> Option<Mat> {
    let (x, y) = (a.alg, b.alg);
    let n = x.dim();
    let f = x.field();
    let mut map = PartialMap::new(f);
    let mut gens: Vec<(Elem, Elem)> = Vec::new();
    for (i, e) in a.frame.idempotents.iter().enumerate() {
        gens.push((e.clone(), b.frame.idempotents[perm[i]].clone()));
    }
    for (e, g) in gens.clone() {
        if let Insert::Inconsistent = map.insert(&e, &g) {
            return None;
        }
    }
    if !close(x, y, &mut map, &gens, 0) {
        return None;
    }
    for (p, q, g) in &a.frame.generators {
        if map.eval(g, n).is_some() {
            continue;
        }
        // allowed images: the matching piece of B, at the same radical depth
        let mut allowed = Subspace::span(n, f, b.frame.piece(perm[*p], perm[*q]));
        if let (Some(pa), Some(pb)) = (&a.powers, &b.powers) {
            let d = depth(pa, g);
            if d > 0 {
                allowed = allowed.intersect(&pb[d - 1]).ok()?;
            }
        }
        let basis = &allowed.basis;
        if basis.is_empty() {
            return None;
        }
        // linear conditions from products with the known domain
        let k = basis.len();
        let mut lhs_rows: Vec<Vec<Q>> = Vec::new();
        let mut rhs: Vec<Q> = Vec::new();
        for (_, u, v) in map.rows.clone() {
            if let Some(img) = map.eval(&x.mul(g, &u), n) {
                let cols: Vec<Elem> = basis.iter().map(|c| y.mul(c, &v)).collect();
                for t in 0..n {
                    lhs_rows.push(cols.iter().map(|c| c[t].clone()).collect());
                    rhs.push(img[t].clone());
                }
            }
            if let Some(img) = map.eval(&x.mul(&u, g), n) {
                let cols: Vec<Elem> = basis.iter().map(|c| y.mul(&v, c)).collect();
                for t in 0..n {
                    lhs_rows.push(cols.iter().map(|c| c[t].clone()).collect());
                    rhs.push(img[t].clone());
                }
            }
        }
        let coeffs: Vec<Q> = if lhs_rows.is_empty() {
            (0..k).map(|_| Q::from_i64(rng.gen_range(-3..=3))).collect()
        } else {
            let r = lhs_rows.len();
            let lhs = Mat::from_rows(lhs_rows, k, f);
            let rhs = Mat::from_rows(rhs.into_iter().map(|c| vec![c]).collect(), 1, f);
            debug_assert_eq!(lhs.rows, r);
            match solve_linear(&lhs, &rhs).ok()? {
                Solution::Solved { particular, kernel } => {
                    let mut c = particular.col(0);
                    for kv in &kernel {
                        let s = Q::from_i64(rng.gen_range(-3..=3));
                        vecops::axpy(f, &mut c, &s, kv);
                    }
                    c
                }
                Solution::NoSolution { .. } => return None,
            }
        };
        let mut img = vecops::zero(n);
        for (c, v) in coeffs.iter().zip(basis) {
            vecops::axpy(f, &mut img, c, v);
        }
        if vecops::is_zero(&img) {
            return None;
        }
        if let Insert::Inconsistent = map.insert(g, &img) {
            return None;
        }
        gens.push((g.clone(), img));
        // products of everything known with the new generator and vice versa
        if !close(x, y, &mut map, &gens, 0) {
            return None;
        }
    }
    if map.dim() != n {
        return None;
    }
    let cols: Vec<Elem> = (0..n).map(|i| map.eval(&x.basis(i), n).expect("domain is full")).collect();
    let m = Mat::from_cols(&cols, n, f);
    if verify_isomorphism(x, y, &m) {
        Some(m)
    } else {
        None
    }
}

/// Searches for an algebra isomorphism `a → b`.
///
/// `Yes` carries a verified witness, `No` a certified obstruction, and
/// `Unknown` means `retries` rounds over all idempotent matchings failed.
pub fn find_isomorphism(a: &Algebra, b: &Algebra, seed: u64, retries: usize) -> IsoVerdict {
    if a.dim() == 0 || b.dim() == 0 {
        return if a.dim() == b.dim() { IsoVerdict::Yes(Mat::zeros(0, 0, a.field())) } else { IsoVerdict::No("one algebra is zero".into()) };
    }
    let sa = Side::new(a);
    let sb = Side::new(b);
    if let Some(r) = invariant_mismatch(&sa, &sb) {
        return IsoVerdict::No(r);
    }
    if sa.frame.len() != sb.frame.len() {
        // frames were not both certified primitive; nothing to match against
        return IsoVerdict::Unknown;
    }
    let perms = matching_permutations(&sa, &sb, 5040);
    if perms.is_empty() {
        return if sa.frame.primitive && sb.frame.primitive {
            IsoVerdict::No("no matching of primitive idempotents preserves Peirce dimensions".into())
        } else {
            IsoVerdict::Unknown
        };
    }
    let mut rng = rng_for(seed, 17);
    for _ in 0..retries.max(1) {
        for p in &perms {
            if let Some(m) = attempt(&sa, &sb, p, &mut rng) {
                return IsoVerdict::Yes(m);
            }
        }
    }
    IsoVerdict::Unknown
}

/// Boolean form of [`find_isomorphism`]; an undecided search is an error.
pub fn isomorphic(a: &Algebra, b: &Algebra, seed: u64, retries: usize) -> Result<bool, AlgError> {
    match find_isomorphism(a, b, seed, retries) {
        IsoVerdict::Yes(_) => Ok(true),
        IsoVerdict::No(_) => Ok(false),
        IsoVerdict::Unknown => Err(AlgError::RandomizedSearchExhausted(retries)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::families;
    use crate::algebra::testalg::*;
    use crate::algebra::{direct_product, opposite};

    #[test]
    fn self_isomorphisms() {
        for a in [dual_numbers(), triangular(), a5(), b7()] {
            match find_isomorphism(&a, &a, 0, 16) {
                IsoVerdict::Yes(m) => assert!(verify_isomorphism(&a, &a, &m)),
                v => panic!("expected Yes, got {:?}", v),
            }
        }
    }

    #[test]
    fn opposite_of_triangular_is_isomorphic() {
        // T^op ≅ T via transpose-and-swap
        let t = triangular();
        assert!(find_isomorphism(&t, &opposite(&t), 0, 16).is_yes());
    }

    #[test]
    fn obstructions() {
        let k = families::ground(QQ);
        let kk = direct_product(&[&k, &k]).unwrap();
        assert!(matches!(find_isomorphism(&kk, &dual_numbers(), 0, 16), IsoVerdict::No(_)));
        assert!(matches!(find_isomorphism(&a5(), &b7(), 0, 16), IsoVerdict::No(_)));
        let m2 = families::matrix_algebra(&k, 2);
        let kkkk = direct_product(&[&k, &k, &k, &k]).unwrap();
        assert!(matches!(find_isomorphism(&m2, &kkkk, 0, 16), IsoVerdict::No(_)));
    }

    #[test]
    fn relabelled_basis() {
        // A5 with its basis permuted and rescaled is found isomorphic
        let a = a5();
        let n = a.dim();
        let perm = [4usize, 2, 0, 3, 1];
        let scale = [1i64, 2, -1, 3, 1];
        let f = QQ;
        let mut p = Mat::zeros(n, n, f);
        for i in 0..n {
            p.set(perm[i], i, Q::from_i64(scale[i]));
        }
        let pinv = p.inverse().unwrap();
        let table: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| p.mul_vec(&a.mul(&pinv.col(i), &pinv.col(j)))).collect())
            .collect();
        let b = Algebra::from_table(f, table, p.mul_vec(a.unit()), None).unwrap();
        assert!(find_isomorphism(&a, &b, 3, 16).is_yes());
    }
}
