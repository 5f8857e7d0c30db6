//! Idempotent splitting: central idempotents of semisimple algebras, complete
//! sets of primitive idempotents, lifting modulo the radical, and the
//! division-ring test.

use super::construct::{center, quotient, quotient_lift};
use super::radical::radical;
use super::{AlgError, Algebra, Elem};
use crate::exactla::factor::irreducible_factors;
use crate::exactla::{solve_linear, vecops, Mat, Poly, Q, Solution, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Three-valued answer. `Yes` and `No` both carry certificates upstream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tri::Yes => "Yes",
            Tri::No => "No",
            Tri::Unknown => "Unknown",
        };
        write!(f, "{}", s)
    }
}

pub(crate) fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Minimal polynomial of `x` inside the unital subalgebra with identity `unit`
/// (so `x^0 = unit`).
pub fn min_poly(a: &Algebra, unit: &[Q], x: &[Q]) -> Poly {
    let f = a.field();
    let mut powers: Vec<Elem> = vec![unit.to_vec()];
    loop {
        let next = a.mul(powers.last().unwrap(), x);
        let m = Mat::from_cols(&powers, a.dim(), f);
        let b = Mat::from_cols(std::slice::from_ref(&next), a.dim(), f);
        match solve_linear(&m, &b).expect("shapes agree") {
            Solution::Solved { particular, .. } => {
                let mut coeffs: Vec<Q> = particular.col(0).iter().map(|c| f.neg(c)).collect();
                coeffs.push(Q::one());
                return Poly::new(coeffs);
            }
            Solution::NoSolution { .. } => powers.push(next),
        }
    }
}

/// `p(x)` with `x^0 = unit`.
pub fn eval_poly(a: &Algebra, unit: &[Q], p: &Poly, x: &[Q]) -> Elem {
    let f = a.field();
    let mut acc = a.zero();
    for c in p.coeffs.iter().rev() {
        acc = a.mul(&acc, x);
        vecops::axpy(f, &mut acc, c, unit);
    }
    acc
}

/// Orthogonal idempotents from the primary decomposition of `m`, the minimal
/// polynomial of `x` over `unit`. One idempotent per distinct irreducible factor.
fn spectral_idempotents(a: &Algebra, unit: &[Q], x: &[Q], m: &Poly, factors: &[Poly]) -> Vec<Elem> {
    let mut out = Vec::new();
    for p in factors {
        // largest power of p dividing m
        let mut pk = p.clone();
        loop {
            let next = pk.mul(p);
            if !m.rem(&next).is_zero() {
                break;
            }
            pk = next;
        }
        let q = m.divrem(&pk).0;
        let (g, s, _) = q.ext_gcd(&pk);
        debug_assert_eq!(g, Poly::one());
        let poly = s.mul(&q).rem(m);
        out.push(eval_poly(a, unit, &poly, x));
    }
    out
}

fn random_in(rng: &mut ChaCha8Rng, basis: &[Elem], n: usize, a: &Algebra) -> Elem {
    let mut v = vecops::zero(n);
    for b in basis {
        let c = Q::from_i64(rng.gen_range(-3..=3));
        vecops::axpy(a.field(), &mut v, &c, b);
    }
    v
}

/// Basis of `e·A·e` inside `A`.
fn corner_space(a: &Algebra, e: &[Q]) -> Subspace {
    let vecs: Vec<Elem> = (0..a.dim()).map(|i| a.mul(&a.mul(e, &a.basis(i)), e)).collect();
    Subspace::span(a.dim(), a.field(), &vecs)
}

/// Primitive idempotents of a commutative semisimple algebra given as a
/// subspace `z` of `a` with identity `unit`. Each returned idempotent `E`
/// certifiably cuts out a field: some element of `E·z` has an irreducible
/// minimal polynomial of degree `dim E·z`.
fn split_commutative(a: &Algebra, z: &Subspace, unit: &[Q], rng: &mut ChaCha8Rng, budget: usize) -> Result<Vec<Elem>, AlgError> {
    let mut done = Vec::new();
    let mut work = vec![unit.to_vec()];
    let mut samples = 0usize;
    while let Some(e) = work.pop() {
        let ez = Subspace::span(a.dim(), a.field(), &z.basis.iter().map(|b| a.mul(&e, b)).collect::<Vec<_>>());
        let d = ez.dim();
        if d == 1 {
            done.push(e);
            continue;
        }
        let mut tried = 0usize;
        loop {
            let x = if tried < ez.dim() {
                ez.basis[tried].clone()
            } else {
                samples += 1;
                if samples > budget {
                    return Err(AlgError::RandomizedSearchExhausted(budget));
                }
                random_in(rng, &ez.basis, a.dim(), a)
            };
            tried += 1;
            let m = min_poly(a, &e, &x);
            let factors = irreducible_factors(&m);
            if factors.len() >= 2 {
                work.extend(spectral_idempotents(a, &e, &x, &m, &factors));
                break;
            }
            if m.degree() == Some(d) {
                done.push(e);
                break;
            }
        }
    }
    Ok(done)
}

/// Central primitive idempotents of a semisimple algebra (one per simple
/// component).
pub fn semisimple_blocks(s: &Algebra, seed: u64, budget: usize) -> Result<Vec<Elem>, AlgError> {
    if s.dim() == 0 {
        return Ok(Vec::new());
    }
    s.require_char_zero()?;
    let z = center(s);
    let mut rng = rng_for(seed, 1);
    let mut blocks = split_commutative(s, &z, s.unit(), &mut rng, budget)?;
    blocks.sort();
    Ok(blocks)
}

/// Number of simple components of `A/rad A`.
pub fn block_count(a: &Algebra, seed: u64, budget: usize) -> Result<usize, AlgError> {
    let r = radical(a)?;
    if !a.field().is_rationals() {
        // only reachable with a verified radical and primitive idempotents from construction data
        let ps = a.hints.primitive_idempotents.clone().ok_or(AlgError::UnsupportedField(a.field()))?;
        return Ok(idempotent_classes(a, &ps)?.len());
    }
    let s = quotient(a, &r);
    Ok(semisimple_blocks(&s, seed, budget)?.len())
}

/// Groups primitive idempotents by isomorphism of the projectives `A e`:
/// `e ~ f` iff `eAf·fAe` is not inside the radical.
pub fn idempotent_classes(a: &Algebra, idems: &[Elem]) -> Result<Vec<Vec<usize>>, AlgError> {
    let rad = radical(a)?;
    let n = a.dim();
    let f = a.field();
    let piece = |x: &Elem, y: &Elem| -> Subspace {
        let v: Vec<Elem> = (0..n).map(|i| a.mul(&a.mul(x, &a.basis(i)), y)).collect();
        Subspace::span(n, f, &v)
    };
    let mut class_of: Vec<Option<usize>> = vec![None; idems.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..idems.len() {
        if class_of[i].is_some() {
            continue;
        }
        let c = classes.len();
        class_of[i] = Some(c);
        let mut members = vec![i];
        for j in i + 1..idems.len() {
            if class_of[j].is_some() {
                continue;
            }
            let p = a.product_space(&piece(&idems[i], &idems[j]), &piece(&idems[j], &idems[i]));
            if !rad.contains_space(&p) {
                class_of[j] = Some(c);
                members.push(j);
            }
        }
        classes.push(members);
    }
    Ok(classes)
}

/// Looks for a nonzero non-invertible element of the corner `e·A·e` of a
/// semisimple algebra. Cheap deterministic candidates first, then random ones
/// whose minimal polynomial splits.
fn find_zero_divisor(a: &Algebra, e: &[Q], c: &Subspace, rng: &mut ChaCha8Rng, budget: usize) -> Option<Elem> {
    let f = a.field();
    let d = c.dim();
    let singular = |x: &Elem| -> bool {
        let imgs: Vec<Elem> = c.basis.iter().map(|b| a.mul(x, b)).collect();
        Subspace::span(a.dim(), f, &imgs).dim() < d
    };
    let mut cands: Vec<Elem> = c.basis.clone();
    for i in 0..d {
        for j in i + 1..d {
            cands.push(vecops::add(f, &c.basis[i], &c.basis[j]));
            cands.push(vecops::sub(f, &c.basis[i], &c.basis[j]));
        }
    }
    for x in &cands {
        if !vecops::is_zero(x) && singular(x) {
            return Some(x.clone());
        }
    }
    for _ in 0..budget {
        let x = random_in(rng, &c.basis, a.dim(), a);
        if vecops::is_zero(&x) {
            continue;
        }
        if singular(&x) {
            return Some(x);
        }
        let m = min_poly(a, e, &x);
        let fs = irreducible_factors(&m);
        if fs.len() >= 2 || fs.first().map(|p| p.degree()) != Some(m.degree()) {
            let y = eval_poly(a, e, &fs[0], &x);
            debug_assert!(singular(&y));
            return Some(y);
        }
    }
    None
}

/// Right identity of the left ideal `C·y` inside the corner `C` with basis `c`:
/// an idempotent generating the same left ideal.
fn idempotent_of_left_ideal(a: &Algebra, c: &Subspace, y: &[Q]) -> Option<Elem> {
    let f = a.field();
    let j = Subspace::span(a.dim(), f, &c.basis.iter().map(|b| a.mul(b, y)).collect::<Vec<_>>());
    let r = j.dim();
    let n = a.dim();
    // unknown λ: Σ_k λ_k (j_s j_k) = j_s for every s
    let mut lhs = Mat::zeros(n * r, r, f);
    let mut rhs = Mat::zeros(n * r, 1, f);
    for s in 0..r {
        for k in 0..r {
            let p = a.mul(&j.basis[s], &j.basis[k]);
            for t in 0..n {
                lhs.set(s * n + t, k, p[t].clone());
            }
        }
        for t in 0..n {
            rhs.set(s * n + t, 0, j.basis[s][t].clone());
        }
    }
    match solve_linear(&lhs, &rhs).ok()? {
        Solution::Solved { particular, .. } => {
            let mut e = vecops::zero(n);
            for k in 0..r {
                vecops::axpy(f, &mut e, particular.get(k, 0), &j.basis[k]);
            }
            Some(e)
        }
        Solution::NoSolution { .. } => None,
    }
}

/// Complete orthogonal primitive idempotents of a semisimple algebra.
pub fn semisimple_primitives(s: &Algebra, seed: u64, budget: usize) -> Result<Vec<Elem>, AlgError> {
    let blocks = semisimple_blocks(s, seed, budget)?;
    let mut rng = rng_for(seed, 2);
    let f = s.field();
    let mut out = Vec::new();
    for b in blocks {
        let mut work = vec![b];
        while let Some(e) = work.pop() {
            let c = corner_space(s, &e);
            if c.dim() == 1 || is_commutative_space(s, &c) {
                // a commutative corner of a simple algebra is a field
                out.push(e);
                continue;
            }
            let y = find_zero_divisor(s, &e, &c, &mut rng, budget).ok_or(AlgError::RandomizedSearchExhausted(budget))?;
            let g = idempotent_of_left_ideal(s, &c, &y).ok_or_else(|| AlgError::Malformed("left ideal without idempotent".into()))?;
            debug_assert!(s.is_idempotent(&g));
            let h = vecops::sub(f, &e, &g);
            work.push(g);
            work.push(h);
        }
    }
    Ok(out)
}

fn is_commutative_space(a: &Algebra, c: &Subspace) -> bool {
    c.basis.iter().enumerate().all(|(i, x)| c.basis[i + 1..].iter().all(|y| a.mul(x, y) == a.mul(y, x)))
}

/// Newton iteration `x ← 3x² − 2x³` inside the corner with identity `unit`.
fn newton_lift(a: &Algebra, x: &[Q]) -> Elem {
    let f = a.field();
    let mut x = x.to_vec();
    for _ in 0..64 {
        let x2 = a.mul(&x, &x);
        if x2 == x {
            return x;
        }
        let x3 = a.mul(&x2, &x);
        x = vecops::sub(f, &vecops::scale(f, &Q::from_i64(3), &x2), &vecops::scale(f, &Q::from_i64(2), &x3));
    }
    panic!("idempotent lifting did not converge");
}

/// Lifts a complete set of orthogonal idempotents of `A/rad` (given in
/// quotient coordinates) to a complete orthogonal set in `A`.
pub fn lift_idempotents(a: &Algebra, rad: &Subspace, ebar: &[Elem]) -> Vec<Elem> {
    let f = a.field();
    let mut lifted: Vec<Elem> = Vec::new();
    let mut used = a.zero();
    for (i, eb) in ebar.iter().enumerate() {
        if i + 1 == ebar.len() {
            lifted.push(vecops::sub(f, a.unit(), &used));
            break;
        }
        let rest = vecops::sub(f, a.unit(), &used);
        let x = quotient_lift(a, rad, eb);
        let x = a.mul(&a.mul(&rest, &x), &rest);
        let e = newton_lift(a, &x);
        used = vecops::add(f, &used, &e);
        lifted.push(e);
    }
    lifted
}

fn verify_complete_orthogonal(a: &Algebra, es: &[Elem]) -> bool {
    let f = a.field();
    let mut sum = a.zero();
    for (i, x) in es.iter().enumerate() {
        sum = vecops::add(f, &sum, x);
        for (j, y) in es.iter().enumerate() {
            let p = a.mul(x, y);
            let ok = if i == j { p == *x && !vecops::is_zero(x) } else { vecops::is_zero(&p) };
            if !ok {
                return false;
            }
        }
    }
    sum == *a.unit()
}

/// Complete set of orthogonal primitive idempotents summing to one.
///
/// Deterministic for a given `(seed, retries)`; results are cached per pair.
pub fn primitive_decomposition(a: &Algebra, seed: u64, retries: usize) -> Result<Vec<Elem>, AlgError> {
    if let Some(r) = a.decomposition_cache().lock().unwrap().get(&(seed, retries)) {
        return r.clone();
    }
    let r = compute_decomposition(a, seed, retries);
    a.decomposition_cache().lock().unwrap().insert((seed, retries), r.clone());
    r
}

fn compute_decomposition(a: &Algebra, seed: u64, retries: usize) -> Result<Vec<Elem>, AlgError> {
    if a.dim() == 0 {
        return Ok(Vec::new());
    }
    let rad = radical(a)?;
    if let Some(h) = &a.hints.primitive_idempotents {
        // Accept when orthogonal, complete and each corner is one-dimensional modulo the radical.
        if verify_complete_orthogonal(a, h) && h.iter().all(|e| local_dim_mod_radical(a, &rad, e) == 1) {
            return Ok(h.clone());
        }
    }
    a.require_char_zero()?;
    let s = quotient(a, &rad);
    let ebar = semisimple_primitives(&s, seed, retries)?;
    let lifted = lift_idempotents(a, &rad, &ebar);
    debug_assert!(verify_complete_orthogonal(a, &lifted));
    Ok(lifted)
}

/// `dim e(A/rad)e`.
fn local_dim_mod_radical(a: &Algebra, rad: &Subspace, e: &[Q]) -> usize {
    let c = corner_space(a, e);
    let sum = c.sum(&rad.intersect(&c).unwrap()).unwrap();
    sum.dim() - rad.intersect(&c).unwrap().dim()
}

/// Post-hoc checks on a decomposition: orthogonality and completeness.
pub fn verify_decomposition(a: &Algebra, es: &[Elem]) -> bool {
    verify_complete_orthogonal(a, es)
}

/// Whether the algebra is a division ring: semisimple with a single simple
/// component whose simple module has the whole algebra as endomorphisms.
/// `Yes` is certified for fields (an element with irreducible minimal
/// polynomial of full degree); `No` by a radical element, a central splitting
/// or a zero divisor; noncommutative candidates without a zero divisor in the
/// budget are `Unknown`.
pub fn division_ring_test(a: &Algebra, seed: u64, budget: usize) -> Result<Tri, AlgError> {
    if a.dim() == 0 {
        return Ok(Tri::No);
    }
    if !radical(a)?.is_zero() {
        return Ok(Tri::No);
    }
    let z = center(a);
    let mut rng = rng_for(seed, 3);
    let blocks = split_commutative(a, &z, a.unit(), &mut rng, budget)?;
    if blocks.len() > 1 {
        return Ok(Tri::No);
    }
    if z.dim() == a.dim() {
        return Ok(Tri::Yes);
    }
    let full = Subspace::full(a.dim(), a.field());
    match find_zero_divisor(a, a.unit(), &full, &mut rng, budget) {
        Some(_) => Ok(Tri::No),
        None => Ok(Tri::Unknown),
    }
}

/// Whether `e` is a primitive idempotent (its corner is local).
pub fn is_primitive_idempotent(a: &Algebra, e: &[Q], seed: u64, budget: usize) -> Result<Tri, AlgError> {
    if vecops::is_zero(e) || !a.is_idempotent(e) {
        return Ok(Tri::No);
    }
    let c = super::construct::corner(a, e)?;
    let r = radical(&c.algebra)?;
    let top = quotient(&c.algebra, &r);
    division_ring_test(&top, seed, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::families;
    use crate::algebra::testalg::*;

    #[test]
    fn decompositions() {
        let k = families::ground(QQ);
        assert_eq!(primitive_decomposition(&k, 0, 64).unwrap(), vec![vec![Q::one()]]);
        let t = triangular();
        let d = primitive_decomposition(&t, 0, 64).unwrap();
        assert_eq!(d.len(), 2);
        assert!(verify_decomposition(&t, &d));
        let a = a5();
        let d = primitive_decomposition(&a, 0, 64).unwrap();
        assert_eq!(d.len(), 2);
        for e in &d {
            assert_eq!(is_primitive_idempotent(&a, e, 0, 64).unwrap(), Tri::Yes);
        }
    }

    #[test]
    fn matrix_algebra_splits() {
        let m3 = families::matrix_algebra(&families::ground(QQ), 3);
        let mut m3 = m3;
        m3.hints = Default::default();
        let d = primitive_decomposition(&m3, 7, 64).unwrap();
        assert_eq!(d.len(), 3);
        assert!(verify_decomposition(&m3, &d));
        assert_eq!(block_count(&m3, 0, 64).unwrap(), 1);
    }

    #[test]
    fn division_rings() {
        assert_eq!(division_ring_test(&families::ground(QQ), 0, 64).unwrap(), Tri::Yes);
        let qi = families::number_field(&Poly::from_i64(&[1, 0, 1]));
        assert_eq!(division_ring_test(&qi, 0, 64).unwrap(), Tri::Yes);
        let m2 = families::matrix_algebra(&families::ground(QQ), 2);
        assert_eq!(division_ring_test(&m2, 0, 64).unwrap(), Tri::No);
        assert_eq!(division_ring_test(&dual_numbers(), 0, 64).unwrap(), Tri::No);
        let kk = crate::algebra::direct_product(&[&families::ground(QQ), &qi]).unwrap();
        assert_eq!(division_ring_test(&kk, 0, 64).unwrap(), Tri::No);
        assert_eq!(block_count(&kk, 0, 64).unwrap(), 2);
    }

    #[test]
    fn number_field_product_blocks() {
        // Q[x]/(x^2-2) x Q[x]/(x^2+1) x Q presented by one generator: x^5 - x^4 ... built as a quotient of Q[x]
        let p = Poly::from_i64(&[-2, 0, 1]).mul(&Poly::from_i64(&[1, 0, 1])).mul(&Poly::from_i64(&[-3, 1]));
        let alg = families::number_field(&p);
        assert_eq!(block_count(&alg, 0, 64).unwrap(), 3);
        let d = primitive_decomposition(&alg, 0, 64).unwrap();
        assert_eq!(d.len(), 3);
    }
}
