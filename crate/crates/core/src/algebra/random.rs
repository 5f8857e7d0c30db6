//! Seeded random algebras and idempotents for property suites.
//!
//! Most instances are bound quiver algebras with monomial relations that
//! kill every path of some fixed length, so they are finite-dimensional by
//! construction. Opposites, products with the ground field and small matrix
//! algebras are mixed in so that non-basic algebras also appear.

use super::decompose::primitive_decomposition;
use super::families::{ground, matrix_algebra, upper_triangular_k};
use super::{direct_product, opposite, path_algebra, radical, Algebra, Elem, QuiverPresentation};
use crate::exactla::{FieldSpec, Q};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RandomAlgebra {
    pub algebra: Algebra,
    /// How the instance was built, for failure messages.
    pub description: String,
}

/// All paths of length `len` in the quiver.
fn paths(q: &QuiverPresentation, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..q.arrows.len()).map(|a| vec![a]).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for p in &out {
            let end = q.arrows[*p.last().expect("nonempty")].2;
            for (b, arrow) in q.arrows.iter().enumerate() {
                if arrow.1 == end {
                    let mut p2 = p.clone();
                    p2.push(b);
                    next.push(p2);
                }
            }
        }
        out = next;
    }
    out
}

fn random_quiver(rng: &mut ChaCha8Rng, field: FieldSpec, max_dim: usize) -> Option<RandomAlgebra> {
    let nv = rng.gen_range(1..=3);
    let na = rng.gen_range(0..=4);
    let ends: Vec<(usize, usize)> = (0..na).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..nv))).collect();
    bound_quiver(rng, field, max_dim, nv, &ends)
}

/// Arrows both ways between two vertices, sometimes with a loop or a
/// third vertex attached. Oriented cycles are where idempotent ideals stop
/// being projective, and the generic quivers above rarely produce them.
fn random_two_cycle(rng: &mut ChaCha8Rng, field: FieldSpec, max_dim: usize) -> Option<RandomAlgebra> {
    let mut nv = 2;
    let mut ends = vec![(0, 1), (1, 0)];
    match rng.gen_range(0..3) {
        0 => ends.push((rng.gen_range(0..2), rng.gen_range(0..2))),
        1 => {
            nv = 3;
            ends.push(if rng.gen_bool(0.5) { (1, 2) } else { (2, 0) });
        }
        _ => {}
    }
    bound_quiver(rng, field, max_dim, nv, &ends)
}

fn bound_quiver(rng: &mut ChaCha8Rng, field: FieldSpec, max_dim: usize, nv: usize, ends: &[(usize, usize)]) -> Option<RandomAlgebra> {
    let vertices: Vec<String> = (1..=nv).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, usize, usize)> = ends.iter().enumerate().map(|(i, &(s, t))| (format!("a{}", i + 1), s, t)).collect();
    let mut q = QuiverPresentation { vertices, arrows, relations: Vec::new(), nilpotency_bound: 8 };
    let cut = rng.gen_range(2..=4);
    let mut rels = paths(&q, cut);
    if rels.len() > 64 {
        return None;
    }
    for p in paths(&q, 2) {
        if cut > 2 && rng.gen_bool(0.4) {
            rels.push(p);
        }
    }
    q.relations = rels.into_iter().map(|p| vec![(Q::one(), p)]).collect();
    let a = path_algebra(&q, field).ok()?;
    if a.dim() > max_dim {
        return None;
    }
    let desc = format!("quiver {} vertices, arrows {:?}, paths of length {} killed", nv, q.arrows.iter().map(|a| (a.1 + 1, a.2 + 1)).collect::<Vec<_>>(), cut);
    Some(RandomAlgebra { algebra: a, description: desc })
}

/// A random algebra of dimension at most `max_dim` (at least 4).
pub fn random_algebra(rng: &mut ChaCha8Rng, field: FieldSpec, max_dim: usize) -> RandomAlgebra {
    loop {
        let roll = rng.gen_range(0..10);
        let base = match roll {
            0 => {
                let n = rng.gen_range(2..=3);
                Some(RandomAlgebra { algebra: upper_triangular_k(field, n), description: format!("upper triangular {}x{}", n, n) })
            }
            1 => Some(RandomAlgebra { algebra: matrix_algebra(&ground(field), 2), description: "2x2 matrices".into() }),
            2..=4 => random_two_cycle(rng, field, max_dim),
            _ => random_quiver(rng, field, max_dim),
        };
        let Some(mut r) = base else { continue };
        if rng.gen_bool(0.3) {
            r.algebra = opposite(&r.algebra);
            r.description = format!("opposite of {}", r.description);
        }
        if r.algebra.dim() < max_dim && rng.gen_bool(0.2) {
            if let Ok(p) = direct_product(&[&r.algebra, &ground(field)]) {
                r.algebra = p;
                r.description = format!("{} times the ground field", r.description);
            }
        }
        if r.algebra.dim() <= max_dim {
            return r;
        }
    }
}

/// A random idempotent: a sum of primitive idempotents conjugated by a
/// unit `1 + r` with `r` in the radical. `None` if splitting the unit fails.
pub fn random_idempotent(a: &Algebra, rng: &mut ChaCha8Rng, seed: u64, retries: usize) -> Option<Elem> {
    let prims = primitive_decomposition(a, seed, retries).ok()?;
    let mut e = a.zero();
    let mut chosen: Vec<&Elem> = prims.iter().filter(|_| rng.gen_bool(0.5)).collect();
    if chosen.is_empty() && !prims.is_empty() && rng.gen_bool(0.8) {
        chosen.push(prims.choose(rng).expect("nonempty"));
    }
    for p in chosen {
        e = a.add(&e, p);
    }
    let rad = radical(a).ok()?;
    let f = a.field();
    let mut r = a.zero();
    for v in &rad.basis {
        let c = f.from_i64(rng.gen_range(-2..=2));
        r = a.add(&r, &a.scale(&c, v));
    }
    // (1 + r)^{-1} = Σ (−r)^k since r is nilpotent
    let u = a.add(a.unit(), &r);
    let minus_r = a.scale(&f.from_i64(-1), &r);
    let mut inv = a.unit().clone();
    let mut pow = a.unit().clone();
    for _ in 0..a.dim() {
        pow = a.mul(&pow, &minus_r);
        inv = a.add(&inv, &pow);
    }
    let conj = a.mul(&a.mul(&u, &e), &inv);
    debug_assert!(a.is_idempotent(&conj));
    Some(conj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn instances_are_valid_and_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let r = random_algebra(&mut rng, FieldSpec::Rationals, 12);
            assert!(r.algebra.dim() <= 12);
            r.algebra.validate().unwrap();
            if let Some(e) = random_idempotent(&r.algebra, &mut rng, 0, 64) {
                assert!(r.algebra.is_idempotent(&e), "{}", r.description);
            }
        }
    }
}
