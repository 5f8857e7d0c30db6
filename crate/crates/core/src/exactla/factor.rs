//! Factorization of rational polynomials into irreducibles: Berlekamp modulo
//! a small prime, Hensel lifting, then recombination of lifted factors.

use super::field::FieldSpec;
use super::mat::Mat;
use super::poly::Poly;
use super::scalar::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

type ZPoly = Vec<BigInt>;
type FpPoly = Vec<u64>;

/// Distinct monic irreducible factors of `f` over the rationals.
pub fn irreducible_factors(f: &Poly) -> Vec<Poly> {
    let Some(d) = f.degree() else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let sf = f.squarefree_part();
    if sf.degree() == Some(1) {
        return vec![sf];
    }
    let (g, a) = monic_integer_form(&sf);
    let n = sf.degree().unwrap();
    let mut out: Vec<Poly> = factor_monic_squarefree(&g)
        .into_iter()
        .map(|h| {
            // Undo y = a·x, then rescale to monic.
            let mut scaled = Vec::with_capacity(h.len());
            let mut pw = BigInt::one();
            for c in &h {
                scaled.push(Q::from_bigint(c * &pw));
                pw *= &a;
            }
            Poly::new(scaled).monic()
        })
        .collect();
    debug_assert_eq!(out.iter().map(|p| p.degree().unwrap()).sum::<usize>(), n);
    out.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| format!("{}", x).cmp(&format!("{}", y))));
    out
}

/// Returns a monic integer polynomial `G(y) = a^(n-1) F(y/a)` for the primitive
/// integer multiple `F` of `f` with leading coefficient `a`.
fn monic_integer_form(f: &Poly) -> (ZPoly, BigInt) {
    let mut l = BigInt::one();
    for c in &f.coeffs {
        l = l.lcm(&c.denom());
    }
    let mut ints: ZPoly = f.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    for c in ints.iter_mut() {
        *c = &*c / &g;
    }
    if ints.last().unwrap().is_negative() {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    let n = ints.len() - 1;
    let a = ints[n].clone();
    let mut out = vec![BigInt::zero(); n + 1];
    for i in 0..n {
        out[i] = &ints[i] * num_traits::pow(a.clone(), n - 1 - i);
    }
    out[n] = BigInt::one();
    (out, a)
}

fn factor_monic_squarefree(g: &ZPoly) -> Vec<ZPoly> {
    let n = g.len() - 1;
    if n <= 1 {
        return vec![g.clone()];
    }
    // Pick the prime (among a handful of good ones) with the fewest modular factors.
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut good = 0;
    for p in small_primes() {
        let gp = reduce_mod(g, p);
        if fp_degree(&fp_gcd(&gp, &fp_deriv(&gp, p), p)) != Some(0) {
            continue;
        }
        let facs = berlekamp(&gp, p);
        if facs.len() == 1 {
            return vec![g.clone()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        good += 1;
        if good >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("no suitable prime found");
    // Coefficient bound for any monic factor.
    let norm2: BigInt = g.iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + 1u32) << n;
    let target = bound * 2u32 + 1u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= target {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_multi(g, &facs, p, k);
    recombine(g, lifted, &modulus)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..2000).filter(|&n| super::field::is_prime(n))
}

fn reduce_mod(g: &ZPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = g.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fp_trim(&mut out);
    out
}

fn fp_trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_degree(a: &FpPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn fp_sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
    fp_trim(&mut out);
    out
}

fn fp_mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_divrem(a: &FpPoly, d: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let dd = fp_degree(d).expect("division by zero");
    if a.len() <= dd {
        return (Vec::new(), a.clone());
    }
    let inv = fp_inv(d[dd], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] * inv % p;
        if c != 0 {
            for (j, &dc) in d.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * dc % p) % p;
            }
        }
        q[k] = c;
    }
    r.truncate(dd);
    fp_trim(&mut r);
    fp_trim(&mut q);
    (q, r)
}

fn fp_monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

/// `(s, t)` with `s·a + t·b = 1` for coprime `a`, `b`.
fn fp_ext_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(r0.len(), 1, "factors not coprime");
    let inv = fp_inv(r0[0], p);
    let sc = |v: &FpPoly| -> FpPoly { v.iter().map(|&c| c * inv % p).collect() };
    (sc(&s0), sc(&t0))
}

fn fp_deriv(a: &FpPoly, p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
    fp_trim(&mut out);
    out
}

fn fp_powmod(base: &FpPoly, mut e: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut r = vec![1u64];
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = fp_divrem(&fp_mul(&r, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Berlekamp's algorithm for a monic squarefree polynomial over F_p.
fn berlekamp(f: &FpPoly, p: u64) -> Vec<FpPoly> {
    let n = fp_degree(f).unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    let field = FieldSpec::PrimeField(p);
    let xp = fp_powmod(&vec![0, 1], p, f, p);
    // Row i holds x^(ip) mod f minus x^i.
    let mut b = Mat::zeros(n, n, field);
    let mut cur = vec![1u64];
    for i in 0..n {
        for j in 0..n {
            let v = cur.get(j).copied().unwrap_or(0);
            let v = if i == j { (v + p - 1) % p } else { v };
            b.set(i, j, Q::from_i64(v as i64));
        }
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    let kernel = b.transpose().nullspace();
    let r = kernel.len();
    let mut factors = vec![f.clone()];
    if r == 1 {
        return factors;
    }
    for v in kernel {
        let vp: FpPoly = {
            let mut t: FpPoly = v.iter().map(|c| c.as_i64().unwrap() as u64).collect();
            fp_trim(&mut t);
            t
        };
        if fp_degree(&vp).unwrap_or(0) == 0 {
            continue;
        }
        let mut next = Vec::new();
        for h in factors {
            if fp_degree(&h).unwrap() <= 1 {
                next.push(h);
                continue;
            }
            let mut rest = h;
            for s in 0..p {
                if fp_degree(&rest).unwrap() <= 1 {
                    break;
                }
                let g = fp_gcd(&rest, &fp_sub(&vp, &vec![s], p), p);
                let dg = fp_degree(&g).unwrap();
                if dg > 0 && dg < fp_degree(&rest).unwrap() {
                    rest = fp_divrem(&rest, &g, p).0;
                    next.push(g);
                }
            }
            next.push(fp_monic(&rest, p));
        }
        factors = next;
        if factors.len() == r {
            break;
        }
    }
    debug_assert_eq!(factors.len(), r);
    factors
}

fn to_z(a: &FpPoly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn z_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

/// Lifts `f ≡ g·h (mod p)` with monic `g`, `h` to a factorization modulo `p^k`.
fn hensel_pair(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (s, t) = fp_ext_gcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let mut m = pb.clone();
    for _ in 1..k {
        let prod = z_mul(&gz, &hz);
        let n = f.len().max(prod.len());
        let e: ZPoly = (0..n)
            .map(|i| {
                let d = f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default();
                debug_assert!((&d % &m).is_zero());
                d / &m
            })
            .collect();
        let ep = reduce_mod(&e, p);
        let b0 = fp_mul(&ep, &s, p);
        let (q, b) = fp_divrem(&b0, h, p);
        let a = fp_add(&fp_mul(&ep, &t, p), &fp_mul(&q, g, p), p);
        for (i, c) in a.iter().enumerate() {
            gz[i] += &m * BigInt::from(*c);
        }
        for (i, c) in b.iter().enumerate() {
            hz[i] += &m * BigInt::from(*c);
        }
        m *= &pb;
        gz = z_mod(&gz, &m);
        hz = z_mod(&hz, &m);
    }
    (gz, hz)
}

fn hensel_multi(f: &ZPoly, facs: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut cur = f.clone();
    for i in 0..facs.len() - 1 {
        let mut rest = vec![1u64];
        for h in &facs[i + 1..] {
            rest = fp_mul(&rest, h, p);
        }
        let (g, h) = hensel_pair(&cur, &facs[i], &rest, p, k);
        out.push(g);
        cur = h;
    }
    out.push(cur);
    out
}

fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2u32;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

/// Exact division by a monic integer polynomial, if it divides.
fn z_div_exact(a: &ZPoly, d: &ZPoly) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return None;
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        if !c.is_zero() {
            for (j, dc) in d.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
        }
        q[k] = c;
    }
    r[..dd].iter().all(Zero::is_zero).then_some(q)
}

fn recombine(g: &ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut result = Vec::new();
    let mut rest = g.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit: Option<(Vec<usize>, ZPoly, ZPoly)> = None;
        for subset in combinations(lifted.len(), size) {
            let mut cand = vec![BigInt::one()];
            for &i in &subset {
                cand = z_mod(&z_mul(&cand, &lifted[i]), modulus);
            }
            let cand = symmetric(&cand, modulus);
            if let Some(q) = z_div_exact(&rest, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                result.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if rest.len() > 1 {
        result.push(rest);
    }
    result
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prod(fs: &[Poly]) -> Poly {
        fs.iter().fold(Poly::one(), |a, b| a.mul(b))
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 1).len(), 3);
    }

    #[test]
    fn factors_products() {
        // (x^2 + 1)(x - 3)(2x + 1)
        let f = Poly::from_i64(&[1, 0, 1]).mul(&Poly::from_i64(&[-3, 1])).mul(&Poly::from_i64(&[1, 2]));
        let fs = irreducible_factors(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(prod(&fs), f.monic());
    }

    #[test]
    fn irreducible_with_many_modular_factors() {
        // x^4 + 1 is irreducible over Q but splits modulo every prime.
        let f = Poly::from_i64(&[1, 0, 0, 0, 1]);
        assert_eq!(irreducible_factors(&f), vec![f.clone()]);
        // x^4 - 10x^2 + 1, minimal polynomial of sqrt2 + sqrt3.
        let g = Poly::from_i64(&[1, 0, -10, 0, 1]);
        assert_eq!(irreducible_factors(&g).len(), 1);
    }

    #[test]
    fn rational_coefficients_and_repeats() {
        let a = Poly::new(vec![Q::new(1, 2), Q::one()]);
        let b = Poly::from_i64(&[-2, 0, 1]);
        let f = a.mul(&a).mul(&b);
        let fs = irreducible_factors(&f);
        assert_eq!(fs.len(), 2);
        assert_eq!(prod(&fs), a.mul(&b).monic());
    }

    #[test]
    fn cyclotomic_split() {
        // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let f = Poly::from_i64(&[-1, 0, 0, 0, 0, 0, 1]);
        let fs = irreducible_factors(&f);
        assert_eq!(fs.len(), 4);
        assert_eq!(prod(&fs), f);
    }
}
