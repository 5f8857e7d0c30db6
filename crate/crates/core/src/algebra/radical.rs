//! Jacobson radical via the trace form (characteristic zero), or from
//! construction data when the algebra carries a verified radical.

use super::construct::{is_ideal, quotient};
use super::{AlgError, Algebra};
use crate::exactla::{Mat, Q, Subspace};

/// Kernel of `(x, y) ↦ Tr(L_{xy})`.
fn trace_form_kernel(a: &Algebra) -> Subspace {
    let n = a.dim();
    let f = a.field();
    let mut tr = vec![Q::zero(); n];
    for (k, t) in tr.iter_mut().enumerate() {
        for j in 0..n {
            for (s, c) in a.basis_product(k, j) {
                if *s == j {
                    *t = f.add(t, c);
                }
            }
        }
    }
    let mut form = Mat::zeros(n, n, f);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Q::zero();
            for (k, c) in a.basis_product(i, j) {
                f.fma(&mut acc, c, &tr[*k]);
            }
            form.set(i, j, acc);
        }
    }
    crate::exactla::subspace::kernel(&form)
}

/// The Jacobson radical. Needs characteristic zero unless the algebra was
/// built with a known radical (e.g. a graded quiver algebra).
pub fn radical(a: &Algebra) -> Result<Subspace, AlgError> {
    a.radical_cache().get_or_init(|| compute(a)).clone()
}

fn compute(a: &Algebra) -> Result<Subspace, AlgError> {
    if let Some(h) = &a.hints.radical {
        let s = Subspace::span(a.dim(), a.field(), h);
        if is_ideal(a, &s) && is_nilpotent(a, &s) {
            return Ok(s);
        }
    }
    a.require_char_zero()?;
    let rad = trace_form_kernel(a);
    debug_assert!(is_nilpotent(a, &rad));
    Ok(rad)
}

fn is_nilpotent(a: &Algebra, s: &Subspace) -> bool {
    let mut p = s.clone();
    for _ in 0..=a.dim() {
        if p.is_zero() {
            return true;
        }
        let next = a.product_space(&p, s);
        if next.dim() == p.dim() {
            return false;
        }
        p = next;
    }
    p.is_zero()
}

/// `[rad, rad^2, ...]` down to (excluding) zero.
pub fn radical_powers(a: &Algebra) -> Result<Vec<Subspace>, AlgError> {
    let r = radical(a)?;
    let mut out = Vec::new();
    let mut p = r.clone();
    while !p.is_zero() {
        out.push(p.clone());
        p = a.product_space(&p, &r);
    }
    Ok(out)
}

/// Smallest `L` with `rad^L = 0`.
pub fn loewy_length(a: &Algebra) -> Result<usize, AlgError> {
    if a.dim() == 0 {
        return Ok(0);
    }
    Ok(radical_powers(a)?.len() + 1)
}

pub fn is_semisimple(a: &Algebra) -> Result<bool, AlgError> {
    Ok(radical(a)?.is_zero())
}

/// Re-checks the radical: nilpotent ideal with semisimple quotient.
pub fn verify_radical(a: &Algebra) -> Result<bool, AlgError> {
    a.require_char_zero()?;
    let r = radical(a)?;
    if !is_ideal(a, &r) || !is_nilpotent(a, &r) {
        return Ok(false);
    }
    let q = quotient(a, &r);
    Ok(trace_form_kernel(&q).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::testalg::*;

    #[test]
    fn known_radicals() {
        let r = dual_numbers();
        let rad = radical(&r).unwrap();
        assert_eq!(rad.dim(), 1);
        assert!(rad.contains(&r.basis(1)));
        assert_eq!(loewy_length(&r).unwrap(), 2);
        assert!(verify_radical(&r).unwrap());
        let a = a5();
        assert_eq!(radical(&a).unwrap().dim(), 3);
        // the trace form agrees with the graded radical
        assert_eq!(trace_form_kernel(&a), radical(&a).unwrap());
        assert!(verify_radical(&a).unwrap());
        let kk = crate::algebra::direct_product(&[&families::ground(QQ), &families::ground(QQ)]).unwrap();
        assert!(is_semisimple(&kk).unwrap());
    }

    use crate::algebra::families;

    #[test]
    fn prime_field_without_hint() {
        let f5 = crate::exactla::FieldSpec::prime(5).unwrap();
        let t = families::upper_triangular_k(f5, 2);
        let mut t2 = t.clone();
        t2.hints = Default::default();
        assert!(matches!(radical(&t2), Err(AlgError::UnsupportedField(_))));
    }
}
