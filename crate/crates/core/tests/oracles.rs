//! Independent oracles for verdicts that other checks build on.

use endok::algebra::families::{ground, matrix_algebra, number_field};
use endok::algebra::random::random_algebra;
use endok::algebra::{corner, division_ring_test, primitive_decomposition, quotient, radical, Algebra, Tri};
use endok::exactla::{FieldSpec, Poly, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const QQ: FieldSpec = FieldSpec::Rationals;

/// A division ring has no zero divisors, so left multiplication by any
/// nonzero element is invertible.
fn no_zero_divisor_seen(a: &Algebra, rng: &mut ChaCha8Rng, samples: usize) -> bool {
    let f = a.field();
    (0..samples).all(|_| {
        let x: Vec<Q> = (0..a.dim()).map(|_| f.from_i64(rng.gen_range(-3..=3))).collect();
        x.iter().all(|c| c.is_zero()) || a.left_mat(&x).is_invertible()
    })
}

#[test]
fn division_verdicts_on_known_algebras() {
    let cases: Vec<(&str, Algebra, Tri)> = vec![
        ("k", ground(QQ), Tri::Yes),
        ("Q(i)", number_field(&Poly::from_i64(&[1, 0, 1])), Tri::Yes),
        ("Q(2^(1/3))", number_field(&Poly::from_i64(&[-2, 0, 0, 1])), Tri::Yes),
        ("k x k", number_field(&Poly::from_i64(&[-1, 0, 1])), Tri::No),
        ("k[x]/(x²)", number_field(&Poly::from_i64(&[0, 0, 1])), Tri::No),
        ("M2(k)", matrix_algebra(&ground(QQ), 2), Tri::No),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, a, want) in cases {
        let got = division_ring_test(&a, 0, 64).unwrap();
        assert_eq!(got, want, "{}", name);
        assert_eq!(no_zero_divisor_seen(&a, &mut rng, 40), want == Tri::Yes, "{}", name);
    }
}

#[test]
fn yes_never_meets_a_zero_divisor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tops = 0;
    for _ in 0..60 {
        let r = random_algebra(&mut rng, QQ, 10);
        let a = r.algebra;
        let Ok(prims) = primitive_decomposition(&a, 0, 64) else { continue };
        for e in prims {
            // a primitive corner is local, so its top is a division ring
            let c = corner(&a, &e).unwrap().algebra;
            let top = quotient(&c, &radical(&c).unwrap());
            let v = division_ring_test(&top, 0, 64).unwrap();
            assert_ne!(v, Tri::No, "top of a primitive corner in {}", r.description);
            if v == Tri::Yes {
                assert!(no_zero_divisor_seen(&top, &mut rng, 20), "{}", r.description);
                tops += 1;
            }
        }
        let whole = division_ring_test(&a, 0, 64).unwrap();
        if whole == Tri::Yes {
            assert!(no_zero_divisor_seen(&a, &mut rng, 40), "{}", r.description);
        }
    }
    assert!(tops >= 60, "only {} certified tops", tops);
}
