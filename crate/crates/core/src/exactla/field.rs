use super::scalar::Q;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The ground field. Prime-field elements are stored as integers in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} too large (limit 2^31)")]
    PrimeTooLarge(u64),
    #[error("{value} has no image in F_{p}")]
    NoImage { value: String, p: u64 },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
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

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self, FieldSpec::Rationals)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    #[inline]
    fn word(x: &Q) -> u64 {
        x.as_i64().expect("prime-field element out of range") as u64
    }

    /// Maps a rational into this field.
    pub fn embed(&self, x: &Q) -> Result<Q, FieldError> {
        match self {
            FieldSpec::Rationals => Ok(x.clone()),
            FieldSpec::PrimeField(p) => {
                let pb = num_bigint::BigInt::from(*p);
                let modp = |v: num_bigint::BigInt| -> u64 {
                    let r = ((v % &pb) + &pb) % &pb;
                    num_traits::ToPrimitive::to_u64(&r).unwrap()
                };
                let n = modp(x.numer());
                let d = modp(x.denom());
                if d == 0 {
                    return Err(FieldError::NoImage { value: x.to_string(), p: *p });
                }
                Ok(Q::from_i64((n * pow_mod(d, p - 2, *p) % p) as i64))
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Q {
        match self {
            FieldSpec::Rationals => Q::from_i64(n),
            FieldSpec::PrimeField(p) => Q::from_i64(n.rem_euclid(*p as i64)),
        }
    }

    #[inline]
    pub fn add(&self, a: &Q, b: &Q) -> Q {
        match self {
            FieldSpec::Rationals => a + b,
            FieldSpec::PrimeField(p) => Q::from_i64(((Self::word(a) + Self::word(b)) % p) as i64),
        }
    }

    #[inline]
    pub fn sub(&self, a: &Q, b: &Q) -> Q {
        match self {
            FieldSpec::Rationals => a - b,
            FieldSpec::PrimeField(p) => Q::from_i64(((Self::word(a) + p - Self::word(b)) % p) as i64),
        }
    }

    #[inline]
    pub fn mul(&self, a: &Q, b: &Q) -> Q {
        match self {
            FieldSpec::Rationals => a * b,
            FieldSpec::PrimeField(p) => Q::from_i64((Self::word(a) * Self::word(b) % p) as i64),
        }
    }

    #[inline]
    pub fn neg(&self, a: &Q) -> Q {
        match self {
            FieldSpec::Rationals => -a,
            FieldSpec::PrimeField(p) => Q::from_i64(((p - Self::word(a)) % p) as i64),
        }
    }

    pub fn inv(&self, a: &Q) -> Option<Q> {
        if a.is_zero() {
            return None;
        }
        match self {
            FieldSpec::Rationals => a.inv(),
            FieldSpec::PrimeField(p) => Some(Q::from_i64(pow_mod(Self::word(a), p - 2, *p) as i64)),
        }
    }

    pub fn div(&self, a: &Q, b: &Q) -> Q {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    /// `acc += a*b`, skipping the work when either factor vanishes.
    #[inline]
    pub fn fma(&self, acc: &mut Q, a: &Q, b: &Q) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *acc = self.add(acc, &self.mul(a, b));
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{}", p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_checks() {
        assert!(FieldSpec::prime(7).is_ok());
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        let f = FieldSpec::prime(7).unwrap();
        let half = f.embed(&Q::new(1, 2)).unwrap();
        assert_eq!(f.mul(&half, &f.from_i64(2)), Q::one());
        assert!(f.embed(&Q::new(1, 7)).is_err());
        assert_eq!(f.neg(&Q::zero()), Q::zero());
    }
}
