use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// Coefficient field of a session: the rationals, or a prime field `F_p`.
///
/// The field is fixed when an algebra is loaded and every scalar derived from
/// it carries the same field; mixing scalars from different fields is a
/// programming error and panics.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    /// Prime field constructor, rejecting composite or trivial moduli.
    pub fn fp(p: u64) -> Result<Field, Error> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        Ok(Field::Fp(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { value: 0, prime: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => Scalar::Fp {
                value: n.rem_euclid(*p as i64) as u64,
                prime: *p,
            },
        }
    }

    /// Parses `"n"` or `"n/d"` with optional sign; in `F_p` the quotient is
    /// evaluated via a modular inverse.
    pub fn parse(&self, s: &str) -> Result<Scalar, Error> {
        let s = s.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num = BigInt::from_str(num_s)
            .map_err(|_| Error::Parse(format!("bad scalar numerator {num_s:?}")))?;
        let den = match den_s {
            Some(d) => BigInt::from_str(d)
                .map_err(|_| Error::Parse(format!("bad scalar denominator {d:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        match self {
            Field::Q => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Fp(p) => {
                let pv = BigInt::from(*p);
                let n = ((num % &pv) + &pv) % &pv;
                let d = ((den % &pv) + &pv) % &pv;
                let n: u64 = n.try_into().expect("residue fits in u64");
                let d: u64 = d.try_into().expect("residue fits in u64");
                if d == 0 {
                    return Err(Error::Parse(format!("denominator divisible by {p}")));
                }
                let inv = mod_inverse(d, *p);
                Ok(Scalar::Fp {
                    value: mod_mul(n, inv, *p),
                    prime: *p,
                })
            }
        }
    }
}

/// An exact field element: a reduced rational with positive denominator, or a
/// residue in `[0, p)` for a prime `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, prime: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { prime, .. } => Field::Fp(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, prime: p }, Scalar::Fp { value: b, prime: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    value: (a + b) % p,
                    prime: *p,
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, prime: p }, Scalar::Fp { value: b, prime: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    value: mod_mul(*a, *b, *p),
                    prime: *p,
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, prime } => Scalar::Fp {
                value: if *value == 0 { 0 } else { prime - value },
                prime: *prime,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { value, prime } => Scalar::Fp {
                value: mod_inverse(*value, *prime),
                prime: *prime,
            },
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    assert!(!a.is_multiple_of(p), "zero has no inverse");
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normal_form() {
        let s = Field::Q.parse("4/-6").unwrap();
        match &s {
            Scalar::Q(r) => {
                assert_eq!(r.numer().to_string(), "-2");
                assert_eq!(r.denom().to_string(), "3");
            }
            _ => unreachable!(),
        }
        assert_eq!(s.to_string(), "-2/3");
    }

    #[test]
    fn rational_string_round_trip() {
        // Lossless round-trip through the "num/den" serialization.
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let num = (state >> 16) as i64 % 10_000 - 5_000;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let den = ((state >> 16) as i64 % 999).abs() + 1;
            let s = Field::Q.parse(&format!("{num}/{den}")).unwrap();
            let back = Field::Q.parse(&s.to_string()).unwrap();
            assert_eq!(s, back);
        }
    }

    #[test]
    fn fp_arithmetic() {
        let f = Field::fp(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(a.mul(&b), f.from_i64(6));
        assert_eq!(a.add(&b), f.from_i64(2));
        assert_eq!(a.inv().unwrap().mul(&a), f.one());
        // 1/2 = 4 mod 7
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
    }

    #[test]
    fn fp_requires_prime() {
        assert!(Field::fp(6).is_err());
        assert!(Field::fp(1).is_err());
        assert!(Field::fp(13).is_ok());
    }
}
