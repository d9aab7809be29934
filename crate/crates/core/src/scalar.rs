//! Exact scalars over the rationals and odd prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// Integers modulo an odd prime.
    Prime(u64),
}

impl Field {
    /// Builds `F_p`, rejecting even and composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Prime { value: 0, modulus: p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    /// The `i`-th element of `F_p` in the order `0, 1, .., p-1`.
    pub fn element(self, i: u64) -> Scalar {
        match self {
            Field::Rational => self.from_i64(i as i64),
            Field::Prime(p) => Scalar::Prime {
                value: i % p,
                modulus: p,
            },
        }
    }

    /// Random element. Rationals are drawn as integers in `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R, bound: i64) -> Scalar {
        match self {
            Field::Rational => self.from_i64(rng.gen_range(-bound..=bound)),
            Field::Prime(p) => Scalar::Prime {
                value: rng.gen_range(0..p),
                modulus: p,
            },
        }
    }

    /// Parses a scalar string in this field: `"a"`, `"a/b"` or `"k mod p"`.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar(s.to_string());
        let s_trim = s.trim();
        if let Some((k, p)) = s_trim.split_once("mod") {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            if self != Field::Prime(p) {
                return Err(Error::BadScalar(format!("{s}: modulus does not match field {self}")));
            }
            let q = parse_rational(k.trim()).ok_or_else(bad)?;
            return self.from_rational(&q);
        }
        let q = parse_rational(s_trim).ok_or_else(bad)?;
        self.from_rational(&q)
    }

    /// Maps a rational into this field; fails when a denominator vanishes mod p.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor(&pb).to_u64().unwrap();
                let den = q.denom().mod_floor(&pb).to_u64().unwrap();
                if den == 0 {
                    return Err(Error::BadReduction { prime: p });
                }
                Ok(Scalar::Prime {
                    value: mul_mod(num, inv_mod(den, p), p),
                    modulus: p,
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`/`q` and `Fp:<p>`/`fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let lower = t.to_ascii_lowercase();
        if let Some(p) = lower.strip_prefix("fp:") {
            let p: u64 = p.trim().parse().map_err(|_| Error::BadField(s.to_string()))?;
            return Field::prime(p);
        }
        Err(Error::BadField(s.to_string()))
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// An element of `Q` or `F_p`. Rationals are kept in lowest terms by `BigRational`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) if p == q => {
                Scalar::Prime {
                    value: (a + b) % p,
                    modulus: *p,
                }
            }
            _ => field_mismatch(self, other),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) if p == q => {
                Scalar::Prime {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => field_mismatch(self, other),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Reduces a rational scalar into `F_p`; prime-field scalars must already live there.
    pub fn reduce(&self, target: Field) -> Result<Scalar> {
        match self {
            Scalar::Rational(q) => target.from_rational(q),
            Scalar::Prime { modulus, .. } => {
                if target == Field::Prime(*modulus) {
                    Ok(self.clone())
                } else {
                    Err(Error::ModulusConflict {
                        from: self.field(),
                        to: target,
                    })
                }
            }
        }
    }

    /// Residue for prime-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }
}

#[cold]
fn field_mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Prime { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
