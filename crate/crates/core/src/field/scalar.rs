//! Elements of the base field `k`: the rationals or a prime field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The base field of a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    /// Prime field of the given characteristic. Only built through [`Field::prime`].
    Prime(u64),
}

/// Largest accepted characteristic; keeps residue products inside `u128`
/// and the distinct-degree tests cheap.
pub const MAX_PRIME: u64 = 1 << 31;

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::BadCharacteristic(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp(n.rem_euclid(*p as i64) as u64, *p),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Fp(r.to_u64().unwrap_or(0), *p)
            }
        }
    }

    /// Maps a rational into the field; fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(q.clone())),
            Field::Prime(_) => {
                let n = self.from_bigint(q.numer());
                let d = self.from_bigint(q.denom());
                n.checked_div(&d)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp {p}"),
        }
    }
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

/// An exact element of `k`. Residues carry their modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64, u64),
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    fn mismatch(&self, other: &Scalar) -> ! {
        panic!(
            "scalar characteristic mismatch: {} vs {}",
            self.field(),
            other.field()
        )
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => Scalar::Fp((a + b) % p, *p),
            _ => self.mismatch(other),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => Scalar::Fp((a + p - b) % p, *p),
            _ => self.mismatch(other),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => self.mismatch(other),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((p - a) % p, *p),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp(a, p) => Scalar::Fp(inv_mod(*a, *p), *p),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if self.field() != other.field() {
            return Err(Error::CharacteristicMismatch);
        }
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        Ok(match &base {
            Scalar::Fp(a, p) => Scalar::Fp(pow_mod(*a, e, *p), *p),
            Scalar::Q(_) => {
                let mut acc = base.field().one();
                let mut b = base.clone();
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.mul(&b);
                    }
                    b = b.mul(&b);
                    e >>= 1;
                }
                acc
            }
        })
    }

    /// Multiplicative order, when finite. In characteristic 0 only `±1`
    /// are roots of unity in `Q`.
    pub fn multiplicative_order(&self) -> Option<u64> {
        match self {
            Scalar::Q(q) => {
                if q.is_one() {
                    Some(1)
                } else if (-q).is_one() {
                    Some(2)
                } else {
                    None
                }
            }
            Scalar::Fp(0, _) => None,
            Scalar::Fp(a, p) => {
                let n = p - 1;
                let mut divisors: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0).flat_map(|d| [d, n / d]).collect();
                divisors.sort_unstable();
                divisors.into_iter().find(|d| pow_mod(*a, *d, *p) == 1)
            }
        }
    }

    /// Bit length of the largest integer involved (numerator or denominator).
    pub fn bit_size(&self) -> u64 {
        match self {
            Scalar::Q(q) => q.numer().bits().max(q.denom().bits()),
            Scalar::Fp(_, p) => 64 - p.leading_zeros() as u64,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::Fp(..) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp(..) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp(v, _) => write!(f, "{v}"),
        }
    }
}
