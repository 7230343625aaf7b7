//! Exact coefficient arithmetic.
//!
//! A session works over exactly one field: the rationals or a prime field
//! `F_p` with `p < 2^31`. Rationals use an `i64` fast path and fall back to
//! arbitrary precision on overflow; both representations are kept canonical
//! (lowest terms, positive denominator, small whenever the value fits).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "{p} is not a prime below 2^31"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(Rational::zero()),
            Field::Prime(p) => Coeff::P(0, *p),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(Rational::from_i64(v)),
            Field::Prime(p) => Coeff::P(v.rem_euclid(*p as i64) as u32, *p),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(Rational::from_big(BigRational::from_integer(v.clone()))),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Coeff::P(r.to_u32().unwrap(), *p)
            }
        }
    }

    /// Maps `num/den` into the field; fails if `den` vanishes in it.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Coeff> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::InvalidInput(format!(
                "denominator {den} vanishes in {self}"
            )));
        }
        Ok(n.div(&d))
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p as u64),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "Fp({p})"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact rational number in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    /// `num/den` with `den > 0` and `gcd(num, den) = 1`.
    Small(i64, i64),
    /// Only used when the value does not fit the small form.
    Big(BigRational),
}

impl Rational {
    pub fn zero() -> Rational {
        Rational::Small(0, 1)
    }

    pub fn from_i64(v: i64) -> Rational {
        Rational::Small(v, 1)
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) if n != i64::MIN => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn from_big(r: BigRational) -> Rational {
        // BigRational is already reduced with positive denominator.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    pub fn add(&self, other: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rational::from_i128(a + c, b);
            }
            return Rational::from_i128(a * d + c * b, b * d);
        }
        Rational::from_big(self.to_big() + other.to_big())
    }

    pub fn neg(&self) -> Rational {
        match self {
            Rational::Small(n, d) => Rational::Small(-n, *d),
            Rational::Big(b) => Rational::from_big(-b.clone()),
        }
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            return Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() * other.to_big())
    }

    /// Panics on zero.
    pub fn inv(&self) -> Rational {
        match self {
            Rational::Small(0, _) => panic!("division by zero"),
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(b) => Rational::from_big(b.recip()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Rational::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

/// A field element. Prime-field residues carry their modulus so that values
/// from different fields can never be combined silently.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(Rational),
    /// `(residue, p)` with `residue < p`.
    P(u32, u32),
}

impl Coeff {
    pub fn field(&self) -> Field {
        match self {
            Coeff::Q(_) => Field::Rational,
            Coeff::P(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(r) => r.is_zero(),
            Coeff::P(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(r) => r.is_one(),
            Coeff::P(v, _) => *v == 1,
        }
    }

    #[inline]
    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a.add(b)),
            (Coeff::P(a, p), Coeff::P(b, q)) if p == q => {
                Coeff::P(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => field_mismatch(self, other),
        }
    }

    #[inline]
    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    #[inline]
    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(a.neg()),
            Coeff::P(0, p) => Coeff::P(0, *p),
            Coeff::P(a, p) => Coeff::P(p - a, *p),
        }
    }

    #[inline]
    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a.mul(b)),
            (Coeff::P(a, p), Coeff::P(b, q)) if p == q => {
                Coeff::P(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => field_mismatch(self, other),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(a.inv()),
            Coeff::P(0, _) => panic!("division by zero"),
            Coeff::P(a, p) => Coeff::P(pow_mod(*a as u64, *p as u64 - 2, *p as u64) as u32, *p),
        }
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        self.mul(&other.inv())
    }

    /// True if the canonical text form starts with a minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Q(a) => a.is_negative(),
            Coeff::P(..) => false,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(r) => write!(f, "{r}"),
            Coeff::P(v, _) => write!(f, "{v}"),
        }
    }
}

#[cold]
fn field_mismatch(a: &Coeff, b: &Coeff) -> ! {
    panic!("coefficient field mismatch: {} vs {}", a.field(), b.field())
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_overflow_promotes_to_big() {
        let a = Rational::from_i64(i64::MAX);
        let b = a.add(&Rational::from_i64(1));
        assert!(matches!(b, Rational::Big(_)));
        let c = b.sub(&Rational::from_i64(1));
        assert_eq!(c, Rational::from_i64(i64::MAX));
        assert!(matches!(c, Rational::Small(..)));
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(101).unwrap();
        for v in 1..101 {
            let c = f.from_i64(v);
            assert!(c.mul(&c.inv()).is_one());
        }
        assert!(Field::prime(100).is_err());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixed_fields_panic() {
        let a = Field::Rational.one();
        let b = Field::Prime(7).one();
        let _ = a.add(&b);
    }

    proptest! {
        #[test]
        fn rational_text_round_trip(n in any::<i64>(), d in 1i64..i64::MAX, k in 0u32..4) {
            let mut r = Rational::from_i128(n as i128, d as i128);
            for _ in 0..k {
                r = r.mul(&r).add(&Rational::from_i64(3));
            }
            let back: Rational = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn rational_field_axioms(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = Rational::from_i128(a as i128, b as i128);
            let y = Rational::from_i128(c as i128, d as i128);
            prop_assert_eq!(x.add(&y).sub(&y), x.clone());
            if !y.is_zero() {
                prop_assert_eq!(x.mul(&y).mul(&y.inv()), x);
            }
        }
    }
}
