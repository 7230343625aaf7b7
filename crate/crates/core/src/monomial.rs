//! Exponent vectors and admissible monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Exp = u16;

/// A monomial as its exponent vector; the length is the ambient variable count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[Exp; 16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[Exp]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn from_u32s(exps: &[u32]) -> Result<Monomial> {
        exps.iter()
            .map(|&e| Exp::try_from(e).map_err(|_| Error::ExponentOverflow))
            .collect::<Result<SmallVec<_>>>()
            .map(Monomial)
    }

    #[inline]
    pub fn exps(&self) -> &[Exp] {
        &self.0
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Panics on exponent overflow; use [`Monomial::checked_mul`] where the
    /// inputs are not already bounded.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("exponent overflow")
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut out = self.0.clone();
        for (a, b) in out.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    /// `self | other`
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other | self`.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Monomial in a ring with extra variables appended (or prepended).
    pub fn embed(&self, front: usize, back: usize) -> Monomial {
        let mut v: SmallVec<[Exp; 16]> = SmallVec::from_elem(0, front);
        v.extend_from_slice(&self.0);
        v.extend(std::iter::repeat_n(0, back));
        Monomial(v)
    }

    /// Keeps only the coordinates in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Monomial {
        Monomial(SmallVec::from_slice(&self.0[range]))
    }

    pub fn set(&mut self, i: usize, e: Exp) {
        self.0[i] = e;
    }

    /// Text form `x1^2*x3` using the given variable names; `1` for the unit.
    pub fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Admissible monomial orders. Variables are ordered `x_0 > x_1 > ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Block order: degrevlex on the first `b` variables, then degrevlex on
    /// the rest. Any monomial involving the front block exceeds every
    /// monomial free of it.
    Elimination(usize),
    /// Total degree first, then a higher power of the last variable wins,
    /// then degrevlex on the remaining variables. Used on homogenized
    /// ideals (homogenizing variable last) to obtain standard bases for the
    /// local degree order.
    TangentCone,
}

impl MonomialOrder {
    /// True if the order compares total degree first.
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex | MonomialOrder::TangentCone)
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_shifted(a, 0, b, 0)
    }

    /// Compares `a` placed in a component of degree shift `sa` against `b`
    /// with shift `sb`. Shifts only matter for graded orders.
    #[inline]
    pub fn cmp_shifted(&self, a: &Monomial, sa: i64, b: &Monomial, sb: i64) -> Ordering {
        let (a, b) = (a.exps(), b.exps());
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::DegRevLex => {
                let da = deg(a) as i64 + sa;
                let db = deg(b) as i64 + sb;
                da.cmp(&db).then_with(|| revlex(a, b))
            }
            MonomialOrder::Elimination(k) => {
                let k = (*k).min(a.len());
                deg(&a[..k])
                    .cmp(&deg(&b[..k]))
                    .then_with(|| revlex(&a[..k], &b[..k]))
                    .then_with(|| deg(&a[k..]).cmp(&deg(&b[k..])))
                    .then_with(|| revlex(&a[k..], &b[k..]))
            }
            MonomialOrder::TangentCone => {
                let da = deg(a) as i64 + sa;
                let db = deg(b) as i64 + sb;
                let n = a.len();
                if n == 0 {
                    return da.cmp(&db);
                }
                da.cmp(&db)
                    .then_with(|| a[n - 1].cmp(&b[n - 1]))
                    .then_with(|| revlex(&a[..n - 1], &b[..n - 1]))
            }
        }
    }
}

#[inline]
fn deg(a: &[Exp]) -> u32 {
    a.iter().map(|&e| e as u32).sum()
}

#[inline]
fn lex(a: &[Exp], b: &[Exp]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        if x != y {
            return x.cmp(y);
        }
    }
    Ordering::Equal
}

/// Reverse lexicographic tie-break for monomials of equal degree: the one
/// with the smaller exponent in the last differing variable is larger.
#[inline]
fn revlex(a: &[Exp], b: &[Exp]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Checked comparison for callers holding monomials of unknown provenance.
pub fn monomial_compare(a: &Monomial, b: &Monomial, ord: MonomialOrder) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::DimensionMismatch {
            expected: a.nvars(),
            got: b.nvars(),
        });
    }
    Ok(ord.cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[Exp]) -> Monomial {
        Monomial::from_exps(e)
    }

    fn all_monomials(nvars: usize, max_deg: u32) -> Vec<Monomial> {
        let mut out = vec![m(&vec![0; nvars])];
        for i in 0..nvars {
            let mut next = Vec::new();
            for base in &out {
                for e in 0..=max_deg {
                    let mut b = base.clone();
                    b.set(i, e as Exp);
                    if b.degree() <= max_deg {
                        next.push(b);
                    }
                }
            }
            out = next;
        }
        out
    }

    const ORDERS: [MonomialOrder; 5] = [
        MonomialOrder::Lex,
        MonomialOrder::DegRevLex,
        MonomialOrder::Elimination(1),
        MonomialOrder::Elimination(2),
        MonomialOrder::TangentCone,
    ];

    #[test]
    fn order_axioms_exhaustive() {
        let mons = all_monomials(3, 4);
        let one = Monomial::one(3);
        for ord in ORDERS {
            for a in &mons {
                assert_ne!(ord.cmp(&one, a), Ordering::Greater, "{ord:?}: 1 is minimal");
                for b in &mons {
                    let ab = ord.cmp(a, b);
                    assert_eq!(ab, ord.cmp(b, a).reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    if a.divides(b) && a != b {
                        assert_eq!(ab, Ordering::Less, "{ord:?} refines divisibility");
                    }
                    for c in mons.iter().take(12) {
                        assert_eq!(ord.cmp(&a.mul(c), &b.mul(c)), ab, "{ord:?} multiplicative");
                    }
                }
            }
            // transitivity through sorting consistency
            let mut sorted = mons.clone();
            sorted.sort_by(|a, b| ord.cmp(a, b));
            for w in sorted.windows(2) {
                assert_eq!(ord.cmp(&w[0], &w[1]), Ordering::Less);
            }
            for (i, a) in sorted.iter().enumerate() {
                for b in &sorted[i + 1..] {
                    assert_eq!(ord.cmp(a, b), Ordering::Less, "{ord:?} transitive");
                }
            }
        }
    }

    #[test]
    fn degrevlex_examples() {
        let ord = MonomialOrder::DegRevLex;
        assert_eq!(ord.cmp(&m(&[2, 1]), &m(&[1, 2])), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[1, 1]), &m(&[1, 1])), Ordering::Equal);
        assert_eq!(
            MonomialOrder::Lex.cmp(&m(&[0, 0]), &m(&[1, 0])),
            Ordering::Less
        );
    }

    #[test]
    fn elimination_property() {
        let ord = MonomialOrder::Elimination(1);
        assert_eq!(ord.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
    }

    #[test]
    fn tangent_cone_prefers_homogenizer() {
        // x0 is last: at equal degree, the monomial with more x0 wins.
        let ord = MonomialOrder::TangentCone;
        assert_eq!(ord.cmp(&m(&[1, 0, 1]), &m(&[2, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn compare_checks_dimension() {
        assert!(monomial_compare(&m(&[1]), &m(&[1, 0]), MonomialOrder::Lex).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        let a = m(&[Exp::MAX]);
        assert_eq!(a.checked_mul(&m(&[1])), Err(Error::ExponentOverflow));
    }
}
