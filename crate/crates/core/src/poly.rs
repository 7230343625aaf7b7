//! Sparse multivariate polynomials over a session field.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::monomial::{Exp, Monomial, MonomialOrder};

/// A polynomial ring `k[x_1..x_s]`: variable names plus coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub vars: Vec<String>,
    pub field: Field,
}

impl Ring {
    pub fn new<S: Into<String>>(field: Field, vars: impl IntoIterator<Item = S>) -> Arc<Ring> {
        Arc::new(Ring {
            vars: vars.into_iter().map(Into::into).collect(),
            field,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Ring with `front` variables prepended and `back` appended.
    pub fn extend(&self, front: &[String], back: &[String]) -> Arc<Ring> {
        let mut vars: Vec<String> = front.to_vec();
        vars.extend(self.vars.iter().cloned());
        vars.extend(back.iter().cloned());
        Arc::new(Ring {
            vars,
            field: self.field,
        })
    }

    /// A variable name not already used in this ring.
    pub fn fresh_name(&self, stem: &str) -> String {
        let mut name = stem.to_string();
        while self.var_index(&name).is_some() {
            name.push('\'');
        }
        name
    }

    pub fn check_same(&self, other: &Ring) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.vars != other.vars {
            return Err(Error::RingMismatch(format!(
                "[{}] vs [{}]",
                self.vars.join(","),
                other.vars.join(",")
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(","))
    }
}

pub type Term = (Monomial, Coeff);

/// A polynomial with terms sorted strictly descending in degrevlex, no zero
/// coefficients and no repeated monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<Term>,
}

const DEFAULT_ORDER: MonomialOrder = MonomialOrder::DegRevLex;

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Coeff) -> Polynomial {
        Polynomial::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &Arc<Ring>) -> Polynomial {
        Polynomial::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Polynomial {
        Polynomial::from_terms(
            ring,
            vec![(Monomial::var(ring.nvars(), i), ring.field.one())],
        )
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Coeff) -> Polynomial {
        Polynomial::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<Term>) -> Polynomial {
        let mut map: HashMap<Monomial, Coeff> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match map.get_mut(&m) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Polynomial::from_map(ring, map)
    }

    fn from_map(ring: &Arc<Ring>, map: HashMap<Monomial, Coeff>) -> Polynomial {
        let mut terms: Vec<Term> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| DEFAULT_ORDER.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Terms already sorted descending in degrevlex with nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Arc<Ring>, terms: Vec<Term>) -> Polynomial {
        debug_assert!(terms
            .windows(2)
            .all(|w| DEFAULT_ORDER.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Leading term under degrevlex.
    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_term_in(&self, ord: MonomialOrder) -> Option<&Term> {
        self.terms.iter().max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.field.zero(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Lowest total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Homogeneous w.r.t. the given variable weights.
    pub fn is_weighted_homogeneous(&self, weights: &[u32]) -> bool {
        let wdeg = |m: &Monomial| -> u64 {
            m.exps()
                .iter()
                .zip(weights)
                .map(|(&e, &w)| e as u64 * w as u64)
                .sum()
        };
        let mut it = self.terms.iter().map(|(m, _)| wdeg(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .cloned()
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// The homogeneous component of least degree.
    pub fn lowest_form(&self) -> Polynomial {
        match self.order() {
            None => self.clone(),
            Some(d) => self.homogeneous_part(d),
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                DEFAULT_ORDER.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        a[i].1.sub(&b[j].1)
                    } else {
                        a[i].1.add(&b[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial::from_sorted_terms(&self.ring, out)
    }

    /// Exact product. Errors if the operands live in different rings.
    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut map: HashMap<Monomial, Coeff> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb)?;
                let c = ca.mul(cb);
                match map.get_mut(&m) {
                    Some(acc) => *acc = acc.add(&c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        Ok(Polynomial::from_map(&self.ring, map))
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, d)| (m.clone(), d.mul(c)))
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        // multiplication by a monomial preserves any admissible order
        let terms = self
            .terms
            .iter()
            .map(|(n, d)| (n.mul(m), d.mul(c)))
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Divides by the leading coefficient (degrevlex).
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Re-expresses the polynomial in `target`, whose variables are this
    /// ring's variables with `front` new ones before and `back` after.
    pub fn embed(&self, target: &Arc<Ring>, front: usize, back: usize) -> Polynomial {
        debug_assert_eq!(target.nvars(), self.ring.nvars() + front + back);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.embed(front, back), c.clone()))
            .collect();
        if front == 0 {
            // appending trailing zero exponents keeps degrevlex order
            Polynomial::from_sorted_terms(target, terms)
        } else {
            Polynomial::from_terms(target, terms)
        }
    }

    /// Substitutes `images[i]` for the i-th variable; all images share a ring.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut acc = Polynomial::zero(target);
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target)]; images.len()];
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Homogenizes with a new last variable, to the top degree.
    pub fn homogenize(&self, target: &Arc<Ring>) -> Polynomial {
        debug_assert_eq!(target.nvars(), self.ring.nvars() + 1);
        let top = self.total_degree().unwrap_or(0);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut h = m.embed(0, 1);
                let last = h.nvars() - 1;
                h.set(last, (top - m.degree()) as Exp);
                (h, c.clone())
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Sets the last variable to 1 and drops it.
    pub fn dehomogenize(&self, target: &Arc<Ring>) -> Polynomial {
        debug_assert_eq!(target.nvars() + 1, self.ring.nvars());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.slice(0..n), c.clone()))
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Sets the variables in `vars` to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().all(|&v| m.exps()[v] == 0))
            .cloned()
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let n = self.ring.nvars();
        (0..n)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exps()[i] > 0))
            .collect()
    }

    /// Restriction to a coordinate range, assuming no other variable occurs.
    pub fn restrict(&self, target: &Arc<Ring>, range: std::ops::Range<usize>) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.exps()[..range.start].iter().all(|&e| e == 0));
                debug_assert!(m.exps()[range.end..].iter().all(|&e| e == 0));
                (m.slice(range.clone()), c.clone())
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Canonical text form, e.g. `x^2 - 3/2*x*y + 1`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.fmt_with(&self.ring.vars))?;
            } else {
                write!(f, "{}*{}", abs, m.fmt_with(&self.ring.vars))?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.neg()))
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Multiplies two polynomials from the same ring.
pub fn poly_multiply(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.try_mul(g)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::Rational;
    use proptest::prelude::*;

    pub fn qq(vars: &[&str]) -> Arc<Ring> {
        Ring::new(Field::Rational, vars.iter().copied())
    }

    /// Tiny builder used by unit tests: terms as (coefficient, exponents).
    pub fn p(ring: &Arc<Ring>, terms: &[(i64, &[Exp])]) -> Polynomial {
        Polynomial::from_terms(
            ring,
            terms
                .iter()
                .map(|(c, e)| (Monomial::from_exps(e), ring.field.from_i64(*c)))
                .collect(),
        )
    }

    #[test]
    fn difference_of_squares() {
        let r = qq(&["x", "y"]);
        let f = p(&r, &[(1, &[1, 0]), (1, &[0, 1])]);
        let g = p(&r, &[(1, &[1, 0]), (-1, &[0, 1])]);
        assert_eq!((&f * &g).to_string(), "x^2 - y^2");
        assert!((&f * &Polynomial::zero(&r)).is_zero());
    }

    #[test]
    fn freshmans_dream_over_f3() {
        let r = Ring::new(Field::Prime(3), ["x"]);
        let f = p(&r, &[(1, &[1]), (1, &[0])]);
        let cube = &(&f * &f) * &f;
        assert_eq!(cube, p(&r, &[(1, &[3]), (1, &[0])]));
        assert_eq!(f.pow(3), cube);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = qq(&["x"]);
        let b = Ring::new(Field::Prime(5), ["x"]);
        let e = poly_multiply(&Polynomial::var(&a, 0), &Polynomial::var(&b, 0));
        assert!(matches!(e, Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn text_form() {
        let r = qq(&["x1", "x2", "x3"]);
        let f = Polynomial::from_terms(
            &r,
            vec![
                (
                    Monomial::from_exps(&[2, 0, 1]),
                    Field::Rational.from_i64(-1),
                ),
                (
                    Monomial::from_exps(&[0, 1, 0]),
                    Field::Rational.from_fraction(&3.into(), &2.into()).unwrap(),
                ),
                (
                    Monomial::from_exps(&[0, 0, 0]),
                    Field::Rational.from_i64(-7),
                ),
            ],
        );
        assert_eq!(f.to_string(), "-x1^2*x3 + 3/2*x2 - 7");
        let r5 = Ring::new(Field::Prime(5), ["x"]);
        assert_eq!(p(&r5, &[(-1, &[1])]).to_string(), "4*x");
    }

    #[test]
    fn homogenize_round_trip() {
        let r = qq(&["x", "y"]);
        let rh = r.extend(&[], &["h".into()]);
        let f = p(&r, &[(1, &[0, 2]), (-1, &[3, 0])]);
        let fh = f.homogenize(&rh);
        assert!(fh.is_homogeneous());
        assert_eq!(fh.dehomogenize(&r), f);
        assert_eq!(f.lowest_form(), p(&r, &[(1, &[0, 2])]));
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(i64, i64, [Exp; 3])>> {
        prop::collection::vec((-20i64..20, 1i64..5, [0u16..3, 0u16..3, 0u16..3]), 0..8)
    }

    fn build(r: &Arc<Ring>, t: &[(i64, i64, [Exp; 3])]) -> Polynomial {
        Polynomial::from_terms(
            r,
            t.iter()
                .map(|(n, d, e)| {
                    (
                        Monomial::from_exps(e),
                        Coeff::Q(Rational::from_i64(*n).mul(&Rational::from_i64(*d).inv())),
                    )
                })
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let r = qq(&["x", "y", "z"]);
            let (f, g, h) = (build(&r, &a), build(&r, &b), build(&r, &c));
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f + &g) - &g, f.clone());
            prop_assert!((&f * &g).len() <= f.len() * g.len());
        }
    }
}
