//! Ideals with cached Groebner bases, and the ideal arithmetic built on them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::groebner::{self, component, to_modvec, GroebnerBasis, ModVec, TermOrder};
use crate::monomial::MonomialOrder;
use crate::poly::{Polynomial, Ring};

#[derive(Clone)]
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    cache: Arc<RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis>>>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({})", self.gens_text().join(", "))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gb() {
            Ok(g) if g.elements.is_empty() => write!(f, "(0)"),
            Ok(g) => {
                let t: Vec<String> = g.elements.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", t.join(", "))
            }
            Err(_) => write!(f, "({})", self.gens_text().join(", ")),
        }
    }
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Ideal {
        for g in &gens {
            assert!(g.ring() == ring, "generator from a different ring");
        }
        Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    pub fn try_new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Ideal> {
        for g in &gens {
            ring.check_same(g.ring())?;
        }
        Ok(Ideal::new(ring, gens))
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![Polynomial::one(ring)])
    }

    /// The ideal of all variables.
    pub fn maximal(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(
            ring,
            (0..ring.nvars())
                .map(|i| Polynomial::var(ring, i))
                .collect(),
        )
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn gens_text(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }

    pub fn gb_in(&self, ord: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if let Some(g) = self.cache.read().unwrap().get(&ord) {
            return Ok(g.clone());
        }
        let g = Arc::new(groebner::buchberger_in(&self.ring, &self.gens, ord, None)?);
        self.cache.write().unwrap().insert(ord, g.clone());
        Ok(g)
    }

    /// Degrevlex basis.
    pub fn gb(&self) -> Result<Arc<GroebnerBasis>> {
        self.gb_in(MonomialOrder::DegRevLex)
    }

    /// The ideal generated by its own reduced degrevlex basis.
    pub fn reduced(&self) -> Result<Ideal> {
        let g = self.gb()?;
        let out = Ideal::new(&self.ring, g.elements.clone());
        out.cache
            .write()
            .unwrap()
            .insert(MonomialOrder::DegRevLex, g);
        Ok(out)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.gb()?.contains(f))
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        let g = self.gb()?;
        Ok(other.gens.iter().all(|f| g.contains(f)))
    }

    /// Equality of ideals (reduced bases agree).
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.ring.check_same(&other.ring)?;
        Ok(self.gb()?.elements == other.gb()?.elements)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.is_unit())
    }

    /// Krull dimension of the quotient; `None` for the unit ideal.
    pub fn dimension(&self) -> Result<Option<usize>> {
        Ok(self.gb()?.dimension())
    }

    /// `dim_k k[x]/I` when finite.
    pub fn colength(&self) -> Result<Option<u64>> {
        Ok(self.gb()?.standard_monomial_count())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_same(&other.ring)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ok(Ideal::new(&self.ring, g))
    }

    pub fn add_gens(&self, more: &[Polynomial]) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(more.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_same(&other.ring)?;
        let mut out: Vec<Polynomial> = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                let p = a.try_mul(b)?;
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        Ok(Ideal::new(&self.ring, out))
    }

    /// `I^n` for `n >= 1`, generated by the n-fold products of generators.
    pub fn power(&self, n: u32) -> Result<Ideal> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "ideal power 0: use the unit ideal explicitly".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// `I ∩ J` as the `t`-free part of `t I + (1 - t) J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_same(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let t_name = self.ring.fresh_name("t");
        let big = self.ring.extend(&[t_name], &[]);
        let t = Polynomial::var(&big, 0);
        let one_minus_t = &Polynomial::one(&big) - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.embed(&big, 1, 0));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.embed(&big, 1, 0));
        }
        let gb = groebner::buchberger_in(&big, &gens, MonomialOrder::Elimination(1), None)?;
        let n = self.ring.nvars();
        let kept: Vec<Polynomial> = gb
            .elements
            .iter()
            .filter(|e| e.terms().iter().all(|(m, _)| m.exps()[0] == 0))
            .map(|e| e.restrict(&self.ring, 1..n + 1))
            .collect();
        Ok(Ideal::new(&self.ring, kept))
    }

    /// `(I : f)`, read off from a position-over-term basis of the module
    /// generated by `[f | 1]` and `[g | 0]`.
    pub fn colon_poly(&self, f: &Polynomial) -> Result<Ideal> {
        self.ring.check_same(f.ring())?;
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        if self.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let cached = self
            .cache
            .read()
            .unwrap()
            .get(&MonomialOrder::DegRevLex)
            .cloned();
        let reduced;
        let f = match cached {
            Some(g) => {
                reduced = g.normal_form(f);
                if reduced.is_zero() {
                    return Ok(Ideal::unit(&self.ring));
                }
                &reduced
            }
            None => f,
        };
        let ord = TermOrder {
            mono: MonomialOrder::DegRevLex,
            shifts: vec![0, f.total_degree().unwrap_or(0) as i64],
            blocks: vec![1, 0],
        };
        let one = Polynomial::one(&self.ring);
        let mut vs = vec![pair_vec(f, &one, &ord)];
        for g in &self.gens {
            vs.push(to_modvec(g, 0, &ord));
        }
        let basis = groebner::engine::groebner(vs, &ord, self.ring.field, self.ring.nvars(), None)?;
        let gens = basis
            .iter()
            .filter(|v| v.lead().unwrap().comp == 1)
            .map(|v| component(v, 1, &self.ring))
            .collect();
        Ok(Ideal::new(&self.ring, gens))
    }

    /// `(I : J)`
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_same(&other.ring)?;
        let mut acc: Option<Ideal> = None;
        for f in &other.gens {
            let c = self.colon_poly(f)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// Stable value of `I ⊆ (I : J) ⊆ (I : J^2) ⊆ ...`.
    pub fn saturation(&self, other: &Ideal) -> Result<Ideal> {
        let mut cur = self.reduced()?;
        loop {
            let next = cur.colon(other)?.reduced()?;
            if next.equals(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `I ∩ k[remaining variables]`, as an ideal of the smaller ring.
    pub fn eliminate(&self, vars: &[usize]) -> Result<(Arc<Ring>, Ideal)> {
        let n = self.ring.nvars();
        let mut order: Vec<usize> = vars.to_vec();
        order.sort_unstable();
        order.dedup();
        let rest: Vec<usize> = (0..n).filter(|i| !order.contains(i)).collect();
        let small = Ring::new(
            self.ring.field,
            rest.iter().map(|&i| self.ring.vars[i].clone()),
        );
        if order.is_empty() {
            let gens = self.gens.iter().map(|g| g.restrict(&small, 0..n)).collect();
            return Ok((small.clone(), Ideal::new(&small, gens)));
        }
        // move the eliminated variables to the front
        let perm: Vec<usize> = order.iter().chain(rest.iter()).copied().collect();
        let big = Ring::new(
            self.ring.field,
            perm.iter().map(|&i| self.ring.vars[i].clone()),
        );
        let images: Vec<Polynomial> = (0..n)
            .map(|i| Polynomial::var(&big, perm.iter().position(|&p| p == i).unwrap()))
            .collect();
        let gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|g| g.substitute(&big, &images))
            .collect();
        let b = order.len();
        let gb = groebner::buchberger_in(&big, &gens, MonomialOrder::Elimination(b), None)?;
        let kept = gb
            .elements
            .iter()
            .filter(|e| {
                e.terms()
                    .iter()
                    .all(|(m, _)| m.exps()[..b].iter().all(|&x| x == 0))
            })
            .map(|e| e.restrict(&small, b..n))
            .collect();
        Ok((small.clone(), Ideal::new(&small, kept)))
    }

    /// Whether `f` lies in the radical, by the Rabinowitsch trick.
    pub fn radical_contains(&self, f: &Polynomial) -> Result<bool> {
        let z = self.ring.fresh_name("z");
        let big = self.ring.extend(&[], &[z]);
        let zv = Polynomial::var(&big, self.ring.nvars());
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|g| g.embed(&big, 0, 1)).collect();
        gens.push(&Polynomial::one(&big) - &(&zv * &f.embed(&big, 0, 1)));
        Ideal::new(&big, gens).is_unit()
    }

    /// Whether `V(I)` is the origin alone: dimension zero and every variable
    /// in the radical.
    pub fn supported_at_origin(&self) -> Result<bool> {
        if self.dimension()? != Some(0) {
            return Ok(false);
        }
        for i in 0..self.ring.nvars() {
            if !self.radical_contains(&Polynomial::var(&self.ring, i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `I ⊆ J` after localizing at the origin: every generator `u` of `I`
    /// has `(J : u)` not contained in the maximal ideal.
    pub fn locally_contained_in(&self, other: &Ideal) -> Result<bool> {
        let g = other.gb()?;
        for u in &self.gens {
            if g.contains(u) {
                continue;
            }
            if !other.colon_poly(u)?.escapes_origin()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn locally_equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.locally_contained_in(other)? && other.locally_contained_in(self)?)
    }

    /// Some element has a nonzero constant term, i.e. the ideal becomes the
    /// unit ideal at the origin.
    pub fn escapes_origin(&self) -> Result<bool> {
        Ok(self.gens.iter().any(|g| !g.constant_term().is_zero()))
    }
}

/// `[f | g]` as a rank-two vector.
fn pair_vec(f: &Polynomial, g: &Polynomial, ord: &TermOrder) -> ModVec {
    let mut terms = to_modvec(f, 0, ord).terms;
    terms.extend(to_modvec(g, 1, ord).terms);
    ModVec::from_terms(terms, ord)
}

/// `I^n`; `n = 0` is an error.
pub fn ideal_power(i: &Ideal, n: u32) -> Result<Ideal> {
    i.power(n)
}

pub fn colon(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.colon(j)
}

pub fn intersect(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.intersect(j)
}

pub fn saturation(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.saturation(j)
}

pub fn eliminate(i: &Ideal, vars: &[usize]) -> Result<(Arc<Ring>, Ideal)> {
    i.eliminate(vars)
}

/// `dim_k k[x]/(q + J)`, refusing when the quotient has points away from
/// the origin (its affine length would then overcount the local one).
pub fn colength_at_origin(q: &Ideal, j: &Ideal) -> Result<u64> {
    let s = q.sum(j)?;
    if !s.supported_at_origin()? {
        return Err(Error::SupportNotAtOrigin(format!("{}", s)));
    }
    Ok(s.colength()?.expect("zero-dimensional"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polys;

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(Field::Rational, vars.iter().copied())
    }

    fn ideal(r: &Arc<Ring>, s: &str) -> Ideal {
        Ideal::new(r, parse_polys(r, s).unwrap())
    }

    fn same(a: &Ideal, b: &Ideal) -> bool {
        a.equals(b).unwrap()
    }

    #[test]
    fn powers() {
        let r = ring(&["x", "y"]);
        assert!(same(
            &ideal(&r, "x, y").power(2).unwrap(),
            &ideal(&r, "x^2, x*y, y^2")
        ));
        assert!(same(
            &ideal(&r, "x^2, y").power(1).unwrap(),
            &ideal(&r, "x^2, y")
        ));
        assert!(same(
            &ideal(&r, "x^2, y").power(3).unwrap(),
            &ideal(&r, "x^6, x^4*y, x^2*y^2, y^3")
        ));
        assert!(ideal(&r, "x").power(0).is_err());
    }

    #[test]
    fn colons() {
        let r = ring(&["x", "y"]);
        assert!(same(
            &ideal(&r, "x^2").colon(&ideal(&r, "x")).unwrap(),
            &ideal(&r, "x")
        ));
        let i = ideal(&r, "x^4, x^3*y, x*y^3, y^4");
        assert!(same(&i.colon(&Ideal::unit(&r)).unwrap(), &i));
        let c = i.colon(&ideal(&r, "x, y")).unwrap();
        assert!(same(&c, &ideal(&r, "x^3, x^2*y^2, y^3")));
        assert!(c
            .product(&ideal(&r, "x, y"))
            .unwrap()
            .gens()
            .iter()
            .all(|g| i.contains(g).unwrap()));
    }

    #[test]
    fn intersections() {
        let r = ring(&["x", "y"]);
        assert!(same(
            &ideal(&r, "x").intersect(&ideal(&r, "y")).unwrap(),
            &ideal(&r, "x*y")
        ));
        let i = ideal(&r, "x^2 + y, x*y");
        assert!(same(&i.intersect(&i).unwrap(), &i));
        assert!(same(
            &ideal(&r, "x^2, y").intersect(&ideal(&r, "x, y^2")).unwrap(),
            &ideal(&r, "x^2, x*y, y^2")
        ));
    }

    #[test]
    fn saturations() {
        let r = ring(&["x", "y"]);
        assert!(same(
            &ideal(&r, "x^2*y").saturation(&ideal(&r, "y")).unwrap(),
            &ideal(&r, "x^2")
        ));
        let i = ideal(&r, "x^2, x*y");
        assert!(same(&i.saturation(&Ideal::unit(&r)).unwrap(), &i));
        assert!(Ideal::unit(&r)
            .equals(&i.saturation(&ideal(&r, "x")).unwrap())
            .unwrap());
    }

    #[test]
    fn eliminations() {
        let r = ring(&["t", "x", "y"]);
        let (small, e) = ideal(&r, "t - x, t^2 - y").eliminate(&[0]).unwrap();
        assert!(same(&e, &ideal(&small, "x^2 - y")));
        let (_, e) = ideal(&r, "x*t - 1").eliminate(&[0]).unwrap();
        assert!(e.is_zero() || e.gb().unwrap().is_zero_ideal());
    }

    #[test]
    fn colengths() {
        let r = ring(&["x", "y"]);
        let zero = Ideal::zero(&r);
        assert_eq!(
            colength_at_origin(&zero, &ideal(&r, "x, y").power(2).unwrap()).unwrap(),
            3
        );
        assert_eq!(
            colength_at_origin(&zero, &ideal(&r, "x^2 - y^3, y^4")).unwrap(),
            8
        );
        assert_eq!(
            colength_at_origin(&ideal(&r, "y^2 - x^3"), &ideal(&r, "x, y")).unwrap(),
            1
        );
        assert!(matches!(
            colength_at_origin(&zero, &ideal(&r, "x^2 - x, y")),
            Err(Error::SupportNotAtOrigin(_))
        ));
    }

    #[test]
    fn local_containment_ignores_far_components() {
        let r = ring(&["x", "y"]);
        // (x) and (x*(x-1)) agree at the origin
        let a = ideal(&r, "x");
        let b = ideal(&r, "x^2 - x");
        assert!(a.locally_equals(&b).unwrap());
        assert!(!a.equals(&b).unwrap());
        assert!(!ideal(&r, "x")
            .locally_contained_in(&ideal(&r, "x^2"))
            .unwrap());
    }
}
