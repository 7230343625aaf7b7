//! Finite-dimensional quotients `k[x]/K` as vector spaces on their standard
//! monomials. Ideals containing `K` become subspaces, so colons and lengths
//! reduce to linear algebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::groebner::{standard_monomials, GroebnerBasis};
use crate::ideal::Ideal;
use crate::linalg::{normalize_row, Echelon, SparseRow};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Ring};

pub struct Artinian {
    ring: Arc<Ring>,
    modulus: Ideal,
    gb: Arc<GroebnerBasis>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `var_mult[i][b]`: coordinates of `x_i * basis[b]`.
    var_mult: Vec<Vec<SparseRow>>,
}

impl Artinian {
    pub fn new(modulus: &Ideal) -> Result<Artinian> {
        let gb = modulus.gb()?;
        let ring = modulus.ring().clone();
        let basis = standard_monomials(&gb.leading_monomials(), ring.nvars())
            .ok_or_else(|| Error::Precondition(format!("{modulus} is not zero-dimensional")))?;
        let index: HashMap<Monomial, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut a = Artinian {
            ring: ring.clone(),
            modulus: modulus.clone(),
            gb,
            basis,
            index,
            var_mult: Vec::new(),
        };
        let one = ring.field.one();
        let mut var_mult = Vec::with_capacity(ring.nvars());
        for i in 0..ring.nvars() {
            let x = Monomial::var(ring.nvars(), i);
            let col: Vec<SparseRow> = a
                .basis
                .iter()
                .map(|b| {
                    let m = b.mul(&x);
                    match a.index.get(&m) {
                        Some(&k) => vec![(k, one.clone())],
                        None => a.coords(&Polynomial::monomial(&ring, m, one.clone())),
                    }
                })
                .collect();
            var_mult.push(col);
        }
        a.var_mult = var_mult;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Coordinates of the normal form.
    pub fn coords(&self, f: &Polynomial) -> SparseRow {
        let r = self.gb.normal_form(f);
        normalize_row(
            r.terms()
                .iter()
                .map(|(m, c)| (self.index[m], c.clone()))
                .collect(),
        )
    }

    pub fn poly(&self, v: &[(usize, Coeff)]) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            v.iter()
                .map(|(i, c)| (self.basis[*i].clone(), c.clone()))
                .collect(),
        )
    }

    pub fn mul_var(&self, v: &[(usize, Coeff)], i: usize) -> SparseRow {
        let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
        for (b, c) in v {
            for (k, d) in &self.var_mult[i][*b] {
                let e = acc.entry(*k).or_insert_with(|| self.ring.field.zero());
                *e = e.add(&c.mul(d));
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn mul_monomial(&self, v: &[(usize, Coeff)], m: &Monomial) -> SparseRow {
        let mut cur = v.to_vec();
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                if cur.is_empty() {
                    return cur;
                }
                cur = self.mul_var(&cur, i);
            }
        }
        cur
    }

    pub fn mul_poly(&self, v: &[(usize, Coeff)], g: &Polynomial) -> SparseRow {
        let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
        for (m, c) in g.terms() {
            for (k, d) in self.mul_monomial(v, m) {
                let e = acc.entry(k).or_insert_with(|| self.ring.field.zero());
                *e = e.add(&c.mul(&d));
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// The image of the ideal generated by `gens`: the smallest subspace
    /// containing them and closed under multiplication by the variables.
    pub fn ideal_span(&self, gens: &[Polynomial]) -> Echelon {
        let mut e = Echelon::new();
        let mut queue: Vec<SparseRow> = gens.iter().map(|g| self.coords(g)).collect();
        while let Some(v) = queue.pop() {
            let r = e.reduce(&v);
            if r.is_empty() {
                continue;
            }
            e.insert(&r);
            for i in 0..self.ring.nvars() {
                let w = self.mul_var(&r, i);
                if !w.is_empty() {
                    queue.push(w);
                }
            }
        }
        e
    }

    /// Basis of `{u : u g ∈ target for every g}`.
    pub fn colon_space(&self, target: &Echelon, gens: &[Polynomial]) -> Vec<SparseRow> {
        let one = self.ring.field.one();
        let mut space: Vec<SparseRow> = (0..self.dim()).map(|i| vec![(i, one.clone())]).collect();
        let n = self.dim();
        for g in gens {
            if space.is_empty() {
                break;
            }
            // rows [image mod target | tag]; rows whose image part vanishes
            // after elimination give the kernel
            let mut e = Echelon::new();
            for (k, u) in space.iter().enumerate() {
                let mut row = target.reduce(&self.mul_poly(u, g));
                row.push((n + k, one.clone()));
                e.insert(&row);
            }
            let mut next = Vec::new();
            for row in e.reduced_rows() {
                if row[0].0 < n {
                    continue;
                }
                let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
                for (tag, c) in &row {
                    for (i, d) in &space[tag - n] {
                        let x = acc.entry(*i).or_insert_with(|| self.ring.field.zero());
                        *x = x.add(&c.mul(d));
                    }
                }
                next.push(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
            }
            space = next;
        }
        space
    }

    /// Kernel of multiplication by `f` on the quotient by `target`:
    /// `{u : u f ∈ target}`.
    pub fn colon_poly_space(&self, target: &Echelon, f: &Polynomial) -> Vec<SparseRow> {
        self.colon_space(target, std::slice::from_ref(f))
    }

    /// Rank of multiplication by `f`.
    pub fn mul_rank(&self, f: &Polynomial) -> usize {
        let one = self.ring.field.one();
        let mut e = Echelon::new();
        for i in 0..self.dim() {
            e.insert(&self.mul_poly(&[(i, one.clone())], f));
        }
        e.rank()
    }

    /// The ideal `K + (lifts of the given vectors)`.
    pub fn lift_ideal(&self, vectors: &[SparseRow]) -> Ideal {
        let mut gens: Vec<Polynomial> = self.gb.elements.clone();
        gens.extend(vectors.iter().map(|v| self.poly(v)));
        Ideal::new(&self.ring, gens)
    }
}

pub fn echelon(rows: &[SparseRow]) -> Echelon {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polys;

    #[test]
    fn colon_matches_groebner_colon() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let i = Ideal::new(&r, parse_polys(&r, "x^4, x^3*y, x*y^3, y^4").unwrap());
        let m = Ideal::new(&r, parse_polys(&r, "x, y").unwrap());
        let a = Artinian::new(&i).unwrap();
        assert_eq!(a.dim(), 11);
        let zero = Echelon::new();
        let space = a.colon_space(&zero, m.gens());
        let lin = a.lift_ideal(&space);
        assert!(lin.equals(&i.colon(&m).unwrap()).unwrap());
        // (x, y) spans everything except the constants
        assert_eq!(a.ideal_span(m.gens()).rank(), 10);
    }
}
