//! Buchberger's algorithm on vectors of polynomials.
//!
//! Ideals are the rank-one case. Module orders combine a monomial order with
//! per-component degree shifts and a block label: components in a higher
//! block dominate (position over term), inside a block terms compare by
//! shifted monomial first and component index second.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    pub mono: MonomialOrder,
    pub shifts: Vec<i64>,
    pub blocks: Vec<u32>,
}

impl TermOrder {
    pub fn ideal(mono: MonomialOrder) -> TermOrder {
        TermOrder {
            mono,
            shifts: vec![0],
            blocks: vec![0],
        }
    }

    /// Term over position with the given degree shifts.
    pub fn graded(mono: MonomialOrder, shifts: Vec<i64>) -> TermOrder {
        let blocks = vec![0; shifts.len()];
        TermOrder {
            mono,
            shifts,
            blocks,
        }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, ca: usize, b: &Monomial, cb: usize) -> Ordering {
        self.blocks[ca]
            .cmp(&self.blocks[cb])
            .then_with(|| {
                self.mono
                    .cmp_shifted(a, self.shifts[ca], b, self.shifts[cb])
            })
            .then_with(|| cb.cmp(&ca))
    }

    #[inline]
    pub fn cmp_terms(&self, a: &MTerm, b: &MTerm) -> Ordering {
        self.cmp(&a.mono, a.comp, &b.mono, b.comp)
    }

    #[inline]
    pub fn degree(&self, t: &MTerm) -> i64 {
        t.mono.degree() as i64 + self.shifts[t.comp]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MTerm {
    pub mono: Monomial,
    pub comp: usize,
    pub coeff: Coeff,
}

/// A vector of polynomials as a term list sorted descending in some
/// [`TermOrder`]. The order is not stored; callers keep it alongside.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModVec {
    pub terms: Vec<MTerm>,
}

impl ModVec {
    pub fn zero() -> ModVec {
        ModVec { terms: Vec::new() }
    }

    /// Normalizes arbitrary terms: merges repeats, drops zeros, sorts.
    pub fn from_terms(mut terms: Vec<MTerm>, ord: &TermOrder) -> ModVec {
        terms.sort_by(|a, b| ord.cmp_terms(b, a));
        let mut out: Vec<MTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.comp == t.comp && last.mono == t.mono => {
                    last.coeff = last.coeff.add(&t.coeff);
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                }
                _ => {
                    if !t.coeff.is_zero() {
                        out.push(t)
                    }
                }
            }
        }
        ModVec { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&MTerm> {
        self.terms.first()
    }

    pub fn resort(&self, ord: &TermOrder) -> ModVec {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ord.cmp_terms(b, a));
        ModVec { terms }
    }

    pub fn scale(&self, c: &Coeff) -> ModVec {
        if c.is_zero() {
            return ModVec::zero();
        }
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| MTerm {
                    mono: t.mono.clone(),
                    comp: t.comp,
                    coeff: t.coeff.mul(c),
                })
                .collect(),
        }
    }

    pub fn monic(&self) -> ModVec {
        match self.lead() {
            Some(t) if !t.coeff.is_one() => self.scale(&t.coeff.inv()),
            _ => self.clone(),
        }
    }

    /// `c * m * self`; monomial multiplication preserves the order.
    pub fn mul_term(&self, c: &Coeff, m: &Monomial) -> ModVec {
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| MTerm {
                    mono: t.mono.mul(m),
                    comp: t.comp,
                    coeff: t.coeff.mul(c),
                })
                .collect(),
        }
    }

    /// `self + c * m * other`.
    pub fn axpy(&self, c: &Coeff, m: &Monomial, other: &ModVec, ord: &TermOrder) -> ModVec {
        let a = &self.terms;
        let b = &other.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Monomial> = b.first().map(|t| t.mono.mul(m));
        while i < a.len() || j < b.len() {
            let o = match (i < a.len(), &bj) {
                (false, _) => Ordering::Less,
                (true, None) => Ordering::Greater,
                (true, Some(bm)) => ord.cmp(&a[i].mono, a[i].comp, bm, b[j].comp),
            };
            match o {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(MTerm {
                        mono: bj.take().unwrap(),
                        comp: b[j].comp,
                        coeff: b[j].coeff.mul(c),
                    });
                    j += 1;
                    bj = b.get(j).map(|t| t.mono.mul(m));
                }
                Ordering::Equal => {
                    let coeff = a[i].coeff.add(&b[j].coeff.mul(c));
                    if !coeff.is_zero() {
                        out.push(MTerm {
                            mono: a[i].mono.clone(),
                            comp: a[i].comp,
                            coeff,
                        });
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|t| t.mono.mul(m));
                }
            }
        }
        ModVec { terms: out }
    }

    pub fn add(&self, other: &ModVec, ord: &TermOrder) -> ModVec {
        let one = match other.terms.first().or(self.terms.first()) {
            Some(t) => t.coeff.field().one(),
            None => return ModVec::zero(),
        };
        let m = Monomial::one(
            self.terms
                .first()
                .or(other.terms.first())
                .unwrap()
                .mono
                .nvars(),
        );
        self.axpy(&one, &m, other, ord)
    }

    /// Largest shifted degree among the terms.
    pub fn max_degree(&self, ord: &TermOrder) -> i64 {
        self.terms.iter().map(|t| ord.degree(t)).max().unwrap_or(0)
    }

    /// Components that actually occur.
    pub fn components(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.terms.iter().map(|t| t.comp).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

#[inline]
pub(crate) fn divmask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            mask |= 1 << (i % 64);
        }
    }
    mask
}

#[derive(Clone, Debug)]
struct Elem {
    v: ModVec,
    mask: u64,
    sugar: i64,
    live: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    sugar: i64,
    deg: i64,
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Incremental Buchberger state.
pub struct Engine<'o> {
    ord: &'o TermOrder,
    field: Field,
    nvars: usize,
    elems: Vec<Elem>,
    pairs: BTreeSet<Pair>,
    product_criterion: bool,
    steps: usize,
    max_steps: Option<usize>,
}

impl<'o> Engine<'o> {
    pub fn new(ord: &'o TermOrder, field: Field, nvars: usize) -> Engine<'o> {
        Engine {
            ord,
            field,
            nvars,
            elems: Vec::new(),
            pairs: BTreeSet::new(),
            product_criterion: ord.rank() == 1,
            steps: 0,
            max_steps: None,
        }
    }

    /// Abort with a budget error after this many S-pair reductions.
    pub fn with_step_limit(mut self, limit: Option<usize>) -> Self {
        self.max_steps = limit;
        self
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn order(&self) -> &TermOrder {
        self.ord
    }

    /// Reduces `v` fully and inserts it if nonzero. Returns whether it was
    /// inserted.
    pub fn add(&mut self, v: ModVec) -> bool {
        let sugar = v.max_degree(self.ord);
        let (r, sugar) = self.reduce_tracking(v, sugar, true);
        if r.is_zero() {
            return false;
        }
        self.insert(r.monic(), sugar);
        true
    }

    /// Adds every generator, then completes the basis.
    pub fn add_all(&mut self, gens: impl IntoIterator<Item = ModVec>) -> Result<()> {
        for g in gens {
            self.add(g);
        }
        self.run(None)
    }

    /// Processes pairs whose sugar does not exceed `limit`.
    pub fn run(&mut self, limit: Option<i64>) -> Result<()> {
        while let Some(p) = self.pairs.first().cloned() {
            if limit.is_some_and(|l| p.sugar > l) {
                break;
            }
            self.pairs.remove(&p);
            self.steps += 1;
            if let Some(max) = self.max_steps {
                if self.steps > max {
                    return Err(Error::Budget(format!(
                        "Groebner basis exceeded {max} S-pair reductions"
                    )));
                }
            }
            let s = self.spoly(&p);
            let (r, sugar) = self.reduce_tracking(s, p.sugar, true);
            if !r.is_zero() {
                self.insert(r.monic(), sugar);
            }
        }
        Ok(())
    }

    /// Smallest sugar among pending pairs.
    pub fn next_sugar(&self) -> Option<i64> {
        self.pairs.first().map(|p| p.sugar)
    }

    fn spoly(&self, p: &Pair) -> ModVec {
        let (a, b) = (&self.elems[p.i].v, &self.elems[p.j].v);
        let la = &a.lead().unwrap().mono;
        let lb = &b.lead().unwrap().mono;
        let one = self.field.one();
        let fa = a.mul_term(&one, &p.lcm.div(la));
        fa.axpy(&one.neg(), &p.lcm.div(lb), b, self.ord)
    }

    fn find_reducer(&self, t: &MTerm) -> Option<usize> {
        let mask = divmask(&t.mono);
        self.elems.iter().position(|e| {
            if !e.live || e.mask & !mask != 0 {
                return false;
            }
            let l = e.v.lead().unwrap();
            l.comp == t.comp && l.mono.divides(&t.mono)
        })
    }

    /// Normal form with respect to the live elements.
    pub fn reduce(&self, v: ModVec) -> ModVec {
        self.reduce_tracking(v, 0, true).0
    }

    fn reduce_tracking(&self, mut v: ModVec, mut sugar: i64, full: bool) -> (ModVec, i64) {
        // terms before `pos` are irreducible
        let mut pos = 0;
        while pos < v.terms.len() {
            let t = &v.terms[pos];
            match self.find_reducer(t) {
                Some(k) => {
                    let e = &self.elems[k];
                    let m = t.mono.div(&e.v.lead().unwrap().mono);
                    sugar = sugar.max(m.degree() as i64 + e.sugar);
                    let c = t.coeff.neg();
                    // the leading terms cancel; skip them in the merge
                    let rest = ModVec {
                        terms: v.terms[pos + 1..].to_vec(),
                    };
                    let tail = ModVec {
                        terms: e.v.terms[1..].to_vec(),
                    };
                    let merged = rest.axpy(&c, &m, &tail, self.ord);
                    v.terms.truncate(pos);
                    v.terms.extend(merged.terms);
                }
                None => {
                    if !full {
                        break;
                    }
                    pos += 1;
                }
            }
        }
        (v, sugar)
    }

    fn insert(&mut self, v: ModVec, sugar: i64) {
        let k = self.elems.len();
        let lt = v.lead().unwrap().clone();
        let ord = self.ord;

        // candidate pairs with every live element in the same component
        let mut cand: Vec<(usize, Monomial, bool)> = Vec::new();
        for (i, e) in self.elems.iter().enumerate() {
            if !e.live {
                continue;
            }
            let l = e.v.lead().unwrap();
            if l.comp != lt.comp {
                continue;
            }
            let coprime = self.product_criterion && l.mono.is_coprime(&lt.mono);
            cand.push((i, l.mono.lcm(&lt.mono), coprime));
        }

        // Gebauer-Moeller: chain criterion on new pairs
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        let mut rest = cand;
        while !rest.is_empty() {
            let p = rest.remove(0);
            let dominated =
                rest.iter().any(|q| q.1.divides(&p.1)) || kept.iter().any(|q| q.1.divides(&p.1));
            if p.2 || !dominated {
                kept.push(p);
            }
        }
        kept.retain(|p| !p.2);

        // chain criterion on old pairs
        let elems = &self.elems;
        self.pairs.retain(|p| {
            let l = elems[p.i].v.lead().unwrap();
            if l.comp != lt.comp || !lt.mono.divides(&p.lcm) {
                return true;
            }
            let li = l.mono.lcm(&lt.mono);
            let lj = elems[p.j].v.lead().unwrap().mono.lcm(&lt.mono);
            li == p.lcm || lj == p.lcm
        });

        // superseded leading terms
        let mask = divmask(&lt.mono);
        for e in self.elems.iter_mut() {
            if e.live {
                let l = e.v.lead().unwrap();
                if l.comp == lt.comp && mask & !e.mask == 0 && lt.mono.divides(&l.mono) {
                    e.live = false;
                }
            }
        }

        let lt_deg = lt.mono.degree() as i64;
        for (i, lcm, _) in kept {
            let ei = &self.elems[i];
            let li = ei.v.lead().unwrap().mono.degree() as i64;
            let l = lcm.degree() as i64;
            let s = (ei.sugar + l - li).max(sugar + l - lt_deg);
            self.pairs.insert(Pair {
                sugar: s,
                deg: l + ord.shifts[lt.comp],
                i,
                j: k,
                lcm,
            });
        }
        self.elems.push(Elem {
            mask: divmask(&lt.mono),
            v,
            sugar,
            live: true,
        });
    }

    /// Current live elements (a Groebner basis once `run` has finished).
    pub fn live(&self) -> impl Iterator<Item = &ModVec> {
        self.elems.iter().filter(|e| e.live).map(|e| &e.v)
    }

    /// The reduced basis, sorted ascending by leading term.
    pub fn reduced_basis(&self) -> Vec<ModVec> {
        let live: Vec<usize> = (0..self.elems.len())
            .filter(|&i| self.elems[i].live)
            .collect();
        let mut out: Vec<ModVec> = Vec::with_capacity(live.len());
        for &i in &live {
            let v = &self.elems[i].v;
            let head = v.terms[0].clone();
            let tail = ModVec {
                terms: v.terms[1..].to_vec(),
            };
            let tail = self.reduce(tail);
            let mut terms = vec![head];
            terms.extend(tail.terms);
            out.push(ModVec { terms }.monic());
        }
        let ord = self.ord;
        out.sort_by(|a, b| ord.cmp_terms(a.lead().unwrap(), b.lead().unwrap()));
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// Reduced Groebner basis of the given vectors.
pub fn groebner(
    gens: Vec<ModVec>,
    ord: &TermOrder,
    field: Field,
    nvars: usize,
    step_limit: Option<usize>,
) -> Result<Vec<ModVec>> {
    let mut e = Engine::new(ord, field, nvars).with_step_limit(step_limit);
    let mut gens: Vec<ModVec> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    // ascending sugar keeps intermediate growth down
    gens.sort_by_key(|g| g.max_degree(ord));
    e.add_all(gens)?;
    Ok(e.reduced_basis())
}

/// Division by a basis, recording the quotient of every basis element.
pub fn divide(
    v: &ModVec,
    basis: &[ModVec],
    ord: &TermOrder,
) -> (Vec<Vec<(Monomial, Coeff)>>, ModVec) {
    let mut quotients: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); basis.len()];
    let masks: Vec<u64> = basis
        .iter()
        .map(|b| divmask(&b.lead().unwrap().mono))
        .collect();
    let mut v = v.clone();
    let mut pos = 0;
    while pos < v.terms.len() {
        let t = &v.terms[pos];
        let mask = divmask(&t.mono);
        let hit = basis.iter().enumerate().position(|(k, b)| {
            let l = b.lead().unwrap();
            masks[k] & !mask == 0 && l.comp == t.comp && l.mono.divides(&t.mono)
        });
        match hit {
            Some(k) => {
                let l = basis[k].lead().unwrap();
                let m = t.mono.div(&l.mono);
                let c = t.coeff.div(&l.coeff);
                let rest = ModVec {
                    terms: v.terms[pos + 1..].to_vec(),
                };
                let tail = ModVec {
                    terms: basis[k].terms[1..].to_vec(),
                };
                let merged = rest.axpy(&c.neg(), &m, &tail, ord);
                v.terms.truncate(pos);
                v.terms.extend(merged.terms);
                quotients[k].push((m, c));
            }
            None => pos += 1,
        }
    }
    (quotients, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: i64, e: &[u16], comp: usize) -> MTerm {
        MTerm {
            mono: Monomial::from_exps(e),
            comp,
            coeff: Field::Rational.from_i64(c),
        }
    }

    #[test]
    fn axpy_cancels() {
        let ord = TermOrder::ideal(MonomialOrder::DegRevLex);
        let a = ModVec::from_terms(vec![t(1, &[2, 0], 0), t(1, &[0, 1], 0)], &ord);
        let b = ModVec::from_terms(vec![t(1, &[1, 0], 0)], &ord);
        let r = a.axpy(
            &Field::Rational.from_i64(-1),
            &Monomial::from_exps(&[1, 0]),
            &b,
            &ord,
        );
        assert_eq!(r.terms, vec![t(1, &[0, 1], 0)]);
    }

    #[test]
    fn position_over_term_blocks() {
        let ord = TermOrder {
            mono: MonomialOrder::DegRevLex,
            shifts: vec![0, 0],
            blocks: vec![1, 0],
        };
        assert_eq!(
            ord.cmp(&Monomial::from_exps(&[0]), 0, &Monomial::from_exps(&[5]), 1),
            Ordering::Greater
        );
    }

    #[test]
    fn module_basis_finds_syzygy() {
        // [x | 1], [y | 0] with the first component dominating: the basis
        // must contain an element of the form [0 | y] (syzygy of (x, y) in the tracking slot)
        let ord = TermOrder {
            mono: MonomialOrder::DegRevLex,
            shifts: vec![0, 0],
            blocks: vec![1, 0],
        };
        let g = vec![
            ModVec::from_terms(vec![t(1, &[1, 0], 0), t(1, &[0, 0], 1)], &ord),
            ModVec::from_terms(vec![t(1, &[0, 1], 0)], &ord),
        ];
        let gb = groebner(g, &ord, Field::Rational, 2, None).unwrap();
        assert!(gb.iter().any(|v| v.terms == vec![t(1, &[0, 1], 1)]));
    }
}
