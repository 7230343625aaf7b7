//! Reduced Groebner bases of ideals, normal forms and first syzygies.

pub mod engine;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Ring};

pub use engine::{MTerm, ModVec, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub ring: Arc<Ring>,
    pub order: MonomialOrder,
    /// Sorted ascending by leading monomial.
    pub elements: Vec<Polynomial>,
    pub reduced: bool,
}

pub(crate) fn to_modvec(f: &Polynomial, comp: usize, ord: &TermOrder) -> ModVec {
    ModVec::from_terms(
        f.terms()
            .iter()
            .map(|(m, c)| MTerm {
                mono: m.clone(),
                comp,
                coeff: c.clone(),
            })
            .collect(),
        ord,
    )
}

/// Component `comp` of a vector as a polynomial.
pub(crate) fn component(v: &ModVec, comp: usize, ring: &Arc<Ring>) -> Polynomial {
    Polynomial::from_terms(
        ring,
        v.terms
            .iter()
            .filter(|t| t.comp == comp)
            .map(|t| (t.mono.clone(), t.coeff.clone()))
            .collect(),
    )
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], ord: MonomialOrder) -> Result<GroebnerBasis> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Err(Error::InvalidInput("empty generator list".into())),
    };
    buchberger_in(&ring, gens, ord, None)
}

/// As [`buchberger`], with an explicit ring (so the list may be empty) and
/// an optional cap on S-pair reductions.
pub fn buchberger_in(
    ring: &Arc<Ring>,
    gens: &[Polynomial],
    ord: MonomialOrder,
    step_limit: Option<usize>,
) -> Result<GroebnerBasis> {
    for g in gens {
        ring.check_same(g.ring())?;
    }
    let tord = TermOrder::ideal(ord);
    let vs: Vec<ModVec> = gens.iter().map(|g| to_modvec(g, 0, &tord)).collect();
    let basis = engine::groebner(vs, &tord, ring.field, ring.nvars(), step_limit)?;
    let elements: Vec<Polynomial> = basis.iter().map(|v| component(v, 0, ring)).collect();
    let gb = GroebnerBasis {
        ring: ring.clone(),
        order: ord,
        elements,
        reduced: true,
    };
    for g in gens {
        if !gb.contains(g) {
            return Err(Error::Certificate(format!(
                "generator {g} not in its own basis"
            )));
        }
    }
    Ok(gb)
}

/// Remainder of `f` on division by `G`.
pub fn normal_form(f: &Polynomial, g: &GroebnerBasis) -> Polynomial {
    g.normal_form(f)
}

impl GroebnerBasis {
    fn term_order(&self) -> TermOrder {
        TermOrder::ideal(self.order)
    }

    fn vectors(&self, ord: &TermOrder) -> Vec<ModVec> {
        self.elements.iter().map(|e| to_modvec(e, 0, ord)).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let ord = self.term_order();
        let (_, r) = engine::divide(&to_modvec(f, 0, &ord), &self.vectors(&ord), &ord);
        component(&r, 0, &self.ring)
    }

    /// Quotients and remainder: `f = sum q_i g_i + r`.
    pub fn divide(&self, f: &Polynomial) -> (Vec<Polynomial>, Polynomial) {
        let ord = self.term_order();
        let (qs, r) = engine::divide(&to_modvec(f, 0, &ord), &self.vectors(&ord), &ord);
        let qs = qs
            .into_iter()
            .map(|q| Polynomial::from_terms(&self.ring, q))
            .collect();
        (qs, component(&r, 0, &self.ring))
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant() && !self.elements[0].is_zero()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|e| e.leading_term_in(self.order).unwrap().0.clone())
            .collect()
    }

    /// Every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let ord = self.term_order();
        let vs = self.vectors(&ord);
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let (a, b) = (vs[i].lead().unwrap(), vs[j].lead().unwrap());
                let l = a.mono.lcm(&b.mono);
                let s = vs[i].mul_term(&a.coeff.inv(), &l.div(&a.mono)).axpy(
                    &b.coeff.inv().neg(),
                    &l.div(&b.mono),
                    &vs[j],
                    &ord,
                );
                if !engine::divide(&s, &vs, &ord).1.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Krull dimension of `k[x]/(G)`: the largest set of variables none of
    /// whose pure monomials lie in the initial ideal.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        Some(initial_ideal_dimension(
            &self.leading_monomials(),
            self.ring.nvars(),
        ))
    }

    /// Number of standard monomials, if finite.
    pub fn standard_monomial_count(&self) -> Option<u64> {
        if self.is_unit() {
            return Some(0);
        }
        let lead = self.leading_monomials();
        count_standard_monomials(&lead, self.ring.nvars())
    }
}

/// Largest subset `S` of variables such that no monomial of `lead` is
/// supported inside `S`.
pub fn initial_ideal_dimension(lead: &[Monomial], nvars: usize) -> usize {
    let supports: Vec<u64> = lead.iter().map(engine::divmask).collect();
    let mut best = 0;
    // depth-first search over independent sets, largest first
    fn search(
        i: usize,
        nvars: usize,
        chosen: u64,
        size: usize,
        supports: &[u64],
        best: &mut usize,
    ) {
        if size + (nvars - i) <= *best {
            return;
        }
        if i == nvars {
            *best = size;
            return;
        }
        let with = chosen | (1 << i);
        if supports.iter().all(|&s| s & !with != 0) {
            search(i + 1, nvars, with, size + 1, supports, best);
        }
        search(i + 1, nvars, chosen, size, supports, best);
    }
    assert!(nvars <= 64, "dimension search limited to 64 variables");
    search(0, nvars, 0, 0, &supports, &mut best);
    best
}

/// Counts monomials outside the monomial ideal, `None` if infinitely many.
pub fn count_standard_monomials(lead: &[Monomial], nvars: usize) -> Option<u64> {
    standard_monomials(lead, nvars).map(|v| v.len() as u64)
}

/// Monomials outside the monomial ideal generated by `lead`, ascending in
/// degrevlex; `None` if there are infinitely many.
pub fn standard_monomials(lead: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    if lead.iter().any(|m| m.is_one()) {
        return Some(Vec::new());
    }
    if initial_ideal_dimension(lead, nvars) > 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    fn rec(i: usize, cur: &mut Vec<u16>, lead: &[Monomial], out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::from_exps(cur));
            return;
        }
        // raising one exponent keeps a monomial inside the ideal, so stop at
        // the first exponent that lands there (later coordinates still zero)
        loop {
            let m = Monomial::from_exps(cur);
            if lead.iter().any(|l| l.divides(&m)) {
                break;
            }
            rec(i + 1, cur, lead, out);
            cur[i] += 1;
        }
        cur[i] = 0;
    }
    rec(0, &mut cur, lead, &mut out);
    out.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(a, b));
    Some(out)
}

/// Columns generating the syzygies of a basis, as coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyMatrix {
    pub columns: Vec<Vec<Polynomial>>,
    pub twists: Vec<i64>,
}

/// First syzygies of a Groebner basis from the division transcripts of its
/// S-polynomials.
pub fn syzygies(g: &GroebnerBasis) -> SyzygyMatrix {
    let ring = &g.ring;
    let n = g.elements.len();
    let ord = TermOrder::ideal(g.order);
    let vs = g.vectors(&ord);
    let mut columns = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (vs[i].lead().unwrap(), vs[j].lead().unwrap());
            let l = a.mono.lcm(&b.mono);
            let ca = a.coeff.inv();
            let cb = b.coeff.inv().neg();
            let (ma, mb) = (l.div(&a.mono), l.div(&b.mono));
            let s = vs[i].mul_term(&ca, &ma).axpy(&cb, &mb, &vs[j], &ord);
            let (qs, r) = engine::divide(&s, &vs, &ord);
            debug_assert!(r.is_zero());
            let mut col: Vec<Polynomial> = qs
                .into_iter()
                .map(|q| -Polynomial::from_terms(ring, q))
                .collect();
            col[i] = &col[i] + &Polynomial::monomial(ring, ma, ca);
            col[j] = &col[j] + &Polynomial::monomial(ring, mb, cb);
            columns.push(col);
        }
    }
    let twists = g
        .elements
        .iter()
        .map(|e| e.total_degree().unwrap_or(0) as i64)
        .collect();
    SyzygyMatrix { columns, twists }
}

impl SyzygyMatrix {
    /// Checks `sum_i column[i] * basis[i] = 0` for every column.
    pub fn annihilates(&self, basis: &[Polynomial]) -> bool {
        self.columns.iter().all(|col| {
            col.iter()
                .zip(basis)
                .fold(Polynomial::zero(basis[0].ring()), |acc, (c, b)| {
                    &acc + &(c * b)
                })
                .is_zero()
        })
    }
}
