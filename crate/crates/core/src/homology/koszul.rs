//! Grade of an ideal on a cyclic module `P/J`.
//!
//! The grade is `n - max{j : H_j(f; M) != 0}`. It is found here by depth
//! sensitivity: `H_n(f; M) = (0 :_M (f))`, and a regular element `h` in
//! `(f)` lowers the top nonvanishing index by exactly one on `M/hM`.

use std::collections::HashMap;

use crate::config::{random_coeff, Config};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::linalg::{rank, SparseRow};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// `P/J`, with colon tests done either in `P` or after localizing at the
/// origin. Affine tests are exact when every associated prime of every
/// quotient met along the way lies inside the maximal ideal of the origin,
/// which holds for data homogeneous in a grading where the remaining
/// variables are nilpotent.
///
/// `weights`, when present, is a grading in which the relations are
/// homogeneous; it lets annihilated elements be searched for degree by
/// degree.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub relations: Ideal,
    pub local: bool,
    pub weights: Option<Vec<u32>>,
}

impl CyclicModule {
    pub fn graded(relations: Ideal) -> CyclicModule {
        let weights = vec![1; relations.ring().nvars()];
        CyclicModule::graded_by(relations, weights)
    }

    /// Variables of weight zero must be nilpotent modulo the relations for
    /// the degree search to be used; otherwise it is skipped.
    pub fn graded_by(relations: Ideal, weights: Vec<u32>) -> CyclicModule {
        CyclicModule {
            relations,
            local: false,
            weights: Some(weights),
        }
    }

    pub fn local(relations: Ideal) -> CyclicModule {
        CyclicModule {
            relations,
            local: true,
            weights: None,
        }
    }

    fn contained(&self, a: &Ideal, b: &Ideal) -> Result<bool> {
        if self.local {
            a.locally_contained_in(b)
        } else {
            b.contains_ideal(a)
        }
    }

    fn is_zero_module(&self, j: &Ideal) -> Result<bool> {
        if self.local {
            Ok(j.gb()?
                .elements
                .iter()
                .any(|g| !g.constant_term().is_zero()))
        } else {
            j.is_unit()
        }
    }
}

/// Whether `h` is a nonzerodivisor on `P/J`.
pub fn is_regular(m: &CyclicModule, j: &Ideal, h: &Polynomial) -> Result<bool> {
    let c = j.colon_poly(h)?;
    m.contained(&c, j)
}

/// Length of a maximal `M`-regular sequence in the ideal generated by `gens`.
pub fn koszul_grade(gens: &[Polynomial], m: &CyclicModule, cfg: &Config) -> Result<usize> {
    let n = gens.len();
    if n > cfg.koszul_cap as usize {
        return Err(Error::KoszulBudget(format!(
            "{n} elements, cap {}",
            cfg.koszul_cap
        )));
    }
    let ring = m.relations.ring().clone();
    for g in gens {
        ring.check_same(g.ring())?;
    }
    let mut j = m.relations.reduced()?;
    if m.is_zero_module(&j)? || m.is_zero_module(&j.add_gens(gens))? {
        return Err(Error::Precondition(
            "M/(f)M = 0: the grade is infinite".into(),
        ));
    }
    let mut rng = cfg.rng(0x6b6f737a);
    let mut depth = 0;
    while depth < n {
        if let Some(w) = &m.weights {
            if annihilated_element(&j, gens, w)?.is_some() {
                return Ok(depth);
            }
        }
        let mut found = None;
        for g in gens {
            if !g.is_zero() && is_regular(m, &j, g)? {
                found = Some(g.clone());
                break;
            }
        }
        if found.is_none() && n > 1 {
            for _ in 0..cfg.attempts {
                let mut h = Polynomial::zero(&ring);
                for g in gens {
                    h = &h + &g.scale(&random_coeff(&mut rng, ring.field));
                }
                if !h.is_zero() && is_regular(m, &j, &h)? {
                    found = Some(h);
                    break;
                }
            }
        }
        match found {
            Some(h) => {
                j = j.add_gens(&[h]).reduced()?;
                depth += 1;
            }
            None => {
                let ann = j.colon(&Ideal::new(&ring, gens.to_vec()))?;
                if !m.contained(&ann, &j)? {
                    return Ok(depth);
                }
                return Err(Error::Budget(format!(
                    "no regular element among {} random candidates at depth {depth}",
                    cfg.attempts
                )));
            }
        }
    }
    Ok(n)
}

/// Largest degree searched for an element killed by the whole ideal.
const SEARCH_DEGREE: u32 = 12;

/// Degree of a nonzero homogeneous element of `P/J` killed by every `f`,
/// found by linear algebra on graded pieces. `None` when the data is not
/// homogeneous, a piece is infinite, or nothing turns up below the search
/// bound. A hit certifies grade zero.
pub fn annihilated_element(j: &Ideal, gens: &[Polynomial], weights: &[u32]) -> Result<Option<u32>> {
    let wdeg = |m: &Monomial| -> u32 {
        m.exps()
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    };
    if gens
        .iter()
        .any(|g| g.is_zero() || !g.is_weighted_homogeneous(weights))
    {
        return Ok(None);
    }
    let gb = j.gb()?;
    if gb.is_unit()
        || gb
            .elements
            .iter()
            .any(|g| !g.is_weighted_homogeneous(weights))
    {
        return Ok(None);
    }
    let lead = gb.leading_monomials();
    let nvars = j.ring().nvars();
    // exponent bounds for weight-zero variables
    let mut bound = vec![u32::MAX; nvars];
    for (i, &w) in weights.iter().enumerate() {
        if w == 0 {
            let pure = lead
                .iter()
                .filter(|m| m.exps().iter().enumerate().all(|(k, &e)| k == i || e == 0))
                .map(|m| m.exps()[i] as u32)
                .min();
            match pure {
                Some(e) => bound[i] = e,
                None => return Ok(None),
            }
        }
    }
    let gdeg: Vec<u32> = gens.iter().map(|g| wdeg(&g.terms()[0].0)).collect();
    let top = gb
        .elements
        .iter()
        .filter_map(|g| g.terms().first().map(|t| wdeg(&t.0)))
        .max()
        .unwrap_or(0)
        .saturating_add(gdeg.iter().copied().max().unwrap_or(0))
        .min(SEARCH_DEGREE);
    let mut pieces: HashMap<u32, Vec<Monomial>> = HashMap::new();
    let mut piece = |d: u32| -> Vec<Monomial> {
        pieces
            .entry(d)
            .or_insert_with(|| standard_monomials_of_degree(&lead, weights, &bound, d))
            .clone()
    };
    for d in 0..=top {
        let basis = piece(d);
        if basis.is_empty() {
            continue;
        }
        let mut offset = 0;
        let mut targets = Vec::new();
        for &e in &gdeg {
            let t = piece(d + e);
            let index: HashMap<Monomial, usize> =
                t.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
            targets.push((offset, index));
            offset += t.len();
        }
        let rows: Vec<SparseRow> = basis
            .iter()
            .map(|b| {
                let mut row = Vec::new();
                for (g, (off, index)) in gens.iter().zip(&targets) {
                    let nf = gb.normal_form(&g.mul_monomial(b, &j.ring().field.one()));
                    for (m, c) in nf.terms() {
                        row.push((off + index[m], c.clone()));
                    }
                }
                crate::linalg::normalize_row(row)
            })
            .collect();
        if rank(&rows) < basis.len() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Monomials of weighted degree `d` outside the monomial ideal `lead`.
fn standard_monomials_of_degree(
    lead: &[Monomial],
    weights: &[u32],
    bound: &[u32],
    d: u32,
) -> Vec<Monomial> {
    fn go(
        i: usize,
        left: u32,
        cur: &mut Vec<u16>,
        lead: &[Monomial],
        weights: &[u32],
        bound: &[u32],
        out: &mut Vec<Monomial>,
    ) {
        let m = Monomial::from_exps(cur);
        if lead.iter().any(|l| l.divides(&m)) {
            return;
        }
        if i == cur.len() {
            if left == 0 {
                out.push(m);
            }
            return;
        }
        let w = weights[i];
        let max = if w == 0 {
            bound[i].saturating_sub(1)
        } else {
            left / w
        };
        for e in 0..=max {
            cur[i] = e as u16;
            go(i + 1, left - e * w, cur, lead, weights, bound, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; weights.len()];
    go(0, d, &mut cur, lead, weights, bound, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polys;
    use crate::poly::Ring;

    fn grade(vars: &[&str], rel: &str, gens: &str, local: bool) -> usize {
        let r = Ring::new(Field::Rational, vars.iter().copied());
        let j = Ideal::new(&r, parse_polys(&r, rel).unwrap());
        let m = if local {
            CyclicModule::local(j)
        } else {
            CyclicModule::graded(j)
        };
        koszul_grade(&parse_polys(&r, gens).unwrap(), &m, &Config::default()).unwrap()
    }

    #[test]
    fn small_grades() {
        assert_eq!(grade(&["x", "y"], "", "x, y", false), 2);
        assert_eq!(grade(&["x", "y"], "x", "x, y", false), 1);
        assert_eq!(grade(&["x", "y"], "x^2, x*y", "x, y", false), 0);
        // x*y is not regular, but x + y is
        assert_eq!(grade(&["x", "y"], "x*y", "x, y", false), 1);
        assert_eq!(grade(&["x", "y", "z"], "z^2 - x*y", "x, y, z", false), 2);
    }

    #[test]
    fn local_grade_ignores_far_components() {
        // (x) ∩ (x - 1, y): at the origin this is just (x)
        assert_eq!(grade(&["x", "y"], "x^2 - x, x*y", "x, y", true), 1);
        // the cusp is a one-dimensional domain
        assert_eq!(grade(&["x", "y"], "y^2 - x^3", "x, y", true), 1);
    }

    #[test]
    fn annihilated_elements_by_degree() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let g = parse_polys(&r, "x, y").unwrap();
        let j = Ideal::new(&r, parse_polys(&r, "x^2, x*y").unwrap());
        assert_eq!(annihilated_element(&j, &g, &[1, 1]).unwrap(), Some(1));
        let j = Ideal::new(&r, parse_polys(&r, "x*y").unwrap());
        assert_eq!(annihilated_element(&j, &g, &[1, 1]).unwrap(), None);
        // x nilpotent of weight zero: (x^2, x*y^2) kills x*y in degree 1
        let j = Ideal::new(&r, parse_polys(&r, "x^2, x*y^2").unwrap());
        let y = parse_polys(&r, "y").unwrap();
        assert_eq!(annihilated_element(&j, &y, &[0, 1]).unwrap(), Some(1));
        let j = Ideal::new(&r, parse_polys(&r, "x^2 - y").unwrap());
        assert_eq!(annihilated_element(&j, &g, &[1, 1]).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let m = CyclicModule::graded(Ideal::zero(&r));
        let cfg = Config {
            koszul_cap: 1,
            ..Config::default()
        };
        let g = parse_polys(&r, "x, y").unwrap();
        assert!(matches!(
            koszul_grade(&g, &m, &cfg),
            Err(Error::KoszulBudget(_))
        ));
    }
}
