//! `Ext^i(M, R)` from a minimal resolution: graded pieces by strand linear
//! algebra, initial degrees, a-invariants by local duality, and Krull
//! dimension of subquotient presentations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::component;
use crate::groebner::engine::{self, MTerm, ModVec, TermOrder};
use crate::homology::resolution::{
    col_to_vec, syzygy_columns, Columns, GradedPresentation, Resolution,
};
use crate::ideal::Ideal;
use crate::linalg::{normalize_row, rank, SparseRow};
use crate::local::monomials_of_degree;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Ring};

impl Resolution {
    /// Basis of `Hom(F_i, R)_d`: pairs (generator, monomial of degree `d + a_k`).
    fn dual_basis(&self, i: usize, d: i64) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        if let Some(t) = self.twists.get(i) {
            for (k, &a) in t.iter().enumerate() {
                if d + a >= 0 {
                    for m in monomials_of_degree(self.ring.nvars(), (d + a) as u32) {
                        out.push((k, m));
                    }
                }
            }
        }
        out
    }

    /// Rows of the transpose of `d_{i+1}` on `Hom(F_i, R)_d`.
    fn dual_map_rows(&self, i: usize, d: i64) -> Vec<SparseRow> {
        let src = self.dual_basis(i, d);
        let tgt = self.dual_basis(i + 1, d);
        let index: HashMap<&(usize, Monomial), usize> =
            tgt.iter().enumerate().map(|(n, b)| (b, n)).collect();
        let Some(map) = self.maps.get(i) else {
            return vec![Vec::new(); src.len()];
        };
        src.iter()
            .map(|(k, mu)| {
                let mut row = Vec::new();
                for (l, col) in map.iter().enumerate() {
                    for (m, c) in col[*k].terms() {
                        let key = (l, m.mul(mu));
                        row.push((index[&key], c.clone()));
                    }
                }
                normalize_row(row)
            })
            .collect()
    }

    /// `dim_k Ext^i(M, R)_d`.
    pub fn ext_dim(&self, i: usize, d: i64) -> usize {
        let n = self.dual_basis(i, d).len();
        if n == 0 {
            return 0;
        }
        let out = rank(&self.dual_map_rows(i, d));
        let inc = if i == 0 {
            0
        } else {
            rank(&self.dual_map_rows(i - 1, d))
        };
        n - out - inc
    }

    /// Generators of `ker(d_{i+1}^T) ⊆ Hom(F_i, R)` with their degrees.
    /// `Hom(F_i, R) = ⊕ R(a_k)` has generators in degrees `-a_k`.
    fn dual_cycles(&self, i: usize) -> Result<Vec<(i64, Vec<Polynomial>)>> {
        let twists: Vec<i64> = self.twists[i].iter().map(|a| -a).collect();
        let Some(map) = self.maps.get(i) else {
            let one = Polynomial::one(&self.ring);
            return Ok((0..twists.len())
                .map(|k| {
                    let mut col = vec![Polynomial::zero(&self.ring); twists.len()];
                    col[k] = one.clone();
                    (twists[k], col)
                })
                .collect());
        };
        // the transpose as columns indexed by generators of Hom(F_i, R)
        let tgt: Vec<i64> = self.twists[i + 1].iter().map(|a| -a).collect();
        let cols: Vec<(i64, Vec<Polynomial>)> = (0..twists.len())
            .map(|k| (twists[k], map.iter().map(|col| col[k].clone()).collect()))
            .collect();
        let nonzero: Vec<usize> = (0..cols.len())
            .filter(|&k| cols[k].1.iter().any(|f| !f.is_zero()))
            .collect();
        let mut out = Vec::new();
        for k in 0..cols.len() {
            if !nonzero.contains(&k) {
                let mut col = vec![Polynomial::zero(&self.ring); twists.len()];
                col[k] = Polynomial::one(&self.ring);
                out.push((twists[k], col));
            }
        }
        let sub: Vec<(i64, Vec<Polynomial>)> = nonzero.iter().map(|&k| cols[k].clone()).collect();
        for (d, s) in syzygy_columns(&sub, &tgt, &self.ring)? {
            let mut col = vec![Polynomial::zero(&self.ring); twists.len()];
            for (pos, &k) in nonzero.iter().enumerate() {
                col[k] = s[pos].clone();
            }
            out.push((d, col));
        }
        Ok(out)
    }

    /// Images of `d_i^T`, the boundaries in `Hom(F_i, R)`.
    fn dual_boundaries(&self, i: usize) -> Result<Vec<(i64, Vec<Polynomial>)>> {
        if i == 0 {
            return Ok(Vec::new());
        }
        let map = &self.maps[i - 1];
        let src: Vec<i64> = self.twists[i - 1].iter().map(|a| -a).collect();
        Ok((0..src.len())
            .map(|k| {
                (
                    src[k],
                    map.iter().map(|col| col[k].clone()).collect::<Vec<_>>(),
                )
            })
            .filter(|(_, c)| c.iter().any(|f| !f.is_zero()))
            .collect())
    }

    /// `Ext^i(M, R)` as `coker`: generators are the cycles, relations are the
    /// boundaries together with the syzygies among cycles.
    pub fn ext_presentation(&self, i: usize) -> Result<GradedPresentation> {
        if i >= self.twists.len() {
            return Ok(GradedPresentation::free(&self.ring, Vec::new()));
        }
        let amb: Vec<i64> = self.twists[i].iter().map(|a| -a).collect();
        let z = self.dual_cycles(i)?;
        let b = self.dual_boundaries(i)?;
        let p = z.len();
        // syzygies of [z_1 .. z_p | b_1 .. b_q], projected to the z part
        let mut all = z.clone();
        all.extend(b.iter().cloned());
        let syz = syzygy_columns(&all, &amb, &self.ring)?;
        let relations: Columns = syz
            .into_iter()
            .map(|(_, c)| c[..p].to_vec())
            .filter(|c| c.iter().any(|f| !f.is_zero()))
            .collect();
        Ok(GradedPresentation {
            ring: self.ring.clone(),
            twists: z.iter().map(|c| c.0).collect(),
            relations,
        })
        .and_then(|p| p.pruned())
    }

    /// Least `d` with `Ext^i(M, R)_d != 0`, or `None` when `Ext^i = 0`.
    /// Strands are scanned upward from `-max a_k`; the scan stops at the
    /// largest degree of a generator of the cycles, past which a module
    /// vanishing on its generators vanishes everywhere.
    pub fn ext_indeg(&self, i: usize) -> Result<Option<i64>> {
        if i >= self.twists.len() || self.twists[i].is_empty() {
            return Ok(None);
        }
        let lo = -self.twists[i].iter().copied().max().unwrap();
        let z = self.dual_cycles(i)?;
        let Some(hi) = z.iter().map(|c| c.0).max() else {
            return Ok(None);
        };
        for d in lo..=hi {
            if self.ext_dim(i, d) > 0 {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }
}

/// `dim_k Ext^i(M, R)_d`.
pub fn ext_graded_piece(res: &Resolution, i: usize, d: i64) -> usize {
    res.ext_dim(i, d)
}

/// `a_i(M) = -s - indeg Ext^{s-i}(M, R)`, `None` standing for `-∞`.
pub fn a_invariants(res: &Resolution) -> Result<BTreeMap<usize, Option<i64>>> {
    let s = res.ring.nvars();
    let mut out = BTreeMap::new();
    for i in 0..=s {
        let a = res.ext_indeg(s - i)?.map(|d| -(s as i64) - d);
        out.insert(i, a);
    }
    Ok(out)
}

/// `max{a_i + i}` over the finite a-invariants.
pub fn reg_from_a_invariants(a: &BTreeMap<usize, Option<i64>>) -> Option<i64> {
    a.iter().filter_map(|(&i, v)| v.map(|a| a + i as i64)).max()
}

/// `(im φ : e_r)`: the coefficients `f` with `f e_r` in the relation module.
fn colon_generator(p: &GradedPresentation, r: usize) -> Result<Ideal> {
    let n = p.rank();
    let mut shifts = p.twists.clone();
    shifts.push(p.twists[r]);
    let mut blocks = vec![1; n];
    blocks.push(0);
    let ord = TermOrder {
        mono: MonomialOrder::DegRevLex,
        shifts,
        blocks,
    };
    let one = p.ring.field.one();
    let mut vs: Vec<ModVec> = p.relations.iter().map(|c| col_to_vec(c, &ord, 0)).collect();
    let unit = Monomial::one(p.ring.nvars());
    vs.push(ModVec::from_terms(
        vec![
            MTerm {
                mono: unit.clone(),
                comp: r,
                coeff: one.clone(),
            },
            MTerm {
                mono: unit,
                comp: n,
                coeff: one,
            },
        ],
        &ord,
    ));
    let basis = engine::groebner(vs, &ord, p.ring.field, p.ring.nvars(), None)?;
    let gens = basis
        .iter()
        .filter(|v| v.lead().unwrap().comp == n)
        .map(|v| component(v, n, &p.ring))
        .collect();
    Ok(Ideal::new(&p.ring, gens))
}

/// `ann(M) = ∩ (im φ : e_r)`.
pub fn annihilator(p: &GradedPresentation) -> Result<Ideal> {
    let mut acc: Option<Ideal> = None;
    for r in 0..p.rank() {
        let c = colon_generator(p, r)?;
        acc = Some(match acc {
            None => c,
            Some(a) => a.intersect(&c)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(&p.ring)))
}

const MINOR_LIMIT: usize = 500;

/// The ideal of maximal minors, when there are at most six rows and few
/// enough minors.
pub fn fitting_zero(p: &GradedPresentation) -> Option<Ideal> {
    let n = p.rank();
    let c = p.relations.len();
    if n > 6 || crate::homology::resolution::binom(c as i64, n as i64) as usize > MINOR_LIMIT {
        return None;
    }
    if n == 0 {
        return Some(Ideal::unit(&p.ring));
    }
    let mut minors = Vec::new();
    let mut pick: Vec<usize> = (0..n).collect();
    if c >= n {
        loop {
            let m: Vec<Vec<Polynomial>> = (0..n)
                .map(|r| pick.iter().map(|&j| p.relations[j][r].clone()).collect())
                .collect();
            minors.push(determinant(&m, &p.ring));
            // next combination
            let mut k = n;
            while k > 0 && pick[k - 1] == c - n + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            pick[k - 1] += 1;
            for t in k..n {
                pick[t] = pick[t - 1] + 1;
            }
        }
    }
    Some(Ideal::new(&p.ring, minors))
}

fn determinant(m: &[Vec<Polynomial>], ring: &Arc<Ring>) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, f)| f.clone())
                    .collect()
            })
            .collect();
        let t = &m[0][j] * &determinant(&minor, ring);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Krull dimension of the support; `None` for the zero module.
pub fn module_dimension(p: &GradedPresentation) -> Result<Option<usize>> {
    let p = p.pruned()?;
    if p.rank() == 0 {
        return Ok(None);
    }
    let ann = annihilator(&p)?;
    let d = ann.dimension()?;
    if let Some(fitt) = fitting_zero(&p) {
        if fitt.dimension()? != d {
            return Err(Error::Certificate(
                "Fitting ideal and annihilator disagree on dimension".into(),
            ));
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::homology::resolution::{depth_and_reg, graded_resolution};
    use crate::parse::parse_polys;

    fn res(vars: &[&str], gens: &str) -> Resolution {
        let r = Ring::new(Field::Rational, vars.iter().copied());
        graded_resolution(&GradedPresentation::cyclic(&Ideal::new(
            &r,
            parse_polys(&r, gens).unwrap(),
        )))
        .unwrap()
    }

    #[test]
    fn strands() {
        let free = res(&["x", "y"], "");
        assert_eq!(ext_graded_piece(&free, 1, -1), 0);
        assert_eq!(ext_graded_piece(&free, 0, 0), 1);
        assert_eq!(ext_graded_piece(&free, 0, 3), 4);
        let hyp = res(&["x", "y"], "y^2");
        assert_eq!(ext_graded_piece(&hyp, 1, -2), 1);
        assert_eq!(ext_graded_piece(&hyp, 1, -3), 0);
    }

    #[test]
    fn a_invariants_by_duality() {
        let free = res(&["x", "y"], "");
        let a = a_invariants(&free).unwrap();
        assert_eq!(a[&2], Some(-2));
        assert_eq!(a[&0], None);
        assert_eq!(a[&1], None);
        let hyp = res(&["x", "y"], "y^2");
        let a = a_invariants(&hyp).unwrap();
        // k[x] ⊕ k[x](-1): the shifted summand ends in degree 0
        assert_eq!(a[&1], Some(0));
        assert_eq!(
            reg_from_a_invariants(&a),
            Some(depth_and_reg(&hyp.betti(), 2).1)
        );
    }

    #[test]
    fn dimensions() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let p = |g: &str| GradedPresentation::cyclic(&Ideal::new(&r, parse_polys(&r, g).unwrap()));
        assert_eq!(module_dimension(&p("x, y")).unwrap(), Some(0));
        assert_eq!(module_dimension(&p("y^2")).unwrap(), Some(1));
    }

    #[test]
    fn worked_example_ext() {
        let r = res(&["x", "y", "z", "w"], "z^2, y*z, x*z, y^4 - x^3*w");
        let e3 = r.ext_presentation(3).unwrap();
        assert_eq!(module_dimension(&e3).unwrap(), Some(1));
        assert!(ext_graded_piece(&r, 3, -3) > 0);
        let a = a_invariants(&r).unwrap();
        let reg = depth_and_reg(&r.betti(), 4).1;
        assert_eq!(reg_from_a_invariants(&a), Some(reg));
    }
}
