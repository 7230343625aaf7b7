//! Minimal graded free resolutions by iterated syzygies.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groebner::engine::{Engine, MTerm, ModVec, TermOrder};
use crate::groebner::{self, component};
use crate::ideal::Ideal;
use crate::local::monomials_of_degree;
use crate::monomial::MonomialOrder;
use crate::poly::{Polynomial, Ring};

/// A matrix stored by columns; every column has `rows` entries.
pub type Columns = Vec<Vec<Polynomial>>;

/// `coker(F_1 -> F_0)` with `F_0 = ⊕ R(-twists[r])`.
#[derive(Clone, Debug)]
pub struct GradedPresentation {
    pub ring: Arc<Ring>,
    pub twists: Vec<i64>,
    pub relations: Columns,
}

pub(crate) fn col_to_vec(col: &[Polynomial], ord: &TermOrder, offset: usize) -> ModVec {
    let mut terms = Vec::new();
    for (r, f) in col.iter().enumerate() {
        for (m, c) in f.terms() {
            terms.push(MTerm {
                mono: m.clone(),
                comp: r + offset,
                coeff: c.clone(),
            });
        }
    }
    ModVec::from_terms(terms, ord)
}

pub(crate) fn vec_to_col(
    v: &ModVec,
    ring: &Arc<Ring>,
    range: std::ops::Range<usize>,
) -> Vec<Polynomial> {
    range.map(|r| component(v, r, ring)).collect()
}

/// Degree of a homogeneous column against the row twists.
pub(crate) fn column_degree(col: &[Polynomial], twists: &[i64]) -> Result<Option<i64>> {
    let mut deg = None;
    for (r, f) in col.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        if !f.is_homogeneous() {
            return Err(Error::NonHomogeneous(f.to_string()));
        }
        let d = f.total_degree().unwrap() as i64 + twists[r];
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => {
                return Err(Error::NonHomogeneous(format!(
                    "column mixes degrees {e} and {d}"
                )));
            }
            _ => {}
        }
    }
    Ok(deg)
}

impl GradedPresentation {
    /// `R / J`
    pub fn cyclic(j: &Ideal) -> GradedPresentation {
        GradedPresentation {
            ring: j.ring().clone(),
            twists: vec![0],
            relations: j.gens().iter().map(|g| vec![g.clone()]).collect(),
        }
    }

    pub fn free(ring: &Arc<Ring>, twists: Vec<i64>) -> GradedPresentation {
        GradedPresentation {
            ring: ring.clone(),
            twists,
            relations: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn validate(&self) -> Result<()> {
        for col in &self.relations {
            if col.len() != self.twists.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.twists.len(),
                    got: col.len(),
                });
            }
            for f in col {
                self.ring.check_same(f.ring())?;
            }
            column_degree(col, &self.twists)?;
        }
        Ok(())
    }

    /// Cancels every relation with a unit entry together with the
    /// generator it eliminates, and drops zero relations.
    pub fn pruned(&self) -> Result<GradedPresentation> {
        self.validate()?;
        let mut twists = self.twists.clone();
        let mut cols: Columns = self
            .relations
            .iter()
            .filter(|c| c.iter().any(|f| !f.is_zero()))
            .cloned()
            .collect();
        loop {
            let hit = cols.iter().enumerate().find_map(|(j, c)| {
                c.iter()
                    .position(|f| f.is_constant() && !f.is_zero())
                    .map(|r| (j, r))
            });
            let Some((j, r)) = hit else { break };
            let pivot = cols.remove(j);
            let inv = pivot[r].constant_term().inv();
            for c in cols.iter_mut() {
                if c[r].is_zero() {
                    continue;
                }
                let factor = c[r].scale(&inv);
                for (k, f) in c.iter_mut().enumerate() {
                    *f = &*f - &(&factor * &pivot[k]);
                }
            }
            for c in cols.iter_mut() {
                c.remove(r);
            }
            twists.remove(r);
            cols.retain(|c| c.iter().any(|f| !f.is_zero()));
        }
        Ok(GradedPresentation {
            ring: self.ring.clone(),
            twists,
            relations: cols,
        })
    }

    /// Hilbert function in degree `d`, from a basis of the relation module.
    pub fn hilbert(&self, d: i64) -> Result<u64> {
        let ord = TermOrder::graded(MonomialOrder::DegRevLex, self.twists.clone());
        let vs: Vec<ModVec> = self
            .relations
            .iter()
            .map(|c| col_to_vec(c, &ord, 0))
            .collect();
        let basis = groebner::engine::groebner(vs, &ord, self.ring.field, self.ring.nvars(), None)?;
        let mut total = 0u64;
        for (r, &t) in self.twists.iter().enumerate() {
            if d < t {
                continue;
            }
            let lead: Vec<_> = basis
                .iter()
                .map(|v| v.lead().unwrap())
                .filter(|l| l.comp == r)
                .map(|l| l.mono.clone())
                .collect();
            total += monomials_of_degree(self.ring.nvars(), (d - t) as u32)
                .iter()
                .filter(|m| !lead.iter().any(|l| l.divides(m)))
                .count() as u64;
        }
        Ok(total)
    }
}

/// Keeps, in order of degree, each column not in the span of those before it.
fn minimal_columns(
    cols: &[(i64, Vec<Polynomial>)],
    twists: &[i64],
    ring: &Arc<Ring>,
) -> Result<Vec<(i64, Vec<Polynomial>)>> {
    let ord = TermOrder::graded(MonomialOrder::DegRevLex, twists.to_vec());
    let mut sorted: Vec<&(i64, Vec<Polynomial>)> = cols.iter().collect();
    sorted.sort_by_key(|c| c.0);
    let mut e = Engine::new(&ord, ring.field, ring.nvars());
    let mut kept = Vec::new();
    for (d, c) in sorted {
        e.run(Some(*d))?;
        let v = col_to_vec(c, &ord, 0);
        if e.reduce(v.clone()).is_zero() {
            continue;
        }
        e.add(v);
        kept.push((*d, c.clone()));
    }
    Ok(kept)
}

/// Generators of the syzygies of the given homogeneous columns.
pub(crate) fn syzygy_columns(
    cols: &[(i64, Vec<Polynomial>)],
    twists: &[i64],
    ring: &Arc<Ring>,
) -> Result<Vec<(i64, Vec<Polynomial>)>> {
    let r = twists.len();
    let k = cols.len();
    let mut shifts = twists.to_vec();
    shifts.extend(cols.iter().map(|c| c.0));
    let mut blocks = vec![1; r];
    blocks.extend(std::iter::repeat_n(0, k));
    let ord = TermOrder {
        mono: MonomialOrder::DegRevLex,
        shifts,
        blocks,
    };
    let one = ring.field.one();
    let vs: Vec<ModVec> = cols
        .iter()
        .enumerate()
        .map(|(j, (_, c))| {
            let mut v = col_to_vec(c, &ord, 0);
            v.terms.push(MTerm {
                mono: crate::monomial::Monomial::one(ring.nvars()),
                comp: r + j,
                coeff: one.clone(),
            });
            ModVec::from_terms(v.terms, &ord)
        })
        .collect();
    let basis = groebner::engine::groebner(vs, &ord, ring.field, ring.nvars(), None)?;
    let mut out = Vec::new();
    for v in basis {
        if v.lead().unwrap().comp < r {
            continue;
        }
        let d = v.max_degree(&ord);
        out.push((d, vec_to_col(&v, ring, r..r + k)));
    }
    Ok(out)
}

/// `F_0 <- F_1 <- ... <- F_p`, minimal.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ring: Arc<Ring>,
    /// Degrees of the generators of each `F_i`.
    pub twists: Vec<Vec<i64>>,
    /// `maps[i]` is the differential `F_{i+1} -> F_i`, by columns.
    pub maps: Vec<Columns>,
}

/// A minimal graded free resolution, certified by `d^2 = 0`, the absence of
/// unit entries, its length and the alternating sum of Hilbert functions.
pub fn graded_resolution(p: &GradedPresentation) -> Result<Resolution> {
    let p = p.pruned()?;
    let ring = p.ring.clone();
    let s = ring.nvars();
    let mut twists = vec![p.twists.clone()];
    let mut maps: Vec<Columns> = Vec::new();
    let mut cols: Vec<(i64, Vec<Polynomial>)> = p
        .relations
        .iter()
        .map(|c| Ok((column_degree(c, &p.twists)?.unwrap(), c.clone())))
        .collect::<Result<_>>()?;
    loop {
        let src = twists.last().unwrap().clone();
        let min = minimal_columns(&cols, &src, &ring)?;
        if min.is_empty() {
            break;
        }
        if maps.len() == s {
            return Err(Error::Certificate(format!("resolution longer than {s}")));
        }
        twists.push(min.iter().map(|c| c.0).collect());
        maps.push(min.iter().map(|c| c.1.clone()).collect());
        cols = syzygy_columns(&min, &src, &ring)?;
    }
    let res = Resolution { ring, twists, maps };
    res.certify(&p)?;
    Ok(res)
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// `d_i(d_{i+1}(e)) = 0` for every basis element.
    pub fn composes_to_zero(&self) -> bool {
        for i in 1..self.maps.len() {
            let (a, b) = (&self.maps[i - 1], &self.maps[i]);
            for col in b {
                for r in 0..self.twists[i - 1].len() {
                    let mut acc = Polynomial::zero(&self.ring);
                    for (k, f) in col.iter().enumerate() {
                        if !f.is_zero() && !a[k][r].is_zero() {
                            acc = &acc + &(&a[k][r] * f);
                        }
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn certify(&self, p: &GradedPresentation) -> Result<()> {
        if !self.composes_to_zero() {
            return Err(Error::Certificate(
                "consecutive differentials do not compose to zero".into(),
            ));
        }
        for m in &self.maps {
            for col in m {
                if col.iter().any(|f| f.is_constant() && !f.is_zero()) {
                    return Err(Error::Certificate("unit entry in a differential".into()));
                }
            }
        }
        let betti = self.betti();
        let s = self.ring.nvars() as i64;
        let lo = p.twists.iter().copied().min().unwrap_or(0);
        let hi = betti.entries.keys().map(|k| k.1).max().unwrap_or(0) + 1;
        for d in lo..=hi {
            let mut chi: i64 = 0;
            for (&(i, j), &b) in &betti.entries {
                if d >= j {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    chi += sign * b as i64 * binom(d - j + s - 1, s - 1);
                }
            }
            if chi != p.hilbert(d)? as i64 {
                return Err(Error::Certificate(format!(
                    "Euler characteristic mismatch in degree {d}"
                )));
            }
        }
        Ok(())
    }

    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (i, t) in self.twists.iter().enumerate() {
            for &j in t {
                *entries.entry((i, j)).or_insert(0) += 1;
            }
        }
        BettiTable { entries }
    }
}

pub(crate) fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `β_{i,j}`: the number of degree-`j` generators of `F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64), u64>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn projective_dimension(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn regularity(&self) -> i64 {
        self.entries
            .keys()
            .map(|&(i, j)| j - i as i64)
            .max()
            .unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> u64 {
        self.entries
            .iter()
            .filter(|(k, _)| k.0 == i)
            .map(|(_, b)| b)
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|(&(i, j), &b)| json!({"i": i, "j": j, "beta": b}))
            .collect();
        json!({
            "entries": rows,
            "pd": self.projective_dimension(),
            "reg": self.regularity(),
        })
    }
}

impl fmt::Display for BettiTable {
    /// Columns are homological degrees, rows are `j - i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return writeln!(f, "0");
        }
        let p = self.projective_dimension();
        let lo = self
            .entries
            .keys()
            .map(|&(i, j)| j - i as i64)
            .min()
            .unwrap();
        let hi = self.regularity();
        let width = self
            .entries
            .values()
            .map(|b| b.to_string().len())
            .max()
            .unwrap()
            .max(p.to_string().len());
        write!(f, "{:>7}", "")?;
        for i in 0..=p {
            write!(f, " {:>width$}", i)?;
        }
        writeln!(f)?;
        write!(f, "{:>7}", "total:")?;
        for i in 0..=p {
            write!(f, " {:>width$}", self.total(i))?;
        }
        writeln!(f)?;
        for r in lo..=hi {
            write!(f, "{:>7}", format!("{r}:"))?;
            for i in 0..=p {
                let b = self.get(i, r + i as i64);
                let cell = if b == 0 {
                    ".".to_string()
                } else {
                    b.to_string()
                };
                write!(f, " {:>width$}", cell)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `(depth, reg)` of a module over a polynomial ring in `s` variables, by
/// Auslander-Buchsbaum.
pub fn depth_and_reg(b: &BettiTable, s: usize) -> (usize, i64) {
    (s - b.projective_dimension(), b.regularity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polys;

    fn cyclic(vars: &[&str], gens: &str) -> GradedPresentation {
        let r = Ring::new(Field::Rational, vars.iter().copied());
        GradedPresentation::cyclic(&Ideal::new(&r, parse_polys(&r, gens).unwrap()))
    }

    #[test]
    fn hypersurface() {
        let res = graded_resolution(&cyclic(&["x", "y"], "y^2")).unwrap();
        let b = res.betti();
        assert_eq!(b.get(0, 0), 1);
        assert_eq!(b.get(1, 2), 1);
        assert_eq!(res.length(), 1);
        assert_eq!(depth_and_reg(&b, 2), (1, 1));
    }

    #[test]
    fn koszul_complex() {
        let res = graded_resolution(&cyclic(&["x", "y"], "x, y")).unwrap();
        let b = res.betti();
        assert_eq!(b.get(1, 1), 2);
        assert_eq!(b.get(2, 2), 1);
        assert_eq!(depth_and_reg(&b, 2), (0, 0));
        let free = graded_resolution(&cyclic(&["x", "y"], "")).unwrap();
        assert_eq!(depth_and_reg(&free.betti(), 2), (2, 0));
    }

    #[test]
    fn tangent_cone_of_the_worked_example() {
        let p = cyclic(&["x", "y", "z", "w"], "z^2, y*z, x*z, y^4 - x^3*w");
        let res = graded_resolution(&p).unwrap();
        assert_eq!(res.length(), 3);
        assert!(res.composes_to_zero());
        assert_eq!(depth_and_reg(&res.betti(), 4).0, 1);
    }

    #[test]
    fn redundant_generators_and_units_are_pruned() {
        let r = Ring::new(Field::Rational, ["x", "y"]);
        let g = parse_polys(&r, "x^2, x*y, x^2 + x*y, y^3").unwrap();
        let res = graded_resolution(&GradedPresentation::cyclic(&Ideal::new(&r, g))).unwrap();
        assert_eq!(res.betti().total(1), 3);
        // coker of [1, x]^T is R/(x) shifted
        let p = GradedPresentation {
            ring: r.clone(),
            twists: vec![0, 0],
            relations: vec![
                parse_polys(&r, "1, 0").unwrap(),
                parse_polys(&r, "0, x").unwrap(),
            ],
        };
        let res = graded_resolution(&p).unwrap();
        assert_eq!(res.betti().get(0, 0), 1);
        assert_eq!(res.betti().get(1, 1), 1);
    }

    #[test]
    fn betti_display() {
        let res = graded_resolution(&cyclic(&["x", "y"], "x, y")).unwrap();
        let text = res.betti().to_string();
        assert!(text.contains("total: 1 2 1"), "{text}");
        assert!(text.contains("0: 1 2 1"), "{text}");
    }
}
