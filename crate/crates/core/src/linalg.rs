//! Sparse exact Gaussian elimination.

use std::collections::BTreeMap;

use crate::field::{Coeff, Field};

/// Entries sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Coeff)>;

/// `a + c * b`
pub fn row_axpy(a: &[(usize, Coeff)], c: &Coeff, b: &[(usize, Coeff)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, b[j].1.mul(c)));
            j += 1;
        } else {
            let v = a[i].1.add(&b[j].1.mul(c));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn normalize_row(mut row: SparseRow) -> SparseRow {
    row.sort_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = last.1.add(&v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// Rows in echelon form keyed by pivot column; every pivot entry is 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Eliminates every pivot column from `row`.
    pub fn reduce(&self, row: &[(usize, Coeff)]) -> SparseRow {
        let mut row = row.to_vec();
        let mut k = 0;
        while k < row.len() {
            let (col, v) = &row[k];
            match self.pivots.get(col) {
                Some(p) => {
                    let c = v.neg();
                    let rest = row_axpy(&row[k + 1..], &c, &p[1..]);
                    row.truncate(k);
                    row.extend(rest);
                }
                None => k += 1,
            }
        }
        row
    }

    /// Adds a row; returns false if it was dependent.
    pub fn insert(&mut self, row: &[(usize, Coeff)]) -> bool {
        let r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let inv = r[0].1.inv();
        let r: SparseRow = r.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
        self.pivots.insert(r[0].0, r);
        true
    }

    pub fn contains(&self, row: &[(usize, Coeff)]) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = &usize> {
        self.pivots.keys()
    }

    /// Fully reduced rows, ascending by pivot.
    pub fn reduced_rows(&self) -> Vec<SparseRow> {
        let mut done: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&p, row) in self.pivots.iter().rev() {
            // entries right of the pivot may hit later pivots, already reduced
            let mut r = vec![row[0].clone()];
            let mut tail = row[1..].to_vec();
            let mut k = 0;
            while k < tail.len() {
                match done.get(&tail[k].0) {
                    Some(q) => {
                        let c = tail[k].1.neg();
                        let rest = row_axpy(&tail[k + 1..], &c, &q[1..]);
                        tail.truncate(k);
                        tail.extend(rest);
                    }
                    None => k += 1,
                }
            }
            r.extend(tail);
            done.insert(p, r);
        }
        done.into_values().collect()
    }
}

pub fn rank(rows: &[SparseRow]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : A x = 0}` where `A` has the given rows and `ncols` columns.
pub fn kernel(rows: &[SparseRow], ncols: usize, field: Field) -> Vec<SparseRow> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let rref = e.reduced_rows();
    let pivot_of: BTreeMap<usize, &SparseRow> = rref.iter().map(|r| (r[0].0, r)).collect();
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivot_of.contains_key(&f) {
            continue;
        }
        let mut v: SparseRow = Vec::new();
        for (&p, r) in &pivot_of {
            if let Some((_, c)) = r.iter().find(|e| e.0 == f) {
                v.push((p, c.neg()));
            }
        }
        v.push((f, field.one()));
        basis.push(normalize_row(v));
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseRow {
        normalize_row(
            v.iter()
                .enumerate()
                .map(|(i, &x)| (i, Field::Rational.from_i64(x)))
                .collect(),
        )
    }

    fn apply(rows: &[SparseRow], x: &SparseRow) -> bool {
        rows.iter().all(|r| {
            let mut acc = Field::Rational.zero();
            for (c, v) in r {
                if let Some((_, w)) = x.iter().find(|e| e.0 == *c) {
                    acc = acc.add(&v.mul(w));
                }
            }
            acc.is_zero()
        })
    }

    #[test]
    fn rank_and_kernel() {
        let a = vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])];
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3, Field::Rational);
        assert_eq!(k.len(), 1);
        assert!(apply(&a, &k[0]));
    }

    #[test]
    fn empty_matrix_kernel_is_everything() {
        assert_eq!(kernel(&[], 3, Field::Rational).len(), 3);
    }
}
