//! Presentations shared by the integration tests, and small oracles that
//! share no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rrfilt::local::{validate_local_input, LocalRing, MPrimary};
use rrfilt::parse::parse_polys;
use rrfilt::{Field, Ring};

pub struct Member {
    pub name: &'static str,
    pub vars: &'static [&'static str],
    pub q: &'static str,
    /// `None` for the maximal ideal.
    pub ideal: Option<&'static str>,
}

impl Member {
    pub fn local(&self) -> LocalRing {
        let r = Ring::new(Field::Rational, self.vars.iter().copied());
        LocalRing::new(&r, parse_polys(&r, self.q).unwrap()).unwrap()
    }

    pub fn mprimary(&self) -> MPrimary {
        let pres = self.local();
        match self.ideal {
            None => pres.maximal(),
            Some(text) => {
                let gens = parse_polys(pres.ring(), text).unwrap();
                validate_local_input(&pres, &gens).unwrap()
            }
        }
    }

    pub fn is_maximal(&self) -> bool {
        self.ideal.is_none()
    }
}

pub const EXAMPLE_Q: &str = "-x^2*w + y*z, -y^3 + x*z, x*y^2*w - z^2";

pub fn corpus() -> Vec<Member> {
    vec![
        Member {
            name: "plane",
            vars: &["x", "y"],
            q: "",
            ideal: None,
        },
        Member {
            name: "space",
            vars: &["x", "y", "z"],
            q: "",
            ideal: None,
        },
        Member {
            name: "cusp",
            vars: &["x", "y"],
            q: "y^2 - x^3",
            ideal: None,
        },
        Member {
            name: "quadric cone",
            vars: &["x", "y", "z"],
            q: "z^2 - x*y",
            ideal: None,
        },
        Member {
            name: "semigroup 3,4,5",
            vars: &["x", "y", "z"],
            q: "y^2 - x*z, x^3 - y*z, z^2 - x^2*y",
            ideal: None,
        },
        Member {
            name: "semigroup 4,5,11",
            vars: &["x", "y", "z"],
            q: "y^3 - x*z, y*z - x^4, z^2 - x^3*y^2",
            ideal: None,
        },
        Member {
            name: "four-variable surface",
            vars: &["x", "y", "z", "w"],
            q: EXAMPLE_Q,
            ideal: None,
        },
        Member {
            name: "gapped quartics",
            vars: &["x", "y"],
            q: "",
            ideal: Some("x^4, x^3*y, x*y^3, y^4"),
        },
        Member {
            name: "plane squares",
            vars: &["x", "y"],
            q: "",
            ideal: Some("x^2, x*y, y^2"),
        },
        Member {
            name: "pure squares",
            vars: &["x", "y"],
            q: "",
            ideal: Some("x^2, y^2"),
        },
        Member {
            name: "cone, ruling",
            vars: &["x", "y", "z"],
            q: "z^2 - x*y",
            ideal: Some("x, y"),
        },
        Member {
            name: "cusp, parameter",
            vars: &["x", "y"],
            q: "y^2 - x^3",
            ideal: Some("x"),
        },
    ]
}

// ---- polynomials as exponent maps over BigRational ----

pub type Poly = BTreeMap<Vec<u32>, BigRational>;

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let e = out.entry(m).or_insert_with(BigRational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(m.clone()).or_insert_with(BigRational::zero);
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in monomials(nvars - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Rank of dense rows by fraction-exact elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        let pivot: Vec<BigRational> = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..ncols {
                    let v = &pivot[k] * &f;
                    rows[i][k] -= v;
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// Membership of a homogeneous `f` of degree `d` in the ideal of
/// homogeneous `gens`: `f` must lie in the span of `m * g` in degree `d`.
pub fn brute_force_member(nvars: usize, gens: &[Poly], f: &Poly, d: u32) -> bool {
    let basis = monomials(nvars, d);
    let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let to_row = |p: &Poly| -> Vec<BigRational> {
        let mut row = vec![BigRational::zero(); basis.len()];
        for (m, c) in p {
            row[index[m]] = c.clone();
        }
        row
    };
    let mut rows = Vec::new();
    for g in gens {
        let dg: u32 = g.keys().next().map_or(0, |m| m.iter().sum());
        if dg > d {
            continue;
        }
        for m in monomials(nvars, d - dg) {
            let mono: Poly = [(m, BigRational::one())].into_iter().collect();
            rows.push(to_row(&mul(&mono, g)));
        }
    }
    let before = rank(rows.clone());
    rows.push(to_row(f));
    rank(rows) == before
}

pub fn to_text(vars: &[&str], p: &Poly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in p {
        let mut s = format!("({c})");
        for (v, &e) in vars.iter().zip(m) {
            if e > 0 {
                s.push_str(&format!("*{v}^{e}"));
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}

// ---- monomial ideals in two variables, as staircases ----

/// Minimal generators `(a, b)` of a monomial ideal in `k[x, y]`.
pub type Mono2 = Vec<(u32, u32)>;

pub fn minimize(mut g: Mono2) -> Mono2 {
    g.sort();
    g.dedup();
    let mut out: Mono2 = Vec::new();
    for &(a, b) in &g {
        if !g.iter().any(|&(c, d)| (c, d) != (a, b) && c <= a && d <= b) {
            out.push((a, b));
        }
    }
    out
}

pub fn mono_contains(g: &Mono2, (a, b): (u32, u32)) -> bool {
    g.iter().any(|&(c, d)| c <= a && d <= b)
}

pub fn mono_product(g: &Mono2, h: &Mono2) -> Mono2 {
    minimize(
        g.iter()
            .flat_map(|&(a, b)| h.iter().map(move |&(c, d)| (a + c, b + d)))
            .collect(),
    )
}

pub fn mono_power(g: &Mono2, n: u32) -> Mono2 {
    let mut p = vec![(0, 0)];
    for _ in 0..n {
        p = mono_product(&p, g);
    }
    p
}

/// Number of monomials outside an m-primary monomial ideal.
pub fn mono_colength(g: &Mono2) -> u64 {
    let ax = g.iter().filter(|m| m.1 == 0).map(|m| m.0).min().unwrap();
    let by = g.iter().filter(|m| m.0 == 0).map(|m| m.1).min().unwrap();
    let mut count = 0;
    for a in 0..ax {
        for b in 0..by {
            if !mono_contains(g, (a, b)) {
                count += 1;
            }
        }
    }
    count
}

/// `(g : h)` for m-primary `g`, by testing every monomial below the
/// staircase corners.
pub fn mono_colon(g: &Mono2, h: &Mono2) -> Mono2 {
    let ax = g.iter().filter(|m| m.1 == 0).map(|m| m.0).min().unwrap();
    let by = g.iter().filter(|m| m.0 == 0).map(|m| m.1).min().unwrap();
    let mut gens = vec![(ax, 0), (0, by)];
    for a in 0..=ax {
        for b in 0..=by {
            if h.iter().all(|&(c, d)| mono_contains(g, (a + c, b + d))) {
                gens.push((a, b));
            }
        }
    }
    minimize(gens)
}

/// Ratliff-Rush closure of `I^n` for a monomial ideal: the union of
/// `(I^{n+k} : I^k)` over `k <= 8`.
pub fn mono_rr_closure(g: &Mono2, n: u32) -> Mono2 {
    let mut acc = mono_power(g, n);
    for k in 1..=8 {
        let c = mono_colon(&mono_power(g, n + k), &mono_power(g, k));
        acc = minimize(acc.into_iter().chain(c).collect());
    }
    acc
}
