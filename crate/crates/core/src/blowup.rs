//! Rees algebra, associated graded ring and fiber cone of an m-primary
//! ideal as quotients of `k[x, y]`, and depth tables over powers.

use std::sync::Arc;

use serde::Serialize;

use crate::artinian::Artinian;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::homology::{
    depth_and_reg, graded_resolution, koszul_grade, CyclicModule, GradedPresentation,
};
use crate::ideal::Ideal;
use crate::linalg::Echelon;
use crate::local::{local_dimension, tangent_cone, validate_local_input, MPrimary};
use crate::poly::{Polynomial, Ring};
use rand::Rng;

/// `R(I) = k[x, y]/rees`, with `y_j ↦ f_j t`.
#[derive(Clone, Debug)]
pub struct BlowupPresentation {
    /// `x_1..x_s, y_1..y_m`
    pub ring: Arc<Ring>,
    /// `y_1..y_m` alone, for the fiber cone.
    pub fiber_ring: Arc<Ring>,
    pub s: usize,
    pub gens: Vec<Polynomial>,
    pub rees_ideal: Ideal,
    pub assoc_graded_ideal: Ideal,
    pub fiber_ideal: Ideal,
}

fn y_names(base: &Ring, m: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(m);
    for j in 1..=m {
        let mut n = format!("y{j}");
        while base.var_index(&n).is_some() || names.contains(&n) {
            n.push('\'');
        }
        names.push(n);
    }
    names
}

/// Relations among `f_1 t, ..., f_m t` over `A`: `(q + (y_j - f_j t)) ∩ k[x, y]`.
pub fn rees_presentation(i: &MPrimary) -> Result<BlowupPresentation> {
    rees_of(i.local().q(), i.gens())
}

fn rees_of(q: &Ideal, gens: &[Polynomial]) -> Result<BlowupPresentation> {
    let base = q.ring().clone();
    let s = base.nvars();
    let m = gens.len();
    let ys = y_names(&base, m);
    let xy = base.extend(&[], &ys);
    let t = xy.fresh_name("t");
    let xyt = xy.extend(&[], &[t]);
    let tv = Polynomial::var(&xyt, s + m);
    let mut k: Vec<Polynomial> = q.gens().iter().map(|g| g.embed(&xyt, 0, m + 1)).collect();
    for (j, f) in gens.iter().enumerate() {
        k.push(&Polynomial::var(&xyt, s + j) - &(&f.embed(&xyt, 0, m + 1) * &tv));
    }
    let (small, rees) = Ideal::new(&xyt, k).eliminate(&[s + m])?;
    // same names, same order: identify with `xy`
    debug_assert_eq!(small.vars, xy.vars);
    let rees = Ideal::new(
        &xy,
        rees.gens()
            .iter()
            .map(|g| g.restrict(&xy, 0..s + m))
            .collect(),
    );
    let rees = rees.reduced()?;

    let mut g: Vec<Polynomial> = rees.gens().to_vec();
    g.extend(q.gens().iter().map(|h| h.embed(&xy, 0, m)));
    g.extend(gens.iter().map(|h| h.embed(&xy, 0, m)));
    let assoc = Ideal::new(&xy, g).reduced()?;

    let fiber_ring = Ring::new(base.field, ys.iter().cloned());
    let xs: Vec<usize> = (0..s).collect();
    let fiber = Ideal::new(
        &fiber_ring,
        rees.gens()
            .iter()
            .map(|g| g.set_zero(&xs).restrict(&fiber_ring, s..s + m))
            .collect(),
    )
    .reduced()?;
    let bp = BlowupPresentation {
        ring: xy,
        fiber_ring,
        s,
        gens: gens.to_vec(),
        rees_ideal: rees,
        assoc_graded_ideal: assoc,
        fiber_ideal: fiber,
    };
    bp.check_substitution(q)?;
    Ok(bp)
}

impl BlowupPresentation {
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn x_vars(&self) -> Vec<Polynomial> {
        (0..self.s)
            .map(|i| Polynomial::var(&self.ring, i))
            .collect()
    }

    pub fn y_vars(&self) -> Vec<Polynomial> {
        (0..self.num_gens())
            .map(|j| Polynomial::var(&self.ring, self.s + j))
            .collect()
    }

    /// Every relation vanishes under `y_j ↦ f_j t` modulo `q`.
    fn check_substitution(&self, q: &Ideal) -> Result<()> {
        let base = q.ring();
        let t = base.fresh_name("t");
        let xt = base.extend(&[], &[t]);
        let tv = Polynomial::var(&xt, self.s);
        let mut images: Vec<Polynomial> = (0..self.s).map(|i| Polynomial::var(&xt, i)).collect();
        images.extend(self.gens.iter().map(|f| &f.embed(&xt, 0, 1) * &tv));
        let qt = Ideal::new(&xt, q.gens().iter().map(|g| g.embed(&xt, 0, 1)).collect());
        for g in self.rees_ideal.gens() {
            if !qt.contains(&g.substitute(&xt, &images))? {
                return Err(Error::Certificate(format!(
                    "relation {g} does not vanish on f t"
                )));
            }
        }
        Ok(())
    }
}

/// `G_I(A) = k[x, y]/(rees + q + I)`.
pub fn assoc_graded_presentation(bp: &BlowupPresentation) -> Ideal {
    bp.assoc_graded_ideal.clone()
}

/// `F(I) = k[y]/fiber`.
pub fn fiber_cone_presentation(bp: &BlowupPresentation) -> GradedPresentation {
    GradedPresentation::cyclic(&bp.fiber_ideal)
}

/// For `I = m` given by the variables, `G ∩ k[y]` is the tangent cone with
/// `x_i` renamed `y_i`.
pub fn matches_tangent_cone(i: &MPrimary, bp: &BlowupPresentation) -> Result<bool> {
    let s = bp.s;
    if !i.is_maximal() || (0..s).any(|k| i.gens()[k] != Polynomial::var(i.ring(), k)) {
        return Err(Error::Precondition(
            "generators must be the variables in order".into(),
        ));
    }
    let xs: Vec<usize> = (0..s).collect();
    let (_, g) = bp.assoc_graded_ideal.eliminate(&xs)?;
    let cone = tangent_cone(i.local())?;
    let ys: Vec<Polynomial> = (0..s).map(|k| Polynomial::var(i.ring(), k)).collect();
    let back = Ideal::new(
        i.ring(),
        g.gens()
            .iter()
            .map(|p| p.substitute(i.ring(), &ys))
            .collect(),
    );
    back.equals(&cone.initial_ideal)
}

/// Up to `cap` generic linear forms in the given homogeneous degree-one
/// elements whose ideal, added to `j`, has a quotient of finite length.
fn certified_forms(
    vars: &[Polynomial],
    j: &Ideal,
    extra: &[Polynomial],
    want: usize,
    cfg: &Config,
    stream: u64,
) -> Result<Vec<Polynomial>> {
    let ring = j.ring().clone();
    let mut rng = cfg.rng(stream);
    for count in want..=cfg.koszul_cap as usize {
        for _ in 0..cfg.attempts {
            let forms: Vec<Polynomial> = (0..count)
                .map(|_| {
                    let mut h = Polynomial::zero(&ring);
                    for v in vars {
                        let c = ring.field.from_i64(rng.gen_range(0..=2));
                        h = &h + &v.scale(&c);
                    }
                    h
                })
                .collect();
            let mut gens = forms.clone();
            gens.extend(extra.iter().cloned());
            if j.add_gens(&gens).dimension()? == Some(0) {
                return Ok(forms);
            }
        }
    }
    Err(Error::KoszulBudget(format!(
        "no reduction with at most {} forms found",
        cfg.koszul_cap
    )))
}

/// `depth G_I(A)`: the grade of the y-variables (or of a certified
/// reduction when there are too many of them) on `k[x,y]/G`; the x-variables
/// are nilpotent there.
pub fn depth_assoc_graded(bp: &BlowupPresentation, dim_a: usize, cfg: &Config) -> Result<usize> {
    let j = &bp.assoc_graded_ideal;
    let ys = bp.y_vars();
    let gens = if ys.len() <= cfg.koszul_cap as usize {
        ys
    } else {
        certified_forms(&ys, j, &[], dim_a.max(1), cfg, 0x67)?
    };
    let weights = (0..bp.ring.nvars()).map(|k| (k >= bp.s) as u32).collect();
    koszul_grade(&gens, &CyclicModule::graded_by(j.clone(), weights), cfg)
}

/// `depth F(I)`, by Auslander-Buchsbaum when the fiber ring is small and by
/// grade otherwise.
pub fn depth_fiber(bp: &BlowupPresentation, dim_a: usize, cfg: &Config) -> Result<usize> {
    let m = bp.num_gens();
    if m <= 6 {
        let res = graded_resolution(&fiber_cone_presentation(bp))?;
        return Ok(depth_and_reg(&res.betti(), m).0);
    }
    let j = &bp.fiber_ideal;
    let ys: Vec<Polynomial> = (0..m).map(|k| Polynomial::var(&bp.fiber_ring, k)).collect();
    let gens = if m <= cfg.koszul_cap as usize {
        ys
    } else {
        certified_forms(&ys, j, &[], dim_a.max(1), cfg, 0x66)?
    };
    koszul_grade(&gens, &CyclicModule::graded(j.clone()), cfg)
}

/// `depth R(I)`: the grade of `(x, y)` on `k[x,y]/rees` at the origin.
pub fn depth_rees(bp: &BlowupPresentation, dim_a: usize, cfg: &Config) -> Result<usize> {
    let j = &bp.rees_ideal;
    let xs = bp.x_vars();
    let ys = bp.y_vars();
    let gens = if xs.len() + ys.len() <= cfg.koszul_cap as usize {
        let mut g = xs;
        g.extend(ys);
        g
    } else {
        let forms = certified_forms(&ys, j, &xs, dim_a.max(1), cfg, 0x72)?;
        let mut g = xs;
        g.extend(forms);
        g
    };
    koszul_grade(&gens, &CyclicModule::local(j.clone()), cfg)
}

/// Generators of `I^l` forming a basis of `I^l / m I^l`.
pub fn minimal_power_gens(i: &MPrimary, l: u32) -> Result<Vec<Polynomial>> {
    let ring = i.ring().clone();
    let p = i.power(l)?;
    let mut mp: Vec<Polynomial> = i.local().q().gens().to_vec();
    for g in p.gens() {
        for v in 0..ring.nvars() {
            mp.push(g * &Polynomial::var(&ring, v));
        }
    }
    let alg = Artinian::new(&Ideal::new(&ring, mp))?;
    let mut cands: Vec<Polynomial> = vec![Polynomial::one(&ring)];
    for _ in 0..l {
        let mut next = Vec::new();
        for c in &cands {
            for g in i.gens() {
                let prod = c * g;
                if !next.contains(&prod) {
                    next.push(prod);
                }
            }
        }
        cands = next;
    }
    let mut span = Echelon::new();
    let mut out = Vec::new();
    for c in cands {
        if span.insert(&alg.coords(&c)) {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DepthRow {
    pub power: u32,
    pub num_gens: usize,
    #[serde(rename = "depth_G")]
    pub depth_g: Option<usize>,
    #[serde(rename = "depth_F")]
    pub depth_f: Option<usize>,
    pub budget_exceeded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// `depth G_{I^l}(A)` and `depth F(I^l)` for `1 <= l <= l_max`, each row
/// computed from its own presentation.
pub fn depth_table_powers(i: &MPrimary, l_max: u32, cfg: &Config) -> Result<Vec<DepthRow>> {
    if l_max > cfg.power_cap {
        return Err(Error::Budget(format!(
            "power {l_max} above cap {}",
            cfg.power_cap
        )));
    }
    let dim_a = local_dimension(i.local().q())?;
    let mut rows = Vec::new();
    for l in 1..=l_max {
        let gens = minimal_power_gens(i, l)?;
        let mut row = DepthRow {
            power: l,
            num_gens: gens.len(),
            depth_g: None,
            depth_f: None,
            budget_exceeded: false,
            error: None,
        };
        let outcome = (|| -> Result<(usize, usize)> {
            let il = validate_local_input(i.local(), &gens)?;
            let bp = rees_presentation(&il)?;
            Ok((
                depth_assoc_graded(&bp, dim_a, cfg)?,
                depth_fiber(&bp, dim_a, cfg)?,
            ))
        })();
        match outcome {
            Ok((g, f)) => {
                row.depth_g = Some(g);
                row.depth_f = Some(f);
            }
            Err(e) if e.is_budget() => {
                row.budget_exceeded = true;
                row.error = Some(e.to_string());
            }
            Err(e) => return Err(e),
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::local::LocalRing;
    use crate::parse::parse_polys;

    fn mprimary(vars: &[&str], q: &str, i: &str) -> MPrimary {
        let r = Ring::new(Field::Rational, vars.iter().copied());
        let pres = LocalRing::new(&r, parse_polys(&r, q).unwrap()).unwrap();
        validate_local_input(&pres, &parse_polys(&r, i).unwrap()).unwrap()
    }

    #[test]
    fn blowup_of_the_plane() {
        let i = mprimary(&["x", "y"], "", "x, y");
        let bp = rees_presentation(&i).unwrap();
        assert_eq!(bp.rees_ideal.gens().len(), 1);
        let expect = Ideal::new(&bp.ring, parse_polys(&bp.ring, "x*y2 - y*y1").unwrap());
        assert!(bp.rees_ideal.equals(&expect).unwrap());
        assert!(bp.fiber_ideal.is_zero());
        assert!(matches_tangent_cone(&i, &bp).unwrap());
    }

    #[test]
    fn principal_and_veronese() {
        let p = mprimary(&["x"], "", "x");
        let bp = rees_presentation(&p).unwrap();
        assert!(bp.rees_ideal.is_zero());
        assert!(bp.fiber_ideal.is_zero());
        let v = mprimary(&["x", "y"], "", "x^2, x*y, y^2");
        let bp = rees_presentation(&v).unwrap();
        assert_eq!(bp.rees_ideal.gens().len(), 3);
        let f = Ideal::new(
            &bp.fiber_ring,
            parse_polys(&bp.fiber_ring, "y1*y3 - y2^2").unwrap(),
        );
        assert!(bp.fiber_ideal.equals(&f).unwrap());
    }

    #[test]
    fn cusp_cone_matches() {
        let i = mprimary(&["x", "y"], "y^2 - x^3", "x, y");
        let bp = rees_presentation(&i).unwrap();
        assert!(matches_tangent_cone(&i, &bp).unwrap());
    }

    #[test]
    fn depths() {
        let cfg = Config::default();
        let m = mprimary(&["x", "y"], "", "x, y");
        let rows = depth_table_powers(&m, 3, &cfg).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.depth_g == Some(2) && r.depth_f == Some(2)));
        let i = mprimary(&["x", "y"], "", "x^4, x^3*y, x*y^3, y^4");
        let bp = rees_presentation(&i).unwrap();
        assert_eq!(depth_assoc_graded(&bp, 2, &cfg).unwrap(), 0);
        assert_eq!(depth_rees(&bp, 2, &cfg).unwrap(), 1);
    }

    #[test]
    fn power_generators_are_minimal() {
        let m = mprimary(
            &["x", "y", "z", "w"],
            "-x^2*w + y*z, -y^3 + x*z, x*y^2*w - z^2",
            "x, y, z, w",
        );
        assert_eq!(minimal_power_gens(&m, 1).unwrap().len(), 4);
        assert_eq!(minimal_power_gens(&m, 2).unwrap().len(), 7);
    }
}
