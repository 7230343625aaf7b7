//! Structural results on Ratliff-Rush filtrations and blowup algebras,
//! packaged as checks that compute both sides and report a verdict with the
//! evidence behind it.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::blowup::{depth_assoc_graded, depth_rees, depth_table_powers, rees_presentation};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::homology::{
    a_invariants, depth_and_reg, ext_graded_piece, graded_resolution, module_dimension,
    GradedPresentation, Resolution,
};
use crate::local::{local_dimension, tangent_cone, LocalRing, MPrimary};
use crate::rr::{has_positive_grade, local_depth, rho};

/// Powers attached to the Ext criterion as corroborating depth rows.
pub const CORROBORATION_POWERS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// HOLDS and FAILS are only given when every sub-computation finished;
/// `budget` names the limit hit otherwise.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionVerdict {
    pub criterion: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
    pub evidence: Value,
    pub window: Value,
    pub statement: String,
}

impl CriterionVerdict {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("verdicts serialize")
    }
}

/// The bounds a verdict was reached under.
pub fn window(cfg: &Config) -> Value {
    json!({
        "seed": cfg.seed,
        "n_max": cfg.n_max,
        "koszul_cap": cfg.koszul_cap,
        "power_cap": cfg.power_cap,
        "chain_cap": cfg.chain_cap,
    })
}

struct Builder {
    criterion: &'static str,
    statement: &'static str,
    evidence: Map<String, Value>,
    window: Value,
}

impl Builder {
    fn new(criterion: &'static str, statement: &'static str, cfg: &Config) -> Builder {
        Builder {
            criterion,
            statement,
            evidence: Map::new(),
            window: window(cfg),
        }
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.evidence.insert(
            key.to_string(),
            serde_json::to_value(v).expect("evidence serializes"),
        );
    }

    fn finish(self, verdict: Verdict, budget: Option<String>) -> CriterionVerdict {
        CriterionVerdict {
            criterion: self.criterion.to_string(),
            verdict,
            budget,
            evidence: Value::Object(self.evidence),
            window: self.window,
            statement: self.statement.to_string(),
        }
    }

    fn decide(self, holds: bool) -> CriterionVerdict {
        self.finish(
            if holds {
                Verdict::Holds
            } else {
                Verdict::Fails
            },
            None,
        )
    }

    /// Budget errors become INCONCLUSIVE; anything else propagates.
    fn run(
        mut self,
        body: impl FnOnce(&mut Builder) -> Result<Option<bool>>,
    ) -> Result<CriterionVerdict> {
        match body(&mut self) {
            Ok(Some(h)) => Ok(self.decide(h)),
            Ok(None) => Ok(self.finish(
                Verdict::Inconclusive,
                Some("undecided within window".into()),
            )),
            Err(e) if e.is_budget() => {
                let msg = e.to_string();
                Ok(self.finish(Verdict::Inconclusive, Some(msg)))
            }
            Err(e) => Err(e),
        }
    }
}

/// Minimal resolution of the tangent cone `R/q*` together with `q*`.
pub fn tangent_cone_resolution(pres: &LocalRing) -> Result<(Vec<String>, Resolution)> {
    let tc = tangent_cone(pres)?;
    let gb = tc.initial_ideal.gb()?;
    let gens: Vec<String> = gb.elements.iter().map(|g| g.to_string()).collect();
    let res = graded_resolution(&GradedPresentation::cyclic(&tc.initial_ideal))?;
    Ok((gens, res))
}

fn a_json(a: &std::collections::BTreeMap<usize, Option<i64>>) -> Value {
    Value::Object(
        a.iter()
            .map(|(i, v)| (i.to_string(), v.map_or(json!("-inf"), |x| json!(x))))
            .collect(),
    )
}

/// `Ext^{s-1}_R(G_m(A), R)_{-(s-1)} = 0`, which decides whether
/// `depth G_{m^n}(A) >= 2` for all large `n` when `depth A >= 2`.
pub fn xi_geq2_criterion(pres: &LocalRing, cfg: &Config) -> Result<CriterionVerdict> {
    let b = Builder::new(
        "xi_geq2",
        "depth A >= 2: Ext^{s-1}_R(G_m(A), R)_{-(s-1)} = 0 iff depth G_{m^n}(A) >= 2 for all large n",
        cfg,
    );
    b.run(|b| {
        let depth = local_depth(pres, cfg)?;
        b.put("depth_A", depth);
        if depth < 2 {
            return Err(Error::Precondition("depth A < 2".into()));
        }
        let s = pres.nvars();
        let (gens, res) = tangent_cone_resolution(pres)?;
        b.put("q_star_gens", gens);
        let piece = ext_graded_piece(&res, s - 1, -(s as i64 - 1));
        b.put(
            "ext_piece",
            json!({"index": s - 1, "degree": -(s as i64 - 1), "dim_k": piece}),
        );
        let dim = module_dimension(&res.ext_presentation(s - 1)?)?;
        b.put(&format!("ext{}_dim", s - 1), dim);
        let rows = depth_table_powers(
            &pres.maximal(),
            CORROBORATION_POWERS.min(cfg.power_cap),
            cfg,
        )?;
        b.put("depth_rows", rows);
        Ok(Some(piece == 0))
    })
}

/// `rho(A) <= max{0, a_1(G_m(A)) + 1}`.
pub fn rho_bound_check(pres: &LocalRing, cfg: &Config) -> Result<CriterionVerdict> {
    let b = Builder::new("rho_bound", "rho(m) <= max{0, a_1(G_m(A)) + 1}", cfg);
    b.run(|b| {
        let m = pres.maximal();
        if !has_positive_grade(&m)? {
            return Err(Error::GradeZero);
        }
        let (_, res) = tangent_cone_resolution(pres)?;
        let a = a_invariants(&res)?;
        let a1 = a.get(&1).copied().flatten();
        b.put("a_invariants", a_json(&a));
        let bound = a1.map_or(0, |x| (x + 1).max(0));
        b.put("bound", bound);
        let r = rho(&m, cfg.n_max, cfg)?;
        b.put("rho", r.to_json()["rho"].clone());
        Ok(r.rho.map(|rho| rho as i64 <= bound))
    })
}

/// `depth G_I(A) >= 1` iff every power of `I` is Ratliff-Rush closed; the
/// depth comes from regular sequences on the associated graded ring and
/// `rho` from colon chains, two unrelated computations.
pub fn depth_positive_iff_rho_zero(i: &MPrimary, cfg: &Config) -> Result<CriterionVerdict> {
    let b = Builder::new(
        "depth_positive_iff_rho_zero",
        "grade(I, A) > 0: depth G_I(A) >= 1 iff rho(I) = 0",
        cfg,
    );
    b.run(|b| {
        if !has_positive_grade(i)? {
            return Err(Error::GradeZero);
        }
        let dim_a = local_dimension(i.local().q())?;
        let bp = rees_presentation(i)?;
        let depth = depth_assoc_graded(&bp, dim_a, cfg)?;
        b.put("depth_G", depth);
        let r = rho(i, cfg.n_max, cfg)?;
        b.put("rho", r.to_json()["rho"].clone());
        let defects: Vec<u64> = r.table.iter().map(|c| c.defect).collect();
        b.put("defects", defects);
        // a defect at the bound still settles rho != 0
        let rho_zero = r.rho == Some(0);
        Ok(Some((depth >= 1) == rho_zero))
    })
}

/// `G_m(A)` is generalized Cohen-Macaulay iff `Ext^{s-i}_R(G_m(A), R)` has
/// finite length for `1 <= i < dim A`.
pub fn generalized_cm_check(pres: &LocalRing, cfg: &Config) -> Result<CriterionVerdict> {
    let b = Builder::new(
        "generalized_cm",
        "G_m(A) is generalized Cohen-Macaulay iff dim Ext^{s-i}_R(G_m(A), R) <= 0 for 1 <= i < dim A",
        cfg,
    );
    b.run(|b| {
        let d = pres.dimension()?;
        b.put("dim_A", d);
        if d < 1 {
            return Err(Error::Precondition("dim A = 0".into()));
        }
        let s = pres.nvars();
        let (_, res) = tangent_cone_resolution(pres)?;
        let mut dims = Map::new();
        let mut ok = true;
        for i in 1..d {
            let dim = module_dimension(&res.ext_presentation(s - i)?)?;
            ok &= dim.is_none_or(|x| x == 0);
            dims.insert(format!("ext{}_dim", s - i), json!(dim));
        }
        b.put("ext_dims", Value::Object(dims));
        Ok(Some(ok))
    })
}

/// `a_{s0}(G) < a_{s0+1}(G)` for `s0 = depth G_m(A) <= depth A - 1`.
pub fn marley_inequality_check(pres: &LocalRing, cfg: &Config) -> Result<CriterionVerdict> {
    let b = Builder::new(
        "a_invariant_inequality",
        "s0 = depth G_m(A) <= depth A - 1: a_{s0}(G_m(A)) < a_{s0+1}(G_m(A))",
        cfg,
    );
    b.run(|b| {
        let (_, res) = tangent_cone_resolution(pres)?;
        let (s0, _) = depth_and_reg(&res.betti(), pres.nvars());
        let grade = local_depth(pres, cfg)?;
        b.put("depth_G", s0);
        b.put("depth_A", grade);
        if s0 + 1 > grade {
            return Err(Error::Precondition(format!(
                "depth G = {s0} is not below depth A = {grade}"
            )));
        }
        let a = a_invariants(&res)?;
        b.put("a_invariants", a_json(&a));
        let lo = a.get(&s0).copied().flatten();
        let Some(hi) = a.get(&(s0 + 1)).copied().flatten() else {
            return Ok(None);
        };
        Ok(Some(lo.is_none_or(|x| x < hi)))
    })
}

/// `depth R(I) = depth G_I(A) + 1` when `depth G_I(A) < depth A`.
pub fn huckaba_marley_check(i: &MPrimary, cfg: &Config) -> Result<CriterionVerdict> {
    let b = Builder::new(
        "rees_depth",
        "depth G_I(A) < depth A: depth R(I) = depth G_I(A) + 1",
        cfg,
    );
    b.run(|b| {
        let pres = i.local();
        let dim_a = local_dimension(pres.q())?;
        let bp = rees_presentation(i)?;
        let dg = depth_assoc_graded(&bp, dim_a, cfg)?;
        let grade = local_depth(pres, cfg)?;
        b.put("depth_G", dg);
        b.put("depth_A", grade);
        if dg >= grade {
            return Err(Error::Precondition(format!(
                "depth G = {dg} is not below depth A = {grade}"
            )));
        }
        let dr = depth_rees(&bp, dim_a, cfg)?;
        b.put("depth_R", dr);
        Ok(Some(dr == dg + 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::local::validate_local_input;
    use crate::parse::parse_polys;
    use crate::poly::Ring;

    fn pres(vars: &[&str], q: &str) -> LocalRing {
        let r = Ring::new(Field::Rational, vars.iter().copied());
        LocalRing::new(&r, parse_polys(&r, q).unwrap()).unwrap()
    }

    #[test]
    fn regular_plane() {
        let p = pres(&["x", "y"], "");
        let cfg = Config::default();
        let v = xi_geq2_criterion(&p, &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert_eq!(v.evidence["ext1_dim"], Value::Null);
        assert_eq!(rho_bound_check(&p, &cfg).unwrap().verdict, Verdict::Holds);
        assert_eq!(
            generalized_cm_check(&p, &cfg).unwrap().verdict,
            Verdict::Holds
        );
        assert!(matches!(
            marley_inequality_check(&p, &cfg),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn quadric_cone() {
        let p = pres(&["x", "y", "z"], "z^2 - x*y");
        let v = xi_geq2_criterion(&p, &Config::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
    }

    #[test]
    fn depth_xi_criterion_needs_depth_two() {
        let p = pres(&["x", "y"], "y^2 - x^3");
        assert!(matches!(
            xi_geq2_criterion(&p, &Config::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monomial_ideal() {
        let p = pres(&["x", "y"], "");
        let r = p.ring().clone();
        let i =
            validate_local_input(&p, &parse_polys(&r, "x^4, x^3*y, x*y^3, y^4").unwrap()).unwrap();
        let cfg = Config::default();
        let v = depth_positive_iff_rho_zero(&i, &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert_eq!(v.evidence["depth_G"], 0);
        assert_eq!(v.evidence["rho"], 2);
        let v = huckaba_marley_check(&i, &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert_eq!(v.evidence["depth_R"], 1);
    }

    #[test]
    fn inconclusive_when_window_too_small() {
        let p = pres(&["x", "y"], "");
        let r = p.ring().clone();
        let i =
            validate_local_input(&p, &parse_polys(&r, "x^4, x^3*y, x*y^3, y^4").unwrap()).unwrap();
        let cfg = Config {
            n_max: 1,
            ..Config::default()
        };
        let v = depth_positive_iff_rho_zero(&i, &cfg).unwrap();
        // defect at n = 1 already shows rho > 0
        assert_eq!(v.verdict, Verdict::Holds);
        let json = v.to_json();
        assert_eq!(json["verdict"], "HOLDS");
        assert_eq!(json["window"]["n_max"], 1);
    }
}
