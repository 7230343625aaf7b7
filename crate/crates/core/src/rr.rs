//! Ratliff-Rush closures of powers, the stabilization index `rho`, colon
//! checks with superficial elements and the degree-wise exactness checks
//! relating `A` and `A/xA`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::artinian::echelon;
use crate::config::{random_coeff, Config};
use crate::error::{Error, Result};
use crate::homology::{koszul_grade, CyclicModule};
use crate::ideal::Ideal;
use crate::linalg::Echelon;
use crate::local::{validate_local_input, LocalRing, MPrimary};
use crate::poly::Polynomial;

/// `tilde(I^n)` with its colength and the colengths seen along the chain
/// `(I^{n+j} : I^j)`, `j = 1, 2, ...`.
#[derive(Clone, Debug)]
pub struct Closure {
    pub power: u32,
    pub ideal: Ideal,
    pub colength: u64,
    pub defect: u64,
    pub chain: Vec<u64>,
}

/// `(0 : I) = 0` in `A`, i.e. `(q : I) ⊆ q` at the origin.
pub fn has_positive_grade(i: &MPrimary) -> Result<bool> {
    let q = i.local().q();
    if q.is_zero() {
        return Ok(true);
    }
    q.colon(&i.ideal())?.locally_contained_in(q)
}

fn require_grade(i: &MPrimary) -> Result<()> {
    if has_positive_grade(i)? {
        Ok(())
    } else {
        Err(Error::GradeZero)
    }
}

fn closure_unchecked(i: &MPrimary, n: u32, cfg: &Config) -> Result<Closure> {
    if n == 0 {
        return Ok(Closure {
            power: 0,
            ideal: Ideal::unit(i.ring()),
            colength: 0,
            defect: 0,
            chain: Vec::new(),
        });
    }
    let base = i.colength(n)?;
    let mut chain = Vec::new();
    let mut j = 1;
    loop {
        if j > cfg.chain_cap {
            return Err(Error::Budget(format!(
                "Ratliff-Rush chain for power {n} not stable after {} steps",
                cfg.chain_cap
            )));
        }
        let b = i.algebra(n + j)?;
        let mut space = Vec::new();
        for _ in 0..j {
            space = b.colon_space(&echelon(&space), i.gens());
        }
        chain.push((b.dim() - space.len()) as u64);
        let k = chain.len();
        if k >= 3 && chain[k - 1] == chain[k - 2] && chain[k - 2] == chain[k - 3] {
            let colength = chain[k - 1];
            let ideal = b.lift_ideal(&space).reduced()?;
            return Ok(Closure {
                power: n,
                ideal,
                colength,
                defect: base - colength,
                chain,
            });
        }
        j += 1;
    }
}

/// `tilde(I^n)`: the stable value of `(I^{n+j} : I^j)`, declared after two
/// consecutive steps without change.
pub fn rr_closure(i: &MPrimary, n: u32, cfg: &Config) -> Result<Closure> {
    require_grade(i)?;
    closure_unchecked(i, n, cfg)
}

#[derive(Clone, Debug)]
pub struct RrReport {
    /// `None` when a nonzero defect remains at the bound.
    pub rho: Option<u32>,
    pub table: Vec<Closure>,
    pub n_max: u32,
    pub seed: u64,
}

impl RrReport {
    pub fn defect(&self, n: u32) -> Option<u64> {
        if n == 0 {
            return Some(0);
        }
        self.table.get(n as usize - 1).map(|c| c.defect)
    }

    pub fn to_json(&self) -> Value {
        let rho = match self.rho {
            Some(r) => json!(r),
            None => json!("exceeds bound"),
        };
        let table: Vec<Value> = self
            .table
            .iter()
            .map(|c| {
                json!({
                    "power": c.power,
                    "defect": c.defect,
                    "closure_gens": c.ideal.gens_text(),
                    "chain_colengths": c.chain,
                })
            })
            .collect();
        json!({
            "rho": rho,
            "table": table,
            "seed": self.seed,
            "bounds": {"n_max": self.n_max},
        })
    }
}

fn rho_from_defects(defects: &[u64]) -> Option<u32> {
    // defects[k] belongs to power k + 1
    if defects.last().is_some_and(|&d| d > 0) {
        return None;
    }
    let last_bad = defects.iter().rposition(|&d| d > 0);
    Some(last_bad.map_or(0, |p| p as u32 + 2))
}

/// Defects `λ(tilde(I^n)/I^n)` for `1 <= n <= n_max` and the least `rho`
/// after which all of them vanish inside the window.
pub fn rho(i: &MPrimary, n_max: u32, cfg: &Config) -> Result<RrReport> {
    require_grade(i)?;
    let table = (1..=n_max)
        .map(|n| closure_unchecked(i, n, cfg))
        .collect::<Result<Vec<_>>>()?;
    let defects: Vec<u64> = table.iter().map(|c| c.defect).collect();
    Ok(RrReport {
        rho: rho_from_defects(&defects),
        table,
        n_max,
        seed: cfg.seed,
    })
}

/// `(q + I^{n+1} : x) = q + I^n`, decided by the dimension of the kernel of
/// `x` on `k[x]/(q + I^{n+1})`, which contains `I^n` modulo `I^{n+1}`.
pub fn colon_is_power(i: &MPrimary, x: &Polynomial, n: u32) -> Result<bool> {
    let b = i.algebra(n + 1)?;
    let kernel = b.dim() - b.mul_rank(x);
    Ok(kernel as u64 == i.hilbert(n)?)
}

/// Least `r` with `(I^{n+1} : x) = I^n` for `r <= n <= n_max`.
pub fn rho_via_colon(i: &MPrimary, x: &Superficial, n_max: u32) -> Result<Option<u32>> {
    let mut r = None;
    for n in (0..=n_max).rev() {
        if colon_is_power(i, &x.element, n)? {
            r = Some(n);
        } else {
            break;
        }
    }
    Ok(r)
}

/// An element of `I` that passed the colon checks over `window`.
#[derive(Clone, Debug, Serialize)]
pub struct Superficial {
    #[serde(serialize_with = "ser_poly")]
    pub element: Polynomial,
    pub coefficients: Vec<String>,
    pub window: (u32, u32),
    pub attempts: u32,
}

fn ser_poly<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Checks `(I^{n+1} : x) = I^n` for `rho <= n <= n_check`, with `rho` the
/// observed stabilization index.
pub fn verify_superficial(
    i: &MPrimary,
    x: &Polynomial,
    n_check: u32,
    cfg: &Config,
) -> Result<Superficial> {
    let r = rho(i, n_check, cfg)?;
    let start = r.rho.ok_or_else(|| {
        Error::Budget(format!(
            "Ratliff-Rush index exceeds {n_check}; superficiality not checkable"
        ))
    })?;
    for n in start..=n_check {
        if !colon_is_power(i, x, n)? {
            return Err(Error::Precondition(format!(
                "{x} is not superficial: (I^{} : x) != I^{n}",
                n + 1
            )));
        }
    }
    Ok(Superficial {
        element: x.clone(),
        coefficients: Vec::new(),
        window: (start, n_check),
        attempts: 0,
    })
}

/// A random combination of the generators of `I` passing the colon checks
/// over `rho <= n <= n_check`; a principal ideal returns its generator.
pub fn find_superficial(i: &MPrimary, n_check: u32, cfg: &Config) -> Result<Superficial> {
    let r = rho(i, n_check, cfg)?;
    let start = r.rho.ok_or_else(|| {
        Error::Budget(format!(
            "Ratliff-Rush index exceeds {n_check}; superficiality not checkable"
        ))
    })?;
    let ring = i.ring().clone();
    let check = |x: &Polynomial| -> Result<bool> {
        for n in start..=n_check {
            if !colon_is_power(i, x, n)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if i.gens().len() == 1 {
        let x = i.gens()[0].clone();
        if check(&x)? {
            return Ok(Superficial {
                element: x,
                coefficients: vec!["1".into()],
                window: (start, n_check),
                attempts: 1,
            });
        }
        return Err(Error::NoSuperficial(1));
    }
    let mut rng = cfg.rng(0x73757066);
    for attempt in 1..=cfg.attempts {
        let coeffs: Vec<_> = i
            .gens()
            .iter()
            .map(|_| random_coeff(&mut rng, ring.field))
            .collect();
        let mut x = Polynomial::zero(&ring);
        for (g, c) in i.gens().iter().zip(&coeffs) {
            x = &x + &g.scale(c);
        }
        if !x.is_zero() && check(&x)? {
            return Ok(Superficial {
                element: x,
                coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
                window: (start, n_check),
                attempts: attempt,
            });
        }
    }
    Err(Error::NoSuperficial(cfg.attempts as usize))
}

/// One degree of the sequence
/// `0 -> (I^{n+1}:x)/I^n -> tilde(I^n)/I^n -> tilde(I^{n+1})/I^{n+1} -> tilde(I^{n+1}N)/I^{n+1}N`
/// with `N = A/xA`.
#[derive(Clone, Debug, Serialize)]
pub struct SupexCheck {
    pub n: u32,
    pub pass: bool,
    /// Lengths of the four terms, left to right.
    pub lengths: [u64; 4],
    pub failures: Vec<String>,
}

/// `grade(m, A)`, by regular sequences in the local ring.
pub fn local_depth(pres: &LocalRing, cfg: &Config) -> Result<usize> {
    let vars: Vec<Polynomial> = (0..pres.nvars())
        .map(|v| Polynomial::var(pres.ring(), v))
        .collect();
    koszul_grade(&vars, &CyclicModule::local(pres.q().clone()), cfg)
}

fn span_dim_sum(a: &Echelon, b: &Echelon) -> usize {
    let mut e = a.clone();
    for r in b.reduced_rows() {
        e.insert(&r);
    }
    e.rank()
}

/// Checks the maps of the sequence in degree `n`: the left map lands in
/// `tilde(I^n)`, multiplication by `x` sends `tilde(I^n)` into
/// `tilde(I^{n+1})`, the reduction lands in `tilde(I^{n+1}N)`, and the
/// kernel of the reduction is the image of multiplication by `x`.
pub fn check_supex_n(i: &MPrimary, x: &Superficial, n: u32, cfg: &Config) -> Result<SupexCheck> {
    let pres = i.local();
    let depth = local_depth(pres, cfg)?;
    if depth < 2 {
        return Err(Error::Precondition(format!("depth A = {depth} < 2")));
    }
    let xe = &x.element;
    let b = i.algebra(n + 1)?;
    let tn = rr_closure(i, n, cfg)?;
    let tn1 = rr_closure(i, n + 1, cfg)?;
    let mut failures = Vec::new();

    let colon = echelon(&b.colon_poly_space(&Echelon::new(), xe));
    let tn_span = b.ideal_span(tn.ideal.gens());
    let tn1_span = b.ideal_span(tn1.ideal.gens());
    let h = i.hilbert(n)?;
    let l1 = colon.rank() as u64 - h;
    if span_dim_sum(&tn_span, &colon) != tn_span.rank() {
        failures.push(format!("(I^{} : x) not contained in tilde(I^{n})", n + 1));
    }
    let x_tn: Vec<Polynomial> = tn.ideal.gens().iter().map(|g| g * xe).collect();
    let x_span = b.ideal_span(&x_tn);
    if span_dim_sum(&tn1_span, &x_span) != tn1_span.rank() {
        failures.push(format!(
            "x tilde(I^{n}) not contained in tilde(I^{})",
            n + 1
        ));
    }
    let principal = b.ideal_span(std::slice::from_ref(xe));
    let meet = tn1_span.rank() + principal.rank() - span_dim_sum(&tn1_span, &principal);
    if meet != x_span.rank() {
        failures.push(format!(
            "kernel of reduction has dimension {meet}, image of x has {}",
            x_span.rank()
        ));
    }

    let mut qn = pres.q().gens().to_vec();
    qn.push(xe.clone());
    let quotient = LocalRing::new(pres.ring(), qn)?;
    let i_n = validate_local_input(&quotient, i.gens())?;
    let tn1_n = rr_closure(&i_n, n + 1, cfg)?;
    let lifted = tn1.ideal.add_gens(std::slice::from_ref(xe));
    if !tn1_n.ideal.contains_ideal(&lifted)? {
        failures.push(format!(
            "image of tilde(I^{}) not inside its closure modulo x",
            n + 1
        ));
    }
    let lengths = [l1, tn.defect, tn1.defect, tn1_n.defect];
    if lengths[2] + lengths[0] > lengths[1] + lengths[3] {
        failures.push(format!("length count {lengths:?} violates exactness"));
    }
    Ok(SupexCheck {
        n,
        pass: failures.is_empty(),
        lengths,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polys;
    use crate::poly::Ring;

    fn mprimary(vars: &[&str], q: &str, i: &str) -> MPrimary {
        let r = Ring::new(Field::Rational, vars.iter().copied());
        let pres = LocalRing::new(&r, parse_polys(&r, q).unwrap()).unwrap();
        validate_local_input(&pres, &parse_polys(&r, i).unwrap()).unwrap()
    }

    #[test]
    fn closures_of_maximal_powers() {
        let i = mprimary(&["x", "y"], "", "x, y");
        let cfg = Config::default();
        for n in 1..4 {
            let c = rr_closure(&i, n, &cfg).unwrap();
            assert_eq!(c.defect, 0);
            assert!(c.ideal.equals(&i.power(n).unwrap()).unwrap());
        }
        assert_eq!(rho(&i, 4, &cfg).unwrap().rho, Some(0));
    }

    #[test]
    fn monomial_example() {
        let i = mprimary(&["x", "y"], "", "x^4, x^3*y, x*y^3, y^4");
        let cfg = Config::default();
        let c = rr_closure(&i, 1, &cfg).unwrap();
        assert_eq!(c.defect, 1);
        let r = i.ring();
        let expect = i.ideal().add_gens(&parse_polys(r, "x^2*y^2").unwrap());
        assert!(c.ideal.equals(&expect).unwrap());
        // x^2 y^2 I ⊆ I^2
        let sq = i.ideal().power(2).unwrap();
        for g in i.gens() {
            assert!(sq
                .contains(&(g * &parse_polys(r, "x^2*y^2").unwrap()[0]))
                .unwrap());
        }
        let rep = rho(&i, 5, &cfg).unwrap();
        assert_eq!(rep.rho, Some(2));
        let x = find_superficial(&i, 5, &cfg).unwrap();
        assert_eq!(rho_via_colon(&i, &x, 5).unwrap(), Some(2));
        // x^5 lies in m I, so it cannot be superficial
        let bad = parse_polys(r, "x^5").unwrap().remove(0);
        assert!(verify_superficial(&i, &bad, 5, &cfg).is_err());
    }

    #[test]
    fn grade_zero_rejected() {
        let i = mprimary(&["x", "y"], "x^2, x*y", "x, y");
        assert!(matches!(
            rr_closure(&i, 1, &Config::default()),
            Err(Error::GradeZero)
        ));
    }

    #[test]
    fn rho_exceeding_window() {
        let i = mprimary(&["x", "y"], "", "x^4, x^3*y, x*y^3, y^4");
        let rep = rho(&i, 1, &Config::default()).unwrap();
        assert_eq!(rep.rho, None);
        assert_eq!(rep.to_json()["rho"], "exceeds bound");
    }

    #[test]
    fn exactness_checks() {
        let cfg = Config::default();
        let i = mprimary(&["x", "y"], "", "x^4, x^3*y, x*y^3, y^4");
        let x = find_superficial(&i, 5, &cfg).unwrap();
        for n in 0..4 {
            let c = check_supex_n(&i, &x, n, &cfg).unwrap();
            assert!(c.pass, "{c:?}");
        }
        let c = check_supex_n(&i, &x, 1, &cfg).unwrap();
        assert!(c.lengths[1] > 0);
    }
}
