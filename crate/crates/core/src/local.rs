//! The local ring `A = (k[x]/q)` at the origin, its m-primary ideals,
//! lengths, Hilbert functions and tangent cone.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::artinian::Artinian;
use crate::error::{Error, Result};
use crate::groebner;
use crate::ideal::Ideal;
use crate::monomial::MonomialOrder;
use crate::poly::{Polynomial, Ring};

/// `A = k[x]/q` localized at the origin.
#[derive(Clone, Debug)]
pub struct LocalRing {
    ring: Arc<Ring>,
    q: Ideal,
}

impl LocalRing {
    /// Rejects generators of `q` with a nonzero constant term.
    pub fn new(ring: &Arc<Ring>, q: Vec<Polynomial>) -> Result<LocalRing> {
        if ring.nvars() == 0 {
            return Err(Error::InvalidInput("at least one variable required".into()));
        }
        for g in &q {
            ring.check_same(g.ring())?;
            if !g.constant_term().is_zero() {
                return Err(Error::UnitInQ(g.to_string()));
            }
        }
        Ok(LocalRing {
            ring: ring.clone(),
            q: Ideal::new(ring, q),
        })
    }

    pub fn regular(ring: &Arc<Ring>) -> LocalRing {
        LocalRing::new(ring, Vec::new()).unwrap()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn q(&self) -> &Ideal {
        &self.q
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// The maximal ideal, certified without further checks.
    pub fn maximal(&self) -> MPrimary {
        let gens = (0..self.nvars())
            .map(|i| Polynomial::var(&self.ring, i))
            .collect();
        MPrimary::certified(self.clone(), gens, true)
    }

    /// Krull dimension of `A` (of `k[x]/q`; they agree because every
    /// component of `q` through the origin is seen by the local ring and
    /// dimension is measured at the origin).
    pub fn dimension(&self) -> Result<usize> {
        local_dimension(&self.q)
    }
}

/// Dimension of `(k[x]/K)` at the origin: the degree of the Hilbert-Samuel
/// polynomial, read from the tangent cone's initial ideal.
pub fn local_dimension(k: &Ideal) -> Result<usize> {
    let cone = tangent_cone_ideal(k)?;
    Ok(cone.dimension()?.unwrap_or(0))
}

/// An m-primary ideal of a [`LocalRing`], with the powers `q + I^n` cached.
pub struct MPrimary {
    local: LocalRing,
    gens: Vec<Polynomial>,
    is_maximal: bool,
    powers: Mutex<Vec<Ideal>>,
    algebras: Mutex<HashMap<u32, Arc<Artinian>>>,
}

impl std::fmt::Debug for MPrimary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "MPrimary({})", g.join(", "))
    }
}

impl MPrimary {
    fn certified(local: LocalRing, gens: Vec<Polynomial>, is_maximal: bool) -> MPrimary {
        let unit = Ideal::unit(local.ring());
        MPrimary {
            local,
            gens,
            is_maximal,
            powers: Mutex::new(vec![unit]),
            algebras: Mutex::new(HashMap::new()),
        }
    }

    pub fn local(&self) -> &LocalRing {
        &self.local
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.local.ring()
    }

    pub fn is_maximal(&self) -> bool {
        self.is_maximal
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(self.ring(), self.gens.clone())
    }

    /// `q + I^n` (the unit ideal for `n = 0`), as a reduced basis.
    pub fn power(&self, n: u32) -> Result<Ideal> {
        let mut p = self.powers.lock().unwrap();
        while p.len() <= n as usize {
            let prev = p.last().unwrap().clone();
            let gb = prev.gb()?;
            let mut gens: Vec<Polynomial> = self.local.q().gens().to_vec();
            for a in &gb.elements {
                for b in &self.gens {
                    gens.push(a * b);
                }
            }
            p.push(Ideal::new(self.ring(), gens).reduced()?);
        }
        Ok(p[n as usize].clone())
    }

    /// The finite algebra `k[x]/(q + I^n)`, `n >= 1`.
    pub fn algebra(&self, n: u32) -> Result<Arc<Artinian>> {
        if let Some(a) = self.algebras.lock().unwrap().get(&n) {
            return Ok(a.clone());
        }
        let a = Arc::new(Artinian::new(&self.power(n)?)?);
        self.algebras.lock().unwrap().insert(n, a.clone());
        Ok(a)
    }

    /// `λ(A / I^n)`
    pub fn colength(&self, n: u32) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        Ok(self.power(n)?.colength()?.expect("origin-supported"))
    }

    /// `λ(I^n / I^{n+1})`
    pub fn hilbert(&self, n: u32) -> Result<u64> {
        Ok(self.colength(n + 1)? - self.colength(n)?)
    }
}

/// Certifies that `I` is m-primary in the local ring: `q + I` must have the
/// origin as its only zero.
pub fn validate_local_input(pres: &LocalRing, gens: &[Polynomial]) -> Result<MPrimary> {
    for g in gens {
        pres.ring().check_same(g.ring())?;
    }
    if gens.iter().any(|g| !g.constant_term().is_zero()) {
        return Err(Error::NotMPrimary("a generator is a unit".into()));
    }
    let sum = pres.q().add_gens(gens);
    if sum.dimension()? != Some(0) {
        let d = sum.dimension()?.unwrap_or(0);
        return Err(Error::NotMPrimary(format!(
            "dim k[x]/(q + I) = {d} for I = ({})",
            gens.iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    for i in 0..pres.nvars() {
        if !sum.radical_contains(&Polynomial::var(pres.ring(), i))? {
            return Err(Error::NotMPrimary(format!(
                "{} is not nilpotent modulo q + I",
                pres.ring().vars[i]
            )));
        }
    }
    let maximal = gens.len() == pres.nvars()
        && (0..pres.nvars()).all(|i| gens.contains(&Polynomial::var(pres.ring(), i)));
    Ok(MPrimary::certified(pres.clone(), gens.to_vec(), maximal))
}

/// Ideal of lowest-degree forms of `K`, computed from a basis of the
/// homogenization under an order that prefers the homogenizing variable.
pub fn tangent_cone_ideal(k: &Ideal) -> Result<Ideal> {
    let ring = k.ring();
    if k.is_zero() {
        return Ok(Ideal::zero(ring));
    }
    let h = ring.fresh_name("h");
    let big = ring.extend(&[], &[h]);
    let hom: Vec<Polynomial> = k.gens().iter().map(|g| g.homogenize(&big)).collect();
    let gb = groebner::buchberger_in(&big, &hom, MonomialOrder::TangentCone, None)?;
    let forms: Vec<Polynomial> = gb
        .elements
        .iter()
        .map(|g| g.dehomogenize(ring).lowest_form())
        .collect();
    Ideal::new(ring, forms).reduced()
}

/// The tangent cone `G_m(A) = k[X]/q*`.
#[derive(Clone, Debug)]
pub struct TangentCone {
    pub initial_ideal: Ideal,
}

pub fn tangent_cone(pres: &LocalRing) -> Result<TangentCone> {
    let q_star = tangent_cone_ideal(pres.q())?;
    for g in q_star.gens() {
        if !g.is_homogeneous() {
            return Err(Error::Certificate(format!(
                "tangent cone generator {g} not homogeneous"
            )));
        }
    }
    Ok(TangentCone {
        initial_ideal: q_star,
    })
}

impl TangentCone {
    /// Hilbert function of `k[X]/q*` in degree `n`, from the staircase.
    pub fn hilbert(&self, n: u32) -> Result<u64> {
        let gb = self.initial_ideal.gb()?;
        let lead = gb.leading_monomials();
        let nv = self.initial_ideal.ring().nvars();
        Ok(monomials_of_degree(nv, n)
            .into_iter()
            .filter(|m| !lead.iter().any(|l| l.divides(m)))
            .count() as u64)
    }
}

pub(crate) fn monomials_of_degree(nvars: usize, d: u32) -> Vec<crate::monomial::Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<crate::monomial::Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left as u16;
            out.push(crate::monomial::Monomial::from_exps(cur));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(crate::monomial::Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// `λ(I^n / I^{n+1})`
pub fn hilbert_function(i: &MPrimary, n: u32) -> Result<u64> {
    i.hilbert(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_polys;

    fn local(vars: &[&str], q: &str) -> LocalRing {
        let r = Ring::new(Field::Rational, vars.iter().copied());
        let q = parse_polys(&r, q).unwrap();
        LocalRing::new(&r, q).unwrap()
    }

    #[test]
    fn validation() {
        let a = local(&["x", "y"], "");
        assert!(validate_local_input(&a, &parse_polys(a.ring(), "x, y").unwrap()).is_ok());
        assert!(matches!(
            validate_local_input(&a, &parse_polys(a.ring(), "x").unwrap()),
            Err(Error::NotMPrimary(_))
        ));
        let cusp = local(&["x", "y"], "y^2 - x^3");
        assert!(validate_local_input(&cusp, &parse_polys(cusp.ring(), "x").unwrap()).is_ok());
        let r = Ring::new(Field::Rational, ["x"]);
        assert!(matches!(
            LocalRing::new(&r, parse_polys(&r, "x + 1").unwrap()),
            Err(Error::UnitInQ(_))
        ));
        // a far-away point is caught by the radical test
        let far = local(&["x", "y"], "");
        assert!(
            validate_local_input(&far, &parse_polys(far.ring(), "x^2 - x, y").unwrap()).is_err()
        );
    }

    #[test]
    fn tangent_cones() {
        let cusp = local(&["x", "y"], "y^2 - x^3");
        let c = tangent_cone(&cusp).unwrap();
        assert_eq!(c.initial_ideal.to_string(), "(y^2)");
        let reg = local(&["x", "y"], "");
        assert!(tangent_cone(&reg).unwrap().initial_ideal.is_zero());
        // lowest forms of the generators alone would give (y)
        let t = local(&["x", "y"], "y - x^3, y + x^2");
        assert_eq!(
            tangent_cone(&t).unwrap().initial_ideal.to_string(),
            "(y, x^2)"
        );
    }

    #[test]
    fn hilbert_functions() {
        let reg = local(&["x", "y"], "");
        assert_eq!(hilbert_function(&reg.maximal(), 3).unwrap(), 4);
        let dbl = local(&["x", "y"], "y^2");
        assert_eq!(hilbert_function(&dbl.maximal(), 5).unwrap(), 2);
        let cusp = local(&["x", "y"], "y^2 - x^3");
        assert_eq!(hilbert_function(&cusp.maximal(), 0).unwrap(), 1);
        let cone = tangent_cone(&cusp).unwrap();
        for n in 0..6 {
            assert_eq!(
                hilbert_function(&cusp.maximal(), n).unwrap(),
                cone.hilbert(n).unwrap()
            );
        }
    }
}
