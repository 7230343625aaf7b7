//! Command execution and report emission.

use std::fmt::Write as _;
use std::io::{self, Write};

use rayon::prelude::*;
use serde_json::{json, Value};

use rrfilt::blowup::{
    depth_assoc_graded, depth_fiber, depth_rees, depth_table_powers, rees_presentation,
};
use rrfilt::config::Config;
use rrfilt::criteria::{self, CriterionVerdict, Verdict};
use rrfilt::homology::{
    a_invariants, depth_and_reg, ext_graded_piece, module_dimension, reg_from_a_invariants,
};
use rrfilt::ideal::Ideal;
use rrfilt::local::{local_dimension, tangent_cone, validate_local_input, LocalRing, MPrimary};
use rrfilt::rr::{check_supex_n, find_superficial, local_depth, rho, rr_closure};
use rrfilt::{Error, Polynomial};

use crate::session::{Command, Criterion, NamedIdeal, Session};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Inconclusive,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Inconclusive => "inconclusive",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub index: usize,
    pub command: String,
    pub verb: String,
    pub status: Status,
    pub result: Value,
    pub error: Option<String>,
    /// Lines of the human-readable block, without the header.
    pub human: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "index": self.index,
            "command": self.command,
            "verb": self.verb,
            "status": self.status.as_str(),
            "result": self.result,
        });
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }

    pub fn human_block(&self) -> String {
        let mut s = format!("[{}] {}\n", self.index, self.command);
        for l in &self.human {
            let _ = writeln!(s, "    {l}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "    {}: {e}", self.status.as_str());
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub commands: usize,
    pub errors: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn to_json(&self) -> Value {
        json!({"summary": {
            "commands": self.commands,
            "errors": self.errors,
            "inconclusive": self.inconclusive,
            "any_inconclusive": self.inconclusive > 0,
        }})
    }

    pub fn exit_code(&self) -> i32 {
        if self.errors > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub config: Config,
    pub fail_fast: bool,
    pub parallel: bool,
}

/// Human blocks go to `human`, JSON lines to `json`; reports appear in
/// command order either way.
pub fn run_session(
    session: &Session,
    opts: &RunOptions,
    human: Option<&mut dyn Write>,
    json: Option<&mut dyn Write>,
) -> io::Result<Summary> {
    let reports: Vec<Report> = if opts.parallel {
        session
            .commands
            .par_iter()
            .map(|c| run_command(c, &opts.config))
            .collect()
    } else {
        let mut out = Vec::new();
        for c in &session.commands {
            let r = run_command(c, &opts.config);
            let stop = opts.fail_fast && r.status == Status::Error;
            out.push(r);
            if stop {
                break;
            }
        }
        out
    };
    emit(&reports, opts.fail_fast, human, json)
}

fn emit(
    reports: &[Report],
    fail_fast: bool,
    mut human: Option<&mut dyn Write>,
    mut json: Option<&mut dyn Write>,
) -> io::Result<Summary> {
    let mut summary = Summary::default();
    for r in reports {
        summary.commands += 1;
        match r.status {
            Status::Error => summary.errors += 1,
            Status::Inconclusive => summary.inconclusive += 1,
            Status::Ok => {}
        }
        if let Some(h) = human.as_deref_mut() {
            h.write_all(r.human_block().as_bytes())?;
        }
        if let Some(j) = json.as_deref_mut() {
            writeln!(j, "{}", r.to_json())?;
        }
        if fail_fast && r.status == Status::Error {
            break;
        }
    }
    if summary.commands > 0 {
        if let Some(h) = human {
            writeln!(
                h,
                "{} command(s), {} error(s), {} inconclusive",
                summary.commands, summary.errors, summary.inconclusive
            )?;
        }
        if let Some(j) = json {
            writeln!(j, "{}", summary.to_json())?;
        }
    }
    Ok(summary)
}

fn config_for(c: &Command, base: &Config) -> Config {
    let o = &c.options;
    Config {
        seed: o.seed.unwrap_or(base.seed),
        n_max: o.n_max.unwrap_or(base.n_max),
        koszul_cap: o.koszul_cap.unwrap_or(base.koszul_cap),
        power_cap: o.power_cap.unwrap_or(base.power_cap),
        ..base.clone()
    }
}

/// Reduced degrevlex basis, ascending by leading monomial.
fn basis_text(i: &Ideal) -> rrfilt::Result<Vec<String>> {
    Ok(i.gb()?.elements.iter().map(|g| g.to_string()).collect())
}

fn ideal_of(n: &NamedIdeal) -> Ideal {
    Ideal::new(&n.ring, n.gens.clone())
}

fn local_ring(c: &Command) -> rrfilt::Result<LocalRing> {
    LocalRing::new(&c.q.ring, c.q.gens.clone())
}

fn mprimary(c: &Command, pres: &LocalRing) -> rrfilt::Result<MPrimary> {
    match &c.ideal {
        None => Ok(pres.maximal()),
        Some(i) => validate_local_input(pres, &i.gens),
    }
}

struct Out {
    status: Status,
    result: Value,
    human: Vec<String>,
}

impl Out {
    fn ok(result: Value, human: Vec<String>) -> Out {
        Out {
            status: Status::Ok,
            result,
            human,
        }
    }
}

fn verdict_out(v: CriterionVerdict) -> Out {
    let status = if v.verdict == Verdict::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    let mut human = vec![
        format!("verdict: {}", v.verdict),
        format!("statement: {}", v.statement),
    ];
    if let Some(b) = &v.budget {
        human.push(format!("budget: {b}"));
    }
    human.push(format!("evidence: {}", v.evidence));
    Out {
        status,
        result: v.to_json(),
        human,
    }
}

pub fn run_command(c: &Command, base: &Config) -> Report {
    let cfg = config_for(c, base);
    let (status, result, human, error) = match execute(c, &cfg) {
        Ok(o) => (o.status, o.result, o.human, None),
        Err(e) if e.is_budget() => (
            Status::Inconclusive,
            Value::Null,
            Vec::new(),
            Some(e.to_string()),
        ),
        Err(e) => (Status::Error, Value::Null, Vec::new(), Some(e.to_string())),
    };
    Report {
        index: c.index,
        command: c.text.clone(),
        verb: c.verb.clone(),
        status,
        result,
        error,
        human,
    }
}

fn execute(c: &Command, cfg: &Config) -> rrfilt::Result<Out> {
    match c.verb.as_str() {
        "gb" => {
            let gens = basis_text(&ideal_of(&c.q))?;
            let human = vec![format!("{}: {}", c.q.name, gens.join(", "))];
            Ok(Out::ok(json!({"ideal": c.q.name, "gb": gens}), human))
        }
        "tangent_cone" => {
            let pres = local_ring(c)?;
            let tc = tangent_cone(&pres)?;
            let gens = basis_text(&tc.initial_ideal)?;
            let hilbert = (0..=5)
                .map(|n| tc.hilbert(n))
                .collect::<rrfilt::Result<Vec<_>>>()?;
            let human = vec![
                format!("q*: {}", gens.join(", ")),
                format!("Hilbert function 0..5: {hilbert:?}"),
            ];
            Ok(Out::ok(
                json!({"q_star_gens": gens, "hilbert": hilbert}),
                human,
            ))
        }
        "ratliff_rush" => {
            let pres = local_ring(c)?;
            let i = mprimary(c, &pres)?;
            let n = power_arg(c.ints[0])?;
            let cl = rr_closure(&i, n, cfg)?;
            let gens = basis_text(&cl.ideal)?;
            let human = vec![
                format!("closure of power {n}: {}", gens.join(", ")),
                format!("colength {}, defect {}", cl.colength, cl.defect),
            ];
            Ok(Out::ok(
                json!({
                    "power": n,
                    "closure_gens": gens,
                    "colength": cl.colength,
                    "defect": cl.defect,
                    "chain_colengths": cl.chain,
                }),
                human,
            ))
        }
        "rho" => {
            let pres = local_ring(c)?;
            let i = mprimary(c, &pres)?;
            let r = rho(&i, cfg.n_max, cfg)?;
            let defects: Vec<u64> = r.table.iter().map(|t| t.defect).collect();
            let (status, line) = match r.rho {
                Some(v) => (Status::Ok, format!("rho = {v}")),
                None => (Status::Inconclusive, format!("rho exceeds {}", cfg.n_max)),
            };
            Ok(Out {
                status,
                result: r.to_json(),
                human: vec![line, format!("defects 1..{}: {defects:?}", cfg.n_max)],
            })
        }
        "depth" => {
            let pres = local_ring(c)?;
            let depth_a = local_depth(&pres, cfg)?;
            let dim_a = local_dimension(pres.q())?;
            match &c.ideal {
                None => {
                    let (_, res) = criteria::tangent_cone_resolution(&pres)?;
                    let (depth_g, _) = depth_and_reg(&res.betti(), pres.nvars());
                    let human = vec![format!(
                        "depth A = {depth_a}, dim A = {dim_a}, depth G_m(A) = {depth_g}"
                    )];
                    Ok(Out::ok(
                        json!({"depth_A": depth_a, "dim_A": dim_a, "depth_G": depth_g}),
                        human,
                    ))
                }
                Some(_) => {
                    let i = mprimary(c, &pres)?;
                    let bp = rees_presentation(&i)?;
                    let g = depth_assoc_graded(&bp, dim_a, cfg)?;
                    let f = depth_fiber(&bp, dim_a, cfg)?;
                    let r = depth_rees(&bp, dim_a, cfg)?;
                    let human = vec![format!(
                        "depth A = {depth_a}, depth G_I(A) = {g}, depth F(I) = {f}, depth R(I) = {r}"
                    )];
                    Ok(Out::ok(
                        json!({"depth_A": depth_a, "dim_A": dim_a, "depth_G": g, "depth_F": f, "depth_R": r}),
                        human,
                    ))
                }
            }
        }
        "reg" => {
            let pres = local_ring(c)?;
            let (_, res) = criteria::tangent_cone_resolution(&pres)?;
            let betti = res.betti();
            let a = a_invariants(&res)?;
            let dual = reg_from_a_invariants(&a);
            let mut human: Vec<String> = betti.to_string().lines().map(|l| l.to_string()).collect();
            human.push(format!(
                "reg (Betti) = {}, reg (a-invariants) = {}",
                betti.regularity(),
                fmt_opt(dual)
            ));
            Ok(Out::ok(
                json!({"betti": betti.to_json(), "reg": betti.regularity(), "reg_from_a_invariants": dual}),
                human,
            ))
        }
        "ext_piece" => {
            let pres = local_ring(c)?;
            let (_, res) = criteria::tangent_cone_resolution(&pres)?;
            let i = usize::try_from(c.ints[0])
                .map_err(|_| Error::InvalidInput("negative Ext index".into()))?;
            let d = c.ints[1];
            let piece = ext_graded_piece(&res, i, d);
            let dim = module_dimension(&res.ext_presentation(i)?)?;
            let human = vec![format!(
                "dim_k Ext^{i}(G, R)_{d} = {piece}; Krull dimension of Ext^{i} = {}",
                dim.map_or("zero module".to_string(), |x| x.to_string())
            )];
            let mut result = json!({"index": i, "degree": d, "dim_k": piece});
            result[format!("ext{i}_dim")] = json!(dim);
            Ok(Out::ok(result, human))
        }
        "a_invariants" => {
            let pres = local_ring(c)?;
            let (_, res) = criteria::tangent_cone_resolution(&pres)?;
            let a = a_invariants(&res)?;
            let map: serde_json::Map<String, Value> = a
                .iter()
                .map(|(i, v)| (i.to_string(), v.map_or(json!("-inf"), |x| json!(x))))
                .collect();
            let human = a
                .iter()
                .map(|(i, v)| format!("a_{i} = {}", fmt_opt(*v)))
                .collect();
            Ok(Out::ok(
                json!({"a_invariants": map, "reg": reg_from_a_invariants(&a)}),
                human,
            ))
        }
        "rees" | "assoc_graded" | "fiber_cone" => {
            let pres = local_ring(c)?;
            let i = mprimary(c, &pres)?;
            let bp = rees_presentation(&i)?;
            let (ring, ideal) = match c.verb.as_str() {
                "rees" => (&bp.ring, &bp.rees_ideal),
                "assoc_graded" => (&bp.ring, &bp.assoc_graded_ideal),
                _ => (&bp.fiber_ring, &bp.fiber_ideal),
            };
            let gens = basis_text(ideal)?;
            let ygens: Vec<String> = bp.gens.iter().map(Polynomial::to_string).collect();
            let human = vec![
                format!("ring: {}", ring.vars.join(", ")),
                format!("y_j -> {}", ygens.join(", ")),
                format!("relations: {}", gens.join(", ")),
            ];
            Ok(Out::ok(
                json!({"ring": ring.vars, "images": ygens, "gens": gens}),
                human,
            ))
        }
        "depth_table" => {
            let pres = local_ring(c)?;
            let i = mprimary(c, &pres)?;
            let l = power_arg(c.ints[0])?;
            let rows = depth_table_powers(&i, l, cfg)?;
            let status = if rows.iter().any(|r| r.budget_exceeded) {
                Status::Inconclusive
            } else {
                Status::Ok
            };
            let human = rows
                .iter()
                .map(|r| {
                    format!(
                        "l = {}: {} generators, depth G = {}, depth F = {}",
                        r.power,
                        r.num_gens,
                        fmt_opt(r.depth_g),
                        fmt_opt(r.depth_f)
                    )
                })
                .collect();
            Ok(Out {
                status,
                result: json!({"rows": rows}),
                human,
            })
        }
        "check" => {
            let pres = local_ring(c)?;
            let v = match c.criterion.expect("check carries a criterion") {
                Criterion::XiGeq2 => criteria::xi_geq2_criterion(&pres, cfg)?,
                Criterion::RhoBound => criteria::rho_bound_check(&pres, cfg)?,
                Criterion::GeneralizedCm => criteria::generalized_cm_check(&pres, cfg)?,
                Criterion::AInequality => criteria::marley_inequality_check(&pres, cfg)?,
                Criterion::DepthRho => {
                    criteria::depth_positive_iff_rho_zero(&mprimary(c, &pres)?, cfg)?
                }
                Criterion::ReesDepth => criteria::huckaba_marley_check(&mprimary(c, &pres)?, cfg)?,
                Criterion::Exactness => exactness(&mprimary(c, &pres)?, cfg)?,
            };
            Ok(verdict_out(v))
        }
        v => Err(Error::InvalidInput(format!("unknown verb {v}"))),
    }
}

fn power_arg(v: i64) -> rrfilt::Result<u32> {
    u32::try_from(v).map_err(|_| Error::InvalidInput(format!("power {v} out of range")))
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or("-inf".to_string(), |x| x.to_string())
}

/// Highest degree checked in the reduction-modulo-x sequence.
const EXACTNESS_DEGREES: u32 = 6;

fn exactness(i: &MPrimary, cfg: &Config) -> rrfilt::Result<CriterionVerdict> {
    let mut window = criteria::window(cfg);
    window["degrees"] = json!([0, EXACTNESS_DEGREES]);
    let sup = find_superficial(i, cfg.n_max.min(8), cfg)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for n in 0..=EXACTNESS_DEGREES {
        let c = check_supex_n(i, &sup, n, cfg)?;
        pass &= c.pass;
        rows.push(c);
    }
    Ok(CriterionVerdict {
        criterion: "exactness".into(),
        verdict: if pass { Verdict::Holds } else { Verdict::Fails },
        budget: None,
        evidence: json!({"superficial": sup, "degrees": rows}),
        window,
        statement:
            "depth A >= 2, x superficial: the sequence relating tilde(I^n) in A and A/xA is exact"
                .into(),
    })
}
