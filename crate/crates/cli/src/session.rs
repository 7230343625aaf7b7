//! Name resolution: statements become commands over concrete rings and
//! ideals.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rrfilt::{Field, Polynomial, Ring};

use crate::syntax::{parse_statements, Arg, ErrorKind, Expr, FieldSpec, ParseError, Pos, Stmt};

#[derive(Clone, Debug)]
pub struct NamedIdeal {
    pub name: String,
    pub ring: Arc<Ring>,
    pub gens: Vec<Polynomial>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    XiGeq2,
    RhoBound,
    DepthRho,
    GeneralizedCm,
    AInequality,
    ReesDepth,
    Exactness,
}

pub const CRITERIA: [(&str, Criterion); 7] = [
    ("xi_geq2", Criterion::XiGeq2),
    ("rho_bound", Criterion::RhoBound),
    ("depth_rho", Criterion::DepthRho),
    ("generalized_cm", Criterion::GeneralizedCm),
    ("a_inequality", Criterion::AInequality),
    ("rees_depth", Criterion::ReesDepth),
    ("exactness", Criterion::Exactness),
];

/// Per-command overrides of the session bounds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: Option<u64>,
    pub n_max: Option<u32>,
    pub koszul_cap: Option<u32>,
    pub power_cap: Option<u32>,
}

const OPTION_KEYS: [&str; 4] = ["seed", "n_max", "koszul_cap", "power_cap"];

#[derive(Clone, Debug)]
pub struct Command {
    pub index: usize,
    pub verb: String,
    /// The command as printed back from its syntax tree.
    pub text: String,
    pub criterion: Option<Criterion>,
    /// Defining ideal of the local ring, or the ideal itself for `gb`.
    pub q: NamedIdeal,
    /// `None` for the maximal ideal.
    pub ideal: Option<NamedIdeal>,
    pub ints: Vec<i64>,
    pub options: Options,
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    pub statements: Vec<Stmt>,
    pub commands: Vec<Command>,
}

fn reference(pos: Pos, message: String) -> ParseError {
    ParseError {
        kind: ErrorKind::Reference,
        pos,
        message,
        expected: Vec::new(),
    }
}

fn syntax(pos: Pos, message: String, expected: &[&str]) -> ParseError {
    ParseError {
        kind: ErrorKind::Syntax,
        pos,
        message,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

/// `at` locates literals, which carry no position of their own.
pub fn eval(e: &Expr, ring: &Arc<Ring>, at: Pos) -> Result<Polynomial, ParseError> {
    Ok(match e {
        Expr::Num(s) => {
            let (n, d) = s.split_once('/').unwrap_or((s, "1"));
            let n: BigInt = n.parse().expect("lexer yields digits");
            let d: BigInt = d.parse().expect("lexer yields digits");
            let c = ring
                .field
                .from_fraction(&n, &d)
                .map_err(|err| reference(at, format!("literal {s}: {err}")))?;
            Polynomial::constant(ring, c)
        }
        Expr::Var(v, pos) => match ring.var_index(v) {
            Some(i) => Polynomial::var(ring, i),
            None => {
                return Err(reference(
                    *pos,
                    format!(
                        "'{v}' is not a variable of the ring [{}]",
                        ring.vars.join(", ")
                    ),
                ))
            }
        },
        Expr::Neg(a) => -&eval(a, ring, at)?,
        Expr::Add(a, b) => &eval(a, ring, at)? + &eval(b, ring, at)?,
        Expr::Sub(a, b) => &eval(a, ring, at)? - &eval(b, ring, at)?,
        Expr::Mul(a, b) => &eval(a, ring, at)? * &eval(b, ring, at)?,
        Expr::Pow(a, n) => eval(a, ring, at)?.pow(*n),
    })
}

struct Shape {
    /// Leading criterion keyword (for `check`).
    criterion: bool,
    /// Whether the second ideal is allowed.
    ideal: bool,
    ints: usize,
}

fn shape(verb: &str) -> Shape {
    let (criterion, ideal, ints) = match verb {
        "gb" | "tangent_cone" | "reg" | "a_invariants" => (false, false, 0),
        "ratliff_rush" => (false, true, 1),
        "rho" | "depth" | "rees" | "assoc_graded" | "fiber_cone" => (false, true, 0),
        "ext_piece" => (false, false, 2),
        "depth_table" => (false, true, 1),
        "check" => (true, true, 0),
        _ => unreachable!("verbs are checked by the parser"),
    };
    Shape {
        criterion,
        ideal,
        ints,
    }
}

fn usage(verb: &str) -> String {
    let s = shape(verb);
    let mut parts = Vec::new();
    if s.criterion {
        parts.push("criterion".to_string());
    }
    parts.push(if verb == "gb" { "I" } else { "q" }.to_string());
    if s.ideal {
        parts.push("[I]".into());
    }
    for k in 0..s.ints {
        parts.push(match (verb, k) {
            ("ext_piece", 0) => "i".into(),
            ("ext_piece", _) => "d".into(),
            ("depth_table", _) => "l_max".into(),
            _ => "n".into(),
        });
    }
    format!("{verb}({})", parts.join(", "))
}

/// Parses and resolves a script. Every name must be declared before use;
/// each ideal lives in the most recently declared ring.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let statements = parse_statements(text)?;
    let mut rings: HashMap<String, Arc<Ring>> = HashMap::new();
    let mut ideals: HashMap<String, NamedIdeal> = HashMap::new();
    let mut current: Option<Arc<Ring>> = None;
    let mut commands = Vec::new();
    for stmt in &statements {
        match stmt {
            Stmt::Ring {
                name,
                field,
                vars,
                pos,
            } => {
                if rings.contains_key(name) || ideals.contains_key(name) {
                    return Err(reference(*pos, format!("'{name}' is already declared")));
                }
                for (k, v) in vars.iter().enumerate() {
                    if vars[..k].contains(v) {
                        return Err(reference(*pos, format!("variable '{v}' repeated")));
                    }
                }
                let field = match field {
                    FieldSpec::Rational => Field::Rational,
                    FieldSpec::Prime(p) => Field::Prime(*p),
                };
                let r = Ring::new(field, vars.iter().cloned());
                rings.insert(name.clone(), r.clone());
                current = Some(r);
            }
            Stmt::Ideal { name, polys, pos } => {
                if rings.contains_key(name) || ideals.contains_key(name) {
                    return Err(reference(*pos, format!("'{name}' is already declared")));
                }
                let Some(ring) = current.clone() else {
                    return Err(reference(
                        *pos,
                        format!("ideal '{name}' declared before any ring"),
                    ));
                };
                let gens = polys
                    .iter()
                    .map(|e| eval(e, &ring, *pos))
                    .collect::<Result<Vec<_>, _>>()?;
                ideals.insert(
                    name.clone(),
                    NamedIdeal {
                        name: name.clone(),
                        ring,
                        gens,
                    },
                );
            }
            Stmt::Cmd { verb, args, pos } => {
                let s = shape(verb);
                let mut positional: Vec<&Arg> = Vec::new();
                let mut options = Options::default();
                for a in args {
                    match a {
                        Arg::Opt(k, v, p) => {
                            let value = match v.as_ref() {
                                Arg::Int(x, _) if *x >= 0 => *x as u64,
                                _ => {
                                    return Err(syntax(
                                        *p,
                                        format!("option {k} needs a nonnegative integer"),
                                        &["integer"],
                                    ))
                                }
                            };
                            let small = || {
                                u32::try_from(value).map_err(|_| {
                                    syntax(*p, format!("{k} out of range"), &["integer"])
                                })
                            };
                            match k.as_str() {
                                "seed" => options.seed = Some(value),
                                "n_max" => options.n_max = Some(small()?),
                                "koszul_cap" => options.koszul_cap = Some(small()?),
                                "power_cap" => options.power_cap = Some(small()?),
                                _ => {
                                    return Err(syntax(
                                        *p,
                                        format!("unknown option '{k}'"),
                                        &OPTION_KEYS,
                                    ))
                                }
                            }
                        }
                        _ => positional.push(a),
                    }
                }
                let mut it = positional.into_iter().peekable();
                let mut criterion = None;
                if s.criterion {
                    match it.next() {
                        Some(Arg::Name(n, p)) => match CRITERIA.iter().find(|c| c.0 == n) {
                            Some(c) => criterion = Some(c.1),
                            None => {
                                let names: Vec<&str> = CRITERIA.iter().map(|c| c.0).collect();
                                return Err(reference(
                                    *p,
                                    format!(
                                        "unknown criterion '{n}' (known: {})",
                                        names.join(", ")
                                    ),
                                ));
                            }
                        },
                        _ => {
                            return Err(syntax(
                                *pos,
                                format!("usage: {}", usage(verb)),
                                &["criterion name"],
                            ))
                        }
                    }
                }
                let lookup = |n: &str, p: &Pos| -> Result<NamedIdeal, ParseError> {
                    ideals
                        .get(n)
                        .cloned()
                        .ok_or_else(|| reference(*p, format!("undeclared ideal '{n}'")))
                };
                let q = match it.next() {
                    Some(Arg::Name(n, p)) => lookup(n, p)?,
                    _ => {
                        return Err(syntax(
                            *pos,
                            format!("usage: {}", usage(verb)),
                            &["ideal name"],
                        ))
                    }
                };
                let mut ideal = None;
                if s.ideal {
                    if let Some(Arg::Name(n, p)) = it.peek().copied() {
                        let i = lookup(n, p)?;
                        if !Arc::ptr_eq(&i.ring, &q.ring) {
                            return Err(reference(
                                *p,
                                format!("'{n}' and '{}' live in different rings", q.name),
                            ));
                        }
                        ideal = Some(i);
                        it.next();
                    }
                }
                let mut ints = Vec::new();
                for a in it {
                    match a {
                        Arg::Int(v, _) if ints.len() < s.ints => ints.push(*v),
                        _ => return Err(syntax(*pos, format!("usage: {}", usage(verb)), &[])),
                    }
                }
                if ints.len() != s.ints {
                    return Err(syntax(
                        *pos,
                        format!("usage: {}", usage(verb)),
                        &["integer"],
                    ));
                }
                commands.push(Command {
                    index: commands.len() + 1,
                    verb: verb.clone(),
                    text: stmt.to_string(),
                    criterion,
                    q,
                    ideal,
                    ints,
                    options,
                });
            }
        }
    }
    Ok(Session {
        statements,
        commands,
    })
}
