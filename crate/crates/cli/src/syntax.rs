//! Lexer, parser and printer for session scripts.
//!
//! ```text
//! session    := stmt*
//! stmt       := ring_decl | ideal_decl | cmd
//! ring_decl  := "ring" NAME "=" field "[" NAME ("," NAME)* "]" ";"
//! field      := "QQ" | "Fp" "(" INT ")"
//! ideal_decl := "ideal" NAME "=" poly ("," poly)* ";"
//! cmd        := VERB "(" [arg ("," arg)*] ")" ";"
//! arg        := NAME | ["-"] INT | NAME "=" (NAME | ["-"] INT)
//! ```
//!
//! Comments run from `#` or `//` to the end of the line.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Reference,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lexical => "lexical error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Reference => "reference error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted; empty for reference errors.
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.kind, self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    /// Digits, optionally `/digits`.
    Num(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("'{n}'"),
            Tok::Num(n) => format!("number {n}"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
        } else if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                {
                    let c = chars[i];
                    advance(&mut i, &mut line, &mut col, c);
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                s.push(chars[i]);
                {
                    let c = chars[i];
                    advance(&mut i, &mut line, &mut col, c);
                }
            }
            out.push((Tok::Name(s), pos));
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                {
                    let c = chars[i];
                    advance(&mut i, &mut line, &mut col, c);
                }
            }
            if i < chars.len()
                && chars[i] == '/'
                && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
            {
                s.push('/');
                advance(&mut i, &mut line, &mut col, '/');
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    {
                        let c = chars[i];
                        advance(&mut i, &mut line, &mut col, c);
                    }
                }
            }
            out.push((Tok::Num(s), pos));
        } else if "=;,()[]+-*^".contains(c) {
            out.push((Tok::Sym(c), pos));
            advance(&mut i, &mut line, &mut col, c);
        } else if c == '\u{2212}' {
            // typographic minus
            out.push((Tok::Sym('-'), pos));
            advance(&mut i, &mut line, &mut col, c);
        } else {
            return Err(ParseError {
                kind: ErrorKind::Lexical,
                pos,
                message: format!("unexpected character {c:?}"),
                expected: Vec::new(),
            });
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Polynomial expression as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// `"3"` or `"3/4"`
    Num(String),
    Var(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Name(String, Pos),
    Int(i64, Pos),
    Opt(String, Box<Arg>, Pos),
}

pub const VERBS: [&str; 13] = [
    "gb",
    "tangent_cone",
    "ratliff_rush",
    "rho",
    "depth",
    "reg",
    "ext_piece",
    "a_invariants",
    "rees",
    "assoc_graded",
    "fiber_cone",
    "depth_table",
    "check",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Ring {
        name: String,
        field: FieldSpec,
        vars: Vec<String>,
        pos: Pos,
    },
    Ideal {
        name: String,
        polys: Vec<Expr>,
        pos: Pos,
    },
    Cmd {
        verb: String,
        args: Vec<Arg>,
        pos: Pos,
    },
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError {
            kind: ErrorKind::Syntax,
            pos: self.pos(),
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn sym(&mut self, c: char) -> PResult<Pos> {
        if *self.peek() == Tok::Sym(c) {
            Ok(self.bump().1)
        } else {
            self.fail(&[&format!("'{c}'")])
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Name(n) => {
                let p = self.bump().1;
                Ok((n, p))
            }
            _ => self.fail(&["name"]),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Name(n) if n == kw => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[&format!("'{kw}'")]),
        }
    }

    fn session(&mut self) -> PResult<Vec<Stmt>> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            out.push(self.stmt()?);
        }
        Ok(out)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        let head = match self.peek() {
            Tok::Name(n) => n.clone(),
            _ => {
                let mut exp = vec!["'ring'", "'ideal'"];
                exp.extend(VERBS);
                return self.fail(&exp);
            }
        };
        match head.as_str() {
            "ring" => self.ring_decl(pos),
            "ideal" => self.ideal_decl(pos),
            v if VERBS.contains(&v) => self.cmd(pos),
            _ => {
                let mut exp = vec!["'ring'", "'ideal'"];
                exp.extend(VERBS);
                self.fail(&exp)
            }
        }
    }

    fn ring_decl(&mut self, pos: Pos) -> PResult<Stmt> {
        self.keyword("ring")?;
        let (name, _) = self.name()?;
        self.sym('=')?;
        let field = match self.peek() {
            Tok::Name(n) if n == "QQ" => {
                self.bump();
                FieldSpec::Rational
            }
            Tok::Name(n) if n == "Fp" => {
                self.bump();
                self.sym('(')?;
                let p = match self.peek().clone() {
                    Tok::Num(s) if !s.contains('/') => {
                        let at = self.pos();
                        self.bump();
                        match s.parse::<u32>() {
                            Ok(p) if rrfilt::Field::prime(p).is_ok() => p,
                            _ => {
                                return Err(ParseError {
                                    kind: ErrorKind::Syntax,
                                    pos: at,
                                    message: format!("{s} is not a prime below 2^31"),
                                    expected: vec!["prime modulus".into()],
                                })
                            }
                        }
                    }
                    _ => return self.fail(&["integer"]),
                };
                self.sym(')')?;
                FieldSpec::Prime(p)
            }
            _ => return self.fail(&["'QQ'", "'Fp'"]),
        };
        self.sym('[')?;
        let mut vars = vec![self.name()?.0];
        while self.eat(',') {
            vars.push(self.name()?.0);
        }
        if *self.peek() != Tok::Sym(']') {
            return self.fail(&["','", "']'"]);
        }
        self.bump();
        self.sym(';')?;
        Ok(Stmt::Ring {
            name,
            field,
            vars,
            pos,
        })
    }

    fn ideal_decl(&mut self, pos: Pos) -> PResult<Stmt> {
        self.keyword("ideal")?;
        let (name, _) = self.name()?;
        self.sym('=')?;
        let mut polys = vec![self.sum()?];
        while self.eat(',') {
            polys.push(self.sum()?);
        }
        if *self.peek() != Tok::Sym(';') {
            return self.fail(&["','", "';'", "'+'", "'-'", "'*'", "'^'"]);
        }
        self.bump();
        Ok(Stmt::Ideal { name, polys, pos })
    }

    fn cmd(&mut self, pos: Pos) -> PResult<Stmt> {
        let (verb, _) = self.name()?;
        self.sym('(')?;
        let mut args = Vec::new();
        if !self.eat(')') {
            args.push(self.arg()?);
            loop {
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return self.fail(&["','", "')'"]);
                }
                args.push(self.arg()?);
            }
        }
        self.sym(';')?;
        Ok(Stmt::Cmd { verb, args, pos })
    }

    fn int(&mut self) -> PResult<(i64, Pos)> {
        let pos = self.pos();
        let neg = self.eat('-');
        match self.peek().clone() {
            Tok::Num(s) if !s.contains('/') => {
                self.bump();
                let v: i64 = s.parse().map_err(|_| ParseError {
                    kind: ErrorKind::Syntax,
                    pos,
                    message: format!("integer {s} out of range"),
                    expected: vec!["integer".into()],
                })?;
                Ok((if neg { -v } else { v }, pos))
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn arg(&mut self) -> PResult<Arg> {
        match self.peek().clone() {
            Tok::Name(n) => {
                let pos = self.bump().1;
                if self.eat('=') {
                    let value = match self.peek() {
                        Tok::Name(_) => {
                            let (v, p) = self.name()?;
                            Arg::Name(v, p)
                        }
                        _ => {
                            let (v, p) = self.int()?;
                            Arg::Int(v, p)
                        }
                    };
                    Ok(Arg::Opt(n, Box::new(value), pos))
                } else {
                    Ok(Arg::Name(n, pos))
                }
            }
            Tok::Num(_) | Tok::Sym('-') => {
                let (v, p) = self.int()?;
                Ok(Arg::Int(v, p))
            }
            _ => self.fail(&["name", "integer"]),
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut e = self.product()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.product()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.product()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut e = self.unary()?;
        while self.eat('*') {
            e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().clone() {
                Tok::Num(s) if !s.contains('/') => {
                    let pos = self.pos();
                    self.bump();
                    let n = s.parse::<u32>().map_err(|_| ParseError {
                        kind: ErrorKind::Syntax,
                        pos,
                        message: format!("exponent {s} out of range"),
                        expected: vec!["exponent".into()],
                    })?;
                    return Ok(Expr::Pow(Box::new(base), n));
                }
                _ => return self.fail(&["exponent"]),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(Expr::Num(s))
            }
            Tok::Name(n) => {
                let p = self.bump().1;
                Ok(Expr::Var(n, p))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.sum()?;
                if *self.peek() != Tok::Sym(')') {
                    return self.fail(&["')'", "'+'", "'-'", "'*'", "'^'"]);
                }
                self.bump();
                Ok(e)
            }
            _ => self.fail(&["number", "variable", "'('", "'-'"]),
        }
    }
}

/// Statements in source order; names are not resolved here.
pub fn parse_statements(text: &str) -> Result<Vec<Stmt>, ParseError> {
    let toks = lex(text)?;
    Parser { toks, at: 0 }.session()
}

// ---- printing: parse(print(s)) == s ----

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(s) if s.contains('/') => 4,
        Expr::Num(_) | Expr::Var(..) => 5,
    }
}

fn wrap(e: &Expr, at_least: u8) -> String {
    if prec(e) < at_least {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(s) => f.write_str(s),
            Expr::Var(v, _) => f.write_str(v),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            Expr::Pow(a, n) => write!(f, "{}^{n}", wrap(a, 5)),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(n, _) => f.write_str(n),
            Arg::Int(v, _) => write!(f, "{v}"),
            Arg::Opt(k, v, _) => write!(f, "{k}={v}"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Ring {
                name, field, vars, ..
            } => {
                let field = match field {
                    FieldSpec::Rational => "QQ".to_string(),
                    FieldSpec::Prime(p) => format!("Fp({p})"),
                };
                write!(f, "ring {name} = {field}[{}];", vars.join(", "))
            }
            Stmt::Ideal { name, polys, .. } => {
                let p: Vec<String> = polys.iter().map(|e| e.to_string()).collect();
                write!(f, "ideal {name} = {};", p.join(", "))
            }
            Stmt::Cmd { verb, args, .. } => {
                let a: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{verb}({});", a.join(", "))
            }
        }
    }
}

pub fn print_statements(stmts: &[Stmt]) -> String {
    stmts.iter().map(|s| format!("{s}\n")).collect()
}
