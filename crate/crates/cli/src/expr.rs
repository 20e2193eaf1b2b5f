//! Real-valued expressions over point coordinates.

use std::fmt;

use compacta::{CReal, Point, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Var(usize),
    Const(Rat),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Abs(Box<Term>),
    Min(Box<Term>, Box<Term>),
    Max(Box<Term>, Box<Term>),
    Scale(Rat, Box<Term>),
    /// Sup-metric distance from the point to a fixed anchor.
    DistTo(Vec<Rat>),
}

impl Term {
    pub fn eval(&self, p: &Point) -> CReal {
        match self {
            Term::Var(i) => p.coord(*i).clone(),
            Term::Const(q) => CReal::from_rat(q.clone()),
            Term::Add(a, b) => a.eval(p).add(&b.eval(p)),
            Term::Sub(a, b) => a.eval(p).sub(&b.eval(p)),
            Term::Neg(a) => a.eval(p).neg(),
            Term::Abs(a) => a.eval(p).abs(),
            Term::Min(a, b) => a.eval(p).min(&b.eval(p)),
            Term::Max(a, b) => a.eval(p).max(&b.eval(p)),
            Term::Scale(q, a) => a.eval(p).scale(q),
            Term::DistTo(anchor) => anchor
                .iter()
                .enumerate()
                .map(|(i, c)| p.coord(i).sub(&CReal::from_rat(c.clone())).abs())
                .reduce(|a, b| a.max(&b))
                .unwrap_or_else(CReal::zero),
        }
    }

    /// A Lipschitz bound with respect to the sup metric on the arguments.
    pub fn lipschitz(&self) -> Rat {
        match self {
            Term::Var(_) | Term::DistTo(_) => Rat::one(),
            Term::Const(_) => Rat::zero(),
            Term::Add(a, b) | Term::Sub(a, b) => a.lipschitz() + b.lipschitz(),
            Term::Neg(a) | Term::Abs(a) => a.lipschitz(),
            Term::Min(a, b) | Term::Max(a, b) => a.lipschitz().max(b.lipschitz()),
            Term::Scale(q, a) => &q.abs() * &a.lipschitz(),
        }
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Const(_) => None,
            Term::DistTo(anchor) => anchor.len().checked_sub(1),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Min(a, b) | Term::Max(a, b) => {
                a.max_var().max(b.max_var())
            }
            Term::Neg(a) | Term::Abs(a) | Term::Scale(_, a) => a.max_var(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Const(q) => write!(f, "{q}"),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Sub(a, b) => write!(f, "({a} - {b})"),
            Term::Neg(a) => write!(f, "-{a}"),
            Term::Abs(a) => write!(f, "abs({a})"),
            Term::Min(a, b) => write!(f, "min({a}, {b})"),
            Term::Max(a, b) => write!(f, "max({a}, {b})"),
            Term::Scale(q, a) => write!(f, "{q}*{a}"),
            Term::DistTo(anchor) => {
                let parts: Vec<String> = anchor.iter().map(|q| q.to_string()).collect();
                write!(f, "dist_to({})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rat),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Num(digits.parse().map_err(|e| format!("{e}"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else if c == '−' {
            out.push(Token::Sym('-'));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?} at offset {i}"));
        }
    }
    Ok(out)
}

/// Parses expressions such as `abs(x - 1/2)`, `min(1, 2*x)` or `dist_to(0, 1)`.
///
/// Variables are `x`, `y`, `z` or `x0`, `x1`, ...; products need a constant
/// factor; `/` only divides by constants.
pub fn parse(src: &str) -> Result<Term, String> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let t = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after token {}", p.pos));
    }
    Ok(t)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected '{c}' at token {}", self.pos))
        }
    }

    fn expr(&mut self) -> Result<Term, String> {
        let mut t = self.product()?;
        loop {
            if self.eat('+') {
                t = Term::Add(Box::new(t), Box::new(self.product()?));
            } else if self.eat('-') {
                t = Term::Sub(Box::new(t), Box::new(self.product()?));
            } else {
                return Ok(t);
            }
        }
    }

    fn product(&mut self) -> Result<Term, String> {
        let mut t = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                t = match (t, rhs) {
                    (Term::Const(a), Term::Const(b)) => Term::Const(&a * &b),
                    (Term::Const(a), e) | (e, Term::Const(a)) => Term::Scale(a, Box::new(e)),
                    _ => return Err("products need a constant factor".into()),
                };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let Term::Const(d) = rhs else {
                    return Err("division only by constants".into());
                };
                let inv = d.recip().map_err(|e| e.to_string())?;
                t = match t {
                    Term::Const(a) => Term::Const(&a * &inv),
                    e => Term::Scale(inv, Box::new(e)),
                };
            } else {
                return Ok(t);
            }
        }
    }

    fn unary(&mut self) -> Result<Term, String> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Term::Const(q) => Term::Const(-q),
                e => Term::Neg(Box::new(e)),
            });
        }
        self.atom()
    }

    fn args(&mut self) -> Result<Vec<Term>, String> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Term, String> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(q)) => {
                self.pos += 1;
                Ok(Term::Const(q))
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(')')?;
                Ok(t)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => Ok(Term::Var(0)),
                    "y" => Ok(Term::Var(1)),
                    "z" => Ok(Term::Var(2)),
                    "abs" | "min" | "max" | "dist_to" => {
                        let mut args = self.args()?;
                        match (name.as_str(), args.len()) {
                            ("abs", 1) => Ok(Term::Abs(Box::new(args.remove(0)))),
                            ("min", 2) | ("max", 2) => {
                                let b = Box::new(args.remove(1));
                                let a = Box::new(args.remove(0));
                                Ok(if name == "min" { Term::Min(a, b) } else { Term::Max(a, b) })
                            }
                            ("dist_to", _) => args
                                .into_iter()
                                .map(|t| match t {
                                    Term::Const(q) => Ok(q),
                                    _ => Err("dist_to takes constant coordinates".to_string()),
                                })
                                .collect::<Result<Vec<_>, _>>()
                                .map(Term::DistTo),
                            (f, n) => Err(format!("{f} does not take {n} arguments")),
                        }
                    }
                    v if v.starts_with('x') && v[1..].chars().all(|c| c.is_ascii_digit()) => v[1..]
                        .parse()
                        .map(Term::Var)
                        .map_err(|_| format!("bad variable {v}")),
                    other => Err(format!("unknown name {other:?}")),
                }
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}
