use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Position, Result};
use crate::field::{PolyRing, RatFunc};
use crate::ore::OreFraction;
use crate::skew::SkewPair;

/// Largest exponent magnitude accepted by `^`.
pub const MAX_EXPONENT: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident(String, Position),
    /// The Ore variable `X`.
    X(Position),
    Inv(Box<Expr>, Position),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Position),
    Pow(Box<Expr>, i64, Position),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, Position)>,
    at: usize,
}

impl Lexer {
    fn new(src: &str, line: usize, col0: usize) -> Result<Lexer> {
        let chars: Vec<char> = src.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        let pos = |i: usize| Position { line, column: col0 + i };
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
                toks.push((Tok::Int(digits.parse().expect("ascii digits")), pos(start)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), pos(start)));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), pos(i)));
                i += 1;
            } else {
                return Err(Error::Parse { pos: pos(i), msg: format!("unexpected character `{c}`") });
            }
        }
        toks.push((Tok::End, pos(chars.len())));
        Ok(Lexer { toks, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse { pos: self.pos(), msg: format!("expected `{c}`") })
        }
    }
}

/// Parses one expression; `allow_x` admits the Ore variable `X`.
pub fn parse_expr(src: &str, line: usize, col0: usize, allow_x: bool) -> Result<Expr> {
    let mut lx = Lexer::new(src, line, col0)?;
    if *lx.peek() == Tok::End {
        return Err(Error::Parse { pos: lx.pos(), msg: "empty expression".into() });
    }
    let e = sum(&mut lx, allow_x)?;
    if *lx.peek() != Tok::End {
        return Err(Error::Parse { pos: lx.pos(), msg: "unexpected trailing input".into() });
    }
    Ok(e)
}

fn sum(lx: &mut Lexer, allow_x: bool) -> Result<Expr> {
    let mut e = product(lx, allow_x)?;
    loop {
        if lx.eat('+') {
            e = Expr::Add(Box::new(e), Box::new(product(lx, allow_x)?));
        } else if lx.eat('-') {
            e = Expr::Sub(Box::new(e), Box::new(product(lx, allow_x)?));
        } else {
            return Ok(e);
        }
    }
}

fn product(lx: &mut Lexer, allow_x: bool) -> Result<Expr> {
    let mut e = unary(lx, allow_x)?;
    loop {
        if lx.eat('*') {
            e = Expr::Mul(Box::new(e), Box::new(unary(lx, allow_x)?));
        } else if *lx.peek() == Tok::Sym('/') {
            let pos = lx.bump().1;
            e = Expr::Div(Box::new(e), Box::new(unary(lx, allow_x)?), pos);
        } else {
            return Ok(e);
        }
    }
}

fn unary(lx: &mut Lexer, allow_x: bool) -> Result<Expr> {
    if lx.eat('-') {
        return Ok(Expr::Neg(Box::new(unary(lx, allow_x)?)));
    }
    if lx.eat('+') {
        return unary(lx, allow_x);
    }
    power(lx, allow_x)
}

fn power(lx: &mut Lexer, allow_x: bool) -> Result<Expr> {
    let base = atom(lx, allow_x)?;
    if *lx.peek() != Tok::Sym('^') {
        return Ok(base);
    }
    let pos = lx.bump().1;
    let paren = lx.eat('(');
    let neg = lx.eat('-');
    let e = match lx.bump() {
        (Tok::Int(n), _) => n,
        (_, p) => return Err(Error::Parse { pos: p, msg: "exponent must be an integer".into() }),
    };
    if paren {
        lx.expect(')')?;
    }
    let mag: u64 = e.try_into().ok().filter(|&m| m <= MAX_EXPONENT).ok_or_else(|| {
        Error::ResourceBoundExceeded(format!("exponent at {pos} exceeds {MAX_EXPONENT}"))
    })?;
    let exp = if neg { -(mag as i64) } else { mag as i64 };
    Ok(Expr::Pow(Box::new(base), exp, pos))
}

fn atom(lx: &mut Lexer, allow_x: bool) -> Result<Expr> {
    match lx.bump() {
        (Tok::Int(n), _) => Ok(Expr::Int(n)),
        (Tok::Ident(name), pos) => {
            if name == "inv" && *lx.peek() == Tok::Sym('(') {
                lx.bump();
                let inner = sum(lx, allow_x)?;
                lx.expect(')')?;
                return Ok(Expr::Inv(Box::new(inner), pos));
            }
            if name == "X" && allow_x {
                return Ok(Expr::X(pos));
            }
            Ok(Expr::Ident(name, pos))
        }
        (Tok::Sym('('), _) => {
            let e = sum(lx, allow_x)?;
            lx.expect(')')?;
            Ok(e)
        }
        (Tok::End, pos) => Err(Error::Parse { pos, msg: "unexpected end of expression".into() }),
        (Tok::Sym(c), pos) => Err(Error::Parse { pos, msg: format!("unexpected `{c}`") }),
    }
}

fn at_pos(e: Error, pos: Position) -> Error {
    match e {
        Error::DivisionByZero => Error::Parse { pos, msg: "division by zero".into() },
        other => other,
    }
}

/// Evaluates in `K`; `X` is rejected.
pub fn eval_ratfunc(e: &Expr, ring: &Arc<PolyRing>) -> Result<RatFunc> {
    Ok(match e {
        Expr::Int(n) => RatFunc::constant(ring, ring.field().from_bigint(n)),
        Expr::Ident(name, pos) => match ring.var_index(name) {
            Some(i) => RatFunc::var(ring, i),
            None => return Err(Error::UndeclaredVariable { name: name.clone(), pos: *pos }),
        },
        Expr::X(pos) => return Err(Error::Parse { pos: *pos, msg: "X is only allowed in compute expressions".into() }),
        Expr::Inv(a, pos) => eval_ratfunc(a, ring)?.inv().map_err(|e| at_pos(e, *pos))?,
        Expr::Neg(a) => eval_ratfunc(a, ring)?.neg(),
        Expr::Add(a, b) => eval_ratfunc(a, ring)?.add(&eval_ratfunc(b, ring)?),
        Expr::Sub(a, b) => eval_ratfunc(a, ring)?.sub(&eval_ratfunc(b, ring)?),
        Expr::Mul(a, b) => eval_ratfunc(a, ring)?.mul(&eval_ratfunc(b, ring)?),
        Expr::Div(a, b, pos) => eval_ratfunc(a, ring)?.div(&eval_ratfunc(b, ring)?).map_err(|e| at_pos(e, *pos))?,
        Expr::Pow(a, n, pos) => eval_ratfunc(a, ring)?.pow(*n).map_err(|e| at_pos(e, *pos))?,
    })
}

/// Evaluates in the quotient ring `K(x; sigma, delta)`.
pub fn eval_fraction(e: &Expr, ctx: &Arc<SkewPair>) -> Result<OreFraction> {
    let ring = ctx.ring();
    Ok(match e {
        Expr::Int(_) | Expr::Ident(..) => OreFraction::from_ratfunc(ctx, eval_ratfunc(e, ring)?),
        Expr::X(_) => OreFraction::x(ctx),
        Expr::Inv(a, pos) => eval_fraction(a, ctx)?.inv().map_err(|e| at_pos(e, *pos))?,
        Expr::Neg(a) => eval_fraction(a, ctx)?.neg(),
        Expr::Add(a, b) => eval_fraction(a, ctx)?.add(&eval_fraction(b, ctx)?)?,
        Expr::Sub(a, b) => eval_fraction(a, ctx)?.sub(&eval_fraction(b, ctx)?)?,
        Expr::Mul(a, b) => eval_fraction(a, ctx)?.mul(&eval_fraction(b, ctx)?)?,
        Expr::Div(a, b, pos) => eval_fraction(a, ctx)?.div(&eval_fraction(b, ctx)?).map_err(|e| at_pos(e, *pos))?,
        Expr::Pow(a, n, pos) => eval_fraction(a, ctx)?.pow(*n).map_err(|e| at_pos(e, *pos))?,
    })
}

/// Parses and evaluates a field element.
pub fn parse_ratfunc(src: &str, ring: &Arc<PolyRing>) -> Result<RatFunc> {
    eval_ratfunc(&parse_expr(src, 1, 1, false)?, ring)
}

/// Parses and evaluates an element of the quotient ring.
pub fn parse_fraction(src: &str, ctx: &Arc<SkewPair>) -> Result<OreFraction> {
    eval_fraction(&parse_expr(src, 1, 1, true)?, ctx)
}
