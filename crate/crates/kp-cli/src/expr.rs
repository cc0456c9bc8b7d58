//! The expression grammar of the `eval` and `ideal-member` commands:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := scalar | p(vertex) | s(edge ids) | star(expr) | (expr)
//! scalar := [-]int [ '/' int ] | x | x^[-]int
//! ```
//!
//! Paths inside s(...) are edge-id sequences separated by spaces or dots and
//! are canonicalized on construction; `s()` of a single vertex id is the
//! projection.

use kp_core::algebra::AlgebraElem;
use kp_core::error::{KpError, Result};
use kp_core::graph::KGraph;
use kp_core::path::{compose, Path};
use kp_core::ring::{Integers, Laurent, Mod, Rationals, Ring};
use std::sync::Arc;

/// Scalar literals understood per ring.
pub trait ScalarLit: Ring {
    fn scalar(&self, num: i64, den: Option<i64>, xpow: Option<i64>) -> Result<Self::Elem>;
}

impl ScalarLit for Integers {
    fn scalar(&self, num: i64, den: Option<i64>, xpow: Option<i64>) -> Result<Self::Elem> {
        if den.is_some() || xpow.is_some() {
            return Err(KpError::Ring("ZZ admits only integer scalars".into()));
        }
        Ok(self.from_i64(num))
    }
}

impl ScalarLit for Rationals {
    fn scalar(&self, num: i64, den: Option<i64>, xpow: Option<i64>) -> Result<Self::Elem> {
        if xpow.is_some() {
            return Err(KpError::Ring("QQ admits no x powers".into()));
        }
        let den = den.unwrap_or(1);
        if den == 0 {
            return Err(KpError::Ring("zero denominator".into()));
        }
        Ok(kp_core::ring::rat(num, den))
    }
}

impl ScalarLit for Mod {
    fn scalar(&self, num: i64, den: Option<i64>, xpow: Option<i64>) -> Result<Self::Elem> {
        if xpow.is_some() {
            return Err(KpError::Ring("Z/n admits no x powers".into()));
        }
        let n = self.from_i64(num);
        match den {
            None => Ok(n),
            Some(d) => {
                let d = self.from_i64(d);
                let inv = self
                    .inv(&d)
                    .ok_or_else(|| KpError::Ring("denominator is not invertible".into()))?;
                Ok(self.mul(&n, &inv))
            }
        }
    }
}

impl<B: ScalarLit> ScalarLit for Laurent<B> {
    fn scalar(&self, num: i64, den: Option<i64>, xpow: Option<i64>) -> Result<Self::Elem> {
        let base = self.base.scalar(num, den, None)?;
        Ok(self.monomial(xpow.unwrap_or(0), base))
    }
}

#[derive(Clone, Debug)]
enum Token {
    Plus,
    Star,
    LParen,
    RParen,
    Ident(String),
    Number(i64),
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '.' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '-' | '0'..='9' => {
                let mut s = String::new();
                s.push(c);
                chars.next();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n: i64 = s
                    .parse()
                    .map_err(|_| KpError::Ring(format!("bad number '{s}'")))?;
                out.push(Token::Number(n));
            }
            c if c.is_alphanumeric() || c == '_' || c == '@' || c == '!' || c == ':' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '@' || d == '!' || d == ':' || d == '-'
                    {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(s));
            }
            other => {
                return Err(KpError::Ring(format!(
                    "unexpected character '{other}' in expression"
                )))
            }
        }
    }
    Ok(out)
}

/// A parsed value: a scalar or an algebra element.
enum Value<R: Ring> {
    Scalar(R::Elem),
    Elem(AlgebraElem<R>),
}

pub struct ExprParser<R: ScalarLit + PartialEq> {
    graph: Arc<KGraph>,
    ring: R,
    tokens: Vec<Token>,
    pos: usize,
}

impl<R: ScalarLit + PartialEq> ExprParser<R> {
    pub fn parse(graph: Arc<KGraph>, ring: R, text: &str) -> Result<AlgebraElem<R>> {
        let mut p = ExprParser {
            graph,
            ring,
            tokens: tokenize(text)?,
            pos: 0,
        };
        let v = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(KpError::Ring("trailing tokens in expression".into()));
        }
        Ok(match v {
            Value::Elem(e) => e,
            // a bare scalar means scalar * 1
            Value::Scalar(s) => {
                let mut one = AlgebraElem::zero(p.graph.clone(), p.ring.clone());
                for v in p.graph.vertices() {
                    one = one.add(&AlgebraElem::gen_p(p.graph.clone(), p.ring.clone(), v))?;
                }
                one.scalar_mul(&s)
            }
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_lparen(&mut self) -> Result<()> {
        match self.next() {
            Some(Token::LParen) => Ok(()),
            _ => Err(KpError::Ring("expected '('".into())),
        }
    }

    fn expr(&mut self) -> Result<Value<R>> {
        let mut acc = self.term()?;
        while matches!(self.peek(), Some(Token::Plus)) {
            self.next();
            let rhs = self.term()?;
            acc = match (acc, rhs) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(self.ring.add(&a, &b)),
                (Value::Elem(a), Value::Elem(b)) => Value::Elem(a.add(&b)?),
                _ => {
                    return Err(KpError::Ring(
                        "cannot add a scalar to an algebra element".into(),
                    ))
                }
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value<R>> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            let rhs = self.factor()?;
            acc = match (acc, rhs) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(self.ring.mul(&a, &b)),
                (Value::Scalar(a), Value::Elem(b)) => Value::Elem(b.scalar_mul(&a)),
                (Value::Elem(a), Value::Scalar(b)) => Value::Elem(a.scalar_mul(&b)),
                (Value::Elem(a), Value::Elem(b)) => Value::Elem(a.mul(&b)?),
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value<R>> {
        match self.next() {
            Some(Token::Number(n)) => {
                // optional denominator
                if matches!(self.peek(), Some(Token::Slash)) {
                    self.next();
                    match self.next() {
                        Some(Token::Number(d)) => {
                            Ok(Value::Scalar(self.ring.scalar(n, Some(d), None)?))
                        }
                        _ => Err(KpError::Ring("expected denominator".into())),
                    }
                } else {
                    Ok(Value::Scalar(self.ring.scalar(n, None, None)?))
                }
            }
            Some(Token::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(v),
                    _ => Err(KpError::Ring("expected ')'".into())),
                }
            }
            Some(Token::Ident(id)) if id == "x" => {
                if matches!(self.peek(), Some(Token::Caret)) {
                    self.next();
                    match self.next() {
                        Some(Token::Number(e)) => {
                            Ok(Value::Scalar(self.ring.scalar(1, None, Some(e))?))
                        }
                        _ => Err(KpError::Ring("expected exponent".into())),
                    }
                } else {
                    Ok(Value::Scalar(self.ring.scalar(1, None, Some(1))?))
                }
            }
            Some(Token::Ident(id)) if id == "p" => {
                self.expect_lparen()?;
                let v = match self.next() {
                    Some(Token::Ident(name)) => self
                        .graph
                        .vertex_by_name(&name)
                        .ok_or(KpError::UnknownVertex(name))?,
                    _ => return Err(KpError::Ring("expected vertex id".into())),
                };
                match self.next() {
                    Some(Token::RParen) => {}
                    _ => return Err(KpError::Ring("expected ')'".into())),
                }
                Ok(Value::Elem(AlgebraElem::gen_p(
                    self.graph.clone(),
                    self.ring.clone(),
                    v,
                )))
            }
            Some(Token::Ident(id)) if id == "s" => {
                self.expect_lparen()?;
                let mut ids = Vec::new();
                loop {
                    match self.next() {
                        Some(Token::RParen) => break,
                        Some(Token::Ident(name)) => ids.push(name),
                        _ => return Err(KpError::Ring("expected edge ids".into())),
                    }
                }
                let path = self.path_from_ids(&ids)?;
                Ok(Value::Elem(AlgebraElem::gen_s(
                    self.graph.clone(),
                    self.ring.clone(),
                    &path,
                )))
            }
            Some(Token::Ident(id)) if id == "star" => {
                self.expect_lparen()?;
                let v = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => {}
                    _ => return Err(KpError::Ring("expected ')'".into())),
                }
                match v {
                    Value::Elem(e) => Ok(Value::Elem(e.star())),
                    Value::Scalar(s) => Ok(Value::Scalar(s)),
                }
            }
            other => Err(KpError::Ring(format!(
                "unexpected token {other:?} in expression"
            ))),
        }
    }

    fn path_from_ids(&self, ids: &[String]) -> Result<Path> {
        if ids.len() == 1 {
            if let Some(v) = self.graph.vertex_by_name(&ids[0]) {
                return Ok(Path::vertex(&self.graph, v));
            }
        }
        if ids.is_empty() {
            return Err(KpError::Ring("empty path".into()));
        }
        let mut path: Option<Path> = None;
        for id in ids {
            let e = self
                .graph
                .edge_by_name(id)
                .ok_or_else(|| KpError::UnknownEdge(id.clone()))?;
            let step = Path::single_edge(&self.graph, e);
            path = Some(match path {
                None => step,
                Some(p) => compose(&self.graph, &p, &step)?,
            });
        }
        Ok(path.unwrap())
    }
}

/// Parse a path literal (edge ids separated by spaces/dots, or a vertex id
/// prefixed with "v:").
pub fn parse_path(graph: &Arc<KGraph>, text: &str) -> Result<Path> {
    let t = text.trim();
    if let Some(v) = t.strip_prefix("v:") {
        let v = graph
            .vertex_by_name(v)
            .ok_or_else(|| KpError::UnknownVertex(v.into()))?;
        return Ok(Path::vertex(graph, v));
    }
    let ids: Vec<&str> = t
        .split(|c: char| c == ' ' || c == '.')
        .filter(|s| !s.is_empty())
        .collect();
    if ids.len() == 1 {
        if let Some(v) = graph.vertex_by_name(ids[0]) {
            return Ok(Path::vertex(graph, v));
        }
    }
    let mut path: Option<Path> = None;
    for id in ids {
        let e = graph
            .edge_by_name(id)
            .ok_or_else(|| KpError::UnknownEdge(id.into()))?;
        let step = Path::single_edge(graph, e);
        path = Some(match path {
            None => step,
            Some(p) => compose(graph, &p, &step)?,
        });
    }
    path.ok_or_else(|| KpError::Ring("empty path literal".into()))
}
