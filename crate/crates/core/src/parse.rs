//! Recursive-descent parser for relation strings such as
//! `r1*r2 - r2*r1 = i*(r2 + j1^2*r1*r2*r1)*tanh(j1*v)/j1` or `[xi3,xi2] = i*v*xi1*xi2`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! relation := expr '=' expr
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := power (('*'|'/') power)*
//! power    := atom ['^' ['-'] int]
//! atom     := int | 'i' | 'v' | 'J' | j<k> | <generator>
//!           | (cosh|sinh|tanh|sech) '(' expr ')' | '(' expr ')' | '[' expr ',' expr ']'
//! ```

use crate::ncpoly::NCPoly;
use crate::presentation::CPoly;
use crate::scalar::{GaussianRational, JMonomial, ScalarExpr, Trig};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Names in scope while parsing.
#[derive(Clone, Debug)]
pub struct ParseCtx {
    pub nvars: usize,
    /// value of `J`
    pub multiplier: Option<JMonomial>,
    /// `(prefix, count, offset)`: `prefix<k>` for `k = 1..=count` is letter `offset + k − 1`
    pub families: Vec<(String, usize, u8)>,
}

impl ParseCtx {
    /// `xi1 … xi<n>`.
    pub fn vector(n: usize, multiplier: JMonomial) -> Self {
        ParseCtx { nvars: n - 1, multiplier: Some(multiplier), families: vec![("xi".into(), n, 0)] }
    }

    /// `r1 … r<n−1>` followed by `rh1 … rh<n−1>`.
    pub fn sphere(n: usize, multiplier: JMonomial) -> Self {
        let m = n - 1;
        ParseCtx {
            nvars: n - 1,
            multiplier: Some(multiplier),
            families: vec![("r".into(), m, 0), ("rh".into(), m, m as u8)],
        }
    }

    fn generator(&self, ident: &str) -> Option<u8> {
        let split = ident.find(|c: char| c.is_ascii_digit())?;
        let (prefix, digits) = ident.split_at(split);
        let k: usize = digits.parse().ok()?;
        self.families
            .iter()
            .find(|(p, count, _)| p == prefix && k >= 1 && k <= *count)
            .map(|(_, _, off)| off + (k - 1) as u8)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[st..i].iter().collect();
            let n = text.parse().map_err(|_| ParseError { pos: st + 1, msg: format!("integer `{text}` too large") })?;
            out.push((st, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((st, Tok::Ident(chars[st..i].iter().collect())));
        } else if "+-*/^()[],=".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i + 1, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ctx: &'a ParseCtx,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let pos = self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end) + 1;
        Err(ParseError { pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn scalar(&self, e: ScalarExpr) -> CPoly {
        NCPoly::term(vec![], e)
    }

    fn expr(&mut self) -> Result<CPoly, ParseError> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                let Some(s) = as_scalar(&d) else {
                    return self.err("division by a non-scalar");
                };
                let inv = match s.inv() {
                    Ok(x) => x,
                    Err(e) => return self.err(format!("cannot divide: {e}")),
                };
                acc = acc.scale_by(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<CPoly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return self.err("expected an integer exponent");
        };
        self.at += 1;
        let e = if neg { -e } else { e } as i32;
        if e >= 0 {
            let mut acc = self.scalar(ScalarExpr::one(self.ctx.nvars));
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        let Some(s) = as_scalar(&base) else {
            return self.err("negative power of a non-scalar");
        };
        match s.pow(e) {
            Ok(p) => Ok(self.scalar(p)),
            Err(err) => self.err(err.to_string()),
        }
    }

    fn atom(&mut self) -> Result<CPoly, ParseError> {
        let nv = self.ctx.nvars;
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Int(n) => {
                self.at += 1;
                Ok(self.scalar(ScalarExpr::int(nv, n)))
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.at += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(a.mul(&b).sub(&b.mul(&a)))
            }
            Tok::Ident(name) => {
                self.at += 1;
                match name.as_str() {
                    "i" => Ok(self.scalar(ScalarExpr::i(nv))),
                    "v" => Ok(self.scalar(ScalarExpr::v(nv))),
                    "J" => match self.ctx.multiplier {
                        Some(m) => Ok(self.scalar(ScalarExpr::mono(m))),
                        None => self.err("`J` is not bound here"),
                    },
                    "cosh" | "sinh" | "tanh" | "sech" => self.function(&name),
                    _ => {
                        if let Some(k) = name.strip_prefix('j').and_then(|d| d.parse::<usize>().ok()) {
                            if k >= 1 && k <= nv {
                                return Ok(self.scalar(ScalarExpr::mono(JMonomial::var(nv, k - 1, 1))));
                            }
                            self.at -= 1;
                            return self.err(format!("parameter `{name}` out of range (j1…j{nv})"));
                        }
                        if let Some(x) = self.ctx.generator(&name) {
                            return Ok(NCPoly::term(vec![x], ScalarExpr::one(nv)));
                        }
                        self.at -= 1;
                        self.err(format!("unknown name `{name}`"))
                    }
                }
            }
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
        }
    }

    fn function(&mut self, name: &str) -> Result<CPoly, ParseError> {
        self.expect('(')?;
        let arg_start = self.at;
        let arg = self.expr()?;
        self.expect(')')?;
        let parsed = as_scalar(&arg).and_then(|s| s.as_trig_argument().or_else(|| s.is_zero().then(zero_arg(self.ctx.nvars))));
        let Some((c, j)) = parsed else {
            self.at = arg_start;
            return self.err(format!("argument of {name} must have the form c*<j-monomial>*v"));
        };
        let e = match name {
            "cosh" => ScalarExpr::trig(Trig::Cosh, c, j),
            "sinh" => ScalarExpr::trig(Trig::Sinh, c, j),
            "tanh" => ScalarExpr::trig(Trig::Tanh, c, j),
            _ => ScalarExpr::trig(Trig::Cosh, c, j).inv().expect("cosh is invertible"),
        };
        Ok(self.scalar(e))
    }
}

fn zero_arg(nvars: usize) -> impl FnOnce() -> (GaussianRational, JMonomial) {
    move || (GaussianRational::zero(), JMonomial::one(nvars))
}

fn as_scalar(p: &CPoly) -> Option<ScalarExpr> {
    match p.len() {
        0 => None,
        1 => p.coeff(&[]).cloned(),
        _ => None,
    }
}

fn run<T>(s: &str, ctx: &ParseCtx, f: impl FnOnce(&mut Parser) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, at: 0, end: s.chars().count(), ctx };
    let out = f(&mut p)?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a polynomial expression.
pub fn parse_expr(s: &str, ctx: &ParseCtx) -> Result<CPoly, ParseError> {
    run(s, ctx, |p| p.expr())
}

/// Parses `lhs = rhs` and returns both sides.
pub fn parse_relation(s: &str, ctx: &ParseCtx) -> Result<(CPoly, CPoly), ParseError> {
    run(s, ctx, |p| {
        let lhs = p.expr()?;
        p.expect('=')?;
        let rhs = p.expr()?;
        Ok((lhs, rhs))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::xi_name;

    fn ctx3() -> ParseCtx {
        ParseCtx::vector(3, JMonomial::from_exps(&[1, 1]))
    }

    #[test]
    fn commutator_and_scalars() {
        let (l, r) = parse_relation("[xi3,xi2] = i*v*xi1*xi2", &ctx3()).unwrap();
        assert_eq!(l.render(&xi_name, false), "xi3*xi2 - xi2*xi3");
        assert_eq!(r.render(&xi_name, false), "i*v*xi1*xi2");
    }

    #[test]
    fn trig_arguments_and_division() {
        let e = parse_expr("xi1*cosh(J*v/2) + i*xi3*J*sinh(J*v/2)", &ctx3()).unwrap();
        assert_eq!(e.render(&xi_name, false), "cosh(j1*j2*v/2)*xi1 + i*j1*j2*sinh(j1*j2*v/2)*xi3");
        let t = parse_expr("tanh(j1*v)/j1", &ctx3()).unwrap();
        assert_eq!(t.render(&xi_name, false), "j1^-1*tanh(j1*v)");
        let s = parse_expr("sech(v)*cosh(v)", &ctx3()).unwrap();
        assert_eq!(s.render(&xi_name, false), "1");
    }

    #[test]
    fn sphere_generators() {
        let c = ParseCtx::sphere(3, JMonomial::from_exps(&[1, 1]));
        let (l, _) = parse_relation("rh1*r2 - rh2*r1 = 0", &c).unwrap();
        assert!(l.coeff(&[2, 1]).is_some() && l.coeff(&[3, 0]).is_some());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("xi1 * xi9", &ctx3()).unwrap_err();
        assert_eq!(e.pos, 7);
        assert!(parse_expr("cosh(xi1)", &ctx3()).is_err());
        assert!(parse_expr("xi1/xi2", &ctx3()).is_err());
        assert!(parse_expr("xi1 xi2", &ctx3()).is_err());
        assert!(parse_relation("xi1", &ctx3()).is_err());
    }
}
