//! Tiny expression grammar for explicit-spectrum tails:
//! numbers, `n`, `+ - * / ^`, parentheses and `exp(...)`.

use num_traits::{ToPrimitive, Zero};

use crate::number::{is_integer, parse_q, poly_mul, q_to_f64, trim_poly, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Q),
    N,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, String> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(format!("unexpected token {:?} in {src:?}", p.tokens[p.pos]));
        }
        Ok(e)
    }

    pub fn eval(&self, n: f64) -> f64 {
        match self {
            Expr::Num(q) => q_to_f64(q),
            Expr::N => n,
            Expr::Neg(a) => -a.eval(n),
            Expr::Add(a, b) => a.eval(n) + b.eval(n),
            Expr::Sub(a, b) => a.eval(n) - b.eval(n),
            Expr::Mul(a, b) => a.eval(n) * b.eval(n),
            Expr::Div(a, b) => a.eval(n) / b.eval(n),
            Expr::Pow(a, b) => a.eval(n).powf(b.eval(n)),
            Expr::Exp(a) => a.eval(n).exp(),
        }
    }

    /// log of the value, without overflow for exp(·) and products of them.
    pub fn ln_eval(&self, n: f64) -> f64 {
        match self {
            Expr::Exp(a) => a.eval(n),
            Expr::Mul(a, b) => a.ln_eval(n) + b.ln_eval(n),
            Expr::Div(a, b) => a.ln_eval(n) - b.ln_eval(n),
            Expr::Pow(a, b) => b.eval(n) * a.ln_eval(n),
            other => other.eval(n).ln(),
        }
    }

    /// Value of an expression free of n and exp, folded exactly.
    pub fn as_const(&self) -> Option<Q> {
        match self {
            Expr::Num(q) => Some(q.clone()),
            Expr::Neg(a) => Some(-a.as_const()?),
            Expr::Add(a, b) => Some(a.as_const()? + b.as_const()?),
            Expr::Sub(a, b) => Some(a.as_const()? - b.as_const()?),
            Expr::Mul(a, b) => Some(a.as_const()? * b.as_const()?),
            Expr::Div(a, b) => {
                let d = b.as_const()?;
                (!d.is_zero()).then(|| a.as_const().map(|x| x / d))?
            }
            _ => None,
        }
    }

    /// Exact rational coefficients when the expression is a polynomial in n.
    pub fn to_polynomial(&self) -> Option<Vec<Q>> {
        let p = match self {
            Expr::Num(q) => vec![q.clone()],
            Expr::N => vec![Q::zero(), Q::from_integer(1.into())],
            Expr::Neg(a) => a.to_polynomial()?.into_iter().map(|c| -c).collect(),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (a.to_polynomial()?, b.to_polynomial()?);
                let sub = matches!(self, Expr::Sub(..));
                let mut out = vec![Q::zero(); x.len().max(y.len())];
                for (i, c) in x.into_iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in y.into_iter().enumerate() {
                    if sub {
                        out[i] -= c;
                    } else {
                        out[i] += c;
                    }
                }
                out
            }
            Expr::Mul(a, b) => poly_mul(&a.to_polynomial()?, &b.to_polynomial()?),
            Expr::Div(a, b) => {
                let d = b.to_polynomial()?;
                let d = trim_poly(d);
                if d.len() != 1 {
                    return None;
                }
                a.to_polynomial()?.into_iter().map(|c| c / &d[0]).collect()
            }
            Expr::Pow(a, b) => {
                let k = b.as_const()?;
                if !is_integer(&k) || k < Q::zero() {
                    return None;
                }
                let k = k.to_integer().to_usize()?;
                let base = a.to_polynomial()?;
                let mut acc = vec![Q::from_integer(1.into())];
                for _ in 0..k {
                    acc = poly_mul(&acc, &base);
                }
                acc
            }
            Expr::Exp(_) => return None,
        };
        Some(trim_poly(p))
    }

    /// Recognizes c·exp(d·n^p) (also b^n and exp(n^p)), returning (c, d, p).
    pub fn exp_power_form(&self) -> Option<(f64, f64, f64)> {
        match self {
            Expr::Exp(inner) => {
                let (d, p) = inner.power_form()?;
                Some((1.0, d, p))
            }
            Expr::Pow(base, expo) => {
                let b = base.as_const()?;
                let (d, p) = expo.power_form()?;
                Some((1.0, d * q_to_f64(&b).ln(), p))
            }
            Expr::Mul(a, b) => {
                if let Expr::Num(c) = a.as_ref() {
                    let (c0, d, p) = b.exp_power_form()?;
                    return Some((c0 * q_to_f64(c), d, p));
                }
                if let Expr::Num(c) = b.as_ref() {
                    let (c0, d, p) = a.exp_power_form()?;
                    return Some((c0 * q_to_f64(c), d, p));
                }
                None
            }
            _ => None,
        }
    }

    /// Recognizes d·n^p, returning (d, p).
    fn power_form(&self) -> Option<(f64, f64)> {
        match self {
            Expr::N => Some((1.0, 1.0)),
            Expr::Pow(b, e) => match b.as_ref() {
                Expr::N => Some((1.0, q_to_f64(&e.as_const()?))),
                _ => None,
            },
            Expr::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
                (Expr::Num(c), x) | (x, Expr::Num(c)) => {
                    let (d, p) = x.power_form()?;
                    Some((d * q_to_f64(c), p))
                }
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    N,
    Exp,
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'n' => {
                out.push(Tok::N);
                i += 1;
            }
            'e' if chars[i..].starts_with(&['e', 'x', 'p']) => {
                out.push(Tok::Exp);
                i += 3;
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push(Tok::Num(parse_q(&lit).ok_or(format!("bad number {lit:?}"))?));
            }
            other => return Err(format!("unexpected character {other:?} in {src:?}")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if op == '*' { Expr::Mul(lhs.into(), rhs.into()) } else { Expr::Div(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, String> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(self.factor()?.into()));
        }
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let expo = self.factor()?;
            return Ok(Expr::Pow(base.into(), expo.into()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        let tok = self.peek().cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Tok::Num(q) => Ok(Expr::Num(q)),
            Tok::N => Ok(Expr::N),
            Tok::Exp => {
                if self.peek() != Some(&Tok::LParen) {
                    return Err("exp must be followed by '('".into());
                }
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Exp(inner.into()))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), String> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err("missing ')'".into())
        }
    }
}
