//! Text syntax for elements and polynomials.
//!
//! Expressions use integers, `pi` (the uniformizer), `w` (the residue
//! generator lifted to `W_F`), `t` (the base uniformizer in equal
//! characteristic) and, in polynomials, `x`. Operators are `+ - * ^` with
//! integer exponents, plus parentheses. An element may end with
//! `+ O(pi^N)` to set its absolute precision.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::element::{LocalElement, EXACT};
use super::poly::{self, LocalPoly};
use super::ring::FieldKind;
use super::tower::Tower;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
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
            let lit: String = chars[start..i].iter().collect();
            let n = lit.parse().map_err(|_| Error::Parse(format!("integer {lit} overflows")))?;
            out.push(Tok::Int(n));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Int(i64),
    Sym(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Big(Box<Expr>, i64),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                // `+ O(pi^N)` is only valid at the very end
                if self.peek() == Some(&Tok::Ident("O".into())) {
                    let n = self.big_o()?;
                    lhs = Expr::Big(Box::new(lhs), n);
                    if self.peek().is_some() {
                        return Err(Error::Parse("O(...) must be the last term".into()));
                    }
                    return Ok(lhs);
                }
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn big_o(&mut self) -> Result<i64> {
        self.pos += 1;
        if !self.eat('(') || self.peek() != Some(&Tok::Ident("pi".into())) {
            return Err(Error::Parse("expected O(pi^N)".into()));
        }
        self.pos += 1;
        let n = if self.eat('^') { self.exponent()? } else { 1 };
        if !self.eat(')') {
            return Err(Error::Parse("unclosed O(".into()));
        }
        Ok(n)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek() == Some(&Tok::Ident("O".into())) {
            let n = self.big_o()?;
            if self.peek().is_some() {
                return Err(Error::Parse("O(...) must be the last term".into()));
            }
            return Ok(Expr::Big(Box::new(Expr::Int(0)), n));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.eat('(') {
            let n = self.exponent()?;
            if !self.eat(')') {
                return Err(Error::Parse("unclosed exponent".into()));
            }
            return Ok(n);
        }
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(Error::Parse("exponent must be an integer".into())),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("unclosed parenthesis".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

fn trim(mut p: LocalPoly) -> LocalPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn eval(e: &Expr, tower: &Arc<Tower>, var: bool) -> Result<LocalPoly> {
    let constant = |x: LocalElement| Ok(vec![x]);
    match e {
        Expr::Int(n) => constant(LocalElement::from_int(tower, *n)),
        Expr::Sym(s) => match s.as_str() {
            "pi" => constant(LocalElement::pi(tower)),
            "w" if tower.f() > 1 => constant(LocalElement::gen(tower)),
            "t" if tower.kind() == FieldKind::Laurent => constant(LocalElement::base_uniformizer(tower)),
            "x" if var => Ok(vec![LocalElement::zero(tower, EXACT), LocalElement::one(tower)]),
            _ => Err(Error::Parse(format!("unknown symbol {s}"))),
        },
        Expr::Add(a, b) => Ok(trim(poly::add(&eval(a, tower, var)?, &eval(b, tower, var)?, tower))),
        Expr::Sub(a, b) => {
            let nb: LocalPoly = eval(b, tower, var)?.iter().map(|c| -c).collect();
            Ok(trim(poly::add(&eval(a, tower, var)?, &nb, tower)))
        }
        Expr::Mul(a, b) => Ok(trim(poly::mul(&eval(a, tower, var)?, &eval(b, tower, var)?, tower))),
        Expr::Neg(a) => Ok(eval(a, tower, var)?.iter().map(|c| -c).collect()),
        Expr::Pow(a, n) => {
            let base = eval(a, tower, var)?;
            if base.len() == 1 {
                return constant(base[0].pow(*n)?);
            }
            if *n < 0 {
                return Err(Error::Parse("negative power of a polynomial".into()));
            }
            let mut acc = vec![LocalElement::one(tower)];
            for _ in 0..*n {
                acc = trim(poly::mul(&acc, &base, tower));
            }
            Ok(acc)
        }
        Expr::Big(a, n) => {
            if var {
                return Err(Error::Parse("O(...) is not allowed in polynomials".into()));
            }
            let v = eval(a, tower, var)?;
            Ok(vec![v[0].with_precision(*n)])
        }
    }
}

/// Parses an element of the field described by `tower`.
pub fn parse_element(s: &str, tower: &Arc<Tower>) -> Result<LocalElement> {
    let e = parse_expr(s)?;
    Ok(eval(&e, tower, false)?.swap_remove(0))
}

/// Parses a polynomial in `x`; coefficients come back constant term first.
pub fn parse_polynomial(s: &str, tower: &Arc<Tower>) -> Result<LocalPoly> {
    let e = parse_expr(s)?;
    eval(&e, tower, true)
}

fn fmt_monomial(coeff: &str, parts: &[String]) -> String {
    let mut factors: Vec<&str> = Vec::new();
    if coeff != "1" || parts.is_empty() {
        factors.push(coeff);
    }
    factors.extend(parts.iter().map(String::as_str));
    factors.join("*")
}

fn power(sym: &str, k: i64) -> Option<String> {
    match k {
        0 => None,
        1 => Some(sym.to_string()),
        _ => Some(format!("{sym}^{k}")),
    }
}

/// Canonical text of an element, always with its precision.
pub fn format_element(x: &LocalElement) -> String {
    let t = x.tower();
    let ring = t.ring();
    let f = t.f();
    let mut terms: Vec<String> = Vec::new();
    let mut prefix = None;
    if !x.is_zero() {
        for (i, c) in x.data().iter().enumerate() {
            let pi_part = power("pi", i as i64);
            match t.kind() {
                FieldKind::Padic => {
                    for (j, &a) in c.iter().enumerate() {
                        if a == 0 {
                            continue;
                        }
                        let parts: Vec<String> =
                            [power("w", j as i64), pi_part.clone()].into_iter().flatten().collect();
                        terms.push(fmt_monomial(&a.to_string(), &parts));
                    }
                }
                FieldKind::Laurent => {
                    for d in 0..ring.cap() as usize {
                        let digit = &c[d * f..(d + 1) * f];
                        if digit.iter().all(|&v| v == 0) {
                            continue;
                        }
                        let r = ring.residue_field().from_coeffs(&digit.iter().map(|&v| v as u64).collect::<Vec<_>>());
                        let s = r.to_string();
                        let coeff = if s.contains(' ') { format!("({s})") } else { s };
                        let parts: Vec<String> =
                            [power("t", d as i64 + x.shift()), pi_part.clone()].into_iter().flatten().collect();
                        terms.push(fmt_monomial(&coeff, &parts));
                    }
                }
            }
        }
        if t.kind() == FieldKind::Padic && x.shift() != 0 {
            prefix = Some(format!("{}^{}", t.p(), x.shift()));
        }
    }
    let body = if terms.is_empty() {
        "0".to_string()
    } else {
        let sum = terms.join(" + ");
        match prefix {
            Some(pf) if terms.len() == 1 => format!("{pf}*{sum}"),
            Some(pf) => format!("{pf}*({sum})"),
            None => sum,
        }
    };
    format!("{body} + O(pi^{})", x.precision())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::ring::UnramRing;

    fn tower(kind: FieldKind, p: u64, f: usize, eis: &[i64]) -> Arc<Tower> {
        let ring = UnramRing::new(kind, p, f, 8).unwrap();
        if eis.is_empty() {
            return Tower::unramified(ring).unwrap();
        }
        let coeffs = eis.iter().map(|&c| if c == 0 { ring.zero() } else { ring.base_uniformizer_pow(1) }).collect();
        Tower::new(ring, coeffs).unwrap()
    }

    #[test]
    fn round_trips() {
        let cases = [
            (tower(FieldKind::Padic, 3, 1, &[]), "3^-2*5 + O(pi^4)"),
            (tower(FieldKind::Padic, 3, 2, &[3, 0]), "1 + 2*w*pi + O(pi^9)"),
            (tower(FieldKind::Laurent, 2, 2, &[]), "t^-1 + w*t^2 + O(pi^5)"),
            (tower(FieldKind::Laurent, 3, 1, &[3, 0, 0]), "(2)*t^-1*pi + O(pi^3)"),
        ];
        for (t, s) in cases {
            let x = parse_element(s, &t).unwrap();
            let printed = format_element(&x);
            let y = parse_element(&printed, &t).unwrap();
            assert_eq!(x, y, "{s} -> {printed}");
        }
    }

    #[test]
    fn polynomial_coefficients() {
        let t = tower(FieldKind::Padic, 3, 1, &[]);
        let g = parse_polynomial("x^6 + 6*x^2 + 6", &t).unwrap();
        assert_eq!(g.len(), 7);
        assert!(g[2].eq_mod(&LocalElement::from_int(&t, 6)));
        assert!(g[6].eq_mod(&LocalElement::one(&t)));
    }

    #[test]
    fn rejects_garbage() {
        let t = tower(FieldKind::Padic, 3, 1, &[]);
        assert!(parse_element("1 + ", &t).is_err());
        assert!(parse_element("w", &t).is_err());
        assert!(parse_element("O(pi^3) + 1", &t).is_err());
        assert!(parse_polynomial("x^-1", &t).is_err());
    }
}
