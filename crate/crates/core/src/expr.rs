//! Small expression parser for rational functions: `+ - * / ^ ( )`, integer and
//! decimal literals, identifiers as variables.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{LaurentPolynomial, Q};
use crate::rational::{PositiveRational, RationalFunction};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&lit)?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn parse_decimal(lit: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("bad number `{lit}`"));
    match lit.split_once('.') {
        None => Ok(Q::from_integer(lit.parse::<BigInt>().map_err(|_| bad())?)),
        Some((a, b)) => {
            if b.contains('.') || (a.is_empty() && b.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{a}{b}");
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            Ok(Q::new(n, BigInt::from(10u32).pow(b.len() as u32)))
        }
    }
}

/// Sort key putting `x2` before `x10`.
fn natural_key(s: &str) -> (String, u64, String) {
    let stem: String = s.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let digits = &s[stem.len()..];
    (stem, digits.parse().unwrap_or(0), s.to_string())
}

pub fn sort_natural(names: &mut [String]) {
    names.sort_by_key(|a| natural_key(a));
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
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

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let mut sign = 1i32;
        let paren = self.eat('(');
        while self.eat('-') {
            sign = -sign;
        }
        let k = match self.peek().cloned() {
            Some(Tok::Num(v)) if v.is_integer() => {
                self.pos += 1;
                let k: i32 = v
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Parse("exponent too large".into()))?;
                k * sign
            }
            _ => return Err(Error::Parse("exponent must be an integer".into())),
        };
        if paren && !self.eat(')') {
            return Err(Error::Parse("missing `)` after exponent".into()));
        }
        base.powi(k)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(LaurentPolynomial::constant(self.n(), v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                Ok(RationalFunction::from_poly(LaurentPolynomial::var(self.n(), i)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// Variables appearing in the expressions, naturally sorted.
pub fn collect_vars(exprs: &[&str]) -> Result<Vec<String>> {
    let mut names: Vec<String> = Vec::new();
    for s in exprs {
        for t in tokenize(s)? {
            if let Tok::Ident(n) = t {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
    }
    sort_natural(&mut names);
    Ok(names)
}

/// Explicit comma-separated variables, else those found in the expressions;
/// indexed names x1, x3 are completed to x1, x2, x3.
pub fn infer_vars(exprs: &[&str], explicit: Option<&str>) -> Result<Vec<String>> {
    if let Some(v) = explicit {
        return Ok(v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    }
    let found = collect_vars(exprs)?;
    let parts: Vec<(&str, Option<usize>)> = found
        .iter()
        .map(|v| {
            let k = v.find(|c: char| c.is_ascii_digit()).unwrap_or(v.len());
            (&v[..k], v[k..].parse::<usize>().ok().filter(|_| !v[k..].starts_with('0')))
        })
        .collect();
    match parts.first() {
        Some((prefix, _)) if !prefix.is_empty() && parts.iter().all(|(p, i)| p == prefix && i.is_some()) => {
            let top = parts.iter().filter_map(|(_, i)| *i).max().unwrap_or(0);
            Ok((1..=top).map(|i| format!("{prefix}{i}")).collect())
        }
        _ => Ok(found),
    }
}

/// Tropical coordinate names: x1 → ξ1, a lone variable → ξ, else ξ_name.
pub fn xi_names(vars: &[String]) -> Vec<String> {
    if vars.len() == 1 {
        return vec!["ξ".into()];
    }
    let split = |v: &str| {
        let k = v.find(|c: char| c.is_ascii_digit()).unwrap_or(v.len());
        (v[..k].to_string(), v[k..].to_string())
    };
    let parts: Vec<(String, String)> = vars.iter().map(|v| split(v)).collect();
    let shared = parts.iter().all(|(p, d)| !d.is_empty() && *p == parts[0].0);
    vars.iter()
        .zip(&parts)
        .map(|(v, (_, d))| if shared { format!("ξ{d}") } else { format!("ξ_{v}") })
        .collect()
}

pub fn parse_rational(s: &str, vars: &[String]) -> Result<RationalFunction> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks: &toks, pos: 0, vars };
    let r = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    if r.den.is_zero() {
        return Err(Error::DenominatorZero);
    }
    Ok(r)
}

pub fn parse_positive(s: &str, vars: &[String]) -> Result<PositiveRational> {
    let r = parse_rational(s, vars)?;
    if r.num.is_zero() {
        return Err(Error::NotPositive("expression is identically zero".into()));
    }
    PositiveRational::try_from_rational(r)
}

pub fn parse_poly(s: &str, vars: &[String]) -> Result<LaurentPolynomial> {
    let r = parse_rational(s, vars)?;
    if r.den.as_monomial().is_some() {
        let (e, c) = r.den.as_monomial().unwrap();
        let inv: Vec<i32> = e.iter().map(|x| -x).collect();
        return Ok(r.num.mul_monomial(&inv, &(Q::one() / c)));
    }
    r.reduce()
}

/// Parse a comma-separated rational vector like `1,-2,3/4`.
pub fn parse_vector(s: &str) -> Result<Vec<Q>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(crate::poly::parse_q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn infers_and_names_variables() {
        let v = infer_vars(&["x1+x3"], None).unwrap();
        assert_eq!(v, ["x1", "x2", "x3"]);
        assert_eq!(xi_names(&v), ["ξ1", "ξ2", "ξ3"]);
        assert_eq!(xi_names(&infer_vars(&["a+b"], None).unwrap()), ["ξ_a", "ξ_b"]);
        assert_eq!(infer_vars(&["x"], Some("y, x")).unwrap(), ["y", "x"]);
    }

    #[test]
    fn parses_example_quotient() {
        let vars = collect_vars(&["(x^3+1)/(x+1)"]).unwrap();
        let f = parse_positive("(x^3+1)/(x+1)", &vars).unwrap();
        assert_eq!(f.num().len(), 2);
        assert_eq!(f.den().len(), 2);
        assert_eq!(f.eval_q(&[q(2)]).unwrap(), q(3));
    }

    #[test]
    fn natural_order() {
        let v = collect_vars(&["x10 + x2 + x1"]).unwrap();
        assert_eq!(v, vec!["x1", "x2", "x10"]);
    }

    #[test]
    fn negative_exponents_and_decimals() {
        let vars = vec!["b".to_string()];
        let f = parse_rational("b^-2 + 0.5", &vars).unwrap();
        assert_eq!(f.eval_q(&[q(2)]).unwrap(), crate::poly::qf(3, 4));
        let g = parse_rational("b^(-1)", &vars).unwrap();
        assert_eq!(g.eval_q(&[q(4)]).unwrap(), crate::poly::qf(1, 4));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("x +* y", &["x".into(), "y".into()]).is_err());
        assert!(parse_rational("z", &["x".into()]).is_err());
    }
}
