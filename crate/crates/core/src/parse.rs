//! Text grammars for polynomials.
//!
//! * Dense polynomials: ordinary arithmetic in `x` with Gaussian-rational
//!   constants, e.g. `-x-1`, `3x^2 + 1/2`, `(1+i)x^2 - 2x`, `x*(x-1)`.
//! * Factored polynomials: a `*`-separated product of `x` or `(x ± c)`
//!   factors, each with an optional `^m`, e.g. `x*(x-1)`, `(x+1/2)^2*(x-3/2)^2`,
//!   `(x-(1/3+i))`. The constant `1` is the empty product.

use crate::error::{Error, Result};
use crate::exact::{DensePolynomial, FactoredPolynomial, GaussianRational};

pub fn parse_scalar(s: &str) -> Result<GaussianRational> {
    s.parse()
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(GaussianRational),
    X,
    I,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        match c {
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                if k < chars.len() && chars[k] == '/' {
                    k += 1;
                    let den_start = k;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    if den_start == k {
                        return Err(Error::Parse(format!("missing denominator in {src:?}")));
                    }
                }
                let lit: String = chars[start..k].iter().collect();
                out.push(Token::Num(lit.parse()?));
                continue;
            }
            'x' | 'z' => out.push(Token::X),
            'i' => out.push(Token::I),
            '+' => out.push(Token::Plus),
            '-' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::LParen),
            ')' => out.push(Token::RParen),
            other => return Err(Error::Parse(format!("unexpected {other:?} in {src:?}"))),
        }
        k += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<DensePolynomial> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DensePolynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                // implicit multiplication: `3x`, `2i`, `(1+i)x^2`, `x(x-1)`
                Some(Token::Num(_) | Token::X | Token::I | Token::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<DensePolynomial> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Token::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<DensePolynomial> {
        let base = self.primary()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let Some(Token::Num(n)) = self.bump().cloned() else {
                return Err(self.err("expected exponent"));
            };
            let e = n
                .as_integer()
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| self.err("exponent must be a nonnegative integer"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<DensePolynomial> {
        match self.bump().cloned() {
            Some(Token::Num(c)) => Ok(DensePolynomial::constant(c)),
            Some(Token::X) => Ok(DensePolynomial::x()),
            Some(Token::I) => Ok(DensePolynomial::constant(GaussianRational::i())),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(&Token::RParen) {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a number, x, i or '('")),
        }
    }
}

/// Parses a dense polynomial from an arithmetic expression in `x`, or from
/// a JSON array of coefficients in ascending order.
pub fn parse_polynomial(src: &str) -> Result<DensePolynomial> {
    let trimmed = src.trim();
    if trimmed.starts_with('[') {
        let coeffs: Vec<GaussianRational> =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(DensePolynomial::new(coeffs));
    }
    let tokens = tokenize(trimmed)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { tokens: &tokens, pos: 0, src };
    let out = p.expr()?;
    if p.pos != tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

fn split_top_level(src: &str, sep: char) -> Result<Vec<&str>> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (k, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&src[start..k]);
                start = k + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in {src:?}")));
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {src:?}")));
    }
    parts.push(&src[start..]);
    Ok(parts)
}

/// Parses a product of linear factors into roots and multiplicities, or a
/// JSON root list `[{"root": "...", "mult": m}, ...]`.
pub fn parse_factored(src: &str) -> Result<FactoredPolynomial> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.starts_with('[') {
        return serde_json::from_str(&s).map_err(|e| Error::Parse(e.to_string()));
    }
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if s == "1" {
        return Ok(FactoredPolynomial::one());
    }
    let mut roots = Vec::new();
    for factor in split_top_level(&s, '*')? {
        let (base, mult) = match factor.rsplit_once('^') {
            Some((b, m)) if !m.contains(')') => {
                let m: u32 = m
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in factor {factor:?}")))?;
                (b, m)
            }
            _ => (factor, 1),
        };
        let linear = parse_polynomial(base)?;
        if linear.degree() != Some(1) || !linear.is_monic() {
            return Err(Error::Parse(format!(
                "factor {factor:?} is not of the form (x - root)^m"
            )));
        }
        let root = -&linear.coeff(0);
        roots.push((root, mult));
    }
    Ok(FactoredPolynomial::new(roots))
}
