//! Text form of polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := rational ['i'] | 'i' | var | '(' expr ')'
//!         | 'conj(' expr ')' | 'Re(' expr ')' | 'Im(' expr ')'
//! var    := 'z'<k> | 'w'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coeff::{fmt_rational, GaussianRational};
use crate::poly::{Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    nz: usize,
    src: &'a str,
}

pub fn parse_poly(src: &str, nz: usize) -> Result<Poly, ParseError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0, nz, src };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty polynomial"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(e)
}

/// Smallest `nz` that covers every `z<k>` mentioned in `src`.
pub fn infer_nz(src: &str) -> usize {
    let chars: Vec<char> = src.chars().collect();
    let mut best = 0;
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == 'z' && (i == 0 || !chars[i - 1].is_alphanumeric()) {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 1 {
                let s: String = chars[i + 1..j].iter().collect();
                if let Ok(k) = s.parse::<usize>() {
                    best = best.max(k);
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for c in self.src.chars().take(pos) {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error_at(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.location(pos);
        ParseError { line, col, msg: msg.into() }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, msg)
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            None => self.error("unexpected end of input"),
            Some('*') if self.peek_at(1) == Some('*') => self.error("unexpected '**' (use '^' for powers)"),
            Some(c) => self.error(format!("unexpected '{}'", c)),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                if self.peek_at(1) == Some('*') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                let f = self.factor()?;
                acc = &acc * &f;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error_at(start, "expected a natural exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| self.error_at(start, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn imaginary_suffix(&mut self) -> bool {
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some('i') && !matches!(self.peek_at(1), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
            true
        } else {
            self.pos = save;
            false
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits();
                let mut value = BigRational::from_integer(num.parse::<BigInt>().unwrap());
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let dstart = self.pos;
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.error_at(dstart, "expected a denominator"));
                    }
                    let den: BigInt = den.parse().unwrap();
                    if den.is_zero() {
                        return Err(self.error_at(dstart, "zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                let c = if self.imaginary_suffix() {
                    GaussianRational::new(BigRational::zero(), value)
                } else {
                    GaussianRational::from_real(value)
                };
                Ok(Poly::constant(self.nz, c))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                match name.as_str() {
                    "i" => Ok(Poly::constant(self.nz, GaussianRational::i())),
                    "w" => Ok(Poly::var(self.nz, Var::W)),
                    "conj" | "Re" | "Im" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        Ok(match name.as_str() {
                            "conj" => e.conj(),
                            "Re" => e.real_part(),
                            _ => e.imag_part(),
                        })
                    }
                    _ => {
                        if let Some(rest) = name.strip_prefix('z') {
                            if let Ok(k) = rest.parse::<usize>() {
                                if k >= 1 && k <= self.nz && !rest.starts_with('0') {
                                    return Ok(Poly::var(self.nz, Var::Z(k)));
                                }
                            }
                        }
                        Err(self.error_at(start, format!("unknown variable '{}'", name)))
                    }
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn var_name(v: Var) -> String {
    v.to_string()
}

/// Parameter names for immersions: `t` when there is one parameter, else `t1, t2, ...`.
pub fn t_name(s: usize) -> impl Fn(Var) -> String {
    move |v| match v {
        Var::Z(_) if s == 1 => "t".to_string(),
        Var::Z(k) => format!("t{}", k),
        Var::Zbar(_) if s == 1 => "conj(t)".to_string(),
        Var::Zbar(k) => format!("conj(t{})", k),
        Var::W => "w".to_string(),
        Var::Wbar => "conj(w)".to_string(),
    }
}

fn coefficient_is_negative(c: &GaussianRational) -> bool {
    (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative())
}

/// Render in descending graded lexicographic order using `names` for variables.
pub fn render(p: &Poly, names: &dyn Fn(Var) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let nz = p.nz();
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let neg = coefficient_is_negative(c);
        let mag = if neg { -c } else { c.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (slot, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = names(Var::from_index(slot, nz));
            if e == 1 {
                factors.push(name);
            } else {
                factors.push(format!("{}^{}", name, e));
            }
        }
        let coeff_txt = if mag.im.is_zero() {
            fmt_rational(&mag.re)
        } else if mag.re.is_zero() {
            if mag.im.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rational(&mag.im))
            }
        } else {
            mag.to_string()
        };
        if factors.is_empty() {
            out.push_str(&coeff_txt);
        } else {
            if !mag.is_one() {
                out.push_str(&coeff_txt);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, &var_name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in [
            "z1^2*conj(z1) - 1/2*z2 + 3",
            "(1-2i)*z1*conj(w) + i*w",
            "-i*z2^3 + 1/3i",
            "z1*z2*conj(z1)*conj(z2)",
        ] {
            let p = parse_poly(s, 2).unwrap();
            let q = parse_poly(&p.to_string(), 2).unwrap();
            assert_eq!(p, q, "{}", s);
        }
    }

    #[test]
    fn sugar() {
        let a = parse_poly("2*Re(w) + (z2 + conj(z2) + z1*conj(z1))^2", 2).unwrap();
        let b = parse_poly("w + conj(w) + (z2 + conj(z2) + z1*conj(z1))^2", 2).unwrap();
        assert_eq!(a, b);
        let im = parse_poly("Im(w)", 1).unwrap();
        assert_eq!(im, parse_poly("-1/2i*w + 1/2i*conj(w)", 1).unwrap());
    }

    #[test]
    fn double_star_fails_there() {
        let e = parse_poly("z1 ** 2", 2).unwrap_err();
        assert_eq!((e.line, e.col), (1, 4));
        assert!(e.msg.contains("**"));
    }

    #[test]
    fn unknown_variable() {
        let e = parse_poly("z1 + z3", 2).unwrap_err();
        assert_eq!(e.col, 6);
        let e = parse_poly("z1 +\n  q", 2).unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }

    #[test]
    fn printing_order() {
        let p = parse_poly("z2 + z1^2 + 1", 2).unwrap();
        assert_eq!(p.to_string(), "z1^2 + z2 + 1");
        assert_eq!(infer_nz("conj(z3) + z12*w"), 12);
    }
}
