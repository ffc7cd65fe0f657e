//! Parser for coefficient-ring expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ['^' exponent]
//! atom     := INT | 'L' | '[' NAME ']' | '(' expr ')'
//! exponent := ['-'] INT | '(' ['-'] INT ['/' INT] ')'
//! ```
//!
//! Rational and negative exponents are only meaningful on `L` (the one
//! invertible generator); other atoms accept nonnegative integer powers.
//! An L-exponent's denominator must divide the extension index `r`.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ring::motive::MotiveExpr;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Symbol(String),
    L,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            'L' => {
                tokens.push((Token::L, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits parse as BigInt");
                tokens.push((Token::Num(n), start));
            }
            '[' => {
                let start = i;
                i += 1;
                let name_start = i;
                while i < bytes.len() && bytes[i] != b']' {
                    let ch = bytes[i] as char;
                    if !(ch.is_ascii_alphanumeric() || ch == '_') {
                        return Err(Error::Parse {
                            pos: i,
                            msg: format!("invalid character {ch:?} in symbol name"),
                        });
                    }
                    i += 1;
                }
                if i >= bytes.len() {
                    return Err(Error::Parse { pos: start, msg: "unterminated symbol: missing ']'".into() });
                }
                if i == name_start {
                    return Err(Error::Parse { pos: start, msg: "empty symbol name".into() });
                }
                tokens.push((Token::Symbol(text[name_start..i].to_string()), start));
                i += 1; // consume ']'
            }
            _ => {
                return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    r: u32,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<()> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse { pos: self.here(), msg: format!("expected {what}") })
        }
    }

    fn parse_expr(&mut self) -> Result<MotiveExpr> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = &acc + &t;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<MotiveExpr> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let f = self.parse_factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<MotiveExpr> {
        let pos = self.here();
        let is_l = matches!(self.peek(), Some(Token::L));
        let base = self.parse_atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp_pos = self.here();
        let exp = self.parse_exponent()?;
        if is_l {
            // rebuild L^exp exactly (base is plain L here)
            return MotiveExpr::l_pow(exp, self.r);
        }
        if !exp.is_integer() {
            return Err(Error::Parse {
                pos: exp_pos,
                msg: "rational exponents are only allowed on L".into(),
            });
        }
        let e = *exp.numer();
        if e < 0 {
            return Err(Error::Parse {
                pos: exp_pos,
                msg: format!("negative exponent at {pos} is only allowed on L"),
            });
        }
        let e = e.to_u32().ok_or_else(|| Error::Parse {
            pos: exp_pos,
            msg: "exponent too large".into(),
        })?;
        Ok(base.pow(e))
    }

    fn parse_atom(&mut self) -> Result<MotiveExpr> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Num(n)) => Ok(MotiveExpr::bigint(n.clone(), self.r)),
            Some(Token::L) => Ok(MotiveExpr::lefschetz(self.r)),
            Some(Token::Symbol(name)) => {
                let name = name.clone();
                Ok(MotiveExpr::symbol(&name, self.r))
            }
            Some(Token::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(&Token::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(Error::Parse { pos, msg: "expected integer, 'L', '[symbol]' or '('".into() }),
        }
    }

    fn parse_exponent(&mut self) -> Result<Rational64> {
        match self.peek() {
            Some(Token::LParen) => {
                self.pos += 1;
                let num = self.parse_signed_int()?;
                let mut den: i64 = 1;
                if self.peek() == Some(&Token::Slash) {
                    self.pos += 1;
                    den = self.parse_signed_int()?;
                    if den <= 0 {
                        return Err(Error::Parse {
                            pos: self.here(),
                            msg: "exponent denominator must be positive".into(),
                        });
                    }
                }
                self.expect(&Token::RParen, "')' after exponent")?;
                Ok(Rational64::new(num, den))
            }
            _ => Ok(Rational64::from_integer(self.parse_signed_int()?)),
        }
    }

    fn parse_signed_int(&mut self) -> Result<i64> {
        let mut sign = 1i64;
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            sign = -1;
        }
        let pos = self.here();
        match self.bump() {
            Some(Token::Num(n)) => {
                let v = n.to_i64().ok_or_else(|| Error::Parse {
                    pos,
                    msg: "exponent out of range".into(),
                })?;
                Ok(sign * v)
            }
            _ => Err(Error::Parse { pos, msg: "expected integer".into() }),
        }
    }
}

/// Parse an expression string into a canonical ring element with extension
/// index `r`.
pub fn parse_motive_expr(text: &str, r: u32) -> Result<MotiveExpr> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { tokens: &tokens, pos: 0, r, end: text.len() };
    let expr = p.parse_expr()?;
    if p.pos != tokens.len() {
        return Err(Error::Parse { pos: p.here(), msg: "trailing input after expression".into() });
    }
    Ok(expr)
}
