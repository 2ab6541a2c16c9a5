use num_complex::Complex64;

use super::{BinOp, Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let done = t.0 == Tok::End;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'0'..=b'9' | b'.' => return self.number(start),
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    expected: vec!["number".into(), "identifier".into(), "operator".into(), "parenthesis".into()],
                })
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let digits = |lx: &mut Self| {
            let s = lx.pos;
            while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(Error::Syntax { offset: start, expected: vec!["digit".into()] });
        }
        // Exponent only when followed by digits, so `2*eps` style names stay identifiers.
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        let v: f64 = text
            .parse()
            .map_err(|_| Error::Syntax { offset: start, expected: vec!["number".into()] })?;
        Ok((Tok::Num(v), start))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    allowed: Option<&'a [&'a str]>,
}

/// Parse an expression; any identifier that is not a function, `x`, `i`
/// or `pi` becomes a named parameter.
pub fn parse(src: &str) -> Result<Expr> {
    run(src, None)
}

/// Parse, rejecting parameter names outside `allowed`.
pub fn parse_with_params(src: &str, allowed: &[&str]) -> Result<Expr> {
    run(src, Some(allowed))
}

fn run(src: &str, allowed: Option<&[&str]>) -> Result<Expr> {
    let toks = Lexer::tokens(src)?;
    let mut p = Parser { toks, at: 0, allowed };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.error(&["operator", "end of input"])),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Syntax { offset: self.offset(), expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::bin(if c == '+' { BinOp::Add } else { BinOp::Sub }, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::bin(if c == '*' { BinOp::Mul } else { BinOp::Div }, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(Complex64::new(v, 0.0))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(Error::UnknownFunction { name, offset });
                    };
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if Func::from_name(&name).is_some() {
                    return Err(self.error(&["("]));
                }
                match name.as_str() {
                    "x" => Ok(Expr::X),
                    "i" => Ok(Expr::I),
                    "pi" => Ok(Expr::Pi),
                    _ => match self.allowed {
                        Some(list) if !list.contains(&name.as_str()) => Err(Error::UnknownIdentifier { name, offset }),
                        _ => Ok(Expr::Param(name)),
                    },
                }
            }
            _ => {
                Err(Error::Syntax { offset, expected: vec!["number".into(), "identifier".into(), "(".into()] })
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[")", "operator"]))
        }
    }
}
