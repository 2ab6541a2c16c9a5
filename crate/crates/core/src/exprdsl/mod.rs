//! Complex-valued expression language for user-defined potentials.
//!
//! See `docs/grammar.md` for the EBNF. Evaluation is plain IEEE double
//! complex arithmetic with principal branches.

mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use parser::{parse, parse_with_params};

/// Values for named parameters.
pub type Bindings = BTreeMap<String, Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Exp,
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Coth,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Complex64),
    I,
    Pi,
    X,
    Param(String),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(Complex64::new(v, 0.0))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(c) if c.im != 0.0 || c.re < 0.0 || c.re.is_sign_negative() => 1,
            Expr::Neg(_) => PREC_NEG,
            Expr::Binary(op, ..) => op.precedence(),
            _ => PREC_ATOM,
        }
    }

    /// Names of free parameters.
    pub fn parameters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Param(p) => {
                out.insert(p.clone());
            }
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_params(out),
            Expr::Binary(_, a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            _ => {}
        }
    }

    /// Substitute parameter values, leaving an expression in `x` only.
    pub fn bind(&self, bindings: &Bindings) -> Result<Expr> {
        Ok(match self {
            Expr::Param(p) => Expr::Num(*bindings.get(p).ok_or_else(|| Error::UnboundParameter(p.clone()))?),
            Expr::Neg(a) => Expr::Neg(Box::new(a.bind(bindings)?)),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.bind(bindings)?)),
            Expr::Binary(op, a, b) => Expr::bin(*op, a.bind(bindings)?, b.bind(bindings)?),
            other => other.clone(),
        })
    }

    pub fn eval(&self, x: f64, bindings: &Bindings) -> Result<Complex64> {
        evaluate(self, x, bindings)
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else {
                    write!(f, "{}+{}*i", c.re, c.im)
                }
            }
            Expr::I => write!(f, "i"),
            Expr::Pi => write!(f, "pi"),
            Expr::X => write!(f, "x"),
            Expr::Param(p) => write!(f, "{p}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, PREC_NEG)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                match op {
                    BinOp::Pow => {
                        write_child(f, a, PREC_ATOM)?;
                        write!(f, "^")?;
                        write_child(f, b, PREC_NEG)
                    }
                    _ => {
                        write_child(f, a, p)?;
                        write!(f, "{}", op.symbol())?;
                        write_child(f, b, p + 1)
                    }
                }
            }
        }
    }
}

const POLE_FLOOR: f64 = 1e-300;

fn pole(what: &'static str, x: f64) -> Error {
    Error::EvaluationPole { what, x }
}

/// Evaluate at real `x` with the given parameter values.
pub fn evaluate(ast: &Expr, x: f64, bindings: &Bindings) -> Result<Complex64> {
    Ok(match ast {
        Expr::Num(c) => *c,
        Expr::I => Complex64::new(0.0, 1.0),
        Expr::Pi => Complex64::new(std::f64::consts::PI, 0.0),
        Expr::X => Complex64::new(x, 0.0),
        Expr::Param(p) => *bindings.get(p).ok_or_else(|| Error::UnboundParameter(p.clone()))?,
        // 0 - z keeps +0 imaginary parts, so -1 sits above the ln/sqrt cut like 0 - 1 does
        Expr::Neg(a) => Complex64::new(0.0, 0.0) - evaluate(a, x, bindings)?,
        Expr::Call(func, a) => apply(*func, evaluate(a, x, bindings)?, x)?,
        Expr::Binary(op, a, b) => {
            let u = evaluate(a, x, bindings)?;
            let v = evaluate(b, x, bindings)?;
            match op {
                BinOp::Add => u + v,
                BinOp::Sub => u - v,
                BinOp::Mul => u * v,
                BinOp::Div => {
                    if v.norm() < POLE_FLOOR {
                        return Err(pole("division", x));
                    }
                    u / v
                }
                BinOp::Pow => power(u, v, x)?,
            }
        }
    })
}

fn apply(func: Func, z: Complex64, x: f64) -> Result<Complex64> {
    Ok(match func {
        Func::Exp => z.exp(),
        Func::Ln => {
            if z.norm() < POLE_FLOOR {
                return Err(pole("ln", x));
            }
            z.ln()
        }
        Func::Sin => z.sin(),
        Func::Cos => z.cos(),
        Func::Sinh => z.sinh(),
        Func::Cosh => z.cosh(),
        Func::Tanh => z.tanh(),
        Func::Coth => {
            let s = z.sinh();
            if s.norm() < POLE_FLOOR {
                return Err(pole("coth", x));
            }
            z.cosh() / s
        }
        Func::Sqrt => z.sqrt(),
        Func::Abs => Complex64::new(z.norm(), 0.0),
    })
}

/// Principal-branch power; integer real exponents use repeated products.
fn power(a: Complex64, b: Complex64, x: f64) -> Result<Complex64> {
    if b.im == 0.0 && b.re.fract() == 0.0 && b.re.abs() <= 1024.0 {
        let n = b.re as i32;
        if n < 0 && a.norm() < POLE_FLOOR {
            return Err(pole("power", x));
        }
        return Ok(a.powi(n));
    }
    if a.norm() == 0.0 {
        return if b.re > 0.0 { Ok(Complex64::new(0.0, 0.0)) } else { Err(pole("power", x)) };
    }
    Ok((b * a.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, x: f64, b: &[(&str, Complex64)]) -> Result<Complex64> {
        let bindings: Bindings = b.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        evaluate(&parse(src)?, x, &bindings)
    }

    #[test]
    fn i_squared() {
        assert_eq!(ev("i*i", 3.0, &[]).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn shifted_inverse_square() {
        let v = ev("1/(x+i*eps)^2", 0.0, &[("eps", Complex64::new(0.5, 0.0))]).unwrap();
        assert!((v - Complex64::new(-4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coth_pole() {
        assert!(matches!(ev("coth(x)", 0.0, &[]), Err(Error::EvaluationPole { .. })));
        assert!(matches!(ev("1/x", 0.0, &[]), Err(Error::EvaluationPole { .. })));
        assert!(matches!(ev("ln(x)", 0.0, &[]), Err(Error::EvaluationPole { .. })));
    }

    #[test]
    fn unbound() {
        assert_eq!(ev("a*x", 1.0, &[]), Err(Error::UnboundParameter("a".into())));
    }

    #[test]
    fn precedence_of_power_over_negation() {
        assert_eq!(ev("-2^2", 0.0, &[]).unwrap(), Complex64::new(-4.0, 0.0));
        assert_eq!(ev("2^3^2", 0.0, &[]).unwrap(), Complex64::new(512.0, 0.0));
        assert_eq!(ev("2^-1", 0.0, &[]).unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(ev("8/4/2", 0.0, &[]).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(ev("1-2-3", 0.0, &[]).unwrap(), Complex64::new(-4.0, 0.0));
    }

    #[test]
    fn principal_branch_power() {
        let v = ev("(-1)^0.5", 0.0, &[]).unwrap();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn display_round_trip() {
        for src in [
            "-(l^2+n*(n+1))/(2*m*cosh(x)^2)",
            "tanh(x+i*0.1)",
            "2^3^2",
            "(2^3)^2",
            "-x^2",
            "(-x)^2",
            "a-(b-c)",
            "a/(b*c)",
            "--x",
            "x^-y",
        ] {
            let ast = parse(src).unwrap();
            let again = parse(&ast.to_string()).unwrap();
            assert_eq!(ast, again, "{src} -> {ast}");
        }
    }

    #[test]
    fn bind_substitutes() {
        let ast = parse("a*x+b").unwrap();
        let mut b = Bindings::new();
        b.insert("a".into(), Complex64::new(2.0, 0.0));
        b.insert("b".into(), Complex64::new(0.0, 1.0));
        let bound = ast.bind(&b).unwrap();
        assert!(bound.parameters().is_empty());
        assert_eq!(bound.eval(3.0, &Bindings::new()).unwrap(), Complex64::new(6.0, 1.0));
    }
}
