use std::fmt;
use std::sync::Arc;

use super::table::Table;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tan,
    Tanh,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tan,
        Func::Tanh,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tan => "tan",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64, t: f64) -> Result<f64> {
        let y = match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tan => x.tan(),
            Func::Tanh => x.tanh(),
            Func::Exp => x.exp(),
            Func::Ln => {
                if x <= 0.0 {
                    return Err(Error::domain(t, format!("ln of non-positive value {x}")));
                }
                x.ln()
            }
            Func::Sqrt => {
                if x < 0.0 {
                    return Err(Error::domain(t, format!("sqrt of negative value {x}")));
                }
                x.sqrt()
            }
        };
        Ok(y)
    }
}

/// Scalar expression in the single variable `t`.
///
/// `Tab` leaves are tabulated functions of `t` (with a derivative order);
/// the parser never produces them.
#[derive(Clone, Debug)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
    Tab(Arc<Table>, usize),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use Expr::*;
        match (self, other) {
            (Num(a), Num(b)) => a == b,
            (Var, Var) => true,
            (Neg(a), Neg(b)) => a == b,
            (Add(a, b), Add(c, d))
            | (Sub(a, b), Sub(c, d))
            | (Mul(a, b), Mul(c, d))
            | (Div(a, b), Div(c, d)) => a == c && b == d,
            (Pow(a, n), Pow(b, m)) => n == m && a == b,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            (Tab(a, n), Tab(b, m)) => n == m && Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

// Smart constructors: constant folding plus 0/1 identities only.

pub fn num(x: f64) -> Expr {
    Expr::Num(x)
}

pub fn var() -> Expr {
    Expr::Var
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => Expr::Num(-x),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
        (Expr::Num(x), b) if x == 0.0 => b,
        (a, Expr::Num(y)) if y == 0.0 => a,
        (a, Expr::Neg(b)) => sub(a, *b),
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
        (Expr::Num(x), b) if x == 0.0 => neg(b),
        (a, Expr::Num(y)) if y == 0.0 => a,
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
        (Expr::Num(x), _) | (_, Expr::Num(x)) if x == 0.0 => Expr::Num(0.0),
        (Expr::Num(x), b) if x == 1.0 => b,
        (a, Expr::Num(y)) if y == 1.0 => a,
        (Expr::Num(x), b) if x == -1.0 => neg(b),
        (a, Expr::Num(y)) if y == -1.0 => neg(a),
        // keep constants in front and merge adjacent ones
        (a, Expr::Num(y)) => mul(Expr::Num(y), a),
        (Expr::Num(x), Expr::Mul(l, r)) => match *l {
            Expr::Num(y) => mul(Expr::Num(x * y), *r),
            l => Expr::Mul(Box::new(Expr::Num(x)), Box::new(Expr::Mul(Box::new(l), r))),
        },
        (Expr::Neg(a), Expr::Neg(b)) => mul(*a, *b),
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) if y != 0.0 => Expr::Num(x / y),
        (Expr::Num(x), _) if x == 0.0 => Expr::Num(0.0),
        (a, Expr::Num(y)) if y == 1.0 => a,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub fn pow(a: Expr, n: i32) -> Expr {
    match (a, n) {
        (_, 0) => Expr::Num(1.0),
        (a, 1) => a,
        (Expr::Num(x), n) => Expr::Num(x.powi(n)),
        (a, n) => Expr::Pow(Box::new(a), n),
    }
}

pub fn call(f: Func, a: Expr) -> Expr {
    match a {
        Expr::Num(x) => match f.apply(x, f64::NAN) {
            Ok(y) if y.is_finite() => Expr::Num(y),
            _ => Expr::Call(f, Box::new(Expr::Num(x))),
        },
        a => Expr::Call(f, Box::new(a)),
    }
}

impl Expr {
    pub fn eval(&self, t: f64) -> Result<f64> {
        let y = match self {
            Expr::Num(x) => *x,
            Expr::Var => t,
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let d = b.eval(t)?;
                if d == 0.0 {
                    return Err(Error::domain(t, "division by zero"));
                }
                a.eval(t)? / d
            }
            Expr::Pow(a, n) => {
                let x = a.eval(t)?;
                if x == 0.0 && *n < 0 {
                    return Err(Error::domain(t, "negative power of zero"));
                }
                x.powi(*n)
            }
            Expr::Call(f, a) => f.apply(a.eval(t)?, t)?,
            Expr::Tab(table, order) => table.eval(*order, t)?,
        };
        if !y.is_finite() {
            return Err(Error::domain(t, "non-finite value"));
        }
        Ok(y)
    }

    /// Symbolic derivative with respect to `t`.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Num(_) => num(0.0),
            Expr::Var => num(1.0),
            Expr::Neg(a) => neg(a.differentiate()),
            Expr::Add(a, b) => add(a.differentiate(), b.differentiate()),
            Expr::Sub(a, b) => sub(a.differentiate(), b.differentiate()),
            Expr::Mul(a, b) => add(
                mul(a.differentiate(), (**b).clone()),
                mul((**a).clone(), b.differentiate()),
            ),
            Expr::Div(a, b) => {
                let da = a.differentiate();
                let db = b.differentiate();
                if matches!(db, Expr::Num(z) if z == 0.0) {
                    return div(da, (**b).clone());
                }
                div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), 2),
                )
            }
            Expr::Pow(a, n) => {
                let outer = mul(num(*n as f64), pow((**a).clone(), n - 1));
                mul(outer, a.differentiate())
            }
            Expr::Call(f, a) => {
                let inner = (**a).clone();
                let da = a.differentiate();
                let outer = match f {
                    Func::Sin => call(Func::Cos, inner),
                    Func::Cos => neg(call(Func::Sin, inner)),
                    Func::Sinh => call(Func::Cosh, inner),
                    Func::Cosh => call(Func::Sinh, inner),
                    Func::Tan => div(num(1.0), pow(call(Func::Cos, inner), 2)),
                    Func::Tanh => div(num(1.0), pow(call(Func::Cosh, inner), 2)),
                    Func::Exp => call(Func::Exp, inner),
                    Func::Ln => div(num(1.0), inner),
                    Func::Sqrt => div(num(1.0), mul(num(2.0), call(Func::Sqrt, inner))),
                };
                match (outer, da) {
                    // d/dt f(t) keeps the chain-rule factor out of the tree
                    (o, Expr::Num(k)) => mul(num(k), o),
                    (Expr::Div(n, d), da) if matches!(*n, Expr::Num(x) if x == 1.0) => div(da, *d),
                    (o, da) => mul(da, o),
                }
            }
            Expr::Tab(table, order) => Expr::Tab(table.clone(), order + 1),
        }
    }

    pub fn is_tabulated(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var => false,
            Expr::Tab(..) => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.is_tabulated(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_tabulated() || b.is_tabulated()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Neg(..) => 4,
            Expr::Num(x) if *x < 0.0 => 4,
            _ => 5,
        }
    }
}

fn fmt_num(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x == x.trunc() && x.abs() < 1e15 {
        write!(f, "{}", x as i64)
    } else {
        write!(f, "{x:?}")
    }
}

fn fmt_wrapped(e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) if *x < 0.0 => {
                f.write_str("-")?;
                fmt_num(-x, f)
            }
            Expr::Num(x) => fmt_num(*x, f),
            Expr::Var => f.write_str("t"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                // unary minus binds tighter than `^` in the grammar
                fmt_wrapped(a, 5, f)
            }
            Expr::Add(a, b) => {
                fmt_wrapped(a, 1, f)?;
                f.write_str(" + ")?;
                fmt_wrapped(b, 2, f)
            }
            Expr::Sub(a, b) => {
                fmt_wrapped(a, 1, f)?;
                f.write_str(" - ")?;
                fmt_wrapped(b, 2, f)
            }
            Expr::Mul(a, b) => {
                fmt_wrapped(a, 2, f)?;
                f.write_str("*")?;
                fmt_wrapped(b, 3, f)
            }
            Expr::Div(a, b) => {
                fmt_wrapped(a, 2, f)?;
                f.write_str("/")?;
                fmt_wrapped(b, 3, f)
            }
            Expr::Pow(a, n) => {
                fmt_wrapped(a, 4, f)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Tab(_, order) => write!(f, "<table:d{order}>"),
        }
    }
}
