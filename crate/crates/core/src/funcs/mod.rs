//! Scalar functions of one real variable.
//!
//! An [`Fn1`] is either parsed from text (and then differentiated exactly) or
//! built from a [`Table`] of samples produced by reparametrization. Both kinds
//! share the [`Expr`] tree so that linear-fractional maps and products can be
//! composed on top of either.

pub mod expr;
pub mod parse;
pub mod table;

use std::fmt;
use std::sync::Arc;

pub use expr::{Expr, Func};
pub use parse::parse;
pub use table::Table;

use crate::error::Result;

/// A function together with its exact first derivative.
#[derive(Clone)]
pub struct Fn1 {
    value: Arc<Expr>,
    derivative: Arc<Expr>,
}

impl Fn1 {
    pub fn from_expr(value: Expr) -> Self {
        let derivative = value.differentiate();
        Fn1 { value: Arc::new(value), derivative: Arc::new(derivative) }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text).map(Fn1::from_expr)
    }

    pub fn constant(c: f64) -> Self {
        Fn1::from_expr(Expr::Num(c))
    }

    /// `k·t + c`.
    pub fn linear(k: f64, c: f64) -> Self {
        Fn1::from_expr(expr::add(expr::mul(expr::num(k), expr::var()), expr::num(c)))
    }

    pub fn from_table(table: Arc<Table>) -> Self {
        Fn1::from_expr(Expr::Tab(table, 0))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.value.eval(t)
    }

    pub fn eval_derivative(&self, t: f64) -> Result<f64> {
        self.derivative.eval(t)
    }

    pub fn derivative(&self) -> Fn1 {
        Fn1 {
            value: self.derivative.clone(),
            derivative: Arc::new(self.derivative.differentiate()),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.value
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.derivative
    }

    pub fn is_tabulated(&self) -> bool {
        self.value.is_tabulated()
    }

    /// `(a·self + b) / (c·self + d)`, folded symbolically.
    pub fn linear_fractional(&self, a: f64, b: f64, c: f64, d: f64) -> Fn1 {
        use expr::{add, div, mul, num};
        let g = (*self.value).clone();
        let top = add(mul(num(a), g.clone()), num(b));
        let bottom = add(mul(num(c), g), num(d));
        Fn1::from_expr(div(top, bottom))
    }

    /// `self · other`.
    pub fn times(&self, other: &Fn1) -> Fn1 {
        Fn1::from_expr(expr::mul((*self.value).clone(), (*other.value).clone()))
    }

    pub fn negated(&self) -> Fn1 {
        Fn1::from_expr(expr::neg((*self.value).clone()))
    }
}

impl fmt::Debug for Fn1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fn1({})", self.value)
    }
}

impl fmt::Display for Fn1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
