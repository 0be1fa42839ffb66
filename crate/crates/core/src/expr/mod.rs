//! Univariate real expressions: the only way `f`, `g` and `h` enter the system.
//!
//! Expressions are parsed from text (see [`parse`]), evaluated in IEEE double precision with
//! domain violations reported as errors, printed back in a form that re-parses to the same
//! tree, and differentiated symbolically.

mod diff;
mod parse;
mod property;

use std::cell::Cell;
use std::fmt;

use thiserror::Error;

pub use diff::DiffError;
pub use parse::{parse, ParseError};
pub use property::{check_property, check_property_fn, Property, PropertyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Abs,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Abs => "abs",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "abs" => UnaryOp::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
            BinaryOp::Pow => 3,
        }
    }
}

/// Abstract syntax tree of a univariate real function of `x`.
///
/// Constants stored in a tree are finite and non-negative; a negative value is written as
/// `Neg(Const)`, which is exactly what the parser produces for `-2`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum EvalError {
    #[error("log of non-positive value {value} (at x = {x})")]
    LogDomain { x: f64, value: f64 },
    #[error("sqrt of negative value {value} (at x = {x})")]
    SqrtDomain { x: f64, value: f64 },
    #[error("division by zero (at x = {x})")]
    DivisionByZero { x: f64 },
    #[error("power {base}^{exponent} is undefined for a negative base and non-integer exponent (at x = {x})")]
    PowDomain { x: f64, base: f64, exponent: f64 },
    #[error("non-finite result (at x = {x})")]
    NonFinite { x: f64 },
}

thread_local! {
    static EVALUATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Number of top-level expression evaluations performed on the current thread.
pub fn evaluation_count() -> u64 {
    EVALUATIONS.with(Cell::get)
}

impl Expr {
    /// Constant node; negative values become `Neg(Const(|c|))`.
    pub fn num(c: f64) -> Expr {
        if c < 0.0 {
            Expr::Unary(UnaryOp::Neg, Box::new(Expr::Const(-c)))
        } else {
            // folds -0.0 to 0.0
            Expr::Const(c + 0.0)
        }
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    /// The numeric value if the node is a (possibly negated) constant.
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            Expr::Unary(UnaryOp::Neg, inner) => match **inner {
                Expr::Const(c) => Some(-c),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Expr::Var)
    }

    pub fn contains_abs(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => false,
            Expr::Unary(op, e) => *op == UnaryOp::Abs || e.contains_abs(),
            Expr::Binary(_, l, r) => l.contains_abs() || r.contains_abs(),
        }
    }

    /// Evaluates at `x`; NaN and infinities are reported as errors, never returned.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        EVALUATIONS.with(|c| c.set(c.get() + 1));
        let v = self.eval_at(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }

    fn eval_at(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Unary(op, e) => {
                let u = e.eval_at(x)?;
                match op {
                    UnaryOp::Neg => -u,
                    UnaryOp::Exp => u.exp(),
                    UnaryOp::Log => {
                        if u <= 0.0 {
                            return Err(EvalError::LogDomain { x, value: u });
                        }
                        u.ln()
                    }
                    UnaryOp::Sqrt => {
                        if u < 0.0 {
                            return Err(EvalError::SqrtDomain { x, value: u });
                        }
                        u.sqrt()
                    }
                    UnaryOp::Sin => u.sin(),
                    UnaryOp::Cos => u.cos(),
                    UnaryOp::Abs => u.abs(),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval_at(x)?;
                let b = r.eval_at(x)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero { x });
                        }
                        a / b
                    }
                    BinaryOp::Pow => power(a, b, x)?,
                }
            }
        };
        if v.is_nan() || v.is_infinite() {
            return Err(EvalError::NonFinite { x });
        }
        Ok(v)
    }
}

fn power(base: f64, exponent: f64, x: f64) -> Result<f64, EvalError> {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        if base == 0.0 && exponent < 0.0 {
            return Err(EvalError::DivisionByZero { x });
        }
        return Ok(base.powi(exponent as i32));
    }
    if base > 0.0 || (base == 0.0 && exponent > 0.0) {
        Ok(base.powf(exponent))
    } else if base == 0.0 {
        Err(EvalError::DivisionByZero { x })
    } else {
        Err(EvalError::PowDomain { x, base, exponent })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, e) => {
                if e.is_atom() {
                    write!(f, "-{e}")
                } else {
                    write!(f, "-({e})")
                }
            }
            Expr::Unary(op, e) => write!(f, "{}({e})", op.name()),
            Expr::Binary(op, l, r) => {
                let prec = op.precedence();
                let (left_parens, right_parens) = if *op == BinaryOp::Pow {
                    // right associative; the base must be an atom
                    (!l.is_atom(), r.binary_precedence().is_some_and(|p| p < prec))
                } else {
                    (l.binary_precedence().is_some_and(|p| p < prec), r.binary_precedence().is_some_and(|p| p <= prec))
                };
                write_operand(f, l, left_parens)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, r, right_parens)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl Expr {
    fn is_atom(&self) -> bool {
        !matches!(self, Expr::Binary(..))
    }

    fn binary_precedence(&self) -> Option<u8> {
        match self {
            Expr::Binary(op, _, _) => Some(op.precedence()),
            _ => None,
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
