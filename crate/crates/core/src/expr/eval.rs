use std::fmt;

use thiserror::Error;

use super::{BinOp, Expr, Func};
use crate::field::ScalarField;
use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    LogNonPositive,
    SqrtNegative,
    DivisionByZero,
    NonFinite,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalErrorKind::LogNonPositive => "log of a non-positive number",
            EvalErrorKind::SqrtNegative => "square root of a negative number",
            EvalErrorKind::DivisionByZero => "division by zero",
            EvalErrorKind::NonFinite => "non-finite result",
        })
    }
}

/// The function is undefined (or overflows) at `point`. `node` is the
/// printed form of the sub-expression that failed.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{node}` at {point}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub node: String,
    pub point: Point2,
}

impl EvalError {
    pub fn new(kind: EvalErrorKind, node: impl Into<String>, point: Point2) -> Self {
        Self {
            kind,
            node: node.into(),
            point,
        }
    }
}

impl Expr {
    /// Evaluates in binary64 at `p`.
    pub fn eval(&self, p: Point2) -> Result<f64, EvalError> {
        let fail = |kind| Err(EvalError::new(kind, self.to_string(), p));
        let v = match self {
            Expr::Num(v) => *v,
            Expr::X => p.x(),
            Expr::Y => p.y(),
            Expr::Const(c) => c.value(),
            Expr::Neg(e) => -e.eval(p)?,
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.eval(p)?;
                let r = rhs.eval(p)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div if r == 0.0 => return fail(EvalErrorKind::DivisionByZero),
                    BinOp::Div => l / r,
                    BinOp::Pow => l.powf(r),
                }
            }
            Expr::Call(func, arg) => {
                let a = arg.eval(p)?;
                match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Exp => a.exp(),
                    Func::Log if a <= 0.0 => return fail(EvalErrorKind::LogNonPositive),
                    Func::Log => a.ln(),
                    Func::Sqrt if a < 0.0 => return fail(EvalErrorKind::SqrtNegative),
                    Func::Sqrt => a.sqrt(),
                    Func::Abs => a.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            fail(EvalErrorKind::NonFinite)
        }
    }
}

impl ScalarField for Expr {
    fn value(&self, p: Point2) -> Result<f64, EvalError> {
        self.eval(p)
    }
}
