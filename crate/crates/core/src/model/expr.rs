//! Expressions and their evaluation.
//!
//! Arithmetic is carried out in `i64` with overflow checks. Values are only
//! truncated to a variable's declared width when they are stored by an
//! assignment, never while an expression is being evaluated: `a * a <= 16`
//! with `a = 16` compares 256 against 16 and yields `false`.

use std::fmt;

use super::ast::VarRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(VarRef),
    /// `Proc@loc`: true iff the process is at the location.
    At { process: usize, location: usize },
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type {
    Int,
    Bool,
}

impl Expr {
    pub fn unary(op: UnOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn ty(&self) -> Type {
        match self {
            Expr::Int(_) | Expr::Var(_) => Type::Int,
            Expr::Bool(_) | Expr::At { .. } => Type::Bool,
            Expr::Unary(UnOp::Neg, _) => Type::Int,
            Expr::Unary(UnOp::Not, _) => Type::Bool,
            Expr::Binary(op, _, _) => match op {
                BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod => Type::Int,
                _ => Type::Bool,
            },
        }
    }

    /// True if the expression reads any input variable.
    pub fn mentions_input(&self) -> bool {
        match self {
            Expr::Var(VarRef::Input(_)) => true,
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) | Expr::At { .. } => false,
            Expr::Unary(_, e) => e.mentions_input(),
            Expr::Binary(_, l, r) => l.mentions_input() || r.mentions_input(),
        }
    }

    pub fn mentions_location(&self) -> bool {
        match self {
            Expr::At { .. } => true,
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => false,
            Expr::Unary(_, e) => e.mentions_location(),
            Expr::Binary(_, l, r) => l.mentions_location() || r.mentions_location(),
        }
    }
}

/// Raw rendering with slot numbers; used in error messages that have no model
/// at hand. `model::print` renders with source names.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Var(VarRef::Explicit(s)) => write!(f, "$x{s}"),
            Expr::Var(VarRef::Input(i)) => write!(f, "$in{i}"),
            Expr::At { process, location } => write!(f, "$p{process}@{location}"),
            Expr::Unary(UnOp::Neg, e) => write!(f, "-({e})"),
            Expr::Unary(UnOp::Not, e) => write!(f, "!({e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl Value {
    pub fn as_int(self) -> i64 {
        match self {
            Value::Int(v) => v,
            Value::Bool(b) => i64::from(b),
        }
    }

    pub fn as_bool(self) -> bool {
        match self {
            Value::Bool(b) => b,
            Value::Int(v) => v != 0,
        }
    }
}

/// Everything an expression may read.
pub trait Context {
    fn explicit(&self, slot: usize) -> i64;
    fn input(&self, index: usize) -> i64;
    fn location(&self, process: usize) -> usize;
}

/// A context backed by plain slices: locations, explicit values and one
/// evaluation of the input variables.
#[derive(Debug, Clone, Copy)]
pub struct SliceContext<'a> {
    pub locations: &'a [u16],
    pub explicit: &'a [u16],
    pub inputs: &'a [u16],
}

impl Context for SliceContext<'_> {
    fn explicit(&self, slot: usize) -> i64 {
        i64::from(self.explicit[slot])
    }

    fn input(&self, index: usize) -> i64 {
        i64::from(self.inputs[index])
    }

    fn location(&self, process: usize) -> usize {
        usize::from(self.locations[process])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}: {expr}", match .kind { EvalErrorKind::DivisionByZero => "division by zero", EvalErrorKind::Overflow => "arithmetic overflow" })]
pub struct EvalError {
    pub kind: EvalErrorKind,
    /// The offending sub-expression.
    pub expr: Expr,
}

pub fn eval(e: &Expr, ctx: &impl Context) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Int(v) => Value::Int(*v),
        Expr::Bool(b) => Value::Bool(*b),
        Expr::Var(VarRef::Explicit(slot)) => Value::Int(ctx.explicit(*slot)),
        Expr::Var(VarRef::Input(idx)) => Value::Int(ctx.input(*idx)),
        Expr::At { process, location } => Value::Bool(ctx.location(*process) == *location),
        Expr::Unary(UnOp::Neg, inner) => {
            let v = eval(inner, ctx)?.as_int();
            Value::Int(v.checked_neg().ok_or_else(|| overflow(e))?)
        }
        Expr::Unary(UnOp::Not, inner) => Value::Bool(!eval(inner, ctx)?.as_bool()),
        Expr::Binary(BinOp::And, l, r) => {
            Value::Bool(eval(l, ctx)?.as_bool() && eval(r, ctx)?.as_bool())
        }
        Expr::Binary(BinOp::Or, l, r) => {
            Value::Bool(eval(l, ctx)?.as_bool() || eval(r, ctx)?.as_bool())
        }
        Expr::Binary(op, l, r) => {
            let lv = eval(l, ctx)?;
            let rv = eval(r, ctx)?;
            match op {
                BinOp::Eq => Value::Bool(lv == rv),
                BinOp::Ne => Value::Bool(lv != rv),
                _ => {
                    let (a, b) = (lv.as_int(), rv.as_int());
                    match op {
                        BinOp::Add => Value::Int(a.checked_add(b).ok_or_else(|| overflow(e))?),
                        BinOp::Sub => Value::Int(a.checked_sub(b).ok_or_else(|| overflow(e))?),
                        BinOp::Mul => Value::Int(a.checked_mul(b).ok_or_else(|| overflow(e))?),
                        BinOp::Div | BinOp::Mod => {
                            if b == 0 {
                                return Err(EvalError {
                                    kind: EvalErrorKind::DivisionByZero,
                                    expr: e.clone(),
                                });
                            }
                            let v = if *op == BinOp::Div {
                                a.checked_div(b)
                            } else {
                                a.checked_rem(b)
                            };
                            Value::Int(v.ok_or_else(|| overflow(e))?)
                        }
                        BinOp::Lt => Value::Bool(a < b),
                        BinOp::Le => Value::Bool(a <= b),
                        BinOp::Gt => Value::Bool(a > b),
                        BinOp::Ge => Value::Bool(a >= b),
                        BinOp::Eq | BinOp::Ne | BinOp::And | BinOp::Or => unreachable!(),
                    }
                }
            }
        }
    })
}

fn overflow(e: &Expr) -> EvalError {
    EvalError {
        kind: EvalErrorKind::Overflow,
        expr: e.clone(),
    }
}

pub fn eval_bool(e: &Expr, ctx: &impl Context) -> Result<bool, EvalError> {
    eval(e, ctx).map(Value::as_bool)
}

pub fn eval_int(e: &Expr, ctx: &impl Context) -> Result<i64, EvalError> {
    eval(e, ctx).map(Value::as_int)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(i: usize) -> Expr {
        Expr::Var(VarRef::Input(i))
    }

    fn ctx(inputs: &[u16]) -> SliceContext<'_> {
        SliceContext {
            locations: &[],
            explicit: &[],
            inputs,
        }
    }

    #[test]
    fn square_is_not_wrapped_during_evaluation() {
        // a*a <= 16 with an 8-bit a = 16: 256 <= 16 is false.
        let e = Expr::binary(
            BinOp::Le,
            Expr::binary(BinOp::Mul, input(0), input(0)),
            Expr::Int(16),
        );
        assert!(!eval_bool(&e, &ctx(&[16])).unwrap());
        assert!(eval_bool(&e, &ctx(&[4])).unwrap());
    }

    #[test]
    fn simple_comparison() {
        let e = Expr::binary(BinOp::Gt, input(0), Expr::Int(10));
        assert!(eval_bool(&e, &ctx(&[11])).unwrap());
        assert!(!eval_bool(&e, &ctx(&[10])).unwrap());
    }

    #[test]
    fn modulo_by_zero_reports_expression() {
        let e = Expr::binary(BinOp::Mod, input(0), Expr::Int(0));
        let err = eval(&e, &ctx(&[3])).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::DivisionByZero);
        assert_eq!(err.expr, e);
    }

    #[test]
    fn c_style_division() {
        let e = Expr::binary(BinOp::Div, Expr::unary(UnOp::Neg, Expr::Int(7)), Expr::Int(2));
        assert_eq!(eval_int(&e, &ctx(&[])).unwrap(), -3);
        let e = Expr::binary(BinOp::Mod, Expr::unary(UnOp::Neg, Expr::Int(7)), Expr::Int(2));
        assert_eq!(eval_int(&e, &ctx(&[])).unwrap(), -1);
    }

    #[test]
    fn overflow_is_an_error() {
        let big = Expr::Int(i64::MAX);
        let e = Expr::binary(BinOp::Add, big, Expr::Int(1));
        assert_eq!(eval(&e, &ctx(&[])).unwrap_err().kind, EvalErrorKind::Overflow);
    }

    #[test]
    fn wrap_is_twos_complement() {
        use crate::model::Width;
        assert_eq!(Width::Byte.wrap(256), 0);
        assert_eq!(Width::Byte.wrap(-1), 255);
        assert_eq!(Width::Int.wrap(65536 + 5), 5);
        assert_eq!(Width::Int.wrap(-10), 65526);
    }
}
