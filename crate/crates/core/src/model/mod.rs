//! The `.cdve` modelling language: a DVE subset with global `input`
//! variables whose values are only known to lie in a declared range.

mod ast;
mod error;
mod expr;
mod lexer;
mod parser;
mod print;

pub use ast::*;
pub use error::{ModelError, ModelErrorKind};
pub use expr::{
    eval, eval_bool, eval_int, BinOp, Context, EvalError, EvalErrorKind, Expr, SliceContext,
    Type, UnOp, Value,
};
pub use parser::{parse_global_expr, parse_model};
pub use print::{expr_to_string, print_model};
