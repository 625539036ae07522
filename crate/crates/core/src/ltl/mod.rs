//! Linear temporal logic: formulas, translation to Büchi automata, and the
//! lasso oracles used to test that translation.

mod buchi;
mod formula;
mod lasso;

pub use buchi::{ltl_to_buchi, BuchiAutomaton, BuchiTransition, Label};
pub use formula::{negate, parse_ltl, Ltl, LtlError, LtlErrorKind};
pub use lasso::{ba_accepts_lasso, ltl_eval_lasso, LassoWord};

use crate::model::{ApDecl, Expr};

/// Largest number of atomic propositions a property may bind.
pub const MAX_APS: usize = 64;

/// An LTL formula together with the expressions its APs stand for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub ap_names: Vec<String>,
    pub ap_exprs: Vec<Expr>,
    pub formula: Ltl,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PropertyError {
    #[error(transparent)]
    Ltl(#[from] LtlError),
    #[error("{0} atomic propositions bound, at most {MAX_APS} are supported")]
    TooManyAps(usize),
    #[error("atomic proposition `{0}` bound twice")]
    DuplicateAp(String),
}

impl Property {
    pub fn bind(text: &str, aps: &[ApDecl]) -> Result<Property, PropertyError> {
        if aps.len() > MAX_APS {
            return Err(PropertyError::TooManyAps(aps.len()));
        }
        for (i, a) in aps.iter().enumerate() {
            if aps[..i].iter().any(|b| b.name == a.name) {
                return Err(PropertyError::DuplicateAp(a.name.clone()));
            }
        }
        let names: Vec<&str> = aps.iter().map(|a| a.name.as_str()).collect();
        let formula = parse_ltl(text, &names)?;
        Ok(Property {
            ap_names: aps.iter().map(|a| a.name.clone()).collect(),
            ap_exprs: aps.iter().map(|a| a.expr.clone()).collect(),
            formula,
        })
    }

    /// Automaton for the negated formula: its accepting runs are violations.
    pub fn violation_automaton(&self) -> BuchiAutomaton {
        ltl_to_buchi(&negate(&self.formula))
    }
}
