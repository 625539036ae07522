//! An LTL model checker for models whose control flow is explored explicitly
//! while the values of designated input variables are tracked as sets.

pub mod model;
pub mod multistate;
pub mod ltl;
pub mod explore;
pub mod cycledetect;
pub mod counterexample;
pub mod cli;
