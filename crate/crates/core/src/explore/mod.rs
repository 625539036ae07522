//! The product of a model with a property automaton, seen as an implicit
//! graph: initial states, successors, acceptance.
//!
//! Two views share the same semantics. [`SymSystem`] groups the concrete
//! successors of all members of a multi-state by control part; [`ExpSystem`]
//! works on single evaluations. A product step is one system step (a local
//! transition or a rendezvous) followed by one transition of the property
//! automaton, which reads the state reached by the system step.

mod exp;
mod steps;
mod sym;

use std::fmt::Write;

pub use exp::{ConcreteMove, ExpSystem};
pub use steps::{
    describe_system_step, step_parts, system_steps, Edge, Step, SystemStep,
};
pub use sym::SymSystem;

use crate::ltl::{BuchiAutomaton, Property};
use crate::model::{Model, VarRef};
use crate::multistate::{
    eval_member, CapacityError, ControlContext, ControlPart, DataError, Layout, MultiState,
    DEFAULT_EVAL_CAP,
};

/// Successor states paired with the edge that produced each.
pub type Successors<S, E> = Vec<(S, E)>;

/// The implicit-graph interface consumed by the search algorithms.
pub trait TransitionSystem {
    type State: Clone;
    type Edge: Clone;
    type Error;

    fn initial_states(&self) -> Result<Vec<Self::State>, Self::Error>;
    /// Deterministic, duplicate-free list of successors.
    fn successors(&self, s: &Self::State) -> Result<Successors<Self::State, Self::Edge>, Self::Error>;
    fn is_accepting(&self, s: &Self::State) -> bool;
    /// Injective byte encoding used as the visited-store key.
    fn encode(&self, s: &Self::State) -> Vec<u8>;
    fn decode(&self, bytes: &[u8]) -> Self::State;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    /// Largest initial data set that may be built.
    pub eval_cap: u64,
    /// Let states without enabled system steps stutter instead of failing.
    pub self_loop_deadlocks: bool,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            eval_cap: DEFAULT_EVAL_CAP,
            self_loop_deadlocks: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExploreError {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("evaluation error in state [{state}] during {step}: {source}")]
    Eval {
        state: String,
        step: String,
        source: DataError,
    },
    #[error("deadlock in state [{state}] for inputs {evaluation:?}")]
    Deadlock { state: String, evaluation: Vec<u16> },
}

/// A model bound to a property: the product both views explore.
#[derive(Debug, Clone)]
pub struct Product {
    pub model: Model,
    pub property: Property,
    /// Automaton of the negated property.
    pub buchi: BuchiAutomaton,
    pub options: ExploreOptions,
}

impl Product {
    pub fn new(model: Model, property: Property, options: ExploreOptions) -> Product {
        let buchi = property.violation_automaton();
        Product::with_automaton(model, property, buchi, options)
    }

    /// Uses a given automaton instead of translating the property; its AP
    /// bits refer to `property.ap_exprs`.
    pub fn with_automaton(
        model: Model,
        property: Property,
        buchi: BuchiAutomaton,
        options: ExploreOptions,
    ) -> Product {
        Product {
            model,
            property,
            buchi,
            options,
        }
    }

    pub fn sym(&self) -> SymSystem<'_> {
        SymSystem { product: self }
    }

    pub fn exp(&self) -> ExpSystem<'_> {
        ExpSystem { product: self }
    }

    pub fn layout(&self) -> Layout {
        Layout {
            processes: self.model.processes.len(),
            explicit: self.model.explicit_slots.len(),
            inputs: self.model.inputs.len(),
        }
    }

    pub fn initial_control(&self) -> ControlPart {
        ControlPart {
            locations: self.model.initial_locations(),
            explicit: self.model.initial_explicit(),
            buchi: self.buchi.initial,
        }
    }

    /// AP valuation of one member: bit `i` is AP `i`.
    pub fn letter(&self, ctx: ControlContext<'_>, member: &[u16]) -> Result<u64, DataError> {
        let mut letter = 0u64;
        for (i, e) in self.property.ap_exprs.iter().enumerate() {
            if eval_member(e, ctx, member)?.as_bool() {
                letter |= 1 << i;
            }
        }
        Ok(letter)
    }

    /// `s.control.buchi` is accepting; equal to "some member" and "every
    /// member" accepting because all members share the control part.
    pub fn is_accepting(&self, s: &MultiState) -> bool {
        self.buchi.is_accepting(s.control.buchi)
    }

    /// Renders a control part as `P@loc ... x=1 ... buchi=2`.
    pub fn describe_control(&self, c: &ControlPart) -> String {
        let mut out = String::new();
        for (p, pd) in self.model.processes.iter().enumerate() {
            let _ = write!(out, "{}@{} ", pd.name, pd.locations[usize::from(c.locations[p])]);
        }
        for (slot, v) in c.explicit.iter().enumerate() {
            let _ = write!(out, "{}={v} ", self.model.var_name(VarRef::Explicit(slot)));
        }
        let _ = write!(out, "buchi={}", c.buchi);
        out
    }

    pub fn describe_step(&self, step: &Step) -> String {
        let t = &self.buchi.transitions[step.buchi];
        format!(
            "{} ; buchi {} -> {} [{}]",
            describe_system_step(&self.model, step.system),
            t.src,
            t.dst,
            t.label.render(&self.property.ap_names)
        )
    }

    fn eval_error(&self, c: &ControlPart, step: SystemStep, source: DataError) -> ExploreError {
        ExploreError::Eval {
            state: self.describe_control(c),
            step: describe_system_step(&self.model, step),
            source,
        }
    }
}

/// The refinement relation between a concrete state and a multi-state:
/// same control part and the concrete evaluation is a member.
pub fn refines(product: &Product, t: &MultiState, s: &MultiState) -> bool {
    debug_assert!(t.data.is_singleton());
    t.control == s.control
        && t.data.first().is_some_and(|m| s.data.contains(m))
        && product.is_accepting(t) == product.is_accepting(s)
}
