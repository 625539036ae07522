use indexmap::{IndexMap, IndexSet};

use crate::model::{eval_bool, eval_int, EvalError, SliceContext, VarRef};
use crate::multistate::{initial_dataset, ControlContext, ControlPart, DataError, DataSet, MultiState};

use super::{
    step_parts, system_steps, Edge, ExploreError, Product, Step, SystemStep, TransitionSystem,
};

/// One unreduced product step from a concrete state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteMove {
    pub step: Step,
    pub control: ControlPart,
    pub inputs: Vec<u16>,
}

struct SystemMove {
    step: SystemStep,
    locations: Vec<u16>,
    explicit: Vec<u16>,
    inputs: Vec<u16>,
}

impl Product {
    fn concrete_error(
        &self,
        c: &ControlPart,
        step: SystemStep,
        member: &[u16],
        error: EvalError,
    ) -> ExploreError {
        self.eval_error(
            c,
            step,
            DataError {
                error,
                evaluation: member.to_vec(),
            },
        )
    }

    fn system_moves(&self, c: &ControlPart, member: &[u16]) -> Result<Vec<SystemMove>, ExploreError> {
        let mut out = Vec::new();
        for step in system_steps(&self.model, &c.locations) {
            let parts = step_parts(step);
            let pre = SliceContext {
                locations: &c.locations,
                explicit: &c.explicit,
                inputs: member,
            };
            let mut enabled = true;
            for &(p, t) in &parts {
                let guard = &self.model.processes[p].transitions[t].guard;
                let ok = eval_bool(guard, &pre)
                    .map_err(|e| self.concrete_error(c, step, member, e))?;
                if !ok {
                    enabled = false;
                    break;
                }
            }
            if !enabled {
                continue;
            }
            let mut explicit = c.explicit.clone();
            let mut inputs = member.to_vec();
            for &(p, t) in &parts {
                for a in &self.model.processes[p].transitions[t].effects {
                    let ctx = SliceContext {
                        locations: &c.locations,
                        explicit: &explicit,
                        inputs: &inputs,
                    };
                    let v = eval_int(&a.value, &ctx)
                        .map_err(|e| self.concrete_error(c, step, member, e))?;
                    let w = self.model.var_width(a.target);
                    match a.target {
                        VarRef::Explicit(s) => explicit[s] = w.wrap(v),
                        VarRef::Input(i) => inputs[i] = w.wrap(v),
                    }
                }
            }
            let mut locations = c.locations.clone();
            for &(p, t) in &parts {
                locations[p] = self.model.processes[p].transitions[t].to as u16;
            }
            out.push(SystemMove {
                step,
                locations,
                explicit,
                inputs,
            });
        }
        if out.is_empty() {
            if !self.options.self_loop_deadlocks {
                return Err(ExploreError::Deadlock {
                    state: self.describe_control(c),
                    evaluation: member.to_vec(),
                });
            }
            out.push(SystemMove {
                step: SystemStep::Stutter,
                locations: c.locations.clone(),
                explicit: c.explicit.clone(),
                inputs: member.to_vec(),
            });
        }
        Ok(out)
    }

    /// All unreduced product steps from `(c, member)`, evaluated directly on
    /// the single evaluation.
    pub fn concrete_moves(
        &self,
        c: &ControlPart,
        member: &[u16],
    ) -> Result<Vec<ConcreteMove>, ExploreError> {
        let mut out = Vec::new();
        for m in self.system_moves(c, member)? {
            let ctx = ControlContext {
                locations: &m.locations,
                explicit: &m.explicit,
            };
            let letter = self
                .letter(ctx, &m.inputs)
                .map_err(|e| self.eval_error(c, m.step, e))?;
            for t in self.buchi.outgoing(c.buchi) {
                let bt = &self.buchi.transitions[t];
                if bt.label.matches(letter) {
                    out.push(ConcreteMove {
                        step: Step {
                            system: m.step,
                            buchi: t,
                        },
                        control: ControlPart {
                            locations: m.locations.clone(),
                            explicit: m.explicit.clone(),
                            buchi: bt.dst,
                        },
                        inputs: m.inputs.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Initial product states of one evaluation: the automaton's initial
    /// transitions read the initial system state.
    pub fn concrete_initial(&self, member: &[u16]) -> Result<Vec<(ControlPart, usize)>, ExploreError> {
        let c = self.initial_control();
        let ctx = ControlContext {
            locations: &c.locations,
            explicit: &c.explicit,
        };
        let letter = self.letter(ctx, member).map_err(|source| ExploreError::Eval {
            state: self.describe_control(&c),
            step: "initial property step".into(),
            source,
        })?;
        Ok(self
            .buchi
            .outgoing(c.buchi)
            .filter(|&t| self.buchi.transitions[t].label.matches(letter))
            .map(|t| {
                (
                    ControlPart {
                        buchi: self.buchi.transitions[t].dst,
                        ..c.clone()
                    },
                    t,
                )
            })
            .collect())
    }
}

/// The unreduced product: every state carries exactly one evaluation.
#[derive(Clone, Copy)]
pub struct ExpSystem<'a> {
    pub product: &'a Product,
}

impl TransitionSystem for ExpSystem<'_> {
    type State = MultiState;
    type Edge = Edge;
    type Error = ExploreError;

    fn initial_states(&self) -> Result<Vec<MultiState>, ExploreError> {
        let p = self.product;
        let all = initial_dataset(&p.model.inputs, p.options.eval_cap)?;
        let mut out = IndexSet::new();
        for member in all.iter() {
            for (control, _) in p.concrete_initial(member)? {
                out.insert(MultiState::new(control, DataSet::singleton(member)));
            }
        }
        Ok(out.into_iter().collect())
    }

    fn successors(&self, s: &MultiState) -> Result<Vec<(MultiState, Edge)>, ExploreError> {
        assert!(s.data.is_singleton(), "exp states carry one evaluation");
        let member = s.data.first().expect("singleton");
        let mut groups: IndexMap<(ControlPart, Vec<u16>), Vec<Step>> = IndexMap::new();
        for m in self.product.concrete_moves(&s.control, member)? {
            groups.entry((m.control, m.inputs)).or_default().push(m.step);
        }
        Ok(groups
            .into_iter()
            .map(|((control, inputs), mut steps)| {
                steps.sort();
                steps.dedup();
                (
                    MultiState::new(control, DataSet::singleton(&inputs)),
                    Edge { steps },
                )
            })
            .collect())
    }

    fn is_accepting(&self, s: &MultiState) -> bool {
        self.product.is_accepting(s)
    }

    fn encode(&self, s: &MultiState) -> Vec<u8> {
        s.encode()
    }

    fn decode(&self, bytes: &[u8]) -> MultiState {
        MultiState::decode(bytes, self.product.layout()).expect("store holds valid encodings")
    }
}
