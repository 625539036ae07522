use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use crate::model::VarRef;
use crate::multistate::{
    apply, eval_member, initial_dataset, partition_by, prune, ControlContext, ControlPart,
    DataError, DataSet, MultiState,
};

use super::{step_parts, system_steps, Edge, ExploreError, Product, Step, SystemStep, TransitionSystem};

/// The set-reduced product: successors of all members of a multi-state are
/// grouped by control part.
#[derive(Clone, Copy)]
pub struct SymSystem<'a> {
    pub product: &'a Product,
}

#[derive(Default)]
struct Groups {
    map: IndexMap<ControlPart, (Vec<DataSet>, BTreeSet<Step>)>,
}

impl Groups {
    fn add(&mut self, control: ControlPart, data: DataSet, step: Option<Step>) {
        let g = self.map.entry(control).or_default();
        g.0.push(data);
        g.1.extend(step);
    }

    fn finish(self) -> Vec<(MultiState, Edge)> {
        self.map
            .into_iter()
            .map(|(control, (parts, steps))| {
                let data = union_all(parts);
                (
                    MultiState::new(control, data),
                    Edge {
                        steps: steps.into_iter().collect(),
                    },
                )
            })
            .collect()
    }
}

fn union_all(mut parts: Vec<DataSet>) -> DataSet {
    if parts.len() == 1 {
        return parts.pop().expect("one part");
    }
    let arity = parts[0].arity();
    let rows = parts.iter().flat_map(|p| p.iter());
    DataSet::from_rows(arity, rows)
}

impl SymSystem<'_> {
    /// Splits `data` by the property's AP valuation at `(locations,
    /// explicit)` and feeds each automaton transition leaving `from`.
    #[allow(clippy::too_many_arguments)]
    fn property_step(
        &self,
        groups: &mut Groups,
        from: u32,
        system: Option<SystemStep>,
        locations: &[u16],
        explicit: &[u16],
        data: &DataSet,
    ) -> Result<(), DataError> {
        let p = self.product;
        let ctx = ControlContext {
            locations,
            explicit,
        };
        let mut blocks: BTreeMap<u64, DataSet> = BTreeMap::new();
        if p.property.ap_exprs.iter().any(|e| e.mentions_input()) {
            // Inputs exist here, so the arity is positive.
            let mut rows: BTreeMap<u64, Vec<u16>> = BTreeMap::new();
            for m in data.iter() {
                rows.entry(p.letter(ctx, m)?).or_default().extend_from_slice(m);
            }
            for (letter, flat) in rows {
                blocks.insert(letter, DataSet::from_rows(data.arity(), flat.chunks_exact(data.arity())));
            }
        } else if let Some(m) = data.first() {
            blocks.insert(p.letter(ctx, m)?, data.clone());
        }
        for t in p.buchi.outgoing(from) {
            let bt = &p.buchi.transitions[t];
            let parts: Vec<DataSet> = blocks
                .iter()
                .filter(|(letter, _)| bt.label.matches(**letter))
                .map(|(_, d)| d.clone())
                .collect();
            if parts.is_empty() {
                continue;
            }
            let control = ControlPart {
                locations: locations.to_vec(),
                explicit: explicit.to_vec(),
                buchi: bt.dst,
            };
            let step = system.map(|system| Step { system, buchi: t });
            for d in parts {
                groups.add(control.clone(), d, step);
            }
        }
        Ok(())
    }

    /// Applies the effects of one enabled system step to the members in
    /// `enabled`, returning `(explicit values, members)` branches.
    fn effects(
        &self,
        s: &MultiState,
        step: SystemStep,
        enabled: DataSet,
    ) -> Result<Vec<(Vec<u16>, DataSet)>, DataError> {
        let model = &self.product.model;
        let locations = &s.control.locations;
        let mut branches = vec![(s.control.explicit.clone(), enabled)];
        for (p, t) in step_parts(step) {
            for a in &model.processes[p].transitions[t].effects {
                let width = model.var_width(a.target);
                match a.target {
                    VarRef::Input(i) => {
                        for (explicit, data) in &mut branches {
                            let ctx = ControlContext {
                                locations,
                                explicit,
                            };
                            *data = apply(data, i, width, &a.value, ctx)?;
                        }
                    }
                    VarRef::Explicit(slot) => {
                        let mut next: IndexMap<Vec<u16>, Vec<DataSet>> = IndexMap::new();
                        for (explicit, data) in &branches {
                            let ctx = ControlContext {
                                locations,
                                explicit,
                            };
                            let split = if a.value.mentions_input() {
                                partition_by(data, &a.value, ctx)?
                            } else {
                                let m = data.first().expect("branches are nonempty");
                                let v = eval_member(&a.value, ctx, m)?.as_int();
                                BTreeMap::from([(v, data.clone())])
                            };
                            for (v, block) in split {
                                let mut e = explicit.clone();
                                e[slot] = width.wrap(v);
                                next.entry(e).or_default().push(block);
                            }
                        }
                        branches = next
                            .into_iter()
                            .map(|(e, parts)| (e, union_all(parts)))
                            .collect();
                    }
                }
            }
        }
        Ok(branches)
    }
}

impl TransitionSystem for SymSystem<'_> {
    type State = MultiState;
    type Edge = Edge;
    type Error = ExploreError;

    fn initial_states(&self) -> Result<Vec<MultiState>, ExploreError> {
        let p = self.product;
        let data = initial_dataset(&p.model.inputs, p.options.eval_cap)?;
        let c = p.initial_control();
        let mut groups = Groups::default();
        self.property_step(&mut groups, c.buchi, None, &c.locations, &c.explicit, &data)
            .map_err(|source| ExploreError::Eval {
                state: p.describe_control(&c),
                step: "initial property step".into(),
                source,
            })?;
        Ok(groups.finish().into_iter().map(|(s, _)| s).collect())
    }

    fn successors(&self, s: &MultiState) -> Result<Vec<(MultiState, Edge)>, ExploreError> {
        let p = self.product;
        let model = &p.model;
        let ctx = ControlContext {
            locations: &s.control.locations,
            explicit: &s.control.explicit,
        };
        let mut groups = Groups::default();
        let mut covered = DataSet::empty(s.data.arity());
        for step in system_steps(model, &s.control.locations) {
            let fail = |e| p.eval_error(&s.control, step, e);
            let mut enabled = s.data.clone();
            for (proc_id, t) in step_parts(step) {
                let guard = &model.processes[proc_id].transitions[t].guard;
                enabled = prune(&enabled, guard, ctx).map_err(fail)?;
                if enabled.is_empty() {
                    break;
                }
            }
            if enabled.is_empty() {
                continue;
            }
            if covered.len() < s.data.len() {
                covered = covered.union(&enabled);
            }
            let mut locations = s.control.locations.clone();
            for (proc_id, t) in step_parts(step) {
                locations[proc_id] = model.processes[proc_id].transitions[t].to as u16;
            }
            for (explicit, data) in self.effects(s, step, enabled).map_err(fail)? {
                self.property_step(
                    &mut groups,
                    s.control.buchi,
                    Some(step),
                    &locations,
                    &explicit,
                    &data,
                )
                .map_err(fail)?;
            }
        }
        if covered.len() < s.data.len() {
            let stuck = s.data.difference(&covered);
            if !p.options.self_loop_deadlocks {
                return Err(ExploreError::Deadlock {
                    state: p.describe_control(&s.control),
                    evaluation: stuck.first().expect("nonempty").to_vec(),
                });
            }
            self.property_step(
                &mut groups,
                s.control.buchi,
                Some(SystemStep::Stutter),
                &s.control.locations,
                &s.control.explicit,
                &stuck,
            )
            .map_err(|e| p.eval_error(&s.control, SystemStep::Stutter, e))?;
        }
        Ok(groups.finish())
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
