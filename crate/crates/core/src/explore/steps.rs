use std::fmt;

use crate::model::{Model, SyncDir};

/// One move of the asynchronous system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemStep {
    Local {
        process: usize,
        transition: usize,
    },
    /// Rendezvous; the sender's effects are applied first.
    Sync {
        sender: usize,
        send: usize,
        receiver: usize,
        recv: usize,
    },
    /// Deadlock self-loop (only with `self_loop_deadlocks`).
    Stutter,
}

/// A product step: a system step followed by a property-automaton transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub system: SystemStep,
    /// Index into `BuchiAutomaton::transitions`.
    pub buchi: usize,
}

/// Steps that can produce one particular successor, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Edge {
    pub steps: Vec<Step>,
}

/// Candidate system steps from the given locations, ignoring guards:
/// processes in order, transitions in declaration order; a rendezvous is
/// listed at its sending transition, receivers in process order.
pub fn system_steps(model: &Model, locations: &[u16]) -> Vec<SystemStep> {
    let mut out = Vec::new();
    for (p, proc_def) in model.processes.iter().enumerate() {
        let here = usize::from(locations[p]);
        for (t, tr) in proc_def.transitions.iter().enumerate() {
            if tr.from != here {
                continue;
            }
            match tr.sync {
                None => out.push(SystemStep::Local {
                    process: p,
                    transition: t,
                }),
                Some(s) if s.dir == SyncDir::Send => {
                    for (q, other) in model.processes.iter().enumerate() {
                        if q == p {
                            continue;
                        }
                        let there = usize::from(locations[q]);
                        for (u, rt) in other.transitions.iter().enumerate() {
                            let matches = rt.from == there
                                && rt.sync.is_some_and(|r| {
                                    r.dir == SyncDir::Recv && r.channel == s.channel
                                });
                            if matches {
                                out.push(SystemStep::Sync {
                                    sender: p,
                                    send: t,
                                    receiver: q,
                                    recv: u,
                                });
                            }
                        }
                    }
                }
                Some(_) => {}
            }
        }
    }
    out
}

/// `(process, transition)` pairs taken by a system step, in effect order.
pub fn step_parts(step: SystemStep) -> Vec<(usize, usize)> {
    match step {
        SystemStep::Local {
            process,
            transition,
        } => vec![(process, transition)],
        SystemStep::Sync {
            sender,
            send,
            receiver,
            recv,
        } => vec![(sender, send), (receiver, recv)],
        SystemStep::Stutter => Vec::new(),
    }
}

/// Human-readable step description, e.g. `P_0: ncs -> want`.
pub fn describe_system_step(model: &Model, step: SystemStep) -> String {
    let one = |p: usize, t: usize| {
        let pd = &model.processes[p];
        let tr = &pd.transitions[t];
        format!(
            "{}: {} -> {}",
            pd.name, pd.locations[tr.from], pd.locations[tr.to]
        )
    };
    match step {
        SystemStep::Local {
            process,
            transition,
        } => one(process, transition),
        SystemStep::Sync {
            sender,
            send,
            receiver,
            recv,
        } => {
            let ch = model.processes[sender].transitions[send]
                .sync
                .map(|s| model.channels[s.channel].name.as_str())
                .unwrap_or("?");
            format!("{} | {} via {ch}", one(sender, send), one(receiver, recv))
        }
        SystemStep::Stutter => "deadlock stutter".to_string(),
    }
}

impl fmt::Display for SystemStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SystemStep::Local {
                process,
                transition,
            } => write!(f, "p{process}.t{transition}"),
            SystemStep::Sync {
                sender,
                send,
                receiver,
                recv,
            } => write!(f, "p{sender}.t{send}|p{receiver}.t{recv}"),
            SystemStep::Stutter => write!(f, "stutter"),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/b{}", self.system, self.buchi)
    }
}
