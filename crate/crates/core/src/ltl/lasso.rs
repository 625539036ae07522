//! Ultimately periodic words and two independent ways of deciding them:
//! direct evaluation of a formula, and acceptance by an automaton.

use super::{BuchiAutomaton, Ltl};

/// `stem · cycle^ω`; letters are AP bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWord {
    pub stem: Vec<u64>,
    pub cycle: Vec<u64>,
}

impl LassoWord {
    pub fn new(stem: Vec<u64>, cycle: Vec<u64>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        LassoWord { stem, cycle }
    }

    fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    fn letter(&self, i: usize) -> u64 {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[i - self.stem.len()]
        }
    }

    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }
}

/// Truth of `f` at position 0 of `w`, by the textbook semantics.
pub fn ltl_eval_lasso(f: &Ltl, w: &LassoWord) -> bool {
    truth(f, w)[0]
}

fn truth(f: &Ltl, w: &LassoWord) -> Vec<bool> {
    let n = w.len();
    match f {
        Ltl::True => vec![true; n],
        Ltl::Ap(p) => (0..n).map(|i| w.letter(i) >> p & 1 == 1).collect(),
        Ltl::Not(g) => truth(g, w).into_iter().map(|b| !b).collect(),
        Ltl::And(a, b) => {
            let (a, b) = (truth(a, w), truth(b, w));
            a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
        }
        Ltl::Next(g) => {
            let g = truth(g, w);
            (0..n).map(|i| g[w.succ(i)]).collect()
        }
        Ltl::Until(a, b) => {
            let (a, b) = (truth(a, w), truth(b, w));
            // Least fixpoint of u = b ∨ (a ∧ X u).
            let mut u = b.clone();
            loop {
                let mut changed = false;
                for i in (0..n).rev() {
                    if !u[i] && a[i] && u[w.succ(i)] {
                        u[i] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break u;
                }
            }
        }
    }
}

/// Whether some run of `a` on `w` visits an accepting state infinitely often.
pub fn ba_accepts_lasso(a: &BuchiAutomaton, w: &LassoWord) -> bool {
    // Product nodes (state, position): `state` is about to read `position`.
    let n = w.len();
    let id = |q: u32, i: usize| q as usize * n + i;
    let total = a.num_states as usize * n;
    let succs = |v: usize| {
        let (q, i) = ((v / n) as u32, v % n);
        let letter = w.letter(i);
        let next = w.succ(i);
        a.outgoing(q).filter_map(move |t| {
            let t = &a.transitions[t];
            t.label.matches(letter).then(|| id(t.dst, next))
        })
    };

    // Iterative Tarjan from the initial node; a nontrivial SCC (or a node
    // with a self-loop) containing an accepting node is an accepting cycle.
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; total];
    let mut low = vec![0; total];
    let mut on_stack = vec![false; total];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let root = id(a.initial, 0);
    let open = |v: usize,
                index: &mut Vec<usize>,
                low: &mut Vec<usize>,
                on_stack: &mut Vec<bool>,
                stack: &mut Vec<usize>,
                next_index: &mut usize| {
        index[v] = *next_index;
        low[v] = *next_index;
        *next_index += 1;
        stack.push(v);
        on_stack[v] = true;
        (v, succs(v).collect::<Vec<_>>(), 0)
    };
    call.push(open(
        root,
        &mut index,
        &mut low,
        &mut on_stack,
        &mut stack,
        &mut next_index,
    ));
    while let Some(frame) = call.last_mut() {
        let v = frame.0;
        if frame.2 < frame.1.len() {
            let u = frame.1[frame.2];
            frame.2 += 1;
            if index[u] == UNSEEN {
                let f = open(
                    u,
                    &mut index,
                    &mut low,
                    &mut on_stack,
                    &mut stack,
                    &mut next_index,
                );
                call.push(f);
            } else if on_stack[u] {
                low[v] = low[v].min(index[u]);
            }
            continue;
        }
        let succ_list = std::mem::take(&mut frame.1);
        call.pop();
        if let Some(parent) = call.last() {
            let p = parent.0;
            low[p] = low[p].min(low[v]);
        }
        if low[v] == index[v] {
            let mut component = Vec::new();
            loop {
                let x = stack.pop().expect("tarjan stack");
                on_stack[x] = false;
                component.push(x);
                if x == v {
                    break;
                }
            }
            let cyclic = component.len() > 1 || succ_list.contains(&v);
            if cyclic && component.iter().any(|&x| a.is_accepting((x / n) as u32)) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{BuchiTransition, Label};

    fn w(stem: &[u64], cycle: &[u64]) -> LassoWord {
        LassoWord::new(stem.to_vec(), cycle.to_vec())
    }

    #[test]
    fn atomic_and_next() {
        let p = Ltl::ap(0);
        assert!(ltl_eval_lasso(&p, &w(&[1], &[0])));
        assert!(!ltl_eval_lasso(&Ltl::next(p.clone()), &w(&[1], &[0])));
        assert!(ltl_eval_lasso(&Ltl::next(p), &w(&[0], &[1])));
    }

    #[test]
    fn until_needs_a_witness() {
        let f = Ltl::until(Ltl::ap(0), Ltl::ap(1));
        assert!(ltl_eval_lasso(&f, &w(&[0b01], &[0b10])));
        assert!(!ltl_eval_lasso(&f, &w(&[], &[0b01])));
        // Witness only inside the cycle, after wrapping around.
        assert!(ltl_eval_lasso(&f, &w(&[0b01], &[0b01, 0b01, 0b10])));
    }

    #[test]
    fn true_self_loop_accepts_everything() {
        let a = BuchiAutomaton::from_parts(
            1,
            0,
            vec![BuchiTransition {
                src: 0,
                label: Label::TRUE,
                dst: 0,
            }],
            vec![true],
            vec![Label::TRUE],
        );
        assert!(ba_accepts_lasso(&a, &w(&[3, 1], &[0])));
        let mut none = a.clone();
        none.accepting = vec![false];
        assert!(!ba_accepts_lasso(&none, &w(&[3, 1], &[0])));
    }
}
