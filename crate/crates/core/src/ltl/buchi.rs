//! Tableau translation of LTL to a (degeneralized) Büchi automaton.
//!
//! The construction is the classic on-the-fly expansion of formulas in
//! negation normal form into nodes carrying the obligations for the current
//! (`old`) and the next (`next`) position. Each `U` subformula gives one
//! generalized acceptance set; a counter turns them into a single set.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::Ltl;

/// Conjunction of AP literals: bits in `pos` must be set, bits in `neg`
/// clear. APs are bit positions of a letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Label {
    pub pos: u64,
    pub neg: u64,
}

impl Label {
    pub const TRUE: Label = Label { pos: 0, neg: 0 };

    pub fn matches(self, letter: u64) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }

    pub fn is_satisfiable(self) -> bool {
        self.pos & self.neg == 0
    }

    pub fn is_true(self) -> bool {
        self.pos == 0 && self.neg == 0
    }

    /// `p0 && !p2`, `true` for the empty conjunction.
    pub fn render(self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for i in 0..64 {
            let name = || names.get(i).cloned().unwrap_or_else(|| format!("p{i}"));
            if self.pos >> i & 1 == 1 {
                parts.push(name());
            }
            if self.neg >> i & 1 == 1 {
                parts.push(format!("!{}", name()));
            }
        }
        if parts.is_empty() {
            "true".into()
        } else {
            parts.join(" && ")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BuchiTransition {
    pub src: u32,
    pub label: Label,
    pub dst: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    pub num_states: u32,
    pub initial: u32,
    /// Grouped by source, in source order.
    pub transitions: Vec<BuchiTransition>,
    pub accepting: Vec<bool>,
    /// Literals every letter entering the state satisfies.
    pub state_labels: Vec<Label>,
    out_start: Vec<usize>,
}

impl BuchiAutomaton {
    /// Builds an automaton from explicit parts; transitions are re-sorted by
    /// source (stable). Used by tests and by the translator.
    pub fn from_parts(
        num_states: u32,
        initial: u32,
        mut transitions: Vec<BuchiTransition>,
        accepting: Vec<bool>,
        state_labels: Vec<Label>,
    ) -> Self {
        assert_eq!(accepting.len(), num_states as usize);
        assert_eq!(state_labels.len(), num_states as usize);
        transitions.sort_by_key(|t| t.src);
        let mut out_start = vec![0; num_states as usize + 1];
        for t in &transitions {
            out_start[t.src as usize + 1] += 1;
        }
        for i in 0..num_states as usize {
            out_start[i + 1] += out_start[i];
        }
        BuchiAutomaton {
            num_states,
            initial,
            transitions,
            accepting,
            state_labels,
            out_start,
        }
    }

    /// Ids of the transitions leaving `state`.
    pub fn outgoing(&self, state: u32) -> std::ops::Range<usize> {
        self.out_start[state as usize]..self.out_start[state as usize + 1]
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Nnf {
    True,
    False,
    Lit(usize, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
}

#[derive(Default)]
struct Interner {
    nodes: Vec<Nnf>,
    ids: HashMap<Nnf, usize>,
}

impl Interner {
    fn intern(&mut self, n: Nnf) -> usize {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    fn nnf(&mut self, f: &Ltl, positive: bool) -> usize {
        let n = match (f, positive) {
            (Ltl::True, true) => Nnf::True,
            (Ltl::True, false) => Nnf::False,
            (Ltl::Ap(p), pol) => Nnf::Lit(*p, pol),
            (Ltl::Not(g), pol) => return self.nnf(g, !pol),
            (Ltl::And(a, b), true) => Nnf::And(self.nnf(a, true), self.nnf(b, true)),
            (Ltl::And(a, b), false) => Nnf::Or(self.nnf(a, false), self.nnf(b, false)),
            (Ltl::Next(g), pol) => Nnf::Next(self.nnf(g, pol)),
            (Ltl::Until(a, b), true) => Nnf::Until(self.nnf(a, true), self.nnf(b, true)),
            (Ltl::Until(a, b), false) => Nnf::Release(self.nnf(a, false), self.nnf(b, false)),
        };
        self.intern(n)
    }
}

type Set = BTreeSet<usize>;

/// A tableau node under construction.
struct Pending {
    incoming: Set,
    new: Set,
    old: Set,
    next: Set,
}

struct Node {
    incoming: Set,
    old: Set,
}

const INIT: usize = usize::MAX;

fn expand_all(formulas: &Interner, root: usize) -> Vec<Node> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut by_key: HashMap<(Set, Set), usize> = HashMap::new();
    let mut stack = vec![Pending {
        incoming: Set::from([INIT]),
        new: Set::from([root]),
        old: Set::new(),
        next: Set::new(),
    }];
    while let Some(mut n) = stack.pop() {
        let Some(&eta) = n.new.iter().next() else {
            let key = (n.old.clone(), n.next.clone());
            if let Some(&id) = by_key.get(&key) {
                nodes[id].incoming.extend(n.incoming);
            } else {
                let id = nodes.len();
                by_key.insert(key, id);
                nodes.push(Node {
                    incoming: n.incoming,
                    old: n.old,
                });
                stack.push(Pending {
                    incoming: Set::from([id]),
                    new: n.next,
                    old: Set::new(),
                    next: Set::new(),
                });
            }
            continue;
        };
        n.new.remove(&eta);
        if n.old.contains(&eta) {
            stack.push(n);
            continue;
        }
        let add_new = |n: &mut Pending, f: usize| {
            if !n.old.contains(&f) {
                n.new.insert(f);
            }
        };
        match formulas.nodes[eta] {
            Nnf::False => {}
            Nnf::True => {
                n.old.insert(eta);
                stack.push(n);
            }
            Nnf::Lit(p, pol) => {
                if formulas.ids.get(&Nnf::Lit(p, !pol)).is_some_and(|c| n.old.contains(c)) {
                    continue;
                }
                n.old.insert(eta);
                stack.push(n);
            }
            Nnf::And(a, b) => {
                add_new(&mut n, a);
                add_new(&mut n, b);
                n.old.insert(eta);
                stack.push(n);
            }
            Nnf::Next(a) => {
                n.old.insert(eta);
                n.next.insert(a);
                stack.push(n);
            }
            Nnf::Or(a, b) | Nnf::Until(a, b) | Nnf::Release(a, b) => {
                let (first_new, first_next, second_new): (Vec<usize>, bool, Vec<usize>) =
                    match formulas.nodes[eta] {
                        Nnf::Or(..) => (vec![a], false, vec![b]),
                        Nnf::Until(..) => (vec![a], true, vec![b]),
                        _ => (vec![b], true, vec![a, b]),
                    };
                n.old.insert(eta);
                let mut second = Pending {
                    incoming: n.incoming.clone(),
                    new: n.new.clone(),
                    old: n.old.clone(),
                    next: n.next.clone(),
                };
                for f in second_new {
                    add_new(&mut second, f);
                }
                let mut first = n;
                for f in first_new {
                    add_new(&mut first, f);
                }
                if first_next {
                    first.next.insert(eta);
                }
                // The first alternative is expanded first.
                stack.push(second);
                stack.push(first);
            }
        }
    }
    nodes
}

/// Builds a Büchi automaton accepting exactly the words satisfying `f`.
///
/// State 0 is a fresh initial state with no incoming transitions; a
/// transition into a state is labelled with that state's literals. States
/// are numbered breadth-first from the initial state, so the numbering only
/// depends on `f`.
pub fn ltl_to_buchi(f: &Ltl) -> BuchiAutomaton {
    let mut formulas = Interner::default();
    let root = formulas.nnf(f, true);
    let nodes = expand_all(&formulas, root);

    let label_of = |old: &Set| {
        let mut l = Label::TRUE;
        for &id in old {
            if let Nnf::Lit(p, pol) = formulas.nodes[id] {
                assert!(p < 64, "at most 64 atomic propositions are supported");
                if pol {
                    l.pos |= 1 << p;
                } else {
                    l.neg |= 1 << p;
                }
            }
        }
        l
    };
    let labels: Vec<Label> = nodes.iter().map(|n| label_of(&n.old)).collect();

    let untils: Vec<(usize, usize)> = formulas
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(id, n)| match n {
            Nnf::Until(_, b) => Some((id, *b)),
            _ => None,
        })
        .collect();
    let k = untils.len();
    let in_acc = |node: usize, i: usize| {
        let (u, rhs) = untils[i];
        !nodes[node].old.contains(&u) || nodes[node].old.contains(&rhs)
    };

    // successors[n]: nodes whose incoming set contains n, in node order.
    let mut succ_of_init = Vec::new();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (m, node) in nodes.iter().enumerate() {
        for &src in &node.incoming {
            if src == INIT {
                succ_of_init.push(m);
            } else {
                succ[src].push(m);
            }
        }
    }

    // Product with the counter, explored breadth-first.
    // Key: None for the fresh initial state, Some((node, counter)).
    let mut ids: HashMap<Option<(usize, usize)>, u32> = HashMap::new();
    let mut order: Vec<Option<(usize, usize)>> = vec![None];
    ids.insert(None, 0);
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([None]);
    while let Some(key) = queue.pop_front() {
        let src = ids[&key];
        let targets: Vec<(usize, usize)> = match key {
            None => succ_of_init.iter().map(|&m| (m, 0)).collect(),
            Some((n, i)) => {
                let j = if k > 0 && in_acc(n, i) { (i + 1) % k } else { i };
                succ[n].iter().map(|&m| (m, j)).collect()
            }
        };
        for (m, j) in targets {
            let label = labels[m];
            if !label.is_satisfiable() {
                continue;
            }
            let dst_key = Some((m, j));
            let dst = *ids.entry(dst_key).or_insert_with(|| {
                order.push(dst_key);
                queue.push_back(dst_key);
                (order.len() - 1) as u32
            });
            transitions.push(BuchiTransition { src, label, dst });
        }
    }
    let accepting = order
        .iter()
        .map(|key| match key {
            None => false,
            Some((n, i)) => *i == 0 && (k == 0 || in_acc(*n, 0)),
        })
        .collect();
    let state_labels = order
        .iter()
        .map(|key| key.map_or(Label::TRUE, |(n, _)| labels[n]))
        .collect();
    BuchiAutomaton::from_parts(order.len() as u32, 0, transitions, accepting, state_labels)
}
