//! Counterexample post-processing: narrowing a witness lasso to the
//! evaluations that can actually run it, picking one concrete run, and
//! printing traces.

mod trace;

pub use trace::{
    format_value_set, parse_text, parse_value_set, Section, Trace, TraceKind, TraceLine,
    TraceParseError,
};

use crate::cycledetect::Lasso;
use crate::explore::{Edge, ExpSystem, ExploreError, Product, TransitionSystem};
use crate::ltl::LassoWord;
use crate::multistate::{ControlContext, DataError, DataSet, MultiState};

/// Largest number of cycle unrollings [`concretize`] tries by default.
pub const MAX_UNROLL: u64 = 1 << 16;

/// A witness lasso whose data sets keep only evaluations that can execute
/// the rest of the lasso, cycle included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrowedLasso {
    pub states: Vec<MultiState>,
    pub edges: Vec<Edge>,
    pub loop_start: usize,
}

impl NarrowedLasso {
    pub fn next_index(&self, i: usize) -> usize {
        if i + 1 < self.states.len() {
            i + 1
        } else {
            self.loop_start
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NarrowError {
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error("narrowing emptied lasso position {position}")]
    Empty { position: usize },
}

/// A run of the unreduced product; `unrollings` counts how many times the
/// symbolic cycle is traversed by the concrete cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteRun {
    pub lasso: Lasso<MultiState, Edge>,
    pub unrollings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Concretized {
    Concrete(ConcreteRun),
    /// No evaluation recurred within the unrolling limit.
    SymbolicOnly { limit: u64 },
}

/// Evaluations reachable from `member` at position `i` along the lasso edge
/// into position `i + 1`.
fn image(
    product: &Product,
    from: &MultiState,
    edge: &Edge,
    to: &MultiState,
    member: &[u16],
) -> Result<Vec<Vec<u16>>, ExploreError> {
    let mut out: Vec<Vec<u16>> = product
        .concrete_moves(&from.control, member)?
        .into_iter()
        .filter(|m| m.control == to.control && edge.steps.contains(&m.step))
        .map(|m| m.inputs)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Per position, the image of every member of the original data set.
type Images = Vec<Vec<(Vec<u16>, Vec<Vec<u16>>)>>;

fn images<S>(product: &Product, states: &[MultiState], edges: &[Edge], next: S) -> Result<Images, ExploreError>
where
    S: Fn(usize) -> usize,
{
    let mut all = Vec::with_capacity(states.len());
    for i in 0..states.len() {
        let to = &states[next(i)];
        let mut row = Vec::with_capacity(states[i].data.len());
        for m in states[i].data.iter() {
            row.push((m.to_vec(), image(product, &states[i], &edges[i], to, m)?));
        }
        all.push(row);
    }
    Ok(all)
}

fn keep(images: &[(Vec<u16>, Vec<Vec<u16>>)], current: &DataSet, next: &DataSet) -> DataSet {
    let rows = images
        .iter()
        .filter(|(m, img)| current.contains(m) && img.iter().any(|t| next.contains(t)))
        .map(|(m, _)| m.as_slice());
    DataSet::from_rows(current.arity(), rows)
}

/// Backward pruning: the cycle's sets are shrunk to a greatest fixpoint,
/// then one pass over the stem.
pub fn narrow(product: &Product, lasso: &Lasso<MultiState, Edge>) -> Result<NarrowedLasso, NarrowError> {
    let n = lasso.states.len();
    let imgs = images(product, &lasso.states, &lasso.edges, |i| lasso.next_index(i))?;
    let mut kept: Vec<DataSet> = lasso.states.iter().map(|s| s.data.clone()).collect();
    loop {
        let mut changed = false;
        for i in (lasso.loop_start..n).rev() {
            let next = kept[lasso.next_index(i)].clone();
            let k = keep(&imgs[i], &kept[i], &next);
            if k.is_empty() {
                return Err(NarrowError::Empty { position: i });
            }
            if k.len() != kept[i].len() {
                kept[i] = k;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for i in (0..lasso.loop_start).rev() {
        let k = keep(&imgs[i], &kept[i], &kept[i + 1]);
        if k.is_empty() {
            return Err(NarrowError::Empty { position: i });
        }
        kept[i] = k;
    }
    Ok(NarrowedLasso {
        states: lasso
            .states
            .iter()
            .zip(kept)
            .map(|(s, d)| MultiState::new(s.control.clone(), d))
            .collect(),
        edges: lasso.edges.clone(),
        loop_start: lasso.loop_start,
    })
}

/// Checks the narrowed-lasso invariants: nonempty sets, every member of a
/// position reaches a member of the next position along the recorded edge,
/// and (consequently) the cycle sets are closed under one unrolling.
pub fn check_narrowed(product: &Product, nl: &NarrowedLasso) -> Result<(), String> {
    for (i, s) in nl.states.iter().enumerate() {
        if s.data.is_empty() {
            return Err(format!("position {i} is empty"));
        }
        let to = &nl.states[nl.next_index(i)];
        for m in s.data.iter() {
            let img = image(product, s, &nl.edges[i], to, m).map_err(|e| e.to_string())?;
            if !img.iter().any(|t| to.data.contains(t)) {
                return Err(format!("member {m:?} at position {i} has no successor in the next set"));
            }
        }
    }
    Ok(())
}

/// Default unrolling limit: the number of evaluations, capped.
pub fn default_unroll_limit(product: &Product) -> u64 {
    product.model.input_domain_product().clamp(1, MAX_UNROLL)
}

/// Picks the least evaluation at the cycle entry that the stem can deliver,
/// and follows the least successor evaluation around the cycle until an
/// evaluation recurs at the cycle entry.
pub fn concretize(product: &Product, nl: &NarrowedLasso, unroll_limit: u64) -> Result<Concretized, ExploreError> {
    let n = nl.states.len();
    let l = nl.loop_start;
    let pick = |i: usize, m: &[u16]| -> Result<Option<Vec<u16>>, ExploreError> {
        let to = &nl.states[nl.next_index(i)];
        Ok(image(product, &nl.states[i], &nl.edges[i], to, m)?
            .into_iter()
            .find(|t| to.data.contains(t)))
    };

    // Forward sets along the stem, then choose backward.
    let mut forward = vec![nl.states[0].data.clone()];
    for i in 0..l {
        let to = &nl.states[i + 1];
        let mut rows = Vec::new();
        for m in forward[i].iter() {
            for t in image(product, &nl.states[i], &nl.edges[i], to, m)? {
                if to.data.contains(&t) {
                    rows.push(t);
                }
            }
        }
        forward.push(DataSet::from_rows(to.data.arity(), rows.iter().map(Vec::as_slice)));
    }
    let entry = forward[l].first().expect("narrowed stem reaches the cycle").to_vec();
    let mut evals = vec![entry];
    for i in (0..l).rev() {
        let target = evals[0].clone();
        let to = &nl.states[i + 1];
        let mut chosen = None;
        for m in forward[i].iter() {
            if image(product, &nl.states[i], &nl.edges[i], to, m)?.contains(&target) {
                chosen = Some(m.to_vec());
                break;
            }
        }
        evals.insert(0, chosen.expect("forward sets are backward consistent"));
    }

    // Walk the cycle.
    let mut entries: Vec<Vec<u16>> = vec![evals[l].clone()];
    let mut walk: Vec<Vec<u16>> = Vec::new();
    let mut cur = evals[l].clone();
    let closed_at = loop {
        for i in l..n {
            walk.push(cur.clone());
            cur = pick(i, &cur)?.expect("narrowed members have a successor in the next set");
        }
        if let Some(k) = entries.iter().position(|e| *e == cur) {
            break k;
        }
        if entries.len() as u64 >= unroll_limit {
            return Ok(Concretized::SymbolicOnly {
                limit: unroll_limit,
            });
        }
        entries.push(cur.clone());
    };
    let cycle_len = n - l;
    let unrollings = entries.len() - closed_at;

    let mut states: Vec<MultiState> = (0..l)
        .map(|i| MultiState::new(nl.states[i].control.clone(), DataSet::singleton(&evals[i])))
        .collect();
    for (j, m) in walk.iter().enumerate() {
        let control = nl.states[l + j % cycle_len].control.clone();
        states.push(MultiState::new(control, DataSet::singleton(m)));
    }
    let loop_start = l + closed_at * cycle_len;
    let exp = ExpSystem { product };
    let mut edges = Vec::with_capacity(states.len());
    for i in 0..states.len() {
        let next = if i + 1 < states.len() { i + 1 } else { loop_start };
        let target = states[next].encode();
        let edge = exp
            .successors(&states[i])?
            .into_iter()
            .find(|(s, _)| s.encode() == target)
            .map(|(_, e)| e)
            .expect("concrete steps follow exp successors");
        edges.push(edge);
    }
    Ok(Concretized::Concrete(ConcreteRun {
        lasso: Lasso {
            states,
            edges,
            loop_start,
        },
        unrollings,
    }))
}

/// The AP letters read along a lasso of product states: the automaton's
/// initial transition reads the first state and every later transition the
/// state it leads into.
pub fn ap_word(product: &Product, lasso: &Lasso<MultiState, Edge>) -> Result<LassoWord, DataError> {
    let letters = lasso
        .states
        .iter()
        .map(|s| {
            let ctx = ControlContext {
                locations: &s.control.locations,
                explicit: &s.control.explicit,
            };
            product.letter(ctx, s.data.first().expect("nonempty"))
        })
        .collect::<Result<Vec<u64>, _>>()?;
    let (stem, cycle) = letters.split_at(lasso.loop_start);
    Ok(LassoWord::new(stem.to_vec(), cycle.to_vec()))
}
