use crate::explore::TransitionSystem;

use super::{Budget, Lasso, SearchError, SearchLimits, SearchResult, Stats, Verdict, VisitedStore};

const WHITE: u8 = 0;
const CYAN: u8 = 1;
const BLUE: u8 = 2;

struct Frame {
    id: u32,
    succ: Vec<u32>,
    next: usize,
}

struct Search<'a, T: TransitionSystem> {
    ts: &'a T,
    accepting: &'a dyn Fn(&T::State, &[u8]) -> bool,
    store: VisitedStore,
    color: Vec<u8>,
    red: Vec<bool>,
    transitions: u64,
    budget: Budget,
}

type Fail<E> = SearchError<E>;
/// Ids of a lasso and the position its cycle starts at.
type IdLasso = (Vec<u32>, usize);

impl<T: TransitionSystem> Search<'_, T> {
    fn stats(&self) -> Stats {
        Stats {
            states: self.store.len() as u64,
            transitions: self.transitions,
            iterations: 0,
            peak_store_bytes: self.store.bytes(),
            wall_time: self.budget.elapsed(),
        }
    }

    fn insert(&mut self, key: Vec<u8>, parent: Option<(u32, u32)>) -> Result<u32, Fail<T::Error>> {
        let (id, _) = self
            .store
            .lookup_or_insert(key, parent)
            .map_err(|b| SearchError::StoreBudget {
                budget: b.budget,
                stats: self.stats(),
            })?;
        if self.color.len() < self.store.len() {
            self.color.push(WHITE);
            self.red.push(false);
        }
        Ok(id)
    }

    fn state(&self, id: u32) -> T::State {
        self.ts.decode(self.store.key(id))
    }

    fn expand(&mut self, id: u32, count: bool) -> Result<Vec<u32>, Fail<T::Error>> {
        if self.budget.expired() {
            return Err(SearchError::Timeout {
                stats: self.stats(),
            });
        }
        let succ = self
            .ts
            .successors(&self.state(id))
            .map_err(SearchError::System)?;
        if count {
            self.transitions += succ.len() as u64;
        }
        let mut ids = Vec::with_capacity(succ.len());
        for (k, (s, _)) in succ.iter().enumerate() {
            ids.push(self.insert(self.ts.encode(s), Some((id, k as u32)))?);
        }
        Ok(ids)
    }

    fn is_accepting(&self, id: u32) -> bool {
        (self.accepting)(&self.state(id), self.store.key(id))
    }

    /// Returns the red path `[seed, ..]` and the cyan state it closes on.
    #[allow(clippy::type_complexity)]
    fn red_search(&mut self, seed: u32) -> Result<Option<(Vec<u32>, u32)>, Fail<T::Error>> {
        self.red[seed as usize] = true;
        let succ = self.expand(seed, false)?;
        let mut stack = vec![Frame {
            id: seed,
            succ,
            next: 0,
        }];
        while let Some(top) = stack.last_mut() {
            if top.next == top.succ.len() {
                stack.pop();
                continue;
            }
            let u = top.succ[top.next];
            top.next += 1;
            if self.color[u as usize] == CYAN {
                let path = stack.iter().map(|f| f.id).collect();
                return Ok(Some((path, u)));
            }
            if !self.red[u as usize] {
                self.red[u as usize] = true;
                let succ = self.expand(u, false)?;
                stack.push(Frame {
                    id: u,
                    succ,
                    next: 0,
                });
            }
        }
        Ok(None)
    }

    /// Blue search from `root`; on success returns the lasso as ids.
    fn blue_search(&mut self, root: u32) -> Result<Option<IdLasso>, Fail<T::Error>> {
        self.color[root as usize] = CYAN;
        let succ = self.expand(root, true)?;
        let mut stack = vec![Frame {
            id: root,
            succ,
            next: 0,
        }];
        while let Some(top) = stack.last_mut() {
            if top.next < top.succ.len() {
                let u = top.succ[top.next];
                top.next += 1;
                if self.color[u as usize] == WHITE {
                    self.color[u as usize] = CYAN;
                    let succ = self.expand(u, true)?;
                    stack.push(Frame {
                        id: u,
                        succ,
                        next: 0,
                    });
                }
                continue;
            }
            let v = top.id;
            if self.is_accepting(v) {
                if let Some((red_path, cyan)) = self.red_search(v)? {
                    let mut ids: Vec<u32> = stack.iter().map(|f| f.id).collect();
                    let loop_start = ids
                        .iter()
                        .position(|&i| i == cyan)
                        .expect("cyan states are on the blue stack");
                    ids.extend_from_slice(&red_path[1..]);
                    return Ok(Some((ids, loop_start)));
                }
            }
            self.color[v as usize] = BLUE;
            stack.pop();
        }
        Ok(None)
    }
}

/// Rebuilds a lasso of states and edges from a lasso of store ids.
pub(crate) fn materialize<T: TransitionSystem>(
    ts: &T,
    store: &VisitedStore,
    ids: &[u32],
    loop_start: usize,
) -> Result<Lasso<T::State, T::Edge>, T::Error> {
    let states: Vec<T::State> = ids.iter().map(|&i| ts.decode(store.key(i))).collect();
    let mut edges = Vec::with_capacity(ids.len());
    for i in 0..ids.len() {
        let next = if i + 1 < ids.len() { ids[i + 1] } else { ids[loop_start] };
        let target = store.key(next);
        let edge = ts
            .successors(&states[i])?
            .into_iter()
            .find(|(s, _)| ts.encode(s) == target)
            .map(|(_, e)| e)
            .expect("lasso ids follow successor edges");
        edges.push(edge);
    }
    Ok(Lasso {
        states,
        edges,
        loop_start,
    })
}

pub(crate) fn ndfs_with<T: TransitionSystem>(
    ts: &T,
    limits: SearchLimits,
    accepting: &dyn Fn(&T::State, &[u8]) -> bool,
) -> SearchResult<T> {
    let mut search = Search {
        ts,
        accepting,
        store: VisitedStore::new(limits.max_store_bytes),
        color: Vec::new(),
        red: Vec::new(),
        transitions: 0,
        budget: Budget::new(limits),
    };
    let initial = ts.initial_states().map_err(SearchError::System)?;
    for s in &initial {
        let id = search.insert(ts.encode(s), None)?;
        if search.color[id as usize] != WHITE {
            continue;
        }
        if let Some((ids, loop_start)) = search.blue_search(id)? {
            let witness =
                materialize(ts, &search.store, &ids, loop_start).map_err(SearchError::System)?;
            return Ok(Verdict {
                holds: false,
                witness: Some(witness),
                stats: search.stats(),
            });
        }
    }
    Ok(Verdict {
        holds: true,
        witness: None,
        stats: search.stats(),
    })
}

/// Nested depth-first search: the outer (blue) search starts an inner (red)
/// search at each accepting state in post-order; the inner search reports a
/// cycle as soon as it reaches a state on the outer stack.
pub fn ndfs<T: TransitionSystem>(
    ts: &T,
    limits: SearchLimits,
) -> SearchResult<T> {
    ndfs_with(ts, limits, &|s, _| ts.is_accepting(s))
}
