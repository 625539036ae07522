//! Accepting-cycle detection over a [`TransitionSystem`].

mod ndfs;
mod owcty;
mod store;

use std::time::{Duration, Instant};

pub use ndfs::ndfs;
pub use owcty::owcty;
pub use store::{BudgetExceeded, VisitedStore, ENTRY_OVERHEAD};

use crate::explore::TransitionSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    pub states: u64,
    pub transitions: u64,
    /// OWCTY rounds; zero for NDFS.
    pub iterations: u64,
    pub peak_store_bytes: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub max_store_bytes: u64,
    pub deadline: Option<Instant>,
}

pub const DEFAULT_MAX_STORE_BYTES: u64 = 4 << 30;

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_store_bytes: DEFAULT_MAX_STORE_BYTES,
            deadline: None,
        }
    }
}

impl SearchLimits {
    pub fn with_timeout(timeout: Duration) -> Self {
        SearchLimits {
            deadline: Some(Instant::now() + timeout),
            ..SearchLimits::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError<E> {
    #[error(transparent)]
    System(E),
    #[error("visited store exceeded {budget} bytes after {} states", .stats.states)]
    StoreBudget { budget: u64, stats: Stats },
    #[error("timeout after {} states", .stats.states)]
    Timeout { stats: Stats },
}

/// A reachable cycle: `states[i] --edges[i]--> states[i + 1]`, and the last
/// edge leads back to `states[loop_start]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso<S, E> {
    pub states: Vec<S>,
    pub edges: Vec<E>,
    pub loop_start: usize,
}

impl<S, E> Lasso<S, E> {
    pub fn stem(&self) -> &[S] {
        &self.states[..self.loop_start]
    }

    pub fn cycle(&self) -> &[S] {
        &self.states[self.loop_start..]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of the state an edge leads to.
    pub fn next_index(&self, i: usize) -> usize {
        if i + 1 < self.states.len() {
            i + 1
        } else {
            self.loop_start
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<S, E> {
    /// No accepting cycle is reachable.
    pub holds: bool,
    pub witness: Option<Lasso<S, E>>,
    pub stats: Stats,
}

/// Outcome of a search over `T`.
pub type SearchResult<T> = Result<
    Verdict<<T as TransitionSystem>::State, <T as TransitionSystem>::Edge>,
    SearchError<<T as TransitionSystem>::Error>,
>;

/// Checks a lasso against the system: it starts in an initial state, every
/// edge is reproduced by `successors`, the closing edge returns to the loop
/// start by encoding, and some cycle state is accepting.
pub fn check_lasso<T>(ts: &T, lasso: &Lasso<T::State, T::Edge>) -> Result<(), String>
where
    T: TransitionSystem,
    T::Edge: PartialEq + std::fmt::Debug,
    T::Error: std::fmt::Display,
{
    let n = lasso.states.len();
    if n == 0 || lasso.edges.len() != n || lasso.loop_start >= n {
        return Err("malformed lasso".into());
    }
    let init = ts.initial_states().map_err(|e| e.to_string())?;
    let first = ts.encode(&lasso.states[0]);
    if !init.iter().any(|s| ts.encode(s) == first) {
        return Err("lasso does not start in an initial state".into());
    }
    for i in 0..n {
        let target = ts.encode(&lasso.states[lasso.next_index(i)]);
        let succ = ts.successors(&lasso.states[i]).map_err(|e| e.to_string())?;
        let found = succ
            .iter()
            .any(|(s, e)| ts.encode(s) == target && *e == lasso.edges[i]);
        if !found {
            return Err(format!("edge {i} is not a successor with the recorded annotation"));
        }
    }
    if !lasso.cycle().iter().any(|s| ts.is_accepting(s)) {
        return Err("no accepting state on the cycle".into());
    }
    Ok(())
}

/// Shared plumbing for the search drivers.
pub(crate) struct Budget {
    start: Instant,
    limits: SearchLimits,
    ticks: u32,
}

impl Budget {
    pub(crate) fn new(limits: SearchLimits) -> Self {
        Budget {
            start: Instant::now(),
            limits,
            ticks: 0,
        }
    }

    pub(crate) fn expired(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        if !self.ticks.is_multiple_of(256) {
            return false;
        }
        self.limits.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}
