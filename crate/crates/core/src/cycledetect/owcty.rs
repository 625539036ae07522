use std::collections::VecDeque;

use crate::explore::TransitionSystem;

use super::ndfs::ndfs_with;
use super::{Budget, SearchError, SearchLimits, SearchResult, Stats, Verdict, VisitedStore};

/// One-way-catch-them-young over the fully generated state graph.
///
/// Each iteration keeps only the states reachable from accepting states of
/// the current set and then repeatedly drops states without a predecessor
/// in the set. The property holds iff the fixpoint is empty. A witness is
/// produced by a nested DFS that treats only fixpoint states as accepting.
pub fn owcty<T: TransitionSystem>(
    ts: &T,
    limits: SearchLimits,
) -> SearchResult<T> {
    let mut budget = Budget::new(limits);
    let mut store = VisitedStore::new(limits.max_store_bytes);
    let mut succ: Vec<Vec<u32>> = Vec::new();
    let mut accepting: Vec<bool> = Vec::new();
    let mut transitions = 0u64;
    let stats = |store: &VisitedStore, transitions, iterations, budget: &Budget| Stats {
        states: store.len() as u64,
        transitions,
        iterations,
        peak_store_bytes: store.bytes(),
        wall_time: budget.elapsed(),
    };
    let over = |store: &VisitedStore, transitions, budget: &Budget, b: u64| {
        SearchError::StoreBudget {
            budget: b,
            stats: stats(store, transitions, 0, budget),
        }
    };

    // Full exploration, breadth-first.
    let mut queue = VecDeque::new();
    for s in ts.initial_states().map_err(SearchError::System)? {
        let (id, seen) = store
            .lookup_or_insert(ts.encode(&s), None)
            .map_err(|b| over(&store, transitions, &budget, b.budget))?;
        if !seen {
            accepting.push(ts.is_accepting(&s));
            succ.push(Vec::new());
            queue.push_back((id, s));
        }
    }
    while let Some((id, s)) = queue.pop_front() {
        if budget.expired() {
            return Err(SearchError::Timeout {
                stats: stats(&store, transitions, 0, &budget),
            });
        }
        let next = ts.successors(&s).map_err(SearchError::System)?;
        transitions += next.len() as u64;
        let mut ids = Vec::with_capacity(next.len());
        for (k, (t, _)) in next.into_iter().enumerate() {
            let (tid, seen) = store
                .lookup_or_insert(ts.encode(&t), Some((id, k as u32)))
                .map_err(|b| over(&store, transitions, &budget, b.budget))?;
            if !seen {
                accepting.push(ts.is_accepting(&t));
                succ.push(Vec::new());
                queue.push_back((tid, t));
            }
            ids.push(tid);
        }
        store
            .charge(4 * ids.len() as u64 + 24)
            .map_err(|b| over(&store, transitions, &budget, b.budget))?;
        succ[id as usize] = ids;
    }

    let n = store.len();
    let mut alive = vec![true; n];
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        let before = alive.iter().filter(|a| **a).count();

        // Reset: states reachable from accepting states in the set.
        let mut reach = vec![false; n];
        let mut work: Vec<u32> = (0..n as u32)
            .filter(|&i| alive[i as usize] && accepting[i as usize])
            .collect();
        for &i in &work {
            reach[i as usize] = true;
        }
        while let Some(v) = work.pop() {
            for &u in &succ[v as usize] {
                if alive[u as usize] && !reach[u as usize] {
                    reach[u as usize] = true;
                    work.push(u);
                }
            }
        }
        alive = reach;

        // Elimination of states without predecessors in the set.
        let mut indegree = vec![0u32; n];
        for v in 0..n {
            if alive[v] {
                for &u in &succ[v] {
                    if alive[u as usize] {
                        indegree[u as usize] += 1;
                    }
                }
            }
        }
        let mut work: Vec<u32> = (0..n as u32)
            .filter(|&i| alive[i as usize] && indegree[i as usize] == 0)
            .collect();
        while let Some(v) = work.pop() {
            alive[v as usize] = false;
            for &u in &succ[v as usize] {
                if alive[u as usize] {
                    indegree[u as usize] -= 1;
                    if indegree[u as usize] == 0 {
                        work.push(u);
                    }
                }
            }
        }

        let after = alive.iter().filter(|a| **a).count();
        if budget.expired() {
            return Err(SearchError::Timeout {
                stats: stats(&store, transitions, iterations, &budget),
            });
        }
        if after == before {
            break;
        }
    }

    let final_stats = stats(&store, transitions, iterations, &budget);
    if !alive.iter().any(|a| *a) {
        return Ok(Verdict {
            holds: true,
            witness: None,
            stats: final_stats,
        });
    }
    let in_fixpoint = |s: &T::State, key: &[u8]| {
        ts.is_accepting(s) && store.id_of(key).is_some_and(|i| alive[i as usize])
    };
    let restricted = ndfs_with(ts, limits, &in_fixpoint)?;
    assert!(
        !restricted.holds,
        "a nonempty OWCTY fixpoint contains an accepting cycle"
    );
    Ok(Verdict {
        holds: false,
        witness: restricted.witness,
        stats: final_stats,
    })
}
