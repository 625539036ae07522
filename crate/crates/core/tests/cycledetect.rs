use std::collections::BTreeSet;
use std::convert::Infallible;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setmc::cycledetect::{check_lasso, ndfs, owcty, SearchError, SearchLimits};
use setmc::explore::TransitionSystem;

/// An explicit graph; edges are labelled with their index in the adjacency
/// list of the source.
struct Graph {
    init: Vec<u32>,
    adj: Vec<Vec<u32>>,
    accepting: Vec<bool>,
}

impl TransitionSystem for Graph {
    type State = u32;
    type Edge = u32;
    type Error = Infallible;

    fn initial_states(&self) -> Result<Vec<u32>, Infallible> {
        Ok(self.init.clone())
    }

    fn successors(&self, s: &u32) -> Result<Vec<(u32, u32)>, Infallible> {
        Ok(self.adj[*s as usize]
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i as u32))
            .collect())
    }

    fn is_accepting(&self, s: &u32) -> bool {
        self.accepting[*s as usize]
    }

    fn encode(&self, s: &u32) -> Vec<u8> {
        s.to_le_bytes().to_vec()
    }

    fn decode(&self, bytes: &[u8]) -> u32 {
        u32::from_le_bytes(bytes.try_into().unwrap())
    }
}

fn reach(g: &Graph, from: &[u32]) -> BTreeSet<u32> {
    let mut seen: BTreeSet<u32> = from.iter().copied().collect();
    let mut work: Vec<u32> = from.to_vec();
    while let Some(v) = work.pop() {
        for &u in &g.adj[v as usize] {
            if seen.insert(u) {
                work.push(u);
            }
        }
    }
    seen
}

/// An accepting state that is reachable and reaches itself in one or more steps.
fn oracle(g: &Graph) -> bool {
    reach(g, &g.init).into_iter().any(|v| {
        g.accepting[v as usize] && reach(g, &g.adj[v as usize]).contains(&v)
    })
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.random_range(1..=12u32);
    let density = rng.random_range(0.05..0.4);
    let adj = (0..n)
        .map(|_| {
            let mut out: Vec<u32> = (0..n).filter(|_| rng.random_bool(density)).collect();
            if out.is_empty() {
                out.push(rng.random_range(0..n));
            }
            out
        })
        .collect();
    let accepting = (0..n).map(|_| rng.random_bool(0.2)).collect();
    let init = (0..rng.random_range(1..=2)).map(|_| rng.random_range(0..n)).collect();
    Graph {
        init,
        adj,
        accepting,
    }
}

#[test]
fn random_graphs_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violated = 0;
    for _ in 0..3000 {
        let g = random_graph(&mut rng);
        let expect = !oracle(&g);
        for v in [
            ndfs(&g, SearchLimits::default()).unwrap(),
            owcty(&g, SearchLimits::default()).unwrap(),
        ] {
            assert_eq!(v.holds, expect);
            assert_eq!(v.witness.is_some(), !expect);
            if let Some(w) = &v.witness {
                check_lasso(&g, w).unwrap();
            }
        }
        violated += usize::from(!expect);
    }
    assert!(violated > 300 && violated < 2700, "{violated}");
}

#[test]
fn self_loop_witness() {
    let g = Graph {
        init: vec![0],
        adj: vec![vec![1], vec![1]],
        accepting: vec![false, true],
    };
    let v = ndfs(&g, SearchLimits::default()).unwrap();
    let w = v.witness.unwrap();
    assert_eq!(w.states, vec![0, 1]);
    assert_eq!(w.loop_start, 1);
    assert_eq!(v.stats.states, 2);
    assert_eq!(v.stats.transitions, 2);
}

#[test]
fn accepting_state_off_cycle_holds() {
    // 0 -> 1 -> 2 -> 2, only 1 accepting.
    let g = Graph {
        init: vec![0],
        adj: vec![vec![1], vec![2], vec![2]],
        accepting: vec![false, true, false],
    };
    assert!(ndfs(&g, SearchLimits::default()).unwrap().holds);
    let v = owcty(&g, SearchLimits::default()).unwrap();
    assert!(v.holds);
    assert!(v.stats.iterations >= 1);
}

#[test]
fn store_budget_is_reported() {
    let n = 1000u32;
    let g = Graph {
        init: vec![0],
        adj: (0..n).map(|i| vec![(i + 1) % n]).collect(),
        accepting: vec![false; n as usize],
    };
    let limits = SearchLimits {
        max_store_bytes: 100 * (4 + 48),
        deadline: None,
    };
    match ndfs(&g, limits) {
        Err(SearchError::StoreBudget { stats, .. }) => assert_eq!(stats.states, 100),
        other => panic!("{other:?}"),
    }
    assert!(matches!(owcty(&g, limits), Err(SearchError::StoreBudget { .. })));
}

#[test]
fn expired_deadline_times_out() {
    let n = 5000u32;
    let g = Graph {
        init: vec![0],
        adj: (0..n).map(|i| vec![(i + 1) % n]).collect(),
        accepting: vec![false; n as usize],
    };
    let limits = SearchLimits {
        deadline: Some(std::time::Instant::now()),
        ..SearchLimits::default()
    };
    assert!(matches!(ndfs(&g, limits), Err(SearchError::Timeout { .. })));
    assert!(matches!(owcty(&g, limits), Err(SearchError::Timeout { .. })));
}
