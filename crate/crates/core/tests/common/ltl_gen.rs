#![allow(dead_code)]

use rand::Rng;
use setmc::ltl::{LassoWord, Ltl};

/// Every formula over APs 0 and 1 using at most `ops` operators drawn from
/// `! X F G && || -> U`.
pub fn formulas_up_to(ops: usize) -> Vec<Ltl> {
    let mut by_size: Vec<Vec<Ltl>> = vec![vec![Ltl::ap(0), Ltl::ap(1)]];
    for k in 1..=ops {
        let mut level = Vec::new();
        for f in &by_size[k - 1] {
            level.push(Ltl::not(f.clone()));
            level.push(Ltl::next(f.clone()));
            level.push(Ltl::eventually(f.clone()));
            level.push(Ltl::always(f.clone()));
        }
        for left in 0..k {
            let right = k - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    level.push(Ltl::and(a.clone(), b.clone()));
                    level.push(Ltl::or(a.clone(), b.clone()));
                    level.push(Ltl::implies(a.clone(), b.clone()));
                    level.push(Ltl::until(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size.concat()
}

/// All lassos over letters `0..4` with the given stem and cycle bounds.
pub fn lassos(max_stem: usize, max_cycle: usize, letters: u64) -> Vec<LassoWord> {
    fn words(len: usize, letters: u64) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..letters).map(move |l| {
                        let mut w = w.clone();
                        w.push(l);
                        w
                    })
                })
                .collect();
        }
        out
    }
    let mut out = Vec::new();
    for s in 0..=max_stem {
        for c in 1..=max_cycle {
            for stem in words(s, letters) {
                for cycle in words(c, letters) {
                    out.push(LassoWord::new(stem.clone(), cycle));
                }
            }
        }
    }
    out
}

pub fn random_formula(rng: &mut impl Rng, depth: usize, aps: usize) -> Ltl {
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..aps + 2) {
            i if i < aps => Ltl::ap(i),
            i if i == aps => Ltl::tt(),
            _ => Ltl::ff(),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, depth - 1, aps);
    match rng.random_range(0..8) {
        0 => Ltl::not(sub(rng)),
        1 => Ltl::next(sub(rng)),
        2 => Ltl::eventually(sub(rng)),
        3 => Ltl::always(sub(rng)),
        4 => Ltl::and(sub(rng), sub(rng)),
        5 => Ltl::or(sub(rng), sub(rng)),
        6 => Ltl::implies(sub(rng), sub(rng)),
        _ => Ltl::until(sub(rng), sub(rng)),
    }
}

pub fn random_lasso(rng: &mut impl Rng, aps: usize) -> LassoWord {
    let letters = 1u64 << aps;
    let stem = (0..rng.random_range(0..=4)).map(|_| rng.random_range(0..letters)).collect();
    let cycle = (0..rng.random_range(1..=4)).map(|_| rng.random_range(0..letters)).collect();
    LassoWord::new(stem, cycle)
}
