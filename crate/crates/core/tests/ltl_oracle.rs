#[path = "common/ltl_gen.rs"]
mod ltl_gen;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use setmc::ltl::{ba_accepts_lasso, ltl_eval_lasso, ltl_to_buchi, negate, LassoWord, Ltl};

use ltl_gen::{formulas_up_to, lassos, random_formula, random_lasso};

#[test]
fn exhaustive_small_formulas_agree_with_semantics() {
    let words = lassos(2, 2, 4);
    assert_eq!(words.len(), 420);
    let formulas = formulas_up_to(3);
    for f in &formulas {
        let a = ltl_to_buchi(f);
        for w in &words {
            assert_eq!(
                ba_accepts_lasso(&a, w),
                ltl_eval_lasso(f, w),
                "formula {f:?} on {w:?}"
            );
        }
    }
}

#[test]
fn random_formulas_agree_with_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let f = random_formula(&mut rng, 4, 3);
        let w = random_lasso(&mut rng, 3);
        let a = ltl_to_buchi(&f);
        assert_eq!(ba_accepts_lasso(&a, &w), ltl_eval_lasso(&f, &w), "{f:?} on {w:?}");
    }
}

#[test]
fn negation_is_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2_000 {
        let f = random_formula(&mut rng, 4, 2);
        let w = random_lasso(&mut rng, 2);
        assert_eq!(ltl_eval_lasso(&negate(&f), &w), !ltl_eval_lasso(&f, &w));
    }
}

#[test]
fn always_p_on_all_small_lassos() {
    let f = Ltl::always(Ltl::ap(0));
    let a = ltl_to_buchi(&f);
    for w in lassos(3, 3, 4) {
        let expected = w.stem.iter().chain(&w.cycle).all(|l| l & 1 == 1);
        assert_eq!(ba_accepts_lasso(&a, &w), expected, "{w:?}");
    }
}

#[test]
fn automaton_labels_are_satisfiable() {
    for f in formulas_up_to(2) {
        let a = ltl_to_buchi(&f);
        assert!(a.transitions.iter().all(|t| t.label.is_satisfiable()));
        assert_eq!(a.accepting.len(), a.num_states as usize);
    }
    let _ = LassoWord::new(vec![], vec![0]);
}
