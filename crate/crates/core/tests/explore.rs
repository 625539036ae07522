#[path = "common/ltl_gen.rs"]
mod ltl_gen;
#[path = "common/models.rs"]
mod models;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use setmc::explore::{refines, ExploreOptions, Product, TransitionSystem};
use setmc::ltl::Label;
use setmc::multistate::{DataSet, MultiState};

use models::*;

fn threads() -> Product {
    // init -> 1 on anything; 1 loops; 1 -> 2 and 2 -> 2 on a > 10.
    let a = automaton(
        3,
        &[
            (0, Label::TRUE, 1),
            (1, Label::TRUE, 1),
            (1, lit(0, true), 2),
            (2, lit(0, true), 2),
        ],
        &[2],
    );
    with_automaton(&read_model("threads.cdve"), &[("big", "a > 10")], a)
}

fn range(lo: u16, hi: u16) -> BTreeSet<Vec<u16>> {
    (lo..=hi).map(|v| vec![v]).collect()
}

fn locations(p: &Product, s: &MultiState) -> Vec<String> {
    p.model
        .processes
        .iter()
        .zip(&s.control.locations)
        .map(|(pd, &l)| pd.locations[usize::from(l)].clone())
        .collect()
}

#[test]
fn thread_guards_split_the_input_set() {
    let p = threads();
    let sym = p.sym();
    let init = sym.initial_states().unwrap();
    assert_eq!(init.len(), 1);
    assert_eq!(init[0].data.len(), 256);
    assert_eq!(init[0].control.buchi, 1);

    let after_read = sym.successors(&init[0]).unwrap();
    let started = after_read
        .iter()
        .map(|(s, _)| s)
        .find(|s| s.control.buchi == 1)
        .unwrap();
    assert_eq!(locations(&p, started), ["done", "test", "test"]);
    assert_eq!(started.data.len(), 256);

    let next = sym_successors(&p, started);
    let find = |t1: &str, t2: &str| {
        next.iter()
            .find(|(c, _)| {
                c.buchi == 1
                    && p.model.processes[1].locations[usize::from(c.locations[1])] == t1
                    && p.model.processes[2].locations[usize::from(c.locations[2])] == t2
            })
            .map(|(_, (d, _))| d.clone())
            .unwrap()
    };
    assert_eq!(find("loop", "test"), range(4, 255));
    assert_eq!(find("test", "loop"), range(0, 4));
    assert_eq!(find("skip", "test"), range(0, 3));
    assert_eq!(find("test", "skip"), range(5, 255));
}

fn true_loop() -> setmc::ltl::BuchiAutomaton {
    automaton(2, &[(0, Label::TRUE, 1), (1, Label::TRUE, 1)], &[])
}

#[test]
fn countdown_counts() {
    let p = with_automaton(&read_model("countdown.cdve"), &[], true_loop());
    let sym = reachable(&p.sym());
    let exp = reachable(&p.exp());
    let count = |states: &[MultiState], loc: &str| {
        states.iter().filter(|s| locations(&p, s)[0] == loc).count()
    };
    assert_eq!(count(&sym, "head"), 246);
    assert_eq!(count(&sym, "body"), 245);
    assert_eq!(count(&sym, "exit"), 2);
    assert_eq!(count(&exp, "head"), 256);
    assert_eq!(count(&exp, "body"), 245);
    assert_eq!(count(&exp, "exit"), 11);

    let heads: BTreeSet<Vec<u16>> = sym
        .iter()
        .filter(|s| locations(&p, s)[0] == "body")
        .map(|s| s.data.projection(0))
        .take(2)
        .flatten()
        .map(|v| vec![v])
        .collect();
    assert!(heads.is_subset(&range(11, 255)));
}

#[test]
fn countdown_chain() {
    let p = with_automaton(&read_model("countdown.cdve"), &[], true_loop());
    let sym = p.sym();
    let s0 = sym.initial_states().unwrap().remove(0);
    let body = sym
        .successors(&s0)
        .unwrap()
        .into_iter()
        .map(|(s, _)| s)
        .find(|s| locations(&p, s)[0] == "body")
        .unwrap();
    assert_eq!(body.data.projection(0), (11..=255).collect::<Vec<_>>());
    let (head, _) = sym.successors(&body).unwrap().remove(0);
    assert_eq!(head.data.projection(0), (10..=254).collect::<Vec<_>>());
}

#[test]
fn trivial_property_holds() {
    let p = product(&read_model("countdown.cdve"), Some("trivial"), ExploreOptions::default());
    let limits = setmc::cycledetect::SearchLimits::default();
    assert!(setmc::cycledetect::ndfs(&p.sym(), limits).unwrap().holds);
    assert!(setmc::cycledetect::ndfs(&p.exp(), limits).unwrap().holds);
}

#[test]
fn counter_literal_automaton() {
    // init -> 1 on anything, 1 loops while x == 1; 1 accepting.
    let a = automaton(2, &[(0, Label::TRUE, 1), (1, lit(0, true), 1)], &[1]);
    let p = with_automaton(&read_model("counter.cdve"), &[("one", "x == 1")], a);
    let sym = reachable(&p.sym());
    assert_eq!(sym.len(), 3);
    let transitions: usize = sym.iter().map(|s| p.sym().successors(s).unwrap().len()).sum();
    assert_eq!(transitions, 3);
    assert_eq!(reachable(&p.exp()).len(), 3 * 256);
}

#[test]
fn grouping_matches_brute_force_on_bundled_models() {
    let mut products = vec![
        threads(),
        with_automaton(&read_model("countdown.cdve"), &[], true_loop()),
        product(&read_model("countdown.cdve"), Some("terminates"), ExploreOptions::default()),
        product(&read_model("counter.cdve"), None, ExploreOptions::default()),
        product(&read_model("subsumption.cdve"), None, ExploreOptions::default()),
        product(&read_model("threads.cdve"), None, ExploreOptions::default()),
    ];
    products.extend((1..=4).map(peterson));
    for p in &products {
        let init: std::collections::BTreeMap<_, BTreeSet<Vec<u16>>> = p
            .sym()
            .initial_states()
            .unwrap()
            .into_iter()
            .map(|s| (s.control, s.data.iter().map(<[u16]>::to_vec).collect()))
            .collect();
        assert_eq!(init, brute_initial(p), "{}", p.model.name);
        // The rotating loops of the threads model reach about 190k multi-states.
        for s in reachable_upto(&p.sym(), 3000) {
            assert_eq!(sym_successors(p, &s), brute_successors(p, &s), "{}", p.model.name);
        }
    }
}

#[test]
fn members_satisfy_their_automaton_state_label() {
    for p in [
        product(&read_model("threads.cdve"), None, ExploreOptions::default()),
        peterson(3),
    ] {
        for s in reachable_upto(&p.sym(), 3000) {
            let label = p.buchi.state_labels[s.control.buchi as usize];
            let ctx = setmc::multistate::ControlContext {
                locations: &s.control.locations,
                explicit: &s.control.explicit,
            };
            for m in s.data.iter() {
                assert!(label.matches(p.letter(ctx, m).unwrap()));
            }
        }
    }
}

#[test]
fn peterson_exp_states_are_the_union_of_closed_runs() {
    let r = 4;
    let full = peterson(r);
    let all: BTreeSet<Vec<u8>> = reachable(&full.exp()).iter().map(MultiState::encode).collect();
    let mut union = BTreeSet::new();
    let mut sum = 0;
    let text = setmc::cli::generate_peterson(r).unwrap();
    for l in 0..=r {
        let closed = text.replace(&format!("input int l = 0..{r};"), &format!("input int l = {l}..{l};"));
        assert_ne!(closed, text);
        let p = product(&closed, None, ExploreOptions::default());
        let states = reachable(&p.exp());
        sum += states.len();
        union.extend(states.iter().map(MultiState::encode));
    }
    assert_eq!(all, union);
    assert!(sum >= all.len());
    assert!(reachable(&full.sym()).len() < all.len());
}

#[test]
fn peterson_counter_sets() {
    for r in [1u16, 2, 5] {
        let p = peterson(u32::from(r));
        let sets: BTreeSet<Vec<u16>> = reachable(&p.sym()).iter().map(|s| s.data.projection(0)).collect();
        let full: Vec<u16> = (0..=r).collect();
        let lower: Vec<u16> = (0..r).collect();
        assert_eq!(sets, BTreeSet::from([full, lower]), "r = {r}");
    }
}

#[test]
fn zero_inputs_make_both_views_equal() {
    let text = "
        byte x = 0;
        process P {
            state a, b;
            init a;
            trans a -> b { effect x = (x + 1) % 3; }, b -> a {};
        }
        #property p { ap z = x == 0; ltl G F z; }
    ";
    let p = product(text, None, ExploreOptions::default());
    let sym: Vec<Vec<u8>> = reachable(&p.sym()).iter().map(MultiState::encode).collect();
    let exp: Vec<Vec<u8>> = reachable(&p.exp()).iter().map(MultiState::encode).collect();
    assert_eq!(sym, exp);
    assert!(reachable(&p.sym()).iter().all(|s| s.data == DataSet::singleton(&[])));
}

/// Every exp path of bounded length lifts to a sym path, position by
/// position under the refinement relation.
fn check_path_lifting(p: &Product, k: usize) {
    let (exp, sym) = (p.exp(), p.sym());
    let mut level: BTreeSet<(Vec<u8>, Vec<u8>)> = BTreeSet::new();
    let sym_init = sym.initial_states().unwrap();
    for t in exp.initial_states().unwrap() {
        let lifts: Vec<_> = sym_init.iter().filter(|s| refines(p, &t, s)).collect();
        assert!(!lifts.is_empty());
        for s in lifts {
            level.insert((t.encode(), s.encode()));
        }
    }
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for (te, se) in &level {
            let (t, s) = (exp.decode(te), sym.decode(se));
            let ss = sym.successors(&s).unwrap();
            for (t2, _) in exp.successors(&t).unwrap() {
                let lifts: Vec<_> = ss.iter().filter(|(s2, _)| refines(p, &t2, s2)).collect();
                assert!(!lifts.is_empty(), "{}: exp step without a lift", p.model.name);
                for (s2, _) in lifts {
                    next.insert((t2.encode(), s2.encode()));
                }
            }
        }
        level = next;
    }
}

#[test]
fn random_models_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..60 {
        let f = ltl_gen::random_formula(&mut rng, 3, 2);
        let p = random_product(&mut rng, i, f);
        let sym = reachable(&p.sym());
        for s in &sym {
            assert_eq!(sym_successors(&p, s), brute_successors(&p, s), "model {i}");
        }
        if p.model.input_domain_product() <= 64 {
            let lifted: BTreeSet<Vec<u8>> = sym
                .iter()
                .flat_map(|s| {
                    s.data
                        .iter()
                        .map(|m| MultiState::new(s.control.clone(), DataSet::singleton(m)).encode())
                        .collect::<Vec<_>>()
                })
                .collect();
            let exp: BTreeSet<Vec<u8>> = reachable(&p.exp()).iter().map(MultiState::encode).collect();
            assert_eq!(lifted, exp, "model {i}");
        }
        check_path_lifting(&p, 6);
    }
}

/// Compared on full state spaces; NDFS stops at the first violation, so its
/// counts depend on search order.
#[test]
fn peterson_sym_stores_no_more_than_exp() {
    for r in 2..=8 {
        let p = peterson(r);
        let sym = reachable(&p.sym()).len();
        let exp = reachable(&p.exp()).len();
        assert!(sym <= exp, "r={r}: sym {sym} > exp {exp}");
    }
}
