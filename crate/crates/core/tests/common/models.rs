#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write;

use rand::Rng;
use setmc::cli::{generate_peterson, resolve_property, PropertySource};
use setmc::explore::{ExploreOptions, Product, Step, TransitionSystem};
use setmc::ltl::{BuchiAutomaton, BuchiTransition, Label, Ltl, Property};
use setmc::model::{parse_global_expr, parse_model};
use setmc::multistate::{ControlPart, MultiState};

pub fn models_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

pub fn read_model(file: &str) -> String {
    std::fs::read_to_string(models_dir().join(file)).unwrap()
}

pub fn product(text: &str, property: Option<&str>, options: ExploreOptions) -> Product {
    let model = parse_model(text).unwrap();
    let src = PropertySource {
        property: property.map(str::to_string),
        ..Default::default()
    };
    let p = resolve_property(&model, &src).unwrap();
    Product::new(model, p, options)
}

pub fn peterson(r: u32) -> Product {
    product(&generate_peterson(r).unwrap(), None, ExploreOptions::default())
}

/// A model with a hand-written automaton over the given AP bindings.
pub fn with_automaton(text: &str, aps: &[(&str, &str)], buchi: BuchiAutomaton) -> Product {
    let model = parse_model(text).unwrap();
    let property = Property {
        ap_names: aps.iter().map(|(n, _)| n.to_string()).collect(),
        ap_exprs: aps
            .iter()
            .map(|(_, e)| parse_global_expr(&model, e).unwrap())
            .collect(),
        formula: Ltl::True,
    };
    Product::with_automaton(model, property, buchi, ExploreOptions::default())
}

pub fn lit(ap: usize, positive: bool) -> Label {
    if positive {
        Label { pos: 1 << ap, neg: 0 }
    } else {
        Label { pos: 0, neg: 1 << ap }
    }
}

/// `init --label0--> 1`, with the given transitions among states `1..n`.
pub fn automaton(num_states: u32, edges: &[(u32, Label, u32)], accepting: &[u32]) -> BuchiAutomaton {
    let transitions = edges
        .iter()
        .map(|&(src, label, dst)| BuchiTransition { src, label, dst })
        .collect();
    let acc = (0..num_states).map(|s| accepting.contains(&s)).collect();
    BuchiAutomaton::from_parts(num_states, 0, transitions, acc, vec![Label::TRUE; num_states as usize])
}

/// All states reachable in a transition system, breadth first.
pub fn reachable<T: TransitionSystem>(ts: &T) -> Vec<T::State>
where
    T::Error: std::fmt::Debug,
{
    reachable_upto(ts, usize::MAX)
}

/// The first `limit` states in breadth-first order.
pub fn reachable_upto<T: TransitionSystem>(ts: &T, limit: usize) -> Vec<T::State>
where
    T::Error: std::fmt::Debug,
{
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in ts.initial_states().unwrap() {
        if seen.insert(ts.encode(&s)) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        if out.len() == limit {
            break;
        }
        for (t, _) in ts.successors(&s).unwrap() {
            if seen.insert(ts.encode(&t)) {
                queue.push_back(t);
            }
        }
        out.push(s);
    }
    out
}

pub type Grouped = BTreeMap<ControlPart, (BTreeSet<Vec<u16>>, BTreeSet<Step>)>;

/// Successors of every member, computed one evaluation at a time and grouped
/// by control part.
pub fn brute_successors(p: &Product, s: &MultiState) -> Grouped {
    let mut out = Grouped::new();
    for m in s.data.iter() {
        for mv in p.concrete_moves(&s.control, m).unwrap() {
            let g = out.entry(mv.control).or_default();
            g.0.insert(mv.inputs);
            g.1.insert(mv.step);
        }
    }
    out
}

pub fn sym_successors(p: &Product, s: &MultiState) -> Grouped {
    let mut out = Grouped::new();
    for (t, e) in p.sym().successors(s).unwrap() {
        let members = t.data.iter().map(<[u16]>::to_vec).collect();
        let steps = e.steps.into_iter().collect();
        assert!(out.insert(t.control, (members, steps)).is_none(), "duplicate control part");
    }
    out
}

pub fn brute_initial(p: &Product) -> BTreeMap<ControlPart, BTreeSet<Vec<u16>>> {
    let mut out: BTreeMap<ControlPart, BTreeSet<Vec<u16>>> = BTreeMap::new();
    for s in p.exp().initial_states().unwrap() {
        out.entry(s.control)
            .or_default()
            .insert(s.data.first().unwrap().to_vec());
    }
    out
}

fn atom(rng: &mut impl Rng, vars: &[String]) -> String {
    if vars.is_empty() || rng.random_bool(0.3) {
        rng.random_range(0..8u32).to_string()
    } else {
        vars[rng.random_range(0..vars.len())].clone()
    }
}

fn comparison(rng: &mut impl Rng, vars: &[String]) -> String {
    let ops = ["<", "<=", "==", "!=", ">", ">="];
    let op = ops[rng.random_range(0..ops.len())];
    format!("{} {op} {}", atom(rng, vars), atom(rng, vars))
}

fn guard(rng: &mut impl Rng, vars: &[String]) -> String {
    match rng.random_range(0..4) {
        0 => format!("{} && {}", comparison(rng, vars), comparison(rng, vars)),
        1 => format!("{} || {}", comparison(rng, vars), comparison(rng, vars)),
        _ => comparison(rng, vars),
    }
}

fn value(rng: &mut impl Rng, vars: &[String], modulus: u32) -> String {
    let ops = ["+", "-", "*"];
    let op = ops[rng.random_range(0..ops.len())];
    format!("({} {op} {}) % {modulus}", atom(rng, vars), atom(rng, vars))
}

fn ap_expr(rng: &mut impl Rng, locs: &[usize], vars: &[String]) -> String {
    if rng.random_bool(0.4) {
        let p = rng.random_range(0..locs.len());
        format!("P{p}@l{}", rng.random_range(0..locs[p]))
    } else {
        comparison(rng, vars)
    }
}

/// A random closed model: at most three processes and two input variables
/// with domains of at most 16 values, plus an optional rendezvous channel.
/// Returns the text and two AP expressions.
pub fn random_model(rng: &mut impl Rng, index: usize) -> (String, [String; 2]) {
    let n_explicit = rng.random_range(0..=2usize);
    let n_inputs = rng.random_range(1..=2usize);
    let n_procs = rng.random_range(1..=3usize);
    let explicit: Vec<String> = (0..n_explicit).map(|i| format!("x{i}")).collect();
    let inputs: Vec<String> = (0..n_inputs).map(|i| format!("i{i}")).collect();
    let vars: Vec<String> = explicit.iter().chain(&inputs).cloned().collect();

    let mut text = format!("model random_{index};\n");
    for x in &explicit {
        let _ = writeln!(text, "byte {x} = {};", rng.random_range(0..4u32));
    }
    for i in &inputs {
        let lo = rng.random_range(0..8u32);
        let size = rng.random_range(1..=16u32);
        let _ = writeln!(text, "input byte {i} = {lo}..{};", lo + size - 1);
    }
    let with_channel = n_procs >= 2 && rng.random_bool(0.4);
    if with_channel {
        text.push_str("channel c;\n");
    }
    let mut locs = Vec::new();
    for p in 0..n_procs {
        let n_locs = rng.random_range(2..=3usize);
        locs.push(n_locs);
        let names: Vec<String> = (0..n_locs).map(|l| format!("l{l}")).collect();
        let _ = writeln!(text, "process P{p} {{\n    state {};\n    init l0;\n    trans", names.join(", "));
        let n_trans = rng.random_range(2..=4usize);
        let mut trans = Vec::new();
        for t in 0..n_trans {
            let from = if t < n_locs { t } else { rng.random_range(0..n_locs) };
            let to = rng.random_range(0..n_locs);
            let mut body = String::new();
            if rng.random_bool(0.7) {
                let _ = write!(body, " guard {};", guard(rng, &vars));
            }
            if with_channel && t == 0 && p < 2 {
                let _ = write!(body, " sync c{};", if p == 0 { "!" } else { "?" });
            }
            let n_eff = rng.random_range(0..=2usize);
            let effects: Vec<String> = (0..n_eff)
                .map(|_| {
                    let k = rng.random_range(0..vars.len());
                    let modulus = if k < n_explicit { 4 } else { 16 };
                    format!("{} = {}", vars[k], value(rng, &vars, modulus))
                })
                .collect();
            if !effects.is_empty() {
                let _ = write!(body, " effect {};", effects.join(", "));
            }
            trans.push(format!("        l{from} -> l{to} {{{body} }}"));
        }
        let _ = writeln!(text, "{};\n}}", trans.join(",\n"));
    }
    let aps = [ap_expr(rng, &locs, &vars), ap_expr(rng, &locs, &vars)];
    (text, aps)
}

/// A product of a random model with a random formula over its two APs.
pub fn random_product(rng: &mut impl Rng, index: usize, formula: Ltl) -> Product {
    let (text, aps) = random_model(rng, index);
    let model = parse_model(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let property = Property {
        ap_names: vec!["p0".into(), "p1".into()],
        ap_exprs: aps.iter().map(|a| parse_global_expr(&model, a).unwrap()).collect(),
        formula,
    };
    let options = ExploreOptions {
        self_loop_deadlocks: true,
        ..ExploreOptions::default()
    };
    Product::new(model, property, options)
}
