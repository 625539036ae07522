//! prune / apply / partition over data sets.

use std::collections::BTreeMap;

use crate::model::{eval, Context, EvalError, Expr, InputVar, Value, Width};

use super::DataSet;

/// The non-input part of an evaluation context.
#[derive(Debug, Clone, Copy)]
pub struct ControlContext<'a> {
    pub locations: &'a [u16],
    pub explicit: &'a [u16],
}

struct MemberContext<'a> {
    control: ControlContext<'a>,
    member: &'a [u16],
}

impl Context for MemberContext<'_> {
    fn explicit(&self, slot: usize) -> i64 {
        i64::from(self.control.explicit[slot])
    }

    fn input(&self, index: usize) -> i64 {
        i64::from(self.member[index])
    }

    fn location(&self, process: usize) -> usize {
        usize::from(self.control.locations[process])
    }
}

/// An evaluation error together with the member it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{error} (inputs {evaluation:?})")]
pub struct DataError {
    pub error: EvalError,
    pub evaluation: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("initial data set would hold {cardinality} evaluations, above the cap of {cap}")]
pub struct CapacityError {
    pub cardinality: u128,
    pub cap: u64,
}

pub const DEFAULT_EVAL_CAP: u64 = 1 << 24;

pub fn eval_member(
    e: &Expr,
    ctx: ControlContext<'_>,
    member: &[u16],
) -> Result<Value, DataError> {
    eval(
        e,
        &MemberContext {
            control: ctx,
            member,
        },
    )
    .map_err(|error| DataError {
        error,
        evaluation: member.to_vec(),
    })
}

/// Cartesian product of the input ranges, in canonical order.
pub fn initial_dataset(inputs: &[InputVar], cap: u64) -> Result<DataSet, CapacityError> {
    let cardinality: u128 = inputs.iter().map(|v| u128::from(v.domain_size())).product();
    if cardinality > u128::from(cap) {
        return Err(CapacityError { cardinality, cap });
    }
    let arity = inputs.len();
    let count = cardinality as usize;
    let mut flat = Vec::with_capacity(count * arity);
    let mut cur: Vec<u16> = inputs.iter().map(|v| v.lo).collect();
    for _ in 0..count {
        flat.extend_from_slice(&cur);
        // Odometer increment, last variable fastest.
        for k in (0..arity).rev() {
            if cur[k] < inputs[k].hi {
                cur[k] += 1;
                break;
            }
            cur[k] = inputs[k].lo;
        }
    }
    Ok(DataSet::from_sorted_flat(arity, count, flat))
}

/// Members of `x` on which `e` holds.
pub fn prune(x: &DataSet, e: &Expr, ctx: ControlContext<'_>) -> Result<DataSet, DataError> {
    if !e.mentions_input() {
        let keep = match x.first() {
            Some(m) => eval_member(e, ctx, m)?.as_bool(),
            None => return Ok(x.clone()),
        };
        return Ok(if keep { x.clone() } else { DataSet::empty(x.arity()) });
    }
    let mut err = None;
    let out = x.filter(|m| {
        if err.is_some() {
            return false;
        }
        match eval_member(e, ctx, m) {
            Ok(v) => v.as_bool(),
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Image of `x` under `inputs[target] := value`, wrapped to `width`.
pub fn apply(
    x: &DataSet,
    target: usize,
    width: Width,
    value: &Expr,
    ctx: ControlContext<'_>,
) -> Result<DataSet, DataError> {
    let arity = x.arity();
    assert!(target < arity, "apply target must be an input variable");
    let mut flat = Vec::with_capacity(x.len() * arity);
    for m in x.iter() {
        let v = eval_member(value, ctx, m)?.as_int();
        let start = flat.len();
        flat.extend_from_slice(m);
        flat[start + target] = width.wrap(v);
    }
    Ok(DataSet::from_flat(arity, x.len(), flat))
}

/// Splits `x` by the (unwrapped) value of `e`.
pub fn partition_by(
    x: &DataSet,
    e: &Expr,
    ctx: ControlContext<'_>,
) -> Result<BTreeMap<i64, DataSet>, DataError> {
    let arity = x.arity();
    let mut blocks: BTreeMap<i64, (usize, Vec<u16>)> = BTreeMap::new();
    for m in x.iter() {
        let key = eval_member(e, ctx, m)?.as_int();
        let b = blocks.entry(key).or_default();
        b.0 += 1;
        b.1.extend_from_slice(m);
    }
    Ok(blocks
        .into_iter()
        .map(|(k, (n, flat))| (k, DataSet::from_sorted_flat(arity, n, flat)))
        .collect())
}
