use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::explore::{Edge, Product};
use crate::model::VarRef;
use crate::multistate::MultiState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceKind {
    /// Single evaluations, replayable in the unreduced product.
    Concrete,
    /// Pruned sets; concretization was not attempted or hit its limit.
    Narrowed,
    /// The lasso as found by the search.
    Raw,
}

impl TraceKind {
    fn name(self) -> &'static str {
        match self {
            TraceKind::Concrete => "concrete",
            TraceKind::Narrowed => "narrowed",
            TraceKind::Raw => "raw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section {
    Stem,
    Cycle,
}

/// One state of a trace and the step fired from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub section: Section,
    /// `process@location`, one per process.
    pub locations: Vec<String>,
    pub vars: Vec<(String, u16)>,
    /// Projection of the data set onto each input variable.
    pub inputs: Vec<(String, Vec<u16>)>,
    /// Number of evaluations in the data set.
    pub evaluations: u64,
    pub buchi: u32,
    pub accepting: bool,
    /// Alternatives separated by ` or `.
    pub fired: String,
}

/// A lasso in printable form. The last cycle line's step leads back to the
/// first cycle line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub model: String,
    pub kind: TraceKind,
    pub lines: Vec<TraceLine>,
}

impl Trace {
    pub fn new(
        product: &Product,
        kind: TraceKind,
        states: &[MultiState],
        edges: &[Edge],
        loop_start: usize,
    ) -> Trace {
        let model = &product.model;
        let lines = states
            .iter()
            .zip(edges)
            .enumerate()
            .map(|(i, (s, e))| TraceLine {
                section: if i < loop_start {
                    Section::Stem
                } else {
                    Section::Cycle
                },
                locations: model
                    .processes
                    .iter()
                    .zip(&s.control.locations)
                    .map(|(p, &l)| format!("{}@{}", p.name, p.locations[usize::from(l)]))
                    .collect(),
                vars: s
                    .control
                    .explicit
                    .iter()
                    .enumerate()
                    .map(|(slot, &v)| (model.var_name(VarRef::Explicit(slot)), v))
                    .collect(),
                inputs: model
                    .inputs
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.name.clone(), s.data.projection(i)))
                    .collect(),
                evaluations: s.data.len() as u64,
                buchi: s.control.buchi,
                accepting: product.is_accepting(s),
                fired: e
                    .steps
                    .iter()
                    .map(|st| product.describe_step(st))
                    .collect::<Vec<_>>()
                    .join(" or "),
            })
            .collect();
        Trace {
            model: model.name.clone(),
            kind,
            lines,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("trace {} {}\n", self.kind.name(), self.model);
        for l in &self.lines {
            let section = match l.section {
                Section::Stem => "[stem] ",
                Section::Cycle => "[cycle]",
            };
            let vars = join_or_dash(l.vars.iter().map(|(n, v)| format!("{n}={v}")));
            let inputs = join_or_dash(
                l.inputs
                    .iter()
                    .map(|(n, set)| format!("{n}={}", format_value_set(set))),
            );
            let _ = writeln!(
                out,
                "{section} {} | {vars} | {inputs} #{} | buchi={}{} | {}",
                l.locations.join(" "),
                l.evaluations,
                l.buchi,
                if l.accepting { " accepting" } else { "" },
                l.fired
            );
        }
        out
    }
}

fn join_or_dash(parts: impl Iterator<Item = String>) -> String {
    let v: Vec<String> = parts.collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(" ")
    }
}

/// Sorted values in range-compressed form: `{0..4,7}`; a single value is
/// printed bare.
pub fn format_value_set(values: &[u16]) -> String {
    if let [v] = values {
        return v.to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j + 1 < values.len() && values[j + 1] == values[j] + 1 {
            j += 1;
        }
        if j >= i + 2 {
            parts.push(format!("{}..{}", values[i], values[j]));
        } else {
            parts.extend(values[i..=j].iter().map(u16::to_string));
        }
        i = j + 1;
    }
    format!("{{{}}}", parts.join(","))
}

pub fn parse_value_set(text: &str) -> Option<Vec<u16>> {
    let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) else {
        return text.parse().ok().map(|v| vec![v]);
    };
    let mut out = Vec::new();
    if inner.is_empty() {
        return Some(out);
    }
    for part in inner.split(',') {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi): (u16, u16) = (lo.parse().ok()?, hi.parse().ok()?);
                if lo > hi {
                    return None;
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().ok()?),
        }
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

/// Parses the output of [`Trace::to_text`].
pub fn parse_text(text: &str) -> Result<Trace, TraceParseError> {
    let err = |line: usize, message: &str| TraceParseError {
        line,
        message: message.to_string(),
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| err(1, "empty trace"))?;
    let mut head = header.split(' ');
    if head.next() != Some("trace") {
        return Err(err(1, "expected `trace` header"));
    }
    let kind = match head.next() {
        Some("concrete") => TraceKind::Concrete,
        Some("narrowed") => TraceKind::Narrowed,
        Some("raw") => TraceKind::Raw,
        _ => return Err(err(1, "unknown trace kind")),
    };
    let model = head.next().ok_or_else(|| err(1, "missing model name"))?.to_string();

    let mut out = Vec::new();
    for (k, line) in lines.enumerate() {
        let no = k + 2;
        let (section, rest) = if let Some(r) = line.strip_prefix("[stem]  ") {
            (Section::Stem, r)
        } else if let Some(r) = line.strip_prefix("[cycle] ") {
            (Section::Cycle, r)
        } else {
            return Err(err(no, "expected `[stem]` or `[cycle]`"));
        };
        let fields: Vec<&str> = rest.splitn(5, " | ").collect();
        let [locs, vars, inputs, buchi, fired] = fields[..] else {
            return Err(err(no, "expected five fields"));
        };
        let pairs = |s: &str| -> Result<Vec<(String, String)>, TraceParseError> {
            if s == "-" {
                return Ok(Vec::new());
            }
            s.split(' ')
                .map(|p| {
                    p.split_once('=')
                        .map(|(a, b)| (a.to_string(), b.to_string()))
                        .ok_or_else(|| err(no, "expected `name=value`"))
                })
                .collect()
        };
        let vars = pairs(vars)?
            .into_iter()
            .map(|(n, v)| v.parse().map(|v| (n, v)).map_err(|_| err(no, "bad variable value")))
            .collect::<Result<Vec<_>, _>>()?;
        let (inputs, count) = inputs
            .rsplit_once(" #")
            .ok_or_else(|| err(no, "missing evaluation count"))?;
        let inputs = pairs(inputs)?
            .into_iter()
            .map(|(n, v)| parse_value_set(&v).map(|v| (n, v)).ok_or_else(|| err(no, "bad value set")))
            .collect::<Result<Vec<_>, _>>()?;
        let evaluations = count.parse().map_err(|_| err(no, "bad evaluation count"))?;
        let (buchi, accepting) = match buchi.strip_suffix(" accepting") {
            Some(b) => (b, true),
            None => (buchi, false),
        };
        let buchi = buchi
            .strip_prefix("buchi=")
            .and_then(|b| b.parse().ok())
            .ok_or_else(|| err(no, "bad automaton state"))?;
        out.push(TraceLine {
            section,
            locations: locs.split(' ').map(str::to_string).collect(),
            vars,
            inputs,
            evaluations,
            buchi,
            accepting,
            fired: fired.to_string(),
        });
    }
    Ok(Trace {
        model,
        kind,
        lines: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_sets() {
        assert_eq!(format_value_set(&[0, 1, 2, 3, 4, 7]), "{0..4,7}");
        assert_eq!(format_value_set(&[3, 4]), "{3,4}");
        assert_eq!(format_value_set(&[9]), "9");
        assert_eq!(format_value_set(&[]), "{}");
        for v in [vec![], vec![9], vec![0, 1, 2, 3, 4, 7], vec![1, 3, 5, 6, 7, 8]] {
            assert_eq!(parse_value_set(&format_value_set(&v)), Some(v));
        }
        assert_eq!(parse_value_set("{4..2}"), None);
    }
}
