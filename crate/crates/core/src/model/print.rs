//! Canonical text rendering of models and expressions.

use std::fmt::Write;

use super::ast::*;
use super::expr::{Expr, UnOp};

/// Renders an expression with source names. `scope` is the process whose
/// locals may be referenced unqualified.
pub fn expr_to_string(model: &Model, e: &Expr, scope: Option<usize>) -> String {
    let mut out = String::new();
    write_expr(&mut out, model, e, scope, 0);
    out
}

fn var_text(model: &Model, var: VarRef, scope: Option<usize>) -> String {
    match var {
        VarRef::Explicit(slot) => {
            let s = &model.explicit_slots[slot];
            match s.owner {
                Some(p) if Some(p) != scope => format!("{}.{}", model.processes[p].name, s.name),
                _ => s.name.clone(),
            }
        }
        VarRef::Input(i) => model.inputs[i].name.clone(),
    }
}

fn write_expr(out: &mut String, model: &Model, e: &Expr, scope: Option<usize>, min_prec: u8) {
    match e {
        Expr::Int(v) => {
            let _ = write!(out, "{v}");
        }
        Expr::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Expr::Var(v) => out.push_str(&var_text(model, *v, scope)),
        Expr::At { process, location } => {
            let p = &model.processes[*process];
            let _ = write!(out, "{}@{}", p.name, p.locations[*location]);
        }
        Expr::Unary(op, inner) => {
            out.push(match op {
                UnOp::Neg => '-',
                UnOp::Not => '!',
            });
            // Unary binds tighter than every binary operator.
            write_expr(out, model, inner, scope, 7);
        }
        Expr::Binary(op, l, r) => {
            let prec = op.precedence();
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            write_expr(out, model, l, scope, prec);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, model, r, scope, prec + 1);
            if paren {
                out.push(')');
            }
        }
    }
}

fn var_line(d: &VarDecl) -> String {
    match d.kind {
        VarKind::Explicit { init } => format!("{} {} = {init};", d.width.keyword(), d.name),
        VarKind::Input { lo, hi } => {
            format!("input {} {} = {lo}..{hi};", d.width.keyword(), d.name)
        }
    }
}

/// Canonical rendering; `parse_model(print_model(m)) == m` for every model.
pub fn print_model(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {};", model.name);
    if !model.global_vars.is_empty() {
        out.push('\n');
        for v in &model.global_vars {
            let _ = writeln!(out, "{}", var_line(v));
        }
    }
    if !model.channels.is_empty() {
        out.push('\n');
        for c in &model.channels {
            let _ = writeln!(out, "channel {};", c.name);
        }
    }
    for (pi, p) in model.processes.iter().enumerate() {
        out.push('\n');
        let _ = writeln!(out, "process {} {{", p.name);
        for v in &p.locals {
            let _ = writeln!(out, "    {}", var_line(v));
        }
        let _ = writeln!(out, "    state {};", p.locations.join(", "));
        let _ = writeln!(out, "    init {};", p.locations[p.initial]);
        if !p.transitions.is_empty() {
            let _ = writeln!(out, "    trans");
            for (ti, t) in p.transitions.iter().enumerate() {
                let mut body = Vec::new();
                if t.guard != Expr::Bool(true) {
                    body.push(format!(
                        "guard {};",
                        expr_to_string(model, &t.guard, Some(pi))
                    ));
                }
                if let Some(s) = t.sync {
                    let dir = match s.dir {
                        SyncDir::Send => '!',
                        SyncDir::Recv => '?',
                    };
                    body.push(format!("sync {}{dir};", model.channels[s.channel].name));
                }
                if !t.effects.is_empty() {
                    let effects: Vec<String> = t
                        .effects
                        .iter()
                        .map(|a| {
                            format!(
                                "{} = {}",
                                var_text(model, a.target, Some(pi)),
                                expr_to_string(model, &a.value, Some(pi))
                            )
                        })
                        .collect();
                    body.push(format!("effect {};", effects.join(", ")));
                }
                let body = if body.is_empty() {
                    "{}".to_string()
                } else {
                    format!("{{ {} }}", body.join(" "))
                };
                let sep = if ti + 1 == p.transitions.len() { ";" } else { "," };
                let _ = writeln!(
                    out,
                    "        {} -> {} {body}{sep}",
                    p.locations[t.from], p.locations[t.to]
                );
            }
        }
        out.push_str("}\n");
    }
    for prop in &model.properties {
        out.push('\n');
        let _ = writeln!(out, "#property {} {{", prop.name);
        for ap in &prop.aps {
            let _ = writeln!(
                out,
                "    ap {} = {};",
                ap.name,
                expr_to_string(model, &ap.expr, None)
            );
        }
        let _ = writeln!(out, "    ltl {};", prop.ltl);
        out.push_str("}\n");
    }
    out
}
