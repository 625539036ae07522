//! Recursive-descent parser for `.cdve` models.
//!
//! Parsing happens in two passes: the token stream is first turned into a
//! name-based syntax tree, which is then resolved (names to slots, locations
//! and channels) and type-checked into a [`Model`]. Resolution is a separate
//! pass because location predicates may name processes declared later.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::error::{ModelError, ModelErrorKind};
use super::expr::{BinOp, Expr, Type, UnOp};
use super::lexer::{tokenize, Span, Tok, Token};

#[derive(Debug, Clone)]
enum RawExpr {
    Int(i64, Span),
    Bool(bool, Span),
    Name(String, Span),
    Qualified(String, String, Span),
    At(String, String, Span),
    Unary(UnOp, Box<RawExpr>, Span),
    Binary(BinOp, Box<RawExpr>, Box<RawExpr>, Span),
}

impl RawExpr {
    fn span(&self) -> Span {
        match self {
            RawExpr::Int(_, s)
            | RawExpr::Bool(_, s)
            | RawExpr::Name(_, s)
            | RawExpr::Qualified(_, _, s)
            | RawExpr::At(_, _, s)
            | RawExpr::Unary(_, _, s)
            | RawExpr::Binary(_, _, _, s) => *s,
        }
    }
}

#[derive(Debug)]
struct RawVar {
    name: String,
    span: Span,
    width: Width,
    input: bool,
    init: Option<i64>,
    range: Option<(i64, i64)>,
}

#[derive(Debug)]
struct RawTrans {
    from: (String, Span),
    to: (String, Span),
    guard: Option<RawExpr>,
    sync: Option<(String, SyncDir, Span)>,
    effects: Vec<(String, Span, RawExpr)>,
}

#[derive(Debug)]
struct RawProcess {
    name: String,
    span: Span,
    locals: Vec<RawVar>,
    states: Vec<(String, Span)>,
    init: Option<(String, Span)>,
    trans: Vec<RawTrans>,
}

#[derive(Debug)]
struct RawProperty {
    name: String,
    span: Span,
    aps: Vec<(String, Span, RawExpr)>,
    ltl: String,
}

#[derive(Debug, Default)]
struct RawModel {
    name: Option<String>,
    vars: Vec<RawVar>,
    channels: Vec<(String, Span)>,
    processes: Vec<RawProcess>,
    properties: Vec<RawProperty>,
}

fn err(kind: ModelErrorKind, span: Span, msg: impl Into<String>) -> ModelError {
    ModelError::new(kind, span.line, span.col, msg)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ModelError> {
        Ok(Parser {
            src,
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> ModelError {
        err(
            ModelErrorKind::Syntax,
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ModelError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            let wanted = tok.describe();
            Err(self.unexpected(&wanted))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Span, ModelError> {
        if self.is_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ModelError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                let span = self.bump().span;
                Ok((s, span))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn int(&mut self) -> Result<(i64, Span), ModelError> {
        match *self.peek() {
            Tok::Int(v) => {
                let span = self.bump().span;
                Ok((v, span))
            }
            _ => Err(self.unexpected("integer literal")),
        }
    }

    fn model(&mut self) -> Result<RawModel, ModelError> {
        let mut m = RawModel::default();
        if self.eat_keyword("model") {
            m.name = Some(self.ident()?.0);
            self.expect(Tok::Semi)?;
        }
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Hash => m.properties.push(self.property()?),
                Tok::Ident(kw) => match kw.as_str() {
                    "byte" | "int" | "input" => {
                        let input_span = self.span();
                        let vars = self.var_decl()?;
                        for v in &vars {
                            if !v.input && v.range.is_some() {
                                return Err(err(
                                    ModelErrorKind::Syntax,
                                    input_span,
                                    "ranges are only allowed on `input` variables",
                                ));
                            }
                        }
                        m.vars.extend(vars);
                    }
                    "channel" => {
                        self.bump();
                        loop {
                            m.channels.push(self.ident()?);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                        self.expect(Tok::Semi)?;
                    }
                    "process" => m.processes.push(self.process()?),
                    "system" => {
                        // DVE compatibility: `system async;`
                        self.bump();
                        let (kind, span) = self.ident()?;
                        if kind != "async" {
                            return Err(err(
                                ModelErrorKind::Syntax,
                                span,
                                "only `system async;` is supported",
                            ));
                        }
                        self.expect(Tok::Semi)?;
                    }
                    _ => return Err(self.unexpected("declaration")),
                },
                _ => return Err(self.unexpected("declaration")),
            }
        }
        Ok(m)
    }

    fn var_decl(&mut self) -> Result<Vec<RawVar>, ModelError> {
        let input = self.eat_keyword("input");
        let width = if self.eat_keyword("byte") {
            Width::Byte
        } else if self.eat_keyword("int") {
            Width::Int
        } else {
            return Err(self.unexpected("`byte` or `int`"));
        };
        let mut out = Vec::new();
        loop {
            let (name, span) = self.ident()?;
            let mut var = RawVar {
                name,
                span,
                width,
                input,
                init: None,
                range: None,
            };
            if input {
                self.expect(Tok::Assign)?;
                let (lo, _) = self.int()?;
                self.expect(Tok::DotDot)?;
                let (hi, _) = self.int()?;
                var.range = Some((lo, hi));
            } else if self.eat(&Tok::Assign) {
                if *self.peek() == Tok::Minus {
                    return Err(err(
                        ModelErrorKind::Range,
                        self.span(),
                        format!("initial value of `{}` must be non-negative", var.name),
                    ));
                }
                let (v, _) = self.int()?;
                if *self.peek() == Tok::DotDot {
                    return Err(err(
                        ModelErrorKind::Syntax,
                        self.span(),
                        format!("`{}` has a range but is not declared `input`", var.name),
                    ));
                }
                var.init = Some(v);
            }
            out.push(var);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Semi)?;
        Ok(out)
    }

    fn process(&mut self) -> Result<RawProcess, ModelError> {
        self.expect_keyword("process")?;
        let (name, span) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut p = RawProcess {
            name,
            span,
            locals: Vec::new(),
            states: Vec::new(),
            init: None,
            trans: Vec::new(),
        };
        while self.is_keyword("byte") || self.is_keyword("int") || self.is_keyword("input") {
            let decl_span = self.span();
            let vars = self.var_decl()?;
            if let Some(v) = vars.iter().find(|v| v.input) {
                return Err(err(
                    ModelErrorKind::InputInProcess,
                    decl_span,
                    format!(
                        "`{}` is declared `input` inside process `{}`; input variables must be global",
                        v.name, p.name
                    ),
                ));
            }
            p.locals.extend(vars);
        }
        self.expect_keyword("state")?;
        loop {
            p.states.push(self.ident()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Semi)?;
        self.expect_keyword("init")?;
        p.init = Some(self.ident()?);
        self.expect(Tok::Semi)?;
        if self.eat_keyword("trans") {
            loop {
                p.trans.push(self.transition()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        }
        self.expect(Tok::RBrace)?;
        Ok(p)
    }

    fn transition(&mut self) -> Result<RawTrans, ModelError> {
        let from = self.ident()?;
        self.expect(Tok::Arrow)?;
        let to = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut t = RawTrans {
            from,
            to,
            guard: None,
            sync: None,
            effects: Vec::new(),
        };
        if self.eat_keyword("guard") {
            t.guard = Some(self.expr()?);
            self.expect(Tok::Semi)?;
        }
        if self.is_keyword("sync") {
            self.bump();
            let (chan, span) = self.ident()?;
            let dir = if self.eat(&Tok::Bang) {
                SyncDir::Send
            } else if self.eat(&Tok::Question) {
                SyncDir::Recv
            } else {
                return Err(self.unexpected("`!` or `?`"));
            };
            if *self.peek() != Tok::Semi {
                return Err(err(
                    ModelErrorKind::ValuePassing,
                    self.span(),
                    format!("channel `{chan}`: only rendezvous without values is supported"),
                ));
            }
            self.bump();
            t.sync = Some((chan, dir, span));
        }
        if self.eat_keyword("effect") {
            loop {
                let (target, span) = self.ident()?;
                self.expect(Tok::Assign)?;
                let value = self.expr()?;
                t.effects.push((target, span, value));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        }
        self.expect(Tok::RBrace)?;
        Ok(t)
    }

    fn property(&mut self) -> Result<RawProperty, ModelError> {
        self.expect(Tok::Hash)?;
        self.expect_keyword("property")?;
        let (name, span) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut aps = Vec::new();
        while self.eat_keyword("ap") {
            let (ap, ap_span) = self.ident()?;
            self.expect(Tok::Assign)?;
            let e = self.expr()?;
            self.expect(Tok::Semi)?;
            aps.push((ap, ap_span, e));
        }
        self.expect_keyword("ltl")?;
        let start = self.span().start;
        while !matches!(self.peek(), Tok::Semi | Tok::Eof | Tok::RBrace) {
            self.bump();
        }
        let end = self.span().start;
        let ltl = normalize_ws(&self.src[start..end]);
        if ltl.is_empty() {
            return Err(self.unexpected("LTL formula"));
        }
        self.expect(Tok::Semi)?;
        self.expect(Tok::RBrace)?;
        Ok(RawProperty {
            name,
            span,
            aps,
            ltl,
        })
    }

    fn expr(&mut self) -> Result<RawExpr, ModelError> {
        self.binary(1)
    }

    fn binop(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::OrOr => BinOp::Or,
            Tok::AndAnd => BinOp::And,
            Tok::Eq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            Tok::Percent => BinOp::Mod,
            _ => return None,
        })
    }

    /// Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> Result<RawExpr, ModelError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            let span = self.bump().span;
            let rhs = self.binary(prec + 1)?;
            lhs = RawExpr::Binary(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<RawExpr, ModelError> {
        let span = self.span();
        if self.eat(&Tok::Minus) {
            return Ok(RawExpr::Unary(UnOp::Neg, Box::new(self.unary()?), span));
        }
        if self.eat(&Tok::Bang) {
            return Ok(RawExpr::Unary(UnOp::Not, Box::new(self.unary()?), span));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<RawExpr, ModelError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(RawExpr::Int(v, span))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                Ok(RawExpr::Bool(s == "true", span))
            }
            Tok::Ident(_) => {
                let (name, span) = self.ident()?;
                match (self.peek(), self.peek_at(1)) {
                    (Tok::At, Tok::Ident(_)) => {
                        self.bump();
                        let (loc, _) = self.ident()?;
                        Ok(RawExpr::At(name, loc, span))
                    }
                    (Tok::Dot, Tok::Ident(_)) => {
                        self.bump();
                        let (var, _) = self.ident()?;
                        Ok(RawExpr::Qualified(name, var, span))
                    }
                    _ => Ok(RawExpr::Name(name, span)),
                }
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}

const RESERVED: &[&str] = &[
    "model", "byte", "int", "input", "channel", "process", "state", "init", "trans", "guard",
    "sync", "effect", "system", "true", "false",
];

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Name tables used while resolving expressions.
struct Symbols {
    globals: HashMap<String, VarRef>,
    /// Per process: local name -> explicit slot.
    locals: Vec<HashMap<String, usize>>,
    processes: HashMap<String, usize>,
    locations: Vec<HashMap<String, usize>>,
}

#[derive(Clone, Copy)]
enum Scope {
    Global,
    Process(usize),
}

impl Symbols {
    fn resolve(&self, raw: &RawExpr, scope: Scope) -> Result<Expr, ModelError> {
        Ok(match raw {
            RawExpr::Int(v, _) => Expr::Int(*v),
            RawExpr::Bool(b, _) => Expr::Bool(*b),
            RawExpr::Name(name, span) => Expr::Var(self.lookup_var(name, *span, scope)?),
            RawExpr::Qualified(proc_name, var, span) => {
                let p = self.process(proc_name, *span)?;
                let slot = self.locals[p].get(var).ok_or_else(|| {
                    err(
                        ModelErrorKind::Unresolved,
                        *span,
                        format!("process `{proc_name}` has no variable `{var}`"),
                    )
                })?;
                Expr::Var(VarRef::Explicit(*slot))
            }
            RawExpr::At(proc_name, loc, span) => {
                let p = self.process(proc_name, *span)?;
                let l = self.locations[p].get(loc).ok_or_else(|| {
                    err(
                        ModelErrorKind::Unresolved,
                        *span,
                        format!("process `{proc_name}` has no state `{loc}`"),
                    )
                })?;
                Expr::At {
                    process: p,
                    location: *l,
                }
            }
            RawExpr::Unary(op, inner, span) => {
                let e = self.resolve(inner, scope)?;
                let want = match op {
                    UnOp::Neg => Type::Int,
                    UnOp::Not => Type::Bool,
                };
                check_type(&e, want, *span)?;
                Expr::unary(*op, e)
            }
            RawExpr::Binary(op, l, r, span) => {
                let le = self.resolve(l, scope)?;
                let re = self.resolve(r, scope)?;
                match op {
                    BinOp::And | BinOp::Or => {
                        check_type(&le, Type::Bool, l.span())?;
                        check_type(&re, Type::Bool, r.span())?;
                    }
                    BinOp::Eq | BinOp::Ne => {
                        if le.ty() != re.ty() {
                            return Err(err(
                                ModelErrorKind::Type,
                                *span,
                                format!("operands of `{}` have different types", op.symbol()),
                            ));
                        }
                    }
                    _ => {
                        check_type(&le, Type::Int, l.span())?;
                        check_type(&re, Type::Int, r.span())?;
                    }
                }
                Expr::binary(*op, le, re)
            }
        })
    }

    fn lookup_var(&self, name: &str, span: Span, scope: Scope) -> Result<VarRef, ModelError> {
        if let Scope::Process(p) = scope {
            if let Some(slot) = self.locals[p].get(name) {
                return Ok(VarRef::Explicit(*slot));
            }
        }
        self.globals.get(name).copied().ok_or_else(|| {
            err(
                ModelErrorKind::Unresolved,
                span,
                format!("unknown variable `{name}`"),
            )
        })
    }

    fn process(&self, name: &str, span: Span) -> Result<usize, ModelError> {
        self.processes.get(name).copied().ok_or_else(|| {
            err(
                ModelErrorKind::Unresolved,
                span,
                format!("unknown process `{name}`"),
            )
        })
    }
}

fn check_type(e: &Expr, want: Type, span: Span) -> Result<(), ModelError> {
    if e.ty() == want {
        Ok(())
    } else {
        let name = |t: Type| match t {
            Type::Int => "integer",
            Type::Bool => "Boolean",
        };
        Err(err(
            ModelErrorKind::Type,
            span,
            format!("expected {} expression, found {}", name(want), name(e.ty())),
        ))
    }
}

fn check_var(v: &RawVar) -> Result<VarDecl, ModelError> {
    let max = v.width.max();
    let kind = if let Some((lo, hi)) = v.range {
        if lo > hi {
            return Err(err(
                ModelErrorKind::Range,
                v.span,
                format!("range of `{}` is empty ({lo} > {hi})", v.name),
            ));
        }
        if hi > max {
            return Err(err(
                ModelErrorKind::Range,
                v.span,
                format!(
                    "range of `{}` exceeds {} bounds 0..{max}",
                    v.name,
                    v.width.keyword()
                ),
            ));
        }
        VarKind::Input {
            lo: lo as u16,
            hi: hi as u16,
        }
    } else {
        let init = v.init.unwrap_or(0);
        if init > max {
            return Err(err(
                ModelErrorKind::Range,
                v.span,
                format!(
                    "initial value {init} of `{}` does not fit in {}",
                    v.name,
                    v.width.keyword()
                ),
            ));
        }
        VarKind::Explicit { init: init as u16 }
    };
    Ok(VarDecl {
        name: v.name.clone(),
        width: v.width,
        kind,
    })
}

fn resolve_model(raw: RawModel) -> Result<Model, ModelError> {
    if raw.processes.is_empty() {
        return Err(ModelError::new(
            ModelErrorKind::Structure,
            1,
            1,
            "a model needs at least one process",
        ));
    }

    let mut global_names: HashSet<String> = HashSet::new();
    let mut globals = HashMap::new();
    let mut global_vars = Vec::new();
    let mut explicit_slots = Vec::new();
    let mut inputs = Vec::new();
    for v in &raw.vars {
        if !global_names.insert(v.name.clone()) {
            return Err(err(
                ModelErrorKind::Duplicate,
                v.span,
                format!("`{}` is already declared", v.name),
            ));
        }
        let decl = check_var(v)?;
        match decl.kind {
            VarKind::Explicit { init } => {
                globals.insert(v.name.clone(), VarRef::Explicit(explicit_slots.len()));
                explicit_slots.push(ExplicitSlot {
                    name: v.name.clone(),
                    owner: None,
                    width: v.width,
                    init,
                });
            }
            VarKind::Input { lo, hi } => {
                globals.insert(v.name.clone(), VarRef::Input(inputs.len()));
                inputs.push(InputVar {
                    name: v.name.clone(),
                    width: v.width,
                    lo,
                    hi,
                });
            }
        }
        global_vars.push(decl);
    }

    let mut channel_index = HashMap::new();
    let mut channels = Vec::new();
    for (name, span) in &raw.channels {
        if !global_names.insert(name.clone()) {
            return Err(err(
                ModelErrorKind::Duplicate,
                *span,
                format!("`{name}` is already declared"),
            ));
        }
        channel_index.insert(name.clone(), channels.len());
        channels.push(ChannelDecl { name: name.clone() });
    }

    let mut processes_idx = HashMap::new();
    let mut locals = Vec::new();
    let mut locations = Vec::new();
    let mut local_decls = Vec::new();
    for (pi, p) in raw.processes.iter().enumerate() {
        if processes_idx.insert(p.name.clone(), pi).is_some() {
            return Err(err(
                ModelErrorKind::Duplicate,
                p.span,
                format!("process `{}` is already declared", p.name),
            ));
        }
        let mut names = HashMap::new();
        let mut decls = Vec::new();
        for v in &p.locals {
            if names.contains_key(&v.name) || global_names.contains(&v.name) {
                return Err(err(
                    ModelErrorKind::Duplicate,
                    v.span,
                    format!("`{}` is already declared", v.name),
                ));
            }
            let decl = check_var(v)?;
            let VarKind::Explicit { init } = decl.kind else {
                unreachable!("input locals are rejected by the parser")
            };
            names.insert(v.name.clone(), explicit_slots.len());
            explicit_slots.push(ExplicitSlot {
                name: v.name.clone(),
                owner: Some(pi),
                width: v.width,
                init,
            });
            decls.push(decl);
        }
        locals.push(names);
        local_decls.push(decls);

        let mut locs = HashMap::new();
        for (i, (s, span)) in p.states.iter().enumerate() {
            if locs.insert(s.clone(), i).is_some() {
                return Err(err(
                    ModelErrorKind::Duplicate,
                    *span,
                    format!("state `{s}` is already declared in `{}`", p.name),
                ));
            }
        }
        if p.states.len() > usize::from(u16::MAX) {
            return Err(err(ModelErrorKind::Structure, p.span, "too many states"));
        }
        locations.push(locs);
    }

    let syms = Symbols {
        globals,
        locals,
        processes: processes_idx,
        locations,
    };

    let mut warnings = Vec::new();
    let mut processes = Vec::new();
    for (pi, (p, decls)) in raw.processes.iter().zip(local_decls).enumerate() {
        let locs = &syms.locations[pi];
        let loc = |(name, span): &(String, Span)| {
            locs.get(name).copied().ok_or_else(|| {
                err(
                    ModelErrorKind::Unresolved,
                    *span,
                    format!("process `{}` has no state `{name}`", p.name),
                )
            })
        };
        let initial = loc(p.init.as_ref().expect("parser requires init"))?;
        let mut transitions = Vec::new();
        for t in &p.trans {
            let from = loc(&t.from)?;
            let to = loc(&t.to)?;
            let guard = match &t.guard {
                Some(g) => {
                    let e = syms.resolve(g, Scope::Process(pi))?;
                    check_type(&e, Type::Bool, g.span())?;
                    if e.mentions_location() {
                        warnings.push(format!(
                            "guard of `{}` transition {} -> {} reads a process location",
                            p.name, t.from.0, t.to.0
                        ));
                    }
                    e
                }
                None => Expr::Bool(true),
            };
            let sync = match &t.sync {
                Some((chan, dir, span)) => {
                    let channel = *channel_index.get(chan).ok_or_else(|| {
                        err(
                            ModelErrorKind::Unresolved,
                            *span,
                            format!("unknown channel `{chan}`"),
                        )
                    })?;
                    Some(SyncSpec { channel, dir: *dir })
                }
                None => None,
            };
            let mut effects = Vec::new();
            for (target, span, value) in &t.effects {
                let target = syms.lookup_var(target, *span, Scope::Process(pi))?;
                let value = syms.resolve(value, Scope::Process(pi))?;
                check_type(&value, Type::Int, *span)?;
                effects.push(Assignment { target, value });
            }
            transitions.push(TransitionDef {
                from,
                to,
                guard,
                effects,
                sync,
            });
        }
        processes.push(ProcessDef {
            name: p.name.clone(),
            locals: decls,
            locations: p.states.iter().map(|(s, _)| s.clone()).collect(),
            initial,
            transitions,
        });
    }

    let mut properties = Vec::new();
    let mut prop_names = HashSet::new();
    for prop in &raw.properties {
        if !prop_names.insert(prop.name.clone()) {
            return Err(err(
                ModelErrorKind::Duplicate,
                prop.span,
                format!("property `{}` is already declared", prop.name),
            ));
        }
        let mut ap_names = HashSet::new();
        let mut aps = Vec::new();
        for (name, span, raw_e) in &prop.aps {
            if !ap_names.insert(name.clone()) {
                return Err(err(
                    ModelErrorKind::Duplicate,
                    *span,
                    format!("proposition `{name}` is already declared"),
                ));
            }
            let expr = syms.resolve(raw_e, Scope::Global)?;
            check_type(&expr, Type::Bool, raw_e.span())?;
            aps.push(ApDecl {
                name: name.clone(),
                expr,
            });
        }
        properties.push(PropertyBlock {
            name: prop.name.clone(),
            aps,
            ltl: prop.ltl.clone(),
        });
    }

    Ok(Model {
        name: raw.name.unwrap_or_else(|| "model".to_string()),
        global_vars,
        channels,
        processes,
        properties,
        explicit_slots,
        inputs,
        warnings,
    })
}

/// Parses and resolves model text.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let mut p = Parser::new(text)?;
    let raw = p.model()?;
    resolve_model(raw)
}

/// Parses a Boolean expression in the global scope of `model`, as used for
/// atomic propositions supplied outside the model file.
pub fn parse_global_expr(model: &Model, text: &str) -> Result<Expr, ModelError> {
    let mut p = Parser::new(text)?;
    let raw = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of expression"));
    }
    let mut globals = HashMap::new();
    for (slot, s) in model.explicit_slots.iter().enumerate() {
        if s.owner.is_none() {
            globals.insert(s.name.clone(), VarRef::Explicit(slot));
        }
    }
    for (i, v) in model.inputs.iter().enumerate() {
        globals.insert(v.name.clone(), VarRef::Input(i));
    }
    let mut locals = vec![HashMap::new(); model.processes.len()];
    for (slot, s) in model.explicit_slots.iter().enumerate() {
        if let Some(owner) = s.owner {
            locals[owner].insert(s.name.clone(), slot);
        }
    }
    let syms = Symbols {
        globals,
        locals,
        processes: model
            .processes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), i))
            .collect(),
        locations: model
            .processes
            .iter()
            .map(|p| {
                p.locations
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), i))
                    .collect()
            })
            .collect(),
    };
    let e = syms.resolve(&raw, Scope::Global)?;
    check_type(&e, Type::Bool, raw.span())?;
    Ok(e)
}
