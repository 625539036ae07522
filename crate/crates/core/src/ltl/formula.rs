//! LTL syntax: parsing, desugaring and printing.

use std::fmt;

/// A formula over {true, p, ¬, ∧, X, U}. Everything else is sugar and is
/// removed by the constructors below.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    Ap(usize),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn tt() -> Ltl {
        Ltl::True
    }

    pub fn ff() -> Ltl {
        Ltl::Not(Box::new(Ltl::True))
    }

    pub fn ap(id: usize) -> Ltl {
        Ltl::Ap(id)
    }

    /// Negation with double negations cancelled.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Ltl {
        match f {
            Ltl::Not(inner) => *inner,
            f => Ltl::Not(Box::new(f)),
        }
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::not(Ltl::and(Ltl::not(a), Ltl::not(b)))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::not(Ltl::and(a, Ltl::not(b)))
    }

    pub fn next(f: Ltl) -> Ltl {
        Ltl::Next(Box::new(f))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Ltl) -> Ltl {
        Ltl::until(Ltl::True, f)
    }

    pub fn always(f: Ltl) -> Ltl {
        Ltl::not(Ltl::eventually(Ltl::not(f)))
    }

    /// Number of operator nodes.
    pub fn size(&self) -> usize {
        match self {
            Ltl::True | Ltl::Ap(_) => 0,
            Ltl::Not(f) | Ltl::Next(f) => 1 + f.size(),
            Ltl::And(a, b) | Ltl::Until(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Largest AP id used, if any.
    pub fn max_ap(&self) -> Option<usize> {
        match self {
            Ltl::True => None,
            Ltl::Ap(i) => Some(*i),
            Ltl::Not(f) | Ltl::Next(f) => f.max_ap(),
            Ltl::And(a, b) | Ltl::Until(a, b) => a.max_ap().max(b.max_ap()),
        }
    }

    /// Prints in the concrete syntax accepted by [`parse_ltl`].
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Shown { f: self, names }
    }
}

/// The property automaton is always built for the negation.
pub fn negate(f: &Ltl) -> Ltl {
    Ltl::not(f.clone())
}

struct Shown<'a> {
    f: &'a Ltl,
    names: &'a [String],
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ltl(out, self.f, self.names, 0)
    }
}

// Levels: 0 top, 1 operand of &&, 2 operand of U, 3 operand of a unary.
fn write_ltl(out: &mut fmt::Formatter<'_>, f: &Ltl, names: &[String], level: u8) -> fmt::Result {
    let own = match f {
        Ltl::And(..) => 1,
        Ltl::Until(..) => 2,
        _ => 3,
    };
    if own < level {
        write!(out, "(")?;
    }
    match f {
        Ltl::True => write!(out, "true")?,
        Ltl::Ap(i) => match names.get(*i) {
            Some(n) => write!(out, "{n}")?,
            None => write!(out, "p{i}")?,
        },
        Ltl::Not(g) if **g == Ltl::True => write!(out, "false")?,
        Ltl::Not(g) => {
            write!(out, "!")?;
            write_ltl(out, g, names, 3)?;
        }
        Ltl::Next(g) => {
            write!(out, "X ")?;
            write_ltl(out, g, names, 3)?;
        }
        Ltl::And(a, b) => {
            write_ltl(out, a, names, 1)?;
            write!(out, " && ")?;
            write_ltl(out, b, names, 2)?;
        }
        Ltl::Until(a, b) => {
            write_ltl(out, a, names, 3)?;
            write!(out, " U ")?;
            write_ltl(out, b, names, 2)?;
        }
    }
    if own < level {
        write!(out, ")")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtlErrorKind {
    Syntax,
    UnboundAp,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("LTL column {col}: {message}")]
pub struct LtlError {
    pub kind: LtlErrorKind,
    /// 1-based character column in the formula text.
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LtlError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '!' => (Tok::Not, 1),
            _ if two == "&&" => (Tok::And, 2),
            _ if two == "||" => (Tok::Or, 2),
            _ if two == "->" => (Tok::Implies, 2),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            _ => {
                return Err(LtlError {
                    kind: LtlErrorKind::Syntax,
                    col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, col));
        i += len;
    }
    out.push((Tok::Eof, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    aps: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn syntax(&self, wanted: &str) -> LtlError {
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&&`".into(),
            Tok::Or => "`||`".into(),
            Tok::Implies => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of formula".into(),
        };
        LtlError {
            kind: LtlErrorKind::Syntax,
            col: self.col(),
            message: format!("expected {wanted}, found {found}"),
        }
    }

    fn implication(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Ltl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Ltl, LtlError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Ltl::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Ltl, LtlError> {
        let mut f = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Ltl::and(f, self.until()?);
        }
        Ok(f)
    }

    fn until(&mut self) -> Result<Ltl, LtlError> {
        let lhs = self.unary()?;
        if self.is_word("U") {
            self.bump();
            let rhs = self.until()?;
            return Ok(Ltl::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ltl, LtlError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Ltl::not(self.unary()?));
        }
        for (w, build) in [
            ("X", Ltl::next as fn(Ltl) -> Ltl),
            ("F", Ltl::eventually),
            ("G", Ltl::always),
        ] {
            if self.is_word(w) {
                self.bump();
                return Ok(build(self.unary()?));
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Ltl, LtlError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.syntax("`)`"));
                }
                self.bump();
                Ok(f)
            }
            Tok::Ident(w) if w == "true" => {
                self.bump();
                Ok(Ltl::tt())
            }
            Tok::Ident(w) if w == "false" => {
                self.bump();
                Ok(Ltl::ff())
            }
            Tok::Ident(w) if !matches!(w.as_str(), "X" | "F" | "G" | "U") => {
                let col = self.col();
                let id = self.aps.iter().position(|a| *a == w).ok_or(LtlError {
                    kind: LtlErrorKind::UnboundAp,
                    col,
                    message: format!("atomic proposition `{w}` is not bound"),
                })?;
                self.bump();
                Ok(Ltl::ap(id))
            }
            _ => Err(self.syntax("operand")),
        }
    }
}

/// Parses `text`; AP `aps[i]` becomes `Ltl::Ap(i)`.
///
/// Precedence from tightest: `! X F G`, `U` (right-assoc), `&&`, `||`,
/// `->` (right-assoc).
pub fn parse_ltl(text: &str, aps: &[&str]) -> Result<Ltl, LtlError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        aps,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::Eof {
        return Err(p.syntax("end of formula"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Ltl {
        parse_ltl(s, &["alpha", "beta", "p", "q"]).unwrap()
    }

    #[test]
    fn always_desugars_to_until() {
        let beta = Ltl::ap(1);
        let expected = Ltl::Not(Box::new(Ltl::until(
            Ltl::True,
            Ltl::Not(Box::new(beta)),
        )));
        assert_eq!(parse("G beta"), expected);
    }

    #[test]
    fn constants() {
        assert_eq!(parse("true"), Ltl::True);
        assert_eq!(parse("false"), Ltl::Not(Box::new(Ltl::True)));
        assert_eq!(parse("!false"), Ltl::True);
    }

    #[test]
    fn missing_operand() {
        let e = parse_ltl("alpha U", &["alpha"]).unwrap_err();
        assert_eq!(e.kind, LtlErrorKind::Syntax);
        assert_eq!(e.col, 8);
    }

    #[test]
    fn unbound_ap() {
        let e = parse_ltl("G gamma", &["alpha"]).unwrap_err();
        assert_eq!(e.kind, LtlErrorKind::UnboundAp);
        assert_eq!(e.col, 3);
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("p U q U p"), parse("p U (q U p)"));
        assert_eq!(parse("p && q U p"), parse("p && (q U p)"));
        assert_eq!(parse("p || q && p"), parse("p || (q && p)"));
        assert_eq!(parse("p -> q -> p"), parse("p -> (q -> p)"));
        assert_eq!(parse("p || q -> p"), parse("(p || q) -> p"));
        assert_eq!(parse("!p U q"), parse("(!p) U q"));
        assert_eq!(parse("X p U q"), parse("(X p) U q"));
        assert_eq!(parse("alpha U !beta"), Ltl::until(Ltl::ap(0), Ltl::not(Ltl::ap(1))));
    }

    #[test]
    fn negation() {
        let g = parse("G beta");
        assert_eq!(negate(&g), Ltl::until(Ltl::True, Ltl::not(Ltl::ap(1))));
        let f = parse("alpha U beta");
        assert_eq!(negate(&f), Ltl::Not(Box::new(f.clone())));
        assert_eq!(negate(&negate(&f)), f);
    }

    #[test]
    fn printing_reparses() {
        let names: Vec<String> = ["alpha", "beta", "p", "q"].map(String::from).to_vec();
        for s in [
            "G (p -> F q)",
            "(p U q) U X !p",
            "X (p && q) && false",
            "!(p U (q && X true))",
        ] {
            let f = parse(s);
            let printed = f.display(&names).to_string();
            assert_eq!(parse(&printed), f, "{s} printed as {printed}");
        }
    }
}
