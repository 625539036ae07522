use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelErrorKind {
    Syntax,
    Duplicate,
    Unresolved,
    Type,
    InputInProcess,
    Range,
    ValuePassing,
    Structure,
}

impl ModelErrorKind {
    fn label(self) -> &'static str {
        match self {
            ModelErrorKind::Syntax => "syntax error",
            ModelErrorKind::Duplicate => "duplicate identifier",
            ModelErrorKind::Unresolved => "unresolved reference",
            ModelErrorKind::Type => "type mismatch",
            ModelErrorKind::InputInProcess => "input variable inside process",
            ModelErrorKind::Range => "range error",
            ModelErrorKind::ValuePassing => "value-passing channel",
            ModelErrorKind::Structure => "malformed model",
        }
    }
}

/// Diagnostic produced while parsing or resolving a model.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ModelError {
    pub kind: ModelErrorKind,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ModelError {
    pub fn new(kind: ModelErrorKind, line: u32, col: u32, message: impl Into<String>) -> Self {
        ModelError {
            kind,
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.line,
            self.col,
            self.kind.label(),
            self.message
        )
    }
}
