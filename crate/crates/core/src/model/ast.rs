use super::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Width {
    Byte,
    Int,
}

impl Width {
    pub fn bits(self) -> u32 {
        match self {
            Width::Byte => 8,
            Width::Int => 16,
        }
    }

    pub fn max(self) -> i64 {
        (1i64 << self.bits()) - 1
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Width::Byte => "byte",
            Width::Int => "int",
        }
    }

    /// Two's-complement truncation of a wide value to this width.
    pub fn wrap(self, value: i64) -> u16 {
        value.rem_euclid(1i64 << self.bits()) as u16
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Explicit { init: u16 },
    Input { lo: u16, hi: u16 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub width: Width,
    pub kind: VarKind,
}

impl VarDecl {
    pub fn is_input(&self) -> bool {
        matches!(self.kind, VarKind::Input { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelDecl {
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyncDir {
    Send,
    Recv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SyncSpec {
    pub channel: usize,
    pub dir: SyncDir,
}

/// A resolved variable reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarRef {
    /// Slot in the explicit value vector (globals first, then process locals).
    Explicit(usize),
    /// Position in the evaluation tuple of input variables.
    Input(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub target: VarRef,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionDef {
    pub from: usize,
    pub to: usize,
    pub guard: Expr,
    pub effects: Vec<Assignment>,
    pub sync: Option<SyncSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProcessDef {
    pub name: String,
    pub locals: Vec<VarDecl>,
    pub locations: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<TransitionDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApDecl {
    pub name: String,
    pub expr: Expr,
}

/// A `#property` block: named atomic propositions plus an LTL formula kept as
/// source text (it is parsed against the bindings by the `ltl` module).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropertyBlock {
    pub name: String,
    pub aps: Vec<ApDecl>,
    pub ltl: String,
}

/// Storage description of one explicit variable slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExplicitSlot {
    pub name: String,
    pub owner: Option<usize>,
    pub width: Width,
    pub init: u16,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InputVar {
    pub name: String,
    pub width: Width,
    pub lo: u16,
    pub hi: u16,
}

impl InputVar {
    pub fn domain_size(&self) -> u64 {
        u64::from(self.hi - self.lo) + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model {
    pub name: String,
    pub global_vars: Vec<VarDecl>,
    pub channels: Vec<ChannelDecl>,
    pub processes: Vec<ProcessDef>,
    pub properties: Vec<PropertyBlock>,
    pub explicit_slots: Vec<ExplicitSlot>,
    pub inputs: Vec<InputVar>,
    pub warnings: Vec<String>,
}

impl Model {
    pub fn initial_locations(&self) -> Vec<u16> {
        self.processes.iter().map(|p| p.initial as u16).collect()
    }

    pub fn initial_explicit(&self) -> Vec<u16> {
        self.explicit_slots.iter().map(|s| s.init).collect()
    }

    pub fn var_width(&self, var: VarRef) -> Width {
        match var {
            VarRef::Explicit(slot) => self.explicit_slots[slot].width,
            VarRef::Input(idx) => self.inputs[idx].width,
        }
    }

    pub fn process_index(&self, name: &str) -> Option<usize> {
        self.processes.iter().position(|p| p.name == name)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyBlock> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Qualified display name of a variable as seen from the global scope.
    pub fn var_name(&self, var: VarRef) -> String {
        match var {
            VarRef::Explicit(slot) => {
                let s = &self.explicit_slots[slot];
                match s.owner {
                    Some(p) => format!("{}.{}", self.processes[p].name, s.name),
                    None => s.name.clone(),
                }
            }
            VarRef::Input(idx) => self.inputs[idx].name.clone(),
        }
    }

    /// Product of input-variable domain sizes, saturating.
    pub fn input_domain_product(&self) -> u64 {
        self.inputs
            .iter()
            .fold(1u64, |acc, v| acc.saturating_mul(v.domain_size()))
    }
}
