use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::PrologError;

/// Operator type: position of the operator (`f`) relative to its arguments,
/// with `x` meaning "strictly lower priority" and `y` "lower or equal".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpType {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
    Xf,
    Yf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixity {
    Prefix,
    Infix,
    Postfix,
}

impl OpType {
    pub fn fixity(self) -> Fixity {
        match self {
            OpType::Xfx | OpType::Xfy | OpType::Yfx => Fixity::Infix,
            OpType::Fy | OpType::Fx => Fixity::Prefix,
            OpType::Xf | OpType::Yf => Fixity::Postfix,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OpType::Xfx => "xfx",
            OpType::Xfy => "xfy",
            OpType::Yfx => "yfx",
            OpType::Fy => "fy",
            OpType::Fx => "fx",
            OpType::Xf => "xf",
            OpType::Yf => "yf",
        }
    }
}

impl FromStr for OpType {
    type Err = PrologError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "xfx" => OpType::Xfx,
            "xfy" => OpType::Xfy,
            "yfx" => OpType::Yfx,
            "fy" => OpType::Fy,
            "fx" => OpType::Fx,
            "xf" => OpType::Xf,
            "yf" => OpType::Yf,
            other => return Err(PrologError::Domain(format!("operator_specifier {}", other))),
        })
    }
}

impl fmt::Display for OpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpDef {
    pub priority: u16,
    pub kind: OpType,
}

impl OpDef {
    /// Maximum priorities of the (left, right) arguments.
    pub fn arg_limits(&self) -> (u16, u16) {
        let p = self.priority;
        match self.kind {
            OpType::Xfx => (p - 1, p - 1),
            OpType::Xfy => (p - 1, p),
            OpType::Yfx => (p, p - 1),
            OpType::Fy => (0, p),
            OpType::Fx => (0, p - 1),
            OpType::Xf => (p - 1, 0),
            OpType::Yf => (p, 0),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
struct OpEntry {
    prefix: Option<OpDef>,
    // infix and postfix share one slot per name
    infix: Option<OpDef>,
}

/// Priority/type declarations that drive both parsing and printing.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTable {
    entries: HashMap<String, OpEntry>,
}

pub const MAX_PRIORITY: u16 = 1200;

impl Default for OperatorTable {
    fn default() -> Self {
        let mut table = OperatorTable {
            entries: HashMap::new(),
        };
        let defaults: &[(u16, OpType, &[&str])] = &[
            (1200, OpType::Xfx, &[":-"]),
            (1200, OpType::Fx, &[":-", "?-"]),
            (1100, OpType::Xfy, &[";"]),
            (1050, OpType::Xfy, &["->"]),
            (1000, OpType::Xfy, &[","]),
            (900, OpType::Fy, &["not"]),
            (
                700,
                OpType::Xfx,
                &["=", "\\=", "is", "=..", "=:=", "=\\=", "<", ">", "=<", ">="],
            ),
            (500, OpType::Yfx, &["+", "-"]),
            (400, OpType::Yfx, &["*", "//"]),
            (200, OpType::Fy, &["-"]),
        ];
        for (priority, kind, names) in defaults {
            for name in names.iter() {
                table
                    .declare(*priority, *kind, name)
                    .expect("default operator table is valid");
            }
        }
        table
    }
}

impl OperatorTable {
    /// An empty table: every name is an ordinary symbol.
    pub fn empty() -> OperatorTable {
        OperatorTable {
            entries: HashMap::new(),
        }
    }

    /// Adds or replaces the entry for `name` in the fixity class of `kind`.
    pub fn declare(&mut self, priority: u16, kind: OpType, name: &str) -> Result<(), PrologError> {
        if !(1..=MAX_PRIORITY).contains(&priority) {
            return Err(PrologError::Domain(format!("operator_priority {}", priority)));
        }
        let def = OpDef { priority, kind };
        let entry = self.entries.entry(name.to_string()).or_default();
        match kind.fixity() {
            Fixity::Prefix => entry.prefix = Some(def),
            Fixity::Infix | Fixity::Postfix => entry.infix = Some(def),
        }
        Ok(())
    }

    pub fn prefix(&self, name: &str) -> Option<OpDef> {
        self.entries.get(name).and_then(|e| e.prefix)
    }

    pub fn infix(&self, name: &str) -> Option<OpDef> {
        self.entries
            .get(name)
            .and_then(|e| e.infix)
            .filter(|d| d.kind.fixity() == Fixity::Infix)
    }

    pub fn postfix(&self, name: &str) -> Option<OpDef> {
        self.entries
            .get(name)
            .and_then(|e| e.infix)
            .filter(|d| d.kind.fixity() == Fixity::Postfix)
    }

    pub fn is_operator(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }
}

/// Functional form of [`OperatorTable::declare`].
pub fn declare_op(
    table: &OperatorTable,
    priority: i64,
    kind: &str,
    name: &str,
) -> Result<OperatorTable, PrologError> {
    let priority = u16::try_from(priority)
        .map_err(|_| PrologError::Domain(format!("operator_priority {}", priority)))?;
    let kind: OpType = kind.parse()?;
    let mut out = table.clone();
    out.declare(priority, kind, name)?;
    Ok(out)
}
