//! The fixed operator table of the supported subset.
//!
//! User-defined operators are deliberately unsupported, so the table is a
//! compile-time constant shared by the reader and the printer.

/// Operator fixity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpType {
    /// Infix, neither argument may have the operator's priority.
    Xfx,
    /// Infix, right argument may have the operator's priority.
    Xfy,
    /// Infix, left argument may have the operator's priority.
    Yfx,
    /// Prefix, argument may have the operator's priority.
    Fy,
}

#[derive(Debug, Clone, Copy)]
pub struct OpDef {
    pub priority: u16,
    pub op_type: OpType,
    pub name: &'static str,
}

/// Priority 1200 terms are full clauses; arguments of compounds and list
/// elements are read at 999 so a bare `,` terminates them.
pub const MAX_PRIORITY: u16 = 1200;
pub const ARG_PRIORITY: u16 = 999;

const TABLE: &[OpDef] = &[
    OpDef { priority: 1200, op_type: OpType::Xfx, name: ":-" },
    OpDef { priority: 1100, op_type: OpType::Xfy, name: ";" },
    OpDef { priority: 1050, op_type: OpType::Xfy, name: "->" },
    OpDef { priority: 1000, op_type: OpType::Xfy, name: "," },
    OpDef { priority: 900, op_type: OpType::Fy, name: "\\+" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "=" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "\\=" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "==" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "\\==" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "=:=" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "=\\=" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "<" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: ">" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "=<" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: ">=" },
    OpDef { priority: 700, op_type: OpType::Xfx, name: "is" },
    OpDef { priority: 500, op_type: OpType::Yfx, name: "+" },
    OpDef { priority: 500, op_type: OpType::Yfx, name: "-" },
    OpDef { priority: 400, op_type: OpType::Yfx, name: "*" },
    OpDef { priority: 400, op_type: OpType::Yfx, name: "/" },
    OpDef { priority: 400, op_type: OpType::Yfx, name: "mod" },
    OpDef { priority: 200, op_type: OpType::Fy, name: "-" },
];

/// Infix definition for `name`, if any.
pub fn infix(name: &str) -> Option<OpDef> {
    TABLE
        .iter()
        .find(|d| d.name == name && d.op_type != OpType::Fy)
        .copied()
}

/// Prefix definition for `name`, if any.
pub fn prefix(name: &str) -> Option<OpDef> {
    TABLE
        .iter()
        .find(|d| d.name == name && d.op_type == OpType::Fy)
        .copied()
}

/// True if `name` appears anywhere in the table. Such atoms must be quoted
/// when printed in operand position.
pub fn is_operator_name(name: &str) -> bool {
    TABLE.iter().any(|d| d.name == name)
}

impl OpDef {
    /// Maximum priority the left argument may have.
    pub fn left_max(&self) -> u16 {
        match self.op_type {
            OpType::Yfx => self.priority,
            OpType::Xfx | OpType::Xfy => self.priority - 1,
            OpType::Fy => unreachable!("prefix operators have no left argument"),
        }
    }

    /// Maximum priority the right (or only) argument may have.
    pub fn right_max(&self) -> u16 {
        match self.op_type {
            OpType::Xfy | OpType::Fy => self.priority,
            OpType::Xfx | OpType::Yfx => self.priority - 1,
        }
    }
}
