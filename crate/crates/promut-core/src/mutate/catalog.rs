//! The operator catalogue: identifiers, display labels and classes.
//!
//! The order of [`OperatorId::ALL`] is the canonical catalogue order used
//! everywhere: enumeration, reports and the operator matrix.

use serde::Serialize;

/// Whether an operator is expected to change semantics in most programs
/// (sensible) or to mostly produce equivalent mutants (foolish).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorClass {
    Sensible,
    Foolish,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorId {
    RemovePredicate,
    SemiToComma,
    CommaToSemi,
    EqToNeq,
    NeqToEq,
    ArithEqToNeq,
    ArithNeqToEq,
    StructEqToNeq,
    StructNeqToEq,
    GtToLe,
    GeToLt,
    LtToGe,
    LeToGt,
    PlusToMinus,
    MinusToPlus,
    TimesToPlus,
    DivToMinus,
    IncNumber,
    DecNumber,
    NegateGoal,
    TrueToFalse,
    FalseToTrue,
    VarToAnon,
    AtomToAnon,
    NilToAnon,
    PermuteCut,
    ReversePredicate,
}

impl OperatorId {
    /// Catalogue order.
    pub const ALL: [OperatorId; 27] = [
        OperatorId::RemovePredicate,
        OperatorId::SemiToComma,
        OperatorId::CommaToSemi,
        OperatorId::EqToNeq,
        OperatorId::NeqToEq,
        OperatorId::ArithEqToNeq,
        OperatorId::ArithNeqToEq,
        OperatorId::StructEqToNeq,
        OperatorId::StructNeqToEq,
        OperatorId::GtToLe,
        OperatorId::GeToLt,
        OperatorId::LtToGe,
        OperatorId::LeToGt,
        OperatorId::PlusToMinus,
        OperatorId::MinusToPlus,
        OperatorId::TimesToPlus,
        OperatorId::DivToMinus,
        OperatorId::IncNumber,
        OperatorId::DecNumber,
        OperatorId::NegateGoal,
        OperatorId::TrueToFalse,
        OperatorId::FalseToTrue,
        OperatorId::VarToAnon,
        OperatorId::AtomToAnon,
        OperatorId::NilToAnon,
        OperatorId::PermuteCut,
        OperatorId::ReversePredicate,
    ];

    /// Stable machine name, as used in `--ops` and JSON output.
    pub fn cli_name(self) -> &'static str {
        match self {
            OperatorId::RemovePredicate => "remove_predicate",
            OperatorId::SemiToComma => "semi_to_comma",
            OperatorId::CommaToSemi => "comma_to_semi",
            OperatorId::EqToNeq => "eq_to_neq",
            OperatorId::NeqToEq => "neq_to_eq",
            OperatorId::ArithEqToNeq => "arith_eq_to_neq",
            OperatorId::ArithNeqToEq => "arith_neq_to_eq",
            OperatorId::StructEqToNeq => "struct_eq_to_neq",
            OperatorId::StructNeqToEq => "struct_neq_to_eq",
            OperatorId::GtToLe => "gt_to_le",
            OperatorId::GeToLt => "ge_to_lt",
            OperatorId::LtToGe => "lt_to_ge",
            OperatorId::LeToGt => "le_to_gt",
            OperatorId::PlusToMinus => "plus_to_minus",
            OperatorId::MinusToPlus => "minus_to_plus",
            OperatorId::TimesToPlus => "times_to_plus",
            OperatorId::DivToMinus => "div_to_minus",
            OperatorId::IncNumber => "inc_number",
            OperatorId::DecNumber => "dec_number",
            OperatorId::NegateGoal => "negate_goal",
            OperatorId::TrueToFalse => "true_to_false",
            OperatorId::FalseToTrue => "false_to_true",
            OperatorId::VarToAnon => "var_to_anon",
            OperatorId::AtomToAnon => "atom_to_anon",
            OperatorId::NilToAnon => "nil_to_anon",
            OperatorId::PermuteCut => "permute_cut",
            OperatorId::ReversePredicate => "reverse_predicate",
        }
    }

    /// Human label for matrix rows.
    pub fn label(self) -> &'static str {
        match self {
            OperatorId::RemovePredicate => "remove predicate",
            OperatorId::SemiToComma => "; to ,",
            OperatorId::CommaToSemi => ", to ;",
            OperatorId::EqToNeq => "= to \\=",
            OperatorId::NeqToEq => "\\= to =",
            OperatorId::ArithEqToNeq => "=:= to =\\=",
            OperatorId::ArithNeqToEq => "=\\= to =:=",
            OperatorId::StructEqToNeq => "== to \\==",
            OperatorId::StructNeqToEq => "\\== to ==",
            OperatorId::GtToLe => "> to =<",
            OperatorId::GeToLt => ">= to <",
            OperatorId::LtToGe => "< to >=",
            OperatorId::LeToGt => "=< to >",
            OperatorId::PlusToMinus => "+ to -",
            OperatorId::MinusToPlus => "- to +",
            OperatorId::TimesToPlus => "* to +",
            OperatorId::DivToMinus => "/ to -",
            OperatorId::IncNumber => "increase number",
            OperatorId::DecNumber => "decrease number",
            OperatorId::NegateGoal => "negate expression",
            OperatorId::TrueToFalse => "true to false",
            OperatorId::FalseToTrue => "false to true",
            OperatorId::VarToAnon => "var to _",
            OperatorId::AtomToAnon => "atom to _",
            OperatorId::NilToAnon => "[] to _",
            OperatorId::PermuteCut => "permute cut",
            OperatorId::ReversePredicate => "reverse predicate",
        }
    }

    /// Clause reversal and cut permutation mostly produce equivalent
    /// mutants; the unconditional number shifts share that risk. The rest
    /// are expected to change behavior.
    pub fn class(self) -> OperatorClass {
        match self {
            OperatorId::IncNumber
            | OperatorId::DecNumber
            | OperatorId::PermuteCut
            | OperatorId::ReversePredicate => OperatorClass::Foolish,
            _ => OperatorClass::Sensible,
        }
    }

    /// The functor pair for plain swap operators.
    pub fn functor_swap(self) -> Option<(&'static str, &'static str)> {
        match self {
            OperatorId::SemiToComma => Some((";", ",")),
            OperatorId::CommaToSemi => Some((",", ";")),
            OperatorId::EqToNeq => Some(("=", "\\=")),
            OperatorId::NeqToEq => Some(("\\=", "=")),
            OperatorId::ArithEqToNeq => Some(("=:=", "=\\=")),
            OperatorId::ArithNeqToEq => Some(("=\\=", "=:=")),
            OperatorId::StructEqToNeq => Some(("==", "\\==")),
            OperatorId::StructNeqToEq => Some(("\\==", "==")),
            OperatorId::GtToLe => Some((">", "=<")),
            OperatorId::GeToLt => Some((">=", "<")),
            OperatorId::LtToGe => Some(("<", ">=")),
            OperatorId::LeToGt => Some(("=<", ">")),
            OperatorId::PlusToMinus => Some(("+", "-")),
            OperatorId::MinusToPlus => Some(("-", "+")),
            OperatorId::TimesToPlus => Some(("*", "+")),
            OperatorId::DivToMinus => Some(("/", "-")),
            _ => None,
        }
    }

    pub fn from_cli_name(name: &str) -> Option<OperatorId> {
        OperatorId::ALL.iter().copied().find(|op| op.cli_name() == name)
    }

    pub fn sensible() -> Vec<OperatorId> {
        OperatorId::ALL
            .iter()
            .copied()
            .filter(|op| op.class() == OperatorClass::Sensible)
            .collect()
    }

    pub fn foolish() -> Vec<OperatorId> {
        OperatorId::ALL
            .iter()
            .copied()
            .filter(|op| op.class() == OperatorClass::Foolish)
            .collect()
    }
}

impl std::fmt::Display for OperatorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.cli_name())
    }
}
