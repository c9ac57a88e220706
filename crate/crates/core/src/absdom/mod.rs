//! Lattice of base refinement types β: relational abstractions of sets of
//! (value, environment) pairs over a named scope plus the distinguished
//! value variable ν. Backed by intervals, per-variable congruences,
//! octagons, or a reduced octagon×congruence product.

mod base;
mod congruence;
mod expr;
mod interval;
mod octagon;
mod scope;

pub use base::{BaseAbstract, DomainKind, Thresholds};
pub use expr::{CmpOp, LinCond, LinExpr};
pub use scope::{Scope, VALUE_VAR};

#[cfg(test)]
mod tests;
