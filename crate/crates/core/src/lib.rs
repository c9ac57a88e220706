//! Static verification of temporal safety properties for higher-order
//! programs with integer-valued events. Properties are symbolic accumulator
//! automata; the analysis computes per-location effect summaries mapping
//! automaton states to relational abstract values.

pub mod absdom;
