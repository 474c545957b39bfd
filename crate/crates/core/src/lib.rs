//! Decision procedures for ground satisfiability in theories of data
//! structures (records, integer offsets, lists, arrays and their
//! combinations) built on a generic superposition prover.
//!
//! The pipeline is: generate or parse a problem, reduce and flatten it
//! ([`theories`]), pick an ordering ([`orderings`]), then saturate
//! ([`saturation`]) with the inference system in [`calculus`].

pub mod benchgen;
pub mod calculus;
pub mod harness;
pub mod orderings;
pub mod saturation;
pub mod terms;
pub mod theories;
