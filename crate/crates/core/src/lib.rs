//! Symbolic toolkit for abelian groups built from a fixed block vocabulary:
//! cardinal arithmetic, normal forms, divisibility invariants, decision
//! procedures for connected group topologies, a finite brute-force oracle
//! and an exact simulator for Hartman-Mycielski step functions.

pub mod arith;
pub mod cardinal;
pub mod corpus;
pub mod decompose;
pub mod dsl;
pub mod hm;
pub mod invariants;
pub mod oracle;
pub mod plan;
pub mod presentation;
pub mod structure;

pub use cardinal::{CardOrdering, Cardinal, CardinalError, Undecidable};
pub use dsl::{parse, print, DslError};
pub use presentation::{Block, Presentation, PresentationError, PrimeSet, Term};
