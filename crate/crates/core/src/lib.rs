//! Finite computational algebra for biunary monoids built from a monoid
//! acting on a semilattice.
//!
//! The crate provides:
//!
//! - finite semilattices, posets, monoids, and congruences ([`semilattice`],
//!   [`poset`], [`monoid`], [`congruence`]);
//! - total and partial monoid actions on semilattices with law checking
//!   ([`actions`]);
//! - globalization of strong order-preserving partial actions through the
//!   ideal semilattice of a quotient of pairs ([`globalization`]);
//! - the monoid of normal forms over a total action, with its two unary
//!   operations, atoms, and canonical factorizations ([`pl`]), and the
//!   submonoid cut out by a subsemilattice ([`ql`]);
//! - equational law suites and basis checking for biunary monoids given by
//!   tables or by generated universes ([`laws`]);
//! - reconstruction of an action context from a biunary monoid and the
//!   comparison map back into the normal-form monoid ([`reconstruct`]);
//! - worked families of examples and seeded instance generators
//!   ([`fixtures`]);
//! - serde-friendly report types ([`report`]) and a JSON document model for
//!   the command-line tool ([`io`]).

pub mod actions;
pub mod congruence;
mod dsu;
pub mod error;
pub mod fixtures;
pub mod globalization;
pub mod io;
pub mod laws;
pub mod monoid;
pub mod pl;
pub mod poset;
pub mod ql;
pub mod reconstruct;
pub mod report;
pub mod semilattice;

pub use error::Error;
