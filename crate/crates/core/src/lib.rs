//! Desk-scale entropy estimators for discrete symplectic systems.
//!
//! Three growth rates are computed and compared:
//!
//! * categorical entropy of Dehn-twist words, from transfer matrices
//!   ([`catalg`]);
//! * barcode entropy, from bar counts of filtered Floer-type complexes
//!   ([`persistence`], [`floer_curves`]);
//! * topological entropy, from ε-box capacity of orbit strings and from
//!   volume growth of iterated curves ([`dynamics`]).
//!
//! [`crofton`] checks the averaged intersection-count bound behind the
//! barcode/topological comparison, and [`harness`] wires everything into
//! comparison reports and the `entropy-chain` CLI.

pub mod catalg;
pub mod crofton;
pub mod dynamics;
pub mod error;
pub mod floer_curves;
pub mod growth;
pub mod harness;
pub mod kv;
pub mod persistence;
pub mod rational;

pub use error::{Error, Result};
pub use growth::{growth_rate_fit, EntropyEstimate};
