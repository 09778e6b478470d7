//! Finite free algebras of many-sorted varieties.

pub mod certify;
pub mod cli;
pub mod corpus;
pub mod dfunctor;
pub mod egraph;
pub mod error;
pub mod finalg;
pub mod report;
pub mod sexp;
pub mod signature;
pub mod terms;
pub mod variety;

pub use error::{Error, Result};
pub use finalg::{FiniteAlgebra, MorphismTable};
pub use signature::{ActionSplit, OpId, Signature, SortId};
pub use terms::{GeneratorProfile, Identity, SortedVar, Term};
pub use variety::VarietyDef;
