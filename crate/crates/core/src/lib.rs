//! Exact computations with finitely generated subgroups of free groups,
//! represented by their Stallings graphs, up to denseness tests and closures
//! in the pro-`V` topologies for abelian, `p`-group, `G_p * Ab_{p-1}`,
//! nilpotent and supersolvable varieties.

pub mod arith;
pub mod closures;
pub mod error;
pub mod lattice;
pub mod modlin;
pub mod oracle;
pub mod stallings;
pub mod words;

pub use error::{Error, Result};
pub use stallings::{find_morphism, Edge, GraphMorphism, Index, LabeledGraph, RawGraph, SchreierData};
pub use words::{Alphabet, Letter, Word};
