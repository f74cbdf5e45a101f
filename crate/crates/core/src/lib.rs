//! Rule-based profiling of computational thinking problems.
//!
//! A problem is described by a [`descriptor::Descriptor`], resolved into a
//! [`profile::CharacteristicProfile`] and analysed against a [`ruleset::Ruleset`]
//! that links competencies to characteristics.

mod vocab;

pub mod analyzer;
pub mod catalog;
pub mod corpus;
pub mod descriptor;
pub mod designer;
pub mod profile;
pub mod ruleset;
pub mod schema;

pub use vocab::{
    Cardinality, Constraint, Domain, Explicitness, Functionality, FunctionalitySet, Observability,
    Representation, Resettability, UnknownVariant,
};
