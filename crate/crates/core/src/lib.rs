//! Compositional abstraction over registered operations.
//!
//! Operations are primitives or compositions (sequences and sets) of other
//! operations. Every composition gives rise to concepts: the Type I concept
//! of being one of its components, and one Type II concept per slot, the
//! context the composition provides around that slot. A
//! [`SystemOfAbstractions`] keeps the abstractions and relations these
//! concepts induce, and refuses entries that contradict its ground.

pub mod concept;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod format;
pub mod machine;
pub mod model;
pub mod opspec;
pub mod registry;

pub use concept::{Concept, ConceptId, ConceptKind, ConceptStore, Pattern, Slot};
pub use corpus::{
    contextual_relation, ingest_bytes, ingest_corpus, ingest_line, meaningfulness_check, tokenize,
    Context, ContextualQuery, IngestStats, Meaning, TokenRule, TokenizerConfig,
};
pub use engine::{Abstraction, Distinction, Engine, KindFilter, Relation, Target};
pub use error::{Error, Result};
pub use machine::{Machine, Witness};
pub use model::{
    ConceptSpec, Contradiction, ContradictionKind, Entry, Fact, GroundAxiom, Inserted, ModelConfig,
    SystemOfAbstractions,
};
pub use registry::{Composition, CompositionKind, Occurrence, OpId, Operation, Place, Registry};
