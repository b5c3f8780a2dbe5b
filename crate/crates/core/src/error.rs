use std::io;

use thiserror::Error;

use crate::concept::ConceptId;
use crate::model::Contradiction;
use crate::registry::OpId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("component {0} is not registered")]
    UnknownComponent(OpId),
    #[error("a sequence or set composition needs at least one element")]
    EmptyNonPrimitive,
    #[error("operation {0} is not registered")]
    UnknownId(OpId),
    #[error("concept C{} is not known", .0.index())]
    UnknownConcept(ConceptId),
    #[error("malformed concept: {0}")]
    MalformedConcept(&'static str),
    #[error("{object} does not satisfy C{}", .concept.index())]
    NotSatisfied { object: OpId, concept: ConceptId },
    #[error("contradictory ground: axioms {first} and {second} disagree")]
    ContradictoryGround { first: usize, second: usize },
    #[error("ground axiom {index} is refuted: {contradiction}")]
    RefutedGround {
        index: usize,
        contradiction: Box<Contradiction>,
    },
    #[error("contradiction: {0}")]
    Contradiction(Box<Contradiction>),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("operation spec line {line}: {message}")]
    SpecSyntax { line: usize, message: String },
    #[error("model stream line {line}: {message}")]
    MalformedStream { line: usize, message: String },
    #[error("model stream version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<Contradiction> for Error {
    fn from(c: Contradiction) -> Self {
        Error::Contradiction(Box::new(c))
    }
}
