//! Computable concepts.
//!
//! A Type I concept says "operable within the composition of φ". A Type II
//! concept says "operable at this slot of this exact context": a sequence
//! with exactly one hole, or the remaining members of a set.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::{Composition, CompositionKind, Occurrence, OpId, Registry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConceptId(u32);

impl ConceptId {
    pub fn new(index: u32) -> Self {
        ConceptId(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    fn slot(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Hole,
    Op(OpId),
}

/// Sequence context with exactly one hole.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    slots: Vec<Slot>,
    hole: usize,
}

impl Pattern {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        let mut holes = slots.iter().enumerate().filter(|(_, s)| **s == Slot::Hole);
        let hole = match (holes.next(), holes.next()) {
            (Some((i, _)), None) => i,
            (None, _) => return Err(Error::MalformedConcept("pattern has no hole")),
            (Some(_), Some(_)) => return Err(Error::MalformedConcept("pattern has several holes")),
        };
        Ok(Pattern { slots, hole })
    }

    /// `elements` with the slot at `hole` blanked out.
    pub fn around(elements: &[OpId], hole: usize) -> Self {
        assert!(hole < elements.len(), "hole outside the sequence");
        let slots = elements
            .iter()
            .enumerate()
            .map(|(i, e)| if i == hole { Slot::Hole } else { Slot::Op(*e) })
            .collect();
        Pattern { slots, hole }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn hole(&self) -> usize {
        self.hole
    }

    pub fn ops(&self) -> impl Iterator<Item = OpId> + '_ {
        self.slots.iter().filter_map(|s| match s {
            Slot::Op(id) => Some(*id),
            Slot::Hole => None,
        })
    }

    pub fn fill(&self, object: OpId) -> Composition {
        Composition::sequence(self.slots.iter().map(|s| match s {
            Slot::Hole => object,
            Slot::Op(id) => *id,
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptKind {
    TypeI,
    TypeII,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    /// Type I: operable within the composition of the enclosing operation.
    Enclosing(OpId),
    /// Type II over a sequence.
    Sequence(Pattern),
    /// Type II over a set: the other members, as a sorted multiset.
    Set(Vec<OpId>),
}

impl Concept {
    pub fn set_context(co_members: impl IntoIterator<Item = OpId>) -> Self {
        let mut members: Vec<OpId> = co_members.into_iter().collect();
        members.sort_unstable();
        Concept::Set(members)
    }

    pub fn kind(&self) -> ConceptKind {
        match self {
            Concept::Enclosing(_) => ConceptKind::TypeI,
            Concept::Sequence(_) | Concept::Set(_) => ConceptKind::TypeII,
        }
    }

    /// Operations the concept mentions.
    pub fn ops(&self) -> Vec<OpId> {
        match self {
            Concept::Enclosing(op) => vec![*op],
            Concept::Sequence(p) => p.ops().collect(),
            Concept::Set(m) => m.clone(),
        }
    }

    /// The composition an object must complete to satisfy a Type II concept.
    pub fn fill(&self, object: OpId) -> Option<Composition> {
        match self {
            Concept::Enclosing(_) => None,
            Concept::Sequence(p) => Some(p.fill(object)),
            Concept::Set(m) => Some(Composition::set(m.iter().copied().chain([object]))),
        }
    }

    pub fn map_ops(&self, mut f: impl FnMut(OpId) -> OpId) -> Concept {
        match self {
            Concept::Enclosing(op) => Concept::Enclosing(f(*op)),
            Concept::Sequence(p) => Concept::Sequence(Pattern {
                slots: p
                    .slots
                    .iter()
                    .map(|s| match s {
                        Slot::Hole => Slot::Hole,
                        Slot::Op(id) => Slot::Op(f(*id)),
                    })
                    .collect(),
                hole: p.hole,
            }),
            Concept::Set(m) => Concept::set_context(m.iter().map(|id| f(*id))),
        }
    }

    /// Renders the concept with operation labels, e.g. `s(_)` or `⟨a, _, c⟩`.
    pub fn describe(&self, registry: &Registry) -> String {
        match self {
            Concept::Enclosing(op) => format!("{}(_)", registry.label(*op)),
            Concept::Sequence(p) => {
                let parts: Vec<String> = p
                    .slots
                    .iter()
                    .map(|s| match s {
                        Slot::Hole => "_".to_owned(),
                        Slot::Op(id) => registry.label(*id),
                    })
                    .collect();
                format!("⟨{}⟩", parts.join(", "))
            }
            Concept::Set(m) => {
                let parts: Vec<String> = m
                    .iter()
                    .map(|id| registry.label(*id))
                    .chain(["_".to_owned()])
                    .collect();
                format!("{{{}}}", parts.join(", "))
            }
        }
    }
}

/// Concepts an operation's composition gives rise to, in interning order.
///
/// Type I first, then one Type II concept per element. Set members that
/// repeat give the same context, so they map to the same concept.
pub fn derived_from(composition: &Composition, encloser: OpId) -> Vec<Concept> {
    let elements = composition.elements();
    let mut out = Vec::with_capacity(elements.len() + 1);
    match composition.kind() {
        CompositionKind::Primitive => return out,
        CompositionKind::Sequence => {
            out.push(Concept::Enclosing(encloser));
            out.extend(
                (0..elements.len()).map(|i| Concept::Sequence(Pattern::around(elements, i))),
            );
        }
        CompositionKind::Set => {
            out.push(Concept::Enclosing(encloser));
            out.extend((0..elements.len()).map(|i| {
                Concept::set_context(
                    elements
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, e)| *e),
                )
            }));
        }
    }
    out
}

/// Interned concepts plus, for each, the (object, witness) pairs registered
/// operations have produced so far.
#[derive(Clone, Debug, Default)]
pub struct ConceptStore {
    concepts: Vec<Concept>,
    interned: HashMap<Concept, ConceptId>,
    members: Vec<Vec<(OpId, Occurrence)>>,
}

impl ConceptStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ConceptId> + '_ {
        (0..self.concepts.len() as u32).map(ConceptId)
    }

    pub fn intern(&mut self, concept: Concept) -> Result<ConceptId> {
        let concept = match concept {
            Concept::Set(members) => Concept::set_context(members),
            other => other,
        };
        Ok(self.intern_unchecked(concept))
    }

    pub(crate) fn intern_unchecked(&mut self, concept: Concept) -> ConceptId {
        if let Some(&id) = self.interned.get(&concept) {
            return id;
        }
        let id =
            ConceptId(u32::try_from(self.concepts.len()).expect("concept store exceeds u32 ids"));
        self.concepts.push(concept.clone());
        self.members.push(Vec::new());
        self.interned.insert(concept, id);
        id
    }

    pub fn get(&self, id: ConceptId) -> Result<&Concept> {
        self.concepts
            .get(id.slot())
            .ok_or(Error::UnknownConcept(id))
    }

    pub fn find(&self, concept: &Concept) -> Option<ConceptId> {
        self.interned.get(concept).copied()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    fn record(&mut self, id: ConceptId, object: OpId, witness: Occurrence) {
        let members = &mut self.members[id.slot()];
        if members.last() != Some(&(object, witness)) {
            members.push((object, witness));
        }
    }

    /// Interns the concepts of a freshly registered operation and indexes
    /// its elements as members. Returns the ids in derivation order.
    pub(crate) fn absorb(&mut self, composition: &Composition, encloser: OpId) -> Vec<ConceptId> {
        let ids: Vec<ConceptId> = derived_from(composition, encloser)
            .into_iter()
            .map(|c| self.intern_unchecked(c))
            .collect();
        if let Some((&enclosing, slots)) = ids.split_first() {
            for (index, (&element, &slot_concept)) in
                composition.elements().iter().zip(slots).enumerate()
            {
                let witness = Occurrence {
                    encloser,
                    place: composition.place_of(index),
                };
                self.record(enclosing, element, witness);
                self.record(slot_concept, element, witness);
            }
        }
        ids
    }

    pub(crate) fn members(&self, id: ConceptId) -> &[(OpId, Occurrence)] {
        &self.members[id.slot()]
    }
}
