//! The operating machine: a registry of operations together with the
//! concepts its compositions give rise to.
//!
//! Concepts are interned when the operation that gives rise to them is
//! registered, in derivation order, so concept ids depend only on the
//! order operations were registered in. Queries never allocate ids.

use crate::concept::{Concept, ConceptId, ConceptStore};
use crate::error::{Error, Result};
use crate::registry::{Composition, Occurrence, OpId, Place, Registry};

pub type Witness = Occurrence;

#[derive(Clone, Debug)]
struct Derived {
    enclosing: ConceptId,
    // aligned with the composition's elements
    slots: Vec<ConceptId>,
}

#[derive(Clone, Debug, Default)]
pub struct Machine {
    registry: Registry,
    concepts: ConceptStore,
    derived: Vec<Option<Derived>>,
}

impl Machine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn concepts(&self) -> &ConceptStore {
        &self.concepts
    }

    pub fn register(&mut self, composition: Composition, name: Option<&str>) -> Result<OpId> {
        self.register_fresh(composition, name).map(|(id, _)| id)
    }

    pub fn register_fresh(
        &mut self,
        composition: Composition,
        name: Option<&str>,
    ) -> Result<(OpId, bool)> {
        let (id, fresh) = self.registry.register_fresh(composition, name)?;
        if fresh {
            let composition = self.registry.composition(id)?;
            let ids = self.concepts.absorb(composition, id);
            let derived = ids.split_first().map(|(&enclosing, slots)| Derived {
                enclosing,
                slots: slots.to_vec(),
            });
            self.derived.push(derived);
        }
        Ok((id, fresh))
    }

    /// Interns an arbitrary well-formed concept over registered operations.
    pub fn intern_concept(&mut self, concept: Concept) -> Result<ConceptId> {
        for op in concept.ops() {
            self.registry.lookup(op)?;
        }
        self.concepts.intern(concept)
    }

    /// Interns a concept read back from a model file, ahead of the
    /// operations that derive it, so ids come out as they were written.
    pub(crate) fn seed_concept(&mut self, concept: Concept) -> ConceptId {
        self.concepts.intern_unchecked(concept)
    }

    pub fn concept(&self, id: ConceptId) -> Result<&Concept> {
        self.concepts.get(id)
    }

    /// Type I concept of `encloser` and the Type II concept of the slot
    /// `occurrence` points at, for `object` sitting in that slot.
    pub fn concepts_at(
        &self,
        object: OpId,
        occurrence: Occurrence,
    ) -> Option<(ConceptId, ConceptId)> {
        let derived = self
            .derived
            .get(occurrence.encloser.index() as usize)?
            .as_ref()?;
        let index = match occurrence.place {
            Place::Position(p) => p as usize,
            Place::Member => self
                .registry
                .composition(occurrence.encloser)
                .ok()?
                .elements()
                .binary_search(&object)
                .ok()?,
        };
        Some((derived.enclosing, *derived.slots.get(index)?))
    }

    /// Type I concept derived from `encloser`, if it is composite.
    pub fn enclosing_concept(&self, encloser: OpId) -> Option<ConceptId> {
        self.derived
            .get(encloser.index() as usize)?
            .as_ref()
            .map(|d| d.enclosing)
    }

    /// Every slot of a registered composition that makes `object` satisfy
    /// `concept`. Empty means it does not.
    pub fn witnesses(&self, object: OpId, concept: ConceptId) -> Result<Vec<Witness>> {
        self.registry.lookup(object)?;
        let found = match self.concepts.get(concept)? {
            Concept::Enclosing(encloser) => {
                let composition = self.registry.composition(*encloser)?;
                let mut found: Vec<Witness> = composition
                    .elements()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e == object)
                    .map(|(i, _)| Witness {
                        encloser: *encloser,
                        place: composition.place_of(i),
                    })
                    .collect();
                found.dedup();
                found
            }
            c @ Concept::Sequence(pattern) => self
                .find_filled(c, object)
                .map(|encloser| Witness {
                    encloser,
                    place: Place::Position(pattern.hole() as u32),
                })
                .into_iter()
                .collect(),
            c @ Concept::Set(_) => self
                .find_filled(c, object)
                .map(|encloser| Witness {
                    encloser,
                    place: Place::Member,
                })
                .into_iter()
                .collect(),
        };
        Ok(found)
    }

    fn find_filled(&self, concept: &Concept, object: OpId) -> Option<OpId> {
        concept.fill(object).and_then(|c| self.registry.find(&c))
    }

    pub fn satisfies(&self, object: OpId, concept: ConceptId) -> Result<bool> {
        Ok(!self.witnesses(object, concept)?.is_empty())
    }

    /// Objects satisfying `concept`, in id order.
    pub fn extension(&self, concept: ConceptId) -> Result<Vec<OpId>> {
        self.concepts.get(concept)?;
        let mut objects: Vec<OpId> = self
            .concepts
            .members(concept)
            .iter()
            .map(|(o, _)| *o)
            .collect();
        objects.sort_unstable();
        objects.dedup();
        Ok(objects)
    }

    /// Objects equivalent to `object` with respect to `concept`.
    pub fn equivalence_class(&self, object: OpId, concept: ConceptId) -> Result<Vec<OpId>> {
        let extension = self.extension(concept)?;
        self.registry.lookup(object)?;
        if extension.binary_search(&object).is_err() {
            return Err(Error::NotSatisfied { object, concept });
        }
        Ok(extension)
    }

    /// Witnesses of every member of `concept`, as recorded at registration.
    pub fn members(&self, concept: ConceptId) -> Result<&[(OpId, Witness)]> {
        self.concepts.get(concept)?;
        Ok(self.concepts.members(concept))
    }

    pub fn describe_concept(&self, id: ConceptId) -> String {
        match self.concepts.get(id) {
            Ok(c) => c.describe(&self.registry),
            Err(_) => id.to_string(),
        }
    }
}
