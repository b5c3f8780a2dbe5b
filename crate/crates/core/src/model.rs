//! System of abstractions built as an abstractional model.
//!
//! The model starts from a ground of axioms and only grows through
//! [`SystemOfAbstractions::insert`] and [`SystemOfAbstractions::declare`],
//! both of which refuse anything that would contradict what is already
//! there. Two kinds of contradiction are recognised:
//!
//! * **K1**: one name bound to two different compositions.
//! * **K2**: a satisfaction (or a relation resting on one) that the
//!   registered compositions refute. Type I claims about primitives cannot
//!   be refuted, since a primitive's composition is not described.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::concept::{Concept, ConceptId, Pattern, Slot};
use crate::engine::{Abstraction, Engine, Relation, Target};
use crate::error::{Error, Result};
use crate::machine::Machine;
use crate::registry::{Composition, CompositionKind, Occurrence, OpId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    /// Objects below this operational level are not abstracted.
    pub elementary_level: u32,
    /// How many composition steps below a newly registered operation are
    /// re-abstracted. `None` is unlimited.
    pub decomposition_depth: Option<u32>,
    /// Store the relations that follow from each inserted abstraction.
    pub include_relations: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            elementary_level: 0,
            decomposition_depth: None,
            include_relations: true,
        }
    }
}

impl ModelConfig {
    fn reaches(&self, depth: u32) -> bool {
        self.decomposition_depth.is_none_or(|limit| depth <= limit)
    }
}

/// A concept written with operation names instead of ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptSpec {
    Enclosing(String),
    /// `None` marks the hole.
    Sequence(Vec<Option<String>>),
    Set(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroundAxiom {
    AssumeMeaningful {
        source: String,
    },
    SeedOperation {
        name: String,
        composition: CompositionKind,
        elements: Vec<String>,
    },
    AssertedSatisfaction {
        object: String,
        concept: ConceptSpec,
    },
}

/// Something the model can be asked to accept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Abstraction(Abstraction),
    Relation(Relation),
    /// `object ⊣ concept`, stored as a one-concept abstraction.
    Assertion {
        object: OpId,
        concept: ConceptId,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContradictionKind {
    K1,
    K2,
}

/// One side of a contradiction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fact {
    /// `name` denotes `composition` (registered as `op`, when it is).
    Binding {
        name: String,
        op: Option<OpId>,
        composition: Composition,
    },
    Satisfaction {
        object: OpId,
        concept: ConceptId,
    },
    /// The registered composition of `op`, which lacks the object.
    Composition {
        op: OpId,
    },
    /// No registered operation has this composition.
    Unregistered {
        composition: Composition,
    },
    Relation(Relation),
    /// No witness of `via` entails the target.
    Unentailed {
        via: ConceptId,
        target: Target,
    },
    Ground {
        index: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Contradiction {
    pub kind: ContradictionKind,
    pub first: Fact,
    pub second: Fact,
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Binding {
                name,
                op,
                composition,
            } => {
                write!(
                    f,
                    "`{name}` = {:?}{:?}",
                    composition.kind(),
                    composition.elements()
                )?;
                if let Some(op) = op {
                    write!(f, " ({op})")?;
                }
                Ok(())
            }
            Fact::Satisfaction { object, concept } => write!(f, "{object} ⊣ {concept}"),
            Fact::Composition { op } => write!(f, "composition of {op}"),
            Fact::Unregistered { composition } => write!(
                f,
                "no registered {:?}{:?}",
                composition.kind(),
                composition.elements()
            ),
            Fact::Relation(r) => {
                write!(f, "{} -[{}]-> {:?}", r.source, r.via, r.target)?;
                if r.equivalent {
                    f.write_str(" (equivalent)")?;
                }
                Ok(())
            }
            Fact::Unentailed { via, target } => {
                write!(f, "no witness of {via} entails {target:?}")
            }
            Fact::Ground { index } => write!(f, "ground axiom {index}"),
        }
    }
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} vs {}", self.kind, self.first, self.second)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Inserted {
    /// The object had no abstraction before.
    pub new_abstraction: bool,
    pub new_concepts: usize,
    pub new_relations: usize,
}

#[derive(Clone, Debug)]
pub struct SystemOfAbstractions {
    machine: Machine,
    ground: Vec<GroundAxiom>,
    config: ModelConfig,
    abstractions: BTreeMap<OpId, Abstraction>,
    relations: BTreeSet<Relation>,
}

impl SystemOfAbstractions {
    /// Builds a model holding exactly `ground`.
    ///
    /// Seed operations are registered in order. Fails without building
    /// anything if two axioms contradict each other.
    pub fn init(ground: Vec<GroundAxiom>, config: ModelConfig) -> Result<Self> {
        for (i, first) in ground.iter().enumerate() {
            for (j, second) in ground.iter().enumerate().skip(i + 1) {
                if let (
                    GroundAxiom::SeedOperation {
                        name: n1,
                        composition: k1,
                        elements: e1,
                    },
                    GroundAxiom::SeedOperation {
                        name: n2,
                        composition: k2,
                        elements: e2,
                    },
                ) = (first, second)
                {
                    if n1 == n2 && !same_seed(*k1, e1, *k2, e2) {
                        return Err(Error::ContradictoryGround {
                            first: i,
                            second: j,
                        });
                    }
                }
            }
        }

        let mut model = SystemOfAbstractions {
            machine: Machine::new(),
            ground: Vec::new(),
            config,
            abstractions: BTreeMap::new(),
            relations: BTreeSet::new(),
        };
        for (index, axiom) in ground.iter().enumerate() {
            match axiom {
                GroundAxiom::AssumeMeaningful { .. } => {}
                GroundAxiom::SeedOperation {
                    name,
                    composition,
                    elements,
                } => {
                    let elements = elements
                        .iter()
                        .map(|e| model.machine.registry().resolve(e))
                        .collect::<Result<Vec<_>>>()?;
                    model.declare(Some(name), Composition::of_kind(*composition, elements))?;
                }
                GroundAxiom::AssertedSatisfaction { object, concept } => {
                    let object = model.machine.registry().resolve(object)?;
                    let concept = model.resolve_spec(concept)?;
                    let concept = model.machine.intern_concept(concept)?;
                    if let Some(refutation) = model.refute(object, concept) {
                        return Err(Error::RefutedGround {
                            index,
                            contradiction: Box::new(Contradiction {
                                kind: ContradictionKind::K2,
                                first: Fact::Ground { index },
                                second: refutation,
                            }),
                        });
                    }
                }
            }
        }
        model.ground = ground;
        Ok(model)
    }

    pub(crate) fn from_parts(
        machine: Machine,
        ground: Vec<GroundAxiom>,
        config: ModelConfig,
        abstractions: BTreeMap<OpId, Abstraction>,
        relations: BTreeSet<Relation>,
    ) -> Self {
        SystemOfAbstractions {
            machine,
            ground,
            config,
            abstractions,
            relations,
        }
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn engine(&self) -> Engine<'_> {
        Engine::new(&self.machine)
    }

    pub fn ground(&self) -> &[GroundAxiom] {
        &self.ground
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn abstractions(&self) -> &BTreeMap<OpId, Abstraction> {
        &self.abstractions
    }

    pub fn abstraction(&self, object: OpId) -> Option<&Abstraction> {
        self.abstractions.get(&object)
    }

    pub fn relations(&self) -> &BTreeSet<Relation> {
        &self.relations
    }

    /// Stored relations with `source`.
    pub fn relations_from(&self, source: OpId) -> impl Iterator<Item = &Relation> {
        let lo = Relation {
            source,
            via: ConceptId::new(0),
            target: Target::Op(OpId::new(0)),
            equivalent: false,
        };
        self.relations
            .range(lo..)
            .take_while(move |r| r.source == source)
    }

    pub fn resolve_spec(&self, spec: &ConceptSpec) -> Result<Concept> {
        let registry = self.machine.registry();
        Ok(match spec {
            ConceptSpec::Enclosing(name) => Concept::Enclosing(registry.resolve(name)?),
            ConceptSpec::Sequence(slots) => Concept::Sequence(Pattern::new(
                slots
                    .iter()
                    .map(|s| match s {
                        None => Ok(Slot::Hole),
                        Some(name) => registry.resolve(name).map(Slot::Op),
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?),
            ConceptSpec::Set(members) => Concept::set_context(
                members
                    .iter()
                    .map(|m| registry.resolve(m))
                    .collect::<Result<Vec<_>>>()?,
            ),
        })
    }

    /// Registers an operation, refusing to bind `name` to a second
    /// composition. Returns the id and whether the operation is new.
    pub fn declare(
        &mut self,
        name: Option<&str>,
        composition: Composition,
    ) -> Result<(OpId, bool)> {
        if let Some(name) = name {
            if let Some(contradiction) = self.binding_conflict(name, &composition) {
                return Err(contradiction.into());
            }
        }
        self.machine.register_fresh(composition, name)
    }

    fn binding_conflict(&self, name: &str, composition: &Composition) -> Option<Contradiction> {
        let registry = self.machine.registry();
        let &existing = registry
            .named(name)
            .iter()
            .find(|id| registry.composition(**id).is_ok_and(|c| c != composition))?;
        Some(Contradiction {
            kind: ContradictionKind::K1,
            first: Fact::Binding {
                name: name.to_owned(),
                op: Some(existing),
                composition: registry.composition(existing).ok()?.clone(),
            },
            second: Fact::Binding {
                name: name.to_owned(),
                op: registry.find(composition),
                composition: composition.clone(),
            },
        })
    }

    /// Why `object ⊣ concept` cannot hold, if the registry rules it out.
    fn refute(&self, object: OpId, concept: ConceptId) -> Option<Fact> {
        let registry = self.machine.registry();
        match self.machine.concept(concept).ok()? {
            Concept::Enclosing(op) => {
                let composition = registry.composition(*op).ok()?;
                if composition.is_primitive() || composition.elements().contains(&object) {
                    None
                } else {
                    Some(Fact::Composition { op: *op })
                }
            }
            c => {
                let filled = c.fill(object)?;
                match registry.find(&filled) {
                    Some(_) => None,
                    None => Some(Fact::Unregistered {
                        composition: filled,
                    }),
                }
            }
        }
    }

    fn check_satisfaction(&self, object: OpId, concept: ConceptId) -> Result<()> {
        self.machine.registry().lookup(object)?;
        self.machine.concept(concept)?;
        match self.refute(object, concept) {
            None => Ok(()),
            Some(refutation) => Err(Contradiction {
                kind: ContradictionKind::K2,
                first: Fact::Satisfaction { object, concept },
                second: refutation,
            }
            .into()),
        }
    }

    /// Why a stored relation cannot be reproduced, if it cannot.
    fn refute_relation(&self, relation: &Relation) -> Result<Option<Fact>> {
        let Relation {
            source,
            via,
            target,
            equivalent,
        } = *relation;
        self.machine.registry().lookup(source)?;
        self.machine.concept(via)?;
        let not_satisfied = |object| {
            self.refute(object, via).unwrap_or(Fact::Satisfaction {
                object,
                concept: via,
            })
        };
        let witnesses = self.machine.witnesses(source, via)?;
        if witnesses.is_empty() {
            return Ok(Some(not_satisfied(source)));
        }
        match (target, equivalent) {
            (Target::Op(other), true) => {
                self.machine.registry().lookup(other)?;
                if other == source || !self.machine.satisfies(other, via)? {
                    return Ok(Some(not_satisfied(other)));
                }
                Ok(None)
            }
            (Target::Concept(entailed), false) => {
                self.machine.concept(entailed)?;
                let engine = self.engine();
                for witness in witnesses {
                    if engine.concepts_of(witness.encloser)?.contains(&entailed) {
                        return Ok(None);
                    }
                }
                Ok(Some(Fact::Unentailed { via, target }))
            }
            _ => Ok(Some(Fact::Unentailed { via, target })),
        }
    }

    /// Adds `entry` if doing so keeps the model consistent. On rejection the
    /// model is untouched and the error carries the contradicting pair.
    pub fn insert(&mut self, entry: Entry) -> Result<Inserted> {
        match entry {
            Entry::Assertion { object, concept } => self.insert(Entry::Abstraction(Abstraction {
                object,
                concepts: BTreeSet::from([concept]),
                scope: BTreeSet::new(),
            })),
            Entry::Relation(relation) => {
                if let Some(refutation) = self.refute_relation(&relation)? {
                    return Err(Contradiction {
                        kind: ContradictionKind::K2,
                        first: Fact::Relation(relation),
                        second: refutation,
                    }
                    .into());
                }
                let added = self.relations.insert(relation);
                Ok(Inserted {
                    new_relations: usize::from(added),
                    ..Inserted::default()
                })
            }
            Entry::Abstraction(abstraction) => {
                for &concept in &abstraction.concepts {
                    self.check_satisfaction(abstraction.object, concept)?;
                }
                if let Some(&missing) = abstraction
                    .scope
                    .iter()
                    .find(|id| !self.machine.registry().contains(**id))
                {
                    return Err(Error::UnknownId(missing));
                }

                let mut consequences = Vec::new();
                if self.config.include_relations {
                    let engine = self.engine();
                    for &concept in &abstraction.concepts {
                        if self.machine.satisfies(abstraction.object, concept)? {
                            consequences.extend(engine.relations_via(abstraction.object, concept)?);
                        }
                    }
                }

                let mut outcome = Inserted::default();
                let stored = self
                    .abstractions
                    .entry(abstraction.object)
                    .or_insert_with(|| {
                        outcome.new_abstraction = true;
                        Abstraction::empty(abstraction.object)
                    });
                let before = stored.concepts.len();
                stored.merge(&abstraction);
                outcome.new_concepts = stored.concepts.len() - before;
                for relation in consequences {
                    outcome.new_relations += usize::from(self.relations.insert(relation));
                }
                Ok(outcome)
            }
        }
    }

    /// Abstracts whatever a freshly registered `op` changes: its components
    /// gain concepts, members sharing a context with them gain an equivalent,
    /// and objects inside those components gain entailed concepts.
    ///
    /// Returns the number of abstraction entries inserted.
    pub fn absorb(&mut self, op: OpId) -> Result<usize> {
        let composition = self.machine.registry().composition(op)?.clone();
        if composition.is_primitive() || !self.config.reaches(1) {
            return Ok(0);
        }

        let mut pending: BTreeMap<OpId, Abstraction> = BTreeMap::new();
        let mut add = |object: OpId, concept: ConceptId, encloser: OpId| {
            let a = pending
                .entry(object)
                .or_insert_with(|| Abstraction::empty(object));
            a.concepts.insert(concept);
            a.scope.insert(encloser);
        };
        let mut shared_context = Vec::new();

        for (index, &element) in composition.elements().iter().enumerate() {
            let witness = Occurrence {
                encloser: op,
                place: composition.place_of(index),
            };
            let Some((enclosing, slot)) = self.machine.concepts_at(element, witness) else {
                continue;
            };
            add(element, enclosing, op);
            add(element, slot, op);
            for &(member, _) in self.machine.members(slot)? {
                if member != element {
                    shared_context.push(Relation {
                        source: member,
                        via: slot,
                        target: Target::Op(element),
                        equivalent: true,
                    });
                }
            }
        }

        if self.config.reaches(2) {
            let components: BTreeSet<OpId> = composition.elements().iter().copied().collect();
            for component in components {
                let inner = self.machine.registry().composition(component)?;
                for (index, &object) in inner.elements().iter().enumerate() {
                    let witness = Occurrence {
                        encloser: component,
                        place: inner.place_of(index),
                    };
                    if let Some((enclosing, slot)) = self.machine.concepts_at(object, witness) {
                        add(object, enclosing, component);
                        add(object, slot, component);
                    }
                }
            }
        }

        let elementary = self.config.elementary_level;
        let level = |model: &Self, id: OpId| model.machine.registry().lookup(id).map(|o| o.level());
        let mut inserted = 0;
        for (object, abstraction) in pending {
            if level(self, object)? < elementary {
                continue;
            }
            self.insert(Entry::Abstraction(abstraction))?;
            inserted += 1;
        }
        if self.config.include_relations {
            for relation in shared_context {
                if level(self, relation.source)? >= elementary {
                    self.insert(Entry::Relation(relation))?;
                }
            }
        }
        Ok(inserted)
    }

    /// Every contradiction present in the model. Empty means consistent.
    pub fn check_consistency(&self) -> Vec<Contradiction> {
        let registry = self.machine.registry();
        let mut found = BTreeSet::new();

        for (name, ids) in registry.name_bindings() {
            for (i, &first) in ids.iter().enumerate() {
                for &second in &ids[i + 1..] {
                    let (Ok(c1), Ok(c2)) =
                        (registry.composition(first), registry.composition(second))
                    else {
                        continue;
                    };
                    if c1 != c2 {
                        found.insert(Contradiction {
                            kind: ContradictionKind::K1,
                            first: Fact::Binding {
                                name: name.to_owned(),
                                op: Some(first),
                                composition: c1.clone(),
                            },
                            second: Fact::Binding {
                                name: name.to_owned(),
                                op: Some(second),
                                composition: c2.clone(),
                            },
                        });
                    }
                }
            }
        }

        for (index, axiom) in self.ground.iter().enumerate() {
            match axiom {
                GroundAxiom::AssumeMeaningful { .. } => {}
                GroundAxiom::SeedOperation {
                    name,
                    composition,
                    elements,
                } => {
                    for (other, later) in self.ground.iter().enumerate().skip(index + 1) {
                        if let GroundAxiom::SeedOperation {
                            name: n2,
                            composition: k2,
                            elements: e2,
                        } = later
                        {
                            if n2 == name && !same_seed(*composition, elements, *k2, e2) {
                                found.insert(Contradiction {
                                    kind: ContradictionKind::K1,
                                    first: Fact::Ground { index },
                                    second: Fact::Ground { index: other },
                                });
                            }
                        }
                    }
                    let declared = elements
                        .iter()
                        .map(|e| registry.resolve(e))
                        .collect::<Result<Vec<_>>>()
                        .map(|ids| Composition::of_kind(*composition, ids));
                    let bound = registry.named(name);
                    let matches = declared
                        .as_ref()
                        .map(|d| {
                            bound
                                .iter()
                                .any(|id| registry.composition(*id).ok() == Some(d))
                        })
                        .unwrap_or(false);
                    if !matches {
                        if let Some(&op) = bound.first() {
                            found.insert(Contradiction {
                                kind: ContradictionKind::K1,
                                first: Fact::Ground { index },
                                second: Fact::Binding {
                                    name: name.clone(),
                                    op: Some(op),
                                    composition: registry
                                        .composition(op)
                                        .cloned()
                                        .unwrap_or_else(|_| Composition::primitive()),
                                },
                            });
                        }
                    }
                }
                GroundAxiom::AssertedSatisfaction { object, concept } => {
                    let refuted = registry.resolve(object).ok().and_then(|object| {
                        let concept = self.resolve_spec(concept).ok()?;
                        let id = self.machine.concepts().find(&concept)?;
                        self.refute(object, id)
                    });
                    if let Some(refutation) = refuted {
                        found.insert(Contradiction {
                            kind: ContradictionKind::K2,
                            first: Fact::Ground { index },
                            second: refutation,
                        });
                    }
                }
            }
        }

        for abstraction in self.abstractions.values() {
            for &concept in &abstraction.concepts {
                if let Some(refutation) = self.refute(abstraction.object, concept) {
                    found.insert(Contradiction {
                        kind: ContradictionKind::K2,
                        first: Fact::Satisfaction {
                            object: abstraction.object,
                            concept,
                        },
                        second: refutation,
                    });
                }
            }
        }

        for relation in &self.relations {
            let refutation = self
                .refute_relation(relation)
                .unwrap_or(Some(Fact::Unentailed {
                    via: relation.via,
                    target: relation.target,
                }));
            if let Some(refutation) = refutation {
                found.insert(Contradiction {
                    kind: ContradictionKind::K2,
                    first: Fact::Relation(*relation),
                    second: refutation,
                });
            }
        }

        found.into_iter().collect()
    }

    /// The same model with operations and concepts renumbered in a canonical
    /// structural order, so models built from the same input in different
    /// orders become identical.
    pub fn canonicalize(&self) -> Result<SystemOfAbstractions> {
        let registry = self.machine.registry();
        let mut by_level: BTreeMap<u32, Vec<OpId>> = BTreeMap::new();
        for op in registry.operations() {
            by_level.entry(op.level()).or_default().push(op.id());
        }

        #[derive(PartialEq, Eq, PartialOrd, Ord)]
        enum Key<'a> {
            Primitive(Option<&'a str>),
            Composite(CompositionKind, Vec<u32>),
        }

        let mut rank: Vec<u32> = vec![0; registry.len()];
        let mut order: Vec<OpId> = Vec::with_capacity(registry.len());
        for ids in by_level.values() {
            let mut keyed: Vec<(Key<'_>, OpId)> = ids
                .iter()
                .map(|&id| {
                    let op = registry.lookup(id).expect("listed id");
                    let composition = op.composition();
                    let key = if composition.is_primitive() {
                        Key::Primitive(op.display_name())
                    } else {
                        let mut ranks: Vec<u32> = composition
                            .elements()
                            .iter()
                            .map(|e| rank[e.index() as usize])
                            .collect();
                        if composition.kind() == CompositionKind::Set {
                            ranks.sort_unstable();
                        }
                        Key::Composite(composition.kind(), ranks)
                    };
                    (key, id)
                })
                .collect();
            keyed.sort();
            for (_, id) in keyed {
                rank[id.index() as usize] = order.len() as u32;
                order.push(id);
            }
        }

        let op_map = |id: OpId| OpId::new(rank[id.index() as usize]);
        let mut machine = Machine::new();
        for &old in &order {
            let op = registry.lookup(old)?;
            let composition = Composition::of_kind(
                op.composition().kind(),
                op.composition().elements().iter().map(|e| op_map(*e)),
            );
            let mut labels = op.labels().iter().map(String::as_str);
            let id = machine.register(composition.clone(), labels.next())?;
            for label in labels {
                machine.register(composition.clone(), Some(label))?;
            }
            debug_assert_eq!(id, op_map(old));
        }

        let mut concept_map = Vec::with_capacity(self.machine.concepts().len());
        for concept in self.machine.concepts().concepts() {
            concept_map.push(machine.intern_concept(concept.map_ops(op_map))?);
        }
        let concept_of = |id: ConceptId| concept_map[id.index() as usize];

        let abstractions = self
            .abstractions
            .values()
            .map(|a| {
                let mapped = Abstraction {
                    object: op_map(a.object),
                    concepts: a.concepts.iter().map(|c| concept_of(*c)).collect(),
                    scope: a.scope.iter().map(|o| op_map(*o)).collect(),
                };
                (mapped.object, mapped)
            })
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                source: op_map(r.source),
                via: concept_of(r.via),
                target: match r.target {
                    Target::Op(o) => Target::Op(op_map(o)),
                    Target::Concept(c) => Target::Concept(concept_of(c)),
                },
                equivalent: r.equivalent,
            })
            .collect();

        Ok(SystemOfAbstractions::from_parts(
            machine,
            self.ground.clone(),
            self.config.clone(),
            abstractions,
            relations,
        ))
    }

    #[cfg(test)]
    pub(crate) fn relations_mut(&mut self) -> &mut BTreeSet<Relation> {
        &mut self.relations
    }

    #[cfg(test)]
    pub(crate) fn abstractions_mut(&mut self) -> &mut BTreeMap<OpId, Abstraction> {
        &mut self.abstractions
    }
}

fn same_seed(k1: CompositionKind, e1: &[String], k2: CompositionKind, e2: &[String]) -> bool {
    if k1 != k2 {
        return false;
    }
    match k1 {
        CompositionKind::Primitive => true,
        CompositionKind::Sequence => e1 == e2,
        CompositionKind::Set => {
            let mut a = e1.to_vec();
            let mut b = e2.to_vec();
            a.sort();
            b.sort();
            a == b
        }
    }
}
