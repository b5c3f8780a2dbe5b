//! Mechanical abstracting process and the relations concepts entail.
//!
//! Everything here reads a [`Machine`] and never modifies it.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::concept::{ConceptId, ConceptKind};
use crate::error::{Error, Result};
use crate::machine::{Machine, Witness};
use crate::registry::{OpId, Registry};

/// An object described by the concepts it satisfies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Abstraction {
    pub object: OpId,
    pub concepts: BTreeSet<ConceptId>,
    /// Enclosing operations whose compositions witness the concepts.
    pub scope: BTreeSet<OpId>,
}

impl Abstraction {
    pub fn empty(object: OpId) -> Self {
        Abstraction {
            object,
            concepts: BTreeSet::new(),
            scope: BTreeSet::new(),
        }
    }

    pub fn merge(&mut self, other: &Abstraction) {
        debug_assert_eq!(self.object, other.object);
        self.concepts.extend(other.concepts.iter().copied());
        self.scope.extend(other.scope.iter().copied());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Op(OpId),
    Concept(ConceptId),
}

impl Target {
    pub fn describe(&self, machine: &Machine) -> String {
        match self {
            Target::Op(id) => machine.registry().label(*id),
            Target::Concept(c) => format!("{c} {}", machine.describe_concept(*c)),
        }
    }
}

/// `source` relates through `via` to `target`. `equivalent` marks targets
/// that are objects satisfying `via` as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub source: OpId,
    pub via: ConceptId,
    pub target: Target,
    pub equivalent: bool,
}

impl Relation {
    pub fn describe(&self, machine: &Machine) -> String {
        let target = self.target.describe(machine);
        let target = if self.equivalent {
            format!("_{target}_")
        } else {
            target
        };
        format!(
            "{} -[{}]-> {}",
            machine.registry().label(self.source),
            self.via,
            target
        )
    }
}

/// Which concept kinds a query takes into account.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KindFilter {
    pub type_i: bool,
    pub type_ii: bool,
}

impl KindFilter {
    pub const ALL: KindFilter = KindFilter {
        type_i: true,
        type_ii: true,
    };
    pub const TYPE_I: KindFilter = KindFilter {
        type_i: true,
        type_ii: false,
    };
    pub const TYPE_II: KindFilter = KindFilter {
        type_i: false,
        type_ii: true,
    };

    pub fn admits(&self, kind: ConceptKind) -> bool {
        match kind {
            ConceptKind::TypeI => self.type_i,
            ConceptKind::TypeII => self.type_ii,
        }
    }
}

impl Default for KindFilter {
    fn default() -> Self {
        Self::ALL
    }
}

/// How two objects were told apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinction {
    Indistinguishable,
    /// Both satisfy `relation.via`, but only `relation.source` relates to
    /// the target through it.
    ByRelation {
        relation: Relation,
    },
    /// Only `holder` satisfies `concept`.
    ByConcept {
        concept: ConceptId,
        holder: OpId,
    },
}

impl Distinction {
    pub fn is_distinguishable(&self) -> bool {
        !matches!(self, Distinction::Indistinguishable)
    }
}

impl fmt::Display for Distinction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distinction::Indistinguishable => f.write_str("indistinguishable"),
            Distinction::ByRelation { relation } => {
                let target = match relation.target {
                    Target::Op(id) => id.to_string(),
                    Target::Concept(c) => c.to_string(),
                };
                write!(
                    f,
                    "distinguishable, witness {target}: {} relates to it through {}",
                    relation.source, relation.via
                )
            }
            Distinction::ByConcept { concept, holder } => {
                write!(
                    f,
                    "distinguishable, witness {concept}: only {holder} satisfies it"
                )
            }
        }
    }
}

impl Distinction {
    /// Like the `Display` form, with names and concepts spelled out.
    pub fn describe(&self, machine: &Machine) -> String {
        let registry = machine.registry();
        match self {
            Distinction::Indistinguishable => "indistinguishable".to_owned(),
            Distinction::ByRelation { relation } => format!(
                "distinguishable, witness {}: {} relates to it through {} {}",
                relation.target.describe(machine),
                registry.label(relation.source),
                relation.via,
                machine.describe_concept(relation.via),
            ),
            Distinction::ByConcept { concept, holder } => format!(
                "distinguishable, witness {concept} {}: only {} satisfies it",
                machine.describe_concept(*concept),
                registry.label(*holder),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Engine<'m> {
    machine: &'m Machine,
    kinds: KindFilter,
}

impl<'m> Engine<'m> {
    pub fn new(machine: &'m Machine) -> Self {
        Engine {
            machine,
            kinds: KindFilter::ALL,
        }
    }

    pub fn with_kinds(mut self, kinds: KindFilter) -> Self {
        self.kinds = kinds;
        self
    }

    pub fn machine(&self) -> &'m Machine {
        self.machine
    }

    fn registry(&self) -> &'m Registry {
        self.machine.registry()
    }

    fn admits(&self, concept: ConceptId) -> bool {
        self.machine
            .concept(concept)
            .map(|c| self.kinds.admits(c.kind()))
            .unwrap_or(false)
    }

    /// Concepts `object` satisfies with a witness whose encloser passes
    /// `in_scope`.
    fn collect(&self, object: OpId, mut in_scope: impl FnMut(OpId) -> bool) -> Result<Abstraction> {
        let mut abstraction = Abstraction::empty(object);
        for occurrence in self.registry().occurrences(object)? {
            if !in_scope(occurrence.encloser) {
                continue;
            }
            let Some((enclosing, slot)) = self.machine.concepts_at(object, *occurrence) else {
                continue;
            };
            let mut used = false;
            for concept in [enclosing, slot] {
                if self.admits(concept) {
                    abstraction.concepts.insert(concept);
                    used = true;
                }
            }
            if used {
                abstraction.scope.insert(occurrence.encloser);
            }
        }
        Ok(abstraction)
    }

    /// Abstraction of `object` over the enclosing operations in `scope`.
    pub fn abstract_over(&self, object: OpId, scope: &BTreeSet<OpId>) -> Result<Abstraction> {
        if let Some(&missing) = scope.iter().find(|id| !self.registry().contains(**id)) {
            return Err(Error::UnknownId(missing));
        }
        self.collect(object, |encloser| scope.contains(&encloser))
    }

    /// Abstraction of `object` over every registered operation.
    pub fn abstract_all(&self, object: OpId) -> Result<Abstraction> {
        self.collect(object, |_| true)
    }

    pub fn concepts_of(&self, object: OpId) -> Result<BTreeSet<ConceptId>> {
        self.abstract_all(object).map(|a| a.concepts)
    }

    fn witnesses_checked(&self, object: OpId, concept: ConceptId) -> Result<Vec<Witness>> {
        let witnesses = self.machine.witnesses(object, concept)?;
        if witnesses.is_empty() || !self.admits(concept) {
            return Err(Error::NotSatisfied { object, concept });
        }
        Ok(witnesses)
    }

    /// Relations `object` has through `concept`: the other members of the
    /// concept's extension, and every concept satisfied by an operation
    /// witnessing the satisfaction.
    pub fn relations_via(&self, object: OpId, concept: ConceptId) -> Result<Vec<Relation>> {
        let witnesses = self.witnesses_checked(object, concept)?;
        let mut out = BTreeSet::new();
        for member in self.machine.extension(concept)? {
            if member != object {
                out.insert(Relation {
                    source: object,
                    via: concept,
                    target: Target::Op(member),
                    equivalent: true,
                });
            }
        }
        for witness in witnesses {
            for entailed in self.concepts_of(witness.encloser)? {
                out.insert(Relation {
                    source: object,
                    via: concept,
                    target: Target::Concept(entailed),
                    equivalent: false,
                });
            }
        }
        Ok(out.into_iter().collect())
    }

    pub fn relations_of(&self, object: OpId) -> Result<Vec<Relation>> {
        let mut out = Vec::new();
        for concept in self.concepts_of(object)? {
            out.extend(self.relations_via(object, concept)?);
        }
        Ok(out)
    }

    /// Relations left when `object` operates only as `concept` describes.
    pub fn restrict(&self, object: OpId, concept: ConceptId) -> Result<Vec<Relation>> {
        self.relations_via(object, concept)
    }

    /// Compares the full concept and relation profiles of `a` and `b`.
    ///
    /// Relations under concepts both objects satisfy are compared first, so
    /// objects that are equivalent under some concept are told apart by what
    /// that shared concept relates them to before falling back to concepts
    /// only one of them satisfies.
    pub fn distinguishable(&self, a: OpId, b: OpId) -> Result<Distinction> {
        let concepts_a = self.concepts_of(a)?;
        let concepts_b = self.concepts_of(b)?;
        if a == b {
            return Ok(Distinction::Indistinguishable);
        }
        let swap = |t: Target| match t {
            Target::Op(x) if x == a => Target::Op(b),
            Target::Op(x) if x == b => Target::Op(a),
            other => other,
        };

        // Contextual (Type II) witnesses say more than membership of one
        // particular operation, so they are preferred.
        let concept_rank = |c: ConceptId| match self.machine.concept(c).map(|c| c.kind()) {
            Ok(ConceptKind::TypeII) => 0,
            _ => 1,
        };
        let target_rank = |t: Target| match t {
            Target::Concept(c) if concept_rank(c) == 0 => 0,
            Target::Op(_) => 1,
            Target::Concept(_) => 2,
        };

        let mut best: Option<((u8, ConceptId, Target, bool), Relation)> = None;
        for &concept in concepts_a.intersection(&concepts_b) {
            let from_a: BTreeSet<(Target, bool)> = self
                .relations_via(a, concept)?
                .into_iter()
                .map(|r| (swap(r.target), r.equivalent))
                .collect();
            let from_b: BTreeSet<(Target, bool)> = self
                .relations_via(b, concept)?
                .into_iter()
                .map(|r| (r.target, r.equivalent))
                .collect();
            let only_a = from_a
                .difference(&from_b)
                .map(|&(t, eq)| (a, swap(t), eq, t));
            let only_b = from_b.difference(&from_a).map(|&(t, eq)| (b, t, eq, t));
            for (source, target, equivalent, compared) in only_a.chain(only_b) {
                let key = (target_rank(target), concept, compared, source == b);
                let relation = Relation {
                    source,
                    via: concept,
                    target,
                    equivalent,
                };
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, relation));
                }
            }
        }
        if let Some((_, relation)) = best {
            return Ok(Distinction::ByRelation { relation });
        }

        let only_a = concepts_a.difference(&concepts_b).map(|&c| (c, a));
        let only_b = concepts_b.difference(&concepts_a).map(|&c| (c, b));
        Ok(only_a
            .chain(only_b)
            .min_by_key(|&(c, _)| (concept_rank(c), c))
            .map_or(Distinction::Indistinguishable, |(concept, holder)| {
                Distinction::ByConcept { concept, holder }
            }))
    }
}
