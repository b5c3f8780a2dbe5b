//! Operation registry.
//!
//! An operation is an identifier plus a description of its composition: a
//! sequence or a set of previously registered operations, or nothing at all
//! for primitives. Structurally identical compositions share one identifier,
//! and every composition is indexed by the operations it mentions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense identifier of a registered operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OpId(u32);

impl OpId {
    pub fn new(index: u32) -> Self {
        OpId(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    fn slot(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionKind {
    #[serde(rename = "prim")]
    Primitive,
    #[serde(rename = "seq")]
    Sequence,
    Set,
}

/// What an operation is made of.
///
/// Set elements are kept sorted, so two sets with the same members compare
/// equal regardless of the order they were written in. Duplicates are kept.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    kind: CompositionKind,
    elements: Vec<OpId>,
}

impl Composition {
    pub fn primitive() -> Self {
        Composition {
            kind: CompositionKind::Primitive,
            elements: Vec::new(),
        }
    }

    pub fn sequence(elements: impl IntoIterator<Item = OpId>) -> Self {
        Composition {
            kind: CompositionKind::Sequence,
            elements: elements.into_iter().collect(),
        }
    }

    pub fn set(elements: impl IntoIterator<Item = OpId>) -> Self {
        let mut elements: Vec<OpId> = elements.into_iter().collect();
        elements.sort_unstable();
        Composition {
            kind: CompositionKind::Set,
            elements,
        }
    }

    /// Builds a composition of the given kind. Primitives ignore `elements`.
    pub fn of_kind(kind: CompositionKind, elements: impl IntoIterator<Item = OpId>) -> Self {
        match kind {
            CompositionKind::Primitive => Self::primitive(),
            CompositionKind::Sequence => Self::sequence(elements),
            CompositionKind::Set => Self::set(elements),
        }
    }

    pub fn kind(&self) -> CompositionKind {
        self.kind
    }

    pub fn elements(&self) -> &[OpId] {
        &self.elements
    }

    pub fn is_primitive(&self) -> bool {
        self.kind == CompositionKind::Primitive
    }

    /// Where `id` occupies element `index` of this composition.
    pub fn place_of(&self, index: usize) -> Place {
        match self.kind {
            CompositionKind::Set => Place::Member,
            _ => Place::Position(index as u32),
        }
    }
}

/// Slot an operation occupies inside an enclosing composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Place {
    Position(u32),
    Member,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Position(p) => write!(f, "@{p}"),
            Place::Member => f.write_str("@member"),
        }
    }
}

/// One appearance of an operation inside another operation's composition.
///
/// Also used as the witness of a satisfaction: the enclosing operation and
/// the slot where the satisfying object sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Occurrence {
    pub encloser: OpId,
    pub place: Place,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operation {
    id: OpId,
    composition: Composition,
    level: u32,
    labels: Vec<String>,
}

impl Operation {
    pub fn id(&self) -> OpId {
        self.id
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// First label the operation was registered with.
    pub fn display_name(&self) -> Option<&str> {
        self.labels.first().map(String::as_str)
    }

    /// All labels, in registration order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum InternKey {
    Primitive(Option<String>),
    Composite(Composition),
}

#[derive(Clone, Debug, Default)]
pub struct Registry {
    ops: Vec<Operation>,
    interned: HashMap<InternKey, OpId>,
    occurrences: Vec<Vec<Occurrence>>,
    names: BTreeMap<String, Vec<OpId>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = OpId> + '_ {
        (0..self.ops.len() as u32).map(OpId)
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn contains(&self, id: OpId) -> bool {
        id.slot() < self.ops.len()
    }

    pub fn register(&mut self, composition: Composition, name: Option<&str>) -> Result<OpId> {
        self.register_fresh(composition, name).map(|(id, _)| id)
    }

    /// Registers `composition`, returning its id and whether it was new.
    ///
    /// Primitives are told apart by their name. For composite operations the
    /// name is only a label: re-registering the same composition under a
    /// different name returns the existing id and records the extra label.
    pub fn register_fresh(
        &mut self,
        composition: Composition,
        name: Option<&str>,
    ) -> Result<(OpId, bool)> {
        if !composition.is_primitive() && composition.elements.is_empty() {
            return Err(Error::EmptyNonPrimitive);
        }
        if let Some(&missing) = composition.elements.iter().find(|e| !self.contains(**e)) {
            return Err(Error::UnknownComponent(missing));
        }

        let key = if composition.is_primitive() {
            InternKey::Primitive(name.map(str::to_owned))
        } else {
            InternKey::Composite(composition.clone())
        };
        if let Some(&id) = self.interned.get(&key) {
            if let Some(name) = name {
                self.add_label(id, name);
            }
            return Ok((id, false));
        }

        let id = OpId(u32::try_from(self.ops.len()).expect("registry exceeds u32 ids"));
        let level = composition
            .elements
            .iter()
            .map(|e| self.ops[e.slot()].level + 1)
            .max()
            .unwrap_or(0);

        let mut previous = None;
        for (index, &element) in composition.elements.iter().enumerate() {
            let occurrence = Occurrence {
                encloser: id,
                place: composition.place_of(index),
            };
            // duplicated set members are indexed once
            if previous == Some((element, occurrence)) {
                continue;
            }
            previous = Some((element, occurrence));
            self.occurrences[element.slot()].push(occurrence);
        }

        self.ops.push(Operation {
            id,
            composition,
            level,
            labels: Vec::new(),
        });
        self.occurrences.push(Vec::new());
        self.interned.insert(key, id);
        if let Some(name) = name {
            self.add_label(id, name);
        }
        Ok((id, true))
    }

    fn add_label(&mut self, id: OpId, name: &str) {
        let op = &mut self.ops[id.slot()];
        if op.labels.iter().any(|l| l == name) {
            return;
        }
        op.labels.push(name.to_owned());
        let bound = self.names.entry(name.to_owned()).or_default();
        bound.push(id);
        bound.sort_unstable();
    }

    pub fn lookup(&self, id: OpId) -> Result<&Operation> {
        self.ops.get(id.slot()).ok_or(Error::UnknownId(id))
    }

    pub fn composition(&self, id: OpId) -> Result<&Composition> {
        self.lookup(id).map(Operation::composition)
    }

    /// Every place `id` occurs, ordered by enclosing id then position.
    pub fn occurrences(&self, id: OpId) -> Result<&[Occurrence]> {
        self.occurrences
            .get(id.slot())
            .map(Vec::as_slice)
            .ok_or(Error::UnknownId(id))
    }

    /// Id of an already registered composite with exactly this composition.
    pub fn find(&self, composition: &Composition) -> Option<OpId> {
        if composition.is_primitive() {
            return None;
        }
        self.interned
            .get(&InternKey::Composite(composition.clone()))
            .copied()
    }

    pub fn find_primitive(&self, name: &str) -> Option<OpId> {
        self.interned
            .get(&InternKey::Primitive(Some(name.to_owned())))
            .copied()
    }

    /// Operations carrying `name` as a label. More than one means the name
    /// is bound to several compositions.
    pub fn named(&self, name: &str) -> &[OpId] {
        self.names.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn name_bindings(&self) -> impl Iterator<Item = (&str, &[OpId])> {
        self.names
            .iter()
            .map(|(n, ids)| (n.as_str(), ids.as_slice()))
    }

    /// Components reachable from `id` within `depth` composition steps.
    pub fn decompose(&self, id: OpId, depth: usize) -> Result<BTreeSet<OpId>> {
        self.lookup(id)?;
        let mut reached = BTreeSet::new();
        let mut frontier = vec![id];
        for _ in 0..depth {
            let mut next = Vec::new();
            for op in frontier {
                for &element in self.ops[op.slot()].composition.elements() {
                    if reached.insert(element) {
                        next.push(element);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(reached)
    }

    /// Display name, or `#id` for anonymous operations.
    pub fn label(&self, id: OpId) -> String {
        match self.ops.get(id.slot()).and_then(Operation::display_name) {
            Some(name) => name.to_owned(),
            None => id.to_string(),
        }
    }

    /// Resolves a display name or a `#<id>` reference.
    pub fn resolve(&self, name: &str) -> Result<OpId> {
        if let Some(&id) = self.named(name).first() {
            return Ok(id);
        }
        if let Some(raw) = name.strip_prefix('#') {
            if let Ok(index) = raw.parse::<u32>() {
                let id = OpId(index);
                if self.contains(id) {
                    return Ok(id);
                }
            }
        }
        Err(Error::UnknownName(name.to_owned()))
    }

    /// Human readable rendering of `id`'s composition.
    pub fn describe(&self, id: OpId) -> String {
        let Ok(op) = self.lookup(id) else {
            return id.to_string();
        };
        let parts: Vec<String> = op
            .composition
            .elements()
            .iter()
            .map(|e| self.label(*e))
            .collect();
        match op.composition.kind() {
            CompositionKind::Primitive => self.label(id),
            CompositionKind::Sequence => format!("⟨{}⟩", parts.join(", ")),
            CompositionKind::Set => format!("{{{}}}", parts.join(", ")),
        }
    }
}
