//! Line-delimited JSON model files.
//!
//! The first line is a header carrying the format version and the model
//! configuration. It is followed by `ground`, `op`, `concept`, `abs` and
//! `rel` records, in that order, each group sorted by id. Exporting the same
//! model twice gives the same bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::concept::{Concept, ConceptId, Pattern, Slot};
use crate::engine::{Abstraction, Relation, Target};
use crate::error::{Error, Result};
use crate::machine::Machine;
use crate::model::{GroundAxiom, ModelConfig, SystemOfAbstractions};
use crate::registry::{Composition, CompositionKind, OpId};

pub const FORMAT: &str = "compabs-model";
pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptForm {
    #[serde(rename = "type1")]
    Enclosing,
    #[serde(rename = "seq")]
    Sequence,
    Set,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
pub enum Record {
    Header {
        format: String,
        version: u32,
        config: ModelConfig,
    },
    Ground {
        axiom: GroundAxiom,
    },
    Op {
        id: OpId,
        kind: CompositionKind,
        elements: Vec<OpId>,
        level: u32,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        names: Vec<String>,
    },
    Concept {
        id: ConceptId,
        form: ConceptForm,
        /// Enclosing operation, pattern slots (`null` is the hole) or
        /// co-members, depending on `form`.
        ops: Vec<Option<OpId>>,
    },
    Abs {
        object: OpId,
        concepts: Vec<ConceptId>,
        scope: Vec<OpId>,
    },
    Rel {
        source: OpId,
        via: ConceptId,
        target: Target,
        equivalent: bool,
    },
    /// Query answer: whether two objects can be told apart.
    Distinction {
        a: OpId,
        b: OpId,
        distinguishable: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        relation: Option<Box<Record>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        concept: Option<ConceptId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        holder: Option<OpId>,
    },
    /// Query answer: meaningfulness verdict for one line.
    Meaning {
        text: String,
        meaningful: bool,
        empty: bool,
        positions: Vec<PositionRecord>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionRecord {
    pub token: String,
    pub supporting: Vec<ConceptId>,
}

impl Record {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn parse(line: &str) -> serde_json::Result<Record> {
        serde_json::from_str(line)
    }

    pub fn header(config: &ModelConfig) -> Record {
        Record::Header {
            format: FORMAT.to_owned(),
            version: VERSION,
            config: config.clone(),
        }
    }

    pub fn from_op(machine: &Machine, id: OpId) -> Result<Record> {
        let op = machine.registry().lookup(id)?;
        Ok(Record::Op {
            id,
            kind: op.composition().kind(),
            elements: op.composition().elements().to_vec(),
            level: op.level(),
            names: op.labels().to_vec(),
        })
    }

    pub fn from_concept(id: ConceptId, concept: &Concept) -> Record {
        let (form, ops) = match concept {
            Concept::Enclosing(op) => (ConceptForm::Enclosing, vec![Some(*op)]),
            Concept::Sequence(p) => (
                ConceptForm::Sequence,
                p.slots()
                    .iter()
                    .map(|s| match s {
                        Slot::Hole => None,
                        Slot::Op(id) => Some(*id),
                    })
                    .collect(),
            ),
            Concept::Set(members) => (
                ConceptForm::Set,
                members.iter().copied().map(Some).collect(),
            ),
        };
        Record::Concept { id, form, ops }
    }

    pub fn from_abstraction(a: &Abstraction) -> Record {
        Record::Abs {
            object: a.object,
            concepts: a.concepts.iter().copied().collect(),
            scope: a.scope.iter().copied().collect(),
        }
    }

    pub fn from_relation(r: &Relation) -> Record {
        Record::Rel {
            source: r.source,
            via: r.via,
            target: r.target,
            equivalent: r.equivalent,
        }
    }

    pub fn as_abstraction(&self) -> Option<Abstraction> {
        match self {
            Record::Abs {
                object,
                concepts,
                scope,
            } => Some(Abstraction {
                object: *object,
                concepts: concepts.iter().copied().collect(),
                scope: scope.iter().copied().collect(),
            }),
            _ => None,
        }
    }

    pub fn as_relation(&self) -> Option<Relation> {
        match self {
            Record::Rel {
                source,
                via,
                target,
                equivalent,
            } => Some(Relation {
                source: *source,
                via: *via,
                target: *target,
                equivalent: *equivalent,
            }),
            _ => None,
        }
    }
}

fn concept_from_record(
    form: ConceptForm,
    ops: &[Option<OpId>],
) -> std::result::Result<Concept, String> {
    match form {
        ConceptForm::Enclosing => match ops {
            [Some(op)] => Ok(Concept::Enclosing(*op)),
            _ => Err("type1 concept needs exactly one operation".into()),
        },
        ConceptForm::Sequence => {
            Pattern::new(ops.iter().map(|o| o.map_or(Slot::Hole, Slot::Op)).collect())
                .map(Concept::Sequence)
                .map_err(|e| e.to_string())
        }
        ConceptForm::Set => ops
            .iter()
            .map(|o| o.ok_or_else(|| "set concept cannot contain a hole".to_owned()))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Concept::set_context),
    }
}

pub fn export(model: &SystemOfAbstractions) -> String {
    let mut out = String::new();
    let mut push = |record: Record| {
        out.push_str(&record.to_line());
        out.push('\n');
    };
    push(Record::header(model.config()));
    for axiom in model.ground() {
        push(Record::Ground {
            axiom: axiom.clone(),
        });
    }
    let machine = model.machine();
    for id in machine.registry().ids() {
        push(Record::from_op(machine, id).expect("registered id"));
    }
    for (id, concept) in machine.concepts().ids().zip(machine.concepts().concepts()) {
        push(Record::from_concept(id, concept));
    }
    for abstraction in model.abstractions().values() {
        push(Record::from_abstraction(abstraction));
    }
    for relation in model.relations() {
        push(Record::from_relation(relation));
    }
    out
}

/// Rebuilds a model from an exported stream.
///
/// Entries are loaded as written, without passing the consistency gate, so
/// a hand-edited file with contradictions still loads and can be checked.
pub fn import(text: &str) -> Result<SystemOfAbstractions> {
    let malformed = |line: usize, message: String| Error::MalformedStream { line, message };

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (first, header) = lines
        .next()
        .ok_or_else(|| malformed(1, "missing header".into()))?;
    let config = match Record::parse(header).map_err(|e| malformed(first, e.to_string()))? {
        Record::Header {
            format,
            version,
            config,
        } => {
            if format != FORMAT {
                return Err(malformed(first, format!("unknown format `{format}`")));
            }
            if version != VERSION {
                return Err(Error::VersionMismatch {
                    found: version,
                    expected: VERSION,
                });
            }
            config
        }
        _ => return Err(malformed(first, "first record must be the header".into())),
    };

    let mut ground = Vec::new();
    let mut ops = Vec::new();
    let mut concepts = Vec::new();
    let mut abstractions: BTreeMap<OpId, Abstraction> = BTreeMap::new();
    let mut relations = BTreeSet::new();
    let mut abs_lines = Vec::new();
    let mut rel_lines = Vec::new();
    for (number, line) in lines {
        let record = Record::parse(line).map_err(|e| malformed(number, e.to_string()))?;
        match record {
            Record::Ground { axiom } => ground.push(axiom),
            r @ Record::Op { .. } => ops.push((number, r)),
            Record::Concept {
                id,
                form,
                ops: slots,
            } => {
                if id.index() as usize != concepts.len() {
                    return Err(malformed(
                        number,
                        format!("expected concept C{}", concepts.len()),
                    ));
                }
                let concept =
                    concept_from_record(form, &slots).map_err(|m| malformed(number, m))?;
                concepts.push((number, concept));
            }
            r @ Record::Abs { .. } => {
                let a = r.as_abstraction().expect("abs record");
                abs_lines.push((number, a.clone()));
                abstractions
                    .entry(a.object)
                    .or_insert_with(|| Abstraction::empty(a.object))
                    .merge(&a);
            }
            r @ Record::Rel { .. } => {
                let rel = r.as_relation().expect("rel record");
                rel_lines.push((number, rel));
                relations.insert(rel);
            }
            Record::Header { .. } => return Err(malformed(number, "duplicate header".into())),
            Record::Distinction { .. } | Record::Meaning { .. } => {
                return Err(malformed(
                    number,
                    "query output is not a model record".into(),
                ))
            }
        }
    }

    let mut machine = Machine::new();
    for (_, concept) in &concepts {
        machine.seed_concept(concept.clone());
    }
    for (number, record) in &ops {
        let Record::Op {
            id,
            kind,
            elements,
            level,
            names,
        } = record
        else {
            unreachable!()
        };
        let composition = Composition::of_kind(*kind, elements.iter().copied());
        if *kind == CompositionKind::Primitive && names.len() > 1 {
            return Err(malformed(*number, "a primitive has a single name".into()));
        }
        let mut labels = names.iter().map(String::as_str);
        let (registered, fresh) = machine
            .register_fresh(composition.clone(), labels.next())
            .map_err(|e| malformed(*number, e.to_string()))?;
        if registered != *id || !fresh {
            return Err(malformed(
                *number,
                format!("operation {id} is out of order or duplicated"),
            ));
        }
        for label in labels {
            machine
                .register_fresh(composition.clone(), Some(label))
                .map_err(|e| malformed(*number, e.to_string()))?;
        }
        let actual = machine.registry().lookup(registered)?.level();
        if actual != *level {
            return Err(malformed(
                *number,
                format!("level {level} does not match computed {actual}"),
            ));
        }
    }
    if machine.concepts().len() != concepts.len() {
        return Err(malformed(
            0,
            format!(
                "operations derive {} concepts but the stream lists {}",
                machine.concepts().len(),
                concepts.len()
            ),
        ));
    }
    for (number, concept) in &concepts {
        if let Some(&missing) = concept
            .ops()
            .iter()
            .find(|o| !machine.registry().contains(**o))
        {
            return Err(malformed(
                *number,
                format!("concept refers to unregistered {missing}"),
            ));
        }
    }

    let known_op = |id: OpId| machine.registry().contains(id);
    let known_concept = |id: ConceptId| (id.index() as usize) < concepts.len();
    for (number, a) in &abs_lines {
        if !known_op(a.object)
            || !a.scope.iter().all(|o| known_op(*o))
            || !a.concepts.iter().all(|c| known_concept(*c))
        {
            return Err(malformed(
                *number,
                "abstraction refers to unknown ids".into(),
            ));
        }
    }
    for (number, r) in &rel_lines {
        let target_known = match r.target {
            Target::Op(o) => known_op(o),
            Target::Concept(c) => known_concept(c),
        };
        if !known_op(r.source) || !known_concept(r.via) || !target_known {
            return Err(malformed(*number, "relation refers to unknown ids".into()));
        }
    }

    Ok(SystemOfAbstractions::from_parts(
        machine,
        ground,
        config,
        abstractions,
        relations,
    ))
}
