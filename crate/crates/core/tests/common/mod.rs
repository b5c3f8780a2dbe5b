//! Brute-force oracles and input generators shared by the integration tests.
//!
//! The oracles only read compositions off the registry and rescan
//! everything on every call. They never touch the occurrence index, the
//! concept store's member lists or the engine.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use compabs::{
    Composition, CompositionKind, Concept, ConceptId, GroundAxiom, Machine, ModelConfig, OpId,
    Pattern, Registry, Slot, SystemOfAbstractions, Target,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fresh_model() -> SystemOfAbstractions {
    SystemOfAbstractions::init(
        vec![GroundAxiom::AssumeMeaningful {
            source: "input".into(),
        }],
        ModelConfig::default(),
    )
    .unwrap()
}

/// Every `(encloser, position)` at which `object` appears.
pub fn occurrences(registry: &Registry, object: OpId) -> BTreeSet<(OpId, usize)> {
    let mut out = BTreeSet::new();
    for op in registry.operations() {
        for (i, &e) in op.composition().elements().iter().enumerate() {
            if e == object {
                out.insert((op.id(), i));
            }
        }
    }
    out
}

/// Concepts one composition gives rise to, rebuilt from first principles.
pub fn derive(composition: &Composition, id: OpId) -> BTreeSet<Concept> {
    let elements = composition.elements();
    let mut out = BTreeSet::new();
    if elements.is_empty() {
        return out;
    }
    out.insert(Concept::Enclosing(id));
    for i in 0..elements.len() {
        match composition.kind() {
            CompositionKind::Sequence => {
                let slots = elements
                    .iter()
                    .enumerate()
                    .map(|(j, &e)| if i == j { Slot::Hole } else { Slot::Op(e) })
                    .collect();
                out.insert(Concept::Sequence(Pattern::new(slots).unwrap()));
            }
            CompositionKind::Set => {
                let mut rest = elements.to_vec();
                rest.remove(i);
                out.insert(Concept::set_context(rest));
            }
            CompositionKind::Primitive => unreachable!(),
        }
    }
    out
}

/// Every concept the registered compositions give rise to.
pub fn all_concepts(registry: &Registry) -> BTreeSet<Concept> {
    registry
        .operations()
        .iter()
        .flat_map(|op| derive(op.composition(), op.id()))
        .collect()
}

/// Operations whose composition makes `object` satisfy `concept`.
pub fn witnesses(registry: &Registry, object: OpId, concept: &Concept) -> BTreeSet<OpId> {
    let mut out = BTreeSet::new();
    for op in registry.operations() {
        let c = op.composition();
        let hit = match concept {
            Concept::Enclosing(e) => op.id() == *e && c.elements().contains(&object),
            Concept::Sequence(p) => {
                c.kind() == CompositionKind::Sequence
                    && c.elements().len() == p.slots().len()
                    && p.slots().iter().zip(c.elements()).all(|(s, &e)| match s {
                        Slot::Hole => e == object,
                        Slot::Op(x) => *x == e,
                    })
            }
            Concept::Set(rest) => {
                let mut want: Vec<OpId> = rest.clone();
                want.push(object);
                want.sort();
                c.kind() == CompositionKind::Set && c.elements() == want.as_slice()
            }
        };
        if hit {
            out.insert(op.id());
        }
    }
    out
}

pub fn satisfies(registry: &Registry, object: OpId, concept: &Concept) -> bool {
    !witnesses(registry, object, concept).is_empty()
}

pub fn extension(registry: &Registry, concept: &Concept) -> BTreeSet<OpId> {
    registry
        .ids()
        .filter(|&o| satisfies(registry, o, concept))
        .collect()
}

pub fn abstraction(registry: &Registry, object: OpId) -> BTreeSet<Concept> {
    all_concepts(registry)
        .into_iter()
        .filter(|c| satisfies(registry, object, c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TargetValue {
    Op(OpId),
    Concept(Concept),
}

pub type RelationValue = (Concept, TargetValue, bool);

pub fn relations(registry: &Registry, object: OpId) -> BTreeSet<RelationValue> {
    let mut out = BTreeSet::new();
    for concept in abstraction(registry, object) {
        for other in extension(registry, &concept) {
            if other != object {
                out.insert((concept.clone(), TargetValue::Op(other), true));
            }
        }
        for encloser in witnesses(registry, object, &concept) {
            for entailed in abstraction(registry, encloser) {
                out.insert((concept.clone(), TargetValue::Concept(entailed), false));
            }
        }
    }
    out
}

pub fn concept_value(machine: &Machine, id: ConceptId) -> Concept {
    machine.concept(id).unwrap().clone()
}

pub fn concept_values(
    machine: &Machine,
    ids: impl IntoIterator<Item = ConceptId>,
) -> BTreeSet<Concept> {
    ids.into_iter()
        .map(|id| concept_value(machine, id))
        .collect()
}

pub fn relation_values(
    machine: &Machine,
    relations: &[compabs::Relation],
) -> BTreeSet<RelationValue> {
    relations
        .iter()
        .map(|r| {
            let target = match r.target {
                Target::Op(o) => TargetValue::Op(o),
                Target::Concept(c) => TargetValue::Concept(concept_value(machine, c)),
            };
            (concept_value(machine, r.via), target, r.equivalent)
        })
        .collect()
}

/// `x ~ y` under `concept`: both operate as the concept describes.
pub fn equivalent(registry: &Registry, x: OpId, y: OpId, concept: &Concept) -> bool {
    satisfies(registry, x, concept) && satisfies(registry, y, concept)
}

/// Equivalence class of `x` by a scan over every registered object.
pub fn class_of(registry: &Registry, x: OpId, concept: &Concept) -> BTreeSet<OpId> {
    registry
        .ids()
        .filter(|&y| equivalent(registry, x, y, concept))
        .collect()
}

/// Names bound to more than one distinct composition.
pub fn rebound_names(registry: &Registry) -> BTreeSet<String> {
    let mut seen: BTreeMap<&str, Vec<&Composition>> = BTreeMap::new();
    for op in registry.operations() {
        for label in op.labels() {
            seen.entry(label).or_default().push(op.composition());
        }
    }
    seen.into_iter()
        .filter(|(_, cs)| cs.iter().any(|c| *c != cs[0]))
        .map(|(n, _)| n.to_owned())
        .collect()
}

/// Positions of `tokens` covered by some sequence context in the machine's
/// concept list, scanning every concept. `window` adds n-gram contexts.
pub fn supported_positions(
    machine: &Machine,
    tokens: &[String],
    window: Option<usize>,
) -> Vec<bool> {
    let registry = machine.registry();
    let ids: Vec<Option<OpId>> = tokens.iter().map(|t| registry.find_primitive(t)).collect();
    let mut spans = vec![(0, tokens.len())];
    if let Some(n) = window {
        if n < tokens.len() {
            spans.extend((0..=tokens.len() - n).map(|s| (s, s + n)));
        }
    }
    (0..tokens.len())
        .map(|i| {
            machine.concepts().concepts().iter().any(|c| {
                let Concept::Sequence(p) = c else {
                    return false;
                };
                spans.iter().any(|&(s, e)| {
                    s <= i
                        && i < e
                        && p.slots().len() == e - s
                        && p.hole() == i - s
                        && p.slots()
                            .iter()
                            .zip(&ids[s..e])
                            .all(|(slot, id)| match (slot, id) {
                                (Slot::Hole, Some(id)) => satisfies(registry, *id, c),
                                (Slot::Op(x), Some(id)) => x == id,
                                _ => false,
                            })
                })
            })
        })
        .collect()
}

/// A registry recipe: each step composes earlier operations by index.
#[derive(Clone, Debug)]
pub struct Recipe {
    pub primitives: usize,
    pub steps: Vec<(CompositionKind, Vec<usize>)>,
}

pub fn random_recipe(rng: &mut impl Rng, max_ops: usize) -> Recipe {
    let primitives = rng.gen_range(2..=6);
    let composites = rng.gen_range(1..=max_ops - primitives);
    let mut steps = Vec::new();
    for step in 0..composites {
        let available = primitives + step;
        let kind = if rng.gen_bool(0.7) {
            CompositionKind::Sequence
        } else {
            CompositionKind::Set
        };
        let len = rng.gen_range(1..=4);
        // bias towards recent operations so levels grow
        let elements = (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    rng.gen_range(0..available)
                } else {
                    rng.gen_range(0..primitives)
                }
            })
            .collect();
        steps.push((kind, elements));
    }
    Recipe { primitives, steps }
}

pub fn build_machine(recipe: &Recipe) -> (Machine, Vec<OpId>) {
    let mut machine = Machine::new();
    let mut ids: Vec<OpId> = (0..recipe.primitives)
        .map(|i| {
            machine
                .register(Composition::primitive(), Some(&format!("p{i}")))
                .unwrap()
        })
        .collect();
    for (kind, elements) in &recipe.steps {
        let elements: Vec<OpId> = elements.iter().map(|&i| ids[i % ids.len()]).collect();
        ids.push(
            machine
                .register(Composition::of_kind(*kind, elements), None)
                .unwrap(),
        );
    }
    (machine, ids)
}

pub fn build_model(recipe: &Recipe) -> SystemOfAbstractions {
    let mut model = fresh_model();
    let mut ids: Vec<OpId> = Vec::new();
    for i in 0..recipe.primitives {
        let (id, _) = model
            .declare(Some(&format!("p{i}")), Composition::primitive())
            .unwrap();
        ids.push(id);
    }
    for (kind, elements) in &recipe.steps {
        let elements: Vec<OpId> = elements.iter().map(|&i| ids[i % ids.len()]).collect();
        let (id, fresh) = model
            .declare(None, Composition::of_kind(*kind, elements))
            .unwrap();
        if fresh {
            model.absorb(id).unwrap();
        }
        ids.push(id);
    }
    model
}

pub fn recipe_strategy(max_ops: usize) -> impl proptest::strategy::Strategy<Value = Recipe> {
    use proptest::prelude::*;
    (
        2usize..=6,
        proptest::collection::vec(
            (any::<bool>(), proptest::collection::vec(0usize..64, 1..=4)),
            1..max_ops,
        ),
    )
        .prop_map(|(primitives, raw)| Recipe {
            primitives,
            steps: raw
                .into_iter()
                .map(|(seq, elements)| {
                    (
                        if seq {
                            CompositionKind::Sequence
                        } else {
                            CompositionKind::Set
                        },
                        elements,
                    )
                })
                .collect(),
        })
}

/// Sentences over a small grammar, so contexts recur across lines.
pub fn synthetic_corpus(
    seed: u64,
    lines: usize,
    vocabulary: usize,
    length: std::ops::RangeInclusive<usize>,
) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let function_words = [
        "the", "a", "is", "of", "and", "to", "he", "she", "it", "was",
    ];
    let content: Vec<String> = (0..vocabulary).map(|i| format!("w{i}")).collect();
    (0..lines)
        .map(|_| {
            let n = rng.gen_range(length.clone());
            let words: Vec<&str> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.35) {
                        *function_words.choose(&mut rng).unwrap()
                    } else {
                        // skewed towards the head of the vocabulary
                        let r: f64 = rng.gen();
                        content[((r * r) * vocabulary as f64) as usize % vocabulary].as_str()
                    }
                })
                .collect();
            words.join(" ")
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
