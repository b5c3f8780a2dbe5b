mod common;

use std::collections::BTreeSet;

use compabs::corpus::{self, TokenizerConfig};
use compabs::format::export;
use compabs::{Composition, Concept, ConceptId, Entry, Error, OpId, Place, Relation, Target};
use proptest::prelude::*;
use proptest::sample::Index;

use common::{build_machine, build_model, recipe_strategy, Recipe};

fn corpus_strategy() -> impl Strategy<Value = Vec<String>> {
    let word = prop::sample::select(vec![
        "a", "b", "c", "d", "e", "f", "he", "is", "good", "man",
    ]);
    prop::collection::vec(
        prop::collection::vec(word, 1..6).prop_map(|w| w.join(" ")),
        1..12,
    )
}

fn stored_matches_recomputed(model: &compabs::SystemOfAbstractions) -> Result<(), TestCaseError> {
    let engine = model.engine();
    let mut recomputed = BTreeSet::new();
    for id in model.machine().registry().ids() {
        recomputed.extend(engine.relations_of(id).unwrap());
        let concepts = engine.concepts_of(id).unwrap();
        match model.abstraction(id) {
            Some(stored) => prop_assert_eq!(&stored.concepts, &concepts),
            None => prop_assert!(concepts.is_empty()),
        }
    }
    prop_assert_eq!(model.relations(), &recomputed);
    Ok(())
}

proptest! {
    #[test]
    fn interning_is_structural(recipe in recipe_strategy(30)) {
        let (mut machine, ids) = build_machine(&recipe);
        let before = machine.registry().len();
        let distinct: BTreeSet<&Composition> = machine.registry().operations().iter().map(|o| o.composition()).collect();
        prop_assert_eq!(distinct.len() + recipe.primitives - 1, before);
        for &id in &ids {
            let composition = machine.registry().composition(id).unwrap().clone();
            if !composition.is_primitive() {
                prop_assert_eq!(machine.register(composition, None).unwrap(), id);
            }
        }
        prop_assert_eq!(machine.registry().len(), before);
    }

    #[test]
    fn levels_and_acyclicity(recipe in recipe_strategy(30)) {
        let (machine, _) = build_machine(&recipe);
        let registry = machine.registry();
        for op in registry.operations() {
            let elements = op.composition().elements();
            prop_assert!(elements.iter().all(|e| *e < op.id()));
            let expected = elements
                .iter()
                .map(|e| registry.lookup(*e).unwrap().level() + 1)
                .max()
                .unwrap_or(0);
            prop_assert_eq!(op.level(), expected);
        }
    }

    #[test]
    fn occurrence_index_is_complete(recipe in recipe_strategy(30)) {
        let (machine, _) = build_machine(&recipe);
        let registry = machine.registry();
        for id in registry.ids() {
            let oracle = common::occurrences(registry, id);
            let indexed: BTreeSet<OpId> = registry.occurrences(id).unwrap().iter().map(|o| o.encloser).collect();
            let enclosers: BTreeSet<OpId> = oracle.iter().map(|(e, _)| *e).collect();
            prop_assert_eq!(indexed, enclosers);
            for occurrence in registry.occurrences(id).unwrap() {
                if let Place::Position(p) = occurrence.place {
                    prop_assert!(oracle.contains(&(occurrence.encloser, p as usize)));
                }
            }
        }
    }

    #[test]
    fn queries_match_oracles(recipe in recipe_strategy(25)) {
        let (machine, _) = build_machine(&recipe);
        let registry = machine.registry();
        let engine = compabs::Engine::new(&machine);
        prop_assert_eq!(
            common::concept_values(&machine, machine.concepts().ids()),
            common::all_concepts(registry)
        );
        for id in registry.ids() {
            prop_assert_eq!(
                common::concept_values(&machine, engine.concepts_of(id).unwrap()),
                common::abstraction(registry, id)
            );
            prop_assert_eq!(
                common::relation_values(&machine, &engine.relations_of(id).unwrap()),
                common::relations(registry, id)
            );
        }
        for c in machine.concepts().ids() {
            let value = common::concept_value(&machine, c);
            let extension: BTreeSet<OpId> = machine.extension(c).unwrap().into_iter().collect();
            prop_assert_eq!(&extension, &common::extension(registry, &value));
            for &x in &extension {
                let class: BTreeSet<OpId> = machine.equivalence_class(x, c).unwrap().into_iter().collect();
                prop_assert_eq!(class, common::class_of(registry, x, &value));
            }
        }
    }

    #[test]
    fn witnesses_are_sound(recipe in recipe_strategy(30)) {
        let (machine, _) = build_machine(&recipe);
        let registry = machine.registry();
        for c in machine.concepts().ids() {
            for x in machine.extension(c).unwrap() {
                let witnesses = machine.witnesses(x, c).unwrap();
                prop_assert!(!witnesses.is_empty());
                for w in witnesses {
                    let composition = registry.composition(w.encloser).unwrap();
                    match w.place {
                        Place::Position(p) => prop_assert_eq!(composition.elements()[p as usize], x),
                        Place::Member => prop_assert!(composition.elements().contains(&x)),
                    }
                }
            }
        }
    }

    #[test]
    fn equivalence_is_an_equivalence(recipe in recipe_strategy(25), picks in prop::collection::vec(any::<(Index, Index, Index)>(), 8)) {
        let (machine, _) = build_machine(&recipe);
        for c in machine.concepts().ids() {
            let extension = machine.extension(c).unwrap();
            if extension.is_empty() {
                continue;
            }
            let related = |x: OpId, y: OpId| machine.equivalence_class(x, c).map(|cl| cl.contains(&y)).unwrap_or(false);
            for (i, j, k) in &picks {
                let (x, y, z) = (*i.get(&extension), *j.get(&extension), *k.get(&extension));
                prop_assert!(related(x, x));
                prop_assert_eq!(related(x, y), related(y, x));
                if related(x, y) && related(y, z) {
                    prop_assert!(related(x, z));
                }
            }
        }
    }

    #[test]
    fn restriction_is_a_subset(recipe in recipe_strategy(25)) {
        let model = build_model(&recipe);
        let engine = model.engine();
        for id in model.machine().registry().ids() {
            let all: BTreeSet<Relation> = engine.relations_of(id).unwrap().into_iter().collect();
            for c in engine.concepts_of(id).unwrap() {
                for r in engine.restrict(id, c).unwrap() {
                    prop_assert!(all.contains(&r));
                }
            }
        }
    }

    #[test]
    fn queries_leave_the_model_untouched(recipe in recipe_strategy(25)) {
        let model = build_model(&recipe);
        let before = export(&model);
        let engine = model.engine();
        let ids: Vec<OpId> = model.machine().registry().ids().collect();
        for &a in &ids {
            let _ = engine.relations_of(a);
            let _ = engine.distinguishable(a, ids[0]);
            let _ = model.machine().equivalence_class(a, ConceptId::new(0));
        }
        let _ = model.check_consistency();
        let _ = corpus::meaningfulness_check(&model, "p0 p1", &TokenizerConfig::default());
        prop_assert_eq!(export(&model), before);
    }

    #[test]
    fn incremental_absorb_matches_recomputation(recipe in recipe_strategy(25)) {
        let model = build_model(&recipe);
        stored_matches_recomputed(&model)?;
        prop_assert!(model.check_consistency().is_empty());
    }

    #[test]
    fn ingestion_matches_recomputation(lines in corpus_strategy()) {
        let mut model = common::fresh_model();
        corpus::ingest_corpus(&mut model, &lines.join("\n"), &TokenizerConfig::default()).unwrap();
        stored_matches_recomputed(&model)?;
        prop_assert!(common::rebound_names(model.machine().registry()).is_empty());
    }

    #[test]
    fn rejected_entries_change_nothing(recipe in recipe_strategy(20), object in any::<Index>(), concept in any::<Index>()) {
        let mut model = build_model(&recipe);
        let before = export(&model);
        let ids: Vec<OpId> = model.machine().registry().ids().collect();
        let concepts: Vec<ConceptId> = model.machine().concepts().ids().collect();
        prop_assume!(!concepts.is_empty());
        let (x, c) = (*object.get(&ids), *concept.get(&concepts));
        let registry = model.machine().registry();
        let value = common::concept_value(model.machine(), c);
        let holds = common::satisfies(registry, x, &value);
        let unrefutable = matches!(value, Concept::Enclosing(e) if registry.composition(e).unwrap().is_primitive());
        match model.insert(Entry::Assertion { object: x, concept: c }) {
            Ok(_) => prop_assert!(holds || unrefutable),
            Err(Error::Contradiction(found)) => {
                prop_assert!(!holds);
                prop_assert_eq!(export(&model), before.clone());
                prop_assert!(!found.first.to_string().is_empty() && !found.second.to_string().is_empty());
            }
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }

        let before = export(&model);
        let bogus = Relation { source: x, via: c, target: Target::Op(x), equivalent: true };
        prop_assert!(model.insert(Entry::Relation(bogus)).is_err());
        prop_assert_eq!(export(&model), before.clone());
        let rebind = model.declare(Some("p0"), Composition::sequence([ids[0]]));
        prop_assert!(matches!(rebind, Err(Error::Contradiction(_))));
        prop_assert_eq!(export(&model), before);
    }

    #[test]
    fn order_does_not_matter(lines in corpus_strategy(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = lines.clone();
        shuffled.shuffle(&mut common::rng(seed));
        let build = |lines: &[String]| {
            let mut model = common::fresh_model();
            corpus::ingest_corpus(&mut model, &lines.join("\n"), &TokenizerConfig::default()).unwrap();
            export(&model.canonicalize().unwrap())
        };
        prop_assert_eq!(build(&lines), build(&shuffled));
    }

    #[test]
    fn understanding_only_grows(lines in corpus_strategy(), extra in corpus_strategy()) {
        let cfg = TokenizerConfig::default();
        let mut model = common::fresh_model();
        corpus::ingest_corpus(&mut model, &lines.join("\n"), &cfg).unwrap();
        let snapshot: Vec<(OpId, BTreeSet<Concept>)> = model
            .machine()
            .registry()
            .ids()
            .map(|id| (id, common::concept_values(model.machine(), model.engine().concepts_of(id).unwrap())))
            .collect();
        corpus::ingest_corpus(&mut model, &extra.join("\n"), &cfg).unwrap();
        for (id, before) in snapshot {
            let after = common::concept_values(model.machine(), model.engine().concepts_of(id).unwrap());
            prop_assert!(before.is_subset(&after));
        }
    }

    #[test]
    fn ingested_lines_are_meaningful(lines in corpus_strategy()) {
        let cfg = TokenizerConfig::default();
        let mut model = common::fresh_model();
        corpus::ingest_corpus(&mut model, &lines.join("\n"), &cfg).unwrap();
        for line in &lines {
            let verdict = corpus::meaningfulness_check(&model, line, &cfg).unwrap();
            prop_assert!(verdict.is_meaningful());
            let tokens = corpus::tokenize(line, &cfg);
            prop_assert!(common::supported_positions(model.machine(), &tokens, None).into_iter().all(|s| s));
        }
    }

    #[test]
    fn meaningfulness_matches_pattern_scan(lines in corpus_strategy(), probe in corpus_strategy(), window in prop::option::of(2usize..4)) {
        let cfg = TokenizerConfig { window, ..TokenizerConfig::default() };
        let mut model = common::fresh_model();
        corpus::ingest_corpus(&mut model, &lines.join("\n"), &cfg).unwrap();
        for line in &probe {
            let verdict = corpus::meaningfulness_check(&model, line, &cfg).unwrap();
            let tokens = corpus::tokenize(line, &cfg);
            let oracle = common::supported_positions(model.machine(), &tokens, window);
            let got: Vec<bool> = verdict.positions.iter().map(|p| !p.supporting.is_empty()).collect();
            prop_assert_eq!(got, oracle);
        }
    }

    #[test]
    fn high_level_context_matches_shared_neighbour_scan(lines in corpus_strategy(), a in any::<Index>(), b in any::<Index>()) {
        use compabs::corpus::{Context, ContextualQuery};
        let mut model = common::fresh_model();
        corpus::ingest_corpus(&mut model, &lines.join("\n"), &TokenizerConfig::default()).unwrap();
        let ids: Vec<OpId> = model.machine().registry().ids().collect();
        let (lambda, sigma) = (*a.get(&ids), *b.get(&ids));
        let got = corpus::contextual_relation(&model, ContextualQuery { lambda, sigma: Context::Object(sigma) }).unwrap();
        let registry = model.machine().registry();
        let targets = |x: OpId| -> BTreeSet<common::TargetValue> {
            common::relations(registry, x).into_iter().map(|(_, t, _)| t).collect()
        };
        let (tl, ts) = (targets(lambda), targets(sigma));
        let want: Vec<OpId> = ids
            .iter()
            .copied()
            .filter(|&x| x != lambda && x != sigma)
            .filter(|&x| {
                let tx = targets(x);
                !tx.is_disjoint(&tl) && !tx.is_disjoint(&ts)
            })
            .collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn recipe_builders_agree() {
    let recipe = Recipe {
        primitives: 2,
        steps: vec![
            (compabs::CompositionKind::Sequence, vec![0, 1]),
            (compabs::CompositionKind::Set, vec![2, 0]),
        ],
    };
    let (machine, _) = build_machine(&recipe);
    let model = build_model(&recipe);
    assert_eq!(machine.registry().len(), model.machine().registry().len());
    assert_eq!(machine.concepts().len(), model.machine().concepts().len());
}
