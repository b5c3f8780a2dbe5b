//! Reading text into the model.
//!
//! Each line is one sentence: a sequence operation over token primitives.
//! Ingesting a line registers the tokens and the sentence, then absorbs the
//! new operations into the system of abstractions.

use std::collections::BTreeSet;
use std::ops::AddAssign;

use serde::Serialize;

use crate::concept::{Concept, ConceptId, Pattern};
use crate::engine::{Relation, Target};
use crate::error::{Error, Result};
use crate::model::SystemOfAbstractions;
use crate::opspec::Declaration;
use crate::registry::{Composition, CompositionKind, OpId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TokenRule {
    /// Split on whitespace and detach every punctuation character.
    #[default]
    DetachPunctuation,
    WhitespaceOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub rule: TokenRule,
    /// Also register every contiguous n-gram of this length.
    pub window: Option<usize>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            rule: TokenRule::DetachPunctuation,
            window: None,
        }
    }
}

impl TokenizerConfig {
    pub fn validate(&self) -> Result<()> {
        match self.window {
            Some(n) if n < 2 => Err(Error::InvalidConfig(format!(
                "window must be at least 2, got {n}"
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IngestStats {
    pub lines_read: usize,
    pub sentences_registered: usize,
    pub tokens_registered: usize,
    pub concepts_derived: usize,
    pub abstractions_inserted: usize,
    /// Invalid UTF-8 sequences replaced while decoding.
    pub invalid_sequences: usize,
}

impl AddAssign for IngestStats {
    fn add_assign(&mut self, rhs: Self) {
        self.lines_read += rhs.lines_read;
        self.sentences_registered += rhs.sentences_registered;
        self.tokens_registered += rhs.tokens_registered;
        self.concepts_derived += rhs.concepts_derived;
        self.abstractions_inserted += rhs.abstractions_inserted;
        self.invalid_sequences += rhs.invalid_sequences;
    }
}

/// Decodes one line, replacing invalid UTF-8. Returns the text and the
/// number of invalid sequences replaced.
pub fn decode_line(bytes: &[u8]) -> (String, usize) {
    let mut text = String::with_capacity(bytes.len());
    let mut invalid = 0;
    for chunk in bytes.utf8_chunks() {
        text.push_str(chunk.valid());
        if !chunk.invalid().is_empty() {
            text.push(char::REPLACEMENT_CHARACTER);
            invalid += 1;
        }
    }
    (text, invalid)
}

pub fn tokenize(line: &str, config: &TokenizerConfig) -> Vec<String> {
    let mut tokens = Vec::new();
    for word in line.split_whitespace() {
        let word = if config.lowercase {
            word.to_lowercase()
        } else {
            word.to_owned()
        };
        match config.rule {
            TokenRule::WhitespaceOnly => tokens.push(word),
            TokenRule::DetachPunctuation => {
                let mut current = String::new();
                for c in word.chars() {
                    if c.is_alphanumeric() || c == '_' {
                        current.push(c);
                    } else {
                        if !current.is_empty() {
                            tokens.push(std::mem::take(&mut current));
                        }
                        tokens.push(c.to_string());
                    }
                }
                if !current.is_empty() {
                    tokens.push(current);
                }
            }
        }
    }
    tokens
}

/// Label given to a sentence or n-gram operation.
pub fn sentence_name(tokens: &[String]) -> String {
    format!("<{}>", tokens.join(" "))
}

/// Registers `tokens` as a sequence, labelled with its text unless that
/// label already denotes something else.
fn register_sequence(
    model: &mut SystemOfAbstractions,
    ids: &[OpId],
    tokens: &[String],
    stats: &mut IngestStats,
) -> Result<(OpId, bool)> {
    let composition = Composition::sequence(ids.iter().copied());
    let name = sentence_name(tokens);
    let registry = model.machine().registry();
    let taken = registry
        .named(&name)
        .iter()
        .any(|id| registry.composition(*id).is_ok_and(|c| *c != composition));
    let label = if taken { None } else { Some(name.as_str()) };
    let (id, fresh) = model.declare(label, composition)?;
    if fresh {
        stats.abstractions_inserted += model.absorb(id)?;
    }
    Ok((id, fresh))
}

/// Ingests one sentence. Returns the sentence operation, or `None` for a
/// line without tokens.
pub fn ingest_line(
    model: &mut SystemOfAbstractions,
    line: &str,
    config: &TokenizerConfig,
) -> Result<(Option<OpId>, IngestStats)> {
    config.validate()?;
    let mut stats = IngestStats {
        lines_read: 1,
        ..IngestStats::default()
    };
    let concepts_before = model.machine().concepts().len();
    let tokens = tokenize(line, config);
    if tokens.is_empty() {
        return Ok((None, stats));
    }

    let mut ids = Vec::with_capacity(tokens.len());
    for token in &tokens {
        let (id, fresh) = model.declare(Some(token), Composition::primitive())?;
        stats.tokens_registered += usize::from(fresh);
        ids.push(id);
    }
    let (sentence, fresh) = register_sequence(model, &ids, &tokens, &mut stats)?;
    stats.sentences_registered += usize::from(fresh);

    if let Some(n) = config.window {
        if n < ids.len() {
            for start in 0..=ids.len() - n {
                register_sequence(
                    model,
                    &ids[start..start + n],
                    &tokens[start..start + n],
                    &mut stats,
                )?;
            }
        }
    }

    stats.concepts_derived = model.machine().concepts().len() - concepts_before;
    Ok((Some(sentence), stats))
}

/// Ingests a corpus: one sentence per line, `#` lines skipped.
pub fn ingest_corpus(
    model: &mut SystemOfAbstractions,
    text: &str,
    config: &TokenizerConfig,
) -> Result<IngestStats> {
    let mut stats = IngestStats::default();
    for line in text.lines() {
        if line.trim_start().starts_with('#') {
            stats.lines_read += 1;
            continue;
        }
        let (_, delta) = ingest_line(model, line, config)?;
        stats += delta;
    }
    Ok(stats)
}

/// Like [`ingest_corpus`], decoding raw bytes line by line.
pub fn ingest_bytes(
    model: &mut SystemOfAbstractions,
    bytes: &[u8],
    config: &TokenizerConfig,
) -> Result<IngestStats> {
    let mut stats = IngestStats::default();
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    if body.is_empty() {
        return Ok(stats);
    }
    for raw in body.split(|b| *b == b'\n') {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let (line, invalid) = decode_line(raw);
        stats.invalid_sequences += invalid;
        if line.trim_start().starts_with('#') {
            stats.lines_read += 1;
            continue;
        }
        let (_, delta) = ingest_line(model, &line, config)?;
        stats += delta;
    }
    Ok(stats)
}

/// Registers the operations of a spec file in order, absorbing each.
pub fn load_spec(
    model: &mut SystemOfAbstractions,
    declarations: &[Declaration],
) -> Result<IngestStats> {
    let mut stats = IngestStats::default();
    let concepts_before = model.machine().concepts().len();
    for decl in declarations {
        stats.lines_read += 1;
        let elements = decl
            .elements
            .iter()
            .map(|e| model.machine().registry().resolve(e))
            .collect::<Result<Vec<_>>>()?;
        let (id, fresh) =
            model.declare(Some(&decl.name), Composition::of_kind(decl.kind, elements))?;
        if fresh {
            match decl.kind {
                CompositionKind::Primitive => stats.tokens_registered += 1,
                _ => stats.sentences_registered += 1,
            }
            stats.abstractions_inserted += model.absorb(id)?;
        }
    }
    stats.concepts_derived = model.machine().concepts().len() - concepts_before;
    Ok(stats)
}

/// Context of a contextual-relation query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    Concept(ConceptId),
    /// A high-level context given as an object of its own.
    Object(OpId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContextualQuery {
    pub lambda: OpId,
    pub sigma: Context,
}

fn targets(relations: &[Relation]) -> BTreeSet<Target> {
    relations.iter().map(|r| r.target).collect()
}

/// Constructions related to `q.lambda` within `q.sigma`.
///
/// With a concept as context these are the objects `lambda` relates to
/// through it. With an object as context they are the objects sharing at
/// least one relation target with `lambda` and at least one with `sigma`.
pub fn contextual_relation(model: &SystemOfAbstractions, q: ContextualQuery) -> Result<Vec<OpId>> {
    let engine = model.engine();
    let machine = model.machine();
    match q.sigma {
        Context::Concept(concept) => Ok(engine
            .relations_via(q.lambda, concept)?
            .into_iter()
            .filter_map(|r| match r.target {
                Target::Op(id) => Some(id),
                Target::Concept(_) => None,
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()),
        Context::Object(sigma) => {
            let from_lambda = targets(&engine.relations_of(q.lambda)?);
            let from_sigma = targets(&engine.relations_of(sigma)?);

            // anything sharing a target with lambda relates to that target
            let mut candidates = BTreeSet::new();
            for target in &from_lambda {
                match *target {
                    Target::Op(y) => {
                        for concept in engine.concepts_of(y)? {
                            candidates.extend(machine.extension(concept)?);
                        }
                    }
                    Target::Concept(d) => {
                        for holder in machine.extension(d)? {
                            candidates.extend(
                                machine
                                    .registry()
                                    .composition(holder)?
                                    .elements()
                                    .iter()
                                    .copied(),
                            );
                        }
                    }
                }
            }

            let mut out = Vec::new();
            for x in candidates {
                if x == q.lambda || x == sigma {
                    continue;
                }
                let own = targets(&engine.relations_of(x)?);
                if !own.is_disjoint(&from_lambda) && !own.is_disjoint(&from_sigma) {
                    out.push(x);
                }
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionSupport {
    pub token: String,
    pub object: Option<OpId>,
    /// Type II concepts the token satisfies at this position.
    pub supporting: Vec<ConceptId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meaning {
    pub text: String,
    pub positions: Vec<PositionSupport>,
}

impl Meaning {
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_meaningful(&self) -> bool {
        self.positions.iter().all(|p| !p.supporting.is_empty())
    }

    pub fn gaps(&self) -> impl Iterator<Item = (usize, &PositionSupport)> {
        self.positions
            .iter()
            .enumerate()
            .filter(|(_, p)| p.supporting.is_empty())
    }
}

/// Judges `line` against what the model has read: each token must sit in
/// a Type II context, at its position in the line, that some registered
/// sentence (or n-gram, with a window) already exhibits.
pub fn meaningfulness_check(
    model: &SystemOfAbstractions,
    line: &str,
    config: &TokenizerConfig,
) -> Result<Meaning> {
    config.validate()?;
    let machine = model.machine();
    let registry = machine.registry();
    let tokens = tokenize(line, config);
    let ids: Vec<Option<OpId>> = tokens.iter().map(|t| registry.find_primitive(t)).collect();

    let mut windows = vec![(0, tokens.len())];
    if let Some(n) = config.window {
        if n < tokens.len() {
            windows.extend((0..=tokens.len() - n).map(|start| (start, start + n)));
        }
    }

    let mut positions = Vec::with_capacity(tokens.len());
    for (i, token) in tokens.iter().enumerate() {
        let mut supporting = BTreeSet::new();
        if let Some(object) = ids[i] {
            for &(start, end) in windows.iter().filter(|(s, e)| *s <= i && i < *e) {
                let Some(span) = ids[start..end]
                    .iter()
                    .copied()
                    .collect::<Option<Vec<OpId>>>()
                else {
                    continue;
                };
                let concept = Concept::Sequence(Pattern::around(&span, i - start));
                if let Some(id) = machine.concepts().find(&concept) {
                    if machine.satisfies(object, id)? {
                        supporting.insert(id);
                    }
                }
            }
        }
        positions.push(PositionSupport {
            token: token.clone(),
            object: ids[i],
            supporting: supporting.into_iter().collect(),
        });
    }
    Ok(Meaning {
        text: line.to_owned(),
        positions,
    })
}
