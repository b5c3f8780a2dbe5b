//! Concept expressions accepted on the command line.
//!
//! * `C4` names a concept by id.
//! * `s(_)` is the Type I concept of the operation named `s`.
//! * `<a _ b>` (or `⟨a, _, b⟩`) is a sequence context, `_` the hole.
//! * `{a _}` is a set context.

use compabs::{Concept, ConceptId, Error, Pattern, Result, Slot, SystemOfAbstractions};

pub fn concept_id(text: &str) -> Option<ConceptId> {
    let digits = text.strip_prefix('C')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().map(ConceptId::new)
}

fn words(body: &str) -> Vec<&str> {
    body.split_whitespace()
        .map(|w| match w.strip_suffix(',') {
            Some(stripped) if !stripped.is_empty() => stripped,
            _ => w,
        })
        .collect()
}

fn unwrap<'a>(text: &'a str, open: &[&str], close: &[&str]) -> Option<&'a str> {
    let inner = open.iter().find_map(|o| text.strip_prefix(o))?;
    close.iter().find_map(|c| inner.strip_suffix(c))
}

/// Parses `text` into a concept without looking it up.
pub fn parse(model: &SystemOfAbstractions, text: &str) -> Result<Option<Concept>> {
    let registry = model.machine().registry();
    let unknown = || Error::UnknownName(text.to_owned());
    let text = text.trim();

    if let Some(name) = text.strip_suffix("(_)") {
        return Ok(Some(Concept::Enclosing(registry.resolve(name.trim())?)));
    }
    if let Some(body) = unwrap(text, &["<", "⟨"], &[">", "⟩"]) {
        let slots = words(body)
            .into_iter()
            .map(|w| match w {
                "_" => Ok(Slot::Hole),
                name => registry.resolve(name).map(Slot::Op),
            })
            .collect::<Result<Vec<_>>>()?;
        return Pattern::new(slots).map(|p| Some(Concept::Sequence(p)));
    }
    if let Some(body) = unwrap(text, &["{"], &["}"]) {
        let words = words(body);
        if words.iter().filter(|w| **w == "_").count() != 1 {
            return Err(unknown());
        }
        let members = words
            .into_iter()
            .filter(|w| *w != "_")
            .map(|w| registry.resolve(w))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(Concept::set_context(members)));
    }
    Ok(None)
}

/// Resolves a concept expression to a concept the model knows.
pub fn resolve(model: &SystemOfAbstractions, text: &str) -> Result<ConceptId> {
    if let Some(id) = concept_id(text.trim()) {
        model.machine().concept(id)?;
        return Ok(id);
    }
    let concept = parse(model, text)?.ok_or_else(|| Error::UnknownName(text.to_owned()))?;
    model
        .machine()
        .concepts()
        .find(&concept)
        .ok_or_else(|| Error::UnknownName(text.to_owned()))
}
