//! Operation-spec files.
//!
//! One declaration per line:
//!
//! ```text
//! prim he_is_a
//! prim good
//! prim man
//! seq s = he_is_a good man
//! set pair = good man
//! ```
//!
//! Names must be declared before they are used. Blank lines and lines
//! starting with `#` are skipped.

use crate::error::{Error, Result};
use crate::registry::CompositionKind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub line: usize,
    pub name: String,
    pub kind: CompositionKind,
    pub elements: Vec<String>,
}

pub fn parse(text: &str) -> Result<Vec<Declaration>> {
    parse_in(text, |_| false)
}

/// Like [`parse`], for a file extending a model in which `known` names
/// are already declared.
pub fn parse_in(text: &str, known: impl Fn(&str) -> bool) -> Result<Vec<Declaration>> {
    let mut out = Vec::new();
    let mut declared = std::collections::HashSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let syntax = |message: String| Error::SpecSyntax { line, message };
        let mut words = trimmed.split_whitespace();
        let keyword = words.next().expect("non-empty line");
        let name = words
            .next()
            .ok_or_else(|| syntax(format!("`{keyword}` needs a name")))?
            .to_owned();
        let kind = match keyword {
            "prim" => CompositionKind::Primitive,
            "seq" => CompositionKind::Sequence,
            "set" => CompositionKind::Set,
            other => return Err(syntax(format!("unknown declaration `{other}`"))),
        };

        let elements: Vec<String> = if kind == CompositionKind::Primitive {
            if let Some(extra) = words.next() {
                return Err(syntax(format!("unexpected `{extra}` after primitive name")));
            }
            Vec::new()
        } else {
            match words.next() {
                Some("=") => {}
                _ => return Err(syntax(format!("expected `=` after `{name}`"))),
            }
            let elements: Vec<String> = words.map(str::to_owned).collect();
            if elements.is_empty() {
                return Err(syntax(format!("`{name}` has no elements")));
            }
            if let Some(unknown) = elements
                .iter()
                .find(|e| !declared.contains(e.as_str()) && !known(e))
            {
                return Err(syntax(format!("`{unknown}` is used before it is declared")));
            }
            elements
        };
        declared.insert(name.clone());
        out.push(Declaration {
            line,
            name,
            kind,
            elements,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_declarations() {
        let decls = parse("# comment\nprim a\nprim b\n\nseq s = a b\nset t = b a s\n").unwrap();
        assert_eq!(decls.len(), 4);
        assert_eq!(decls[2].kind, CompositionKind::Sequence);
        assert_eq!(decls[2].elements, ["a", "b"]);
        assert_eq!(decls[3].line, 6);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse("prim a\nseq s = a b\n").unwrap_err();
        assert!(matches!(err, Error::SpecSyntax { line: 2, .. }));
        assert!(matches!(
            parse("thing x"),
            Err(Error::SpecSyntax { line: 1, .. })
        ));
        assert!(matches!(
            parse("prim a\nseq s a"),
            Err(Error::SpecSyntax { line: 2, .. })
        ));
        assert!(matches!(
            parse("prim a\nseq s ="),
            Err(Error::SpecSyntax { line: 2, .. })
        ));
        assert!(matches!(parse("prim a b"), Err(Error::SpecSyntax { .. })));
        assert!(matches!(parse("prim"), Err(Error::SpecSyntax { .. })));
    }

    #[test]
    fn known_names_extend_a_model() {
        let decls = parse_in("seq u = s t\n", |n| n == "s" || n == "t").unwrap();
        assert_eq!(decls[0].elements, ["s", "t"]);
        assert!(parse_in("seq u = s x\n", |n| n == "s").is_err());
    }
}
