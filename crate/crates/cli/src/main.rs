use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use compabs::corpus::{self, Context, ContextualQuery, Meaning, TokenRule, TokenizerConfig};
use compabs::format::{self, PositionRecord, Record};
use compabs::{opspec, Error, GroundAxiom, ModelConfig, Result, SystemOfAbstractions};

mod expr;

#[derive(Parser)]
#[command(
    name = "compabs",
    version,
    about = "Build and query systems of computable abstractions"
)]
struct Cli {
    /// Model file to read and update.
    #[arg(long, global = true, default_value = "model.jsonl")]
    model: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    /// One JSON record per line.
    Structured,
}

#[derive(Args)]
struct TokenizerArgs {
    /// Also register every n-gram of this length.
    #[arg(long)]
    window: Option<usize>,
    /// Keep tokens as written.
    #[arg(long)]
    no_lowercase: bool,
    /// Split on whitespace only, keeping punctuation attached.
    #[arg(long)]
    keep_punctuation: bool,
}

impl TokenizerArgs {
    fn config(&self) -> TokenizerConfig {
        TokenizerConfig {
            lowercase: !self.no_lowercase,
            rule: if self.keep_punctuation {
                TokenRule::WhitespaceOnly
            } else {
                TokenRule::DetachPunctuation
            },
            window: self.window,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Read a corpus or an operation spec into the model.
    Ingest {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        corpus: Option<PathBuf>,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Decomposition depth, fixed when the model is created.
        #[arg(long)]
        depth: Option<u32>,
        #[command(flatten)]
        tokenizer: TokenizerArgs,
    },
    /// Print the concepts an object satisfies, with witnesses.
    Abstract { name: String },
    #[command(subcommand)]
    Query(Query),
    /// Report every contradiction in the model.
    Check,
    /// Write the model stream.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Renumber operations and concepts canonically first.
        #[arg(long)]
        canonical: bool,
    },
    /// Replace the model with a previously exported stream.
    Import {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum Query {
    /// Constructions related to an object within a context.
    Relate {
        name: String,
        /// A concept expression or an object acting as high-level context.
        #[arg(long)]
        context: String,
    },
    /// Objects equivalent to an object with respect to a concept.
    Class {
        name: String,
        #[arg(long)]
        concept: String,
    },
    /// Whether two objects can be told apart, and by what.
    Distinguish { a: String, b: String },
    /// Judge whether a line is meaningful to the model.
    Meaningful {
        line: String,
        #[command(flatten)]
        tokenizer: TokenizerArgs,
    },
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Io(_) => 1,
        Error::Contradiction(_)
        | Error::RefutedGround { .. }
        | Error::ContradictoryGround { .. } => 2,
        Error::UnknownName(_) | Error::UnknownId(_) | Error::UnknownConcept(_) => 4,
        Error::NotSatisfied { .. } => 5,
        _ => 3,
    }
}

fn load(path: &Path) -> Result<SystemOfAbstractions> {
    format::import(&fs::read_to_string(path)?)
}

/// Writes through a temporary file in the same directory, so readers see
/// either the old model or the new one.
fn save(path: &Path, model: &SystemOfAbstractions) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(format::export(model).as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn ingest(
    cli: &Cli,
    corpus_path: Option<&Path>,
    spec_path: Option<&Path>,
    depth: Option<u32>,
    tokenizer: &TokenizerArgs,
) -> Result<String> {
    let mut model = if cli.model.exists() {
        let model = load(&cli.model)?;
        if depth.is_some() && model.config().decomposition_depth != depth {
            return Err(Error::InvalidConfig(format!(
                "model was built with depth {:?}; the depth cannot change",
                model.config().decomposition_depth
            )));
        }
        model
    } else {
        let config = ModelConfig {
            decomposition_depth: depth,
            ..ModelConfig::default()
        };
        let ground = vec![GroundAxiom::AssumeMeaningful {
            source: "input".into(),
        }];
        SystemOfAbstractions::init(ground, config)?
    };

    let stats = match (corpus_path, spec_path) {
        (Some(path), _) => corpus::ingest_bytes(&mut model, &fs::read(path)?, &tokenizer.config())?,
        (None, Some(path)) => {
            let registry = model.machine().registry();
            let declarations =
                opspec::parse_in(&fs::read_to_string(path)?, |n| registry.resolve(n).is_ok())?;
            corpus::load_spec(&mut model, &declarations)?
        }
        (None, None) => unreachable!("clap requires an input"),
    };
    save(&cli.model, &model)?;

    Ok(match cli.format {
        OutputFormat::Structured => serde_json::to_string(&stats).expect("stats serialize") + "\n",
        OutputFormat::Text => format!(
            "lines read: {}\nsentences registered: {}\ntokens registered: {}\nconcepts derived: {}\nabstractions inserted: {}\ninvalid sequences replaced: {}\n",
            stats.lines_read,
            stats.sentences_registered,
            stats.tokens_registered,
            stats.concepts_derived,
            stats.abstractions_inserted,
            stats.invalid_sequences,
        ),
    })
}

fn abstract_cmd(cli: &Cli, name: &str) -> Result<String> {
    let model = load(&cli.model)?;
    let machine = model.machine();
    let object = machine.registry().resolve(name)?;
    let abstraction = model.engine().abstract_all(object)?;
    if cli.format == OutputFormat::Structured {
        return Ok(Record::from_abstraction(&abstraction).to_line() + "\n");
    }
    let mut out = format!(
        "{} satisfies {} concept(s)\n",
        machine.registry().label(object),
        abstraction.concepts.len()
    );
    for &concept in &abstraction.concepts {
        let witnesses: Vec<String> = machine
            .witnesses(object, concept)?
            .iter()
            .map(|w| format!("{}{}", machine.registry().label(w.encloser), w.place))
            .collect();
        out.push_str(&format!(
            "  {concept} {}  witness {}\n",
            machine.describe_concept(concept),
            witnesses.join(", ")
        ));
    }
    Ok(out)
}

fn op_list(
    model: &SystemOfAbstractions,
    ids: &[compabs::OpId],
    format: OutputFormat,
) -> Result<String> {
    let mut out = String::new();
    for &id in ids {
        match format {
            OutputFormat::Text => out.push_str(&model.machine().registry().label(id)),
            OutputFormat::Structured => {
                out.push_str(&Record::from_op(model.machine(), id)?.to_line())
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn meaning_output(meaning: &Meaning, format: OutputFormat) -> String {
    match format {
        OutputFormat::Structured => {
            Record::Meaning {
                text: meaning.text.clone(),
                meaningful: meaning.is_meaningful(),
                empty: meaning.is_empty(),
                positions: meaning
                    .positions
                    .iter()
                    .map(|p| PositionRecord {
                        token: p.token.clone(),
                        supporting: p.supporting.clone(),
                    })
                    .collect(),
            }
            .to_line()
                + "\n"
        }
        OutputFormat::Text => {
            let mut out = String::from(match (meaning.is_meaningful(), meaning.is_empty()) {
                (_, true) => "meaningful (empty)\n",
                (true, false) => "meaningful\n",
                (false, false) => "not meaningful\n",
            });
            for (i, p) in meaning.positions.iter().enumerate() {
                let support = if p.supporting.is_empty() {
                    match p.object {
                        Some(_) => "gap".to_owned(),
                        None => "gap (unknown token)".to_owned(),
                    }
                } else {
                    p.supporting
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                out.push_str(&format!("  {i} {}: {support}\n", p.token));
            }
            out
        }
    }
}

fn query(cli: &Cli, query: &Query) -> Result<String> {
    let model = load(&cli.model)?;
    let registry = model.machine().registry();
    match query {
        Query::Relate { name, context } => {
            let lambda = registry.resolve(name)?;
            let sigma = if expr::concept_id(context).is_some() {
                Context::Concept(expr::resolve(&model, context)?)
            } else if let Ok(object) = registry.resolve(context) {
                Context::Object(object)
            } else {
                Context::Concept(expr::resolve(&model, context)?)
            };
            let related = corpus::contextual_relation(&model, ContextualQuery { lambda, sigma })?;
            op_list(&model, &related, cli.format)
        }
        Query::Class { name, concept } => {
            let object = registry.resolve(name)?;
            let concept = expr::resolve(&model, concept)?;
            let class = model.machine().equivalence_class(object, concept)?;
            op_list(&model, &class, cli.format)
        }
        Query::Distinguish { a, b } => {
            let (a, b) = (registry.resolve(a)?, registry.resolve(b)?);
            let distinction = model.engine().distinguishable(a, b)?;
            Ok(match cli.format {
                OutputFormat::Text => distinction.describe(model.machine()) + "\n",
                OutputFormat::Structured => {
                    let (relation, concept, holder) = match &distinction {
                        compabs::Distinction::Indistinguishable => (None, None, None),
                        compabs::Distinction::ByRelation { relation } => {
                            let concept = match relation.target {
                                compabs::Target::Concept(c) => Some(c),
                                compabs::Target::Op(_) => None,
                            };
                            (
                                Some(Box::new(Record::from_relation(relation))),
                                concept,
                                Some(relation.source),
                            )
                        }
                        compabs::Distinction::ByConcept { concept, holder } => {
                            (None, Some(*concept), Some(*holder))
                        }
                    };
                    Record::Distinction {
                        a,
                        b,
                        distinguishable: distinction.is_distinguishable(),
                        relation,
                        concept,
                        holder,
                    }
                    .to_line()
                        + "\n"
                }
            })
        }
        Query::Meaningful { line, tokenizer } => {
            let meaning = corpus::meaningfulness_check(&model, line, &tokenizer.config())?;
            Ok(meaning_output(&meaning, cli.format))
        }
    }
}

/// Output plus whether the model was found consistent.
fn check(cli: &Cli) -> Result<(String, bool)> {
    let model = load(&cli.model)?;
    let report = model.check_consistency();
    let out = match cli.format {
        OutputFormat::Text if report.is_empty() => "consistent\n".to_owned(),
        OutputFormat::Text => report.iter().map(|c| format!("{c}\n")).collect(),
        OutputFormat::Structured => {
            let lines: Vec<String> = report.iter().map(ToString::to_string).collect();
            serde_json::json!({ "consistent": report.is_empty(), "contradictions": lines })
                .to_string()
                + "\n"
        }
    };
    Ok((out, report.is_empty()))
}

fn run(cli: &Cli) -> Result<(String, ExitCode)> {
    let ok = |out: String| Ok((out, ExitCode::SUCCESS));
    match &cli.command {
        Command::Ingest {
            corpus,
            spec,
            depth,
            tokenizer,
        } => ok(ingest(
            cli,
            corpus.as_deref(),
            spec.as_deref(),
            *depth,
            tokenizer,
        )?),
        Command::Abstract { name } => ok(abstract_cmd(cli, name)?),
        Command::Query(q) => ok(query(cli, q)?),
        Command::Check => {
            let (out, consistent) = check(cli)?;
            Ok((
                out,
                if consistent {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                },
            ))
        }
        Command::Export { out, canonical } => {
            let mut model = load(&cli.model)?;
            if *canonical {
                model = model.canonicalize()?;
            }
            let text = format::export(&model);
            match out {
                Some(path) => {
                    fs::write(path, text)?;
                    ok(String::new())
                }
                None => ok(text),
            }
        }
        Command::Import { input } => {
            let model = format::import(&fs::read_to_string(input)?)?;
            save(&cli.model, &model)?;
            ok(format!(
                "imported {} operations, {} concepts, {} abstractions, {} relations\n",
                model.machine().registry().len(),
                model.machine().concepts().len(),
                model.abstractions().len(),
                model.relations().len(),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            code
        }
        Err(error) => {
            eprintln!("compabs: {error}");
            if let Error::Contradiction(c) = &error {
                eprintln!("  first:  {}", c.first);
                eprintln!("  second: {}", c.second);
            }
            ExitCode::from(exit_code(&error))
        }
    }
}
