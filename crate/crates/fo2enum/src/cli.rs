//! Argument parsing and subcommands.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fo2enum_core::binary::DebugOptions;
use fo2enum_core::config::Configuration;
use fo2enum_core::formula::{Arity, Vocabulary};
use fo2enum_core::oracle::{oracle_models, oracle_sentence_models};
use fo2enum_core::snf::back_map_model;
use fo2enum_core::types::OneType;
use fo2enum_core::{Enumerator, EnumeratorError};

use crate::bench::{loglog_slope, measure};
use crate::io::{read_sentence, Format, ModelWriter};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fo2enum",
    version,
    about = "Enumerate the finite models of a two-variable first-order sentence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EqualityMode {
    /// On iff the sentence mentions `=`
    Auto,
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Sentence file
    #[arg(long)]
    pub sentence: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub equality: EqualityMode,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream every model over a domain of size n
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        n: u32,
        /// Stop after this many models
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value = "ndjson")]
        format: Format,
    },
    /// Count models by enumerating them
    Count {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        n: u32,
    },
    /// Decide whether a configuration (comma-separated counts) is satisfiable
    CheckConfig {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        config: String,
    },
    /// Report which domain sizes admit a model
    Spectrum {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        n: Option<u32>,
        /// Comma-separated domain sizes
        #[arg(long)]
        sizes: Option<String>,
    },
    /// Measure the delay between consecutive models
    Bench {
        #[command(flatten)]
        input: Input,
        /// Comma-separated domain sizes
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        /// Also write one JSON record per size to this file
        #[arg(long)]
        ndjson: Option<PathBuf>,
    },
    /// Print the compatible 1-types, delta and templates
    ShowTypes {
        #[command(flatten)]
        input: Input,
    },
    /// Count models by brute force
    #[command(hide = true)]
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        n: u32,
    },
}

fn parse_list(text: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let parts: Result<Vec<u32>, _> = text.split(',').map(|p| p.trim().parse::<u32>()).collect();
    match parts {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "malformed {what} `{text}`: expected comma-separated non-negative integers"
        ))),
    }
}

fn shadow_requested() -> bool {
    std::env::var("FO2_DEBUG_SHADOW").is_ok_and(|v| v == "1")
}

fn load(input: &Input) -> Result<Enumerator, CliError> {
    let sentence = read_sentence(&input.sentence)?;
    let eq = match input.equality {
        EqualityMode::Auto => sentence.uses_equality(),
        EqualityMode::On => true,
        EqualityMode::Off => false,
    };
    let mut e = Enumerator::with_equality(&sentence, eq).map_err(|err| match err {
        EnumeratorError::EqualityRequired => CliError::Usage(err.to_string()),
        EnumeratorError::Config(c) => CliError::Usage(c.to_string()),
    })?;
    if shadow_requested() {
        e.set_debug(DebugOptions {
            shadow: true,
            checkpoints: false,
        });
    }
    Ok(e)
}

fn render_one_type(vocab: &Vocabulary, t: OneType) -> String {
    let lits: Vec<String> = vocab
        .ids()
        .map(|p| {
            let sign = if t.holds(p) { "" } else { "~" };
            match vocab.arity(p) {
                Arity::Unary => format!("{sign}{}(x)", vocab.name(p)),
                Arity::Binary => format!("{sign}{}(x,x)", vocab.name(p)),
            }
        })
        .collect();
    lits.join(" & ")
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Enumerate {
            input,
            n,
            limit,
            format,
        } => {
            let e = load(input)?;
            let vocab = e.sentence().vocabulary();
            let mut w = ModelWriter::new(&mut *out, *format);
            w.header(vocab, *n)?;
            let mut models = e.models(*n);
            let mut index = 0;
            while limit.is_none_or(|l| index < l) {
                let Some(m) = models.next() else { break };
                w.model(vocab, index, &m)?;
                index += 1;
            }
            if shadow_requested() {
                let log = models.finish();
                writeln!(
                    err,
                    "shadow checks: {}, mismatches: {}",
                    log.shadow_checks, log.shadow_mismatches
                )?;
                if log.shadow_mismatches > 0 {
                    return Err(CliError::Invariant("incremental configuration diverged".into()));
                }
            }
        }
        Command::Count { input, n } => {
            let e = load(input)?;
            writeln!(out, "{}", e.count(*n))?;
        }
        Command::CheckConfig { input, config } => {
            let e = load(input)?;
            let c = Configuration(parse_list(config, "configuration")?);
            let sat = e.sat_cfg(&c).map_err(|x| CliError::Usage(x.to_string()))?;
            writeln!(out, "{}", if sat { "SAT" } else { "UNSAT" })?;
        }
        Command::Spectrum { input, n, sizes } => {
            let e = load(input)?;
            let mut list = Vec::new();
            if let Some(n) = n {
                list.push(*n);
            }
            if let Some(s) = sizes {
                list.extend(parse_list(s, "size list")?);
            }
            if list.is_empty() {
                return Err(CliError::Usage("give -n or --sizes".into()));
            }
            for n in list {
                writeln!(out, "{n}\t{}", if e.has_model_of_size(n) { "SAT" } else { "UNSAT" })?;
            }
        }
        Command::Bench {
            input,
            sizes,
            limit,
            ndjson,
        } => {
            let sizes = parse_list(sizes, "size list")?;
            let e = load(input)?;
            let rows: Vec<_> = sizes.iter().map(|&n| measure(&e, n, *limit)).collect();
            writeln!(
                out,
                "{:>6} {:>8} {:>14} {:>14} {:>14} {:>14}",
                "n", "models", "mean_ns", "max_ns", "p99_ns", "first_ns"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>6} {:>8} {:>14.1} {:>14} {:>14} {:>14}",
                    r.n, r.models, r.mean_ns, r.max_ns, r.p99_ns, r.first_ns
                )?;
            }
            match loglog_slope(&rows) {
                Some(s) => writeln!(out, "slope: {s:.3}")?,
                None => writeln!(out, "slope: n/a")?,
            }
            if let Some(path) = ndjson {
                let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
                for r in &rows {
                    serde_json::to_writer(&mut f, r).map_err(std::io::Error::from)?;
                    writeln!(f)?;
                }
                f.flush()?;
            }
        }
        Command::ShowTypes { input } => {
            let e = load(input)?;
            let vocab = e.snf().vocabulary();
            let tables = e.tables();
            writeln!(out, "delta: {}", e.templates().delta())?;
            writeln!(out, "one-types: {}", tables.len())?;
            for (i, &t) in tables.one_types().iter().enumerate() {
                writeln!(out, "  {i}: {}", render_one_type(vocab, t))?;
            }
            let templates: Vec<String> = e
                .templates()
                .templates()
                .unwrap_or_default()
                .iter()
                .map(|c| c.to_string())
                .collect();
            writeln!(out, "templates: {}", templates.join(" "))?;
        }
        Command::Oracle { input, n } => {
            let e = load(input)?;
            let count = match oracle_sentence_models(e.sentence(), *n) {
                Ok(r) => r.count(),
                Err(_) => {
                    let r = oracle_models(e.snf(), *n).map_err(|x| CliError::Usage(x.to_string()))?;
                    let mapped: std::collections::BTreeSet<_> =
                        r.models.iter().map(|m| back_map_model(m, e.mapping())).collect();
                    mapped.len()
                }
            };
            writeln!(out, "{count}")?;
        }
    }
    Ok(())
}
