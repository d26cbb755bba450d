//! Sentence files and model records.

use std::io::Write;
use std::path::Path;

use fo2enum_core::formula::{Arity, Vocabulary};
use fo2enum_core::{parse_sentence, Sentence, Structure};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Ndjson,
    Text,
}

pub fn read_sentence(path: &Path) -> Result<Sentence, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_sentence(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateInfo {
    pub name: String,
    pub arity: u8,
}

/// First ndjson record: what the atom strings range over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub vocabulary: Vec<PredicateInfo>,
    pub n: u32,
}

impl Header {
    pub fn new(vocabulary: &Vocabulary, n: u32) -> Self {
        let vocabulary = vocabulary
            .predicates()
            .iter()
            .map(|p| PredicateInfo {
                name: p.name.clone(),
                arity: match p.arity {
                    Arity::Unary => 1,
                    Arity::Binary => 2,
                },
            })
            .collect();
        Header { vocabulary, n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRecord {
    /// Positive ground atoms such as `E(e1,e2)`, sorted.
    pub model: Vec<String>,
    pub index: u64,
}

pub struct ModelWriter<W: Write> {
    out: W,
    format: Format,
}

impl<W: Write> ModelWriter<W> {
    pub fn new(out: W, format: Format) -> Self {
        ModelWriter { out, format }
    }

    pub fn header(&mut self, vocabulary: &Vocabulary, n: u32) -> Result<(), CliError> {
        if self.format == Format::Ndjson {
            serde_json::to_writer(&mut self.out, &Header::new(vocabulary, n)).map_err(std::io::Error::from)?;
            writeln!(self.out)?;
        }
        Ok(())
    }

    pub fn model(&mut self, vocabulary: &Vocabulary, index: u64, model: &Structure) -> Result<(), CliError> {
        let atoms = model.render_atoms(vocabulary);
        match self.format {
            Format::Ndjson => {
                let rec = ModelRecord { model: atoms, index };
                serde_json::to_writer(&mut self.out, &rec).map_err(std::io::Error::from)?;
                writeln!(self.out)?;
            }
            Format::Text => {
                write!(self.out, "model {index}:")?;
                for a in &atoms {
                    write!(self.out, " {a}")?;
                }
                writeln!(self.out)?;
            }
        }
        self.out.flush()?;
        Ok(())
    }
}
