//! The end-to-end enumerator: normal form, unary substructures, then binary
//! substructures, mapped back to the input vocabulary.

use alloc::boxed::Box;

use crate::binary::{build_aux_sentence, enumerate_models_with, AuxSentence, DebugLog, DebugOptions, ModelStream};
use crate::config::{discover_templates, sat_cfg, ConfigError, Configuration, TemplateSet};
use crate::formula::{evaluate, Binding, Sentence};
use crate::snf::{back_map_model, to_snf, BackMapping, SnfSentence};
use crate::structure::Structure;
use crate::types::{build_tables, CompatibilityTables};
use crate::unary::{enum_sat_configs, enum_unary_substructures, UnarySubstructures};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnumeratorError {
    #[error("the sentence uses equality but equality handling is switched off")]
    EqualityRequired,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug)]
pub struct Enumerator {
    sentence: Sentence,
    snf: SnfSentence,
    mapping: BackMapping,
    with_equality: bool,
    templates: TemplateSet,
    aux: AuxSentence,
    debug: DebugOptions,
}

impl Enumerator {
    /// Prepares enumeration, handling equality iff the sentence uses it.
    pub fn new(sentence: &Sentence) -> Result<Self, EnumeratorError> {
        Self::with_equality(sentence, sentence.uses_equality())
    }

    pub fn with_equality(sentence: &Sentence, with_equality: bool) -> Result<Self, EnumeratorError> {
        if sentence.uses_equality() && !with_equality {
            return Err(EnumeratorError::EqualityRequired);
        }
        let (snf, mapping) = to_snf(sentence);
        let templates = discover_templates(build_tables(&snf), with_equality)?;
        let aux = build_aux_sentence(&snf, with_equality);
        Ok(Enumerator {
            sentence: sentence.clone(),
            snf,
            mapping,
            with_equality,
            templates,
            aux,
            debug: DebugOptions::default(),
        })
    }

    pub fn set_debug(&mut self, debug: DebugOptions) {
        self.debug = debug;
    }

    pub fn sentence(&self) -> &Sentence {
        &self.sentence
    }

    pub fn snf(&self) -> &SnfSentence {
        &self.snf
    }

    pub fn mapping(&self) -> &BackMapping {
        &self.mapping
    }

    pub fn with_equality_enabled(&self) -> bool {
        self.with_equality
    }

    pub fn tables(&self) -> &CompatibilityTables {
        self.templates.tables()
    }

    pub fn templates(&self) -> &TemplateSet {
        &self.templates
    }

    pub fn aux(&self) -> &AuxSentence {
        &self.aux
    }

    pub fn sat_cfg(&self, config: &Configuration) -> Result<bool, ConfigError> {
        sat_cfg(&self.templates, config)
    }

    pub fn unary_substructures(&self, n: u32) -> UnarySubstructures<'_> {
        enum_unary_substructures(&self.templates, n)
    }

    /// Whether the input sentence has a model of size `n`.
    pub fn has_model_of_size(&self, n: u32) -> bool {
        if n == 0 {
            return self.holds_on_empty_domain();
        }
        enum_sat_configs(&self.templates, n).next().is_some()
    }

    fn holds_on_empty_domain(&self) -> bool {
        let empty = Structure::for_vocabulary(self.sentence.vocabulary(), 0);
        evaluate(self.sentence.formula(), &Binding::default(), &empty, 0).expect("sentence is closed")
    }

    /// Models of the normal form, including auxiliary predicates.
    pub fn snf_models(&self, n: u32) -> SnfModels<'_> {
        SnfModels {
            aux: &self.aux,
            debug: self.debug,
            unary: self.unary_substructures(n),
            current: None,
            log: DebugLog::default(),
        }
    }

    /// Models of the input sentence over `{0, .., n - 1}`.
    pub fn models(&self, n: u32) -> Models<'_> {
        let inner = if n == 0 {
            let empty = Structure::for_vocabulary(self.sentence.vocabulary(), 0);
            ModelsInner::Empty(self.holds_on_empty_domain().then_some(empty))
        } else {
            ModelsInner::Snf(Box::new(self.snf_models(n)))
        };
        Models {
            mapping: &self.mapping,
            inner,
        }
    }

    /// Number of models, by full enumeration.
    pub fn count(&self, n: u32) -> u64 {
        self.models(n).count() as u64
    }
}

pub struct SnfModels<'a> {
    aux: &'a AuxSentence,
    debug: DebugOptions,
    unary: UnarySubstructures<'a>,
    current: Option<ModelStream<'a>>,
    log: DebugLog,
}

impl SnfModels<'_> {
    fn retire(&mut self) {
        if let Some(stream) = self.current.take() {
            let log = stream.into_log();
            self.log.shadow_checks += log.shadow_checks;
            self.log.shadow_mismatches += log.shadow_mismatches;
            self.log.checkpoints.extend(log.checkpoints);
        }
    }

    /// Debug records of every finished inner stream.
    pub fn finish(mut self) -> DebugLog {
        self.retire();
        self.log
    }
}

impl Iterator for SnfModels<'_> {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        loop {
            if let Some(m) = self.current.as_mut().and_then(Iterator::next) {
                return Some(m);
            }
            self.retire();
            let u = self.unary.next()?;
            self.current = Some(enumerate_models_with(self.aux, &u, self.debug));
        }
    }
}

enum ModelsInner<'a> {
    Empty(Option<Structure>),
    Snf(Box<SnfModels<'a>>),
}

pub struct Models<'a> {
    mapping: &'a BackMapping,
    inner: ModelsInner<'a>,
}

impl Models<'_> {
    /// Debug records of the enumeration so far.
    pub fn finish(self) -> DebugLog {
        match self.inner {
            ModelsInner::Empty(_) => DebugLog::default(),
            ModelsInner::Snf(it) => it.finish(),
        }
    }
}

impl Iterator for Models<'_> {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        match &mut self.inner {
            ModelsInner::Empty(s) => s.take(),
            ModelsInner::Snf(it) => it.next().map(|m| back_map_model(&m, self.mapping)),
        }
    }
}
