//! Binary substructures: the domain and pair recursion.
//!
//! Elements are processed in index order. The processed prefix `0..frontier`
//! has every pair decided. The target `e*` is the element at `frontier`; the
//! partners whose pair with `e*` is already decided form the determined set,
//! the rest are undecided. Whether the current partial structure extends to a
//! model is answered by a configuration query on an auxiliary sentence over
//! the unprocessed elements:
//!
//! * `Z_k(e)` holds while `e` still lacks a witness for clause `k`,
//! * `T` marks the target, `R` marks the target and its determined partners,
//! * `D(x,y) <-> T(x) & R(y) | T(y) & R(x)`, and a pair where `D` holds never
//!   counts as a witness. Those pairs already carry their chosen 2-type, whose
//!   witnesses are recorded in `Z` as soon as the 2-type is tried.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::TemplateSet;
use crate::formula::{Arity, Formula, GroundArgs, GroundLiteral, LiteralSet, PredId, Var, Vocabulary};
use crate::snf::{ExistsClause, SnfSentence};
use crate::structure::Structure;
use crate::types::{build_tables, CompatibilityTables, OneType, PairEntry, TwoType, WitnessMask};
use crate::unary::UnarySubstructure;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BinaryError {
    #[error("the unary substructure does not extend to a model")]
    InconsistentUnary,
    #[error("2-type {0:?} is not compatible with the pair")]
    IncompatibleTwoType(TwoType),
    #[error("element {0} is not an undecided partner of the target")]
    NotUndecided(usize),
    #[error("no target is selected")]
    NoTarget,
    #[error("the pair between the target and element {0} is undecided")]
    PairUndecided(usize),
}

/// The auxiliary sentence together with its tables and lazy template set.
#[derive(Debug)]
pub struct AuxSentence {
    base: SnfSentence,
    base_tables: CompatibilityTables,
    sentence: SnfSentence,
    templates: TemplateSet,
    z: Vec<PredId>,
    t: PredId,
    r: PredId,
    d: PredId,
    /// `(base type, z mask, T, R)` to auxiliary type index
    cells: Vec<u32>,
}

fn aux_phi(phi: &Formula, t: PredId, r: PredId, d: PredId) -> Formula {
    let tr = |a: Var, b: Var| Formula::and(Formula::unary(t, a), Formula::unary(r, b));
    let d_both = Formula::and(Formula::binary(d, Var::X, Var::Y), Formula::binary(d, Var::Y, Var::X));
    let no_d = Formula::and(
        Formula::not(Formula::binary(d, Var::X, Var::Y)),
        Formula::not(Formula::binary(d, Var::Y, Var::X)),
    );
    Formula::and_all([
        phi.clone(),
        Formula::implies(tr(Var::X, Var::Y), d_both),
        Formula::implies(
            Formula::and(Formula::not(tr(Var::X, Var::Y)), Formula::not(tr(Var::Y, Var::X))),
            no_d,
        ),
    ])
}

/// Builds the auxiliary sentence of a normal-form sentence.
pub fn build_aux_sentence(snf: &SnfSentence, with_equality: bool) -> AuxSentence {
    assert!(snf.m() <= 16, "at most 16 existential clauses are supported");
    let mut vocab: Vocabulary = snf.vocabulary().clone();
    let z: Vec<PredId> = (0..snf.m())
        .map(|k| vocab.add_fresh(&alloc::format!("Z{}", k + 1), Arity::Unary))
        .collect();
    let t = vocab.add_fresh("T", Arity::Unary);
    let r = vocab.add_fresh("R", Arity::Unary);
    let d = vocab.add_fresh("D", Arity::Binary);
    let clauses = snf
        .clauses()
        .iter()
        .zip(&z)
        .map(|(c, &zk)| ExistsClause {
            witness: c.witness,
            guard: Some(zk),
            blocker: Some(d),
        })
        .collect();
    let sentence = SnfSentence::from_parts(vocab, aux_phi(snf.phi(), t, r, d), clauses, snf.vocabulary().len())
        .expect("auxiliary sentence is well formed");
    let base_tables = build_tables(snf);
    let tables = build_tables(&sentence);

    let m = snf.m();
    let mut cells = Vec::with_capacity(base_tables.len() << (m + 2));
    for &base in base_tables.one_types() {
        for zmask in 0..1u64 << m {
            for tr in 0..4u64 {
                let (tb, rb) = (tr >> 1 & 1, tr & 1);
                let mut code = base.0;
                for (k, zk) in z.iter().enumerate() {
                    code |= (zmask >> k & 1) << zk.index();
                }
                code |= tb << t.index() | rb << r.index() | (tb & rb) << d.index();
                let idx = tables
                    .index_of(OneType(code))
                    .expect("every extended 1-type is compatible");
                cells.push(idx as u32);
            }
        }
    }
    AuxSentence {
        base: snf.clone(),
        base_tables,
        sentence,
        templates: TemplateSet::lazy(tables, with_equality),
        z,
        t,
        r,
        d,
        cells,
    }
}

impl AuxSentence {
    pub fn sentence(&self) -> &SnfSentence {
        &self.sentence
    }

    pub fn base(&self) -> &SnfSentence {
        &self.base
    }

    pub fn base_tables(&self) -> &CompatibilityTables {
        &self.base_tables
    }

    pub fn tables(&self) -> &CompatibilityTables {
        self.templates.tables()
    }

    pub fn templates(&self) -> &TemplateSet {
        &self.templates
    }

    pub fn z_predicates(&self) -> &[PredId] {
        &self.z
    }

    /// The target, determined and blocking predicates.
    pub fn trd(&self) -> (PredId, PredId, PredId) {
        (self.t, self.r, self.d)
    }

    /// Auxiliary type index of an element with the given features.
    pub fn cell(&self, base: u32, z: WitnessMask, t: bool, r: bool) -> u32 {
        let m = self.z.len();
        let i = (((base as usize) << m | z as usize) << 2) | (t as usize) << 1 | r as usize;
        self.cells[i]
    }
}

/// Reverses one [`EnumerationState::apply_trial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UndoToken {
    e: usize,
    target_witnessed: WitnessMask,
    e_witnessed: WitnessMask,
}

/// Answer of one consistency query, with the partial structure it was
/// asked about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub partial: LiteralSet,
    pub answer: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DebugOptions {
    /// Recompute the auxiliary configuration from scratch after every mutation.
    pub shadow: bool,
    /// Keep every consistency query with its partial structure.
    pub checkpoints: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DebugLog {
    pub shadow_checks: u64,
    pub shadow_mismatches: u64,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Clone, Debug)]
pub struct EnumerationState<'a> {
    aux: &'a AuxSentence,
    n: usize,
    assignment: Vec<u32>,
    frontier: usize,
    target: Option<usize>,
    determined: Vec<bool>,
    witnessed: Vec<WitnessMask>,
    pair_choices: Vec<TwoType>,
    aux_config: Vec<u32>,
    cell: Vec<u32>,
    full: WitnessMask,
    debug: DebugOptions,
    log: DebugLog,
}

fn tri(lo: usize, hi: usize) -> usize {
    hi * (hi - 1) / 2 + lo
}

pub fn init_state<'a>(aux: &'a AuxSentence, unary: &UnarySubstructure) -> Result<EnumerationState<'a>, BinaryError> {
    init_state_with(aux, unary, DebugOptions::default())
}

pub fn init_state_with<'a>(
    aux: &'a AuxSentence,
    unary: &UnarySubstructure,
    debug: DebugOptions,
) -> Result<EnumerationState<'a>, BinaryError> {
    let n = unary.assignment.len();
    let m = aux.z.len();
    let full = if m == 64 { !0 } else { (1 << m) - 1 };
    let witnessed: Vec<WitnessMask> = unary
        .assignment
        .iter()
        .map(|&t| aux.base_tables.self_witness(t as usize))
        .collect();
    let mut s = EnumerationState {
        aux,
        n,
        assignment: unary.assignment.clone(),
        frontier: 0,
        target: None,
        determined: vec![false; n],
        witnessed,
        pair_choices: vec![TwoType(0); n * n.saturating_sub(1) / 2],
        aux_config: vec![0; aux.tables().len()],
        cell: vec![0; n],
        full,
        debug,
        log: DebugLog::default(),
    };
    for e in 0..n {
        let c = s.cell_of(e);
        s.cell[e] = c;
        s.aux_config[c as usize] += 1;
    }
    s.shadow();
    if !s.check() {
        return Err(BinaryError::InconsistentUnary);
    }
    Ok(s)
}

impl<'a> EnumerationState<'a> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frontier(&self) -> usize {
        self.frontier
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn aux_config(&self) -> &[u32] {
        &self.aux_config
    }

    pub fn is_determined(&self, e: usize) -> bool {
        self.determined[e]
    }

    /// Clauses for which `e` still needs a witness.
    pub fn z_mask(&self, e: usize) -> WitnessMask {
        self.full & !self.witnessed[e]
    }

    pub fn log(&self) -> &DebugLog {
        &self.log
    }

    pub fn into_log(self) -> DebugLog {
        self.log
    }

    /// Chosen 2-type of a decided pair, oriented from `a` to `b`.
    pub fn pair_choice(&self, a: usize, b: usize) -> TwoType {
        if a < b {
            self.pair_choices[tri(a, b)]
        } else {
            self.pair_choices[tri(b, a)].swap()
        }
    }

    fn cell_of(&self, e: usize) -> u32 {
        let is_target = self.target == Some(e);
        self.aux
            .cell(self.assignment[e], self.z_mask(e), is_target, self.determined[e])
    }

    fn refresh(&mut self, e: usize) {
        let c = self.cell_of(e);
        let old = self.cell[e];
        if c != old {
            self.aux_config[old as usize] -= 1;
            self.aux_config[c as usize] += 1;
            self.cell[e] = c;
        }
    }

    fn is_decided(&self, lo: usize, hi: usize) -> bool {
        lo < self.frontier || (self.target == Some(lo) && self.determined[hi])
    }

    /// Whether the current partial structure extends to a model.
    pub fn check(&mut self) -> bool {
        let answer = self
            .aux
            .templates
            .sat_counts(&self.aux_config)
            .expect("aux configuration has the table length");
        if self.debug.checkpoints {
            let partial = self.partial_literals();
            self.log.checkpoints.push(Checkpoint { partial, answer });
        }
        answer
    }

    /// Makes the first unprocessed element the target.
    pub fn select_target(&mut self) {
        debug_assert!(self.target.is_none() && self.frontier < self.n);
        let t = self.frontier;
        self.target = Some(t);
        self.determined[t] = true;
        self.refresh(t);
        self.shadow();
    }

    /// Inverse of [`select_target`](Self::select_target).
    pub fn deselect_target(&mut self) {
        let t = self.target.take().expect("a target is selected");
        self.determined[t] = false;
        self.refresh(t);
        self.shadow();
    }

    /// Fixes the pair between the target and `e` to `pi`, oriented from the
    /// target to `e`.
    pub fn apply_trial(&mut self, e: usize, pi: TwoType) -> Result<UndoToken, BinaryError> {
        let t = self.target.ok_or(BinaryError::NoTarget)?;
        if e <= t || e >= self.n || self.determined[e] {
            return Err(BinaryError::NotUndecided(e));
        }
        let view = self
            .aux
            .base_tables
            .pair(self.assignment[t] as usize, self.assignment[e] as usize);
        let entry = view
            .iter()
            .find(|p| p.two_type == pi)
            .ok_or(BinaryError::IncompatibleTwoType(pi))?;
        Ok(self.apply_entry(t, e, entry))
    }

    fn apply_entry(&mut self, t: usize, e: usize, entry: PairEntry) -> UndoToken {
        let token = UndoToken {
            e,
            target_witnessed: self.witnessed[t],
            e_witnessed: self.witnessed[e],
        };
        self.determined[e] = true;
        self.witnessed[t] |= entry.fwd;
        self.witnessed[e] |= entry.bwd;
        self.pair_choices[tri(t, e)] = entry.two_type;
        self.refresh(t);
        self.refresh(e);
        self.shadow();
        token
    }

    pub fn revert(&mut self, token: UndoToken) {
        let t = self.target.expect("a trial is only applied under a target");
        let e = token.e;
        self.determined[e] = false;
        self.witnessed[t] = token.target_witnessed;
        self.witnessed[e] = token.e_witnessed;
        self.pair_choices[tri(t, e)] = TwoType(0);
        self.refresh(t);
        self.refresh(e);
        self.shadow();
    }

    /// Retires the target once all its pairs are decided.
    pub fn advance_frontier(&mut self) -> Result<(), BinaryError> {
        let t = self.target.ok_or(BinaryError::NoTarget)?;
        if let Some(e) = (t + 1..self.n).find(|&e| !self.determined[e]) {
            return Err(BinaryError::PairUndecided(e));
        }
        self.aux_config[self.cell[t] as usize] -= 1;
        self.target = None;
        self.frontier += 1;
        for e in t + 1..self.n {
            self.determined[e] = false;
            self.refresh(e);
        }
        self.shadow();
        Ok(())
    }

    /// Inverse of [`advance_frontier`](Self::advance_frontier).
    pub fn retreat_frontier(&mut self) {
        debug_assert!(self.target.is_none() && self.frontier > 0);
        self.frontier -= 1;
        let t = self.frontier;
        self.target = Some(t);
        for e in t + 1..self.n {
            self.determined[e] = true;
            self.refresh(e);
        }
        self.aux_config[self.cell[t] as usize] += 1;
        self.shadow();
    }

    /// Auxiliary configuration rebuilt from the assignment and the decided
    /// pairs alone.
    pub fn recompute_aux_config(&self) -> Vec<u32> {
        let tables = &self.aux.base_tables;
        let mut witnessed: Vec<WitnessMask> = self
            .assignment
            .iter()
            .map(|&t| tables.self_witness(t as usize))
            .collect();
        for hi in 1..self.n {
            for lo in 0..hi {
                if self.is_decided(lo, hi) {
                    let (fwd, bwd) = tables.witness_masks(self.pair_choices[tri(lo, hi)]);
                    witnessed[lo] |= fwd;
                    witnessed[hi] |= bwd;
                }
            }
        }
        let mut out = vec![0; self.aux_config.len()];
        for e in self.frontier..self.n {
            let is_target = self.target == Some(e);
            let z = self.full & !witnessed[e];
            out[self.aux.cell(self.assignment[e], z, is_target, self.determined[e]) as usize] += 1;
        }
        out
    }

    fn shadow(&mut self) {
        if !self.debug.shadow {
            return;
        }
        self.log.shadow_checks += 1;
        if self.recompute_aux_config() != self.aux_config {
            self.log.shadow_mismatches += 1;
        }
    }

    /// Unary literals of every element plus the literals of decided pairs,
    /// over the base vocabulary.
    pub fn partial_literals(&self) -> LiteralSet {
        let vocab = self.aux.base.vocabulary();
        let types = self.aux.base_tables.one_types();
        let layout = self.aux.base_tables.layout();
        let mut out = LiteralSet::new();
        for (e, &t) in self.assignment.iter().enumerate() {
            let ty = types[t as usize];
            for p in vocab.ids() {
                let args = match vocab.arity(p) {
                    Arity::Unary => GroundArgs::One(e as u32),
                    Arity::Binary => GroundArgs::Two(e as u32, e as u32),
                };
                out.insert(GroundLiteral::new(p, args, ty.holds(p)));
            }
        }
        for hi in 1..self.n {
            for lo in 0..hi {
                if !self.is_decided(lo, hi) {
                    continue;
                }
                let pi = self.pair_choices[tri(lo, hi)];
                for p in vocab.binary_ids() {
                    let s = layout.slot(p).expect("binary");
                    out.insert(GroundLiteral::new(
                        p,
                        GroundArgs::Two(lo as u32, hi as u32),
                        pi.forward(s),
                    ));
                    out.insert(GroundLiteral::new(
                        p,
                        GroundArgs::Two(hi as u32, lo as u32),
                        pi.backward(s),
                    ));
                }
            }
        }
        out
    }

    /// The structure given by the assignment and all pair choices, over the
    /// base vocabulary. Meaningful once every pair is decided.
    pub fn to_structure(&self) -> Structure {
        let vocab = self.aux.base.vocabulary();
        let types = self.aux.base_tables.one_types();
        let layout = self.aux.base_tables.layout();
        let mut s = Structure::for_vocabulary(vocab, self.n as u32);
        for (e, &t) in self.assignment.iter().enumerate() {
            let ty = types[t as usize];
            let e = e as u32;
            for p in vocab.ids() {
                if ty.holds(p) {
                    let args = match vocab.arity(p) {
                        Arity::Unary => GroundArgs::One(e),
                        Arity::Binary => GroundArgs::Two(e, e),
                    };
                    s.set(p, args, true);
                }
            }
        }
        let binary: Vec<(PredId, usize)> = vocab
            .binary_ids()
            .map(|p| (p, layout.slot(p).expect("binary")))
            .collect();
        for hi in 1..self.n {
            for lo in 0..hi {
                let pi = self.pair_choices[tri(lo, hi)];
                if pi.0 == 0 {
                    continue;
                }
                for &(p, slot) in &binary {
                    if pi.forward(slot) {
                        s.set(p, GroundArgs::Two(lo as u32, hi as u32), true);
                    }
                    if pi.backward(slot) {
                        s.set(p, GroundArgs::Two(hi as u32, lo as u32), true);
                    }
                }
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    e: usize,
    next: usize,
    token: Option<UndoToken>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Fresh,
    Running,
    Done,
}

/// Every model extending one unary substructure, as a pull iterator.
pub struct ModelStream<'a> {
    state: Option<EnumerationState<'a>>,
    stack: Vec<Frame>,
    phase: Phase,
}

pub fn enumerate_models<'a>(aux: &'a AuxSentence, unary: &UnarySubstructure) -> ModelStream<'a> {
    enumerate_models_with(aux, unary, DebugOptions::default())
}

pub fn enumerate_models_with<'a>(
    aux: &'a AuxSentence,
    unary: &UnarySubstructure,
    debug: DebugOptions,
) -> ModelStream<'a> {
    match init_state_with(aux, unary, debug) {
        Ok(state) => ModelStream {
            state: Some(state),
            stack: Vec::new(),
            phase: Phase::Fresh,
        },
        Err(_) => ModelStream {
            state: None,
            stack: Vec::new(),
            phase: Phase::Done,
        },
    }
}

impl<'a> ModelStream<'a> {
    pub fn state(&self) -> Option<&EnumerationState<'a>> {
        self.state.as_ref()
    }

    pub fn into_log(self) -> DebugLog {
        self.state.map(EnumerationState::into_log).unwrap_or_default()
    }
}

impl Iterator for ModelStream<'_> {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        let state = self.state.as_mut()?;
        match self.phase {
            Phase::Done => return None,
            Phase::Fresh => {
                self.phase = Phase::Running;
                if state.n < 2 {
                    self.phase = Phase::Done;
                    return Some(state.to_structure());
                }
                state.select_target();
                self.stack.push(Frame {
                    e: 1,
                    next: 0,
                    token: None,
                });
            }
            Phase::Running => {}
        }
        let aux: &AuxSentence = state.aux;
        let tables = &aux.base_tables;
        loop {
            let Some(top) = self.stack.last_mut() else {
                self.phase = Phase::Done;
                return None;
            };
            let t = state.target.expect("frames live under a target");
            let e = top.e;
            if let Some(tok) = top.token.take() {
                state.revert(tok);
                top.next += 1;
            }
            let view = tables.pair(state.assignment[t] as usize, state.assignment[e] as usize);
            while top.next < view.len() {
                let tok = state.apply_entry(t, e, view.get(top.next));
                if state.check() {
                    top.token = Some(tok);
                    break;
                }
                state.revert(tok);
                top.next += 1;
            }
            if top.token.is_some() {
                if e + 1 < state.n {
                    self.stack.push(Frame {
                        e: e + 1,
                        next: 0,
                        token: None,
                    });
                } else if t + 2 < state.n {
                    state.advance_frontier().expect("every partner is decided");
                    state.select_target();
                    self.stack.push(Frame {
                        e: t + 2,
                        next: 0,
                        token: None,
                    });
                } else {
                    return Some(state.to_structure());
                }
            } else {
                self.stack.pop();
                if e == t + 1 && t > 0 {
                    state.deselect_target();
                    state.retreat_frontier();
                }
            }
        }
    }
}
