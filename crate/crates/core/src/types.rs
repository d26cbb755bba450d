//! 1-types, 2-types and compatibility tables.
//!
//! A [`OneType`] stores one bit per predicate: `P(x)` for unary `P` and
//! `R(x,x)` for binary `R`, bit `i` belonging to predicate `i`. A [`TwoType`]
//! stores two bits per binary predicate, `R(x,y)` at `2s` and `R(y,x)` at
//! `2s + 1`, where `s` is the predicate's position among binary predicates.
//! Both are ordered by their numeric code.

use alloc::vec::Vec;

use crate::formula::{evaluate_ground, Arity, Binding, Formula, GroundArgs, Interpretation, PredId, Vocabulary};
use crate::snf::SnfSentence;

/// Bit `k` stands for the `k`-th existential clause.
pub type WitnessMask = u64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OneType(pub u64);

impl OneType {
    pub fn holds(self, pred: PredId) -> bool {
        self.0 >> pred.index() & 1 == 1
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoType(pub u64);

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;

impl TwoType {
    /// `R(x,y)` for the binary predicate at slot `s`.
    pub fn forward(self, slot: usize) -> bool {
        self.0 >> (2 * slot) & 1 == 1
    }

    /// `R(y,x)` for the binary predicate at slot `s`.
    pub fn backward(self, slot: usize) -> bool {
        self.0 >> (2 * slot + 1) & 1 == 1
    }

    /// The same 2-type read with `x` and `y` exchanged.
    pub fn swap(self) -> TwoType {
        TwoType(((self.0 & EVEN_BITS) << 1) | ((self.0 >> 1) & EVEN_BITS))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Where each predicate lives inside the type encodings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeLayout {
    arities: Vec<Arity>,
    slots: Vec<Option<usize>>,
    binary: usize,
}

impl TypeLayout {
    pub fn new(vocabulary: &Vocabulary) -> Self {
        let mut binary = 0;
        let mut slots = Vec::with_capacity(vocabulary.len());
        for p in vocabulary.predicates() {
            match p.arity {
                Arity::Unary => slots.push(None),
                Arity::Binary => {
                    slots.push(Some(binary));
                    binary += 1;
                }
            }
        }
        assert!(vocabulary.len() <= 63, "at most 63 predicates are supported");
        assert!(binary <= 31, "at most 31 binary predicates are supported");
        TypeLayout {
            arities: vocabulary.predicates().iter().map(|p| p.arity).collect(),
            slots,
            binary,
        }
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn binary_count(&self) -> usize {
        self.binary
    }

    pub fn one_type_count(&self) -> u64 {
        1 << self.arities.len()
    }

    pub fn two_type_count(&self) -> u64 {
        1 << (2 * self.binary)
    }

    /// Slot of a binary predicate in the 2-type encoding.
    pub fn slot(&self, pred: PredId) -> Option<usize> {
        self.slots[pred.index()]
    }

    pub fn arity(&self, pred: PredId) -> Arity {
        self.arities[pred.index()]
    }
}

pub fn enumerate_one_types(vocabulary: &Vocabulary) -> Vec<OneType> {
    (0..TypeLayout::new(vocabulary).one_type_count()).map(OneType).collect()
}

pub fn enumerate_two_types(vocabulary: &Vocabulary) -> Vec<TwoType> {
    (0..TypeLayout::new(vocabulary).two_type_count()).map(TwoType).collect()
}

/// Two elements `0` and `1` with given 1-types and the 2-type of `(0, 1)`.
pub struct TypedPair<'a> {
    layout: &'a TypeLayout,
    ones: [OneType; 2],
    two: TwoType,
}

impl<'a> TypedPair<'a> {
    pub fn new(layout: &'a TypeLayout, a: OneType, b: OneType, two: TwoType) -> Self {
        TypedPair {
            layout,
            ones: [a, b],
            two,
        }
    }
}

impl Interpretation for TypedPair<'_> {
    fn value(&self, pred: PredId, args: GroundArgs) -> Option<bool> {
        match args {
            GroundArgs::One(a) => Some(self.ones.get(a as usize)?.holds(pred)),
            GroundArgs::Two(a, b) if a == b => Some(self.ones.get(a as usize)?.holds(pred)),
            GroundArgs::Two(0, 1) => Some(self.two.forward(self.layout.slot(pred)?)),
            GroundArgs::Two(1, 0) => Some(self.two.backward(self.layout.slot(pred)?)),
            GroundArgs::Two(..) => None,
        }
    }
}

/// One compatible 2-type of an ordered pair of 1-types `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairEntry {
    pub two_type: TwoType,
    /// Clauses for which `b` is a witness of `a`.
    pub fwd: WitnessMask,
    /// Clauses for which `a` is a witness of `b`.
    pub bwd: WitnessMask,
}

impl PairEntry {
    pub fn swap(self) -> PairEntry {
        PairEntry {
            two_type: self.two_type.swap(),
            fwd: self.bwd,
            bwd: self.fwd,
        }
    }
}

/// Compatible 2-types for a pair of 1-type indices. Entries are stored for
/// `i <= j`; when `swapped` is set the caller asked for `(j, i)` and must
/// apply [`PairEntry::swap`].
#[derive(Clone, Copy, Debug)]
pub struct PairView<'a> {
    pub entries: &'a [PairEntry],
    pub swapped: bool,
}

impl<'a> PairView<'a> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry `idx` oriented as requested.
    pub fn get(&self, idx: usize) -> PairEntry {
        let e = self.entries[idx];
        if self.swapped {
            e.swap()
        } else {
            e
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = PairEntry> + 'a {
        let swapped = self.swapped;
        self.entries.iter().map(move |&e| if swapped { e.swap() } else { e })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ClauseSlots {
    witness: usize,
    guard: Option<PredId>,
    blocker: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CompatibilityTables {
    layout: TypeLayout,
    clauses: Vec<ClauseSlots>,
    one_types: Vec<OneType>,
    need: Vec<WitnessMask>,
    self_witness: Vec<WitnessMask>,
    pairs: Vec<Vec<PairEntry>>,
}

fn tri(i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    j * (j + 1) / 2 + i
}

impl CompatibilityTables {
    pub fn layout(&self) -> &TypeLayout {
        &self.layout
    }

    /// Compatible 1-types in ascending order; positions are configuration
    /// indices.
    pub fn one_types(&self) -> &[OneType] {
        &self.one_types
    }

    pub fn len(&self) -> usize {
        self.one_types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.one_types.is_empty()
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn index_of(&self, t: OneType) -> Option<usize> {
        self.one_types.binary_search(&t).ok()
    }

    /// Clauses an element of type `i` must find a witness for.
    pub fn need(&self, i: usize) -> WitnessMask {
        self.need[i]
    }

    /// Clauses an element of type `i` witnesses for itself.
    pub fn self_witness(&self, i: usize) -> WitnessMask {
        self.self_witness[i]
    }

    pub fn pair(&self, i: usize, j: usize) -> PairView<'_> {
        if i <= j {
            PairView {
                entries: &self.pairs[tri(i, j)],
                swapped: false,
            }
        } else {
            PairView {
                entries: &self.pairs[tri(j, i)],
                swapped: true,
            }
        }
    }

    /// Whether the `k`-th witness predicate holds in `pi` from `x` to `y`
    /// (forward) or from `y` to `x` (backward).
    pub fn two_type_satisfies_beta(&self, pi: TwoType, k: usize, direction: Direction) -> bool {
        let s = self.clauses[k].witness;
        match direction {
            Direction::Forward => pi.forward(s),
            Direction::Backward => pi.backward(s),
        }
    }

    /// Clauses for which `y` witnesses `x`, and `x` witnesses `y`, under `pi`.
    pub fn witness_masks(&self, pi: TwoType) -> (WitnessMask, WitnessMask) {
        let (mut fwd, mut bwd) = (0, 0);
        for (k, c) in self.clauses.iter().enumerate() {
            let blocked_f = c.blocker.is_some_and(|s| pi.forward(s));
            let blocked_b = c.blocker.is_some_and(|s| pi.backward(s));
            if pi.forward(c.witness) && !blocked_f {
                fwd |= 1 << k;
            }
            if pi.backward(c.witness) && !blocked_b {
                bwd |= 1 << k;
            }
        }
        (fwd, bwd)
    }
}

/// Builds the compatibility tables of a normal-form sentence by evaluating
/// its universal part on one- and two-element ground instances.
pub fn build_tables(snf: &SnfSentence) -> CompatibilityTables {
    let layout = TypeLayout::new(snf.vocabulary());
    let phi = snf.phi();
    assert!(snf.m() <= 64, "at most 64 existential clauses are supported");
    let clauses = snf
        .clauses()
        .iter()
        .map(|c| ClauseSlots {
            witness: layout.slot(c.witness).expect("witness is binary"),
            guard: c.guard,
            blocker: c.blocker.map(|b| layout.slot(b).expect("blocker is binary")),
        })
        .collect::<Vec<_>>();

    let holds = |a: OneType, b: OneType, two: TwoType, binding: Binding| {
        let interp = TypedPair::new(&layout, a, b, two);
        evaluate_ground(phi, &binding, &interp).expect("types assign every atom")
    };

    let one_types: Vec<OneType> = (0..layout.one_type_count())
        .map(OneType)
        .filter(|&t| holds(t, t, TwoType(0), Binding::new(0, 0)))
        .collect();

    let mut tables = CompatibilityTables {
        layout: layout.clone(),
        clauses,
        one_types,
        need: Vec::new(),
        self_witness: Vec::new(),
        pairs: Vec::new(),
    };

    for &t in &tables.one_types {
        let mut need = 0;
        let mut own = 0;
        for (k, c) in tables.clauses.iter().enumerate() {
            if c.guard.is_none_or(|g| t.holds(g)) {
                need |= 1 << k;
            }
            // R(x,x) sits in the 1-type; `witness` is a 2-type slot so look
            // the predicate up through the sentence
            let w = snf.clauses()[k].witness;
            let blocked = snf.clauses()[k].blocker.is_some_and(|b| t.holds(b));
            if t.holds(w) && !blocked {
                own |= 1 << k;
            }
        }
        tables.need.push(need);
        tables.self_witness.push(own);
    }

    let n = tables.one_types.len();
    let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        for i in 0..=j {
            let (a, b) = (tables.one_types[i], tables.one_types[j]);
            let entries = (0..layout.two_type_count())
                .map(TwoType)
                .filter(|&pi| holds(a, b, pi, Binding::new(0, 1)) && holds(a, b, pi, Binding::new(1, 0)))
                .map(|pi| {
                    let (fwd, bwd) = tables.witness_masks(pi);
                    PairEntry { two_type: pi, fwd, bwd }
                })
                .collect();
            pairs.push(entries);
        }
    }
    tables.pairs = pairs;
    tables
}

/// Evaluates a quantifier-free formula on a single typed element.
pub fn one_type_satisfies(layout: &TypeLayout, formula: &Formula, t: OneType) -> bool {
    let interp = TypedPair::new(layout, t, t, TwoType(0));
    evaluate_ground(formula, &Binding::new(0, 0), &interp).expect("types assign every atom")
}
