//! Configurations and their satisfiability.
//!
//! A configuration counts how many elements realize each compatible 1-type.
//! Satisfiability of an arbitrary configuration reduces to a bounded one by
//! clamping every entry to `delta`; bounded configurations are decided by a
//! witness-driven search over pairs and cached.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};
use core::fmt;

use crate::snf::SnfSentence;
use crate::types::{CompatibilityTables, WitnessMask};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(pub Vec<u32>);

impl Configuration {
    pub fn zeros(len: usize) -> Self {
        Configuration(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of elements, `|n|`.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `n[i -> k]`.
    pub fn with(&self, i: usize, k: u32) -> Configuration {
        let mut c = self.clone();
        c.0[i] = k;
        c
    }
}

impl From<Vec<u32>> for Configuration {
    fn from(v: Vec<u32>) -> Self {
        Configuration(v)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("configuration has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("configuration of size {size} exceeds the bound {bound}")]
    BoundExceeded { size: u64, bound: u64 },
    #[error("template grid has {cells} cells, too many to scan")]
    GridTooLarge { cells: u128 },
}

/// `max{m(m+1), 2m+1}`, raised to at least 2 when equality is in play.
pub fn delta_for(m: usize, with_equality: bool) -> u32 {
    let m = m as u32;
    let d = (m * (m + 1)).max(2 * m + 1);
    if with_equality {
        d.max(2)
    } else {
        d
    }
}

pub fn compute_delta(snf: &SnfSentence, with_equality: bool) -> u32 {
    delta_for(snf.m(), with_equality)
}

/// Whether `target` is derivable from `base`: entries above the threshold
/// (0, or 1 with equality) may grow, all others are fixed.
pub fn derives(base: &Configuration, target: &Configuration, with_equality: bool) -> Result<bool, ConfigError> {
    if base.len() != target.len() {
        return Err(ConfigError::LengthMismatch {
            expected: base.len(),
            found: target.len(),
        });
    }
    let threshold = if with_equality { 1 } else { 0 };
    Ok(base
        .0
        .iter()
        .zip(&target.0)
        .all(|(&b, &t)| if b > threshold { t >= b } else { t == b }))
}

/// Decides whether some structure realizing exactly `config` is a model.
/// Only bounded configurations (`|config| <= delta * |U|`) are accepted.
pub fn is_bounded_config_satisfiable(
    tables: &CompatibilityTables,
    config: &Configuration,
    with_equality: bool,
) -> Result<bool, ConfigError> {
    if config.len() != tables.len() {
        return Err(ConfigError::LengthMismatch {
            expected: tables.len(),
            found: config.len(),
        });
    }
    let delta = delta_for(tables.m(), with_equality) as u64;
    let bound = delta * tables.len() as u64;
    if config.size() > bound {
        return Err(ConfigError::BoundExceeded {
            size: config.size(),
            bound,
        });
    }
    Ok(search_config(tables, config.as_slice()))
}

/// Maximal `(fwd, bwd)` witness combinations over the entries of a pair.
fn maximal_combos(entries: impl Iterator<Item = (WitnessMask, WitnessMask)>) -> Vec<(WitnessMask, WitnessMask)> {
    let mut all: Vec<_> = entries.collect();
    all.sort_unstable();
    all.dedup();
    let dominated =
        |a: &(WitnessMask, WitnessMask), b: &(WitnessMask, WitnessMask)| a != b && a.0 & !b.0 == 0 && a.1 & !b.1 == 0;
    all.iter()
        .filter(|a| !all.iter().any(|b| dominated(a, b)))
        .copied()
        .collect()
}

struct Search {
    n: usize,
    kinds: Vec<usize>,
    kind_count: usize,
    combos: Vec<Vec<(WitnessMask, WitnessMask)>>,
    outstanding: Vec<WitnessMask>,
    /// `req[e * n + f]`: clauses for which `f` must witness `e`
    req: Vec<WitnessMask>,
    touched: Vec<bool>,
}

impl Search {
    fn feasible(&self, e: usize, f: usize, bit: WitnessMask) -> bool {
        let r1 = self.req[e * self.n + f] | bit;
        let r2 = self.req[f * self.n + e];
        self.combos[self.kinds[e] * self.kind_count + self.kinds[f]]
            .iter()
            .any(|&(a, b)| a & r1 == r1 && b & r2 == r2)
    }

    fn candidates(&self, e: usize, bit: WitnessMask, out: &mut Vec<usize>) {
        out.clear();
        let mut seen_fresh = vec![false; self.kind_count];
        for f in 0..self.n {
            if f == e || !self.feasible(e, f, bit) {
                continue;
            }
            if !self.touched[f] {
                // untouched elements of one kind are interchangeable
                if seen_fresh[self.kinds[f]] {
                    continue;
                }
                seen_fresh[self.kinds[f]] = true;
            }
            out.push(f);
        }
    }

    fn run(&mut self) -> bool {
        let mut best: Option<(usize, WitnessMask, Vec<usize>)> = None;
        let mut buf = Vec::new();
        'pick: for e in 0..self.n {
            let mut rest = self.outstanding[e];
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                self.candidates(e, bit, &mut buf);
                if buf.is_empty() {
                    return false;
                }
                if best.as_ref().is_none_or(|b| buf.len() < b.2.len()) {
                    best = Some((e, bit, core::mem::take(&mut buf)));
                    if best.as_ref().unwrap().2.len() == 1 {
                        break 'pick;
                    }
                }
            }
        }
        let Some((e, bit, cands)) = best else {
            return true;
        };
        for f in cands {
            let slot = e * self.n + f;
            let saved = (self.req[slot], self.touched[e], self.touched[f]);
            self.req[slot] |= bit;
            self.outstanding[e] &= !bit;
            self.touched[e] = true;
            self.touched[f] = true;
            if self.run() {
                return true;
            }
            self.req[slot] = saved.0;
            self.outstanding[e] |= bit;
            self.touched[e] = saved.1;
            self.touched[f] = saved.2;
        }
        false
    }
}

fn search_config(tables: &CompatibilityTables, counts: &[u32]) -> bool {
    let present: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
    // every pair of elements needs at least one compatible 2-type
    for (a, &i) in present.iter().enumerate() {
        if counts[i] >= 2 && tables.pair(i, i).is_empty() {
            return false;
        }
        for &j in &present[a + 1..] {
            if tables.pair(i, j).is_empty() {
                return false;
            }
        }
    }
    let kind_count = present.len();
    let mut kinds = Vec::new();
    let mut outstanding = Vec::new();
    for (k, &i) in present.iter().enumerate() {
        for _ in 0..counts[i] {
            kinds.push(k);
            outstanding.push(tables.need(i) & !tables.self_witness(i));
        }
    }
    if outstanding.iter().all(|&o| o == 0) {
        return true;
    }
    let mut combos = Vec::with_capacity(kind_count * kind_count);
    for &i in &present {
        for &j in &present {
            combos.push(maximal_combos(tables.pair(i, j).iter().map(|e| (e.fwd, e.bwd))));
        }
    }
    let n = kinds.len();
    let mut s = Search {
        n,
        kinds,
        kind_count,
        combos,
        outstanding,
        req: vec![0; n * n],
        touched: vec![false; n],
    };
    s.run()
}

/// Satisfiable bounded configurations together with a cache of decisions.
///
/// The cache lives behind a `RefCell`, so a set is shared by reference
/// within one thread only.
#[derive(Debug)]
pub struct TemplateSet {
    tables: CompatibilityTables,
    delta: u32,
    with_equality: bool,
    templates: Option<Vec<Configuration>>,
    memo: RefCell<BTreeMap<Vec<u32>, bool>>,
    scratch: RefCell<Vec<u32>>,
    searches: Cell<u64>,
}

impl TemplateSet {
    /// A set that decides grid cells on demand.
    pub fn lazy(tables: CompatibilityTables, with_equality: bool) -> Self {
        TemplateSet {
            delta: delta_for(tables.m(), with_equality),
            tables,
            with_equality,
            templates: None,
            memo: RefCell::new(BTreeMap::new()),
            scratch: RefCell::new(Vec::new()),
            searches: Cell::new(0),
        }
    }

    pub fn tables(&self) -> &CompatibilityTables {
        &self.tables
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn with_equality(&self) -> bool {
        self.with_equality
    }

    /// Every satisfiable grid cell in lexicographic order, if discovered.
    pub fn templates(&self) -> Option<&[Configuration]> {
        self.templates.as_deref()
    }

    /// Number of bounded searches run so far.
    pub fn searches(&self) -> u64 {
        self.searches.get()
    }

    pub fn cached(&self) -> usize {
        self.memo.borrow().len()
    }

    fn decide_clamped(&self, key: &[u32]) -> bool {
        if let Some(&v) = self.memo.borrow().get(key) {
            return v;
        }
        self.searches.set(self.searches.get() + 1);
        let v = search_config(&self.tables, key);
        self.memo.borrow_mut().insert(key.to_vec(), v);
        v
    }

    /// Satisfiability of an arbitrary configuration given as raw counts.
    pub fn sat_counts(&self, counts: &[u32]) -> Result<bool, ConfigError> {
        if counts.len() != self.tables.len() {
            return Err(ConfigError::LengthMismatch {
                expected: self.tables.len(),
                found: counts.len(),
            });
        }
        let mut key = self.scratch.borrow_mut();
        key.clear();
        key.extend(counts.iter().map(|&c| c.min(self.delta)));
        Ok(self.decide_clamped(&key))
    }

    /// The clamped form of a configuration.
    pub fn clamp(&self, config: &Configuration) -> Configuration {
        Configuration(config.0.iter().map(|&c| c.min(self.delta)).collect())
    }
}

/// Scans the whole grid `{0, .., delta}^|U|` in lexicographic order.
pub fn discover_templates(tables: CompatibilityTables, with_equality: bool) -> Result<TemplateSet, ConfigError> {
    const MAX_CELLS: u128 = 1 << 20;
    let mut set = TemplateSet::lazy(tables, with_equality);
    let u = set.tables.len();
    let side = set.delta as u128 + 1;
    let cells = (0..u).try_fold(1u128, |acc, _| acc.checked_mul(side).filter(|&c| c <= MAX_CELLS));
    let Some(_) = cells else {
        return Err(ConfigError::GridTooLarge {
            cells: side.saturating_pow(u as u32),
        });
    };
    let mut found: Vec<Configuration> = Vec::new();
    let mut cell = Configuration::zeros(u);
    loop {
        // anything derivable from a known template is satisfiable
        let derived = found.iter().any(|t| derives(t, &cell, with_equality).unwrap_or(false));
        let sat = if derived {
            set.memo.borrow_mut().insert(cell.0.clone(), true);
            true
        } else {
            set.decide_clamped(&cell.0)
        };
        if sat {
            found.push(cell.clone());
        }
        // odometer, last entry fastest
        let mut i = u;
        loop {
            if i == 0 {
                set.templates = Some(found);
                return Ok(set);
            }
            i -= 1;
            if cell.0[i] < set.delta {
                cell.0[i] += 1;
                break;
            }
            cell.0[i] = 0;
        }
    }
}

/// Satisfiability of a configuration of any size.
pub fn sat_cfg(templates: &TemplateSet, config: &Configuration) -> Result<bool, ConfigError> {
    templates.sat_counts(config.as_slice())
}
