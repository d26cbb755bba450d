//! Streams of satisfiable configurations and unary substructures.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::{Configuration, TemplateSet};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnaryError {
    #[error("cannot split {total} into zero parts")]
    ZeroParts { total: u32 },
    #[error("configuration has size {found}, expected {expected}")]
    SizeMismatch { expected: u32, found: u64 },
}

/// Ordered compositions of `total` into `parts` non-negative parts, first
/// coordinate descending: `(3,0), (2,1), (1,2), (0,3)`.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

pub fn enum_compositions(total: u32, parts: usize) -> Result<Compositions, UnaryError> {
    if parts == 0 {
        if total > 0 {
            return Err(UnaryError::ZeroParts { total });
        }
        return Ok(Compositions {
            current: Some(Vec::new()),
        });
    }
    let mut first = vec![0; parts];
    first[0] = total;
    Ok(Compositions { current: Some(first) })
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let c = self.current.as_mut()?;
        let out = c.clone();
        let last = c.len().saturating_sub(1);
        // rightmost nonzero entry before the last one; everything between it
        // and the last entry is zero
        match (0..last).rev().find(|&i| c[i] > 0) {
            Some(i) => {
                let tail = c[last];
                c[i] -= 1;
                c[last] = 0;
                c[i + 1] = tail + 1;
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// Every satisfiable configuration of size `n`, grouped by template.
pub struct SatConfigs<'a> {
    templates: &'a [Configuration],
    delta: u32,
    n: u32,
    next_template: usize,
    inner: Option<(usize, Vec<usize>, Compositions)>,
}

/// Streams the satisfiable configurations of size `n` using the templates
/// of `set`, which must have been discovered eagerly.
pub fn enum_sat_configs(set: &TemplateSet, n: u32) -> SatConfigs<'_> {
    let templates = set.templates().expect("templates must be discovered before streaming");
    sat_configs_from(templates, set.delta(), n)
}

/// Same as [`enum_sat_configs`] over an explicit template list, which must be
/// sorted and contain every satisfiable cell of `{0, .., delta}^|U|`.
pub fn sat_configs_from(templates: &[Configuration], delta: u32, n: u32) -> SatConfigs<'_> {
    SatConfigs {
        templates,
        delta,
        n,
        next_template: 0,
        inner: None,
    }
}

impl Iterator for SatConfigs<'_> {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        loop {
            if let Some((t, slots, comps)) = &mut self.inner {
                if let Some(c) = comps.next() {
                    let mut out = self.templates[*t].clone();
                    for (&s, add) in slots.iter().zip(c) {
                        out.0[s] += add;
                    }
                    return Some(out);
                }
                self.inner = None;
            }
            let t = self.next_template;
            let template = self.templates.get(t)?;
            self.next_template += 1;
            let size = template.size();
            if size > self.n as u64 {
                continue;
            }
            if size == self.n as u64 {
                return Some(template.clone());
            }
            let slots: Vec<usize> = (0..template.len()).filter(|&i| template.get(i) == self.delta).collect();
            if slots.is_empty() {
                continue;
            }
            let rest = self.n - size as u32;
            let comps = enum_compositions(rest, slots.len()).expect("slots are nonempty");
            self.inner = Some((t, slots, comps));
        }
    }
}

/// Assignment of a 1-type index to every element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnarySubstructure {
    pub assignment: Vec<u32>,
    pub config: Configuration,
}

/// Distinct arrangements of a configuration's multiset of 1-types, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Partitions {
    config: Configuration,
    current: Option<Vec<u32>>,
}

pub fn enum_partitions(n: u32, config: &Configuration) -> Result<Partitions, UnaryError> {
    if config.size() != n as u64 {
        return Err(UnaryError::SizeMismatch {
            expected: n,
            found: config.size(),
        });
    }
    let mut first = Vec::with_capacity(n as usize);
    for (i, &c) in config.0.iter().enumerate() {
        first.extend(core::iter::repeat_n(i as u32, c as usize));
    }
    Ok(Partitions {
        config: config.clone(),
        current: Some(first),
    })
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[pivot])
        .expect("v[i] exceeds the pivot");
    v.swap(pivot, j);
    v[i..].reverse();
    true
}

impl Iterator for Partitions {
    type Item = UnarySubstructure;

    fn next(&mut self) -> Option<UnarySubstructure> {
        let cur = self.current.as_mut()?;
        let out = UnarySubstructure {
            assignment: cur.clone(),
            config: self.config.clone(),
        };
        if !next_permutation(cur) {
            self.current = None;
        }
        Some(out)
    }
}

/// Every unary substructure of size `n` that extends to a model.
pub struct UnarySubstructures<'a> {
    n: u32,
    configs: SatConfigs<'a>,
    partitions: Option<Partitions>,
}

pub fn enum_unary_substructures(set: &TemplateSet, n: u32) -> UnarySubstructures<'_> {
    UnarySubstructures {
        n,
        configs: enum_sat_configs(set, n),
        partitions: None,
    }
}

impl Iterator for UnarySubstructures<'_> {
    type Item = UnarySubstructure;

    fn next(&mut self) -> Option<UnarySubstructure> {
        loop {
            if let Some(u) = self.partitions.as_mut().and_then(Iterator::next) {
                return Some(u);
            }
            let c = self.configs.next()?;
            self.partitions = Some(enum_partitions(self.n, &c).expect("streamed configurations have size n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions() {
        let all: Vec<_> = enum_compositions(3, 2).unwrap().collect();
        assert_eq!(all, [vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert_eq!(enum_compositions(0, 2).unwrap().collect::<Vec<_>>(), [vec![0, 0]]);
        assert_eq!(enum_compositions(2, 1).unwrap().collect::<Vec<_>>(), [vec![2]]);
        assert_eq!(enum_compositions(2, 3).unwrap().count(), 6);
        assert_eq!(enum_compositions(0, 0).unwrap().count(), 1);
        assert!(matches!(enum_compositions(1, 0), Err(UnaryError::ZeroParts { .. })));
    }

    #[test]
    fn spread_over_delta_entries() {
        let t = [Configuration(vec![6, 4, 6, 2])];
        let all: Vec<_> = sat_configs_from(&t, 6, 21).map(|c| c.0).collect();
        assert_eq!(
            all,
            [vec![9, 4, 6, 2], vec![8, 4, 7, 2], vec![7, 4, 8, 2], vec![6, 4, 9, 2]]
        );
        assert_eq!(sat_configs_from(&t, 6, 18).count(), 1);
        assert_eq!(sat_configs_from(&t, 6, 17).count(), 0);
    }

    #[test]
    fn partitions() {
        let c = Configuration(vec![2, 1]);
        let all: Vec<_> = enum_partitions(3, &c).unwrap().map(|u| u.assignment).collect();
        assert_eq!(all, [vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(enum_partitions(3, &Configuration(vec![3])).unwrap().count(), 1);
        assert_eq!(enum_partitions(6, &Configuration(vec![3, 2, 1])).unwrap().count(), 60);
        assert!(matches!(enum_partitions(4, &c), Err(UnaryError::SizeMismatch { .. })));
        assert_eq!(enum_partitions(0, &Configuration(vec![0])).unwrap().count(), 1);
    }
}
