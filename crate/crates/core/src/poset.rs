//! Finite partially ordered sets over dense integer indices.

use crate::subset::Subset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PosetError {
    #[error("leq table must be {expected}x{expected}, got row {row} of length {got}")]
    ShapeMismatch {
        expected: usize,
        row: usize,
        got: usize,
    },
    #[error("leq is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("leq is not antisymmetric: {0} <= {1} and {1} <= {0} for distinct elements")]
    NotAntisymmetric(usize, usize),
    #[error("leq is not transitive: {0} <= {1} and {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
}

/// A poset: unique labels plus a validated order relation. The order is kept
/// as per-element up-sets and down-sets so that order-theoretic scans are
/// word-parallel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    up: Vec<Subset>,
    down: Vec<Subset>,
}

impl Poset {
    pub fn new(labels: Vec<String>, leq: &[Vec<bool>]) -> Result<Self, PosetError> {
        let n = labels.len();
        if leq.len() != n {
            return Err(PosetError::ShapeMismatch {
                expected: n,
                row: usize::MAX,
                got: leq.len(),
            });
        }
        for (row, r) in leq.iter().enumerate() {
            if r.len() != n {
                return Err(PosetError::ShapeMismatch {
                    expected: n,
                    row,
                    got: r.len(),
                });
            }
        }
        Self::from_leq_fn(labels, |a, b| leq[a][b])
    }

    pub fn from_leq_fn(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        let n = labels.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if labels[i] == labels[j] {
                    return Err(PosetError::DuplicateLabel(labels[i].clone()));
                }
            }
        }
        for x in 0..n {
            if !leq(x, x) {
                return Err(PosetError::NotReflexive(x));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && leq(x, y) && leq(y, x) {
                    return Err(PosetError::NotAntisymmetric(x, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !leq(x, y) {
                    continue;
                }
                for z in 0..n {
                    if leq(y, z) && !leq(x, z) {
                        return Err(PosetError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        let mut up = vec![Subset::empty(n); n];
        let mut down = vec![Subset::empty(n); n];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    up[x].insert(y);
                    down[y].insert(x);
                }
            }
        }
        Ok(Poset { labels, up, down })
    }

    /// The one-point poset, labelled `x`.
    pub fn point(label: &str) -> Self {
        Poset::from_leq_fn(vec![label.to_string()], |_, _| true).unwrap()
    }

    /// The empty poset.
    pub fn empty() -> Self {
        Poset {
            labels: vec![],
            up: vec![],
            down: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// `{y : x <= y}` as a subset.
    pub fn up_set(&self, x: usize) -> &Subset {
        &self.up[x]
    }

    /// `{y : y <= x}` as a subset.
    pub fn down_set(&self, x: usize) -> &Subset {
        &self.down[x]
    }

    pub fn is_increasing(&self, s: &Subset) -> bool {
        s.iter().all(|x| self.up[x].is_subset_of(s))
    }

    pub fn is_decreasing(&self, s: &Subset) -> bool {
        s.iter().all(|x| self.down[x].is_subset_of(s))
    }

    pub fn up_closure(&self, s: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for x in s.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn down_closure(&self, s: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for x in s.iter() {
            out.union_with(&self.down[x]);
        }
        out
    }

    /// Elements of `s` with no strictly greater element inside `s`.
    pub fn maximal_in(&self, s: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for x in s.iter() {
            if s.iter().all(|y| y == x || !self.lt(x, y)) {
                out.insert(x);
            }
        }
        out
    }

    /// Elements of `s` with no strictly smaller element inside `s`.
    pub fn minimal_in(&self, s: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for x in s.iter() {
            if s.iter().all(|y| y == x || !self.lt(y, x)) {
                out.insert(x);
            }
        }
        out
    }

    /// Covering pairs `(x, y)` with `x` covered by `y`, in index order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if !self.lt(x, y) {
                    continue;
                }
                if (0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    continue;
                }
                out.push((x, y));
            }
        }
        out
    }

    /// Indices sorted by a linear extension of the order (smaller first).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| (self.down[i].count(), i));
        idx
    }

    /// Total order check: is the map `f` (into `other`) monotone?
    pub fn map_is_monotone(&self, other: &Poset, f: &[usize]) -> Option<(usize, usize)> {
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) && !other.leq(f[a], f[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// All increasing subsets, in canonical (ascending bit pattern) order.
    /// Output-sensitive: walks elements maximal-first and aborts once more
    /// than `cap` upsets exist.
    pub fn increasing_subsets_capped(&self, cap: usize) -> Result<Vec<Subset>, usize> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        let mut stack = vec![(0usize, Subset::empty(self.len()))];
        // Depth-first over include/exclude decisions, maximal elements first.
        while let Some((depth, current)) = stack.pop() {
            if depth == order.len() {
                if out.len() >= cap {
                    return Err(out.len() + 1);
                }
                out.push(current);
                continue;
            }
            let elem = order[order.len() - 1 - depth];
            let mut strict_up = self.up[elem].clone();
            strict_up.remove(elem);
            if strict_up.is_subset_of(&current) {
                let mut with = current.clone();
                with.insert(elem);
                stack.push((depth + 1, with));
            }
            stack.push((depth + 1, current));
        }
        out.sort();
        Ok(out)
    }
}
