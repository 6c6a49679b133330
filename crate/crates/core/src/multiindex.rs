//! Multi-index sets for sparse-grid construction.
//!
//! A multi-index `i = (i_1, ..., i_N)` has entries `>= 1` and selects the
//! tensor interpolation level `m(i_n)` in every parametric direction. Sets are
//! kept downward-closed at all times; their margins drive adaptive enrichment.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Number of 1D nodes at a given level: `0, 1, 3, 5, 9, 17, ...`.
pub fn doubling_m(level: u32) -> usize {
    match level {
        0 => 0,
        1 => 1,
        l => (1usize << (l - 1)) + 1,
    }
}

/// A multi-index with positive entries, ordered lexicographically left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::InvalidMultiIndex(entries));
        }
        Ok(Self(entries))
    }

    /// The all-ones index of dimension `dim`.
    pub fn ones(dim: usize) -> Self {
        Self(vec![1; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn l1_norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `i + e_n`.
    pub fn forward(&self, n: usize) -> Self {
        let mut e = self.0.clone();
        e[n] += 1;
        Self(e)
    }

    /// `i - e_n`, or `None` when `i_n == 1`.
    pub fn backward(&self, n: usize) -> Option<Self> {
        if self.0[n] <= 1 {
            return None;
        }
        let mut e = self.0.clone();
        e[n] -= 1;
        Some(Self(e))
    }

    /// Componentwise `self <= other`.
    pub fn is_dominated_by(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Stability bound of the hierarchical surplus, the product of the entries.
    pub fn lambda(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).product()
    }

    /// Number of new tensor-grid points this index contributes.
    pub fn work(&self) -> u64 {
        self.0
            .iter()
            .map(|&e| (doubling_m(e) - doubling_m(e - 1)) as u64)
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Product of the entries of `i`.
pub fn lambda(i: &MultiIndex) -> u64 {
    i.lambda()
}

/// `W_j = prod_n (m(j_n) - m(j_n - 1))`.
pub fn work(j: &MultiIndex) -> u64 {
    j.work()
}

/// All indices of the axis-aligned box with opposite corners `1` and `corner`,
/// in lexicographic order.
pub fn rectangle_indices(corner: &MultiIndex) -> Vec<MultiIndex> {
    let dim = corner.dim();
    let mut out = Vec::with_capacity(corner.lambda() as usize);
    let mut cur = vec![1u32; dim];
    loop {
        out.push(MultiIndex(cur.clone()));
        // odometer, last entry fastest
        let mut n = dim;
        loop {
            if n == 0 {
                return out;
            }
            n -= 1;
            if cur[n] < corner.0[n] {
                cur[n] += 1;
                for c in cur.iter_mut().skip(n + 1) {
                    *c = 1;
                }
                break;
            }
        }
    }
}

/// A downward-closed set of multi-indices of fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndexSet {
    dim: usize,
    members: Vec<MultiIndex>,
}

impl MultiIndexSet {
    pub fn new(dim: usize, members: impl IntoIterator<Item = MultiIndex>) -> Result<Self> {
        let mut members: Vec<MultiIndex> = members.into_iter().collect();
        for m in &members {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        members.sort();
        members.dedup();
        let set = Self { dim, members };
        for m in &set.members {
            for n in 0..dim {
                if let Some(b) = m.backward(n) {
                    if !set.contains(&b) {
                        return Err(Error::NotDownwardClosed(m.clone()));
                    }
                }
            }
        }
        Ok(set)
    }

    /// `{1}`.
    pub fn unit(dim: usize) -> Self {
        Self {
            dim,
            members: vec![MultiIndex::ones(dim)],
        }
    }

    /// The rectangle `R_corner`.
    pub fn rectangle(corner: &MultiIndex) -> Self {
        Self {
            dim: corner.dim(),
            members: rectangle_indices(corner),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: &MultiIndex) -> bool {
        self.members.binary_search(i).is_ok()
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.members.iter()
    }

    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    /// `self ∪ extra`, rejected unless the result is downward-closed.
    pub fn union(&self, extra: &[MultiIndex]) -> Result<Self> {
        Self::new(self.dim, self.members.iter().cloned().chain(extra.iter().cloned()))
    }

    pub fn margin(&self) -> Margin<'_> {
        margin(self)
    }

    /// If the set equals some rectangle `R_c`, returns `c`.
    pub fn rectangle_corner(&self) -> Option<MultiIndex> {
        let corner = self.members.last()?.clone();
        // the lexicographic maximum of a rectangle is its corner
        let mut max = vec![0u32; self.dim];
        for m in &self.members {
            for (k, e) in m.0.iter().enumerate() {
                max[k] = max[k].max(*e);
            }
        }
        if max != corner.0 || corner.lambda() as usize != self.members.len() {
            return None;
        }
        Some(corner)
    }
}

/// The margin of a set: indices outside it that have a backward neighbor inside.
#[derive(Clone, Debug)]
pub struct Margin<'a> {
    set: &'a MultiIndexSet,
    indices: Vec<MultiIndex>,
}

impl<'a> Margin<'a> {
    pub fn set(&self) -> &'a MultiIndexSet {
        self.set
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn contains(&self, i: &MultiIndex) -> bool {
        self.indices.binary_search(i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn margin(set: &MultiIndexSet) -> Margin<'_> {
    let mut out = BTreeSet::new();
    for m in &set.members {
        for n in 0..set.dim {
            let cand = m.forward(n);
            if !set.contains(&cand) {
                out.insert(cand);
            }
        }
    }
    Margin {
        set,
        indices: out.into_iter().collect(),
    }
}

fn check_margin(i: &MultiIndex, set: &MultiIndexSet) -> Result<()> {
    if i.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: i.dim(),
        });
    }
    let in_margin = !set.contains(i) && (0..i.dim()).any(|n| i.backward(n).is_some_and(|b| set.contains(&b)));
    if in_margin {
        Ok(())
    } else {
        Err(Error::NotInMargin(i.clone()))
    }
}

/// Smallest subset `A` of the margin containing `i` such that `I ∪ A` is
/// downward-closed; equal to `R_i \ I`.
pub fn reduced_set(i: &MultiIndex, set: &MultiIndexSet) -> Result<Vec<MultiIndex>> {
    check_margin(i, set)?;
    Ok(rectangle_indices(i).into_iter().filter(|j| !set.contains(j)).collect())
}

/// Backward neighbors of a margin index that lie in the set.
pub fn backward_neighbors(i: &MultiIndex, set: &MultiIndexSet) -> Result<Vec<MultiIndex>> {
    check_margin(i, set)?;
    let mut out: Vec<MultiIndex> = (0..i.dim())
        .filter_map(|n| i.backward(n))
        .filter(|j| set.contains(j))
        .collect();
    out.sort();
    Ok(out)
}

/// Margin elements not componentwise dominated by any other margin element.
///
/// A singleton margin is maximal by vacuity.
pub fn maximal_points(set: &MultiIndexSet) -> Vec<MultiIndex> {
    let margin = margin(set);
    let idx = margin.indices();
    idx.iter()
        .filter(|i| {
            idx.iter()
                .filter(|j| j != i)
                .all(|j| i.entries().iter().zip(j.entries()).any(|(a, b)| a > b))
        })
        .cloned()
        .collect()
}
