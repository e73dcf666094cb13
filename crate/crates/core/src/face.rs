//! Index sets of generators, used for faces of simplicial cones.

use std::cmp::Ordering;
use std::fmt;

/// A set of generator indices below 64.
///
/// Sets compare by size first, then lexicographically by their sorted
/// indices, which is the canonical order of every list of faces we emit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FaceSet(pub u64);

impl FaceSet {
    pub const EMPTY: FaceSet = FaceSet(0);

    pub fn full(n: usize) -> Self {
        assert!(n < 64, "at most 63 generators");
        FaceSet((1u64 << n) - 1)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(idx: I) -> Self {
        let mut bits = 0u64;
        for i in idx {
            assert!(i < 64, "index out of range");
            bits |= 1 << i;
        }
        FaceSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(self, i: usize) -> Self {
        FaceSet(self.0 & !(1 << i))
    }

    pub fn with(self, i: usize) -> Self {
        FaceSet(self.0 | 1 << i)
    }

    pub fn is_subset(self, other: FaceSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: FaceSet) -> Self {
        FaceSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FaceSet) -> Self {
        FaceSet(self.0 & other.0)
    }

    pub fn difference(self, other: FaceSet) -> Self {
        FaceSet(self.0 & !other.0)
    }

    /// Complement inside `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        FaceSet(!self.0 & FaceSet::full(n).0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `{0, .., n-1}`, in bit order.
    pub fn all(n: usize) -> impl Iterator<Item = FaceSet> {
        (0..1u64 << n).map(FaceSet)
    }
}

impl Ord for FaceSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for FaceSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for FaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
