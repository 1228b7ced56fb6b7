use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A symmetric multi-index `Λ` over the base directions, stored as an
/// exponent vector: `exponents[λ]` is the number of times `λ` occurs in `Λ`.
///
/// Ordering is graded-lexicographic: lower order first, and among indices
/// of equal order the one with more weight on earlier directions first
/// (so `(1)` sorts before `(2)`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: SmallVec<[u16; 4]>,
}

impl MultiIndex {
    /// The empty multi-index in `dim` base directions.
    pub fn zero(dim: usize) -> Self {
        MultiIndex {
            exponents: SmallVec::from_elem(0, dim),
        }
    }

    pub fn from_exponents(exponents: &[u16]) -> Self {
        MultiIndex {
            exponents: SmallVec::from_slice(exponents),
        }
    }

    /// Builds a multi-index from a list of zero-based base directions in any
    /// order. Returns `None` if an entry is out of range.
    pub fn from_entries(dim: usize, entries: &[usize]) -> Option<Self> {
        let mut mi = MultiIndex::zero(dim);
        for &e in entries {
            if e >= dim {
                return None;
            }
            mi.exponents[e] += 1;
        }
        Some(mi)
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// `|Λ|`.
    pub fn order(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exponents
    }

    pub fn exponent(&self, direction: usize) -> u16 {
        self.exponents[direction]
    }

    /// `λ + Λ`.
    pub fn raised(&self, direction: usize) -> Self {
        let mut out = self.clone();
        out.exponents[direction] += 1;
        out
    }

    /// `Λ - λ`, if `λ` occurs in `Λ`.
    pub fn lowered(&self, direction: usize) -> Option<Self> {
        if self.exponents[direction] == 0 {
            return None;
        }
        let mut out = self.clone();
        out.exponents[direction] -= 1;
        Some(out)
    }

    /// Sum of two multi-indices.
    pub fn combined(&self, other: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (e, o) in out.exponents.iter_mut().zip(other.exponents.iter()) {
            *e += *o;
        }
        out
    }

    /// Whether `other ⊆ self` as multisets.
    pub fn contains(&self, other: &MultiIndex) -> bool {
        self.exponents
            .iter()
            .zip(other.exponents.iter())
            .all(|(a, b)| a >= b)
    }

    /// The zero-based directions of `Λ` in ascending order, with repetition.
    pub fn entries(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order());
        for (dir, &e) in self.exponents.iter().enumerate() {
            out.extend(std::iter::repeat_n(dir, e as usize));
        }
        out
    }

    /// The first direction of `Λ` in the canonical peeling order.
    pub fn first_direction(&self) -> Option<usize> {
        self.exponents.iter().position(|&e| e > 0)
    }

    /// Every multi-index of order at most `max_order` in `dim` directions,
    /// in canonical order.
    pub fn all_up_to(dim: usize, max_order: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(dim)];
        let mut frontier = out.clone();
        for _ in 0..max_order {
            let mut next = Vec::new();
            for mi in &frontier {
                // Only raise at or after the last occupied direction so every
                // multiset is produced once.
                let start = mi.exponents.iter().rposition(|&e| e > 0).unwrap_or(0);
                for dir in start..dim {
                    next.push(mi.raised(dir));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ{:?}", self.entries())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raise_increments_one_slot() {
        let mi = MultiIndex::from_entries(3, &[0, 2]).unwrap();
        let up = mi.raised(1);
        assert_eq!(up.order(), mi.order() + 1);
        assert_eq!(up.exponents(), &[1, 1, 1]);
        assert_eq!(up.lowered(1).unwrap(), mi);
        assert!(mi.lowered(1).is_none());
    }

    #[test]
    fn entries_are_symmetric() {
        let a = MultiIndex::from_entries(2, &[1, 0, 1]).unwrap();
        let b = MultiIndex::from_entries(2, &[0, 1, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries(), vec![0, 1, 1]);
        assert!(MultiIndex::from_entries(2, &[2]).is_none());
    }

    #[test]
    fn graded_lex_order() {
        let e = MultiIndex::zero(2);
        let d1 = MultiIndex::from_entries(2, &[0]).unwrap();
        let d2 = MultiIndex::from_entries(2, &[1]).unwrap();
        let d11 = MultiIndex::from_entries(2, &[0, 0]).unwrap();
        let mut v = vec![d11.clone(), d2.clone(), e.clone(), d1.clone()];
        v.sort();
        assert_eq!(v, vec![e, d1, d2, d11]);
    }

    #[test]
    fn enumeration_counts() {
        // Number of multisets of size <= k from n directions is C(n+k, k).
        assert_eq!(MultiIndex::all_up_to(3, 2).len(), 10);
        assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
        assert_eq!(MultiIndex::all_up_to(1, 0).len(), 1);
        let all = MultiIndex::all_up_to(3, 3);
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(all, dedup);
    }
}
