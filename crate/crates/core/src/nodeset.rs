//! Small sets of node ids backed by a bit mask.

use std::fmt;

use crate::graph::Node;

/// Largest supported node id. Node `v` occupies bit `v`.
pub const MAX_NODES: usize = 63;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_bits(bits: u64) -> Self {
        NodeSet(bits & !1)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: Node) -> Self {
        debug_assert!((1..=MAX_NODES).contains(&v));
        NodeSet(1 << v)
    }

    /// All nodes `1..=n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_NODES);
        NodeSet(((1u128 << (n + 1)) - 2) as u64)
    }

    pub fn contains(self, v: Node) -> bool {
        v <= MAX_NODES && self.0 & (1 << v) != 0
    }

    pub fn insert(&mut self, v: Node) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: Node) {
        self.0 &= !(1 << v);
    }

    pub fn with(self, v: Node) -> Self {
        NodeSet(self.0 | 1 << v)
    }

    pub fn without(self, v: Node) -> Self {
        NodeSet(self.0 & !(1 << v))
    }

    pub fn union(self, other: NodeSet) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> Self {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member.
    pub fn first(self) -> Option<Node> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Node)
    }

    pub fn iter(self) -> impl Iterator<Item = Node> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as Node;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<Node> {
        self.iter().collect()
    }

    /// Every subset of `self`, in increasing order of the bit mask.
    pub fn subsets(self) -> impl Iterator<Item = NodeSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(NodeSet(cur))
        })
    }
}

impl FromIterator<Node> for NodeSet {
    fn from_iter<I: IntoIterator<Item = Node>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// Sets compare as their sorted member lists, so `{2} < {2,4} < {3}`.
impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_power_set() {
        let s: NodeSet = [1, 3, 4].into_iter().collect();
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(NodeSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn lexicographic_order() {
        let a: NodeSet = [2].into_iter().collect();
        let b: NodeSet = [2, 4].into_iter().collect();
        let c: NodeSet = [3].into_iter().collect();
        assert!(NodeSet::EMPTY < a && a < b && b < c);
    }

    #[test]
    fn full_set() {
        assert_eq!(NodeSet::full(4).to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(NodeSet::full(63).len(), 63);
        assert!(NodeSet::full(0).is_empty());
    }
}
