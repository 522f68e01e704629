//! Universes and subsets encoded as characteristic bit vectors.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard ceiling imposed by the `u64` encoding.
pub const ENCODING_LIMIT: usize = 63;

/// A subset of a [`Universe`], bit `i` set iff the `i`-th atom is a member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement relative to `full`.
    pub fn complement_in(self, full: Subset) -> Subset {
        Subset(full.0 & !self.0)
    }

    /// Atom indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Canonical order: lexicographic on the increasing index sequence,
    /// a proper prefix sorting first (so `{} < {a} < {a,b} < {b}`).
    pub fn canonical_cmp(self, other: Subset) -> Ordering {
        self.indices().cmp(other.indices())
    }

    /// All subsets of `self` (including `self` and the empty set), ascending by bits.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter {
            set: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset({:#b})", self.0)
    }
}

/// Carry-ripple enumeration of the subsets of a mask.
pub struct SubsetIter {
    set: u64,
    next: Option<u64>,
}

impl Iterator for SubsetIter {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.set) & self.set;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(Subset(cur))
    }
}

/// An ordered finite sequence of distinct atom names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Universe>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Config("universe must contain at least one atom".into()));
        }
        if names.len() > ENCODING_LIMIT {
            return Err(Error::Config(format!(
                "universe of {} atoms exceeds the encoding limit of {ENCODING_LIMIT}",
                names.len()
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Config("atom names must be nonempty".into()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate atom name {n:?}")));
            }
        }
        Ok(Universe { names, index })
    }

    /// Universe `a, b, c, ...` (falls back to `x<i>` past `z`).
    pub fn letters(n: usize) -> Result<Universe> {
        Universe::new((0..n).map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        }))
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn full(&self) -> Subset {
        Subset((1u64 << self.names.len()) - 1)
    }

    pub fn subset_count(&self) -> u64 {
        1u64 << self.names.len()
    }

    /// Every subset in ascending bit order.
    pub fn all_subsets(&self) -> impl Iterator<Item = Subset> {
        (0..self.subset_count()).map(Subset)
    }

    pub fn atom(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown atom {name:?}")))
    }

    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<Subset> {
        names
            .iter()
            .try_fold(Subset::EMPTY, |acc, n| Ok(acc.union(Subset::singleton(self.atom(n.as_ref())?))))
    }

    /// Members of `s` in universe order.
    pub fn names_of(&self, s: Subset) -> Vec<String> {
        s.indices().map(|i| self.names[i].clone()).collect()
    }

    /// `{a,c,d}` style rendering.
    pub fn render(&self, s: Subset) -> String {
        format!("{{{}}}", self.names_of(s).join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_universes() {
        assert!(Universe::new(Vec::<String>::new()).is_err());
        assert!(Universe::new(["a", "a"]).is_err());
        assert!(Universe::new(["a", ""]).is_err());
        assert!(Universe::letters(64).is_err());
    }

    #[test]
    fn subset_iteration_covers_all() {
        let s = Subset(0b1011);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset(s)));
    }

    #[test]
    fn canonical_order_is_prefix_first() {
        let e = Subset::EMPTY;
        let a = Subset(0b001);
        let ab = Subset(0b011);
        let b = Subset(0b010);
        let mut v = vec![b, ab, e, a];
        v.sort_by(|x, y| x.canonical_cmp(*y));
        assert_eq!(v, vec![e, a, ab, b]);
    }

    #[test]
    fn names_round_trip() {
        let u = Universe::letters(5).unwrap();
        let s = u.subset(&["a", "c", "d"]).unwrap();
        assert_eq!(u.render(s), "{a,c,d}");
        assert_eq!(u.names_of(s), vec!["a", "c", "d"]);
        assert!(u.subset(&["q"]).is_err());
    }
}
