//! Rough equality classes as `(lower, upper)` pairs and the pre-rough
//! operations on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelContext, Partition};
use crate::subset::{Subset, Universe};

/// A rough-equality class, identified by the approximations all its members share.
///
/// A pair `(L, U)` of definable sets with `L ⊆ U` is the approximation pair
/// of some subset exactly when no one-element block lies in `U \ L`: a
/// boundary block must be split by its members, which needs two atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RoughPair {
    pub lower: Subset,
    pub upper: Subset,
}

impl RoughPair {
    /// Pair without any realizability check.
    pub const fn raw(lower: Subset, upper: Subset) -> RoughPair {
        RoughPair { lower, upper }
    }

    pub fn new(partition: &Partition, lower: Subset, upper: Subset) -> Result<RoughPair> {
        let p = RoughPair { lower, upper };
        if p.is_realizable(partition) {
            Ok(p)
        } else {
            Err(Error::EmptyClass(format!(
                "({:#b}, {:#b}) is not the approximation pair of any subset",
                lower.0, upper.0
            )))
        }
    }

    pub fn is_realizable(&self, partition: &Partition) -> bool {
        self.lower.is_subset(self.upper)
            && partition.is_definable(self.lower)
            && partition.is_definable(self.upper)
            && self
                .upper
                .difference(self.lower)
                .intersection(partition.singleton_blocks())
                .is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn canonical_cmp(&self, other: &RoughPair) -> Ordering {
        self.lower
            .canonical_cmp(other.lower)
            .then_with(|| self.upper.canonical_cmp(other.upper))
    }

    pub fn render(&self, u: &Universe) -> String {
        format!("({}, {})", u.render(self.lower), u.render(self.upper))
    }
}

/// `(A^l, A^u)` for the classical family.
pub fn pair_of(partition: &Partition, a: Subset) -> RoughPair {
    RoughPair {
        lower: partition.lower(a),
        upper: partition.upper(a),
    }
}

/// Every subset in the class of `p`, ascending by bits.
pub fn members_of(partition: &Partition, p: RoughPair) -> Result<Vec<Subset>> {
    if !p.is_realizable(partition) {
        return Err(Error::EmptyClass(format!(
            "no subset has lower {:#b} and upper {:#b}",
            p.lower.0, p.upper.0
        )));
    }
    let boundary: Vec<Subset> = partition
        .blocks()
        .iter()
        .copied()
        .filter(|b| b.is_subset(p.upper) && !b.is_subset(p.lower))
        .collect();
    let mut out = vec![p.lower];
    for b in boundary {
        let parts: Vec<Subset> = b.subsets().filter(|s| !s.is_empty() && *s != b).collect();
        out = out
            .iter()
            .flat_map(|acc| parts.iter().map(move |s| acc.union(*s)))
            .collect();
    }
    out.sort();
    Ok(out)
}

/// Union over the class; equals the upper component.
pub fn class_union(p: RoughPair) -> Subset {
    p.upper
}

/// Intersection over the class; equals the lower component.
pub fn class_intersection(p: RoughPair) -> Subset {
    p.lower
}

pub fn pre_rough_l(p: RoughPair) -> RoughPair {
    RoughPair::raw(p.lower, p.lower)
}

pub fn pre_rough_m(p: RoughPair) -> RoughPair {
    RoughPair::raw(p.upper, p.upper)
}

pub fn pre_rough_not(p: RoughPair, full: Subset) -> RoughPair {
    RoughPair::raw(p.upper.complement_in(full), p.lower.complement_in(full))
}

pub fn pre_rough_join(p: RoughPair, q: RoughPair) -> RoughPair {
    RoughPair::raw(p.lower.union(q.lower), p.upper.union(q.upper))
}

pub fn pre_rough_meet(p: RoughPair, q: RoughPair) -> RoughPair {
    RoughPair::raw(p.lower.intersection(q.lower), p.upper.intersection(q.upper))
}

/// `(¬Lp ⊔ Lq) ⊓ (L¬p ⊔ ¬L¬q)`.
pub fn pre_rough_imp(p: RoughPair, q: RoughPair, full: Subset) -> RoughPair {
    let not = |x| pre_rough_not(x, full);
    let left = pre_rough_join(not(pre_rough_l(p)), pre_rough_l(q));
    let right = pre_rough_join(pre_rough_l(not(p)), not(pre_rough_l(not(q))));
    pre_rough_meet(left, right)
}

/// All realizable pairs in canonical order.
///
/// Each block is independently inside the lower part, on the boundary
/// (only when it has two or more atoms), or outside the upper part.
pub fn realizable_pairs(partition: &Partition) -> Vec<RoughPair> {
    let mut out = vec![RoughPair::raw(Subset::EMPTY, Subset::EMPTY)];
    for &b in partition.blocks() {
        let mut next = Vec::with_capacity(out.len() * 3);
        for p in &out {
            next.push(*p);
            next.push(RoughPair::raw(p.lower.union(b), p.upper.union(b)));
            if b.len() >= 2 {
                next.push(RoughPair::raw(p.lower, p.upper.union(b)));
            }
        }
        out = next;
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// Number of realizable pairs: a factor 3 per multi-atom block, 2 per singleton.
pub fn class_count(partition: &Partition) -> u128 {
    partition
        .blocks()
        .iter()
        .map(|b| if b.len() >= 2 { 3u128 } else { 2 })
        .product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientMode {
    Explicit,
    Symbolic,
}

/// `℘(S)/≈` for a classical context.
#[derive(Clone, Debug)]
pub struct QuotientStructure {
    pub mode: QuotientMode,
    pub classes: Vec<RoughPair>,
    /// Explicit mode only: class members, aligned with `classes`.
    pub members: Option<Vec<Vec<Subset>>>,
}

impl QuotientStructure {
    /// Realizable pairs, never enumerating members.
    pub fn symbolic(ctx: &ModelContext) -> Result<QuotientStructure> {
        Ok(QuotientStructure {
            mode: QuotientMode::Symbolic,
            classes: realizable_pairs(ctx.partition()?),
            members: None,
        })
    }

    /// Groups every subset by its approximation pair.
    pub fn explicit(ctx: &ModelContext) -> Result<QuotientStructure> {
        let partition = ctx.partition()?;
        ctx.limits
            .require_exhaustive(ctx.universe.size(), "explicit quotient")?;
        let mut groups: BTreeMap<(Vec<usize>, Vec<usize>), (RoughPair, Vec<Subset>)> = BTreeMap::new();
        for a in ctx.universe.all_subsets() {
            let p = pair_of(partition, a);
            groups
                .entry((p.lower.indices().collect(), p.upper.indices().collect()))
                .or_insert_with(|| (p, Vec::new()))
                .1
                .push(a);
        }
        let (classes, members) = groups.into_values().unzip();
        Ok(QuotientStructure {
            mode: QuotientMode::Explicit,
            classes,
            members: Some(members),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m0() -> ModelContext {
        ModelContext::from_blocks("M0", &["a", "b", "c", "d", "e"], &[&["a", "b"], &["c"], &["d", "e"]]).unwrap()
    }

    fn s(ctx: &ModelContext, names: &[&str]) -> Subset {
        ctx.universe.subset(names).unwrap()
    }

    #[test]
    fn pair_of_examples() {
        let m = m0();
        let p = m.partition().unwrap();
        assert_eq!(pair_of(p, s(&m, &["a", "c", "d"])), RoughPair::raw(s(&m, &["c"]), m.full()));
        assert_eq!(pair_of(p, s(&m, &["c"])), RoughPair::raw(s(&m, &["c"]), s(&m, &["c"])));
        assert_eq!(pair_of(p, Subset::EMPTY), RoughPair::raw(Subset::EMPTY, Subset::EMPTY));
    }

    #[test]
    fn members_of_examples() {
        let m = m0();
        let p = m.partition().unwrap();
        let c = s(&m, &["c"]);
        let got = members_of(p, RoughPair::raw(c, m.full())).unwrap();
        let mut want = vec![
            s(&m, &["a", "c", "d"]),
            s(&m, &["a", "c", "e"]),
            s(&m, &["b", "c", "d"]),
            s(&m, &["b", "c", "e"]),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(members_of(p, RoughPair::raw(c, c)).unwrap(), vec![c]);
        assert!(matches!(
            members_of(p, RoughPair::raw(Subset::EMPTY, c)),
            Err(Error::EmptyClass(_))
        ));
        assert!(RoughPair::new(p, Subset::EMPTY, c).is_err());
    }

    #[test]
    fn class_union_intersection_examples() {
        let m = m0();
        let p = m.partition().unwrap();
        let ab = s(&m, &["a", "b"]);
        let q = RoughPair::raw(Subset::EMPTY, ab);
        let members = members_of(p, q).unwrap();
        assert_eq!(members, vec![s(&m, &["a"]), s(&m, &["b"])]);
        assert_eq!(class_union(q), ab);
        assert_eq!(class_intersection(q), Subset::EMPTY);
    }

    #[test]
    fn pre_rough_examples() {
        let m = m0();
        let c = s(&m, &["c"]);
        let full = m.full();
        assert_eq!(
            pre_rough_not(RoughPair::raw(c, full), full),
            RoughPair::raw(Subset::EMPTY, s(&m, &["a", "b", "d", "e"]))
        );
        assert_eq!(
            pre_rough_join(RoughPair::raw(c, c), RoughPair::raw(Subset::EMPTY, s(&m, &["a", "b"]))),
            RoughPair::raw(c, s(&m, &["a", "b", "c"]))
        );
        let z = RoughPair::raw(Subset::EMPTY, Subset::EMPTY);
        assert_eq!(pre_rough_l(z), z);
        let x = RoughPair::raw(c, full);
        assert_eq!(pre_rough_imp(x, x, full), RoughPair::raw(full, full));
    }

    #[test]
    fn m0_has_eighteen_classes() {
        let m = m0();
        let p = m.partition().unwrap();
        assert_eq!(realizable_pairs(p).len(), 18);
        assert_eq!(class_count(p), 18);
        let ex = QuotientStructure::explicit(&m).unwrap();
        let sym = QuotientStructure::symbolic(&m).unwrap();
        assert_eq!(ex.classes, sym.classes);
    }

    fn arb_partition(max: usize) -> impl Strategy<Value = (Universe, Partition)> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(0..n, n).prop_map(move |labels| {
                let u = Universe::letters(n).unwrap();
                let p = Partition::from_labels(&u, &labels).unwrap();
                (u, p)
            })
        })
    }

    proptest! {
        #[test]
        fn pre_rough_ops_preserve_realizability((u, p) in arb_partition(6)) {
            let pairs = realizable_pairs(&p);
            let full = u.full();
            for &x in &pairs {
                prop_assert!(pre_rough_l(x).is_realizable(&p));
                prop_assert!(pre_rough_m(x).is_realizable(&p));
                prop_assert!(pre_rough_not(x, full).is_realizable(&p));
                prop_assert_eq!(pre_rough_not(pre_rough_not(x, full), full), x);
                prop_assert_eq!(pre_rough_l(pre_rough_l(x)), pre_rough_l(x));
                prop_assert_eq!(pre_rough_m(x), pre_rough_not(pre_rough_l(pre_rough_not(x, full)), full));
                for &y in &pairs {
                    prop_assert!(pre_rough_join(x, y).is_realizable(&p));
                    prop_assert!(pre_rough_meet(x, y).is_realizable(&p));
                    prop_assert!(pre_rough_imp(x, y, full).is_realizable(&p));
                }
            }
        }

        #[test]
        fn class_lemma_matches_enumeration((u, p) in arb_partition(8)) {
            for q in realizable_pairs(&p) {
                let members = members_of(&p, q).unwrap();
                prop_assert!(!members.is_empty());
                let union = members.iter().fold(Subset::EMPTY, |a, m| a.union(*m));
                let inter = members.iter().fold(u.full(), |a, m| a.intersection(*m));
                prop_assert_eq!(class_union(q), union);
                prop_assert_eq!(class_intersection(q), inter);
                for m in members {
                    prop_assert_eq!(pair_of(&p, m), q);
                }
            }
        }
    }
}
