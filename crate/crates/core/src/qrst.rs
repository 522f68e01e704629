//! The typed universe `Y = ℘(S) ∪ ℘(S)/≈`, its hybrid operations, and the
//! pair universe `K` linking each subset with its rough class.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{ModelContext, Partition};
use crate::quotient::{
    class_count, class_intersection, class_union, pair_of, pre_rough_imp, pre_rough_join, pre_rough_l,
    pre_rough_m, pre_rough_meet, pre_rough_not, realizable_pairs, RoughPair,
};
use crate::subset::{Subset, Universe};

/// Largest carrier that [`CeraStructure::carrier`] will materialize.
pub const MATERIALIZE_LIMIT: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Tag {
    #[serde(rename = "t1")]
    Tau1,
    #[serde(rename = "t2")]
    Tau2,
}

/// A classical subset (τ1) or a rough class (τ2). A definable set and its
/// exact class are different elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypedElement {
    Classical(Subset),
    Rough(RoughPair),
}

impl TypedElement {
    pub fn tag(self) -> Tag {
        match self {
            TypedElement::Classical(_) => Tag::Tau1,
            TypedElement::Rough(_) => Tag::Tau2,
        }
    }

    pub fn is_tau1(self) -> bool {
        matches!(self, TypedElement::Classical(_))
    }

    /// τ1 before τ2, then canonical subset or pair order.
    pub fn canonical_cmp(self, other: TypedElement) -> Ordering {
        use TypedElement::*;
        match (self, other) {
            (Classical(a), Classical(b)) => a.canonical_cmp(b),
            (Rough(a), Rough(b)) => a.canonical_cmp(&b),
            (Classical(_), Rough(_)) => Ordering::Less,
            (Rough(_), Classical(_)) => Ordering::Greater,
        }
    }

    pub fn to_json(self, u: &Universe) -> Value {
        match self {
            TypedElement::Classical(s) => json!({"tag": "t1", "set": u.names_of(s)}),
            TypedElement::Rough(p) => json!({
                "tag": "t2",
                "lower": u.names_of(p.lower),
                "upper": u.names_of(p.upper),
            }),
        }
    }

    pub fn render(self, u: &Universe) -> String {
        match self {
            TypedElement::Classical(s) => format!("t1 {}", u.render(s)),
            TypedElement::Rough(p) => format!("t2 {}", p.render(u)),
        }
    }
}

/// `𝔚(X)` for a classical approximation space.
#[derive(Debug)]
pub struct CeraStructure {
    pub name: String,
    pub universe: Universe,
    pub partition: Partition,
    full: Subset,
    carrier: OnceLock<Vec<TypedElement>>,
    index: OnceLock<HashMap<TypedElement, usize>>,
}

impl Clone for CeraStructure {
    fn clone(&self) -> Self {
        CeraStructure::new(self.name.clone(), self.universe.clone(), self.partition.clone())
    }
}

pub fn build_cera(ctx: &ModelContext) -> Result<CeraStructure> {
    let partition = ctx.partition()?.clone();
    Ok(CeraStructure::new(ctx.name.clone(), ctx.universe.clone(), partition))
}

impl CeraStructure {
    pub fn new(name: impl Into<String>, universe: Universe, partition: Partition) -> CeraStructure {
        let full = universe.full();
        CeraStructure {
            name: name.into(),
            universe,
            partition,
            full,
            carrier: OnceLock::new(),
            index: OnceLock::new(),
        }
    }

    pub fn size(&self) -> u128 {
        (1u128 << self.universe.size()) + class_count(&self.partition)
    }

    pub fn tau1_count(&self) -> u128 {
        1u128 << self.universe.size()
    }

    /// All elements in canonical order, built on first use.
    pub fn carrier(&self) -> Result<&[TypedElement]> {
        if self.size() > MATERIALIZE_LIMIT {
            return Err(Error::Budget(format!(
                "carrier of {} elements exceeds the materialization limit {MATERIALIZE_LIMIT}",
                self.size()
            )));
        }
        Ok(self.carrier.get_or_init(|| {
            let mut subsets: Vec<Subset> = self.universe.all_subsets().collect();
            subsets.sort_by(|a, b| a.canonical_cmp(*b));
            subsets
                .into_iter()
                .map(TypedElement::Classical)
                .chain(realizable_pairs(&self.partition).into_iter().map(TypedElement::Rough))
                .collect()
        }))
    }

    pub fn position(&self, e: TypedElement) -> Result<Option<usize>> {
        let carrier = self.carrier()?;
        let index = self
            .index
            .get_or_init(|| carrier.iter().enumerate().map(|(i, e)| (*e, i)).collect());
        Ok(index.get(&e).copied())
    }

    pub fn contains(&self, e: TypedElement) -> bool {
        match e {
            TypedElement::Classical(s) => s.is_subset(self.full),
            TypedElement::Rough(p) => p.is_realizable(&self.partition),
        }
    }

    pub fn class(&self, a: Subset) -> TypedElement {
        TypedElement::Rough(pair_of(&self.partition, a))
    }

    /// Uniform over τ1 or τ2 elements, or over the whole carrier when `tag` is `None`.
    pub fn sample(&self, rng: &mut ChaCha8Rng, tag: Option<Tag>) -> TypedElement {
        let tag = tag.unwrap_or_else(|| {
            let t1 = self.tau1_count() as f64;
            if rng.gen_bool(t1 / self.size() as f64) {
                Tag::Tau1
            } else {
                Tag::Tau2
            }
        });
        match tag {
            Tag::Tau1 => TypedElement::Classical(Subset(rng.gen::<u64>() & self.full.0)),
            Tag::Tau2 => {
                let mut p = RoughPair::raw(Subset::EMPTY, Subset::EMPTY);
                for &b in self.partition.blocks() {
                    let choices = if b.len() >= 2 { 3 } else { 2 };
                    match rng.gen_range(0..choices) {
                        0 => {}
                        1 => p = RoughPair::raw(p.lower.union(b), p.upper.union(b)),
                        _ => p = RoughPair::raw(p.lower, p.upper.union(b)),
                    }
                }
                TypedElement::Rough(p)
            }
        }
    }

    pub fn bot(&self) -> TypedElement {
        TypedElement::Classical(Subset::EMPTY)
    }

    pub fn top(&self) -> TypedElement {
        TypedElement::Classical(self.full)
    }

    pub fn zero(&self) -> TypedElement {
        TypedElement::Rough(RoughPair::raw(Subset::EMPTY, Subset::EMPTY))
    }

    pub fn one(&self) -> TypedElement {
        TypedElement::Rough(RoughPair::raw(self.full, self.full))
    }

    /// `𝔏`
    pub fn lup(&self, e: TypedElement) -> TypedElement {
        match e {
            TypedElement::Classical(s) => TypedElement::Classical(self.partition.lower(s)),
            TypedElement::Rough(p) => TypedElement::Rough(pre_rough_l(p)),
        }
    }

    /// `■`
    pub fn bup(&self, e: TypedElement) -> TypedElement {
        match e {
            TypedElement::Classical(s) => TypedElement::Classical(self.partition.upper(s)),
            TypedElement::Rough(p) => TypedElement::Rough(pre_rough_m(p)),
        }
    }

    /// `⊕`
    pub fn join(&self, x: TypedElement, y: TypedElement) -> TypedElement {
        use TypedElement::*;
        match (x, y) {
            (Classical(a), Classical(b)) => Classical(a.union(b)),
            (Classical(a), Rough(q)) => self.class(a.union(class_union(q))),
            (Rough(p), Classical(b)) => self.class(class_union(p).union(b)),
            (Rough(p), Rough(q)) => Rough(pre_rough_join(p, q)),
        }
    }

    /// `⊙`
    pub fn meet(&self, x: TypedElement, y: TypedElement) -> TypedElement {
        use TypedElement::*;
        match (x, y) {
            (Classical(a), Classical(b)) => Classical(a.intersection(b)),
            (Classical(a), Rough(q)) => self.class(a.intersection(class_intersection(q))),
            (Rough(p), Classical(b)) => self.class(class_intersection(p).intersection(b)),
            (Rough(p), Rough(q)) => Rough(pre_rough_meet(p, q)),
        }
    }

    /// `∼`
    pub fn snot(&self, e: TypedElement) -> TypedElement {
        match e {
            TypedElement::Classical(s) => TypedElement::Classical(s.complement_in(self.full)),
            TypedElement::Rough(p) => TypedElement::Rough(pre_rough_not(p, self.full)),
        }
    }

    /// `¬`, defined on τ2 only.
    pub fn rnot(&self, e: TypedElement) -> Option<TypedElement> {
        match e {
            TypedElement::Classical(_) => None,
            TypedElement::Rough(p) => Some(TypedElement::Rough(pre_rough_not(p, self.full))),
        }
    }

    fn imp(&self, x: TypedElement, y: TypedElement, bracket_classical: bool) -> TypedElement {
        use TypedElement::*;
        let c = |s: Subset| s.complement_in(self.full);
        match (x, y) {
            (Classical(a), Classical(b)) => {
                let r = a.union(c(b));
                if bracket_classical {
                    self.class(r)
                } else {
                    Classical(r)
                }
            }
            (Classical(a), Rough(q)) => self.class(a.union(c(class_intersection(q)))),
            (Rough(p), Classical(b)) => self.class(class_union(p).union(c(b))),
            (Rough(p), Rough(q)) => Rough(pre_rough_imp(p, q, self.full)),
        }
    }

    /// `⇝`
    pub fn rimp(&self, x: TypedElement, y: TypedElement) -> TypedElement {
        self.imp(x, y, false)
    }

    /// `↠`
    pub fn rimpb(&self, x: TypedElement, y: TypedElement) -> TypedElement {
        self.imp(x, y, true)
    }
}

/// The pair universe `K = {(x, [x])} ∪ {([x], x)}` with componentwise operations.
#[derive(Debug)]
pub struct CradStructure {
    pub cera: CeraStructure,
    pub pairs: Vec<(TypedElement, TypedElement)>,
}

pub fn build_crad(cera: &CeraStructure) -> Result<CradStructure> {
    let mut subsets: Vec<Subset> = cera.universe.all_subsets().collect();
    subsets.sort_by(|a, b| a.canonical_cmp(*b));
    let mut pairs: Vec<_> = subsets
        .iter()
        .map(|&x| (TypedElement::Classical(x), cera.class(x)))
        .collect();
    pairs.extend(subsets.iter().map(|&x| (cera.class(x), TypedElement::Classical(x))));
    Ok(CradStructure {
        cera: cera.clone(),
        pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CradOpSummary {
    pub operation: String,
    /// Argument tuples over `K` (or `K²`).
    pub tuples: u64,
    /// Tuples where both coordinate operations are defined.
    pub defined: u64,
    /// Defined results that are again members of `K`.
    pub closed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CradReport {
    pub model: String,
    pub pairs: usize,
    pub classical_part: usize,
    pub rough_part: usize,
    pub reading: &'static str,
    pub operations: Vec<CradOpSummary>,
}

pub const CRAD_READING: &str =
    "componentwise: each operation is applied to both coordinates; defined only where both coordinate results are";

impl CradStructure {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn unary(
        &self,
        f: impl Fn(&CeraStructure, TypedElement) -> Option<TypedElement>,
        (a, b): (TypedElement, TypedElement),
    ) -> Option<(TypedElement, TypedElement)> {
        Some((f(&self.cera, a)?, f(&self.cera, b)?))
    }

    pub fn binary(
        &self,
        f: impl Fn(&CeraStructure, TypedElement, TypedElement) -> TypedElement,
        x: (TypedElement, TypedElement),
        y: (TypedElement, TypedElement),
    ) -> (TypedElement, TypedElement) {
        (f(&self.cera, x.0, y.0), f(&self.cera, x.1, y.1))
    }

    /// Counts, per operation, how many componentwise results stay in `K`.
    pub fn report(&self) -> CradReport {
        let members: std::collections::HashSet<_> = self.pairs.iter().copied().collect();
        let n = self.pairs.len() as u64;
        type Un = fn(&CeraStructure, TypedElement) -> Option<TypedElement>;
        type Bin = fn(&CeraStructure, TypedElement, TypedElement) -> TypedElement;
        let unaries: [(&str, Un); 4] = [
            ("lup", |c, e| Some(c.lup(e))),
            ("bup", |c, e| Some(c.bup(e))),
            ("snot", |c, e| Some(c.snot(e))),
            ("rnot", |c, e| c.rnot(e)),
        ];
        let binaries: [(&str, Bin); 4] = [
            ("join", |c, a, b| c.join(a, b)),
            ("meet", |c, a, b| c.meet(a, b)),
            ("rimp", |c, a, b| c.rimp(a, b)),
            ("rimpb", |c, a, b| c.rimpb(a, b)),
        ];
        let mut operations = Vec::new();
        for (name, f) in unaries {
            let results: Vec<_> = self.pairs.iter().filter_map(|&p| self.unary(f, p)).collect();
            operations.push(CradOpSummary {
                operation: name.into(),
                tuples: n,
                defined: results.len() as u64,
                closed: results.iter().filter(|r| members.contains(r)).count() as u64,
            });
        }
        for (name, f) in binaries {
            let closed = self
                .pairs
                .iter()
                .flat_map(|&x| self.pairs.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| members.contains(&self.binary(f, x, y)))
                .count();
            operations.push(CradOpSummary {
                operation: name.into(),
                tuples: n * n,
                defined: n * n,
                closed: closed as u64,
            });
        }
        let half = self.pairs.len() / 2;
        CradReport {
            model: self.cera.name.clone(),
            pairs: self.pairs.len(),
            classical_part: half,
            rough_part: half,
            reading: CRAD_READING,
            operations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::members_of;
    use proptest::prelude::*;
    use TypedElement::*;

    fn m0() -> CeraStructure {
        let ctx =
            ModelContext::from_blocks("M0", &["a", "b", "c", "d", "e"], &[&["a", "b"], &["c"], &["d", "e"]]).unwrap();
        build_cera(&ctx).unwrap()
    }

    fn s(c: &CeraStructure, names: &[&str]) -> Subset {
        c.universe.subset(names).unwrap()
    }

    fn rp(c: &CeraStructure, lo: &[&str], up: &[&str]) -> TypedElement {
        Rough(RoughPair::raw(s(c, lo), s(c, up)))
    }

    const ALL: &[&str] = &["a", "b", "c", "d", "e"];

    #[test]
    fn unary_examples() {
        let c = m0();
        assert_eq!(c.lup(Classical(s(&c, &["a", "c", "d"]))), Classical(s(&c, &["c"])));
        assert_eq!(c.lup(rp(&c, &["c"], ALL)), rp(&c, &["c"], &["c"]));
        assert_eq!(c.bup(Classical(s(&c, &["a", "c", "d"]))), Classical(c.universe.full()));
        assert_eq!(c.bup(rp(&c, &["c"], ALL)), rp(&c, ALL, ALL));
        let d = rp(&c, &["a", "b"], &["a", "b"]);
        assert_eq!(c.bup(d), d);
        assert_eq!(c.snot(Classical(s(&c, &["a"]))), Classical(s(&c, &["b", "c", "d", "e"])));
        assert_eq!(c.snot(rp(&c, &["c"], ALL)), rp(&c, &[], &["a", "b", "d", "e"]));
        assert_eq!(c.rnot(Classical(Subset::EMPTY)), None);
    }

    #[test]
    fn binary_examples() {
        let c = m0();
        assert_eq!(
            c.join(Classical(s(&c, &["a"])), rp(&c, &["c"], &["c"])),
            rp(&c, &["c"], &["a", "b", "c"])
        );
        assert_eq!(c.meet(Classical(s(&c, &["a", "c"])), rp(&c, &["c"], ALL)), rp(&c, &["c"], &["c"]));
        assert_eq!(c.rimp(Classical(s(&c, &["c"])), rp(&c, &["c"], ALL)), c.one());
        assert_eq!(c.rimp(rp(&c, &["c"], ALL), rp(&c, &["c"], ALL)), c.one());
        let a = Classical(s(&c, &["b", "d"]));
        assert_eq!(c.rimpb(a, a), c.one());
        assert_eq!(c.rimp(a, a), c.top());
    }

    #[test]
    fn carrier_sizes() {
        let c = m0();
        assert_eq!(c.carrier().unwrap().len(), 50);
        assert_eq!(c.size(), 50);
        let one = build_cera(&ModelContext::from_blocks("one", &["a"], &[&["a"]]).unwrap()).unwrap();
        assert_eq!(one.carrier().unwrap().len(), 4);
        assert_eq!(c.snot(c.bot()), c.top());
        assert_eq!(c.snot(c.zero()), c.one());
        assert_eq!(build_crad(&c).unwrap().len(), 64);
    }

    #[test]
    fn carrier_is_canonical_and_tagged() {
        let c = m0();
        let car = c.carrier().unwrap();
        assert!(car.windows(2).all(|w| w[0].canonical_cmp(w[1]) == Ordering::Less));
        assert_eq!(car.iter().filter(|e| e.is_tau1()).count(), 32);
        assert!(car.iter().all(|e| c.contains(*e)));
        let json = rp(&c, &["c"], &["a", "b", "c"]).to_json(&c.universe);
        assert_eq!(json.to_string(), r#"{"lower":["c"],"tag":"t2","upper":["a","b","c"]}"#);
    }

    #[test]
    fn tag_discipline() {
        let c = m0();
        let car = c.carrier().unwrap();
        for &x in car {
            for &y in car {
                let mixed = x.tag() != y.tag();
                for r in [c.join(x, y), c.meet(x, y), c.rimp(x, y)] {
                    assert!(c.contains(r));
                    if mixed {
                        assert_eq!(r.tag(), Tag::Tau2);
                    } else {
                        assert_eq!(r.tag(), x.tag());
                    }
                }
                let r = c.rimpb(x, y);
                assert!(c.contains(r));
                assert_eq!(r.tag(), Tag::Tau2);
            }
        }
    }

    #[test]
    fn crad_components() {
        let c = m0();
        let k = build_crad(&c).unwrap();
        assert!(k.pairs[..32].iter().all(|p| p.0.is_tau1() && !p.1.is_tau1()));
        assert!(k.pairs[32..].iter().all(|p| !p.0.is_tau1() && p.1.is_tau1()));
        let r = k.report();
        assert_eq!(r.pairs, 64);
        let rnot = r.operations.iter().find(|o| o.operation == "rnot").unwrap();
        assert_eq!(rnot.defined, 0);
        let snot = r.operations.iter().find(|o| o.operation == "snot").unwrap();
        assert_eq!(snot.defined, 64);
    }

    fn arb_cera() -> impl Strategy<Value = CeraStructure> {
        (1usize..=6)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec(0usize..n, n)))
            .prop_map(|(n, labels)| {
                let u = Universe::letters(n).unwrap();
                let p = Partition::from_labels(&u, &labels).unwrap();
                CeraStructure::new("arb", u, p)
            })
    }

    fn members(c: &CeraStructure, e: TypedElement) -> Vec<Subset> {
        match e {
            Rough(p) => members_of(&c.partition, p).unwrap(),
            Classical(_) => unreachable!(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mixed_cases_match_member_enumeration(c in arb_cera(), xb in any::<u64>(), seed in any::<u64>()) {
            use rand_chacha::rand_core::SeedableRng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = Subset(xb & c.universe.full().0);
            let y = c.sample(&mut rng, Some(Tag::Tau2));
            let ms = members(&c, y);
            let full = c.universe.full();
            let big_union = |f: &dyn Fn(Subset) -> Subset| ms.iter().fold(Subset::EMPTY, |a, z| a.union(f(*z)));
            let big_inter = ms.iter().fold(full, |a, z| a.intersection(*z));
            prop_assert_eq!(c.join(Classical(x), y), c.class(x.union(big_union(&|z| z))));
            prop_assert_eq!(c.join(y, Classical(x)), c.class(big_union(&|z| z).union(x)));
            prop_assert_eq!(c.meet(Classical(x), y), c.class(x.intersection(big_inter)));
            prop_assert_eq!(c.meet(y, Classical(x)), c.class(big_inter.intersection(x)));
            let expect = c.class(big_union(&|z| x.union(z.complement_in(full))));
            prop_assert_eq!(c.rimp(Classical(x), y), expect);
            prop_assert_eq!(c.rimpb(Classical(x), y), expect);
            let expect = c.class(big_union(&|z| z.union(x.complement_in(full))));
            prop_assert_eq!(c.rimp(y, Classical(x)), expect);
            prop_assert_eq!(c.rimpb(y, Classical(x)), expect);
        }

        #[test]
        fn bup_is_dual_of_lup_on_classes(c in arb_cera(), seed in any::<u64>()) {
            use rand_chacha::rand_core::SeedableRng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y = c.sample(&mut rng, Some(Tag::Tau2));
            let dual = c.rnot(c.lup(c.rnot(y).unwrap())).unwrap();
            prop_assert_eq!(c.bup(y), dual);
            prop_assert!(c.contains(y));
        }
    }
}
