//! Granule collections and the twelve granule properties.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::OperatorFamily;
use crate::rys::{Mereology, RysModel};
use crate::subset::{Subset, Universe};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GranuleLabel {
    Initial,
    Refined,
    #[default]
    Unlabeled,
}

impl GranuleLabel {
    pub fn parse(s: &str) -> Result<GranuleLabel> {
        match s {
            "initial" => Ok(GranuleLabel::Initial),
            "refined" => Ok(GranuleLabel::Refined),
            "unlabeled" => Ok(GranuleLabel::Unlabeled),
            other => Err(Error::Config(format!("unknown granule label {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GranuleSet {
    pub name: String,
    pub members: Vec<Subset>,
    pub label: GranuleLabel,
}

impl GranuleSet {
    pub fn new(name: impl Into<String>, mut members: Vec<Subset>, label: GranuleLabel) -> Result<GranuleSet> {
        let name = name.into();
        if members.is_empty() {
            return Err(Error::Config(format!("granule set {name:?} is empty")));
        }
        members.sort_by(|a, b| a.canonical_cmp(*b));
        members.dedup();
        Ok(GranuleSet { name, members, label })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Property {
    RA,
    WRA,
    ACG,
    WCG,
    MER,
    LS,
    US,
    ST,
    AS,
    NO,
    FU,
    UU,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::RA,
        Property::WRA,
        Property::ACG,
        Property::WCG,
        Property::MER,
        Property::LS,
        Property::US,
        Property::ST,
        Property::AS,
        Property::NO,
        Property::FU,
        Property::UU,
    ];

    pub fn parse(s: &str) -> Result<Property> {
        Property::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::RA => "RA",
            Property::WRA => "WRA",
            Property::ACG => "ACG",
            Property::WCG => "WCG",
            Property::MER => "MER",
            Property::LS => "LS",
            Property::US => "US",
            Property::ST => "ST",
            Property::AS => "AS",
            Property::NO => "NO",
            Property::FU => "FU",
            Property::UU => "UU",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A term over granule variables built with `+`, `·`, `∼`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermExpr {
    /// The sum of no granules, denoting `∅`.
    Empty,
    Granule(Subset),
    Sum(Vec<TermExpr>),
    Product(Box<TermExpr>, Box<TermExpr>),
    Tilde(Box<TermExpr>),
}

impl TermExpr {
    pub fn depth(&self) -> usize {
        match self {
            TermExpr::Empty | TermExpr::Granule(_) => 0,
            TermExpr::Sum(ts) => 1 + ts.iter().map(TermExpr::depth).max().unwrap_or(0),
            TermExpr::Product(a, b) => 1 + a.depth().max(b.depth()),
            TermExpr::Tilde(a) => 1 + a.depth(),
        }
    }

    pub fn eval(&self, m: &RysModel) -> Option<Subset> {
        match self {
            TermExpr::Empty => Some(Subset::EMPTY),
            TermExpr::Granule(g) => Some(*g),
            TermExpr::Sum(ts) => {
                let mut it = ts.iter();
                let first = it.next()?.eval(m)?;
                it.try_fold(first, |acc, t| m.plus.apply(acc, t.eval(m)?))
            }
            TermExpr::Product(a, b) => m.times.apply(a.eval(m)?, b.eval(m)?),
            TermExpr::Tilde(a) => m.tilde.apply(a.eval(m)?),
        }
    }

    /// `({a,b} + {c})` style rendering.
    pub fn render(&self, u: &Universe) -> String {
        match self {
            TermExpr::Empty => "∅".to_string(),
            TermExpr::Granule(g) => u.render(*g),
            TermExpr::Sum(ts) => format!(
                "({})",
                ts.iter().map(|t| t.render(u)).collect::<Vec<_>>().join(" + ")
            ),
            TermExpr::Product(a, b) => format!("({} · {})", a.render(u), b.render(u)),
            TermExpr::Tilde(a) => format!("∼{}", a.render(u)),
        }
    }

    fn sum_with(&self, other: &TermExpr) -> TermExpr {
        let mut parts = match self {
            TermExpr::Sum(ts) => ts.clone(),
            t => vec![t.clone()],
        };
        parts.push(other.clone());
        TermExpr::Sum(parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TermBounds {
    pub depth: usize,
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermSearch {
    Found(TermExpr),
    /// Nothing within the bounds; says nothing about larger terms.
    Exhausted(TermBounds),
}

/// Sums `y_1 + ... + y_r` of granules (any `r`), keyed by value, with the empty sum as `∅`.
fn sum_closure(m: &RysModel, g: &GranuleSet) -> HashMap<Subset, TermExpr> {
    let mut found: HashMap<Subset, TermExpr> = HashMap::new();
    found.insert(Subset::EMPTY, TermExpr::Empty);
    let mut frontier = Vec::new();
    for &y in &g.members {
        if let std::collections::hash_map::Entry::Vacant(e) = found.entry(y) {
            e.insert(TermExpr::Granule(y));
            frontier.push(y);
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in frontier {
            let term = found[&v].clone();
            for &y in &g.members {
                if let Some(s) = m.plus.apply(v, y) {
                    if let std::collections::hash_map::Entry::Vacant(e) = found.entry(s) {
                        e.insert(term.sum_with(&TermExpr::Granule(y)));
                        next.push(s);
                    }
                }
            }
        }
        next.sort_by(|a, b| a.canonical_cmp(*b));
        frontier = next;
    }
    found
}

/// Values of all terms of depth at most `bounds.depth`, sums taking at most
/// `bounds.width` operands, merged with the (unbounded) pure sums.
fn reachable_terms(m: &RysModel, g: &GranuleSet, bounds: TermBounds) -> HashMap<Subset, TermExpr> {
    let mut found: HashMap<Subset, TermExpr> = HashMap::new();
    found.insert(Subset::EMPTY, TermExpr::Empty);
    for &y in &g.members {
        found.entry(y).or_insert(TermExpr::Granule(y));
    }
    for _ in 0..bounds.depth {
        let mut level: Vec<(Subset, TermExpr)> = found.iter().map(|(k, v)| (*k, v.clone())).collect();
        level.sort_by(|a, b| a.0.canonical_cmp(b.0));
        let mut grown = found.clone();
        for (v, t) in &level {
            if let Some(s) = m.tilde.apply(*v) {
                grown.entry(s).or_insert_with(|| TermExpr::Tilde(Box::new(t.clone())));
            }
            for (w, u) in &level {
                if let Some(s) = m.times.apply(*v, *w) {
                    grown
                        .entry(s)
                        .or_insert_with(|| TermExpr::Product(Box::new(t.clone()), Box::new(u.clone())));
                }
            }
        }
        let mut partial: Vec<(Subset, Vec<TermExpr>)> =
            level.iter().map(|(v, t)| (*v, vec![t.clone()])).collect();
        for _ in 1..bounds.width {
            let mut extended = Vec::new();
            for (v, children) in &partial {
                for (w, u) in &level {
                    if let Some(s) = m.plus.apply(*v, *w) {
                        if let std::collections::hash_map::Entry::Vacant(e) = grown.entry(s) {
                            let mut children = children.clone();
                            children.push(u.clone());
                            e.insert(TermExpr::Sum(children.clone()));
                            extended.push((s, children));
                        }
                    }
                }
            }
            if extended.is_empty() {
                break;
            }
            partial.extend(extended);
        }
        if grown.len() == found.len() {
            break;
        }
        found = grown;
    }
    found.extend(sum_closure(m, g));
    found
}

/// Looks for a term over the granules whose value is `target`.
pub fn wra_term_search(m: &RysModel, g: &GranuleSet, target: Subset, bounds: TermBounds) -> TermSearch {
    if let Some(t) = sum_closure(m, g).remove(&target) {
        return TermSearch::Found(t);
    }
    match reachable_terms(m, g, bounds).remove(&target) {
        Some(t) => TermSearch::Found(t),
        None => TermSearch::Exhausted(bounds),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    /// Witnessing family for `∃i` properties, failing family for `∀i` ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Failure only means "not found within the term bounds".
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub bounded_exhaustion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UuReadings {
    /// Uniqueness on the first family witnessing FU (absent when FU fails).
    pub fu_witness: Option<bool>,
    /// Uniqueness on at least one family.
    pub any_family: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GranuleReport {
    pub model: String,
    pub granules: String,
    pub label: GranuleLabel,
    pub mode: crate::rys::MereologyMode,
    pub bounds: TermBounds,
    pub properties: Vec<PropertyVerdict>,
    pub admissible: bool,
    pub uu_readings: UuReadings,
}

impl GranuleReport {
    pub fn verdict(&self, p: Property) -> bool {
        self.properties.iter().any(|v| v.property == p && v.holds)
    }

    /// `RA✓ WRA✓ ... UU✗`.
    pub fn profile(&self) -> String {
        self.properties
            .iter()
            .map(|v| format!("{}{}", v.property, if v.holds { "✓" } else { "✗" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

type Witness = Vec<Vec<String>>;

struct Checker<'a> {
    m: &'a RysModel,
    mer: Mereology<'a>,
    g: &'a GranuleSet,
    /// Carrier quantifier domain in canonical order (least element dropped in nonempty-witness mode).
    domain: Vec<usize>,
    granules: Vec<usize>,
    bounds: TermBounds,
}

impl<'a> Checker<'a> {
    fn new(m: &'a RysModel, g: &'a GranuleSet, bounds: TermBounds) -> Result<Checker<'a>> {
        let mer = m.mereology()?;
        let granules = g
            .members
            .iter()
            .map(|y| {
                m.position(*y).ok_or_else(|| {
                    Error::Config(format!("granule {} is not in the carrier", m.universe.render(*y)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut domain = m.witnesses();
        domain.sort_by(|a, b| m.carrier()[*a].canonical_cmp(m.carrier()[*b]));
        Ok(Checker {
            m,
            mer,
            g,
            domain,
            granules,
            bounds,
        })
    }

    fn el(&self, i: usize) -> Subset {
        self.m.carrier()[i]
    }

    fn r(&self, i: usize) -> Vec<String> {
        self.m.render(self.el(i))
    }

    fn pp(&self, x: usize, z: usize) -> bool {
        self.m.part_idx(x, z) && !self.m.part_idx(z, x)
    }

    fn part_sets(&self, a: Subset, b: Subset) -> bool {
        self.m.part(a, b)
    }

    /// Every approximation of every carrier element lies in `values`.
    fn represent(&self, values: &dyn Fn(Subset) -> bool) -> Option<(u32, Witness, String)> {
        let mut order: Vec<usize> = (0..self.m.len()).collect();
        order.sort_by(|a, b| self.el(*a).canonical_cmp(self.el(*b)));
        for fam in &self.m.families {
            for &x in &order {
                let (lo, up) = (fam.lower(self.el(x)), fam.upper(self.el(x)));
                if !values(lo) {
                    return Some((fam.index, vec![self.r(x), self.m.render(lo)], "lower approximation".into()));
                }
                if !values(up) {
                    return Some((fam.index, vec![self.r(x), self.m.render(up)], "upper approximation".into()));
                }
            }
        }
        None
    }

    fn crisp(&self, fam: &OperatorFamily) -> Option<Witness> {
        self.granules
            .iter()
            .find(|&&y| !fam.is_exact(self.el(y)))
            .map(|&y| vec![self.r(y)])
    }

    fn mer(&self, fam: &OperatorFamily) -> Option<Witness> {
        for &y in &self.granules {
            for &x in &self.domain {
                if self.m.part_idx(x, y) && fam.is_exact(self.el(x)) && x != y {
                    return Some(vec![self.r(y), self.r(x)]);
                }
            }
        }
        None
    }

    fn lower_stable(&self, fam: &OperatorFamily) -> Option<Witness> {
        for &y in &self.granules {
            for &x in &self.domain {
                if self.m.part_idx(y, x) && !self.part_sets(self.el(y), fam.lower(self.el(x))) {
                    return Some(vec![self.r(y), self.r(x)]);
                }
            }
        }
        None
    }

    fn upper_stable(&self, fam: &OperatorFamily) -> Option<Witness> {
        for &y in &self.granules {
            for &x in &self.domain {
                if self.mer.overlap_idx(y, x) && !self.part_sets(self.el(y), fam.upper(self.el(x))) {
                    return Some(vec![self.r(y), self.r(x)]);
                }
            }
        }
        None
    }

    /// Exact common proper supersets of `x` and `y` for a family.
    fn exact_uppers(&self, fam: &OperatorFamily, x: usize, y: usize) -> Vec<usize> {
        self.domain
            .iter()
            .copied()
            .filter(|&z| self.pp(x, z) && self.pp(y, z) && fam.is_exact(self.el(z)))
            .collect()
    }

    fn full_underlap(&self, fam: &OperatorFamily) -> Option<Witness> {
        for &x in &self.granules {
            for &y in &self.granules {
                if self.exact_uppers(fam, x, y).is_empty() {
                    return Some(vec![self.r(x), self.r(y)]);
                }
            }
        }
        None
    }

    fn unique_underlap(&self, fam: &OperatorFamily) -> Option<Witness> {
        for &x in &self.granules {
            for &y in &self.granules {
                let zs = self.exact_uppers(fam, x, y);
                if zs.len() > 1 {
                    return Some(vec![self.r(x), self.r(y), self.r(zs[0]), self.r(zs[1])]);
                }
            }
        }
        None
    }

    fn no_overlap(&self) -> Option<Witness> {
        for &x in &self.granules {
            for &y in &self.granules {
                if self.mer.proper_overlap_idx(x, y) {
                    return Some(vec![self.r(x), self.r(y)]);
                }
            }
        }
        None
    }

    fn verdict(property: Property, holds: bool) -> PropertyVerdict {
        PropertyVerdict {
            property,
            holds,
            family: None,
            witness: None,
            note: None,
            bounded_exhaustion: false,
        }
    }

    /// `∃i`: holds with the first family that works; otherwise the first family's counterexample.
    fn exists(&self, p: Property, check: impl Fn(&OperatorFamily) -> Option<Witness>) -> PropertyVerdict {
        let mut first_fail = None;
        for fam in &self.m.families {
            match check(fam) {
                None => {
                    let mut v = Self::verdict(p, true);
                    v.family = Some(fam.index);
                    return v;
                }
                Some(w) => {
                    first_fail.get_or_insert((fam.index, w));
                }
            }
        }
        let mut v = Self::verdict(p, false);
        if let Some((i, w)) = first_fail {
            v.family = Some(i);
            v.witness = Some(w);
            v.note = Some("no family satisfies the property".into());
        }
        v
    }

    /// `∀i`: fails at the first family with a counterexample.
    fn forall(&self, p: Property, check: impl Fn(&OperatorFamily) -> Option<Witness>) -> PropertyVerdict {
        for fam in &self.m.families {
            if let Some(w) = check(fam) {
                let mut v = Self::verdict(p, false);
                v.family = Some(fam.index);
                v.witness = Some(w);
                return v;
            }
        }
        Self::verdict(p, true)
    }

    fn uu_readings(&self) -> UuReadings {
        let fu_family = self.m.families.iter().find(|f| self.full_underlap(f).is_none());
        UuReadings {
            fu_witness: fu_family.map(|f| self.unique_underlap(f).is_none()),
            any_family: self.m.families.iter().any(|f| self.unique_underlap(f).is_none()),
        }
    }

    fn check(&self, p: Property) -> PropertyVerdict {
        match p {
            Property::RA => {
                let sums = sum_closure(self.m, self.g);
                match self.represent(&|s| sums.contains_key(&s)) {
                    None => Self::verdict(p, true),
                    Some((i, w, what)) => PropertyVerdict {
                        family: Some(i),
                        witness: Some(w),
                        note: Some(format!("{what} is not a sum of granules")),
                        ..Self::verdict(p, false)
                    },
                }
            }
            Property::WRA => {
                let terms = reachable_terms(self.m, self.g, self.bounds);
                match self.represent(&|s| terms.contains_key(&s)) {
                    None => Self::verdict(p, true),
                    Some((i, w, what)) => PropertyVerdict {
                        family: Some(i),
                        witness: Some(w),
                        note: Some(format!(
                            "no term of depth ≤ {} and width ≤ {} yields the {what}",
                            self.bounds.depth, self.bounds.width
                        )),
                        bounded_exhaustion: true,
                        ..Self::verdict(p, false)
                    },
                }
            }
            Property::ACG => self.forall(p, |f| self.crisp(f)),
            Property::WCG => self.exists(p, |f| self.crisp(f)),
            Property::MER => self.exists(p, |f| self.mer(f)),
            Property::LS => self.exists(p, |f| self.lower_stable(f)),
            Property::US => self.exists(p, |f| self.upper_stable(f)),
            Property::ST => {
                let ls = self.check(Property::LS);
                let us = self.check(Property::US);
                let holds = ls.holds && us.holds;
                let failing = if ls.holds { us } else { ls };
                PropertyVerdict {
                    witness: if holds { None } else { failing.witness },
                    family: if holds { None } else { failing.family },
                    note: (!holds).then(|| format!("{} fails", failing.property)),
                    ..Self::verdict(p, holds)
                }
            }
            Property::AS => self.forall(p, |f| self.lower_stable(f).or_else(|| self.upper_stable(f))),
            Property::NO => match self.no_overlap() {
                None => Self::verdict(p, true),
                Some(w) => PropertyVerdict {
                    witness: Some(w),
                    ..Self::verdict(p, false)
                },
            },
            Property::FU => self.exists(p, |f| self.full_underlap(f)),
            Property::UU => {
                let readings = self.uu_readings();
                let fu_family = self.m.families.iter().find(|f| self.full_underlap(f).is_none());
                match fu_family {
                    Some(f) => match self.unique_underlap(f) {
                        None => PropertyVerdict {
                            family: Some(f.index),
                            ..Self::verdict(p, true)
                        },
                        Some(w) => PropertyVerdict {
                            family: Some(f.index),
                            witness: Some(w),
                            note: Some(format!(
                                "two exact common proper supersets (any-family reading: {})",
                                readings.any_family
                            )),
                            ..Self::verdict(p, false)
                        },
                    },
                    None => {
                        let mut v = self.exists(p, |f| self.unique_underlap(f));
                        v.note = Some("no family satisfies FU; any-family reading used".into());
                        v
                    }
                }
            }
        }
    }
}

pub const DEFAULT_DEPTH: usize = 2;

/// Default bounds: depth 2, width `|G|`.
pub fn default_bounds(g: &GranuleSet) -> TermBounds {
    TermBounds {
        depth: DEFAULT_DEPTH,
        width: g.members.len(),
    }
}

pub fn check_property(m: &RysModel, g: &GranuleSet, property: &str, bounds: TermBounds) -> Result<PropertyVerdict> {
    let p = Property::parse(property)?;
    Ok(Checker::new(m, g, bounds)?.check(p))
}

pub fn check_admissible(m: &RysModel, g: &GranuleSet, bounds: TermBounds) -> Result<GranuleReport> {
    let checker = Checker::new(m, g, bounds)?;
    let properties: Vec<PropertyVerdict> = Property::ALL.iter().map(|p| checker.check(*p)).collect();
    let holds = |p: Property| properties.iter().any(|v| v.property == p && v.holds);
    let admissible = holds(Property::WRA) && holds(Property::LS) && holds(Property::FU);
    Ok(GranuleReport {
        model: m.name.clone(),
        granules: g.name.clone(),
        label: g.label,
        mode: m.mode,
        bounds,
        admissible,
        uu_readings: checker.uu_readings(),
        properties,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Cover, ModelContext};
    use crate::rys::MereologyMode;

    fn m0() -> ModelContext {
        ModelContext::from_blocks("M0", &["a", "b", "c", "d", "e"], &[&["a", "b"], &["c"], &["d", "e"]]).unwrap()
    }

    fn blocks(ctx: &ModelContext) -> GranuleSet {
        GranuleSet::new("blocks", ctx.partition().unwrap().blocks().to_vec(), GranuleLabel::Initial).unwrap()
    }

    fn s(ctx: &ModelContext, names: &[&str]) -> Subset {
        ctx.universe.subset(names).unwrap()
    }

    #[test]
    fn block_profile_nonempty_mode() {
        let ctx = m0();
        let rys = RysModel::from_context(&ctx).unwrap().with_mode(MereologyMode::NonemptyWitness);
        let g = blocks(&ctx);
        let rep = check_admissible(&rys, &g, default_bounds(&g)).unwrap();
        assert_eq!(rep.profile(), "RA✓ WRA✓ ACG✓ WCG✓ MER✓ LS✓ US✓ ST✓ AS✓ NO✓ FU✓ UU✗");
        assert!(rep.admissible);
        assert_eq!(rep.uu_readings, UuReadings { fu_witness: Some(false), any_family: false });
    }

    #[test]
    fn block_profile_literal_mode_is_distorted_by_empty_object() {
        let ctx = m0();
        let rys = RysModel::from_context(&ctx).unwrap();
        let g = blocks(&ctx);
        let rep = check_admissible(&rys, &g, default_bounds(&g)).unwrap();
        assert!(!rep.verdict(Property::US));
        assert!(!rep.verdict(Property::MER));
        assert!(!rep.verdict(Property::NO));
        assert!(rep.verdict(Property::LS) && rep.verdict(Property::FU));
    }

    #[test]
    fn single_block_fails_full_underlap() {
        let ctx = ModelContext::from_blocks("one-block", &["a", "b", "c"], &[&["a", "b", "c"]]).unwrap();
        let rys = RysModel::from_context(&ctx).unwrap().with_mode(MereologyMode::NonemptyWitness);
        let g = blocks(&ctx);
        let rep = check_admissible(&rys, &g, default_bounds(&g)).unwrap();
        assert!(!rep.verdict(Property::FU));
        assert!(!rep.admissible);
    }

    #[test]
    fn acg_fails_on_non_block() {
        let ctx = m0();
        let rys = RysModel::from_context(&ctx).unwrap();
        let g = GranuleSet::new("a", vec![s(&ctx, &["a"])], GranuleLabel::Unlabeled).unwrap();
        let v = check_property(&rys, &g, "ACG", default_bounds(&g)).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(vec![vec!["a".to_string()]]));
        assert!(matches!(
            check_property(&rys, &g, "XYZ", default_bounds(&g)),
            Err(Error::UnknownProperty(_))
        ));
    }

    #[test]
    fn term_search_examples() {
        let ctx = m0();
        let rys = RysModel::from_context(&ctx).unwrap();
        let g = blocks(&ctx);
        let fam = ctx.primary();
        let target = fam.lower(s(&ctx, &["a", "b", "c"]));
        match wra_term_search(&rys, &g, target, default_bounds(&g)) {
            TermSearch::Found(t) => {
                assert_eq!(t.render(&ctx.universe), "({a,b} + {c})");
                assert_eq!(t.eval(&rys), Some(target));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            wra_term_search(&rys, &g, Subset::EMPTY, default_bounds(&g)),
            TermSearch::Found(TermExpr::Empty)
        );
        let poor = GranuleSet::new("poor", vec![s(&ctx, &["a", "b"])], GranuleLabel::Unlabeled).unwrap();
        let b = default_bounds(&poor);
        assert_eq!(wra_term_search(&rys, &poor, s(&ctx, &["c"]), b), TermSearch::Exhausted(b));
        // mixed terms reach the complement
        match wra_term_search(&rys, &poor, s(&ctx, &["c", "d", "e"]), b) {
            TermSearch::Found(t) => assert_eq!(t.eval(&rys), Some(s(&ctx, &["c", "d", "e"]))),
            other => panic!("{other:?}"),
        }
        for (v, t) in reachable_terms(&rys, &g, b) {
            assert_eq!(t.eval(&rys), Some(v));
            assert!(t.depth() <= b.depth.max(1));
        }
    }

    #[test]
    fn cover_granules_report_is_computed() {
        let ctx = m0();
        let c1 = Cover::new(
            &ctx.universe,
            "C1",
            vec![s(&ctx, &["a", "b"]), s(&ctx, &["b", "c"]), s(&ctx, &["c", "d", "e"])],
        )
        .unwrap();
        let fam = crate::model::OperatorFamily::cover_standard(1, c1.clone());
        let cctx = ModelContext::new("C1", ctx.universe.clone(), None, vec![c1.clone()], vec![fam], Default::default())
            .unwrap();
        let rys = RysModel::from_context(&cctx).unwrap().with_mode(MereologyMode::NonemptyWitness);
        let g = GranuleSet::new("C1", c1.members().to_vec(), GranuleLabel::Initial).unwrap();
        let rep = check_admissible(&rys, &g, default_bounds(&g)).unwrap();
        // both approximations are unions of members and S is exact
        for p in [Property::RA, Property::WRA, Property::LS, Property::FU] {
            assert!(rep.verdict(p), "{p}");
        }
        assert!(rep.admissible);
    }
}
