//! General rough Y-systems over a finite carrier of subsets: axiom checks,
//! derived mereological predicates, and ι-resolved sum/product/difference.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelContext, OperatorFamily};
use crate::subset::{Subset, Universe};

/// Largest carrier for which the n×n mereology tables are materialized.
pub const MEREOLOGY_BOUND: usize = 1024;
/// Above this many pairs (or triples) axiom scans switch to seeded sampling.
pub const PAIR_SCAN_BUDGET: u64 = 1 << 24;
const SAMPLED_PAIRS: u64 = 1 << 16;

/// How the empty object takes part in existential mereological conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MereologyMode {
    /// Quantifiers range over the whole carrier, least element included.
    #[default]
    Literal,
    /// The least element is never used as an existential witness (and is
    /// skipped by the carrier quantifiers of granule properties).
    NonemptyWitness,
}

impl MereologyMode {
    pub fn parse(s: &str) -> Result<MereologyMode> {
        match s {
            "literal" => Ok(MereologyMode::Literal),
            "nonempty-witness" => Ok(MereologyMode::NonemptyWitness),
            other => Err(Error::Config(format!("unknown mereology mode {other:?}"))),
        }
    }

    pub fn note(self) -> &'static str {
        match self {
            MereologyMode::Literal => {
                "literal mode: the empty object is a part of everything, so it witnesses every overlap"
            }
            MereologyMode::NonemptyWitness => {
                "nonempty-witness mode: the least element is excluded as a witness"
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Parthood {
    Inclusion,
    /// Explicit relation over carrier indices, row `x` holding every `y` with `P x y`.
    Table(Vec<FixedBitSet>),
}

#[derive(Clone, Debug)]
pub enum BinaryOp {
    Union,
    Intersection,
    /// Partial table; missing entries are undefined.
    Table(HashMap<(Subset, Subset), Subset>),
}

impl BinaryOp {
    pub fn apply(&self, x: Subset, y: Subset) -> Option<Subset> {
        match self {
            BinaryOp::Union => Some(x.union(y)),
            BinaryOp::Intersection => Some(x.intersection(y)),
            BinaryOp::Table(t) => t.get(&(x, y)).copied(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum UnaryOp {
    Complement(Subset),
    Table(HashMap<Subset, Subset>),
}

impl UnaryOp {
    pub fn apply(&self, x: Subset) -> Option<Subset> {
        match self {
            UnaryOp::Complement(full) => Some(x.complement_in(*full)),
            UnaryOp::Table(t) => t.get(&x).copied(),
        }
    }
}

/// A concrete rough Y-system with carrier drawn from `℘(S)`.
#[derive(Clone, Debug)]
pub struct RysModel {
    pub name: String,
    pub universe: Universe,
    carrier: Vec<Subset>,
    index: HashMap<Subset, usize>,
    /// The distinguished definables `W` (primary family fixed points in the carrier).
    pub definables: Vec<Subset>,
    pub parthood: Parthood,
    pub families: Vec<OperatorFamily>,
    pub plus: BinaryOp,
    pub times: BinaryOp,
    pub tilde: UnaryOp,
    pub one: Subset,
    pub mode: MereologyMode,
}

impl RysModel {
    /// Default system: carrier `℘(S)`, parthood `⊆`, union/intersection/complement.
    pub fn from_context(ctx: &ModelContext) -> Result<RysModel> {
        ctx.limits
            .require_exhaustive(ctx.universe.size(), "a power-set carrier")?;
        RysModel::with_carrier(ctx, ctx.universe.all_subsets().collect())
    }

    /// Same defaults over an explicit carrier.
    pub fn with_carrier(ctx: &ModelContext, mut carrier: Vec<Subset>) -> Result<RysModel> {
        if carrier.is_empty() {
            return Err(Error::Config("carrier must be nonempty".into()));
        }
        carrier.sort();
        carrier.dedup();
        let full = ctx.full();
        if let Some(bad) = carrier.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::Config(format!("carrier element {:#b} outside the universe", bad.0)));
        }
        let index = carrier.iter().enumerate().map(|(i, s)| (*s, i)).collect::<HashMap<_, _>>();
        let definables = carrier
            .iter()
            .copied()
            .filter(|a| ctx.primary().is_exact(*a))
            .collect();
        Ok(RysModel {
            name: ctx.name.clone(),
            universe: ctx.universe.clone(),
            carrier,
            index,
            definables,
            parthood: Parthood::Inclusion,
            families: ctx.families.clone(),
            plus: BinaryOp::Union,
            times: BinaryOp::Intersection,
            tilde: UnaryOp::Complement(full),
            one: full,
            mode: MereologyMode::Literal,
        })
    }

    pub fn with_mode(mut self, mode: MereologyMode) -> RysModel {
        self.mode = mode;
        self
    }

    /// Replace parthood with an explicit list of related pairs.
    pub fn with_parthood_pairs(mut self, pairs: &[(Subset, Subset)]) -> Result<RysModel> {
        let n = self.carrier.len();
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for (x, y) in pairs {
            let (i, j) = (self.require(*x)?, self.require(*y)?);
            rows[i].insert(j);
        }
        self.parthood = Parthood::Table(rows);
        Ok(self)
    }

    pub fn carrier(&self) -> &[Subset] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn position(&self, x: Subset) -> Option<usize> {
        self.index.get(&x).copied()
    }

    fn require(&self, x: Subset) -> Result<usize> {
        self.position(x).ok_or_else(|| {
            Error::Config(format!("{} is not in the carrier", self.universe.render(x)))
        })
    }

    pub fn render(&self, x: Subset) -> Vec<String> {
        self.universe.names_of(x)
    }

    pub fn part_idx(&self, i: usize, j: usize) -> bool {
        match &self.parthood {
            Parthood::Inclusion => self.carrier[i].is_subset(self.carrier[j]),
            Parthood::Table(rows) => rows[i].contains(j),
        }
    }

    /// `P x y`; false when either side is outside the carrier.
    pub fn part(&self, x: Subset, y: Subset) -> bool {
        match (&self.parthood, self.position(x), self.position(y)) {
            (Parthood::Inclusion, Some(_), Some(_)) => x.is_subset(y),
            (_, Some(i), Some(j)) => self.part_idx(i, j),
            _ => false,
        }
    }

    /// Index of the element below everything, if any.
    pub fn least(&self) -> Option<usize> {
        match &self.parthood {
            Parthood::Inclusion => {
                let meet = self.carrier.iter().fold(self.universe.full(), |a, s| a.intersection(*s));
                self.position(meet)
            }
            Parthood::Table(_) => {
                (0..self.len()).find(|&z| (0..self.len()).all(|w| self.part_idx(z, w)))
            }
        }
    }

    /// Carrier indices usable as existential witnesses in the active mode.
    pub fn witnesses(&self) -> Vec<usize> {
        let skip = match self.mode {
            MereologyMode::Literal => None,
            MereologyMode::NonemptyWitness => self.least(),
        };
        (0..self.len()).filter(|i| Some(*i) != skip).collect()
    }

    pub fn overlap(&self, x: Subset, y: Subset) -> bool {
        self.overlap_witness(x, y).is_some()
    }

    pub fn overlap_witness(&self, x: Subset, y: Subset) -> Option<Subset> {
        let (i, j) = (self.position(x)?, self.position(y)?);
        self.witnesses()
            .into_iter()
            .find(|&z| self.part_idx(z, i) && self.part_idx(z, j))
            .map(|z| self.carrier[z])
    }

    pub fn underlap(&self, x: Subset, y: Subset) -> bool {
        let (Some(i), Some(j)) = (self.position(x), self.position(y)) else {
            return false;
        };
        self.witnesses()
            .into_iter()
            .any(|z| self.part_idx(i, z) && self.part_idx(j, z))
    }

    pub fn proper_part(&self, x: Subset, y: Subset) -> bool {
        self.part(x, y) && !self.part(y, x)
    }

    pub fn overcross(&self, x: Subset, y: Subset) -> bool {
        self.overlap(x, y) && !self.part(x, y)
    }

    pub fn proper_overlap(&self, x: Subset, y: Subset) -> bool {
        self.overcross(x, y) && self.overcross(y, x)
    }

    /// Materialize parthood and overlap rows for ι-resolution and supplementation.
    pub fn mereology(&self) -> Result<Mereology<'_>> {
        Mereology::new(self)
    }

    /// `x^{p}` for an approximation symbol.
    pub fn approx(&self, fam: &OperatorFamily, side: Side, x: Subset) -> Subset {
        match side {
            Side::Lower => fam.lower(x),
            Side::Upper => fam.upper(x),
        }
    }

    /// Fixed points of family `fam` within the carrier.
    pub fn exact_for(&self, fam: &OperatorFamily) -> Vec<Subset> {
        self.carrier.iter().copied().filter(|a| fam.is_exact(*a)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Outcome of an ι-description scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Resolution {
    Unique { value: Vec<String> },
    None,
    /// The first two satisfying candidates and the total count.
    Multiple { first: Vec<String>, second: Vec<String>, count: usize },
}

impl Resolution {
    pub fn is_unique(&self) -> bool {
        matches!(self, Resolution::Unique { .. })
    }
}

/// Precomputed parthood and overlap rows over a bounded carrier.
pub struct Mereology<'a> {
    pub rys: &'a RysModel,
    /// `down[z]` = `{w : P w z}`.
    down: Vec<FixedBitSet>,
    /// `over[z]` = `{w : O w z}`.
    over: Vec<FixedBitSet>,
}

impl<'a> Mereology<'a> {
    pub fn new(rys: &'a RysModel) -> Result<Mereology<'a>> {
        let n = rys.len();
        if n > MEREOLOGY_BOUND {
            return Err(Error::Budget(format!(
                "carrier of {n} elements exceeds the mereology bound {MEREOLOGY_BOUND}"
            )));
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (z, row) in down.iter_mut().enumerate() {
            for w in 0..n {
                if rys.part_idx(w, z) {
                    row.insert(w);
                }
            }
        }
        let mut allowed = FixedBitSet::with_capacity(n);
        for w in rys.witnesses() {
            allowed.insert(w);
        }
        let mut over = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            let mut dx = down[x].clone();
            dx.intersect_with(&allowed);
            for y in x..n {
                if !dx.is_disjoint(&down[y]) {
                    over[x].insert(y);
                    over[y].insert(x);
                }
            }
        }
        Ok(Mereology { rys, down, over })
    }

    pub fn overlap_idx(&self, x: usize, y: usize) -> bool {
        self.over[x].contains(y)
    }

    pub fn proper_overlap_idx(&self, x: usize, y: usize) -> bool {
        let cross = |a: usize, b: usize| self.overlap_idx(a, b) && !self.rys.part_idx(a, b);
        cross(x, y) && cross(y, x)
    }

    fn resolve(&self, satisfied: impl Fn(usize) -> bool) -> Resolution {
        let hits: Vec<usize> = (0..self.rys.len()).filter(|&z| satisfied(z)).collect();
        let r = |i: usize| self.rys.render(self.rys.carrier[i]);
        match hits.len() {
            0 => Resolution::None,
            1 => Resolution::Unique { value: r(hits[0]) },
            count => Resolution::Multiple {
                first: r(hits[0]),
                second: r(hits[1]),
                count,
            },
        }
    }

    /// `ιz ∀w (O w z ↔ O w x ∨ O w y)`.
    pub fn sum_idx(&self, x: usize, y: usize) -> Resolution {
        let mut target = self.over[x].clone();
        target.union_with(&self.over[y]);
        self.resolve(|z| self.over[z] == target)
    }

    /// `ιz ∀w (P w z ↔ P w x ∧ P w y)`.
    pub fn product_idx(&self, x: usize, y: usize) -> Resolution {
        let mut target = self.down[x].clone();
        target.intersect_with(&self.down[y]);
        self.resolve(|z| self.down[z] == target)
    }

    /// `ιz ∀w (P w z ↔ P w x ∧ ¬O w y)`.
    pub fn difference_idx(&self, x: usize, y: usize) -> Resolution {
        let mut target = self.down[x].clone();
        target.difference_with(&self.over[y]);
        self.resolve(|z| self.down[z] == target)
    }

    pub fn sum(&self, x: Subset, y: Subset) -> Result<Resolution> {
        Ok(self.sum_idx(self.rys.require(x)?, self.rys.require(y)?))
    }

    pub fn product(&self, x: Subset, y: Subset) -> Result<Resolution> {
        Ok(self.product_idx(self.rys.require(x)?, self.rys.require(y)?))
    }

    pub fn difference(&self, x: Subset, y: Subset) -> Result<Resolution> {
        Ok(self.difference_idx(self.rys.require(x)?, self.rys.require(y)?))
    }
}

pub fn mereo_sum(m: &RysModel, x: Subset, y: Subset) -> Result<Resolution> {
    m.mereology()?.sum(x, y)
}

pub fn mereo_product(m: &RysModel, x: Subset, y: Subset) -> Result<Resolution> {
    m.mereology()?.product(x, y)
}

pub fn mereo_difference(m: &RysModel, x: Subset, y: Subset) -> Result<Resolution> {
    m.mereology()?.difference(x, y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<u32>,
    pub holds: bool,
    /// Counterexample elements, in the order the axiom names them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityReading {
    pub family: u32,
    /// Images of `l_i` and `u_i` both equal the shared `W`.
    pub shared_w: bool,
    /// `image(l_i) ∪ image(u_i)` equals the family's own fixed points.
    pub per_family_w: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub model: String,
    pub mode: MereologyMode,
    pub note: String,
    pub carrier: usize,
    pub definables: usize,
    pub sampled: bool,
    pub axioms: Vec<AxiomVerdict>,
    pub surjectivity: Vec<SurjectivityReading>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.axioms.iter().all(|a| a.holds)
    }

    pub fn get(&self, axiom: &str, family: Option<u32>) -> Option<&AxiomVerdict> {
        self.axioms
            .iter()
            .find(|a| a.axiom == axiom && (family.is_none() || a.family == family))
    }
}

/// Pair scan: all ordered pairs, or a seeded sample when there are too many.
fn pair_indices(n: usize) -> (bool, Vec<(usize, usize)>) {
    let total = (n as u64) * (n as u64);
    if total <= PAIR_SCAN_BUDGET {
        (false, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = (0..SAMPLED_PAIRS)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        (true, v)
    }
}

fn triple_indices(n: usize) -> (bool, Vec<(usize, usize, usize)>) {
    let total = (n as u64).pow(3);
    if total <= PAIR_SCAN_BUDGET {
        let v = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect();
        (false, v)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = (0..SAMPLED_PAIRS)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        (true, v)
    }
}

/// Checks the seven defining conditions, family by family, plus the
/// associativity assumed for `+` and `·`.
pub fn check_rys_axioms(m: &RysModel) -> AxiomReport {
    let n = m.len();
    let c = &m.carrier;
    let r = |s: Subset| m.render(s);
    let mut axioms = Vec::new();
    let mut push = |axiom: &str, family: Option<u32>, witness: Option<Vec<Vec<String>>>, note: Option<String>| {
        axioms.push(AxiomVerdict {
            axiom: axiom.to_string(),
            family,
            holds: witness.is_none() && note.is_none(),
            witness,
            note,
        })
    };

    let refl = (0..n).find(|&i| !m.part_idx(i, i)).map(|i| vec![r(c[i])]);
    push("1 reflexivity", None, refl, None);
    let (sampled_pairs, pairs) = pair_indices(n);
    let antisym = pairs
        .iter()
        .find(|&&(i, j)| i != j && m.part_idx(i, j) && m.part_idx(j, i))
        .map(|&(i, j)| vec![r(c[i]), r(c[j])]);
    push("1 antisymmetry", None, antisym, None);

    let w: HashSet<Subset> = m.definables.iter().copied().collect();
    let mut surjectivity = Vec::new();
    for fam in &m.families {
        let i = Some(fam.index);
        let lower: Vec<Subset> = c.iter().map(|x| fam.lower(*x)).collect();
        let upper: Vec<Subset> = c.iter().map(|x| fam.upper(*x)).collect();

        let outside = (0..n)
            .find(|&k| m.position(lower[k]).is_none() || m.position(upper[k]).is_none())
            .map(|k| vec![r(c[k])]);
        let closure_note = outside.as_ref().map(|_| "approximation leaves the carrier".to_string());
        push("closure", i, outside, closure_note);

        let img_l: HashSet<Subset> = lower.iter().copied().collect();
        let img_u: HashSet<Subset> = upper.iter().copied().collect();
        let own: HashSet<Subset> = m.exact_for(fam).into_iter().collect();
        let union: HashSet<Subset> = img_l.union(&img_u).copied().collect();
        let shared_w = img_l == w && img_u == w;
        surjectivity.push(SurjectivityReading {
            family: fam.index,
            shared_w,
            per_family_w: union == own,
        });
        let mut missing: Vec<Subset> = w.iter().filter(|d| !img_l.contains(d) || !img_u.contains(d)).copied().collect();
        let mut stray: Vec<Subset> = img_l.union(&img_u).filter(|d| !w.contains(d)).copied().collect();
        missing.sort_by(|a, b| a.canonical_cmp(*b));
        stray.sort_by(|a, b| a.canonical_cmp(*b));
        let (witness, note) = if shared_w {
            (None, None)
        } else if let Some(d) = missing.first() {
            (Some(vec![r(*d)]), Some("definable not in the image of l_i or u_i".to_string()))
        } else {
            (Some(vec![r(stray[0])]), Some("image element outside W".to_string()))
        };
        push("2 surjectivity", i, witness, note);

        let pl = |a: Subset, b: Subset| m.part(a, b);
        let mono_l = pairs
            .iter()
            .find(|&&(x, y)| m.part_idx(x, y) && !pl(lower[x], lower[y]))
            .map(|&(x, y)| vec![r(c[x]), r(c[y])]);
        push("3 lower monotone", i, mono_l, None);
        let mono_u = pairs
            .iter()
            .find(|&&(x, y)| m.part_idx(x, y) && !pl(upper[x], upper[y]))
            .map(|&(x, y)| vec![r(c[x]), r(c[y])]);
        push("4 upper monotone", i, mono_u, None);

        let contr = (0..n).find(|&x| !pl(lower[x], c[x])).map(|x| vec![r(c[x])]);
        push("5 P(l x) x", i, contr, None);
        let expan = (0..n).find(|&x| !pl(c[x], upper[x])).map(|x| vec![r(c[x])]);
        push("5 P x (u x)", i, expan, None);

        let collapse = (0..n)
            .find(|&x| pl(upper[x], lower[x]) && !(c[x] == lower[x] && c[x] == upper[x]))
            .map(|x| vec![r(c[x])]);
        push("6 exactness collapse", i, collapse, None);

        let mixed_l = (0..n)
            .find(|&x| !pl(lower[x], fam.upper(lower[x])))
            .map(|x| vec![r(c[x])]);
        push("7 P(l x)(u l x)", i, mixed_l, None);
        let mixed_u = (0..n)
            .find(|&x| !pl(fam.lower(upper[x]), upper[x]))
            .map(|x| vec![r(c[x])]);
        push("7 P(l u x)(u x)", i, mixed_u, None);
    }

    let (sampled_triples, triples) = triple_indices(n);
    for (name, op) in [("associativity +", &m.plus), ("associativity ·", &m.times)] {
        let bad = triples.iter().find(|&&(x, y, z)| {
            let left = op.apply(c[x], c[y]).and_then(|xy| op.apply(xy, c[z]));
            let right = op.apply(c[y], c[z]).and_then(|yz| op.apply(c[x], yz));
            left != right
        });
        push(name, None, bad.map(|&(x, y, z)| vec![r(c[x]), r(c[y]), r(c[z])]), None);
    }

    AxiomReport {
        model: m.name.clone(),
        mode: m.mode,
        note: m.mode.note().to_string(),
        carrier: n,
        definables: m.definables.len(),
        sampled: sampled_pairs || sampled_triples,
        axioms,
        surjectivity,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupplementationVerdict {
    pub holds: bool,
    /// First `(x, y)` with `¬P x y` and no witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<[Vec<String>; 2]>,
    /// Witness `(x, y, z)` for the first pair that needed one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<[Vec<String>; 3]>,
    /// Whether the least element alone serves as `z` for every pair
    /// (absent when the carrier has no least element).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub least_suffices: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupplementationReport {
    pub mode: MereologyMode,
    /// `¬P x y → ∃z (P z x ∧ ¬𝕆 z y)`.
    pub strict: SupplementationVerdict,
    /// `¬P x y → ∃z (P z x ∧ ¬O z y)`.
    pub weak: SupplementationVerdict,
}

pub fn supplementation_check(m: &RysModel) -> Result<SupplementationReport> {
    let mer = m.mereology()?;
    let n = m.len();
    let ws = m.witnesses();
    let r = |i: usize| m.render(m.carrier[i]);
    let least = m.least();
    let run = |ok: &dyn Fn(usize, usize) -> bool| {
        let least_suffices = least.map(|z| {
            (0..n).all(|x| (0..n).all(|y| m.part_idx(x, y) || (m.part_idx(z, x) && ok(z, y))))
        });
        let mut example = None;
        for x in 0..n {
            for y in 0..n {
                if m.part_idx(x, y) {
                    continue;
                }
                match ws.iter().find(|&&z| m.part_idx(z, x) && ok(z, y)) {
                    Some(&z) => {
                        example.get_or_insert([r(x), r(y), r(z)]);
                    }
                    None => {
                        return SupplementationVerdict {
                            holds: false,
                            counterexample: Some([r(x), r(y)]),
                            example,
                            least_suffices,
                        }
                    }
                }
            }
        }
        SupplementationVerdict {
            holds: true,
            counterexample: None,
            example,
            least_suffices,
        }
    };
    Ok(SupplementationReport {
        mode: m.mode,
        strict: run(&|z, y| !mer.proper_overlap_idx(z, y)),
        weak: run(&|z, y| !mer.overlap_idx(z, y)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IotaAgreement {
    pub operation: String,
    pub pairs: u64,
    pub agree: u64,
    pub undefined: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_disagreement: Option<[Vec<String>; 2]>,
}

/// Compares the given `+`, `·` with their ι-characterizations on all pairs.
pub fn iota_agreement(m: &RysModel) -> Result<Vec<IotaAgreement>> {
    let mer = m.mereology()?;
    let n = m.len();
    let c = &m.carrier;
    let mut out = Vec::new();
    type Resolver<'a> = Box<dyn Fn(usize, usize) -> Resolution + 'a>;
    let ops: [(&str, &BinaryOp, Resolver); 2] = [
        ("+", &m.plus, Box::new(|x, y| mer.sum_idx(x, y))),
        ("·", &m.times, Box::new(|x, y| mer.product_idx(x, y))),
    ];
    for (name, op, iota) in ops {
        let mut rep = IotaAgreement {
            operation: name.to_string(),
            pairs: 0,
            agree: 0,
            undefined: 0,
            first_disagreement: None,
        };
        for x in 0..n {
            for y in 0..n {
                rep.pairs += 1;
                match (iota(x, y), op.apply(c[x], c[y])) {
                    (Resolution::Unique { value }, Some(v)) if value == m.render(v) => rep.agree += 1,
                    (Resolution::Unique { .. }, _) => {
                        rep.first_disagreement.get_or_insert([m.render(c[x]), m.render(c[y])]);
                    }
                    _ => rep.undefined += 1,
                }
            }
        }
        out.push(rep);
    }
    Ok(out)
}
