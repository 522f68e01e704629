//! Partitions, covers, and the approximation operator families built on them.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{Limits, ScanMode};
use crate::subset::{Subset, Universe};

/// Pairwise-disjoint nonempty blocks covering the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Subset>,
    singletons: Subset,
}

impl Partition {
    pub fn new(universe: &Universe, mut blocks: Vec<Subset>) -> Result<Partition> {
        let mut seen = Subset::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Config("partition blocks must be nonempty".into()));
            }
            if b.meets(seen) {
                return Err(Error::Config(format!(
                    "partition block {} overlaps an earlier block",
                    universe.render(*b)
                )));
            }
            seen = seen.union(*b);
        }
        if seen != universe.full() {
            return Err(Error::Config(format!(
                "partition does not cover {}",
                universe.render(universe.full().difference(seen))
            )));
        }
        blocks.sort_by(|a, b| a.canonical_cmp(*b));
        let singletons = blocks
            .iter()
            .filter(|b| b.len() == 1)
            .fold(Subset::EMPTY, |acc, b| acc.union(*b));
        Ok(Partition { blocks, singletons })
    }

    /// Partition from a block label per atom.
    pub fn from_labels(universe: &Universe, labels: &[usize]) -> Result<Partition> {
        let mut blocks: Vec<(usize, Subset)> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match blocks.iter_mut().find(|(k, _)| *k == l) {
                Some((_, b)) => *b = b.union(Subset::singleton(i)),
                None => blocks.push((l, Subset::singleton(i))),
            }
        }
        Partition::new(universe, blocks.into_iter().map(|(_, b)| b).collect())
    }

    /// Consecutive blocks of the given sizes over `a, b, c, ...`.
    pub fn from_block_sizes(universe: &Universe, sizes: &[usize]) -> Result<Partition> {
        let mut next = 0;
        let mut blocks = Vec::new();
        for &s in sizes {
            let b = (next..next + s).fold(Subset::EMPTY, |acc, i| acc.union(Subset::singleton(i)));
            blocks.push(b);
            next += s;
        }
        Partition::new(universe, blocks)
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// Union of all one-element blocks.
    pub fn singleton_blocks(&self) -> Subset {
        self.singletons
    }

    /// Block sizes in decreasing order.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn lower(&self, a: Subset) -> Subset {
        self.blocks
            .iter()
            .filter(|b| b.is_subset(a))
            .fold(Subset::EMPTY, |acc, b| acc.union(*b))
    }

    pub fn upper(&self, a: Subset) -> Subset {
        self.blocks
            .iter()
            .filter(|b| b.meets(a))
            .fold(Subset::EMPTY, |acc, b| acc.union(*b))
    }

    pub fn is_definable(&self, a: Subset) -> bool {
        self.blocks.iter().all(|b| b.is_subset(a) || !b.meets(a))
    }

    /// All unions of blocks, ascending by bits.
    pub fn definables(&self) -> Vec<Subset> {
        let mut out: Vec<Subset> = (0u64..1 << self.blocks.len())
            .map(|sel| {
                Subset(sel)
                    .indices()
                    .fold(Subset::EMPTY, |acc, i| acc.union(self.blocks[i]))
            })
            .collect();
        out.sort();
        out
    }

    /// Uniform random partition shape by independent block labels.
    pub fn random<R: Rng>(universe: &Universe, rng: &mut R) -> Partition {
        let n = universe.size();
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        Partition::from_labels(universe, &labels).expect("labels always form a partition")
    }
}

/// A named collection of nonempty subsets whose union is the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub name: String,
    members: Vec<Subset>,
}

impl Cover {
    pub fn new(universe: &Universe, name: impl Into<String>, members: Vec<Subset>) -> Result<Cover> {
        let name = name.into();
        if members.iter().any(|m| m.is_empty()) {
            return Err(Error::Config(format!("cover {name:?} has an empty member")));
        }
        let union = members.iter().fold(Subset::EMPTY, |acc, m| acc.union(*m));
        if union != universe.full() {
            return Err(Error::Config(format!(
                "cover {name:?} does not cover {}",
                universe.render(universe.full().difference(union))
            )));
        }
        Ok(Cover { name, members })
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    /// Union of the members contained in `a`.
    pub fn lower(&self, a: Subset) -> Subset {
        self.members
            .iter()
            .filter(|m| m.is_subset(a))
            .fold(Subset::EMPTY, |acc, m| acc.union(*m))
    }

    /// Union of the members meeting `a`.
    pub fn upper(&self, a: Subset) -> Subset {
        self.members
            .iter()
            .filter(|m| m.meets(a))
            .fold(Subset::EMPTY, |acc, m| acc.union(*m))
    }

    /// Complement of the lower approximation of the complement.
    pub fn dual_upper(&self, a: Subset, full: Subset) -> Subset {
        self.lower(a.complement_in(full)).complement_in(full)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    PartitionClassical,
    CoverStandard,
    CoverDual,
    UserTable,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Result<FamilyKind> {
        Ok(match s {
            "partition-classical" => FamilyKind::PartitionClassical,
            "cover-standard" => FamilyKind::CoverStandard,
            "cover-dual" => FamilyKind::CoverDual,
            "user-table" => FamilyKind::UserTable,
            other => return Err(Error::Config(format!("unknown family kind {other:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::PartitionClassical => "partition-classical",
            FamilyKind::CoverStandard => "cover-standard",
            FamilyKind::CoverDual => "cover-dual",
            FamilyKind::UserTable => "user-table",
        }
    }
}

#[derive(Clone)]
enum Approximator {
    Blocks(Partition),
    CoverStandard(Cover),
    CoverDual(Cover, Subset),
    /// Lower and upper images indexed by subset bits.
    Table(Arc<Vec<Subset>>, Arc<Vec<Subset>>),
}

/// One indexed pair `(lower_i, upper_i)` of total maps on subsets.
#[derive(Clone)]
pub struct OperatorFamily {
    pub index: u32,
    pub kind: FamilyKind,
    pub cover: Option<String>,
    approx: Approximator,
}

impl fmt::Debug for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorFamily")
            .field("index", &self.index)
            .field("kind", &self.kind)
            .field("cover", &self.cover)
            .finish()
    }
}

impl OperatorFamily {
    pub fn classical(index: u32, partition: Partition) -> OperatorFamily {
        OperatorFamily {
            index,
            kind: FamilyKind::PartitionClassical,
            cover: None,
            approx: Approximator::Blocks(partition),
        }
    }

    pub fn cover_standard(index: u32, cover: Cover) -> OperatorFamily {
        OperatorFamily {
            index,
            kind: FamilyKind::CoverStandard,
            cover: Some(cover.name.clone()),
            approx: Approximator::CoverStandard(cover),
        }
    }

    pub fn cover_dual(index: u32, cover: Cover, universe: &Universe) -> OperatorFamily {
        OperatorFamily {
            index,
            kind: FamilyKind::CoverDual,
            cover: Some(cover.name.clone()),
            approx: Approximator::CoverDual(cover, universe.full()),
        }
    }

    /// Family given by explicit images of every subset.
    pub fn table(
        index: u32,
        universe: &Universe,
        lower: Vec<Subset>,
        upper: Vec<Subset>,
    ) -> Result<OperatorFamily> {
        let n = universe.subset_count() as usize;
        if lower.len() != n || upper.len() != n {
            return Err(Error::Config(format!(
                "user-table family {index} must list all {n} subsets"
            )));
        }
        let full = universe.full();
        if lower.iter().chain(&upper).any(|s| !s.is_subset(full)) {
            return Err(Error::Config(format!(
                "user-table family {index} maps outside the universe"
            )));
        }
        Ok(OperatorFamily {
            index,
            kind: FamilyKind::UserTable,
            cover: None,
            approx: Approximator::Table(Arc::new(lower), Arc::new(upper)),
        })
    }

    /// Family built from arbitrary maps, tabulated over every subset.
    pub fn from_fns(
        index: u32,
        universe: &Universe,
        lower: impl Fn(Subset) -> Subset,
        upper: impl Fn(Subset) -> Subset,
    ) -> Result<OperatorFamily> {
        let lower = universe.all_subsets().map(&lower).collect();
        let upper = universe.all_subsets().map(&upper).collect();
        OperatorFamily::table(index, universe, lower, upper)
    }

    pub fn lower(&self, a: Subset) -> Subset {
        match &self.approx {
            Approximator::Blocks(p) => p.lower(a),
            Approximator::CoverStandard(c) | Approximator::CoverDual(c, _) => c.lower(a),
            Approximator::Table(l, _) => l[a.0 as usize],
        }
    }

    pub fn upper(&self, a: Subset) -> Subset {
        match &self.approx {
            Approximator::Blocks(p) => p.upper(a),
            Approximator::CoverStandard(c) => c.upper(a),
            Approximator::CoverDual(c, full) => c.dual_upper(a, *full),
            Approximator::Table(_, u) => u[a.0 as usize],
        }
    }

    pub fn is_exact(&self, a: Subset) -> bool {
        self.lower(a) == a && self.upper(a) == a
    }

    /// `{A : lower(A) = upper(A) = A}` ascending by bits.
    pub fn definables(&self, universe: &Universe) -> Vec<Subset> {
        match &self.approx {
            Approximator::Blocks(p) => p.definables(),
            _ => universe.all_subsets().filter(|a| self.is_exact(*a)).collect(),
        }
    }
}

/// The ground structure: universe, optional partition, covers, and families.
#[derive(Clone, Debug)]
pub struct ModelContext {
    pub name: String,
    pub universe: Universe,
    pub partition: Option<Partition>,
    pub covers: Vec<Cover>,
    pub families: Vec<OperatorFamily>,
    pub limits: Limits,
}

impl ModelContext {
    pub fn new(
        name: impl Into<String>,
        universe: Universe,
        partition: Option<Partition>,
        covers: Vec<Cover>,
        families: Vec<OperatorFamily>,
        limits: Limits,
    ) -> Result<ModelContext> {
        limits.check_universe(universe.size())?;
        if families.is_empty() {
            return Err(Error::Config("at least one operator family is required".into()));
        }
        for (k, f) in families.iter().enumerate() {
            if families[..k].iter().any(|g| g.index == f.index) {
                return Err(Error::Config(format!("duplicate family index {}", f.index)));
            }
        }
        Ok(ModelContext {
            name: name.into(),
            universe,
            partition,
            covers,
            families,
            limits,
        })
    }

    /// Context with a single classical family (index 1) over the given partition.
    pub fn classical(name: impl Into<String>, universe: Universe, partition: Partition) -> Result<ModelContext> {
        let fam = OperatorFamily::classical(1, partition.clone());
        ModelContext::new(name, universe, Some(partition), Vec::new(), vec![fam], Limits::default())
    }

    /// Classical context on `a, b, ...` with blocks given by name lists.
    pub fn from_blocks(name: impl Into<String>, atoms: &[&str], blocks: &[&[&str]]) -> Result<ModelContext> {
        let universe = Universe::new(atoms.iter().copied())?;
        let blocks = blocks
            .iter()
            .map(|b| universe.subset(b))
            .collect::<Result<Vec<_>>>()?;
        let partition = Partition::new(&universe, blocks)?;
        ModelContext::classical(name, universe, partition)
    }

    pub fn full(&self) -> Subset {
        self.universe.full()
    }

    pub fn partition(&self) -> Result<&Partition> {
        self.partition
            .as_ref()
            .ok_or_else(|| Error::Config("model has no partition".into()))
    }

    pub fn primary(&self) -> &OperatorFamily {
        &self.families[0]
    }

    pub fn family(&self, index: u32) -> Result<&OperatorFamily> {
        self.families
            .iter()
            .find(|f| f.index == index)
            .ok_or_else(|| Error::Config(format!("no family with index {index}")))
    }

    pub fn cover(&self, name: &str) -> Result<&Cover> {
        self.covers
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::Config(format!("no cover named {name:?}")))
    }

    /// Definables of the primary family.
    pub fn definables(&self) -> Vec<Subset> {
        self.primary().definables(&self.universe)
    }

    pub fn classical_lower(&self, a: Subset) -> Result<Subset> {
        Ok(self.partition()?.lower(a))
    }

    pub fn classical_upper(&self, a: Subset) -> Result<Subset> {
        Ok(self.partition()?.upper(a))
    }

    pub fn cover_lower(&self, cover: &str, a: Subset) -> Result<Subset> {
        Ok(self.cover(cover)?.lower(a))
    }

    /// Standard (members-meeting) cover upper approximation.
    pub fn cover_upper(&self, cover: &str, a: Subset) -> Result<Subset> {
        Ok(self.cover(cover)?.upper(a))
    }

    pub fn cover_dual_upper(&self, cover: &str, a: Subset) -> Result<Subset> {
        Ok(self.cover(cover)?.dual_upper(a, self.full()))
    }

    /// Subsets to scan: all of them when exhaustive is allowed, else a seeded sample.
    pub fn scan_subsets(&self, mode: ScanMode) -> Result<(ScanMode, Vec<Subset>)> {
        let n = self.universe.size();
        match mode {
            ScanMode::Exhaustive => {
                self.limits.require_exhaustive(n, "exhaustive scan")?;
                Ok((mode, self.universe.all_subsets().collect()))
            }
            ScanMode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let full = self.full().0;
                let v = (0..samples).map(|_| Subset(rng.gen::<u64>() & full)).collect();
                Ok((mode, v))
            }
        }
    }

    /// Exhaustive when the universe allows it, otherwise 4096 samples from seed 0.
    pub fn default_mode(&self) -> ScanMode {
        if self.limits.allows_exhaustive(self.universe.size()) {
            ScanMode::Exhaustive
        } else {
            ScanMode::Sampled { samples: 4096, seed: 0 }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityWitness {
    pub set: Vec<String>,
    /// `"l(u(A)) = u(A)"` or `"u(l(A)) = l(A)"`.
    pub clause: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub family: u32,
    pub kind: FamilyKind,
    pub dual: bool,
    pub mode: ScanMode,
    pub checked: u64,
    pub counterexample: Option<DualityWitness>,
}

/// Checks `l(u(A)) = u(A)` and `u(l(A)) = l(A)` for every scanned subset.
pub fn check_duality(ctx: &ModelContext, index: u32, mode: ScanMode) -> Result<DualityReport> {
    let fam = ctx.family(index)?;
    let (mode, mut sets) = ctx.scan_subsets(mode)?;
    sets.sort_by(|a, b| a.canonical_cmp(*b));
    let u = &ctx.universe;
    let mut counterexample = None;
    for &a in &sets {
        let up = fam.upper(a);
        let lo = fam.lower(a);
        let lu = fam.lower(up);
        let ul = fam.upper(lo);
        if lu != up {
            counterexample = Some(DualityWitness {
                set: u.names_of(a),
                clause: "l(u(A)) = u(A)".into(),
                lhs: u.names_of(lu),
                rhs: u.names_of(up),
            });
        } else if ul != lo {
            counterexample = Some(DualityWitness {
                set: u.names_of(a),
                clause: "u(l(A)) = l(A)".into(),
                lhs: u.names_of(ul),
                rhs: u.names_of(lo),
            });
        }
        if counterexample.is_some() {
            break;
        }
    }
    Ok(DualityReport {
        family: index,
        kind: fam.kind,
        dual: counterexample.is_none(),
        mode,
        checked: sets.len() as u64,
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawVerdict {
    pub law: String,
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyApproxReport {
    pub family: u32,
    pub kind: FamilyKind,
    pub definables: usize,
    pub laws: Vec<LawVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxReport {
    pub model: String,
    pub universe: Vec<String>,
    pub mode: ScanMode,
    pub checked: u64,
    pub families: Vec<FamilyApproxReport>,
}

impl ApproxReport {
    pub fn all_hold(&self) -> bool {
        self.families.iter().all(|f| f.laws.iter().all(|l| l.holds))
    }
}

/// Contraction/expansion, monotonicity and idempotence of every family.
///
/// Monotonicity is checked on one-atom extensions `A ⊆ A ∪ {x}`, which
/// suffices since inclusion chains connect any `A ⊆ B`.
pub fn check_approximations(ctx: &ModelContext, mode: ScanMode) -> Result<ApproxReport> {
    let (mode, mut sets) = ctx.scan_subsets(mode)?;
    sets.sort_by(|a, b| a.canonical_cmp(*b));
    let u = &ctx.universe;
    let mut families = Vec::new();
    for fam in &ctx.families {
        type Law<'a> = (&'a str, Box<dyn Fn(Subset) -> bool + 'a>);
        let laws: Vec<Law> = vec![
            ("lower(A) ⊆ A", Box::new(|a| fam.lower(a).is_subset(a))),
            ("A ⊆ upper(A)", Box::new(|a| a.is_subset(fam.upper(a)))),
            (
                "lower monotone",
                Box::new(|a| {
                    let la = fam.lower(a);
                    (0..u.size()).all(|i| la.is_subset(fam.lower(a.union(Subset::singleton(i)))))
                }),
            ),
            (
                "upper monotone",
                Box::new(|a| {
                    let ua = fam.upper(a);
                    (0..u.size()).all(|i| ua.is_subset(fam.upper(a.union(Subset::singleton(i)))))
                }),
            ),
            ("lower idempotent", Box::new(|a| fam.lower(fam.lower(a)) == fam.lower(a))),
            ("upper idempotent", Box::new(|a| fam.upper(fam.upper(a)) == fam.upper(a))),
        ];
        let laws = laws
            .into_iter()
            .map(|(name, law)| {
                let witness = sets.iter().find(|a| !law(**a)).map(|a| u.names_of(*a));
                LawVerdict {
                    law: name.to_string(),
                    holds: witness.is_none(),
                    witness,
                }
            })
            .collect();
        let definables = if ctx.limits.allows_exhaustive(u.size()) {
            fam.definables(u).len()
        } else {
            0
        };
        families.push(FamilyApproxReport {
            family: fam.index,
            kind: fam.kind,
            definables,
            laws,
        });
    }
    Ok(ApproxReport {
        model: ctx.name.clone(),
        universe: u.names().to_vec(),
        mode,
        checked: sets.len() as u64,
        families,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m0() -> ModelContext {
        ModelContext::from_blocks("M0", &["a", "b", "c", "d", "e"], &[&["a", "b"], &["c"], &["d", "e"]]).unwrap()
    }

    fn s(ctx: &ModelContext, names: &[&str]) -> Subset {
        ctx.universe.subset(names).unwrap()
    }

    #[test]
    fn classical_examples() {
        let m = m0();
        assert_eq!(m.classical_lower(s(&m, &["a", "c", "d"])).unwrap(), s(&m, &["c"]));
        assert_eq!(m.classical_lower(Subset::EMPTY).unwrap(), Subset::EMPTY);
        assert_eq!(m.classical_lower(m.full()).unwrap(), m.full());
        assert_eq!(m.classical_upper(s(&m, &["a", "c", "d"])).unwrap(), m.full());
        assert_eq!(m.classical_upper(Subset::EMPTY).unwrap(), Subset::EMPTY);
        assert_eq!(m.classical_upper(s(&m, &["c"])).unwrap(), s(&m, &["c"]));
    }

    #[test]
    fn missing_partition_is_config_error() {
        let u = Universe::letters(2).unwrap();
        let c = Cover::new(&u, "C", vec![u.full()]).unwrap();
        let fam = OperatorFamily::cover_standard(1, c.clone());
        let ctx = ModelContext::new("x", u, None, vec![c], vec![fam], Limits::default()).unwrap();
        assert!(matches!(ctx.classical_lower(Subset::EMPTY), Err(Error::Config(_))));
        assert!(matches!(ctx.classical_upper(Subset::EMPTY), Err(Error::Config(_))));
    }

    #[test]
    fn cover_examples() {
        let m = m0();
        let c1 = Cover::new(
            &m.universe,
            "C1",
            vec![s(&m, &["a", "b"]), s(&m, &["b", "c"]), s(&m, &["c", "d", "e"])],
        )
        .unwrap();
        assert_eq!(c1.lower(s(&m, &["b", "c", "d", "e"])), s(&m, &["b", "c", "d", "e"]));
        assert_eq!(c1.upper(s(&m, &["a"])), s(&m, &["a", "b"]));
        assert_eq!(c1.lower(Subset::EMPTY), Subset::EMPTY);
        // dual upper of {a}: complement of lower({b,c,d,e}) = {a}
        assert_eq!(c1.dual_upper(s(&m, &["a"]), m.full()), s(&m, &["a"]));
    }

    #[test]
    fn bad_partitions_and_covers() {
        let u = Universe::letters(3).unwrap();
        assert!(Partition::new(&u, vec![Subset(0b011), Subset(0b110)]).is_err());
        assert!(Partition::new(&u, vec![Subset(0b011)]).is_err());
        assert!(Partition::new(&u, vec![Subset(0b111), Subset::EMPTY]).is_err());
        assert!(Cover::new(&u, "c", vec![Subset(0b011)]).is_err());
        assert!(Cover::new(&u, "c", vec![Subset(0b111), Subset::EMPTY]).is_err());
    }

    #[test]
    fn duality_classical_and_identity() {
        let m = m0();
        let r = check_duality(&m, 1, ScanMode::Exhaustive).unwrap();
        assert!(r.dual);
        assert_eq!(r.checked, 32);
        let id = OperatorFamily::from_fns(2, &m.universe, |a| a, |a| a).unwrap();
        let ctx = ModelContext::new("id", m.universe.clone(), None, vec![], vec![id], Limits::default()).unwrap();
        assert!(check_duality(&ctx, 2, ScanMode::Exhaustive).unwrap().dual);
    }

    #[test]
    fn definables_count_is_power_of_blocks() {
        let m = m0();
        assert_eq!(m.definables().len(), 8);
        let scanned: Vec<_> = m.universe.all_subsets().filter(|a| m.primary().is_exact(*a)).collect();
        assert_eq!(scanned, m.definables());
    }

    #[test]
    fn approximation_laws_hold_for_classical() {
        let r = check_approximations(&m0(), ScanMode::Exhaustive).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.families[0].definables, 8);
    }

    #[test]
    fn sampled_mode_beyond_bound() {
        let u = Universe::letters(20).unwrap();
        let p = Partition::from_block_sizes(&u, &[10, 10]).unwrap();
        let ctx = ModelContext::classical("big", u, p).unwrap();
        assert!(check_duality(&ctx, 1, ScanMode::Exhaustive).is_err());
        let r = check_duality(&ctx, 1, ctx.default_mode()).unwrap();
        assert!(r.dual);
        assert_eq!(r.checked, 4096);
    }
}
