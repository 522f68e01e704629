//! JSON model files.
//!
//! ```json
//! {
//!   "name": "M0",
//!   "universe": ["a", "b", "c", "d", "e"],
//!   "partition": [["a", "b"], ["c"], ["d", "e"]],
//!   "covers": {"C1": [["a", "b"], ["b", "c"], ["d", "e"]]},
//!   "families": [{"index": 1, "kind": "partition-classical"},
//!                {"index": 2, "kind": "cover-standard", "cover": "C1"}],
//!   "granules": {"G": [["a"], ["b", "c"]], "H": {"label": "refined", "members": [["a"]]}},
//!   "rys": {"mode": "nonempty-witness"}
//! }
//! ```
//!
//! Without `families`, a partition yields one classical family with index 1.
//! A `user-table` family lists `{"set", "lower", "upper"}` for every subset.
//! The `rys` section may give `carrier`, `parthood` (pairs), `plus`/`times`
//! (triples `[x, y, x+y]`, a partial table) and `tilde` (pairs `[x, ∼x]`).

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::granules::{GranuleLabel, GranuleSet};
use crate::limits::Limits;
use crate::model::{Cover, FamilyKind, ModelContext, OperatorFamily, Partition};
use crate::rys::{BinaryOp, MereologyMode, RysModel, UnaryOp};
use crate::subset::{Subset, Universe};

type Names = Vec<String>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: Option<String>,
    universe: Names,
    partition: Option<Vec<Names>>,
    #[serde(default)]
    covers: BTreeMap<String, Vec<Names>>,
    #[serde(default)]
    families: Vec<FamilySpec>,
    #[serde(default)]
    granules: BTreeMap<String, GranuleSpec>,
    rys: Option<RysSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilySpec {
    index: u32,
    kind: String,
    cover: Option<String>,
    table: Option<Vec<TableRow>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRow {
    set: Names,
    lower: Names,
    upper: Names,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GranuleSpec {
    Members(Vec<Names>),
    Labeled {
        #[serde(default)]
        label: Option<String>,
        members: Vec<Names>,
    },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RysSpec {
    pub mode: Option<String>,
    pub carrier: Option<Vec<Names>>,
    pub parthood: Option<Vec<(Names, Names)>>,
    pub plus: Option<Vec<(Names, Names, Names)>>,
    pub times: Option<Vec<(Names, Names, Names)>>,
    pub tilde: Option<Vec<(Names, Names)>>,
}

/// A parsed model file.
#[derive(Clone, Debug)]
pub struct LoadedModel {
    pub context: ModelContext,
    pub granules: Vec<GranuleSet>,
    pub rys: RysSpec,
}

fn set(u: &Universe, names: &[String]) -> Result<Subset> {
    u.subset(names)
}

fn sets(u: &Universe, v: &[Names]) -> Result<Vec<Subset>> {
    v.iter().map(|n| set(u, n)).collect()
}

impl LoadedModel {
    pub fn from_path(path: impl AsRef<Path>) -> Result<LoadedModel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read model file {}: {e}", path.display())))?;
        let default_name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "model".into());
        LoadedModel::from_json(&text, &default_name)
    }

    pub fn from_json(text: &str, default_name: &str) -> Result<LoadedModel> {
        let f: ModelFile = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("model file does not match the schema: {e}")))?;
        LoadedModel::build(f, default_name, Limits::from_env()?)
    }

    fn build(f: ModelFile, default_name: &str, limits: Limits) -> Result<LoadedModel> {
        limits.check_universe(f.universe.len())?;
        let u = Universe::new(f.universe.iter().map(String::as_str))?;
        let partition = f
            .partition
            .as_ref()
            .map(|p| Partition::new(&u, sets(&u, p)?))
            .transpose()?;
        let covers = f
            .covers
            .iter()
            .map(|(name, members)| Cover::new(&u, name.clone(), sets(&u, members)?))
            .collect::<Result<Vec<_>>>()?;
        let find_cover = |spec: &FamilySpec| -> Result<Cover> {
            let name = spec
                .cover
                .as_ref()
                .ok_or_else(|| Error::Config(format!("family {} needs a \"cover\"", spec.index)))?;
            covers
                .iter()
                .find(|c| &c.name == name)
                .cloned()
                .ok_or_else(|| Error::Config(format!("family {} names unknown cover {name:?}", spec.index)))
        };
        let families = if f.families.is_empty() {
            let p = partition
                .clone()
                .ok_or_else(|| Error::Config("model needs a partition or at least one family".into()))?;
            vec![OperatorFamily::classical(1, p)]
        } else {
            f.families
                .iter()
                .map(|spec| match FamilyKind::parse(&spec.kind)? {
                    FamilyKind::PartitionClassical => partition
                        .clone()
                        .map(|p| OperatorFamily::classical(spec.index, p))
                        .ok_or_else(|| {
                            Error::Config(format!("family {} is partition-classical but no partition is given", spec.index))
                        }),
                    FamilyKind::CoverStandard => Ok(OperatorFamily::cover_standard(spec.index, find_cover(spec)?)),
                    FamilyKind::CoverDual => Ok(OperatorFamily::cover_dual(spec.index, find_cover(spec)?, &u)),
                    FamilyKind::UserTable => user_table(&u, spec),
                })
                .collect::<Result<Vec<_>>>()?
        };
        let name = f.name.clone().unwrap_or_else(|| default_name.to_string());
        let context = ModelContext::new(name, u.clone(), partition, covers, families, limits)?;
        let granules = f
            .granules
            .iter()
            .map(|(name, spec)| {
                let (label, members) = match spec {
                    GranuleSpec::Members(m) => (GranuleLabel::default(), m),
                    GranuleSpec::Labeled { label, members } => (
                        label.as_deref().map(GranuleLabel::parse).transpose()?.unwrap_or_default(),
                        members,
                    ),
                };
                GranuleSet::new(name.clone(), sets(&u, members)?, label)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LoadedModel {
            context,
            granules,
            rys: f.rys.unwrap_or_default(),
        })
    }

    /// A named granule set; `blocks` falls back to the partition.
    pub fn granule_set(&self, name: &str) -> Result<GranuleSet> {
        if let Some(g) = self.granules.iter().find(|g| g.name == name) {
            return Ok(g.clone());
        }
        if name == "blocks" {
            let p = self.context.partition()?;
            return GranuleSet::new("blocks", p.blocks().to_vec(), GranuleLabel::Initial);
        }
        let known: Vec<&str> = self.granules.iter().map(|g| g.name.as_str()).collect();
        Err(Error::Config(format!(
            "no granule set {name:?} (available: blocks{}{})",
            if known.is_empty() { "" } else { ", " },
            known.join(", ")
        )))
    }

    /// The rough Y-system described by the `rys` section; `mode` overrides the file.
    pub fn rys_model(&self, mode: Option<MereologyMode>) -> Result<RysModel> {
        let ctx = &self.context;
        let u = &ctx.universe;
        let spec = &self.rys;
        let mut m = match &spec.carrier {
            Some(c) => RysModel::with_carrier(ctx, sets(u, c)?)?,
            None => RysModel::from_context(ctx)?,
        };
        let file_mode = spec.mode.as_deref().map(MereologyMode::parse).transpose()?;
        if let Some(mode) = mode.or(file_mode) {
            m = m.with_mode(mode);
        }
        if let Some(pairs) = &spec.parthood {
            let pairs = pairs
                .iter()
                .map(|(x, y)| Ok((set(u, x)?, set(u, y)?)))
                .collect::<Result<Vec<_>>>()?;
            m = m.with_parthood_pairs(&pairs)?;
        }
        let binary = |rows: &Vec<(Names, Names, Names)>| -> Result<BinaryOp> {
            let mut t = HashMap::new();
            for (x, y, z) in rows {
                t.insert((set(u, x)?, set(u, y)?), set(u, z)?);
            }
            Ok(BinaryOp::Table(t))
        };
        if let Some(rows) = &spec.plus {
            m.plus = binary(rows)?;
        }
        if let Some(rows) = &spec.times {
            m.times = binary(rows)?;
        }
        if let Some(rows) = &spec.tilde {
            let mut t = HashMap::new();
            for (x, y) in rows {
                t.insert(set(u, x)?, set(u, y)?);
            }
            m.tilde = UnaryOp::Table(t);
        }
        Ok(m)
    }
}

fn user_table(u: &Universe, spec: &FamilySpec) -> Result<OperatorFamily> {
    let rows = spec
        .table
        .as_ref()
        .ok_or_else(|| Error::Config(format!("user-table family {} needs a \"table\"", spec.index)))?;
    let n = u.subset_count() as usize;
    let mut lower = vec![None; n];
    let mut upper = vec![None; n];
    for r in rows {
        let s = set(u, &r.set)?.0 as usize;
        if lower[s].is_some() {
            return Err(Error::Config(format!(
                "user-table family {} lists {:?} twice",
                spec.index, r.set
            )));
        }
        lower[s] = Some(set(u, &r.lower)?);
        upper[s] = Some(set(u, &r.upper)?);
    }
    let lower: Option<Vec<Subset>> = lower.into_iter().collect();
    let upper: Option<Vec<Subset>> = upper.into_iter().collect();
    match (lower, upper) {
        (Some(l), Some(h)) => OperatorFamily::table(spec.index, u, l, h),
        _ => Err(Error::Config(format!(
            "user-table family {} must list all {n} subsets",
            spec.index
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::granules::check_admissible;
    use crate::granules::default_bounds;

    const M0: &str = r#"{
        "name": "M0",
        "universe": ["a", "b", "c", "d", "e"],
        "partition": [["a", "b"], ["c"], ["d", "e"]],
        "covers": {"C1": [["a", "b"], ["b", "c"], ["d", "e"]]},
        "families": [
            {"index": 1, "kind": "partition-classical"},
            {"index": 2, "kind": "cover-standard", "cover": "C1"},
            {"index": 3, "kind": "cover-dual", "cover": "C1"}
        ],
        "granules": {"G": [["a"], ["b"]], "H": {"label": "refined", "members": [["c"]]}},
        "rys": {"mode": "nonempty-witness"}
    }"#;

    #[test]
    fn loads_m0() {
        let m = LoadedModel::from_json(M0, "x").unwrap();
        assert_eq!(m.context.name, "M0");
        assert_eq!(m.context.families.len(), 3);
        assert_eq!(m.granules.len(), 2);
        assert_eq!(m.granule_set("H").unwrap().label, GranuleLabel::Refined);
        let rys = m.rys_model(None).unwrap();
        assert_eq!(rys.mode, MereologyMode::NonemptyWitness);
        assert_eq!(rys.len(), 32);
        let blocks = m.granule_set("blocks").unwrap();
        let report = check_admissible(&rys, &blocks, default_bounds(&blocks)).unwrap();
        assert_eq!(report.properties.len(), 12);
    }

    #[test]
    fn defaults_to_classical_family() {
        let m = LoadedModel::from_json(r#"{"universe": ["a", "b"], "partition": [["a", "b"]]}"#, "tiny").unwrap();
        assert_eq!(m.context.name, "tiny");
        assert_eq!(m.context.primary().kind, FamilyKind::PartitionClassical);
    }

    #[test]
    fn rejects_bad_files() {
        for bad in [
            r#"{"universe": []}"#,
            r#"{"universe": ["a"], "partition": [["b"]]}"#,
            r#"{"universe": ["a", "a"]}"#,
            r#"{"universe": ["a"], "partition": [["a"]], "extra": 1}"#,
            r#"{"universe": ["a"], "families": [{"index": 1, "kind": "cover-standard"}]}"#,
            r#"{"universe": ["a"], "families": [{"index": 1, "kind": "user-table", "table": []}]}"#,
            r#"{"universe": ["a", "b"]}"#,
            r#"not json"#,
        ] {
            assert!(matches!(LoadedModel::from_json(bad, "x"), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn user_table_and_rys_tables() {
        let text = r#"{
            "universe": ["a"],
            "families": [{"index": 1, "kind": "user-table", "table": [
                {"set": [], "lower": [], "upper": []},
                {"set": ["a"], "lower": [], "upper": ["a"]}
            ]}],
            "rys": {"carrier": [[], ["a"]], "parthood": [[[], []], [[], ["a"]], [["a"], ["a"]]],
                    "plus": [[[], ["a"], ["a"]]], "tilde": [[[], ["a"]]]}
        }"#;
        let m = LoadedModel::from_json(text, "t").unwrap();
        let f = m.context.primary();
        let a = Subset::singleton(0);
        assert_eq!((f.lower(a), f.upper(a)), (Subset::EMPTY, a));
        let rys = m.rys_model(Some(MereologyMode::Literal)).unwrap();
        assert_eq!(rys.plus.apply(Subset::EMPTY, a), Some(a));
        assert_eq!(rys.plus.apply(a, a), None);
        assert_eq!(rys.tilde.apply(a), None);
        assert!(rys.part(Subset::EMPTY, a));
        assert!(!rys.part(a, Subset::EMPTY));
    }
}
