use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qrst::{CeraStructure, Tag, TypedElement};

use super::ast::{BinOp, Constant, UnOp};

/// A partial algebra over the hybrid signature.
pub trait HybridAlgebra: Sync {
    type Elem: Copy + Eq + Hash + Debug + Send + Sync;

    fn name(&self) -> &str;
    fn size(&self) -> u128;
    /// Every element in canonical order.
    fn elements(&self) -> Result<&[Self::Elem]>;
    fn sample(&self, rng: &mut ChaCha8Rng, tag: Option<Tag>) -> Self::Elem;
    fn tag(&self, e: Self::Elem) -> Tag;
    fn constant(&self, c: Constant) -> Self::Elem;
    fn unary(&self, op: UnOp, e: Self::Elem) -> Option<Self::Elem>;
    fn binary(&self, op: BinOp, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem>;
    fn to_json(&self, e: Self::Elem) -> Value;
    fn label(&self, e: Self::Elem) -> String;
}

impl HybridAlgebra for CeraStructure {
    type Elem = TypedElement;

    fn name(&self) -> &str {
        &self.name
    }

    fn size(&self) -> u128 {
        CeraStructure::size(self)
    }

    fn elements(&self) -> Result<&[TypedElement]> {
        self.carrier()
    }

    fn sample(&self, rng: &mut ChaCha8Rng, tag: Option<Tag>) -> TypedElement {
        CeraStructure::sample(self, rng, tag)
    }

    fn tag(&self, e: TypedElement) -> Tag {
        e.tag()
    }

    fn constant(&self, c: Constant) -> TypedElement {
        match c {
            Constant::Bot => self.bot(),
            Constant::Top => self.top(),
            Constant::Zero => self.zero(),
            Constant::One => self.one(),
        }
    }

    fn unary(&self, op: UnOp, e: TypedElement) -> Option<TypedElement> {
        match op {
            UnOp::Lup => Some(self.lup(e)),
            UnOp::Bup => Some(self.bup(e)),
            UnOp::Snot => Some(self.snot(e)),
            UnOp::Rnot => self.rnot(e),
        }
    }

    fn binary(&self, op: BinOp, a: TypedElement, b: TypedElement) -> Option<TypedElement> {
        Some(match op {
            BinOp::Join => self.join(a, b),
            BinOp::Meet => self.meet(a, b),
            BinOp::Rimp => self.rimp(a, b),
            BinOp::Rimpb => self.rimpb(a, b),
        })
    }

    fn to_json(&self, e: TypedElement) -> Value {
        e.to_json(&self.universe)
    }

    fn label(&self, e: TypedElement) -> String {
        e.render(&self.universe)
    }
}

/// An abstract algebra given by operation tables over element indices.
/// `null` marks an undefined result; τ2 is exactly the domain of `rnot`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableAlgebra {
    pub name: String,
    pub elements: Vec<String>,
    pub constants: BTreeMap<String, usize>,
    pub unary: BTreeMap<String, Vec<Option<usize>>>,
    pub binary: BTreeMap<String, Vec<Vec<Option<usize>>>>,
    #[serde(skip)]
    cache: Option<Tables>,
    #[serde(skip)]
    ids: Vec<usize>,
}

/// Dense index tables, shared by the evaluator and the isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub n: usize,
    pub constants: [usize; 4],
    pub unary: [Vec<Option<usize>>; 4],
    /// Row-major `n × n`.
    pub binary: [Vec<Option<usize>>; 4],
}

impl Tables {
    pub fn un(&self, op: UnOp, e: usize) -> Option<usize> {
        self.unary[op as usize][e]
    }

    pub fn bin(&self, op: BinOp, a: usize, b: usize) -> Option<usize> {
        self.binary[op as usize][a * self.n + b]
    }

    pub fn tag(&self, e: usize) -> Tag {
        if self.unary[UnOp::Rnot as usize][e].is_some() {
            Tag::Tau2
        } else {
            Tag::Tau1
        }
    }

    /// Tables of any materializable algebra, indexed by canonical position.
    pub fn of<A: HybridAlgebra>(alg: &A) -> Result<Tables> {
        let elems = alg.elements()?;
        let n = elems.len();
        if (n as u128) * (n as u128) > 1 << 26 {
            return Err(Error::Budget(format!("operation tables for {n} elements")));
        }
        let index: std::collections::HashMap<A::Elem, usize> =
            elems.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let pos = |e: A::Elem| -> Result<usize> {
            index
                .get(&e)
                .copied()
                .ok_or_else(|| Error::Config(format!("operation result {e:?} is outside the carrier")))
        };
        let opt = |e: Option<A::Elem>| e.map(pos).transpose();
        let mut constants = [0; 4];
        for c in Constant::ALL {
            constants[c as usize] = pos(alg.constant(c))?;
        }
        let unary = UnOp::ALL.map(|op| elems.iter().map(|&e| opt(alg.unary(op, e))).collect::<Result<Vec<_>>>());
        let binary = BinOp::ALL.map(|op| {
            elems
                .iter()
                .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
                .map(|(a, b)| opt(alg.binary(op, a, b)))
                .collect::<Result<Vec<_>>>()
        });
        let [u0, u1, u2, u3] = unary;
        let [b0, b1, b2, b3] = binary;
        Ok(Tables {
            n,
            constants,
            unary: [u0?, u1?, u2?, u3?],
            binary: [b0?, b1?, b2?, b3?],
        })
    }
}

impl TableAlgebra {
    /// Validates shapes and indices and builds the dense tables.
    pub fn validated(mut self) -> Result<TableAlgebra> {
        let n = self.elements.len();
        if n == 0 {
            return Err(Error::Config("algebra has no elements".into()));
        }
        let check = |v: Option<usize>, what: &str| -> Result<()> {
            match v {
                Some(i) if i >= n => Err(Error::Config(format!("{what}: index {i} out of range 0..{n}"))),
                _ => Ok(()),
            }
        };
        let mut constants = [0; 4];
        for c in Constant::ALL {
            let i = *self
                .constants
                .get(c.name())
                .ok_or_else(|| Error::Config(format!("missing constant {}", c.name())))?;
            check(Some(i), c.name())?;
            constants[c as usize] = i;
        }
        let mut unary: [Vec<Option<usize>>; 4] = Default::default();
        for op in UnOp::ALL {
            let t = self
                .unary
                .get(op.name())
                .ok_or_else(|| Error::Config(format!("missing unary table {}", op.name())))?;
            if t.len() != n {
                return Err(Error::Config(format!("unary table {} has {} entries, expected {n}", op.name(), t.len())));
            }
            for &v in t {
                check(v, op.name())?;
            }
            unary[op as usize] = t.clone();
        }
        let mut binary: [Vec<Option<usize>>; 4] = Default::default();
        for op in BinOp::ALL {
            let t = self
                .binary
                .get(op.name())
                .ok_or_else(|| Error::Config(format!("missing binary table {}", op.name())))?;
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(Error::Config(format!("binary table {} must be {n}×{n}", op.name())));
            }
            for &v in t.iter().flatten() {
                check(v, op.name())?;
            }
            binary[op as usize] = t.iter().flatten().copied().collect();
        }
        if let Some(k) = self.unary.keys().find(|k| UnOp::parse(k).is_none()) {
            return Err(Error::Config(format!("unknown unary table {k:?}")));
        }
        if let Some(k) = self.binary.keys().find(|k| BinOp::parse(k).is_none()) {
            return Err(Error::Config(format!("unknown binary table {k:?}")));
        }
        self.ids = (0..n).collect();
        self.cache = Some(Tables {
            n,
            constants,
            unary,
            binary,
        });
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<TableAlgebra> {
        serde_json::from_str::<TableAlgebra>(text)?.validated()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("table algebra serializes")
    }

    pub fn from_tables(name: impl Into<String>, elements: Vec<String>, t: &Tables) -> TableAlgebra {
        let n = t.n;
        let constants = Constant::ALL
            .iter()
            .map(|c| (c.name().to_string(), t.constants[*c as usize]))
            .collect();
        let unary = UnOp::ALL
            .iter()
            .map(|op| (op.name().to_string(), t.unary[*op as usize].clone()))
            .collect();
        let binary = BinOp::ALL
            .iter()
            .map(|op| (op.name().to_string(), t.binary[*op as usize].chunks(n).map(|r| r.to_vec()).collect()))
            .collect();
        TableAlgebra {
            name: name.into(),
            elements,
            constants,
            unary,
            binary,
            cache: Some(t.clone()),
            ids: (0..n).collect(),
        }
    }

    pub fn of<A: HybridAlgebra>(alg: &A) -> Result<TableAlgebra> {
        let t = Tables::of(alg)?;
        let labels = alg.elements()?.iter().map(|e| alg.label(*e)).collect();
        Ok(TableAlgebra::from_tables(alg.name(), labels, &t))
    }

    pub fn tables(&self) -> &Tables {
        self.cache.as_ref().expect("validated table algebra")
    }

    /// Overwrites one binary entry; used to build broken algebras.
    pub fn set_binary(&mut self, op: BinOp, a: usize, b: usize, v: Option<usize>) {
        self.binary.get_mut(op.name()).expect("table")[a][b] = v;
        let t = self.cache.as_mut().expect("validated table algebra");
        let n = t.n;
        t.binary[op as usize][a * n + b] = v;
    }
}

impl HybridAlgebra for TableAlgebra {
    type Elem = usize;

    fn name(&self) -> &str {
        &self.name
    }

    fn size(&self) -> u128 {
        self.elements.len() as u128
    }

    fn elements(&self) -> Result<&[usize]> {
        Ok(&self.ids)
    }

    fn sample(&self, rng: &mut ChaCha8Rng, tag: Option<Tag>) -> usize {
        let t = self.tables();
        match tag {
            None => rng.gen_range(0..t.n),
            Some(tag) => {
                let pool: Vec<usize> = (0..t.n).filter(|&e| t.tag(e) == tag).collect();
                if pool.is_empty() {
                    rng.gen_range(0..t.n)
                } else {
                    pool[rng.gen_range(0..pool.len())]
                }
            }
        }
    }

    fn tag(&self, e: usize) -> Tag {
        self.tables().tag(e)
    }

    fn constant(&self, c: Constant) -> usize {
        self.tables().constants[c as usize]
    }

    fn unary(&self, op: UnOp, e: usize) -> Option<usize> {
        self.tables().un(op, e)
    }

    fn binary(&self, op: BinOp, a: usize, b: usize) -> Option<usize> {
        self.tables().bin(op, a, b)
    }

    fn to_json(&self, e: usize) -> Value {
        json!({"index": e, "label": self.elements[e]})
    }

    fn label(&self, e: usize) -> String {
        self.elements[e].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelContext;
    use crate::qrst::build_cera;

    #[test]
    fn table_round_trip_through_json() {
        let ctx = ModelContext::from_blocks("P", &["a", "b", "c"], &[&["a", "b"], &["c"]]).unwrap();
        let cera = build_cera(&ctx).unwrap();
        let t = TableAlgebra::of(&cera).unwrap();
        assert_eq!(t.elements.len(), 14);
        let back = TableAlgebra::from_json(&t.to_json_string()).unwrap();
        assert_eq!(back, t);
        for (i, e) in cera.carrier().unwrap().iter().enumerate() {
            assert_eq!(back.tag(i), e.tag());
        }
        assert_eq!(back.label(back.constant(Constant::One)), "t2 ({a,b,c}, {a,b,c})");
    }

    #[test]
    fn rejects_bad_tables() {
        let ctx = ModelContext::from_blocks("P", &["a"], &[&["a"]]).unwrap();
        let t = TableAlgebra::of(&build_cera(&ctx).unwrap()).unwrap();
        let mut v: Value = serde_json::from_str(&t.to_json_string()).unwrap();
        v["unary"]["lup"][0] = json!(9);
        assert!(matches!(TableAlgebra::from_json(&v.to_string()), Err(Error::Config(_))));
        let mut v: Value = serde_json::from_str(&t.to_json_string()).unwrap();
        v["binary"].as_object_mut().unwrap().remove("meet");
        assert!(TableAlgebra::from_json(&v.to_string()).is_err());
    }
}
