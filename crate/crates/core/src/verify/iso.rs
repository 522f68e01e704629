//! Isomorphism search between finite hybrid algebras: joint colour refinement
//! followed by backtracking with propagation through the operation tables.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

use super::algebra::{HybridAlgebra, Tables};
use super::ast::{BinOp, Constant, UnOp};

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum IsoResult {
    /// `mapping[i]` is the image of element `i`.
    Isomorphic { mapping: Vec<usize> },
    NotIsomorphic { reason: String },
}

impl IsoResult {
    pub fn mapping(&self) -> Option<&[usize]> {
        match self {
            IsoResult::Isomorphic { mapping } => Some(mapping),
            IsoResult::NotIsomorphic { .. } => None,
        }
    }
}

pub fn iso_check<A: HybridAlgebra, B: HybridAlgebra>(a: &A, b: &B) -> Result<IsoResult> {
    iso_tables(&Tables::of(a)?, &Tables::of(b)?, DEFAULT_NODE_BUDGET)
}

const NONE: u32 = u32::MAX;

fn initial_signature(t: &Tables, x: usize) -> Vec<u32> {
    let mut sig = vec![t.tag(x) as u32];
    for c in Constant::ALL {
        sig.push((t.constants[c as usize] == x) as u32);
    }
    for op in UnOp::ALL {
        sig.push(match t.un(op, x) {
            None => 2,
            Some(y) => (y == x) as u32,
        });
    }
    sig
}

fn refine(t: &Tables, colors: &[u32], x: usize) -> Vec<u32> {
    let c = |v: Option<usize>| v.map_or(NONE, |i| colors[i]);
    let mut sig = vec![colors[x]];
    for op in UnOp::ALL {
        sig.push(c(t.un(op, x)));
    }
    for op in BinOp::ALL {
        let mut rows: Vec<[u32; 3]> = (0..t.n)
            .map(|y| [colors[y], c(t.bin(op, x, y)), c(t.bin(op, y, x))])
            .collect();
        rows.sort_unstable();
        sig.push(NONE);
        sig.extend(rows.into_iter().flatten());
    }
    sig
}

/// Assigns shared colour ids to signatures of both algebras.
fn recolor(sa: Vec<Vec<u32>>, sb: Vec<Vec<u32>>) -> (Vec<u32>, Vec<u32>, usize) {
    let mut ids: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    for s in sa.iter().chain(&sb) {
        ids.entry(s.clone()).or_insert(0);
    }
    for (k, v) in ids.values_mut().enumerate() {
        *v = k as u32;
    }
    let ca = sa.iter().map(|s| ids[s]).collect();
    let cb = sb.iter().map(|s| ids[s]).collect();
    (ca, cb, ids.len())
}

fn histogram(colors: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

struct Search<'a> {
    a: &'a Tables,
    b: &'a Tables,
    ca: Vec<u32>,
    cb: Vec<u32>,
    map: Vec<Option<usize>>,
    inv: Vec<Option<usize>>,
    assigned: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Assigns `x ↦ y` and everything it forces; false on conflict.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match (self.map[x], self.inv[y]) {
                (Some(m), _) if m == y => continue,
                (None, None) => {}
                _ => return false,
            }
            if self.ca[x] != self.cb[y] {
                return false;
            }
            self.map[x] = Some(y);
            self.inv[y] = Some(x);
            self.assigned.push(x);
            for op in UnOp::ALL {
                match (self.a.un(op, x), self.b.un(op, y)) {
                    (None, None) => {}
                    (Some(p), Some(q)) => queue.push((p, q)),
                    _ => return false,
                }
            }
            for k in 0..self.assigned.len() {
                let x2 = self.assigned[k];
                let y2 = self.map[x2].expect("assigned");
                for op in BinOp::ALL {
                    for (p, q) in [
                        (self.a.bin(op, x, x2), self.b.bin(op, y, y2)),
                        (self.a.bin(op, x2, x), self.b.bin(op, y2, y)),
                    ] {
                        match (p, q) {
                            (None, None) => {}
                            (Some(p), Some(q)) => queue.push((p, q)),
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for x in self.assigned.drain(mark..) {
            let y = self.map[x].take().expect("assigned");
            self.inv[y] = None;
        }
    }

    fn solve(&mut self, order: &[usize]) -> Result<bool> {
        let Some(pos) = order.iter().position(|&x| self.map[x].is_none()) else {
            return Ok(true);
        };
        let x = order[pos];
        for y in 0..self.b.n {
            if self.inv[y].is_some() || self.cb[y] != self.ca[x] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget(format!(
                    "isomorphism search exceeded {} nodes",
                    self.budget
                )));
            }
            let mark = self.assigned.len();
            if self.assign(x, y) && self.solve(&order[pos + 1..])? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

pub fn iso_tables(a: &Tables, b: &Tables, node_budget: u64) -> Result<IsoResult> {
    let no = |reason: String| Ok(IsoResult::NotIsomorphic { reason });
    if a.n != b.n {
        return no(format!("carrier sizes differ: {} vs {}", a.n, b.n));
    }
    let (mut ca, mut cb, mut count) = recolor(
        (0..a.n).map(|x| initial_signature(a, x)).collect(),
        (0..b.n).map(|x| initial_signature(b, x)).collect(),
    );
    loop {
        if histogram(&ca) != histogram(&cb) {
            return no(format!("invariant colour classes differ after refinement to {count} colours"));
        }
        let (na, nb, next) = recolor(
            (0..a.n).map(|x| refine(a, &ca, x)).collect(),
            (0..b.n).map(|x| refine(b, &cb, x)).collect(),
        );
        ca = na;
        cb = nb;
        if next == count {
            if histogram(&ca) != histogram(&cb) {
                return no("invariant colour classes differ".into());
            }
            break;
        }
        count = next;
    }
    let class_size = histogram(&ca);
    let mut order: Vec<usize> = (0..a.n).collect();
    order.sort_by_key(|&x| (class_size[&ca[x]], x));
    let mut s = Search {
        a,
        b,
        ca,
        cb,
        map: vec![None; a.n],
        inv: vec![None; b.n],
        assigned: Vec::new(),
        nodes: 0,
        budget: node_budget,
    };
    for c in Constant::ALL {
        if !s.assign(a.constants[c as usize], b.constants[c as usize]) {
            return no(format!("constant {} cannot be matched", c.name()));
        }
    }
    if s.solve(&order)? {
        Ok(IsoResult::Isomorphic {
            mapping: s.map.into_iter().map(|m| m.expect("complete")).collect(),
        })
    } else {
        no("exhaustive search found no operation-preserving bijection".into())
    }
}

/// True when `mapping` is a bijection preserving constants and all operations.
pub fn is_isomorphism(a: &Tables, b: &Tables, mapping: &[usize]) -> bool {
    if a.n != b.n || mapping.len() != a.n {
        return false;
    }
    let mut seen = vec![false; b.n];
    for &y in mapping {
        if y >= b.n || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    let m = |v: Option<usize>| v.map(|i| mapping[i]);
    Constant::ALL
        .iter()
        .all(|&c| mapping[a.constants[c as usize]] == b.constants[c as usize])
        && (0..a.n).all(|x| UnOp::ALL.iter().all(|&op| m(a.un(op, x)) == b.un(op, mapping[x])))
        && (0..a.n).all(|x| {
            (0..a.n).all(|y| BinOp::ALL.iter().all(|&op| m(a.bin(op, x, y)) == b.bin(op, mapping[x], mapping[y])))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelContext;
    use crate::qrst::{build_cera, CeraStructure};

    fn cera(atoms: &[&str], blocks: &[&[&str]]) -> CeraStructure {
        build_cera(&ModelContext::from_blocks("X", atoms, blocks).unwrap()).unwrap()
    }

    #[test]
    fn renamed_atoms_are_isomorphic() {
        let a = cera(&["a", "b", "c", "d", "e"], &[&["a", "b"], &["c"], &["d", "e"]]);
        let b = cera(&["p", "q", "r", "s", "t"], &[&["p"], &["q", "t"], &["r", "s"]]);
        let r = iso_check(&a, &b).unwrap();
        let m = r.mapping().expect("isomorphic");
        assert!(is_isomorphism(&Tables::of(&a).unwrap(), &Tables::of(&b).unwrap(), m));
    }

    #[test]
    fn self_iso_is_identity_when_rigid() {
        let a = cera(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
        let r = iso_check(&a, &a).unwrap();
        let m = r.mapping().unwrap();
        assert!(is_isomorphism(&Tables::of(&a).unwrap(), &Tables::of(&a).unwrap(), m));
        // swapping a and b is an automorphism; the search prefers the identity
        assert_eq!(m, (0..14).collect::<Vec<_>>());
    }

    #[test]
    fn different_shapes_are_not_isomorphic() {
        let a = cera(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
        let b = cera(&["a", "b", "c"], &[&["a"], &["b"], &["c"]]);
        assert_eq!(a.size(), 14);
        assert_eq!(b.size(), 16);
        assert!(matches!(iso_check(&a, &b).unwrap(), IsoResult::NotIsomorphic { .. }));
        let e = cera(&["a", "b", "c", "d"], &[&["a", "b", "c"], &["d"]]);
        let f = cera(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]);
        assert!(matches!(iso_check(&e, &f).unwrap(), IsoResult::NotIsomorphic { .. }));
    }
}
