//! Search for an approximation space whose derived algebra is isomorphic to
//! a given finite algebra.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Partition;
use crate::qrst::{CeraStructure, Tag};
use crate::subset::Universe;

use super::algebra::{HybridAlgebra, Tables};
use super::check::{run_suite, VerifyOptions, VerifyReport};
use super::iso::{iso_tables, IsoResult, DEFAULT_NODE_BUDGET};
use super::suites::BuiltinSuite;

pub const DEFAULT_MAX_N: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub universe_size: usize,
    /// Block sizes, largest first.
    pub block_sizes: Vec<usize>,
    pub blocks: Vec<Vec<String>>,
    /// `mapping[i]` is the position in the found carrier of input element `i`.
    pub mapping: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepresentationReport {
    pub algebra: String,
    pub size: u128,
    pub max_n: usize,
    pub gate_passed: bool,
    /// Labels of axioms that did not hold; no search is run when non-empty.
    pub gate_failures: Vec<String>,
    pub shapes_tried: Vec<Vec<usize>>,
    pub isomorphism_checks: usize,
    pub found: Option<Representation>,
}

/// Integer partitions of `n` with parts in non-increasing order.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn cera_of_shape(block_sizes: &[usize]) -> Result<CeraStructure> {
    let n = block_sizes.iter().sum();
    let u = Universe::letters(n)?;
    let p = Partition::from_block_sizes(&u, block_sizes)?;
    let name = format!("blocks {block_sizes:?}");
    Ok(CeraStructure::new(name, u, p))
}

fn gate<A: HybridAlgebra>(alg: &A) -> Result<VerifyReport> {
    run_suite(
        alg,
        BuiltinSuite::AeraAxioms.name(),
        &BuiltinSuite::AeraAxioms.identities(),
        &VerifyOptions::exhaustive(),
    )
}

pub fn representation_search<A: HybridAlgebra>(alg: &A, max_n: usize) -> Result<RepresentationReport> {
    if max_n == 0 || max_n > 8 {
        return Err(Error::Config(format!("max-n must be between 1 and 8, got {max_n}")));
    }
    let gate = gate(alg)?;
    let mut report = RepresentationReport {
        algebra: alg.name().to_string(),
        size: alg.size(),
        max_n,
        gate_passed: gate.all_hold(),
        gate_failures: gate.failures().into_iter().map(String::from).collect(),
        shapes_tried: Vec::new(),
        isomorphism_checks: 0,
        found: None,
    };
    if !report.gate_passed {
        return Ok(report);
    }
    let target = Tables::of(alg)?;
    let tau1 = (0..target.n).filter(|&e| target.tag(e) == Tag::Tau1).count() as u128;
    for n in 1..=max_n {
        if 1u128 << n != tau1 {
            continue;
        }
        for shape in integer_partitions(n) {
            report.shapes_tried.push(shape.clone());
            let cand = cera_of_shape(&shape)?;
            if cand.size() != target.n as u128 {
                continue;
            }
            report.isomorphism_checks += 1;
            let ct = Tables::of(&cand)?;
            if let IsoResult::Isomorphic { mapping } = iso_tables(&target, &ct, DEFAULT_NODE_BUDGET)? {
                report.found = Some(Representation {
                    universe_size: n,
                    blocks: cand.partition.blocks().iter().map(|b| cand.universe.names_of(*b)).collect(),
                    block_sizes: shape,
                    mapping,
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelContext;
    use crate::qrst::build_cera;
    use crate::verify::algebra::TableAlgebra;
    use crate::verify::ast::BinOp;

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(integer_partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(integer_partitions(5).len(), 7);
    }

    #[test]
    fn recovers_two_plus_one() {
        let ctx = ModelContext::from_blocks("X", &["a", "b", "c"], &[&["a", "b"], &["c"]]).unwrap();
        let r = representation_search(&build_cera(&ctx).unwrap(), DEFAULT_MAX_N).unwrap();
        assert!(r.gate_passed);
        let found = r.found.unwrap();
        assert_eq!(found.block_sizes, vec![2, 1]);
        assert_eq!(r.shapes_tried.len(), 2);
    }

    #[test]
    fn recovers_single_block() {
        let ctx = ModelContext::from_blocks("X", &["a", "b"], &[&["a", "b"]]).unwrap();
        let r = representation_search(&build_cera(&ctx).unwrap(), DEFAULT_MAX_N).unwrap();
        assert_eq!(r.found.unwrap().block_sizes, vec![2]);
    }

    #[test]
    fn broken_commutativity_fails_the_gate() {
        let ctx = ModelContext::from_blocks("X", &["a", "b"], &[&["a", "b"]]).unwrap();
        let mut t = TableAlgebra::of(&build_cera(&ctx).unwrap()).unwrap();
        let v = t.binary["join"][1][2];
        t.set_binary(BinOp::Join, 2, 1, v.map(|x| (x + 1) % 4));
        let r = representation_search(&t, 3).unwrap();
        assert!(!r.gate_passed);
        assert!(r.gate_failures.iter().any(|l| l == "IN.u2a"));
        assert!(r.found.is_none());
        assert!(r.shapes_tried.is_empty());
    }
}
