//! User-defined rough equalities on a rough Y-system and the induced quotient.
//!
//! A rough equality is a boolean combination of atoms `x^p = y^p`, where `p`
//! names an approximation: `l`/`u` for the primary family, `l2`/`u2` for the
//! family with index 2, and so on. Connectives are `and`, `or`, `not` (also
//! `&`, `|`, `!`) with parentheses.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::OperatorFamily;
use crate::rys::{RysModel, Side};
use crate::subset::Subset;

/// Above this carrier size binary operations are checked on sampled pairs.
pub const EXHAUSTIVE_PAIR_CARRIER: usize = 256;
const SAMPLED_OP_PAIRS: u64 = 1 << 16;
/// Non-conjunctive specs are evaluated pairwise up to this carrier size.
const PAIRWISE_CARRIER: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ApproxSymbol {
    pub side: Side,
    /// `None` selects the primary family.
    pub family: Option<u32>,
}

impl fmt::Display for ApproxSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Lower => "l",
            Side::Upper => "u",
        };
        match self.family {
            Some(i) => write!(f, "{s}{i}"),
            None => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqExpr {
    Atom(ApproxSymbol),
    Not(Box<EqExpr>),
    And(Box<EqExpr>, Box<EqExpr>),
    Or(Box<EqExpr>, Box<EqExpr>),
}

impl EqExpr {
    fn atoms(&self, out: &mut Vec<ApproxSymbol>) {
        match self {
            EqExpr::Atom(a) => {
                if !out.contains(a) {
                    out.push(*a)
                }
            }
            EqExpr::Not(e) => e.atoms(out),
            EqExpr::And(a, b) | EqExpr::Or(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    fn is_conjunctive(&self) -> bool {
        match self {
            EqExpr::Atom(_) => true,
            EqExpr::And(a, b) => a.is_conjunctive() && b.is_conjunctive(),
            _ => false,
        }
    }

    fn eval(&self, atoms: &[ApproxSymbol], same: &dyn Fn(usize) -> bool) -> bool {
        match self {
            EqExpr::Atom(a) => same(atoms.iter().position(|b| b == a).expect("atom collected")),
            EqExpr::Not(e) => !e.eval(atoms, same),
            EqExpr::And(a, b) => a.eval(atoms, same) && b.eval(atoms, same),
            EqExpr::Or(a, b) => a.eval(atoms, same) || b.eval(atoms, same),
        }
    }
}

impl fmt::Display for EqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqExpr::Atom(a) => write!(f, "x^{a}=y^{a}"),
            EqExpr::Not(e) => write!(f, "not ({e})"),
            EqExpr::And(a, b) => write!(f, "({a} and {b})"),
            EqExpr::Or(a, b) => write!(f, "({a} or {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoughEqualitySpec {
    pub expr: EqExpr,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Sym(String),
    Caret,
    Eq,
    And,
    Or,
    Not,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let err = |pos: usize, msg: String| Error::Syntax {
        line: 1,
        column: text[..pos].chars().count() + 1,
        message: msg,
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        let two = |a: char| chars.get(i + 1).map(|x| x.1) == Some(a);
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '^' => Tok::Caret,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' => Tok::Not,
            ',' => Tok::And,
            '&' => {
                if two('&') {
                    i += 1;
                }
                Tok::And
            }
            '|' => {
                if two('|') {
                    i += 1;
                }
                Tok::Or
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|x| x.1).collect();
                out.push((
                    pos,
                    match word.as_str() {
                        "and" => Tok::And,
                        "or" => Tok::Or,
                        "not" => Tok::Not,
                        _ => Tok::Sym(word),
                    },
                ));
                continue;
            }
            other => return Err(err(pos, format!("unexpected character {other:?}"))),
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct SpecParser<'a> {
    text: &'a str,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl SpecParser<'_> {
    fn err(&self, msg: &str) -> Error {
        let pos = self.toks.get(self.at).map(|t| t.0).unwrap_or(self.text.len());
        Error::Syntax {
            line: 1,
            column: self.text[..pos].chars().count() + 1,
            message: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn disj(&mut self) -> Result<EqExpr> {
        let mut e = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            e = EqExpr::Or(Box::new(e), Box::new(self.conj()?));
        }
        Ok(e)
    }

    fn conj(&mut self) -> Result<EqExpr> {
        let mut e = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            e = EqExpr::And(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<EqExpr> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(EqExpr::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.disj()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => self.atom(),
        }
    }

    fn side(&mut self, var: &str) -> Result<ApproxSymbol> {
        match self.peek() {
            Some(Tok::Sym(v)) if v == var => self.at += 1,
            _ => return Err(self.err(&format!("expected variable {var}"))),
        }
        self.expect(Tok::Caret, "'^'")?;
        let sym = match self.peek() {
            Some(Tok::Sym(s)) => s.clone(),
            _ => return Err(self.err("expected an approximation symbol")),
        };
        let (side, rest) = match sym.split_at(1) {
            ("l", rest) => (Side::Lower, rest),
            ("u", rest) => (Side::Upper, rest),
            _ => return Err(self.err("approximation symbols start with l or u")),
        };
        let family = if rest.is_empty() {
            None
        } else {
            Some(rest.parse().map_err(|_| self.err("family index must be a number"))?)
        };
        self.at += 1;
        Ok(ApproxSymbol { side, family })
    }

    fn atom(&mut self) -> Result<EqExpr> {
        let left = self.side("x")?;
        self.expect(Tok::Eq, "'='")?;
        let right = self.side("y")?;
        if left != right {
            return Err(self.err("both sides of an atom must use the same approximation"));
        }
        Ok(EqExpr::Atom(left))
    }
}

impl RoughEqualitySpec {
    pub fn parse(text: &str) -> Result<RoughEqualitySpec> {
        let mut p = SpecParser {
            text,
            toks: lex(text)?,
            at: 0,
        };
        if p.toks.is_empty() {
            return Err(p.err("empty rough-equality spec"));
        }
        let expr = p.disj()?;
        if p.at != p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(RoughEqualitySpec {
            expr,
            text: text.trim().to_string(),
        })
    }

    pub fn symbols(&self) -> Vec<ApproxSymbol> {
        let mut v = Vec::new();
        self.expr.atoms(&mut v);
        v
    }
}

fn resolve(m: &RysModel, sym: ApproxSymbol) -> Result<&OperatorFamily> {
    match sym.family {
        None => m
            .families
            .first()
            .ok_or_else(|| Error::Config("model has no families".into())),
        Some(i) => m
            .families
            .iter()
            .find(|f| f.index == i)
            .ok_or_else(|| Error::Config(format!("spec references unknown family {i}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceCheck {
    pub reflexive: bool,
    pub transitive: bool,
    /// `[x]` failing reflexivity or `[x, y]` related only through the closure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub representative: Vec<String>,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedApprox {
    pub symbol: String,
    pub well_defined: bool,
    /// Two equivalent representatives whose approximations are not equivalent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[Vec<String>; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpVerdict {
    Total,
    Partial,
    IllDefined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedOperation {
    pub operation: String,
    pub verdict: OpVerdict,
    pub class_tuples: usize,
    pub defined: usize,
    pub partial: usize,
    pub ill_defined: usize,
    /// Representatives of one class tuple giving results in different classes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflict: Option<Vec<Vec<Vec<String>>>>,
    /// Representatives for which the carrier operation is undefined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undefined_at: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WMap {
    pub definables: usize,
    /// Distinct definables land in distinct classes.
    pub injective: bool,
    /// Every class contains a definable.
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub model: String,
    pub spec: String,
    pub carrier: usize,
    pub class_count: usize,
    pub sampled_pairs: bool,
    pub equivalence: EquivalenceCheck,
    pub classes: Vec<ClassSummary>,
    pub approximations: Vec<InducedApprox>,
    pub operations: Vec<InducedOperation>,
    pub w_map: WMap,
}

impl QuotientReport {
    pub fn all_well_defined(&self) -> bool {
        self.equivalence.reflexive
            && self.equivalence.transitive
            && self.approximations.iter().all(|a| a.well_defined)
            && self.operations.iter().all(|o| o.verdict == OpVerdict::Total)
    }

    pub fn approx(&self, symbol: &str) -> Option<&InducedApprox> {
        self.approximations.iter().find(|a| a.symbol == symbol)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Partitions the carrier by the relation `spec` defines and checks which
/// approximations and operations descend to the quotient.
pub fn generalized_quotient(m: &RysModel, spec: &RoughEqualitySpec) -> Result<QuotientReport> {
    let atoms = spec.symbols();
    let fams = atoms.iter().map(|a| resolve(m, *a)).collect::<Result<Vec<_>>>()?;
    let c = m.carrier();
    let n = c.len();
    let sig: Vec<Vec<Subset>> = c
        .iter()
        .map(|x| {
            atoms
                .iter()
                .zip(&fams)
                .map(|(a, f)| m.approx(f, a.side, *x))
                .collect()
        })
        .collect();
    let related = |x: usize, y: usize| spec.expr.eval(&atoms, &|k| sig[x][k] == sig[y][k]);
    let r = |i: usize| m.render(c[i]);

    let mut uf = UnionFind((0..n).collect());
    let mut equivalence = EquivalenceCheck {
        reflexive: true,
        transitive: true,
        witness: None,
    };
    if spec.expr.is_conjunctive() {
        let mut first: HashMap<&[Subset], usize> = HashMap::new();
        for x in 0..n {
            let rep = *first.entry(sig[x].as_slice()).or_insert(x);
            uf.union(rep, x);
        }
    } else {
        if n > PAIRWISE_CARRIER {
            return Err(Error::Budget(format!(
                "non-conjunctive rough equality on a carrier of {n} elements"
            )));
        }
        if let Some(x) = (0..n).find(|&x| !related(x, x)) {
            equivalence.reflexive = false;
            equivalence.witness = Some(vec![r(x)]);
        }
        for x in 0..n {
            for y in x + 1..n {
                if related(x, y) {
                    uf.union(x, y);
                }
            }
        }
    }

    let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| c[*a].canonical_cmp(c[*b]));
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    for &x in &order {
        let k = *root_class.entry(roots[x]).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        class_of[x] = k;
        members[k].push(x);
    }

    if !spec.expr.is_conjunctive() {
        'outer: for class in &members {
            for (i, &x) in class.iter().enumerate() {
                for &y in &class[i + 1..] {
                    if !related(x, y) {
                        equivalence.transitive = false;
                        equivalence.witness.get_or_insert(vec![r(x), r(y)]);
                        break 'outer;
                    }
                }
            }
        }
    }

    let class_at = |s: Subset| m.position(s).map(|i| class_of[i]);

    let mut approximations = Vec::new();
    for fam in &m.families {
        for side in [Side::Lower, Side::Upper] {
            let symbol = ApproxSymbol {
                side,
                family: Some(fam.index),
            };
            let mut witness = None;
            for class in &members {
                let x = class[0];
                let cx = class_at(m.approx(fam, side, c[x]));
                if let Some(&y) = class
                    .iter()
                    .find(|&&y| cx.is_none() || class_at(m.approx(fam, side, c[y])) != cx)
                {
                    witness = Some([r(x), r(y)]);
                    break;
                }
            }
            approximations.push(InducedApprox {
                symbol: symbol.to_string(),
                well_defined: witness.is_none(),
                witness,
            });
        }
    }

    let sampled_pairs = n > EXHAUSTIVE_PAIR_CARRIER;
    let pairs: Vec<(usize, usize)> = if sampled_pairs {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        (0..SAMPLED_OP_PAIRS)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    } else {
        order.iter().flat_map(|&x| order.iter().map(move |&y| (x, y))).collect()
    };

    let mut operations = Vec::new();
    let binaries: [(&str, &crate::rys::BinaryOp); 2] = [("+", &m.plus), ("·", &m.times)];
    for (name, op) in binaries {
        let results = pairs.iter().map(|&(x, y)| {
            (
                vec![class_of[x], class_of[y]],
                vec![x, y],
                op.apply(c[x], c[y]).map(&class_at),
            )
        });
        operations.push(tally(name, results, &r));
    }
    let unary = order
        .iter()
        .map(|&x| (vec![class_of[x]], vec![x], m.tilde.apply(c[x]).map(&class_at)));
    operations.push(tally("∼", unary, &r));

    let w_classes: Vec<usize> = m.definables.iter().filter_map(|d| class_at(*d)).collect();
    let mut distinct = w_classes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let w_map = WMap {
        definables: m.definables.len(),
        injective: distinct.len() == w_classes.len(),
        surjective: distinct.len() == members.len(),
    };

    Ok(QuotientReport {
        model: m.name.clone(),
        spec: spec.text.clone(),
        carrier: n,
        class_count: members.len(),
        sampled_pairs,
        equivalence,
        classes: members
            .iter()
            .map(|cl| ClassSummary {
                representative: r(cl[0]),
                size: cl.len(),
            })
            .collect(),
        approximations,
        operations,
        w_map,
    })
}

/// Groups operation results by class tuple. A result of `Some(None)` left the carrier.
fn tally(
    name: &str,
    results: impl Iterator<Item = (Vec<usize>, Vec<usize>, Option<Option<usize>>)>,
    r: &dyn Fn(usize) -> Vec<String>,
) -> InducedOperation {
    #[derive(Default)]
    struct Slot {
        value: Option<(usize, Vec<usize>)>,
        undefined: bool,
        conflict: bool,
    }
    let mut slots: HashMap<Vec<usize>, Slot> = HashMap::new();
    let mut keys: Vec<Vec<usize>> = Vec::new();
    let mut conflict = None;
    let mut undefined_at = None;
    for (key, reps, result) in results {
        let slot = slots.entry(key.clone()).or_insert_with(|| {
            keys.push(key.clone());
            Slot::default()
        });
        match result.flatten() {
            None => {
                slot.undefined = true;
                undefined_at.get_or_insert_with(|| reps.iter().map(|&i| r(i)).collect());
            }
            Some(k) => match &slot.value {
                None => slot.value = Some((k, reps)),
                Some((prev, prev_reps)) if *prev != k => {
                    slot.conflict = true;
                    conflict.get_or_insert_with(|| {
                        vec![
                            prev_reps.iter().map(|&i| r(i)).collect(),
                            reps.iter().map(|&i| r(i)).collect(),
                        ]
                    });
                }
                Some(_) => {}
            },
        }
    }
    let ill_defined = slots.values().filter(|s| s.conflict).count();
    let partial = slots.values().filter(|s| !s.conflict && s.undefined).count();
    let defined = slots.len() - ill_defined - partial;
    let verdict = if ill_defined > 0 {
        OpVerdict::IllDefined
    } else if partial > 0 {
        OpVerdict::Partial
    } else {
        OpVerdict::Total
    };
    InducedOperation {
        operation: name.to_string(),
        verdict,
        class_tuples: keys.len(),
        defined,
        partial,
        ill_defined,
        conflict,
        undefined_at,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelContext;

    fn m0() -> ModelContext {
        ModelContext::from_blocks("M0", &["a", "b", "c", "d", "e"], &[&["a", "b"], &["c"], &["d", "e"]]).unwrap()
    }

    #[test]
    fn parses_specs() {
        let s = RoughEqualitySpec::parse("x^l=y^l and x^u=y^u").unwrap();
        assert_eq!(s.symbols().len(), 2);
        assert!(s.expr.is_conjunctive());
        let s = RoughEqualitySpec::parse("not (x^l2 = y^l2) | x^u = y^u").unwrap();
        assert_eq!(s.symbols()[0].family, Some(2));
        assert!(!s.expr.is_conjunctive());
        for bad in ["", "x^l = y^u", "x^q = y^q", "x^l = y^l and", "x^l = y^l)", "x^l == y^l"] {
            assert!(RoughEqualitySpec::parse(bad).is_err(), "{bad}");
        }
        match RoughEqualitySpec::parse("x^l = y^l @") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 11),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classical_rough_equality_has_eighteen_classes() {
        let ctx = m0();
        let rys = RysModel::from_context(&ctx).unwrap();
        let spec = RoughEqualitySpec::parse("x^l=y^l and x^u=y^u").unwrap();
        let rep = generalized_quotient(&rys, &spec).unwrap();
        assert_eq!(rep.class_count, 18);
        assert!(rep.approx("l1").unwrap().well_defined);
        assert!(rep.approx("u1").unwrap().well_defined);
        assert!(rep.w_map.injective);
        assert!(!rep.w_map.surjective);
        assert_eq!(rep.operations[2].verdict, OpVerdict::Total);
        // union does not descend to rough classes
        assert_eq!(rep.operations[0].verdict, OpVerdict::IllDefined);
    }

    #[test]
    fn upper_only_equality_breaks_lower() {
        let ctx = m0();
        let rys = RysModel::from_context(&ctx).unwrap();
        let spec = RoughEqualitySpec::parse("x^u=y^u").unwrap();
        let rep = generalized_quotient(&rys, &spec).unwrap();
        assert_eq!(rep.class_count, 8);
        let l = rep.approx("l1").unwrap();
        assert!(!l.well_defined);
        let [x, y] = l.witness.clone().unwrap();
        let (x, y) = (ctx.universe.subset(&x).unwrap(), ctx.universe.subset(&y).unwrap());
        let fam = ctx.primary();
        assert_eq!(fam.upper(x), fam.upper(y));
        assert_ne!(fam.upper(fam.lower(x)), fam.upper(fam.lower(y)));
        assert!(rep.approx("u1").unwrap().well_defined);
    }

    #[test]
    fn one_element_universe() {
        let ctx = ModelContext::from_blocks("one", &["a"], &[&["a"]]).unwrap();
        let rys = RysModel::from_context(&ctx).unwrap();
        let rep = generalized_quotient(&rys, &RoughEqualitySpec::parse("x^l=y^l").unwrap()).unwrap();
        assert_eq!(rep.class_count, 2);
        assert!(rep.all_well_defined());
    }

    #[test]
    fn unknown_family_is_config_error() {
        let rys = RysModel::from_context(&m0()).unwrap();
        let spec = RoughEqualitySpec::parse("x^l7=y^l7").unwrap();
        assert!(matches!(generalized_quotient(&rys, &spec), Err(Error::Config(_))));
    }

    #[test]
    fn non_equivalence_is_flagged() {
        let rys = RysModel::from_context(&m0()).unwrap();
        let spec = RoughEqualitySpec::parse("not x^l=y^l").unwrap();
        let rep = generalized_quotient(&rys, &spec).unwrap();
        assert!(!rep.equivalence.reflexive);
        let spec = RoughEqualitySpec::parse("x^l=y^l or x^u=y^u").unwrap();
        let rep = generalized_quotient(&rys, &spec).unwrap();
        assert!(rep.equivalence.reflexive);
        assert!(!rep.equivalence.transitive);
    }
}
