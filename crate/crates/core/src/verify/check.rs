//! Evaluation of quasi-identities under existence-equality: an equation holds
//! when both sides are defined and equal. An undefined term makes a premise
//! false; in the conclusion it is reported as `undefined-encountered`.

use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::limits::{ScanMode, DEFAULT_ASSIGNMENT_BUDGET};
use crate::qrst::Tag;

use super::algebra::HybridAlgebra;
use super::ast::{Atom, BinOp, Constant, QuasiIdentity, Term, UnOp};

/// Samples drawn from one ChaCha stream; stream `k` serves chunk `k`.
pub const SAMPLE_CHUNK: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    UndefinedEncountered,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<String>,
    pub verdict: Verdict,
    pub checked: u64,
    pub premises_held: u64,
    /// First failing assignment, or the first undefined one when nothing fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Map<String, Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub model: String,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Vec<IdentityResult>,
}

impl VerifyReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.verdict == Verdict::Holds)
    }

    pub fn get(&self, label: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.label == label)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| r.verdict != Verdict::Holds)
            .map(|r| r.label.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: ScanMode,
    pub timing: bool,
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: ScanMode::Exhaustive,
            timing: false,
            budget: DEFAULT_ASSIGNMENT_BUDGET,
        }
    }
}

impl VerifyOptions {
    pub fn exhaustive() -> VerifyOptions {
        VerifyOptions::default()
    }

    pub fn sampled(samples: u64, seed: u64) -> VerifyOptions {
        VerifyOptions {
            mode: ScanMode::Sampled { samples, seed },
            ..VerifyOptions::default()
        }
    }
}

enum CTerm {
    Var(usize),
    Const(Constant),
    Un(UnOp, Box<CTerm>),
    Bin(BinOp, Box<CTerm>, Box<CTerm>),
}

enum CAtom {
    Tau(Tag, CTerm),
    Eq(CTerm, CTerm),
}

struct Compiled {
    vars: Vec<String>,
    premises: Vec<CAtom>,
    conclusion: Vec<CAtom>,
    /// Type restriction implied by a premise `tau_i v` on a bare variable.
    var_tags: Vec<Option<Tag>>,
}

fn compile_term(t: &Term, vars: &[String]) -> CTerm {
    match t {
        Term::Var(v) => CTerm::Var(vars.iter().position(|w| w == v).expect("variable collected")),
        Term::Const(c) => CTerm::Const(*c),
        Term::Unary(op, a) => CTerm::Un(*op, Box::new(compile_term(a, vars))),
        Term::Binary(op, a, b) => CTerm::Bin(*op, Box::new(compile_term(a, vars)), Box::new(compile_term(b, vars))),
    }
}

fn compile_atom(a: &Atom, vars: &[String]) -> CAtom {
    match a {
        Atom::Tau(tag, t) => CAtom::Tau(*tag, compile_term(t, vars)),
        Atom::Eq(l, r) => CAtom::Eq(compile_term(l, vars), compile_term(r, vars)),
    }
}

fn compile(qi: &QuasiIdentity) -> Compiled {
    let vars = qi.variables();
    let mut var_tags = vec![None; vars.len()];
    let mut contradictory = false;
    for p in &qi.premises {
        if let Atom::Tau(tag, Term::Var(v)) = p {
            let k = vars.iter().position(|w| w == v).expect("variable collected");
            match var_tags[k] {
                Some(t) if t != *tag => contradictory = true,
                _ => var_tags[k] = Some(*tag),
            }
        }
    }
    if contradictory {
        // Leave the domains unrestricted; the premises then filter everything.
        var_tags = vec![None; vars.len()];
    }
    Compiled {
        premises: qi.premises.iter().map(|a| compile_atom(a, &vars)).collect(),
        conclusion: qi.conclusion.iter().map(|a| compile_atom(a, &vars)).collect(),
        vars,
        var_tags,
    }
}

fn eval<A: HybridAlgebra>(alg: &A, t: &CTerm, env: &[A::Elem]) -> Option<A::Elem> {
    match t {
        CTerm::Var(i) => Some(env[*i]),
        CTerm::Const(c) => Some(alg.constant(*c)),
        CTerm::Un(op, a) => alg.unary(*op, eval(alg, a, env)?),
        CTerm::Bin(op, a, b) => alg.binary(*op, eval(alg, a, env)?, eval(alg, b, env)?),
    }
}

/// `None` when some term is undefined.
fn atom_value<A: HybridAlgebra>(alg: &A, a: &CAtom, env: &[A::Elem]) -> Option<bool> {
    match a {
        CAtom::Tau(tag, t) => Some(alg.tag(eval(alg, t, env)?) == *tag),
        CAtom::Eq(l, r) => Some(eval(alg, l, env)? == eval(alg, r, env)?),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Skipped,
    Holds,
    Undefined,
    Fails,
}

fn outcome<A: HybridAlgebra>(alg: &A, c: &Compiled, env: &[A::Elem]) -> Outcome {
    if !c.premises.iter().all(|p| atom_value(alg, p, env) == Some(true)) {
        return Outcome::Skipped;
    }
    let mut undefined = false;
    for a in &c.conclusion {
        match atom_value(alg, a, env) {
            Some(true) => return Outcome::Holds,
            Some(false) => {}
            None => undefined = true,
        }
    }
    if undefined {
        Outcome::Undefined
    } else {
        Outcome::Fails
    }
}

struct Tally<E> {
    checked: u64,
    held: u64,
    fail: Option<Vec<E>>,
    undefined: Option<Vec<E>>,
}

impl<E: Clone> Tally<E> {
    fn new() -> Self {
        Tally {
            checked: 0,
            held: 0,
            fail: None,
            undefined: None,
        }
    }

    fn record(&mut self, o: Outcome, env: &[E]) {
        self.checked += 1;
        if o != Outcome::Skipped {
            self.held += 1;
        }
        match o {
            Outcome::Fails if self.fail.is_none() => self.fail = Some(env.to_vec()),
            Outcome::Undefined if self.undefined.is_none() => self.undefined = Some(env.to_vec()),
            _ => {}
        }
    }

    /// Merge a later tally; earlier witnesses win.
    fn then(mut self, later: Tally<E>) -> Self {
        self.checked += later.checked;
        self.held += later.held;
        self.fail = self.fail.or(later.fail);
        self.undefined = self.undefined.or(later.undefined);
        self
    }
}

fn scan_exhaustive<A: HybridAlgebra>(alg: &A, c: &Compiled, budget: u64) -> Result<Tally<A::Elem>> {
    let elems = alg.elements()?;
    let domains: Vec<Vec<A::Elem>> = c
        .var_tags
        .iter()
        .map(|t| match t {
            Some(tag) => elems.iter().copied().filter(|e| alg.tag(*e) == *tag).collect(),
            None => elems.to_vec(),
        })
        .collect();
    let total: u128 = domains.iter().map(|d| d.len() as u128).product();
    if total > budget as u128 {
        return Err(Error::Budget(format!(
            "{total} assignments for {} variables exceed the budget of {budget}; use sampled mode",
            c.vars.len()
        )));
    }
    if domains.is_empty() {
        let mut t = Tally::new();
        t.record(outcome(alg, c, &[]), &[]);
        return Ok(t);
    }
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(Tally::new());
    }
    let rest = &domains[1..];
    let parts: Vec<Tally<A::Elem>> = domains[0]
        .par_iter()
        .map(|&first| {
            let mut t = Tally::new();
            let mut idx = vec![0usize; rest.len()];
            let mut env: Vec<A::Elem> = std::iter::once(first).chain(rest.iter().map(|d| d[0])).collect();
            loop {
                t.record(outcome(alg, c, &env), &env);
                let mut k = rest.len();
                loop {
                    if k == 0 {
                        return t;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < rest[k].len() {
                        env[k + 1] = rest[k][idx[k]];
                        break;
                    }
                    idx[k] = 0;
                    env[k + 1] = rest[k][0];
                }
            }
        })
        .collect();
    Ok(parts.into_iter().fold(Tally::new(), Tally::then))
}

fn scan_sampled<A: HybridAlgebra>(alg: &A, c: &Compiled, samples: u64, seed: u64) -> Tally<A::Elem> {
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Tally<A::Elem>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut t = Tally::new();
            let n = SAMPLE_CHUNK.min(samples - k * SAMPLE_CHUNK);
            let mut env = Vec::with_capacity(c.vars.len());
            for _ in 0..n {
                env.clear();
                env.extend(c.var_tags.iter().map(|tag| alg.sample(&mut rng, *tag)));
                t.record(outcome(alg, c, &env), &env);
            }
            t
        })
        .collect();
    parts.into_iter().fold(Tally::new(), Tally::then)
}

pub fn check_quasi_identity<A: HybridAlgebra>(
    alg: &A,
    qi: &QuasiIdentity,
    opts: &VerifyOptions,
) -> Result<IdentityResult> {
    let start = Instant::now();
    let c = compile(qi);
    let tally = match opts.mode {
        ScanMode::Exhaustive => scan_exhaustive(alg, &c, opts.budget)?,
        ScanMode::Sampled { samples, seed } => scan_sampled(alg, &c, samples, seed),
    };
    let (verdict, witness) = match (tally.fail, tally.undefined) {
        (Some(f), _) => (Verdict::Fails, Some(f)),
        (None, Some(u)) => (Verdict::UndefinedEncountered, Some(u)),
        (None, None) => (Verdict::Holds, None),
    };
    let counterexample = witness.map(|env| {
        c.vars
            .iter()
            .zip(env)
            .map(|(v, e)| (v.clone(), alg.to_json(e)))
            .collect::<Map<String, Value>>()
    });
    Ok(IdentityResult {
        label: qi.label.clone(),
        anchor: qi.anchor.clone(),
        verdict,
        checked: tally.checked,
        premises_held: tally.held,
        counterexample,
        millis: opts.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

pub fn run_suite<A: HybridAlgebra>(
    alg: &A,
    suite: &str,
    identities: &[QuasiIdentity],
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let results = identities
        .iter()
        .map(|qi| check_quasi_identity(alg, qi, opts))
        .collect::<Result<Vec<_>>>()?;
    let (mode, samples) = match opts.mode {
        ScanMode::Exhaustive => ("exhaustive", None),
        ScanMode::Sampled { samples, .. } => ("sampled", Some(samples)),
    };
    Ok(VerifyReport {
        suite: suite.to_string(),
        model: alg.name().to_string(),
        mode,
        samples,
        seed: opts.mode.seed(),
        results,
    })
}

/// Replays a reported assignment; `true` when it still falsifies the identity.
pub fn replays_as_failure<A: HybridAlgebra>(alg: &A, qi: &QuasiIdentity, env: &[A::Elem]) -> bool {
    let c = compile(qi);
    outcome(alg, &c, env) == Outcome::Fails
}

/// Direct evaluation of a closed or assigned term.
pub fn eval_term<A: HybridAlgebra>(alg: &A, t: &Term, vars: &[(&str, A::Elem)]) -> Option<A::Elem> {
    let names: Vec<String> = vars.iter().map(|(n, _)| n.to_string()).collect();
    let mut all = names.clone();
    t.collect_vars(&mut all);
    if all.len() != names.len() {
        return None;
    }
    let env: Vec<A::Elem> = vars.iter().map(|(_, e)| *e).collect();
    eval(alg, &compile_term(t, &names), &env)
}
