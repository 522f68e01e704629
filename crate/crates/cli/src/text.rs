//! Plain-text report rendering.

use std::fmt::Write;

use serde_json::Value;

use rysbench::granules::{GranuleReport, PropertyVerdict};
use rysbench::model::{ApproxReport, DualityReport};
use rysbench::qrst::CradReport;
use rysbench::rough_equality::QuotientReport;
use rysbench::rys::{AxiomReport, IotaAgreement, SupplementationReport, SupplementationVerdict};
use rysbench::verify::{RepresentationReport, Verdict, VerifyReport};
use rysbench::ScanMode;

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok  "
    } else {
        "FAIL"
    }
}

fn set(names: &[String]) -> String {
    format!("{{{}}}", names.join(","))
}

fn sets(v: &[Vec<String>]) -> String {
    v.iter().map(|s| set(s)).collect::<Vec<_>>().join(", ")
}

fn scan(mode: &ScanMode) -> String {
    match mode {
        ScanMode::Exhaustive => "exhaustive".into(),
        ScanMode::Sampled { samples, seed } => format!("sampled, {samples} samples, seed {seed}"),
    }
}

pub fn approx(r: &ApproxReport) -> String {
    let mut s = format!("{}: {} subsets ({})\n", r.model, r.checked, scan(&r.mode));
    for f in &r.families {
        let _ = writeln!(s, "family {} ({}), {} definable sets", f.family, f.kind.name(), f.definables);
        for l in &f.laws {
            let _ = write!(s, "  {} {}", mark(l.holds), l.law);
            if let Some(w) = &l.witness {
                let _ = write!(s, "  at A = {}", set(w));
            }
            s.push('\n');
        }
    }
    s
}

pub fn duality(model: &str, reports: &[DualityReport]) -> String {
    let mut s = format!("{model}\n");
    for r in reports {
        let _ = write!(
            s,
            "  {} family {} ({}): {} subsets ({})",
            mark(r.dual),
            r.family,
            r.kind.name(),
            r.checked,
            scan(&r.mode)
        );
        if let Some(w) = &r.counterexample {
            let _ = write!(s, "; A = {}: {} gives {} vs {}", set(&w.set), w.clause, set(&w.lhs), set(&w.rhs));
        }
        s.push('\n');
    }
    s
}

fn supplementation(s: &mut String, name: &str, v: &SupplementationVerdict) {
    let _ = write!(s, "  {} {name} supplementation", mark(v.holds));
    if let Some([x, y]) = &v.counterexample {
        let _ = write!(s, "  no witness for x = {}, y = {}", set(x), set(y));
    }
    if let Some(l) = v.least_suffices {
        let _ = write!(s, "  (least element suffices: {l})");
    }
    s.push('\n');
}

pub fn rys(a: &AxiomReport, supp: &SupplementationReport, iota: &[IotaAgreement]) -> String {
    let mut s = format!(
        "{}: carrier {}, {} definable sets; {}{}\n",
        a.model,
        a.carrier,
        a.definables,
        a.note,
        if a.sampled { ", sampled pairs" } else { "" }
    );
    for v in &a.axioms {
        let _ = write!(s, "  {} {}", mark(v.holds), v.axiom);
        if let Some(i) = v.family {
            let _ = write!(s, " [family {i}]");
        }
        if let Some(w) = &v.witness {
            let _ = write!(s, "  at {}", sets(w));
        }
        if let Some(n) = &v.note {
            let _ = write!(s, "  ({n})");
        }
        s.push('\n');
    }
    for r in &a.surjectivity {
        let _ = writeln!(
            s,
            "  family {}: images equal shared W: {}, images cover own fixed points: {}",
            r.family, r.shared_w, r.per_family_w
        );
    }
    s.push_str("supplementation (informational)\n");
    supplementation(&mut s, "strict", &supp.strict);
    supplementation(&mut s, "weak", &supp.weak);
    s.push_str("iota agreement (informational)\n");
    for i in iota {
        let _ = write!(
            s,
            "  {}: {} of {} pairs agree, {} without a unique value",
            i.operation, i.agree, i.pairs, i.undefined
        );
        if let Some([x, y]) = &i.first_disagreement {
            let _ = write!(s, "; first disagreement at {}, {}", set(x), set(y));
        }
        s.push('\n');
    }
    s
}

pub fn property(v: &PropertyVerdict) -> String {
    let mut s = format!("{} {}", mark(v.holds), v.property);
    if let Some(i) = v.family {
        let _ = write!(s, " [family {i}]");
    }
    if let Some(w) = &v.witness {
        let _ = write!(s, "  at {}", sets(w));
    }
    if let Some(n) = &v.note {
        let _ = write!(s, "  ({n})");
    }
    if v.bounded_exhaustion {
        s.push_str("  [not found within term bounds]");
    }
    s.push('\n');
    s
}

pub fn granules(r: &GranuleReport) -> String {
    let mut s = format!(
        "{} / {}: depth {}, width {}\nprofile: {}\nadmissible: {}\n",
        r.model, r.granules, r.bounds.depth, r.bounds.width, r.profile(), r.admissible
    );
    for v in &r.properties {
        s.push_str("  ");
        s.push_str(&property(v));
    }
    s
}

pub fn identities(r: &VerifyReport) -> String {
    let mut s = format!("{} on {} ({})\n", r.suite, r.model, r.mode);
    for x in &r.results {
        let v = match x.verdict {
            Verdict::Holds => "holds",
            Verdict::Fails => "FAILS",
            Verdict::UndefinedEncountered => "UNDEFINED",
        };
        let _ = write!(s, "  {v:<9} {} ({} assignments)", x.label, x.checked);
        if let Some(a) = &x.anchor {
            let _ = write!(s, "  {a}");
        }
        if let Some(c) = &x.counterexample {
            let parts: Vec<String> = c.iter().map(|(k, v)| format!("{k} = {}", element(v))).collect();
            let _ = write!(s, "\n            at {}", parts.join(", "));
        }
        if let Some(ms) = x.millis {
            let _ = write!(s, "  [{ms} ms]");
        }
        s.push('\n');
    }
    let failed = r.results.iter().filter(|x| x.verdict != Verdict::Holds).count();
    let _ = writeln!(s, "{} of {} hold", r.results.len() - failed, r.results.len());
    s
}

fn names(v: &Value) -> String {
    match v.as_array() {
        Some(a) => format!(
            "{{{}}}",
            a.iter().map(|x| x.as_str().unwrap_or("?")).collect::<Vec<_>>().join(",")
        ),
        None => v.to_string(),
    }
}

fn element(v: &Value) -> String {
    match v.get("tag").and_then(Value::as_str) {
        Some("t1") => format!("t1 {}", names(&v["set"])),
        Some("t2") => format!("t2 ({}, {})", names(&v["lower"]), names(&v["upper"])),
        _ => v.to_string(),
    }
}

pub fn cera(v: &Value) -> String {
    let blocks: Vec<String> = v["blocks"].as_array().into_iter().flatten().map(names).collect();
    format!(
        "{}: universe {}, blocks {}\n{} elements: {} classical, {} rough classes\n",
        v["model"].as_str().unwrap_or(""),
        names(&v["universe"]),
        blocks.join(" "),
        v["size"].as_str().unwrap_or(""),
        v["tau1"].as_str().unwrap_or(""),
        v["tau2"]
    )
}

pub fn quotient(r: &QuotientReport) -> String {
    let mut s = format!(
        "{} by {}: {} carrier elements, {} classes{}\n",
        r.model,
        r.spec,
        r.carrier,
        r.class_count,
        if r.sampled_pairs { " (operations sampled)" } else { "" }
    );
    let _ = write!(
        s,
        "  {} equivalence (reflexive {}, transitive {})",
        mark(r.equivalence.reflexive && r.equivalence.transitive),
        r.equivalence.reflexive,
        r.equivalence.transitive
    );
    if let Some(w) = &r.equivalence.witness {
        let _ = write!(s, "  at {}", sets(w));
    }
    s.push('\n');
    for a in &r.approximations {
        let _ = write!(s, "  {} {} well defined", mark(a.well_defined), a.symbol);
        if let Some(w) = &a.witness {
            let _ = write!(s, "  at {}", sets(w));
        }
        s.push('\n');
    }
    for o in &r.operations {
        let verdict = serde_json::to_value(o.verdict).expect("verdict");
        let _ = write!(
            s,
            "  {} {} {}: {} class tuples, {} defined, {} partial, {} ill-defined",
            mark(o.ill_defined == 0 && o.partial == 0),
            o.operation,
            verdict.as_str().unwrap_or(""),
            o.class_tuples,
            o.defined,
            o.partial,
            o.ill_defined
        );
        if let Some(c) = &o.conflict {
            let parts: Vec<String> = c.iter().map(|t| format!("({})", sets(t))).collect();
            let _ = write!(s, "\n      conflict {}", parts.join(" vs "));
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "  definables {}: injective {}, surjective {}",
        r.w_map.definables, r.w_map.injective, r.w_map.surjective
    );
    s
}

pub fn represent(r: &RepresentationReport) -> String {
    let mut s = format!("{}: {} elements\n", r.algebra, r.size);
    if !r.gate_passed {
        let _ = writeln!(s, "  FAIL axiom gate: {}", r.gate_failures.join(", "));
        return s;
    }
    s.push_str("  ok   axiom gate\n");
    let tried: Vec<String> = r.shapes_tried.iter().map(|v| format!("{v:?}")).collect();
    let _ = writeln!(
        s,
        "  shapes tried (universe up to {}): {}; {} isomorphism checks",
        r.max_n,
        if tried.is_empty() { "none".into() } else { tried.join(" ") },
        r.isomorphism_checks
    );
    match &r.found {
        Some(f) => {
            let _ = writeln!(
                s,
                "  ok   represented by {} atoms, blocks {}",
                f.universe_size,
                sets(&f.blocks)
            );
        }
        None => s.push_str("  FAIL no representation found\n"),
    }
    s
}

pub fn crad(r: &CradReport) -> String {
    let mut s = format!(
        "{}: {} pairs ({} classical, {} rough)\n  reading: {}\n",
        r.model, r.pairs, r.classical_part, r.rough_part, r.reading
    );
    for o in &r.operations {
        let _ = writeln!(
            s,
            "  {}: {} tuples, {} defined, {} closed",
            o.operation, o.tuples, o.defined, o.closed
        );
    }
    s
}
