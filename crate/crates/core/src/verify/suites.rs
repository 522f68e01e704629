use crate::error::{Error, Result};

use super::ast::{print_suite, QuasiIdentity};
use super::parser::parse_suite;

const CERA_THEOREM: &str = include_str!("../../suites/cera-theorem.suite");
const PRE_ROUGH: &str = include_str!("../../suites/pre-rough.suite");
const BOOLEAN_TOPOLOGICAL: &str = include_str!("../../suites/boolean-topological.suite");

/// Items of the theorem suite that make up the IN clause.
const IN_LABELS: &[&str] = &[
    "type-1a", "type-1b", "type-2a", "type-2b", "u1a", "u1b", "u2a", "u2b", "ter(1)a", "ter(1)b", "ter(1)c",
    "ter(2)a", "ter(2)b", "ter(2)c", "bi(1)a", "bi(1)b", "bi(2)a", "bi(2)b", "bm", "hra1a", "hra1b",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinSuite {
    CeraTheorem,
    AeraAxioms,
    PreRough,
    BooleanTopological,
}

impl BuiltinSuite {
    pub const ALL: [BuiltinSuite; 4] = [
        BuiltinSuite::CeraTheorem,
        BuiltinSuite::AeraAxioms,
        BuiltinSuite::PreRough,
        BuiltinSuite::BooleanTopological,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinSuite::CeraTheorem => "cera-theorem",
            BuiltinSuite::AeraAxioms => "aera-axioms",
            BuiltinSuite::PreRough => "pre-rough",
            BuiltinSuite::BooleanTopological => "boolean-topological",
        }
    }

    pub fn parse(s: &str) -> Option<BuiltinSuite> {
        BuiltinSuite::ALL.into_iter().find(|b| b.name() == s)
    }

    pub fn identities(self) -> Vec<QuasiIdentity> {
        let parse = |t: &str| parse_suite(t).expect("built-in suite parses");
        match self {
            BuiltinSuite::CeraTheorem => parse(CERA_THEOREM),
            BuiltinSuite::PreRough => parse(PRE_ROUGH),
            BuiltinSuite::BooleanTopological => parse(BOOLEAN_TOPOLOGICAL),
            BuiltinSuite::AeraAxioms => {
                fn prefixed(prefix: &'static str, qs: Vec<QuasiIdentity>) -> impl Iterator<Item = QuasiIdentity> {
                    qs.into_iter().map(move |mut q| {
                        q.label = format!("{prefix}.{}", q.label);
                        q
                    })
                }
                let theorem: Vec<_> = parse(CERA_THEOREM)
                    .into_iter()
                    .filter(|q| IN_LABELS.contains(&q.label.as_str()))
                    .collect();
                prefixed("RA", parse(PRE_ROUGH))
                    .chain(prefixed("BA", parse(BOOLEAN_TOPOLOGICAL)))
                    .chain(prefixed("IN", theorem))
                    .collect()
            }
        }
    }

    pub fn text(self) -> String {
        match self {
            BuiltinSuite::CeraTheorem => CERA_THEOREM.to_string(),
            BuiltinSuite::PreRough => PRE_ROUGH.to_string(),
            BuiltinSuite::BooleanTopological => BOOLEAN_TOPOLOGICAL.to_string(),
            BuiltinSuite::AeraAxioms => print_suite(&self.identities()),
        }
    }
}

/// A built-in suite by name, or the contents of a suite file.
pub fn load_suite(name_or_path: &str) -> Result<(String, Vec<QuasiIdentity>)> {
    if let Some(b) = BuiltinSuite::parse(name_or_path) {
        return Ok((b.name().to_string(), b.identities()));
    }
    let text = std::fs::read_to_string(name_or_path).map_err(|e| {
        Error::Config(format!(
            "{name_or_path:?} is neither a built-in suite ({}) nor a readable file: {e}",
            BuiltinSuite::ALL.map(|b| b.name()).join(", ")
        ))
    })?;
    Ok((name_or_path.to_string(), parse_suite(&text)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse_and_round_trip() {
        for b in BuiltinSuite::ALL {
            let qs = b.identities();
            assert!(!qs.is_empty());
            assert_eq!(parse_suite(&print_suite(&qs)).unwrap(), qs, "{}", b.name());
            let mut labels: Vec<_> = qs.iter().map(|q| &q.label).collect();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), qs.len(), "duplicate labels in {}", b.name());
            assert!(qs.iter().all(|q| q.anchor.is_some()));
        }
        let aera = BuiltinSuite::AeraAxioms.identities();
        assert_eq!(aera.iter().filter(|q| q.label.starts_with("IN.")).count(), IN_LABELS.len());
    }
}
