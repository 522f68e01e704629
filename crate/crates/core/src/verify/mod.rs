//! Quasi-identity checking over hybrid algebras, the built-in suites,
//! isomorphism testing, and representation search.

pub mod algebra;
pub mod ast;
pub mod check;
pub mod iso;
pub mod parser;
pub mod represent;
pub mod suites;

pub use algebra::{HybridAlgebra, TableAlgebra, Tables};
pub use ast::{print_suite, Atom, BinOp, Constant, QuasiIdentity, Term, UnOp};
pub use check::{check_quasi_identity, run_suite, IdentityResult, Verdict, VerifyOptions, VerifyReport};
pub use iso::{iso_check, IsoResult};
pub use parser::{parse_line, parse_suite};
pub use represent::{representation_search, RepresentationReport};
pub use suites::{load_suite, BuiltinSuite};
