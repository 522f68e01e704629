//! Finite-model workbench for rough set structures: approximation spaces,
//! rough Y-systems, granule collections, and the typed hybrid algebra on
//! `℘(S) ∪ ℘(S)/≈`, with exhaustive or sampled verification of their laws.

pub mod error;
pub mod granules;
pub mod limits;
pub mod model;
pub mod model_file;
pub mod qrst;
pub mod quotient;
pub mod rough_equality;
pub mod rys;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use limits::{Limits, ScanMode};
pub use model::{Cover, FamilyKind, ModelContext, OperatorFamily, Partition};
pub use quotient::RoughPair;
pub use rys::{MereologyMode, RysModel};
pub use subset::{Subset, Universe};
