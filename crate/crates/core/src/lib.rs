//! Exact computation in Houghton's groups H_n.
//!
//! H_n acts on X_n = {1..n} x N by bijections that are eventually translations
//! along each ray. This crate provides element arithmetic, the abelianisation
//! map pi onto Z^{n-1}, the classification of finite-index subgroups, finite
//! permutation-group machinery for window checks, and replayable traces of the
//! explicit generator constructions used to compute minimal generating sets.

pub mod classify;
pub mod constructions;
pub mod element;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod perm;
pub mod trace;
pub mod verify;
pub mod word;

pub use classify::{SubgroupDescriptor, SymType};
pub use element::{HoughtonElement, OrbitReport, TranslationVector};
pub use error::{Error, Result};
pub use lattice::LatticeBasis;
pub use perm::{AnyPerm, LinePerm, Parity, Perm, Point, RayPerm};
pub use verify::Report;
pub use word::GroupWord;
