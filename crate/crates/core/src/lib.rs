//! Finite models of soft clustering systems over `℘(H)`: subsets, granular
//! approximations, nearness predicates, axiom checking, cluster validation
//! and small-model search.

pub mod delta;
pub mod error;
pub mod granules;
pub mod mss;
pub mod oracle;
pub mod pipeline;
pub mod search;
pub mod sets;
pub mod validation;
pub mod verdict;

pub use error::{Error, Result};
pub use mss::{AxiomId, CheckOptions, Classification, Flag, MssStructure, Parthood, Symbol};
pub use sets::{DifferencePolicy, Partial, Subset, Universe};
pub use verdict::{CheckPlan, Coverage, Instance, Status, Verdict, Witness};
