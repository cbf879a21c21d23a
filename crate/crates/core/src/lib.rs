//! Finite groups, multiplicative 3-matchings, modular group algebras and
//! slice-rank bounds for group-algebra multiplication tensors.

pub mod arith;
pub mod config;
pub mod error;
pub mod group;

pub use config::Config;
pub use error::{Error, Result};
pub use group::{make_group, ElementId, Family, Group};
pub mod ffla;
pub mod conjugacy;
pub mod modrep;
pub mod matching;
pub mod slicerank;
pub mod report;
