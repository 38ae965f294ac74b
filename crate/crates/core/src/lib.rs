//! Exact partition functions and identity checks for charged six-vertex
//! ("metaplectic ice") lattice models of types Γ and Δ.

pub mod boltzmann;
pub mod cli;
pub mod coeff;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod verify;
pub mod ybsystem;

pub use coeff::{CoeffElem, EvalPoint, Ring};
pub use error::{Error, Result};
pub use lattice::{ColumnSet, Partition, RowType, Spin, SystemSpec};
