//! Exact tools for coloring reconfiguration graphs `R_k(G)`: graph
//! constructions, modular decomposition, forbidden-pattern recognisers,
//! exhaustive reconfiguration census, constructive schedule lifting through
//! skeletons, and desk-scale verification campaigns.

pub mod bitset;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod io;
pub mod modules;
pub mod named;
pub mod lifting;
pub mod patterns;
pub mod planner;
pub mod reconfig;
pub mod schedule;
pub mod verify;

pub use bitset::VertexSet;
pub use coloring::{Color, ColorSet, Coloring};
pub use error::{Error, Result};
pub use graph::Graph;
