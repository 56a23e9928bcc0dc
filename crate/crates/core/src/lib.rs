//! Engine for a hide-and-seek game between an infection source and a
//! network administrator.
//!
//! The source picks per-edge spreading rates on a tree to keep the Jordan
//! center of the infected set far from itself while infecting many nodes;
//! the administrator picks how far around the estimated center to search.

pub mod ad;
pub mod dis;
pub mod error;
pub mod experiments;
pub mod game;
pub mod graph;
pub mod rational;
pub mod spread;

pub use ad::{ad_infect, AdOutcome};
pub use dis::{
    binary_search_tobs, build_dis, dis_size, find_dominant_path, max_safety_margin, DisPlan,
    DominantPath,
};
pub use error::{Error, Result};
pub use game::{EquilibriumReport, GameConfig, Schedule, Snapshot, SourceMenu};
pub use graph::{Network, NodeId, TreeView};
pub use rational::Rational;
pub use spread::{simulate, EdgeRate, InfectionOutcome, InfectionStrategy, RateBounds};
