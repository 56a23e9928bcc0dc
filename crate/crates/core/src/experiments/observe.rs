use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::Snapshot;
use crate::graph::{distance_to_set, jordan_centers, pick_jordan_center, Network, NodeId};

/// The administrator's partial view of an infection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    /// Sampled infected nodes, ascending.
    pub observed: Vec<NodeId>,
    /// Jordan centers of the observed nodes.
    pub centers: Vec<NodeId>,
    /// Measured around the chosen observed center: `margin` holds the
    /// distance from the source to the nearest observed center and the
    /// suspect sizes count all infected nodes.
    pub snapshot: Snapshot,
}

/// Samples `ceil(alpha * |infected| / 100)` infected nodes (at least one)
/// and locates their Jordan centers in `net`.
pub fn observe_subset(
    net: &Network,
    infected: &[NodeId],
    source: NodeId,
    alpha: f64,
    seed: u64,
) -> Result<Observation> {
    if infected.is_empty() {
        return Err(Error::EmptySet("infected set"));
    }
    if !(alpha > 0.0 && alpha <= 100.0) {
        return Err(Error::param(format!("observed percentage {alpha} outside (0, 100]")));
    }
    let amount = ((alpha * infected.len() as f64 / 100.0).ceil() as usize).clamp(1, infected.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut observed: Vec<NodeId> = rand::seq::index::sample(&mut rng, infected.len(), amount)
        .into_iter()
        .map(|i| infected[i])
        .collect();
    observed.sort_unstable();
    let centers = jordan_centers(net, &observed)?;
    let distance = distance_to_set(net, source, &centers)?;
    let center = pick_jordan_center(&centers, seed)?;
    let snapshot = Snapshot::around(net, infected, distance, center)?;
    Ok(Observation { observed, centers, snapshot })
}
