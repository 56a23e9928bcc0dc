//! Adaptive diffusion baseline, reduced to the infected set it produces: a
//! ball of radius `t/2` around a virtual center `d_s` hops from the source.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Network, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdOutcome {
    pub center: NodeId,
    pub d_s: usize,
    /// Ascending node ids.
    pub infected: Vec<NodeId>,
    pub t: usize,
}

impl AdOutcome {
    pub fn size(&self) -> usize {
        self.infected.len()
    }
}

/// Picks the virtual center uniformly (seeded) among nodes exactly `d_s`
/// hops from `source` and infects everything within `t/2` hops of it.
pub fn ad_infect(net: &Network, source: NodeId, t: usize, d_s: usize, seed: u64) -> Result<AdOutcome> {
    if !t.is_multiple_of(2) {
        return Err(Error::param(format!("horizon {t} must be even")));
    }
    if d_s < 1 || d_s > t / 2 {
        return Err(Error::param(format!("margin {d_s} outside [1, {}]", t / 2)));
    }
    let from_source = bfs_distances(net, source)?;
    let candidates: Vec<NodeId> = (0..net.node_count()).filter(|&v| from_source[v] == d_s).collect();
    if candidates.is_empty() {
        return Err(Error::param(format!("no node is {d_s} hops from {source}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = candidates[rng.random_range(0..candidates.len())];
    let from_center = bfs_distances(net, center)?;
    let infected = (0..net.node_count()).filter(|&v| from_center[v] <= t / 2).collect();
    Ok(AdOutcome {
        center,
        d_s,
        infected,
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dis::regular_ball_size;
    use crate::graph::{generate_regular_tree, jordan_centers, tests::path};

    #[test]
    fn path_has_one_candidate() {
        let out = ad_infect(&path(10), 0, 4, 2, 9).unwrap();
        assert_eq!(out.center, 2);
        assert_eq!(out.infected, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn regular_tree_ball() {
        for r in [3u32, 4] {
            let net = generate_regular_tree(r as usize, 8).unwrap();
            for t in [2usize, 4, 6, 8] {
                for d_s in 1..=t / 2 {
                    let out = ad_infect(&net, 0, t, d_s, d_s as u64).unwrap();
                    assert_eq!(out.size() as u128, regular_ball_size(r, (t / 2) as u32).unwrap());
                    assert_eq!(jordan_centers(&net, &out.infected).unwrap(), vec![out.center]);
                }
            }
        }
    }

    #[test]
    fn seeded_choice_is_stable() {
        let net = generate_regular_tree(3, 6).unwrap();
        let a = ad_infect(&net, 0, 6, 2, 42).unwrap();
        assert_eq!(a, ad_infect(&net, 0, 6, 2, 42).unwrap());
    }

    #[test]
    fn invalid_requests() {
        let net = path(5);
        assert!(ad_infect(&net, 0, 3, 1, 0).is_err());
        assert!(ad_infect(&net, 0, 4, 0, 0).is_err());
        assert!(ad_infect(&net, 0, 4, 3, 0).is_err());
        assert!(ad_infect(&net, 0, 20, 6, 0).is_err());
    }
}
