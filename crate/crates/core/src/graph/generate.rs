use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Network, NodeId};
use crate::error::{Error, Result};

/// Random tree grown breadth first from root 0.
///
/// Every expanded node draws a total degree uniformly from `degrees`: the
/// root gets that many children, every other node that many minus one (its
/// parent edge counts). Growth stops as soon as `n` nodes exist, so the
/// last expanded node may receive fewer children than drawn.
pub fn generate_random_tree(n: usize, degrees: &[usize], seed: u64) -> Result<Network> {
    if n == 0 {
        return Err(Error::param("tree must have at least one node"));
    }
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::param("degree set must be non-empty and positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut queue = VecDeque::from([0]);
    let mut next: NodeId = 1;
    while next < n {
        let Some(u) = queue.pop_front() else {
            return Err(Error::param(format!(
                "degree set {degrees:?} stops growing before {n} nodes"
            )));
        };
        let degree = degrees[rng.random_range(0..degrees.len())];
        let children = if u == 0 { degree } else { degree - 1 };
        for _ in 0..children {
            if next == n {
                break;
            }
            edges.push((u, next));
            queue.push_back(next);
            next += 1;
        }
    }
    Network::from_edges(n, edges)
}

/// Preferential attachment: each new node links to `m` distinct existing
/// nodes drawn with probability proportional to degree. The first new node
/// (id `m`) links to all of the `m` initial nodes, giving `m * (n - m)`
/// edges.
pub fn generate_scale_free(n: usize, m: usize, seed: u64) -> Result<Network> {
    if m < 1 || n <= m {
        return Err(Error::param(format!("need n > m >= 1, got n={n}, m={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * (n - m));
    // Every edge endpoint appears once per incident edge.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * m * (n - m));
    let mut targets: Vec<NodeId> = (0..m).collect();
    for source in m..n {
        for &t in &targets {
            edges.push((t, source));
        }
        endpoints.extend_from_slice(&targets);
        endpoints.extend(std::iter::repeat_n(source, m));
        let mut chosen = BTreeSet::new();
        while chosen.len() < m {
            chosen.insert(endpoints[rng.random_range(0..endpoints.len())]);
        }
        targets = chosen.into_iter().collect();
    }
    Network::from_edges(n, edges)
}

/// Regular tree truncated at `depth`: the root has `r` children and every
/// other interior node `r - 1`.
pub fn generate_regular_tree(r: usize, depth: usize) -> Result<Network> {
    if r < 2 {
        return Err(Error::param("regular tree degree must be at least 2"));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0];
    let mut next: NodeId = 1;
    for _ in 0..depth {
        let mut level = Vec::new();
        for &u in &frontier {
            let children = if u == 0 { r } else { r - 1 };
            for _ in 0..children {
                edges.push((u, next));
                level.push(next);
                next += 1;
            }
        }
        frontier = level;
    }
    Network::from_edges(next, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_distances;

    #[test]
    fn single_node_tree() {
        let t = generate_random_tree(1, &[2, 3], 5).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.edge_count(), 0);
        assert!(generate_random_tree(0, &[2, 3], 5).is_err());
    }

    #[test]
    fn random_trees_are_trees() {
        for seed in 0..50 {
            let n = 1 + (seed as usize * 37) % 400;
            let t = generate_random_tree(n, &[2, 3], seed).unwrap();
            assert_eq!(t.edge_count(), n - 1);
            assert!(t.is_tree());
        }
    }

    #[test]
    fn degree_histogram_is_uniform() {
        let t = generate_random_tree(10_000, &[2, 3], 11).unwrap();
        // Leaves are the unexpanded frontier; interior nodes drew {2,3}.
        let interior: Vec<usize> = (0..t.node_count())
            .map(|v| t.degree(v))
            .filter(|&d| d >= 2)
            .collect();
        let threes = interior.iter().filter(|&&d| d == 3).count() as f64;
        let share = threes / interior.len() as f64;
        assert!((share - 0.5).abs() <= 0.03, "share of degree 3: {share}");
        assert!(interior.iter().all(|&d| d <= 3));
    }

    #[test]
    fn stalled_growth_is_an_error() {
        assert!(generate_random_tree(5, &[1], 0).is_err());
        assert!(generate_random_tree(5, &[], 0).is_err());
    }

    #[test]
    fn scale_free_with_one_edge_per_node_is_a_tree() {
        let g = generate_scale_free(5, 1, 3).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_tree());
        assert!(generate_scale_free(2, 2, 0).is_err());
        assert!(generate_scale_free(5, 0, 0).is_err());
    }

    #[test]
    fn scale_free_size_connectivity_and_hubs() {
        let g = generate_scale_free(5000, 2, 7).unwrap();
        assert_eq!(g.node_count(), 5000);
        assert_eq!(g.edge_count(), 2 * 5000 - 4);
        assert!(bfs_distances(&g, 0).unwrap().iter().all(|&d| d != usize::MAX));
        let max_degree = (0..5000).map(|v| g.degree(v)).max().unwrap();
        assert!(max_degree > 50, "max degree {max_degree}");
        let tree = generate_random_tree(5000, &[2, 3], 7).unwrap();
        assert!(max_degree > (0..5000).map(|v| tree.degree(v)).max().unwrap());
    }

    #[test]
    fn regular_tree_sizes() {
        // (r (r-1)^D - 2) / (r - 2)
        assert_eq!(generate_regular_tree(3, 4).unwrap().node_count(), 46);
        assert_eq!(generate_regular_tree(4, 2).unwrap().node_count(), 17);
        assert_eq!(generate_regular_tree(3, 0).unwrap().node_count(), 1);
    }
}
