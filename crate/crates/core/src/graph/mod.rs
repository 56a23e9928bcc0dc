//! Undirected simple graphs, hop distances and Jordan centers.

mod edgelist;
mod generate;
mod tree;

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use edgelist::{load_edge_list, write_edge_list, EdgeListLoad};
pub use generate::{generate_random_tree, generate_regular_tree, generate_scale_free};
pub use tree::{bfs_spanning_tree, TreeView, NO_PARENT};

pub type NodeId = usize;

/// Distance marker for nodes that BFS never reaches.
pub const UNREACHABLE: usize = usize::MAX;

/// Undirected simple graph over dense ids `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    adjacency: Vec<Vec<NodeId>>,
    labels: Option<Vec<u64>>,
    edge_count: usize,
    is_tree: bool,
}

/// Edge bookkeeping reported by [`Network::from_edges_lossy`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DroppedEdges {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl Network {
    /// Builds a network, rejecting self-loops and duplicate edges.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let (net, dropped) = Self::from_edges_lossy(node_count, edges)?;
        if dropped.self_loops > 0 {
            return Err(Error::param("self-loops are not allowed"));
        }
        if dropped.duplicates > 0 {
            return Err(Error::param("duplicate edges are not allowed"));
        }
        Ok(net)
    }

    /// Builds a network, silently dropping self-loops and duplicates and
    /// reporting how many were dropped.
    pub fn from_edges_lossy(
        node_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<(Self, DroppedEdges)> {
        let mut adjacency = vec![Vec::new(); node_count];
        let mut dropped = DroppedEdges::default();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= node_count {
                    return Err(Error::InvalidNode { node: w, node_count });
                }
            }
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            dropped.duplicates += before - list.len();
            edge_count += list.len();
        }
        // Each duplicate undirected edge was counted from both endpoints.
        dropped.duplicates /= 2;
        edge_count /= 2;
        let mut net = Network {
            adjacency,
            labels: None,
            edge_count,
            is_tree: false,
        };
        net.is_tree = node_count > 0
            && edge_count + 1 == node_count
            && bfs_distances_unchecked(&net, 0).iter().all(|&d| d != UNREACHABLE);
        Ok((net, dropped))
    }

    pub fn with_labels(mut self, labels: Vec<u64>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::param("label count must equal node count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    /// Original id of `v` (the dense id itself for unlabeled networks).
    pub fn label(&self, v: NodeId) -> u64 {
        self.labels.as_ref().map_or(v as u64, |l| l[v])
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.is_tree
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node: v,
                node_count: self.node_count(),
            })
        }
    }
}

/// Hop distance from `src` to every node; [`UNREACHABLE`] where no path exists.
pub fn bfs_distances(net: &Network, src: NodeId) -> Result<Vec<usize>> {
    net.check_node(src)?;
    Ok(bfs_distances_unchecked(net, src))
}

fn bfs_distances_unchecked(net: &Network, src: NodeId) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; net.node_count()];
    let mut queue = VecDeque::new();
    bfs_into(net, src, &mut dist, &mut queue);
    dist
}

/// BFS reusing caller-owned buffers; `dist` must be pre-filled with
/// [`UNREACHABLE`].
fn bfs_into(net: &Network, src: NodeId, dist: &mut [usize], queue: &mut VecDeque<NodeId>) {
    queue.clear();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &w in net.neighbors(u) {
            if dist[w] == UNREACHABLE {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
}

/// Largest hop distance from `v` to any node of `targets` (the infection
/// range of `v` when `targets` is the infected set).
pub fn eccentricity(net: &Network, v: NodeId, targets: &[NodeId]) -> Result<usize> {
    if targets.is_empty() {
        return Err(Error::EmptySet("target set"));
    }
    for &u in targets {
        net.check_node(u)?;
    }
    let dist = bfs_distances(net, v)?;
    let mut ecc = 0;
    for &u in targets {
        if dist[u] == UNREACHABLE {
            return Err(Error::Unreachable(u));
        }
        ecc = ecc.max(dist[u]);
    }
    Ok(ecc)
}

/// All nodes of `net` minimizing the eccentricity towards `infected`,
/// ascending.
///
/// Trees use a double sweep over the infected set, which is exact in tree
/// metrics: the centers are the middle node(s) of a farthest infected
/// pair. Other graphs run one BFS per infected node and scan every node.
pub fn jordan_centers(net: &Network, infected: &[NodeId]) -> Result<Vec<NodeId>> {
    if infected.is_empty() {
        return Err(Error::EmptySet("infected set"));
    }
    for &u in infected {
        net.check_node(u)?;
    }
    if net.is_tree() {
        Ok(tree_jordan_centers(net, infected))
    } else {
        general_jordan_centers(net, infected)
    }
}

fn tree_jordan_centers(net: &Network, infected: &[NodeId]) -> Vec<NodeId> {
    let farthest = |dist: &[usize]| {
        infected
            .iter()
            .copied()
            .max_by(|&a, &b| dist[a].cmp(&dist[b]).then(b.cmp(&a)))
            .expect("non-empty")
    };
    let from_first = bfs_distances_unchecked(net, infected[0]);
    let a = farthest(&from_first);
    let (dist_a, parent) = bfs_with_parents(net, a);
    let b = farthest(&dist_a);
    let diameter = dist_a[b];
    // Walk back from b towards a; positions measured from a.
    let mut centers = Vec::with_capacity(2);
    let mut node = b;
    loop {
        let d = dist_a[node];
        if 2 * d == diameter || 2 * d + 1 == diameter || 2 * d == diameter + 1 {
            centers.push(node);
        }
        if node == a {
            break;
        }
        node = parent[node];
    }
    centers.sort_unstable();
    centers
}

fn bfs_with_parents(net: &Network, src: NodeId) -> (Vec<usize>, Vec<NodeId>) {
    let mut dist = vec![UNREACHABLE; net.node_count()];
    let mut parent = vec![NO_PARENT; net.node_count()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        for &w in net.neighbors(u) {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

fn general_jordan_centers(net: &Network, infected: &[NodeId]) -> Result<Vec<NodeId>> {
    let n = net.node_count();
    let mut ecc = vec![0usize; n];
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = VecDeque::new();
    let mut seen = vec![false; n];
    for &src in infected {
        if std::mem::replace(&mut seen[src], true) {
            continue;
        }
        dist.fill(UNREACHABLE);
        bfs_into(net, src, &mut dist, &mut queue);
        for (e, &d) in ecc.iter_mut().zip(&dist) {
            // UNREACHABLE saturates, excluding nodes outside the component.
            *e = (*e).max(d);
        }
    }
    for &u in infected {
        if ecc[u] == UNREACHABLE {
            return Err(Error::Unreachable(u));
        }
    }
    let best = *ecc.iter().min().expect("non-empty network");
    Ok((0..n).filter(|&v| ecc[v] == best).collect())
}

/// Uniform seeded choice among `centers`; a singleton is returned as is.
pub fn pick_jordan_center(centers: &[NodeId], seed: u64) -> Result<NodeId> {
    match centers {
        [] => Err(Error::EmptySet("Jordan center set")),
        [only] => Ok(*only),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(centers[rng.random_range(0..centers.len())])
        }
    }
}

/// Distance from `source` to the nearest of `centers`.
pub fn distance_to_set(net: &Network, source: NodeId, centers: &[NodeId]) -> Result<usize> {
    if centers.is_empty() {
        return Err(Error::EmptySet("center set"));
    }
    let dist = bfs_distances(net, source)?;
    centers
        .iter()
        .map(|&c| dist[c])
        .min()
        .filter(|&d| d != UNREACHABLE)
        .ok_or(Error::Unreachable(source))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    pub(crate) fn path(n: usize) -> Network {
        Network::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn star(leaves: usize) -> Network {
        Network::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn bfs_on_path_and_star() {
        assert_eq!(bfs_distances(&path(4), 0).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(bfs_distances(&star(4), 1).unwrap(), vec![1, 0, 2, 2, 2]);
    }

    #[test]
    fn bfs_marks_disconnected_nodes() {
        let net = Network::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let d = bfs_distances(&net, 0).unwrap();
        assert_eq!(&d[..2], &[0, 1]);
        assert_eq!(d[2], UNREACHABLE);
        assert_eq!(d[3], UNREACHABLE);
        assert!(!net.is_tree());
    }

    #[test]
    fn bfs_rejects_bad_source() {
        assert!(matches!(
            bfs_distances(&path(3), 7),
            Err(Error::InvalidNode { node: 7, .. })
        ));
    }

    #[test]
    fn eccentricity_basics() {
        let p = path(5);
        let all: Vec<_> = (0..5).collect();
        assert_eq!(eccentricity(&p, 2, &all).unwrap(), 2);
        assert_eq!(eccentricity(&p, 3, &[3]).unwrap(), 0);
        assert!(matches!(eccentricity(&p, 0, &[]), Err(Error::EmptySet(_))));
        let split = Network::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(eccentricity(&split, 0, &[2]), Err(Error::Unreachable(2))));
    }

    #[test]
    fn jordan_centers_on_paths() {
        assert_eq!(jordan_centers(&path(5), &[0, 1, 2, 3, 4]).unwrap(), vec![2]);
        assert_eq!(jordan_centers(&path(4), &[0, 1, 2, 3]).unwrap(), vec![1, 2]);
        assert_eq!(jordan_centers(&path(7), &[4]).unwrap(), vec![4]);
        assert_eq!(jordan_centers(&path(7), &[0, 6]).unwrap(), vec![3]);
        assert!(jordan_centers(&path(3), &[]).is_err());
    }

    #[test]
    fn jordan_centers_on_cycle_uses_general_route() {
        // 6-cycle: every node is at distance <= 3 from all; infected {0,1,2}
        // is centered at 1.
        let c6 = Network::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(!c6.is_tree());
        assert_eq!(jordan_centers(&c6, &[0, 1, 2]).unwrap(), vec![1]);
    }

    #[test]
    fn pick_center_is_deterministic_and_fair() {
        assert_eq!(pick_jordan_center(&[7], 99).unwrap(), 7);
        let a = pick_jordan_center(&[3, 4], 42).unwrap();
        assert_eq!(a, pick_jordan_center(&[3, 4], 42).unwrap());
        let threes = (0..10_000u64)
            .filter(|&s| pick_jordan_center(&[3, 4], s).unwrap() == 3)
            .count();
        let freq = threes as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.05, "frequency {freq}");
        assert!(pick_jordan_center(&[], 1).is_err());
    }

    #[test]
    fn lossy_builder_counts_drops() {
        let (net, dropped) =
            Network::from_edges_lossy(3, [(0, 1), (1, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(net.edge_count(), 2);
        assert_eq!(dropped, DroppedEdges { duplicates: 1, self_loops: 1 });
        assert!(net.is_tree());
        assert_eq!(net.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    fn arb_graph() -> impl Strategy<Value = Network> {
        (2usize..25).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |edges| {
                Network::from_edges_lossy(n, edges).unwrap().0
            })
        })
    }

    proptest! {
        #[test]
        fn distances_are_a_metric(net in arb_graph(), seed in any::<u64>()) {
            let n = net.node_count();
            let all: Vec<Vec<usize>> = (0..n).map(|s| bfs_distances(&net, s).unwrap()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..50 {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                prop_assert_eq!(all[a][b], all[b][a]);
                if all[a][b] != UNREACHABLE && all[b][c] != UNREACHABLE {
                    prop_assert!(all[a][c] <= all[a][b] + all[b][c]);
                }
            }
            for (s, row) in all.iter().enumerate() {
                prop_assert_eq!(row[s], 0);
            }
        }
    }
}
