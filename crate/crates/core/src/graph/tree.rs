use std::collections::VecDeque;

use super::{Network, NodeId, UNREACHABLE};
use crate::error::{Error, Result};

/// Parent marker for the root and for nodes outside the root's component.
pub const NO_PARENT: NodeId = usize::MAX;

/// A rooted spanning tree of (the root's component of) a network.
///
/// Ids are those of the host network. Nodes outside the root's component
/// have no parent and [`UNREACHABLE`] depth. `order` lists the tree's nodes
/// breadth first with children visited in ascending id order, so within a
/// level nodes appear in lexicographic order of their root paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeView {
    root: NodeId,
    parent: Vec<NodeId>,
    depth: Vec<usize>,
    children: Vec<Vec<NodeId>>,
    order: Vec<NodeId>,
}

impl TreeView {
    /// Builds a tree from a parent array (`NO_PARENT` for the root and for
    /// excluded nodes). Fails on cycles or a parent array that does not
    /// hang off `root`.
    pub fn from_parents(root: NodeId, parent: Vec<NodeId>) -> Result<Self> {
        let n = parent.len();
        if root >= n {
            return Err(Error::InvalidNode { node: root, node_count: n });
        }
        if parent[root] != NO_PARENT {
            return Err(Error::param("root must not have a parent"));
        }
        let mut children = vec![Vec::new(); n];
        for (v, &p) in parent.iter().enumerate() {
            if p == NO_PARENT {
                continue;
            }
            if p >= n {
                return Err(Error::InvalidNode { node: p, node_count: n });
            }
            children[p].push(v);
        }
        let mut depth = vec![UNREACHABLE; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        depth[root] = 0;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            children[u].sort_unstable();
            for &c in &children[u] {
                depth[c] = depth[u] + 1;
                queue.push_back(c);
            }
        }
        let orphan = (0..n).find(|&v| parent[v] != NO_PARENT && depth[v] == UNREACHABLE);
        if let Some(v) = orphan {
            return Err(Error::param(format!(
                "node {v} has a parent but is not connected to root {root}"
            )));
        }
        Ok(TreeView {
            root,
            parent,
            depth,
            children,
            order,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Size of the host id space (not the number of tree nodes).
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Number of nodes in the tree.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.depth.len() && self.depth[v] != UNREACHABLE
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        Some(self.parent[v]).filter(|&p| p != NO_PARENT)
    }

    pub fn parents(&self) -> &[NodeId] {
        &self.parent
    }

    /// Hop distance from the root, `None` outside the tree.
    pub fn depth(&self, v: NodeId) -> Option<usize> {
        Some(self.depth[v]).filter(|&d| d != UNREACHABLE)
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    /// Tree nodes breadth first from the root.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Depth of the deepest node, i.e. the root's eccentricity in the tree.
    pub fn height(&self) -> usize {
        self.order.last().map_or(0, |&v| self.depth[v])
    }

    /// Node count at each depth `0..=height`.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.height() + 1];
        for &v in &self.order {
            sizes[self.depth[v]] += 1;
        }
        sizes
    }

    /// Nodes on the root path of `v`, from the root down to `v`.
    pub fn path_from_root(&self, v: NodeId) -> Vec<NodeId> {
        let mut path = Vec::new();
        let mut node = v;
        while node != NO_PARENT {
            path.push(node);
            node = self.parent[node];
        }
        path.reverse();
        path
    }

    /// `(parent, child)` pairs in breadth-first order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.order.iter().skip(1).map(|&c| (self.parent[c], c))
    }

    /// The tree as a network over the same id space.
    pub fn to_network(&self) -> Network {
        Network::from_edges(self.node_count(), self.edges())
            .expect("tree edges are simple")
    }
}

/// BFS tree of the root's component; neighbors are explored in ascending id
/// order, so ties between equally short parents go to the smaller id.
pub fn bfs_spanning_tree(net: &Network, root: NodeId) -> Result<TreeView> {
    net.check_node(root)?;
    let n = net.node_count();
    let mut parent = vec![NO_PARENT; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &w in net.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    TreeView::from_parents(root, parent)
}
