//! Deterministic rate-bounded spreading on a rooted tree.
//!
//! An infected node infects a susceptible neighbor after the reciprocal of
//! the edge's rate, so the infection time of a node is the sum of
//! reciprocal rates along its root path. Everything here is exact:
//! membership of a node in the infected set is a rational comparison.

use std::collections::HashMap;
use std::io::{Read, Write};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{jordan_centers, Network, NodeId, TreeView};
use crate::rational::{self, Rational};

/// Per-depth maximum rates. An edge whose parent is `m` hops from the
/// source may not exceed bound `m`; depths past the list reuse the last
/// entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateBounds {
    bounds: Vec<Rational>,
}

impl RateBounds {
    pub fn new(bounds: Vec<Rational>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::EmptySet("rate bound list"));
        }
        if bounds.iter().any(|b| *b <= Rational::zero()) {
            return Err(Error::param("rate bounds must be positive"));
        }
        Ok(RateBounds { bounds })
    }

    pub fn homogeneous(bound: Rational) -> Result<Self> {
        Self::new(vec![bound])
    }

    /// Every bound equal to one.
    pub fn unit() -> Self {
        RateBounds {
            bounds: vec![Rational::one()],
        }
    }

    /// Comma-separated rationals, e.g. `1,1/2`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.split(',').map(rational::parse).collect::<Result<_>>()?)
    }

    pub fn bound(&self, depth: usize) -> &Rational {
        &self.bounds[depth.min(self.bounds.len() - 1)]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.bounds
    }

    /// True when every depth shares one bound.
    pub fn is_homogeneous(&self) -> bool {
        self.bounds.iter().all(|b| *b == self.bounds[0])
    }

    /// Time for a maximal-rate chain to cover `hops` edges from the source:
    /// the sum of reciprocal bounds over depths `0..hops`.
    pub fn prefix_time(&self, hops: usize) -> Rational {
        (0..hops).map(|m| self.bound(m).recip()).sum()
    }

    /// Largest `k` with `prefix_time(k) <= t`: how many hops the infection
    /// can possibly travel by time `t`.
    pub fn horizon_hops(&self, t: &Rational) -> Result<usize> {
        if *t < Rational::zero() {
            return Err(Error::param("time must be non-negative"));
        }
        let mut elapsed = Rational::zero();
        let mut k = 0;
        loop {
            elapsed += self.bound(k).recip();
            if elapsed > *t {
                return Ok(k);
            }
            k += 1;
        }
    }
}

/// Rate of one directed tree edge. `Blocked` is the explicit "never
/// infect" marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeRate {
    Rate(Rational),
    Blocked,
}

impl EdgeRate {
    pub fn as_rate(&self) -> Option<&Rational> {
        match self {
            EdgeRate::Rate(r) => Some(r),
            EdgeRate::Blocked => None,
        }
    }
}

/// A rate for every edge of a tree rooted at the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfectionStrategy {
    tree: TreeView,
    // Indexed by child id; entries for the root and off-tree ids are unused.
    rates: Vec<EdgeRate>,
}

impl InfectionStrategy {
    /// `rates[c]` is the rate of the edge into child `c`.
    pub fn new(tree: TreeView, rates: Vec<EdgeRate>) -> Result<Self> {
        if rates.len() != tree.node_count() {
            return Err(Error::param("need one rate slot per node id"));
        }
        for (p, c) in tree.edges() {
            if let EdgeRate::Rate(r) = &rates[c] {
                if *r <= Rational::zero() {
                    return Err(Error::param(format!(
                        "edge {p}->{c} has non-positive rate {}; use the blocked marker",
                        rational::format(r)
                    )));
                }
            }
        }
        Ok(InfectionStrategy { tree, rates })
    }

    /// Builds a strategy from explicit `(parent, child) -> rate` entries;
    /// tree edges without an entry are blocked.
    pub fn from_edge_rates(
        tree: TreeView,
        entries: impl IntoIterator<Item = ((NodeId, NodeId), Rational)>,
    ) -> Result<Self> {
        let mut rates = vec![EdgeRate::Blocked; tree.node_count()];
        for ((p, c), r) in entries {
            if !tree.contains(c) || tree.parent(c) != Some(p) {
                return Err(Error::param(format!("{p}->{c} is not a tree edge")));
            }
            rates[c] = EdgeRate::Rate(r);
        }
        Self::new(tree, rates)
    }

    pub fn source(&self) -> NodeId {
        self.tree.root()
    }

    pub fn tree(&self) -> &TreeView {
        &self.tree
    }

    /// Rate of the edge from `child`'s parent into `child`.
    pub fn rate_into(&self, child: NodeId) -> &EdgeRate {
        &self.rates[child]
    }

    /// `(parent, child, rate)` for every non-blocked edge, breadth first.
    pub fn infectable_edges(&self) -> impl Iterator<Item = (NodeId, NodeId, &Rational)> + '_ {
        self.tree
            .edges()
            .filter_map(|(p, c)| self.rates[c].as_rate().map(|r| (p, c, r)))
    }

    /// Checks `rate <= bound(depth(parent))` on every edge.
    pub fn check_bounds(&self, bounds: &RateBounds) -> Result<()> {
        for (p, c, r) in self.infectable_edges() {
            let bound = bounds.bound(self.tree.depths()[p]);
            if r > bound {
                return Err(Error::RateAboveBound {
                    parent: p,
                    child: c,
                    rate: rational::format(r),
                    bound: rational::format(bound),
                });
            }
        }
        Ok(())
    }

    /// Infection time of every node id: `None` for nodes behind a blocked
    /// edge and for ids outside the tree.
    pub fn infection_times(&self) -> Vec<Option<Rational>> {
        let mut times: Vec<Option<Rational>> = vec![None; self.tree.node_count()];
        times[self.tree.root()] = Some(Rational::zero());
        for (p, c) in self.tree.edges() {
            times[c] = match (&times[p], &self.rates[c]) {
                (Some(tp), EdgeRate::Rate(r)) => Some(tp + r.recip()),
                _ => None,
            };
        }
        times
    }

    /// Infection time of `u` alone (`None` = never).
    pub fn path_infection_time(&self, u: NodeId) -> Result<Option<Rational>> {
        if !self.tree.contains(u) {
            return Err(Error::InvalidNode {
                node: u,
                node_count: self.tree.node_count(),
            });
        }
        let mut total = Rational::zero();
        let path = self.tree.path_from_root(u);
        for &c in &path[1..] {
            match &self.rates[c] {
                EdgeRate::Rate(r) => total += r.recip(),
                EdgeRate::Blocked => return Ok(None),
            }
        }
        Ok(Some(total))
    }
}

/// Every edge at its depth's maximum rate.
pub fn lambda_max_strategy(tree: &TreeView, bounds: &RateBounds) -> InfectionStrategy {
    let mut rates = vec![EdgeRate::Blocked; tree.node_count()];
    for (p, c) in tree.edges() {
        rates[c] = EdgeRate::Rate(bounds.bound(tree.depths()[p]).clone());
    }
    InfectionStrategy::new(tree.clone(), rates).expect("bounds are positive")
}

/// Maximal rates along the root path to `target`, every other edge blocked.
/// With `target` at depth `horizon_hops(t)` this realizes the largest
/// feasible safety margin.
pub fn single_path_strategy(
    tree: &TreeView,
    bounds: &RateBounds,
    target: NodeId,
) -> Result<InfectionStrategy> {
    if !tree.contains(target) {
        return Err(Error::InvalidNode {
            node: target,
            node_count: tree.node_count(),
        });
    }
    let mut rates = vec![EdgeRate::Blocked; tree.node_count()];
    for &c in &tree.path_from_root(target)[1..] {
        let p = tree.parent(c).expect("non-root");
        rates[c] = EdgeRate::Rate(bounds.bound(tree.depths()[p]).clone());
    }
    InfectionStrategy::new(tree.clone(), rates)
}

/// Snapshot of a simulated infection at a fixed horizon.
#[derive(Debug, Clone)]
pub struct InfectionOutcome {
    pub source: NodeId,
    pub horizon: Rational,
    /// Infection time per node id; `None` means never infected.
    pub times: Vec<Option<Rational>>,
    /// Infected nodes, ascending.
    pub infected: Vec<NodeId>,
    /// Tree edges `(parent, child)` between infected nodes; with the
    /// infected nodes they form the infection graph.
    pub infection_edges: Vec<(NodeId, NodeId)>,
    /// Jordan centers of the infected set, measured in the tree.
    pub jordan: Vec<NodeId>,
    /// Hops from the source to the nearest Jordan center.
    pub safety_margin: usize,
}

impl InfectionOutcome {
    pub fn size(&self) -> usize {
        self.infected.len()
    }

    pub fn is_infected(&self, u: NodeId) -> bool {
        self.infected.binary_search(&u).is_ok()
    }

    /// Recomputes Jordan centers and safety margin in another metric, e.g.
    /// the loopy network whose BFS tree carried the infection.
    pub fn measure_on(&self, net: &Network) -> Result<(Vec<NodeId>, usize)> {
        let jordan = jordan_centers(net, &self.infected)?;
        let margin = crate::graph::distance_to_set(net, self.source, &jordan)?;
        Ok((jordan, margin))
    }
}

/// Runs `strategy` up to time `t`. Jordan centers and the safety margin are
/// measured in the strategy's tree.
pub fn simulate(
    strategy: &InfectionStrategy,
    t: &Rational,
    bounds: &RateBounds,
) -> Result<InfectionOutcome> {
    if *t < Rational::zero() {
        return Err(Error::param("time must be non-negative"));
    }
    strategy.check_bounds(bounds)?;
    let tree = strategy.tree();
    let times = strategy.infection_times();
    let infected: Vec<NodeId> = (0..times.len())
        .filter(|&u| times[u].as_ref().is_some_and(|tu| tu <= t))
        .collect();
    let is_infected = |u: NodeId| times[u].as_ref().is_some_and(|tu| tu <= t);
    let infection_edges: Vec<(NodeId, NodeId)> =
        tree.edges().filter(|&(_, c)| is_infected(c)).collect();
    let host = Network::from_edges(tree.node_count(), infection_edges.iter().copied())
        .expect("tree edges are simple");
    // The infected set spans a subtree, so its induced subgraph is a tree
    // as long as no other ids are present; restrict to it explicitly.
    let jordan = infected_subtree_centers(&host, &infected)?;
    let depths = tree.depths();
    let safety_margin = jordan
        .iter()
        .map(|&c| depths[c])
        .min()
        .ok_or_else(|| Error::Internal("no Jordan center".into()))?;
    Ok(InfectionOutcome {
        source: strategy.source(),
        horizon: t.clone(),
        times,
        infected,
        infection_edges,
        jordan,
        safety_margin,
    })
}

fn infected_subtree_centers(host: &Network, infected: &[NodeId]) -> Result<Vec<NodeId>> {
    // Relabel the infected subtree densely so the tree route applies.
    let index: HashMap<NodeId, usize> =
        infected.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let index = &index;
    let edges = infected.iter().flat_map(|&u| {
        host.neighbors(u)
            .iter()
            .filter(move |&&w| u < w)
            .map(move |&w| (index[&u], index[&w]))
    });
    let sub = Network::from_edges(infected.len(), edges)?;
    let all: Vec<usize> = (0..infected.len()).collect();
    Ok(jordan_centers(&sub, &all)?
        .into_iter()
        .map(|i| infected[i])
        .collect())
}

#[derive(Debug, Serialize, Deserialize)]
struct StrategyRow {
    parent: NodeId,
    child: NodeId,
    rate_num: String,
    rate_den: String,
}

/// CSV with header `parent,child,rate_num,rate_den`, one row per
/// infectable edge.
pub fn write_strategy_csv(strategy: &InfectionStrategy, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (parent, child, r) in strategy.infectable_edges() {
        w.serialize(StrategyRow {
            parent,
            child,
            rate_num: r.numer().to_string(),
            rate_den: r.denom().to_string(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a strategy CSV against `tree`; missing edges are blocked.
pub fn read_strategy_csv(tree: TreeView, input: impl Read) -> Result<InfectionStrategy> {
    let mut r = csv::Reader::from_reader(input);
    let mut entries = Vec::new();
    for (i, row) in r.deserialize::<StrategyRow>().enumerate() {
        let row = row?;
        let rate = rational::parse(&format!("{}/{}", row.rate_num, row.rate_den)).map_err(|e| {
            Error::Parse {
                line: i + 2,
                msg: e.to_string(),
            }
        })?;
        entries.push(((row.parent, row.child), rate));
    }
    InfectionStrategy::from_edge_rates(tree, entries)
}

/// CSV with header `node,time_num,time_den,infected`. A node that is never
/// infected gets time `1/0`.
pub fn write_outcome_csv(outcome: &InfectionOutcome, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node", "time_num", "time_den", "infected"])?;
    for (node, time) in outcome.times.iter().enumerate() {
        let (num, den) = match time {
            Some(t) => (t.numer().to_string(), t.denom().to_string()),
            None => ("1".to_string(), "0".to_string()),
        };
        let infected = if outcome.is_infected(node) { "1" } else { "0" };
        w.write_record([node.to_string(), num, den, infected.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, bfs_spanning_tree, generate_random_tree};
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn path_tree(n: usize) -> TreeView {
        let net = Network::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap();
        bfs_spanning_tree(&net, 0).unwrap()
    }

    /// Independent oracle: enumerate k against the prefix sums.
    fn horizon_oracle(bounds: &[Rational], t: &Rational) -> usize {
        let rb = RateBounds::new(bounds.to_vec()).unwrap();
        (0..200).filter(|&k| rb.prefix_time(k) <= *t).max().unwrap()
    }

    #[test]
    fn horizon_examples() {
        let unit = RateBounds::unit();
        assert_eq!(unit.horizon_hops(&ratio(7, 2)).unwrap(), 3);
        assert_eq!(horizon_oracle(&[int(1)], &ratio(7, 2)), 3);
        let slow = RateBounds::new(vec![int(1), ratio(1, 2)]).unwrap();
        assert_eq!(slow.horizon_hops(&int(3)).unwrap(), 2);
        assert_eq!(horizon_oracle(&[int(1), ratio(1, 2)], &int(3)), 2);
        assert_eq!(unit.horizon_hops(&int(0)).unwrap(), 0);
        assert!(unit.horizon_hops(&int(-1)).is_err());
    }

    #[test]
    fn bounds_validation_and_extension() {
        assert!(RateBounds::new(vec![]).is_err());
        assert!(RateBounds::new(vec![int(1), int(0)]).is_err());
        let b = RateBounds::parse("1,1/2").unwrap();
        assert_eq!(*b.bound(7), ratio(1, 2));
        assert_eq!(b.prefix_time(3), int(5));
        assert!(!b.is_homogeneous());
    }

    #[test]
    fn path_times() {
        let tree = path_tree(4);
        let s = lambda_max_strategy(&tree, &RateBounds::unit());
        assert_eq!(s.path_infection_time(3).unwrap(), Some(int(3)));
        assert_eq!(s.path_infection_time(0).unwrap(), Some(int(0)));
        let slow = lambda_max_strategy(&tree, &RateBounds::parse("1,1/2").unwrap());
        assert_eq!(slow.path_infection_time(2).unwrap(), Some(int(3)));
        assert!(s.path_infection_time(9).is_err());
    }

    #[test]
    fn blocked_edges_never_infect() {
        let tree = path_tree(3);
        let s = InfectionStrategy::from_edge_rates(tree, [((0, 1), int(1))]).unwrap();
        assert_eq!(s.path_infection_time(2).unwrap(), None);
        assert_eq!(s.infection_times()[2], None);
    }

    #[test]
    fn simulate_path() {
        let tree = path_tree(5);
        let s = lambda_max_strategy(&tree, &RateBounds::unit());
        let out = simulate(&s, &int(2), &RateBounds::unit()).unwrap();
        assert_eq!(out.infected, vec![0, 1, 2]);
        assert_eq!(out.jordan, vec![1]);
        assert_eq!(out.safety_margin, 1);
        assert_eq!(out.infection_edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn simulate_rejects_rates_above_bounds() {
        let tree = path_tree(3);
        let s = lambda_max_strategy(&tree, &RateBounds::unit());
        let tight = RateBounds::parse("1,1/2").unwrap();
        assert!(matches!(
            simulate(&s, &int(3), &tight),
            Err(Error::RateAboveBound { parent: 1, child: 2, .. })
        ));
    }

    #[test]
    fn zero_rate_must_use_marker() {
        let tree = path_tree(2);
        assert!(InfectionStrategy::from_edge_rates(tree.clone(), [((0, 1), int(0))]).is_err());
        assert!(InfectionStrategy::from_edge_rates(tree, [((1, 0), int(1))]).is_err());
    }

    #[test]
    fn lambda_max_maps_depth_bounds() {
        let tree = path_tree(4);
        let b = RateBounds::parse("1,1/2").unwrap();
        let s = lambda_max_strategy(&tree, &b);
        assert_eq!(s.rate_into(1), &EdgeRate::Rate(int(1)));
        assert_eq!(s.rate_into(2), &EdgeRate::Rate(ratio(1, 2)));
        assert_eq!(s.rate_into(3), &EdgeRate::Rate(ratio(1, 2)));
    }

    #[test]
    fn lambda_max_infects_the_horizon_ball() {
        let bounds = RateBounds::parse("1,1/2,1").unwrap();
        for seed in 0..30 {
            let net = generate_random_tree(300, &[2, 3], seed).unwrap();
            let tree = bfs_spanning_tree(&net, 0).unwrap();
            let s = lambda_max_strategy(&tree, &bounds);
            for t in [int(1), ratio(5, 2), int(4), ratio(13, 2)] {
                let out = simulate(&s, &t, &bounds).unwrap();
                let radius = bounds.horizon_hops(&t).unwrap();
                let d = bfs_distances(&net, 0).unwrap();
                let ball: Vec<_> = (0..net.node_count()).filter(|&v| d[v] <= radius).collect();
                assert_eq!(out.infected, ball);
            }
        }
    }

    #[test]
    fn single_path_reaches_largest_margin() {
        let net = generate_random_tree(400, &[2, 3], 3).unwrap();
        let tree = bfs_spanning_tree(&net, 0).unwrap();
        let bounds = RateBounds::unit();
        let t = int(4);
        let target = *tree.order().iter().find(|&&v| tree.depths()[v] == 4).unwrap();
        let s = single_path_strategy(&tree, &bounds, target).unwrap();
        let out = simulate(&s, &t, &bounds).unwrap();
        assert_eq!(out.size(), 5);
        assert_eq!(out.safety_margin, 2);
    }

    #[test]
    fn outcome_csv_marks_never_infected() {
        let tree = path_tree(3);
        let s = InfectionStrategy::from_edge_rates(tree, [((0, 1), ratio(1, 2))]).unwrap();
        let out = simulate(&s, &int(5), &RateBounds::unit()).unwrap();
        let mut buf = Vec::new();
        write_outcome_csv(&out, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "node,time_num,time_den,infected\n0,0,1,1\n1,2,1,1\n2,1,0,0\n"
        );
    }

    #[test]
    fn strategy_csv_roundtrip() {
        let tree = path_tree(4);
        let s = InfectionStrategy::from_edge_rates(
            tree.clone(),
            [((0, 1), int(1)), ((1, 2), ratio(4, 7))],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_strategy_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("parent,child,rate_num,rate_den\n"));
        assert!(text.contains("1,2,4,7"));
        assert_eq!(read_strategy_csv(tree, &buf[..]).unwrap(), s);
    }

    proptest! {
        #[test]
        fn infected_sets_grow_with_time(seed in 0u64..500, a in 0i64..40, b in 0i64..40) {
            let net = generate_random_tree(80, &[2, 3], seed).unwrap();
            let tree = bfs_spanning_tree(&net, 0).unwrap();
            // Arbitrary bounded rates derived from the seed.
            let bounds = RateBounds::unit();
            let rates = tree
                .edges()
                .map(|(p, c)| ((p, c), ratio(1 + ((seed as i64 + c as i64) % 5), 5)))
                .collect::<Vec<_>>();
            let s = InfectionStrategy::from_edge_rates(tree, rates).unwrap();
            let (lo, hi) = (ratio(a.min(b), 4), ratio(a.max(b), 4));
            let early = simulate(&s, &lo, &bounds).unwrap();
            let late = simulate(&s, &hi, &bounds).unwrap();
            prop_assert!(early.infected.iter().all(|u| late.is_infected(*u)));
        }

        #[test]
        fn horizon_matches_enumeration(num in 0i64..60, den in 1i64..6, slow in 1i64..4) {
            let bounds = vec![int(1), ratio(1, slow), ratio(2, 1)];
            let t = ratio(num, den);
            let rb = RateBounds::new(bounds.clone()).unwrap();
            prop_assert_eq!(rb.horizon_hops(&t).unwrap(), horizon_oracle(&bounds, &t));
        }
    }
}
