//! The dominant infection strategy: the largest infection that still keeps
//! the Jordan center a prescribed number of hops away from the source.
//!
//! The source spreads at full speed along one dominant path of length
//! `d̄(t)` and throttles the side branches hanging off the first `d_s + 1`
//! path nodes so that they stop short. The branch at path node `u_m`
//! reaches depth `h_m = d̄ − 2 d_s + m` for `m <= d_s` and `d̄ − m`
//! afterwards, which puts the center of the infected tree at `u_{d_s}`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{NodeId, TreeView};
use crate::rational::{self, Rational};
use crate::spread::{lambda_max_strategy, EdgeRate, InfectionStrategy, RateBounds};

/// Largest safety margin any strategy can reach by time `t`.
pub fn max_safety_margin(bounds: &RateBounds, t: &Rational) -> Result<usize> {
    Ok(bounds.horizon_hops(t)? / 2)
}

/// Root path `u_0 .. u_{d̄}` with its accumulated edge weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominantPath {
    pub nodes: Vec<NodeId>,
    pub weight: usize,
}

impl DominantPath {
    pub fn end(&self) -> NodeId {
        *self.nodes.last().expect("path contains the source")
    }
}

/// Throttling parameters for the branch hanging off path node `u_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthParams {
    pub m: usize,
    /// Time at which `u_m` is infected.
    pub t_m: Rational,
    /// Depth reached inside the branch.
    pub h_m: usize,
    /// Average rate needed to cover `h_m` hops in the remaining time;
    /// only defined while the branch is throttled (`m <= d_s`).
    pub lambda_m: Option<Rational>,
    /// Hop offsets `j` whose edges are slowed by `delta`.
    pub a_m: Vec<usize>,
    /// Root of the slowdown equation, as solved numerically.
    pub delta: f64,
    /// The rational slowdown actually applied to the edges.
    pub delta_applied: Rational,
}

/// Everything needed to realize one dominant infection strategy.
#[derive(Debug, Clone)]
pub struct DisPlan {
    pub d_s: usize,
    pub t: Rational,
    pub horizon: usize,
    pub path: DominantPath,
    pub depths: Vec<DepthParams>,
    pub strategy: InfectionStrategy,
    infected: Vec<NodeId>,
}

impl DisPlan {
    /// Infected nodes at the horizon, ascending, decided by the depth caps.
    pub fn infected(&self) -> &[NodeId] {
        &self.infected
    }

    /// One-line summary `d_t,d_s,t,infected_count,path_weight`.
    pub fn summary(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.horizon,
            self.d_s,
            rational::format(&self.t),
            self.infected.len(),
            self.path.weight
        )
    }
}

/// Number of nodes the plan infects by its horizon, counted from the depth
/// caps alone.
pub fn dis_size(plan: &DisPlan) -> usize {
    plan.infected.len()
}

/// Depth reached by the branch at path index `m`.
fn depth_cap(horizon: usize, d_s: usize, m: usize) -> usize {
    if m <= d_s {
        horizon - 2 * d_s + m
    } else {
        horizon - m
    }
}

/// `within(x, k)`: nodes of the subtree below `x` at most `k` hops down,
/// for `k <= max_k`.
struct LevelCounts {
    max_k: usize,
    within: Vec<usize>,
}

impl LevelCounts {
    fn new(tree: &TreeView, max_k: usize) -> Self {
        let width = max_k + 1;
        let mut exact = vec![0usize; tree.node_count() * width];
        for &x in tree.order().iter().rev() {
            exact[x * width] = 1;
            for &c in tree.children(x) {
                for k in 1..width {
                    exact[x * width + k] += exact[c * width + k - 1];
                }
            }
        }
        for x in 0..tree.node_count() {
            for k in 1..width {
                exact[x * width + k] += exact[x * width + k - 1];
            }
        }
        LevelCounts { max_k, within: exact }
    }

    fn within(&self, x: NodeId, k: usize) -> usize {
        self.within[x * (self.max_k + 1) + k.min(self.max_k)]
    }

    /// `u` plus the nodes of its branch (children other than `next`) within
    /// `h` hops.
    fn edge_weight(&self, u: NodeId, next: NodeId, h: usize) -> usize {
        if h == 0 {
            1
        } else {
            self.within(u, h) - self.within(next, h - 1)
        }
    }
}

fn check_preconditions(tree: &TreeView, bounds: &RateBounds, t: &Rational, d_s: usize) -> Result<usize> {
    let horizon = bounds.horizon_hops(t)?;
    if d_s > horizon / 2 {
        return Err(Error::InfeasibleMargin {
            requested: d_s,
            max: horizon / 2,
            horizon,
        });
    }
    if tree.height() < horizon {
        return Err(Error::EccentricityTooSmall {
            eccentricity: tree.height(),
            horizon,
        });
    }
    Ok(horizon)
}

/// Path scores for every node at depth `<= horizon`: the summed weights of
/// the root path leading to it.
fn path_scores(tree: &TreeView, counts: &LevelCounts, horizon: usize, d_s: usize) -> Vec<usize> {
    let mut score = vec![0usize; tree.node_count()];
    for &u in tree.order() {
        let m = tree.depths()[u];
        if m >= horizon {
            break;
        }
        let h = depth_cap(horizon, d_s, m);
        for &c in tree.children(u) {
            score[c] = score[u] + counts.edge_weight(u, c, h);
        }
    }
    score
}

fn best_endpoints(tree: &TreeView, score: &[usize], horizon: usize) -> Vec<NodeId> {
    let ends = tree.order().iter().copied().filter(|&v| tree.depths()[v] == horizon);
    let best = ends.clone().map(|v| score[v]).max().unwrap_or(0);
    ends.filter(|&v| score[v] == best).collect()
}

/// Maximal-weight root path of length `d̄(t)`. Ties go to the
/// lexicographically smallest node sequence.
pub fn find_dominant_path(
    tree: &TreeView,
    bounds: &RateBounds,
    t: &Rational,
    d_s: usize,
) -> Result<DominantPath> {
    Ok(dominant_path_ties(tree, bounds, t, d_s)?.swap_remove(0))
}

/// Every maximal-weight root path, in lexicographic order.
pub fn dominant_path_ties(
    tree: &TreeView,
    bounds: &RateBounds,
    t: &Rational,
    d_s: usize,
) -> Result<Vec<DominantPath>> {
    let horizon = check_preconditions(tree, bounds, t, d_s)?;
    let counts = LevelCounts::new(tree, horizon);
    let score = path_scores(tree, &counts, horizon, d_s);
    Ok(best_endpoints(tree, &score, horizon)
        .into_iter()
        .map(|end| DominantPath {
            nodes: tree.path_from_root(end),
            weight: score[end],
        })
        .collect())
}

/// Size of the best dominant strategy with horizon `horizon` hops, from
/// precomputed counts. Used by the observation-time search.
fn best_size(tree: &TreeView, counts: &LevelCounts, horizon: usize, d_s: usize) -> usize {
    let score = path_scores(tree, counts, horizon, d_s);
    let ends = best_endpoints(tree, &score, horizon);
    score[ends[0]] + 1
}

/// Solution of the branch slowdown equation at path index `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSolution {
    pub lambda_m: Rational,
    pub a_m: Vec<usize>,
    pub delta: f64,
    /// `Some` when the root is rational (all slowed bounds equal).
    pub exact: Option<Rational>,
}

/// Finds `δ` with `Σ_{j∈A_m} 1/(λ̄_{m+j} − δ) = t − t_m − Σ_{j∉A_m} 1/λ̄_{m+j}`
/// over offsets `j < h_m`, where `A_m` holds the offsets whose bound
/// exceeds the average rate `λ_m = h_m / (t − t_m)`.
pub fn solve_delta(bounds: &RateBounds, t: &Rational, m: usize, h_m: usize) -> Result<DeltaSolution> {
    let t_m = bounds.prefix_time(m);
    let remaining = t - &t_m;
    if !remaining.is_positive() {
        return Err(Error::Internal(format!("no time left at path index {m}")));
    }
    let lambda_m = Rational::from_integer(h_m.into()) / &remaining;
    let a_m: Vec<usize> = (0..h_m).filter(|&j| *bounds.bound(m + j) > lambda_m).collect();
    if a_m.is_empty() {
        return Ok(DeltaSolution {
            lambda_m,
            a_m,
            delta: 0.0,
            exact: Some(Rational::zero()),
        });
    }
    let budget: Rational = remaining
        - (0..h_m)
            .filter(|j| !a_m.contains(j))
            .map(|j| bounds.bound(m + j).recip())
            .sum::<Rational>();
    if !budget.is_positive() {
        return Err(Error::Internal(format!(
            "slowdown budget at path index {m} is {}",
            rational::format(&budget)
        )));
    }
    let slowed: Vec<&Rational> = a_m.iter().map(|&j| bounds.bound(m + j)).collect();
    let exact = slowed.iter().all(|b| *b == slowed[0]).then(|| {
        slowed[0] - Rational::from_integer(a_m.len().into()) / &budget
    });
    let delta = match &exact {
        Some(d) => rational::to_f64(d),
        None => bisect_delta(
            &slowed.iter().map(|b| rational::to_f64(b)).collect::<Vec<_>>(),
            rational::to_f64(&budget),
        ),
    };
    Ok(DeltaSolution {
        lambda_m,
        a_m,
        delta,
        exact,
    })
}

/// Root of the increasing function `Σ 1/(b − δ) − budget` on `[0, min b)`.
fn bisect_delta(slowed: &[f64], budget: f64) -> f64 {
    let lhs = |d: f64| slowed.iter().map(|b| 1.0 / (b - d)).sum::<f64>();
    let mut lo = 0.0;
    let mut hi = slowed.iter().copied().fold(f64::INFINITY, f64::min);
    if lhs(lo) >= budget {
        return 0.0;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lhs(mid) < budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Residual `Σ 1/(b − δ) − budget` of the slowdown equation, in floats.
pub fn delta_residual(bounds: &RateBounds, t: &Rational, m: usize, h_m: usize, delta: f64) -> f64 {
    let remaining = rational::to_f64(&(t - bounds.prefix_time(m)));
    let lambda_m = h_m as f64 / remaining;
    let mut lhs = 0.0;
    let mut budget = remaining;
    for j in 0..h_m {
        let b = rational::to_f64(bounds.bound(m + j));
        if b > lambda_m {
            lhs += 1.0 / (b - delta);
        } else {
            budget -= 1.0 / b;
        }
    }
    lhs - budget
}

/// A rational slowdown no larger than the float root for which the
/// throttled branch still reaches depth `h_m` by `t`.
fn rational_delta(
    bounds: &RateBounds,
    t: &Rational,
    m: usize,
    h_m: usize,
    sol: &DeltaSolution,
) -> Result<Rational> {
    if let Some(exact) = &sol.exact {
        return Ok(exact.clone());
    }
    let t_m = bounds.prefix_time(m);
    let reach = |d: &Rational| -> Rational {
        &t_m + (0..h_m)
            .map(|j| {
                let b = bounds.bound(m + j);
                if sol.a_m.contains(&j) {
                    (b - d).recip()
                } else {
                    b.recip()
                }
            })
            .sum::<Rational>()
    };
    for bits in [48u32, 40, 32, 24, 16] {
        let d = rational::dyadic_floor(sol.delta, bits);
        if !d.is_negative() && reach(&d) <= *t {
            return Ok(d);
        }
    }
    Ok(Rational::zero())
}

/// Builds the dominant strategy with margin `d_s` on the dominant path
/// found by [`find_dominant_path`]. `d_s = 0` gives the all-maximal strategy.
pub fn build_dis(tree: &TreeView, bounds: &RateBounds, t: &Rational, d_s: usize) -> Result<DisPlan> {
    let path = find_dominant_path(tree, bounds, t, d_s)?;
    build_dis_on_path(tree, bounds, t, d_s, path.end())
}

/// Builds the dominant strategy with margin `d_s` along the root path to
/// `end`, which must sit exactly `d̄(t)` hops below the source.
pub fn build_dis_on_path(
    tree: &TreeView,
    bounds: &RateBounds,
    t: &Rational,
    d_s: usize,
    end: NodeId,
) -> Result<DisPlan> {
    let horizon = check_preconditions(tree, bounds, t, d_s)?;
    if tree.depth(end) != Some(horizon) {
        return Err(Error::param(format!(
            "path end {end} is not {horizon} hops below the source"
        )));
    }
    let nodes = tree.path_from_root(end);
    let counts = LevelCounts::new(tree, horizon);
    let weight = (0..horizon)
        .map(|m| counts.edge_weight(nodes[m], nodes[m + 1], depth_cap(horizon, d_s, m)))
        .sum();
    let path = DominantPath { nodes, weight };

    // Index of the path node each tree node hangs from.
    let mut on_path = vec![usize::MAX; tree.node_count()];
    for (m, &u) in path.nodes.iter().enumerate() {
        on_path[u] = m;
    }
    let mut attach = vec![0usize; tree.node_count()];
    for &v in tree.order() {
        attach[v] = match (on_path[v], tree.parent(v)) {
            (m, _) if m != usize::MAX => m,
            (_, Some(p)) => attach[p],
            (_, None) => 0,
        };
    }

    let mut depths = Vec::with_capacity(horizon);
    for m in 0..horizon {
        let h_m = depth_cap(horizon, d_s, m);
        let t_m = bounds.prefix_time(m);
        let params = if m <= d_s && d_s > 0 && h_m > 0 {
            let sol = solve_delta(bounds, t, m, h_m)?;
            let applied = rational_delta(bounds, t, m, h_m, &sol)?;
            DepthParams {
                m,
                t_m,
                h_m,
                lambda_m: Some(sol.lambda_m),
                a_m: sol.a_m,
                delta: sol.delta,
                delta_applied: applied,
            }
        } else {
            DepthParams {
                m,
                t_m,
                h_m,
                lambda_m: None,
                a_m: Vec::new(),
                delta: 0.0,
                delta_applied: Rational::zero(),
            }
        };
        depths.push(params);
    }

    let strategy = if d_s == 0 {
        lambda_max_strategy(tree, bounds)
    } else {
        let mut rates = vec![EdgeRate::Blocked; tree.node_count()];
        for (p, c) in tree.edges() {
            let depth = tree.depths()[p];
            let bound = bounds.bound(depth);
            let m = attach[p];
            rates[c] = if on_path[c] != usize::MAX || m >= horizon {
                EdgeRate::Rate(bound.clone())
            } else {
                let params = &depths[m];
                let j = depth - m;
                if params.h_m == 0 {
                    EdgeRate::Blocked
                } else if params.a_m.contains(&j) {
                    EdgeRate::Rate(bound - &params.delta_applied)
                } else {
                    EdgeRate::Rate(bound.clone())
                }
            };
        }
        InfectionStrategy::new(tree.clone(), rates)?
    };

    let mut infected: Vec<NodeId> = tree
        .order()
        .iter()
        .copied()
        .filter(|&v| {
            let m = attach[v];
            let j = tree.depths()[v] - m;
            if m >= horizon {
                j == 0
            } else {
                j <= depth_cap(horizon, d_s, m)
            }
        })
        .collect();
    infected.sort_unstable();

    Ok(DisPlan {
        d_s,
        t: t.clone(),
        horizon,
        path,
        depths,
        strategy,
        infected,
    })
}

/// Smallest grid time `t_m` (the instant a full-speed chain covers `m`
/// hops) at which the dominant strategy with margin `d_s` infects at least
/// `n_obs` nodes, with the plan realizing it.
pub fn binary_search_tobs(
    tree: &TreeView,
    bounds: &RateBounds,
    d_s: usize,
    n_obs: usize,
) -> Result<(Rational, DisPlan)> {
    if n_obs < 2 {
        return Err(Error::param("observation threshold must exceed 1"));
    }
    let ecc = tree.height();
    let levels = tree.level_sizes();
    let mut ball = 0;
    let mut x0 = None;
    for (m, size) in levels.iter().enumerate() {
        ball += size;
        if m >= 1 && ball >= n_obs {
            x0 = Some(m);
            break;
        }
    }
    let Some(x0) = x0 else {
        return Err(Error::NetworkTooSmall(format!(
            "{} reachable nodes never reach {n_obs}",
            tree.len()
        )));
    };
    let counts = LevelCounts::new(tree, ecc);
    let size_at = |m: usize| best_size(tree, &counts, m, d_s);
    // Below `lo` the ball is too small or the margin infeasible.
    let mut lo = x0.max(2 * d_s) - 1;
    let mut hi = x0 + 2 * d_s;
    if hi > ecc || size_at(hi) < n_obs {
        // Near the eccentricity the path is forced into deep, possibly
        // thin branches and the count stops being monotone; scan instead.
        hi = (lo + 1..=ecc)
            .find(|&m| size_at(m) >= n_obs)
            .ok_or_else(|| {
                Error::NetworkTooSmall(format!(
                    "margin {d_s} never infects {n_obs} nodes within eccentricity {ecc}"
                ))
            })?;
        lo = hi - 1;
    }
    while lo + 1 < hi {
        let mid = (lo + hi).div_ceil(2);
        if mid < 2 * d_s || size_at(mid) < n_obs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_obs = bounds.prefix_time(hi);
    let plan = build_dis(tree, bounds, &t_obs, d_s)?;
    Ok((t_obs, plan))
}

/// Infected counts on an unbounded `r`-regular tree with unit bounds and
/// integer horizon `t`: `(all maximal, dominant with margin d_s)`.
pub fn regular_tree_counts(r: u32, t: u32, d_s: u32) -> Result<(u128, u128)> {
    if r <= 2 {
        return Err(Error::param("closed forms need degree above 2"));
    }
    if d_s > t / 2 {
        return Err(Error::InfeasibleMargin {
            requested: d_s as usize,
            max: (t / 2) as usize,
            horizon: t as usize,
        });
    }
    let ball = |radius: u32| -> Result<u128> {
        let r = u128::from(r);
        (r - 1)
            .checked_pow(radius)
            .and_then(|p| p.checked_mul(r))
            .map(|x| (x - 2) / (r - 2))
            .ok_or_else(|| Error::param("closed form overflows"))
    };
    Ok((ball(t)?, ball(t - d_s)?))
}

/// Nodes within `radius` hops of the center of an `r`-regular tree.
pub fn regular_ball_size(r: u32, radius: u32) -> Result<u128> {
    regular_tree_counts(r, radius, 0).map(|(ball, _)| ball)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_spanning_tree, generate_random_tree, generate_regular_tree, Network};
    use crate::rational::{int, ratio};
    use crate::spread::simulate;
    use proptest::prelude::*;

    fn tree_of(net: &Network) -> TreeView {
        bfs_spanning_tree(net, 0).unwrap()
    }

    fn random_tree(n: usize, seed: u64) -> TreeView {
        tree_of(&generate_random_tree(n, &[2, 3], seed).unwrap())
    }

    #[test]
    fn margin_bound() {
        let unit = RateBounds::unit();
        assert_eq!(max_safety_margin(&unit, &int(14)).unwrap(), 7);
        assert_eq!(max_safety_margin(&unit, &ratio(7, 2)).unwrap(), 1);
        assert_eq!(max_safety_margin(&unit, &ratio(1, 2)).unwrap(), 0);
    }

    #[test]
    fn infeasible_margin_is_rejected() {
        let tree = random_tree(3000, 1);
        let err = build_dis(&tree, &RateBounds::unit(), &int(14), 8).unwrap_err();
        assert!(matches!(err, Error::InfeasibleMargin { max: 7, .. }));
        assert!(err.to_string().contains('7'));
    }

    #[test]
    fn shallow_tree_is_rejected() {
        let tree = tree_of(&generate_regular_tree(3, 3).unwrap());
        assert!(matches!(
            build_dis(&tree, &RateBounds::unit(), &int(5), 1),
            Err(Error::EccentricityTooSmall { eccentricity: 3, horizon: 5 })
        ));
    }

    #[test]
    fn path_graph_infects_the_path() {
        let net = crate::graph::tests::path(9);
        let tree = tree_of(&net);
        for d_s in 0..=3 {
            let plan = build_dis(&tree, &RateBounds::unit(), &int(6), d_s).unwrap();
            assert_eq!(dis_size(&plan), 7);
            assert_eq!(plan.path.nodes, (0..7).collect::<Vec<_>>());
            assert_eq!(plan.path.weight, 6);
        }
    }

    #[test]
    fn zero_margin_is_all_maximal() {
        let tree = random_tree(500, 2);
        let plan = build_dis(&tree, &RateBounds::unit(), &int(6), 0).unwrap();
        assert_eq!(plan.strategy, lambda_max_strategy(&tree, &RateBounds::unit()));
        let ball = tree.order().iter().filter(|&&v| tree.depths()[v] <= 6).count();
        assert_eq!(dis_size(&plan), ball);
    }

    #[test]
    fn homogeneous_branch_rate() {
        let tree = random_tree(5000, 3);
        let plan = build_dis(&tree, &RateBounds::unit(), &int(14), 3).unwrap();
        let root = tree.root();
        let off = tree
            .children(root)
            .iter()
            .find(|&&c| c != plan.path.nodes[1])
            .copied()
            .unwrap();
        assert_eq!(plan.strategy.rate_into(off), &EdgeRate::Rate(ratio(4, 7)));
        assert_eq!(plan.depths[0].h_m, 8);
        assert_eq!(plan.depths[0].lambda_m, Some(ratio(4, 7)));
        // Path edges run at the bound.
        for &c in &plan.path.nodes[1..] {
            assert_eq!(plan.strategy.rate_into(c), &EdgeRate::Rate(int(1)));
        }
    }

    #[test]
    fn delta_closed_form_matches_bisection() {
        let unit = RateBounds::unit();
        for (t, m, h) in [(14, 0, 8), (14, 2, 10), (9, 1, 4)] {
            let t = int(t);
            let sol = solve_delta(&unit, &t, m, h).unwrap();
            let lambda = rational::to_f64(&sol.lambda_m);
            assert!((sol.delta - (1.0 - lambda)).abs() <= 1e-12);
            let slowed = vec![1.0; sol.a_m.len()];
            let budget = rational::to_f64(&(&t - unit.prefix_time(m)));
            assert!((bisect_delta(&slowed, budget) - sol.delta).abs() <= 1e-12);
        }
    }

    #[test]
    fn delta_empty_set_is_zero() {
        // One hop in one time unit at bound 1: no slack to remove.
        let sol = solve_delta(&RateBounds::unit(), &int(1), 0, 1).unwrap();
        assert!(sol.a_m.is_empty());
        assert_eq!(sol.delta, 0.0);
    }

    #[test]
    fn delta_residual_heterogeneous() {
        let bounds = RateBounds::parse("1,1,1/2").unwrap();
        let t = int(10);
        // d̄ = 6, margin 1: h_0 = 4.
        let sol = solve_delta(&bounds, &t, 0, 4).unwrap();
        assert!(sol.exact.is_none());
        assert!(sol.delta > 0.0);
        assert!(delta_residual(&bounds, &t, 0, 4, sol.delta).abs() <= 1e-10);
    }

    #[test]
    fn simulation_matches_plan_heterogeneous() {
        let bounds = RateBounds::parse("1,1,1/2,2,1").unwrap();
        for seed in 0..20 {
            let tree = random_tree(2000, seed);
            let t = int(9);
            let horizon = bounds.horizon_hops(&t).unwrap();
            for d_s in 0..=horizon / 2 {
                let plan = build_dis(&tree, &bounds, &t, d_s).unwrap();
                let out = simulate(&plan.strategy, &t, &bounds).unwrap();
                assert_eq!(out.infected, plan.infected(), "seed {seed} d_s {d_s}");
                assert_eq!(out.safety_margin, d_s, "seed {seed} d_s {d_s}");
            }
        }
    }

    #[test]
    fn weight_plus_one_is_the_size() {
        for seed in 0..30 {
            let tree = random_tree(800, seed);
            for d_s in 0..=4 {
                let plan = build_dis(&tree, &RateBounds::unit(), &int(9), d_s).unwrap();
                assert_eq!(plan.path.weight + 1, dis_size(&plan));
            }
        }
    }

    #[test]
    fn isomorphic_branches_pick_smaller_ids() {
        // Two identical brooms under the root: 1 -> 3 -> 5 and 2 -> 4 -> 6.
        let net = Network::from_edges(7, [(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 6)]).unwrap();
        let tree = tree_of(&net);
        let ties = dominant_path_ties(&tree, &RateBounds::unit(), &int(3), 1).unwrap();
        assert_eq!(ties.len(), 2);
        assert_eq!(ties[0].nodes, vec![0, 1, 3, 5]);
        let path = find_dominant_path(&tree, &RateBounds::unit(), &int(3), 1).unwrap();
        assert_eq!(path, ties[0]);
    }

    #[test]
    fn tie_set_members_have_equal_size() {
        let tree = tree_of(&generate_regular_tree(3, 8).unwrap());
        let ties = dominant_path_ties(&tree, &RateBounds::unit(), &int(8), 2).unwrap();
        assert!(ties.len() > 1);
        let sizes: Vec<usize> = ties
            .iter()
            .map(|p| dis_size(&build_dis_on_path(&tree, &RateBounds::unit(), &int(8), 2, p.end()).unwrap()))
            .collect();
        assert!(sizes.iter().all(|&s| s == sizes[0]));
    }

    #[test]
    fn regular_tree_examples() {
        let tree = tree_of(&generate_regular_tree(3, 8).unwrap());
        let plan = build_dis(&tree, &RateBounds::unit(), &int(6), 2).unwrap();
        assert_eq!(dis_size(&plan), 46);
        assert_eq!(regular_tree_counts(3, 4, 0).unwrap(), (46, 46));
        assert_eq!(regular_tree_counts(3, 4, 2).unwrap().1, 10);
        assert_eq!(regular_tree_counts(3, 3, 0).unwrap().0, 22);
        assert!(regular_tree_counts(2, 4, 0).is_err());
        assert!(regular_tree_counts(3, 4, 3).is_err());
    }

    #[test]
    fn tobs_examples() {
        let tree = tree_of(&generate_regular_tree(3, 8).unwrap());
        let unit = RateBounds::unit();
        assert_eq!(binary_search_tobs(&tree, &unit, 0, 46).unwrap().0, int(4));
        assert_eq!(binary_search_tobs(&tree, &unit, 2, 46).unwrap().0, int(6));
        assert_eq!(binary_search_tobs(&tree, &unit, 0, 2).unwrap().0, int(1));
        let slow = RateBounds::parse("1/2").unwrap();
        assert_eq!(binary_search_tobs(&tree, &slow, 0, 2).unwrap().0, int(2));
        assert!(matches!(
            binary_search_tobs(&tree, &unit, 0, 1_000_000),
            Err(Error::NetworkTooSmall(_))
        ));
        assert!(binary_search_tobs(&tree, &unit, 0, 1).is_err());
    }

    /// Independent oracle: try every path end, simulate, keep the largest.
    fn exhaustive_best(tree: &TreeView, t: &Rational, d_s: usize) -> usize {
        let unit = RateBounds::unit();
        let horizon = unit.horizon_hops(t).unwrap();
        tree.order()
            .iter()
            .filter(|&&v| tree.depths()[v] == horizon)
            .map(|&end| {
                let plan = build_dis_on_path(tree, &unit, t, d_s, end).unwrap();
                simulate(&plan.strategy, t, &unit).unwrap().size()
            })
            .max()
            .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dominant_path_is_optimal(seed in 0u64..10_000, n in 12usize..50, t in 2i64..7) {
            let tree = random_tree(n, seed);
            let t = int(t.min(tree.height() as i64));
            for d_s in 0..=max_safety_margin(&RateBounds::unit(), &t).unwrap() {
                let plan = build_dis(&tree, &RateBounds::unit(), &t, d_s).unwrap();
                prop_assert_eq!(dis_size(&plan), exhaustive_best(&tree, &t, d_s));
            }
        }

        #[test]
        fn size_strictly_decreases_with_margin(seed in 0u64..10_000) {
            let tree = random_tree(1500, seed);
            let t = int(10);
            let sizes: Vec<usize> = (0..=5)
                .map(|d| dis_size(&build_dis(&tree, &RateBounds::unit(), &t, d).unwrap()))
                .collect();
            prop_assert!(sizes.windows(2).all(|w| w[0] > w[1]), "{:?}", sizes);
        }

        #[test]
        fn tobs_is_minimal(seed in 0u64..10_000, d_s in 0usize..4, n_obs in 2usize..600) {
            let tree = random_tree(1500, seed);
            let unit = RateBounds::unit();
            let (t_obs, plan) = match binary_search_tobs(&tree, &unit, d_s, n_obs) {
                Ok(found) => found,
                Err(Error::NetworkTooSmall(_)) => {
                    let ecc = tree.height();
                    let top = build_dis(&tree, &unit, &unit.prefix_time(ecc), d_s).unwrap();
                    prop_assert!(dis_size(&top) < n_obs);
                    return Ok(());
                }
                Err(e) => panic!("{e}"),
            };
            prop_assert!(dis_size(&plan) >= n_obs);
            let k = unit.horizon_hops(&t_obs).unwrap();
            if k > 2 * d_s {
                let prev = build_dis(&tree, &unit, &unit.prefix_time(k - 1), d_s).unwrap();
                prop_assert!(dis_size(&prev) < n_obs);
            }
        }
    }
}
