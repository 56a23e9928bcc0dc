//! Seeded Monte Carlo studies: dominant strategy versus adaptive diffusion,
//! best-response curves under cost regimes, and utilities under partial
//! observation of the infected set.
//!
//! Run `i` uses seed `base_seed + i` and nothing else, so any row can be
//! replayed on its own. Runs execute in parallel and are collected in run
//! order.

mod observe;

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ad::ad_infect;
use crate::dis::{binary_search_tobs, build_dis, dis_size, max_safety_margin};
use crate::error::{Error, Result};
use crate::game::{
    admin_utility, best_response_admin, best_response_source, source_utility, GameConfig,
    SourceMenu, Snapshot,
};
use crate::graph::{
    bfs_spanning_tree, distance_to_set, generate_random_tree, generate_regular_tree,
    generate_scale_free, jordan_centers, Network, NodeId, TreeView,
};
use crate::rational::{self, int};
use crate::spread::RateBounds;

pub use observe::{observe_subset, Observation};

/// Where run instances come from.
#[derive(Debug, Clone)]
pub enum NetworkFamily {
    /// Breadth-first grown random tree with source at the root.
    RandomTree { n: usize, degrees: Vec<usize> },
    /// Preferential attachment graph with a random source.
    ScaleFree { n: usize, m: usize },
    /// Truncated regular tree with source at the root.
    RegularTree { r: usize, depth: usize },
    /// A fixed network with a random source.
    Fixed { name: String, network: Arc<Network> },
}

impl NetworkFamily {
    pub fn name(&self) -> String {
        match self {
            NetworkFamily::RandomTree { .. } => "random_tree".into(),
            NetworkFamily::ScaleFree { .. } => "scale_free".into(),
            NetworkFamily::RegularTree { r, .. } => format!("regular_tree_{r}"),
            NetworkFamily::Fixed { name, .. } => name.clone(),
        }
    }
}

/// One drawn network with its source and spreading tree.
#[derive(Debug, Clone)]
pub struct Instance {
    pub network: Arc<Network>,
    pub tree: TreeView,
    pub source: NodeId,
    /// Draws rejected because the source could not reach the horizon.
    pub redraws: usize,
}

const MAX_DRAWS: usize = 1000;

/// Draws an instance whose source eccentricity is at least `horizon`.
pub fn draw_instance(family: &NetworkFamily, horizon: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut redraws = 0;
    let too_small = || {
        Error::NetworkTooSmall(format!(
            "no source with eccentricity {horizon} after {MAX_DRAWS} draws"
        ))
    };
    match family {
        NetworkFamily::RandomTree { n, degrees } => {
            for _ in 0..MAX_DRAWS {
                let net = generate_random_tree(*n, degrees, rng.random())?;
                let tree = bfs_spanning_tree(&net, 0)?;
                if tree.height() >= horizon {
                    return Ok(Instance { network: Arc::new(net), tree, source: 0, redraws });
                }
                redraws += 1;
            }
            Err(too_small())
        }
        NetworkFamily::RegularTree { r, depth } => {
            let net = generate_regular_tree(*r, *depth)?;
            let tree = bfs_spanning_tree(&net, 0)?;
            if tree.height() < horizon {
                return Err(too_small());
            }
            Ok(Instance { network: Arc::new(net), tree, source: 0, redraws })
        }
        NetworkFamily::ScaleFree { n, m } => {
            for _ in 0..MAX_DRAWS {
                let net = Arc::new(generate_scale_free(*n, *m, rng.random())?);
                if let Some((source, tree)) = pick_source(&net, horizon, &mut rng, &mut redraws)? {
                    return Ok(Instance { network: net, tree, source, redraws });
                }
            }
            Err(too_small())
        }
        NetworkFamily::Fixed { network, .. } => {
            match pick_source(network, horizon, &mut rng, &mut redraws)? {
                Some((source, tree)) => Ok(Instance { network: network.clone(), tree, source, redraws }),
                None => Err(too_small()),
            }
        }
    }
}

fn pick_source(
    net: &Network,
    horizon: usize,
    rng: &mut ChaCha8Rng,
    redraws: &mut usize,
) -> Result<Option<(NodeId, TreeView)>> {
    for _ in 0..MAX_DRAWS {
        let source = rng.random_range(0..net.node_count());
        let tree = bfs_spanning_tree(net, source)?;
        if tree.height() >= horizon {
            return Ok(Some((source, tree)));
        }
        *redraws += 1;
    }
    Ok(None)
}

/// Parameters shared by all studies. Spreading uses unit rate bounds, so
/// the observation time equals the horizon in hops.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub family: NetworkFamily,
    pub t_obs: usize,
    pub runs: usize,
    pub base_seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub g_s: f64,
    pub c_a: f64,
    /// Source catch costs for the source best-response study.
    pub c_s_regimes: Vec<f64>,
    /// Administrator gains for the administrator best-response study.
    pub g_a_regimes: Vec<f64>,
    /// Catch cost and identification gain for the partial-observation study.
    pub c_s: f64,
    pub g_a: f64,
    /// Observed percentages of the infected set.
    pub alphas: Vec<f64>,
}

impl ExperimentSpec {
    /// Random trees with degrees {2, 3} observed at time 14.
    pub fn random_trees(runs: usize, base_seed: u64) -> Self {
        ExperimentSpec {
            family: NetworkFamily::RandomTree { n: 5000, degrees: vec![2, 3] },
            t_obs: 14,
            runs,
            base_seed,
            workers: 0,
            g_s: 1.0,
            c_a: 1.0,
            c_s_regimes: vec![400.0, 1200.0, 2000.0],
            g_a_regimes: vec![1.0, 50.0, 200.0],
            c_s: 1200.0,
            g_a: 50.0,
            alphas: vec![1.0, 10.0, 50.0],
        }
    }

    /// Preferential attachment graphs with two links per node observed at
    /// time 6.
    pub fn scale_free(n: usize, runs: usize, base_seed: u64) -> Self {
        ExperimentSpec {
            family: NetworkFamily::ScaleFree { n, m: 2 },
            t_obs: 6,
            c_s: 6000.0,
            g_a: 1500.0,
            ..Self::random_trees(runs, base_seed)
        }
    }

    /// Applies flat `key = value` overrides. Keys: `family` (tree | ba),
    /// `n`, `m`, `degrees`, `t_obs`, `runs`, `seed`, `workers`, `g_s`,
    /// `c_a`, `c_s`, `g_a`, and the comma-separated lists `c_s_regimes`,
    /// `g_a_regimes`, `alphas`. `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::param(format!("`{v}` is not a valid value for `{key}`")))
        }
        fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
            v.split(',').map(|x| num(key, x.trim())).collect()
        }
        let mut family: Option<String> = None;
        let (mut n, mut m, mut degrees) = (None, None, None);
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, v) = line
                .split_once('=')
                .or_else(|| line.split_once(char::is_whitespace))
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Parse { line: index + 1, msg: "expected `key = value`".into() })?;
            match key {
                "family" => family = Some(v.to_string()),
                "n" => n = Some(num(key, v)?),
                "m" => m = Some(num(key, v)?),
                "degrees" => degrees = Some(list(key, v)?),
                "t_obs" => self.t_obs = num(key, v)?,
                "runs" => self.runs = num(key, v)?,
                "seed" => self.base_seed = num(key, v)?,
                "workers" => self.workers = num(key, v)?,
                "g_s" => self.g_s = num(key, v)?,
                "c_a" => self.c_a = num(key, v)?,
                "c_s" => self.c_s = num(key, v)?,
                "g_a" => self.g_a = num(key, v)?,
                "c_s_regimes" => self.c_s_regimes = list(key, v)?,
                "g_a_regimes" => self.g_a_regimes = list(key, v)?,
                "alphas" => self.alphas = list(key, v)?,
                _ => return Err(Error::param(format!("unknown experiment key `{key}`"))),
            }
        }
        let family = family.or_else(|| match self.family {
            NetworkFamily::RandomTree { .. } => Some("tree".into()),
            NetworkFamily::ScaleFree { .. } => Some("ba".into()),
            _ => None,
        });
        match (family.as_deref(), &self.family) {
            (Some("tree"), current) => {
                let (n0, d0) = match current {
                    NetworkFamily::RandomTree { n, degrees } => (*n, degrees.clone()),
                    _ => (5000, vec![2, 3]),
                };
                self.family = NetworkFamily::RandomTree { n: n.unwrap_or(n0), degrees: degrees.unwrap_or(d0) };
            }
            (Some("ba"), current) => {
                let (n0, m0) = match current {
                    NetworkFamily::ScaleFree { n, m } => (*n, *m),
                    _ => (5000, 2),
                };
                self.family = NetworkFamily::ScaleFree { n: n.unwrap_or(n0), m: m.unwrap_or(m0) };
            }
            (Some(other), _) => return Err(Error::param(format!("unknown family `{other}`"))),
            (None, _) if n.is_some() || m.is_some() || degrees.is_some() => {
                return Err(Error::param("size keys only apply to generated families"))
            }
            (None, _) => {}
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::param("run count must be at least 1"));
        }
        if self.alphas.iter().any(|a| !(*a > 0.0 && *a <= 100.0)) {
            return Err(Error::param("observed percentages must lie in (0, 100]"));
        }
        Ok(())
    }

    fn bounds(&self) -> RateBounds {
        RateBounds::unit()
    }

    fn largest_margin(&self) -> usize {
        self.t_obs / 2
    }

    fn config(&self, c_s: f64, g_a: f64) -> Result<GameConfig> {
        GameConfig::linear(self.g_s, c_s, g_a, self.c_a)
    }

    /// Runs `one` for every seed in parallel, keeping run order.
    fn run_all<T: Send>(&self, one: impl Fn(u64) -> Result<Vec<T>> + Sync) -> Result<Vec<T>> {
        self.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        let per_run: Vec<Vec<T>> = pool.install(|| {
            (0..self.runs as u64)
                .into_par_iter()
                .map(|i| one(self.base_seed.wrapping_add(i)))
                .collect::<Result<_>>()
        })?;
        Ok(per_run.into_iter().flatten().collect())
    }
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, count) = values.into_iter().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Writes rows as CSV with a header.
pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Dominant strategy versus adaptive diffusion.

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisAdRecord {
    pub seed: u64,
    pub network: String,
    pub d_s: usize,
    pub dis_infected: usize,
    pub dis_margin: usize,
    pub ad_infected: usize,
    pub ad_center: NodeId,
    pub ad_margin: usize,
    pub redraws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisAdSummary {
    pub network: String,
    pub d_s: usize,
    pub runs: usize,
    pub dis_mean: f64,
    pub ad_mean: f64,
}

#[derive(Debug, Clone)]
pub struct DisAdReport {
    pub records: Vec<DisAdRecord>,
    pub summary: Vec<DisAdSummary>,
}

/// One run of the comparison for every margin in `1..=t_obs/2`.
pub fn dis_vs_ad_run(spec: &ExperimentSpec, seed: u64) -> Result<Vec<DisAdRecord>> {
    if !spec.t_obs.is_multiple_of(2) || spec.t_obs < 2 {
        return Err(Error::param("the comparison needs an even observation time of at least 2"));
    }
    let inst = draw_instance(&spec.family, spec.t_obs, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_ad00);
    let net = &inst.network;
    let t = int(spec.t_obs as i64);
    (1..=spec.largest_margin())
        .map(|d_s| {
            let plan = build_dis(&inst.tree, &spec.bounds(), &t, d_s)?;
            let centers = jordan_centers(net, plan.infected())?;
            let dis_margin = distance_to_set(net, inst.source, &centers)?;
            let ad = ad_infect(net, inst.source, spec.t_obs, d_s, rng.random())?;
            let ad_centers = jordan_centers(net, &ad.infected)?;
            Ok(DisAdRecord {
                seed,
                network: spec.family.name(),
                d_s,
                dis_infected: dis_size(&plan),
                dis_margin,
                ad_infected: ad.size(),
                ad_center: ad.center,
                ad_margin: distance_to_set(net, inst.source, &ad_centers)?,
                redraws: inst.redraws,
            })
        })
        .collect()
}

pub fn run_dis_vs_ad(spec: &ExperimentSpec) -> Result<DisAdReport> {
    let records = spec.run_all(|seed| dis_vs_ad_run(spec, seed))?;
    let summary = (1..=spec.largest_margin())
        .map(|d_s| {
            let rows: Vec<&DisAdRecord> = records.iter().filter(|r| r.d_s == d_s).collect();
            DisAdSummary {
                network: spec.family.name(),
                d_s,
                runs: rows.len(),
                dis_mean: mean(rows.iter().map(|r| r.dis_infected as f64)),
                ad_mean: mean(rows.iter().map(|r| r.ad_infected as f64)),
            }
        })
        .collect();
    Ok(DisAdReport { records, summary })
}

// ---------------------------------------------------------------------------
// Game studies share one row layout.

/// One realized play. Utilities recompute from the row alone:
/// `u_s = g_s * infected - c_s * caught` and
/// `u_a = g_a * caught - c_a * suspect`, where
/// `caught = observed_distance <= d_a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub study: &'static str,
    pub regime: usize,
    pub seed: u64,
    pub network: String,
    pub t_obs: String,
    pub d_s: usize,
    pub d_a: usize,
    pub alpha: f64,
    pub infected: usize,
    pub margin: usize,
    pub observed_distance: usize,
    pub suspect: usize,
    pub g_s: f64,
    pub c_s: f64,
    pub g_a: f64,
    pub c_a: f64,
    pub u_s: f64,
    pub u_a: f64,
    /// Strategy label of the source, `L<d_s>`.
    pub label: String,
    /// Whether this row's choice is among the exhaustive best responses.
    pub best: bool,
}

impl RunRecord {
    pub fn caught(&self) -> bool {
        self.observed_distance <= self.d_a
    }

    /// Utilities recomputed from the row's own fields.
    pub fn recomputed(&self) -> (f64, f64) {
        let caught = f64::from(u8::from(self.caught()));
        (
            self.g_s * self.infected as f64 - self.c_s * caught,
            self.g_a * caught - self.c_a * self.suspect as f64,
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn game_record(
    study: &'static str,
    regime: usize,
    seed: u64,
    spec: &ExperimentSpec,
    t_obs: &rational::Rational,
    cfg: &GameConfig,
    d_s: usize,
    d_a: usize,
    alpha: f64,
    snap: &Snapshot,
    best: bool,
) -> RunRecord {
    RunRecord {
        study,
        regime,
        seed,
        network: spec.family.name(),
        t_obs: rational::format(t_obs),
        d_s,
        d_a,
        alpha,
        infected: snap.size,
        margin: d_s,
        observed_distance: snap.margin,
        suspect: snap.suspect_size(d_a),
        g_s: cfg.g_s,
        c_s: cfg.c_s.eval(d_a),
        g_a: cfg.g_a.eval(d_a),
        c_a: spec.c_a,
        u_s: source_utility(cfg, d_a, snap),
        u_a: admin_utility(cfg, d_a, snap),
        label: format!("L{d_s}"),
        best,
    }
}

/// Best-response curve point for the source: mean utilities of growing at
/// full speed (`L0`) and of stepping just outside the radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceSummary {
    pub regime: usize,
    pub c_s: f64,
    pub d_a: usize,
    pub mean_fast: f64,
    /// Mean utility of margin `d_a + 1`; absent past the largest margin.
    pub mean_evasive: Option<f64>,
    /// Margin with the larger mean utility (ties to the smaller).
    pub chosen: usize,
    /// Share of runs whose own best response was the evasive margin.
    pub evasive_share: f64,
}

#[derive(Debug, Clone)]
pub struct SourceReport {
    pub records: Vec<RunRecord>,
    pub summary: Vec<SourceSummary>,
}

/// One run of the source study: for each regime and radius, the two
/// candidate margins.
pub fn source_run(spec: &ExperimentSpec, seed: u64) -> Result<Vec<RunRecord>> {
    let inst = draw_instance(&spec.family, spec.t_obs, seed)?;
    let t = int(spec.t_obs as i64);
    let menu = SourceMenu::build(&inst.tree, &inst.network, &spec.bounds(), &t, seed)?;
    let top = menu.max_margin();
    let mut rows = Vec::new();
    for (regime, &c_s) in spec.c_s_regimes.iter().enumerate() {
        let cfg = spec.config(c_s, 0.0)?;
        for d_a in 0..=top {
            let best = best_response_source(&cfg, d_a, &menu);
            // Ties go to the smaller margin.
            for k in [0, d_a + 1].into_iter().filter(|&k| k <= top) {
                let choice = best[0] == k;
                rows.push(game_record("source", regime, seed, spec, &t, &cfg, k, d_a, 100.0, &menu.options[k], choice));
            }
        }
    }
    Ok(rows)
}

pub fn run_best_response_source(spec: &ExperimentSpec) -> Result<SourceReport> {
    let records = spec.run_all(|seed| source_run(spec, seed))?;
    let top = spec.largest_margin();
    let mut summary = Vec::new();
    for (regime, &c_s) in spec.c_s_regimes.iter().enumerate() {
        for d_a in 0..=top {
            let rows: Vec<&RunRecord> =
                records.iter().filter(|r| r.regime == regime && r.d_a == d_a).collect();
            let mean_fast = mean(rows.iter().filter(|r| r.d_s == 0).map(|r| r.u_s));
            let evasive: Vec<&&RunRecord> = rows.iter().filter(|r| r.d_s == d_a + 1).collect();
            let mean_evasive = (!evasive.is_empty()).then(|| mean(evasive.iter().map(|r| r.u_s)));
            let chosen = match mean_evasive {
                Some(m) if m > mean_fast => d_a + 1,
                _ => 0,
            };
            let evasive_share = if evasive.is_empty() {
                0.0
            } else {
                evasive.iter().filter(|r| r.best).count() as f64 / evasive.len() as f64
            };
            summary.push(SourceSummary { regime, c_s, d_a, mean_fast, mean_evasive, chosen, evasive_share });
        }
    }
    Ok(SourceReport { records, summary })
}

/// Best-response curve point for the administrator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdminSummary {
    pub regime: usize,
    pub g_a: f64,
    pub d_s: usize,
    pub mean_zero: f64,
    pub mean_full: f64,
    /// Radius with the larger mean utility, 0 or `d_s` (ties to 0).
    pub chosen: usize,
    /// Share of runs whose own best response was `d_s`.
    pub full_share: f64,
}

#[derive(Debug, Clone)]
pub struct AdminReport {
    pub records: Vec<RunRecord>,
    pub summary: Vec<AdminSummary>,
}

/// One run of the administrator study. The observation threshold for each
/// margin is the size the dominant strategy reaches at `t_obs`, and the
/// snapshot is taken at the time the threshold search returns.
pub fn admin_run(spec: &ExperimentSpec, seed: u64) -> Result<Vec<RunRecord>> {
    let inst = draw_instance(&spec.family, spec.t_obs, seed)?;
    let bounds = spec.bounds();
    let t = int(spec.t_obs as i64);
    let mut rows = Vec::new();
    for d_s in 1..=max_safety_margin(&bounds, &t)? {
        let n_obs = dis_size(&build_dis(&inst.tree, &bounds, &t, d_s)?);
        let (t_found, plan) = binary_search_tobs(&inst.tree, &bounds, d_s, n_obs)?;
        let snap = Snapshot::measure(&inst.network, plan.infected(), inst.source, seed)?;
        for (regime, &g_a) in spec.g_a_regimes.iter().enumerate() {
            let cfg = spec.config(0.0, g_a)?;
            let best = best_response_admin(&cfg, &snap);
            for d_a in [0, d_s] {
                rows.push(game_record("admin", regime, seed, spec, &t_found, &cfg, d_s, d_a, 100.0, &snap, best[0] == d_a));
            }
        }
    }
    Ok(rows)
}

pub fn run_best_response_admin(spec: &ExperimentSpec) -> Result<AdminReport> {
    let records = spec.run_all(|seed| admin_run(spec, seed))?;
    let mut summary = Vec::new();
    for (regime, &g_a) in spec.g_a_regimes.iter().enumerate() {
        for d_s in 1..=spec.largest_margin() {
            let rows: Vec<&RunRecord> =
                records.iter().filter(|r| r.regime == regime && r.d_s == d_s).collect();
            let mean_zero = mean(rows.iter().filter(|r| r.d_a == 0).map(|r| r.u_a));
            let full: Vec<&&RunRecord> = rows.iter().filter(|r| r.d_a == d_s).collect();
            let mean_full = mean(full.iter().map(|r| r.u_a));
            let chosen = if mean_full > mean_zero { d_s } else { 0 };
            let full_share = full.iter().filter(|r| r.best).count() as f64 / full.len().max(1) as f64;
            summary.push(AdminSummary { regime, g_a, d_s, mean_zero, mean_full, chosen, full_share });
        }
    }
    Ok(AdminReport { records, summary })
}

// ---------------------------------------------------------------------------
// Partial observation.

/// Mean realized utilities at one `(alpha, d_s, d_a)` grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncompleteCell {
    pub alpha: f64,
    pub d_s: usize,
    pub d_a: usize,
    pub runs: usize,
    pub mean_u_s: f64,
    pub mean_u_a: f64,
}

#[derive(Debug, Clone)]
pub struct IncompleteReport {
    pub largest_margin: usize,
    pub records: Vec<RunRecord>,
    pub cells: Vec<IncompleteCell>,
}

impl IncompleteReport {
    fn cell(&self, alpha: f64, d_s: usize, d_a: usize) -> &IncompleteCell {
        self.cells
            .iter()
            .find(|c| c.alpha == alpha && c.d_s == d_s && c.d_a == d_a)
            .expect("grid cell exists")
    }

    /// Margin maximizing the source's mean utility against radius `d_a`
    /// (ties to the smaller margin).
    pub fn source_choice(&self, alpha: f64, d_a: usize) -> usize {
        first_argmax((0..=self.largest_margin).map(|d_s| self.cell(alpha, d_s, d_a).mean_u_s))
    }

    /// Radius in `0..=d_s + 1` maximizing the administrator's mean utility
    /// against margin `d_s` (ties to the smaller radius).
    pub fn admin_choice(&self, alpha: f64, d_s: usize) -> usize {
        first_argmax((0..=d_s + 1).map(|d_a| self.cell(alpha, d_s, d_a).mean_u_a))
    }

    /// Grid cells at `alpha` whose choice has the full-observation shape:
    /// the source picks 0 or `d_a + 1` for each `d_a <= d̄_s`, the
    /// administrator picks 0 or `d_s` for each `d_s <= d̄_s`. Returns
    /// `(matching, total)`.
    pub fn shape_agreement(&self, alpha: f64) -> (usize, usize) {
        let top = self.largest_margin;
        let source_ok = (0..=top).filter(|&d_a| {
            let k = self.source_choice(alpha, d_a);
            k == 0 || k == d_a + 1
        });
        let admin_ok = (0..=top).filter(|&d_s| {
            let d = self.admin_choice(alpha, d_s);
            d == 0 || d == d_s
        });
        (source_ok.count() + admin_ok.count(), 2 * (top + 1))
    }
}

fn first_argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// One run of the partial-observation study over margins `0..=d̄_s`,
/// radii `0..=d̄_s + 1` and every observed percentage.
pub fn incomplete_run(spec: &ExperimentSpec, seed: u64) -> Result<Vec<RunRecord>> {
    let inst = draw_instance(&spec.family, spec.t_obs, seed)?;
    let bounds = spec.bounds();
    let t = int(spec.t_obs as i64);
    let top = max_safety_margin(&bounds, &t)?;
    let cfg = spec.config(spec.c_s, spec.g_a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0b5e_7fed);
    let plans = (0..=top)
        .map(|d_s| build_dis(&inst.tree, &bounds, &t, d_s))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for &alpha in &spec.alphas {
        for (d_s, plan) in plans.iter().enumerate() {
            let obs = observe_subset(&inst.network, plan.infected(), inst.source, alpha, rng.random())?;
            for d_a in 0..=top + 1 {
                rows.push(game_record("incomplete", 0, seed, spec, &t, &cfg, d_s, d_a, alpha, &obs.snapshot, false));
            }
        }
    }
    Ok(rows)
}

pub fn run_incomplete_obs(spec: &ExperimentSpec) -> Result<IncompleteReport> {
    let records = spec.run_all(|seed| incomplete_run(spec, seed))?;
    let top = spec.largest_margin();
    let mut cells = Vec::new();
    for &alpha in &spec.alphas {
        for d_s in 0..=top {
            for d_a in 0..=top + 1 {
                let rows: Vec<&RunRecord> = records
                    .iter()
                    .filter(|r| r.alpha == alpha && r.d_s == d_s && r.d_a == d_a)
                    .collect();
                cells.push(IncompleteCell {
                    alpha,
                    d_s,
                    d_a,
                    runs: rows.len(),
                    mean_u_s: mean(rows.iter().map(|r| r.u_s)),
                    mean_u_a: mean(rows.iter().map(|r| r.u_a)),
                });
            }
        }
    }
    Ok(IncompleteReport { largest_margin: top, records, cells })
}
