//! Utilities, best responses and pure equilibria of the source versus
//! administrator game.
//!
//! The administrator picks an estimation radius `d_a` around a Jordan
//! center of the observed infection and gains when the source lies inside
//! it. The source picks the safety margin of its dominant strategy, trading
//! infection size against the risk of being caught.

use std::collections::HashMap;
use std::io::Write;

use crate::dis::{build_dis, max_safety_margin};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, distance_to_set, jordan_centers, Network, NodeId, TreeView};
use crate::rational::Rational;
use crate::spread::RateBounds;

/// Utilities within this distance count as tied.
pub const TIE_EPS: f64 = 1e-9;

/// A cost or gain as a function of one non-negative integer argument.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Constant(f64),
    /// `coefficient * x`.
    Linear(f64),
    /// `values[x]`, the last entry repeating past the end.
    Table(Vec<f64>),
}

impl Schedule {
    pub fn eval(&self, x: usize) -> f64 {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::Linear(k) => k * x as f64,
            Schedule::Table(values) => values[x.min(values.len() - 1)],
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Schedule::Constant(_) => "constant",
            Schedule::Linear(_) => "linear",
            Schedule::Table(_) => "table",
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            Schedule::Constant(v) | Schedule::Linear(v) => vec![*v],
            Schedule::Table(values) => values.clone(),
        }
    }

    fn parse(kind: &str, value: &str) -> Result<Self> {
        let numbers = value
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::param(format!("`{v}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        match (kind, numbers.as_slice()) {
            ("constant", [v]) => Ok(Schedule::Constant(*v)),
            ("linear", [k]) => Ok(Schedule::Linear(*k)),
            ("table", values) if !values.is_empty() => Ok(Schedule::Table(values.to_vec())),
            _ => Err(Error::param(format!("bad schedule `{kind}` with value `{value}`"))),
        }
    }

    fn is_monotone(&self, increasing: bool) -> bool {
        match self {
            Schedule::Table(v) => v
                .windows(2)
                .all(|w| if increasing { w[0] <= w[1] } else { w[0] >= w[1] }),
            Schedule::Linear(k) => !increasing || *k >= 0.0,
            Schedule::Constant(_) => true,
        }
    }

    fn is_non_negative(&self) -> bool {
        self.values().iter().all(|v| *v >= 0.0)
    }
}

/// Gains and costs of both players.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    /// Source gain per infected node.
    pub g_s: f64,
    /// Source penalty when caught, over `d_a`.
    pub c_s: Schedule,
    /// Administrator gain on identification, over `d_a`.
    pub g_a: Schedule,
    /// Administrator cost over the suspect-set size.
    pub c_a: Schedule,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            g_s: 1.0,
            c_s: Schedule::Constant(1200.0),
            g_a: Schedule::Constant(50.0),
            c_a: Schedule::Linear(1.0),
        }
    }
}

impl GameConfig {
    /// Constant `c_s` and `g_a`, linear `c_a`.
    pub fn linear(g_s: f64, c_s: f64, g_a: f64, c_a: f64) -> Result<Self> {
        let cfg = GameConfig {
            g_s,
            c_s: Schedule::Constant(c_s),
            g_a: Schedule::Constant(g_a),
            c_a: Schedule::Linear(c_a),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Values must be non-negative, `c_s` non-decreasing, `g_a`
    /// non-increasing and `c_a` non-decreasing.
    pub fn validate(&self) -> Result<()> {
        let ok = self.g_s >= 0.0
            && [&self.c_s, &self.g_a, &self.c_a].iter().all(|s| s.is_non_negative())
            && self.c_s.is_monotone(true)
            && self.g_a.is_monotone(false)
            && self.c_a.is_monotone(true);
        if ok {
            Ok(())
        } else {
            Err(Error::param("gains and costs must be non-negative with the required monotonicity"))
        }
    }

    /// Flat `key = value` text. Keys: `g_s`, `c_s`, `g_a`, `c_a`, plus
    /// optional `c_s_kind`, `g_a_kind`, `c_a_kind` in
    /// {constant, linear, table}. Unset keys keep their defaults; `#`
    /// starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(char::is_whitespace))
                .ok_or_else(|| Error::Parse {
                    line: index + 1,
                    msg: "expected `key = value`".into(),
                })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        let known = ["g_s", "c_s", "g_a", "c_a", "c_s_kind", "g_a_kind", "c_a_kind"];
        if let Some(bad) = entries.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::param(format!("unknown config key `{bad}`")));
        }
        let mut cfg = GameConfig::default();
        if let Some(v) = entries.get("g_s") {
            cfg.g_s = v.parse().map_err(|_| Error::param(format!("`{v}` is not a number")))?;
        }
        let schedule = |name: &str, slot: &mut Schedule| -> Result<()> {
            let kind = entries
                .get(&format!("{name}_kind"))
                .map(String::as_str)
                .unwrap_or(slot.kind());
            match entries.get(name) {
                Some(v) => *slot = Schedule::parse(kind, v)?,
                None if kind != slot.kind() => {
                    return Err(Error::param(format!("`{name}_kind` given without `{name}`")))
                }
                None => {}
            }
            Ok(())
        };
        schedule("c_s", &mut cfg.c_s)?;
        schedule("g_a", &mut cfg.g_a)?;
        schedule("c_a", &mut cfg.c_a)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// What the administrator observes about one infection, plus the source's
/// true margin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub size: usize,
    /// Hops from the source to the nearest Jordan center.
    pub margin: usize,
    /// The Jordan center the administrator searches around.
    pub center: NodeId,
    /// `suspect_sizes[k] = |V_sp(k)|` for `k` up to the center's
    /// eccentricity; larger radii saturate.
    pub suspect_sizes: Vec<usize>,
}

impl Snapshot {
    /// Measures `infected` in the metric of `net`, choosing the center
    /// among the Jordan centers with `seed`.
    pub fn measure(net: &Network, infected: &[NodeId], source: NodeId, seed: u64) -> Result<Self> {
        let centers = jordan_centers(net, infected)?;
        let margin = distance_to_set(net, source, &centers)?;
        let center = crate::graph::pick_jordan_center(&centers, seed)?;
        Self::around(net, infected, margin, center)
    }

    /// Snapshot with a given center and margin.
    pub fn around(net: &Network, infected: &[NodeId], margin: usize, center: NodeId) -> Result<Self> {
        let dist = bfs_distances(net, center)?;
        let reach = infected.iter().map(|&v| dist[v]).max().ok_or(Error::EmptySet("infected set"))?;
        let mut suspect_sizes = vec![0usize; reach + 1];
        for &v in infected {
            suspect_sizes[dist[v]] += 1;
        }
        for k in 1..suspect_sizes.len() {
            suspect_sizes[k] += suspect_sizes[k - 1];
        }
        Ok(Snapshot {
            size: infected.len(),
            margin,
            center,
            suspect_sizes,
        })
    }

    /// `|V_sp(d_a)|`.
    pub fn suspect_size(&self, d_a: usize) -> usize {
        self.suspect_sizes[d_a.min(self.suspect_sizes.len() - 1)]
    }

    /// Eccentricity of the center within the infected set.
    pub fn reach(&self) -> usize {
        self.suspect_sizes.len() - 1
    }
}

/// Infected nodes within `d_a` hops of `center`, which must be a Jordan
/// center of `infected`.
pub fn suspect_set(net: &Network, infected: &[NodeId], center: NodeId, d_a: usize) -> Result<Vec<NodeId>> {
    if !jordan_centers(net, infected)?.contains(&center) {
        return Err(Error::param(format!("{center} is not a Jordan center")));
    }
    let dist = bfs_distances(net, center)?;
    let mut set: Vec<NodeId> = infected.iter().copied().filter(|&v| dist[v] <= d_a).collect();
    set.sort_unstable();
    Ok(set)
}

pub fn admin_utility(cfg: &GameConfig, d_a: usize, snap: &Snapshot) -> f64 {
    let caught = if d_a >= snap.margin { cfg.g_a.eval(d_a) } else { 0.0 };
    caught - cfg.c_a.eval(snap.suspect_size(d_a))
}

pub fn source_utility(cfg: &GameConfig, d_a: usize, snap: &Snapshot) -> f64 {
    let penalty = if d_a >= snap.margin { cfg.c_s.eval(d_a) } else { 0.0 };
    cfg.g_s * snap.size as f64 - penalty
}

/// Indices of the maximal values, within [`TIE_EPS`].
fn argmax(values: impl IntoIterator<Item = f64>) -> Vec<usize> {
    let values: Vec<f64> = values.into_iter().collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len()).filter(|&i| values[i] >= best - TIE_EPS).collect()
}

/// Best radii found by trying every `d_a` up to the center's reach.
pub fn best_response_admin(cfg: &GameConfig, snap: &Snapshot) -> Vec<usize> {
    argmax((0..=snap.reach()).map(|d_a| admin_utility(cfg, d_a, snap)))
}

/// The best radius is 0 or the margin: searching exactly far enough to
/// include the source pays when the gain beats the extra cost.
pub fn predicted_admin_response(cfg: &GameConfig, snap: &Snapshot) -> Vec<usize> {
    let d_s = snap.margin;
    if d_s == 0 {
        return vec![0];
    }
    let gain = cfg.g_a.eval(d_s);
    let extra = cfg.c_a.eval(snap.suspect_size(d_s)) - cfg.c_a.eval(snap.suspect_size(0));
    if gain > extra + TIE_EPS {
        vec![d_s]
    } else if gain < extra - TIE_EPS {
        vec![0]
    } else {
        vec![0, d_s]
    }
}

/// The source's options at a fixed horizon: entry `k` is the dominant
/// strategy with margin `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceMenu {
    pub t_obs: Rational,
    pub options: Vec<Snapshot>,
}

impl SourceMenu {
    /// Plans every feasible dominant strategy on `tree` and measures each
    /// in `metric` (the tree itself, or the loopy network it spans).
    pub fn build(
        tree: &TreeView,
        metric: &Network,
        bounds: &RateBounds,
        t_obs: &Rational,
        seed: u64,
    ) -> Result<Self> {
        let largest = max_safety_margin(bounds, t_obs)?;
        let options = (0..=largest)
            .map(|d_s| {
                let plan = build_dis(tree, bounds, t_obs, d_s)?;
                Snapshot::measure(metric, plan.infected(), tree.root(), seed)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SourceMenu {
            t_obs: t_obs.clone(),
            options,
        })
    }

    /// Largest feasible margin.
    pub fn max_margin(&self) -> usize {
        self.options.len() - 1
    }
}

/// Best margins against radius `d_a`, by trying every option.
pub fn best_response_source(cfg: &GameConfig, d_a: usize, menu: &SourceMenu) -> Vec<usize> {
    argmax(menu.options.iter().map(|snap| source_utility(cfg, d_a, snap)))
}

/// Against radius `d_a` the source either grows as fast as possible or
/// steps just outside the radius.
pub fn predicted_source_response(cfg: &GameConfig, d_a: usize, menu: &SourceMenu) -> Vec<usize> {
    if d_a >= menu.max_margin() {
        return vec![0];
    }
    let cost = cfg.c_s.eval(d_a);
    let lost = cfg.g_s * (menu.options[0].size as f64 - menu.options[d_a + 1].size as f64);
    if cost > lost + TIE_EPS {
        vec![d_a + 1]
    } else if cost < lost - TIE_EPS {
        vec![0]
    } else {
        vec![0, d_a + 1]
    }
}

/// One profile on the strategy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub d_a: usize,
    pub d_s: usize,
    pub u_a: f64,
    pub u_s: f64,
    pub is_br_a: bool,
    pub is_br_s: bool,
}

impl Cell {
    pub fn is_nash(&self) -> bool {
        self.is_br_a && self.is_br_s
    }
}

/// The two inequalities that characterize the pure equilibria.
#[derive(Debug, Clone, PartialEq)]
pub struct NashConditions {
    /// `g_s (|V_I(Λ₀)| − |V_I(Λ₁)|)`.
    pub size_gain: f64,
    /// `c_s(0)`.
    pub catch_cost: f64,
    /// `g_a(1)`.
    pub admin_gain: f64,
    /// `c_a(V_sp(1)) − c_a(V_sp(0))` against margin one.
    pub admin_extra_cost: f64,
    /// `(0, Λ₀)` is an equilibrium.
    pub fast_holds: bool,
    /// `(0, Λ₁)` is an equilibrium.
    pub evasive_holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    pub conditions: NashConditions,
    /// Profiles `(d_a, d_s)` predicted by the conditions.
    pub predicted: Vec<(usize, usize)>,
    /// Profiles surviving every unilateral deviation on the grid.
    pub deviation: Vec<(usize, usize)>,
    /// Profiles maximizing `u_a + u_s`.
    pub sum_argmax: Vec<(usize, usize)>,
    pub cells: Vec<Cell>,
}

impl EquilibriumReport {
    pub fn conditions_match_deviations(&self) -> bool {
        self.predicted == self.deviation
    }

    pub fn sum_argmax_is_cheap(&self) -> bool {
        self.sum_argmax.iter().all(|p| *p == (0, 0) || *p == (0, 1))
    }

    /// CSV with header `d_a,d_s,u_a,u_s,is_br_a,is_br_s,is_nash`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["d_a", "d_s", "u_a", "u_s", "is_br_a", "is_br_s", "is_nash"])?;
        for c in &self.cells {
            w.write_record([
                c.d_a.to_string(),
                c.d_s.to_string(),
                c.u_a.to_string(),
                c.u_s.to_string(),
                u8::from(c.is_br_a).to_string(),
                u8::from(c.is_br_s).to_string(),
                u8::from(c.is_nash()).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pure equilibria on the grid `d_a, d_s ∈ [0, d̄_s]`, both from the
/// closed-form conditions and from exhaustive deviation checks.
pub fn find_nash(cfg: &GameConfig, menu: &SourceMenu) -> Result<EquilibriumReport> {
    let top = menu.max_margin();
    if top == 0 {
        return Err(Error::param("the horizon admits no positive safety margin"));
    }
    let opts = &menu.options;
    let size_gain = cfg.g_s * (opts[0].size as f64 - opts[1].size as f64);
    let catch_cost = cfg.c_s.eval(0);
    let admin_gain = cfg.g_a.eval(1);
    let admin_extra_cost = cfg.c_a.eval(opts[1].suspect_size(1)) - cfg.c_a.eval(opts[1].suspect_size(0));
    let fast_holds = catch_cost <= size_gain + TIE_EPS;
    let evasive_holds = catch_cost >= size_gain - TIE_EPS && admin_gain <= admin_extra_cost + TIE_EPS;
    let mut predicted = Vec::new();
    if fast_holds {
        predicted.push((0, 0));
    }
    if evasive_holds {
        predicted.push((0, 1));
    }

    let u_a = |d_a: usize, d_s: usize| admin_utility(cfg, d_a, &opts[d_s]);
    let u_s = |d_a: usize, d_s: usize| source_utility(cfg, d_a, &opts[d_s]);
    let mut cells = Vec::new();
    for d_a in 0..=top {
        for d_s in 0..=top {
            let best_a = (0..=top).map(|x| u_a(x, d_s)).fold(f64::NEG_INFINITY, f64::max);
            let best_s = (0..=top).map(|k| u_s(d_a, k)).fold(f64::NEG_INFINITY, f64::max);
            cells.push(Cell {
                d_a,
                d_s,
                u_a: u_a(d_a, d_s),
                u_s: u_s(d_a, d_s),
                is_br_a: u_a(d_a, d_s) >= best_a - TIE_EPS,
                is_br_s: u_s(d_a, d_s) >= best_s - TIE_EPS,
            });
        }
    }
    let mut deviation: Vec<(usize, usize)> =
        cells.iter().filter(|c| c.is_nash()).map(|c| (c.d_a, c.d_s)).collect();
    deviation.sort_by_key(|&(d_a, d_s)| (d_a, d_s));
    let sums: Vec<f64> = cells.iter().map(|c| c.u_a + c.u_s).collect();
    let sum_argmax = argmax(sums).into_iter().map(|i| (cells[i].d_a, cells[i].d_s)).collect();
    Ok(EquilibriumReport {
        conditions: NashConditions {
            size_gain,
            catch_cost,
            admin_gain,
            admin_extra_cost,
            fast_holds,
            evasive_holds,
        },
        predicted,
        deviation,
        sum_argmax,
        cells,
    })
}
