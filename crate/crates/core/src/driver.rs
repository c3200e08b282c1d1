//! Top-level pipeline: trivial cases, greedy pass, per-edge resolution and
//! palette escalation.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::augment::{certificate_count_check, default_budget, resolve, Resolution, ResolveReport, Step};
use crate::coloring::{Color, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, Vertex, VertexSet};
use crate::trace::Trace;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialK {
    /// Δ + 1.
    Auto,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub initial_k: InitialK,
    /// Grow the palette when a certificate shows the current one is too small.
    pub escalate: bool,
    /// `C` in the transformation budget `C·|E|·|V|·Δ⁵`.
    pub budget_multiplier: f64,
    pub trace: bool,
    /// Permutes the edge processing order deterministically.
    pub shuffle: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { initial_k: InitialK::Auto, escalate: true, budget_multiplier: 10.0, trace: false, shuffle: None }
    }
}

/// An odd vertex set with too many induced edges for `k_failed` colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCertificate {
    pub k_failed: usize,
    pub vertices: VertexSet,
    pub edge_count: usize,
    pub bound: usize,
}

impl DensityCertificate {
    /// Builds and checks a certificate against the whole graph.
    pub fn new(g: &Multigraph, k_failed: usize, vertices: VertexSet) -> Result<Self> {
        let c = DensityCertificate { k_failed, edge_count: g.induced_edge_count(&vertices), vertices, bound: 0 };
        let bound = c.check(g)?;
        Ok(DensityCertificate { bound, ..c })
    }

    /// Recounts from the graph: odd size at least 3, at least
    /// `k·(|X|−1)/2 + 1` induced edges, and a density bound above `k`.
    pub fn check(&self, g: &Multigraph) -> Result<usize> {
        self.vertices.check(g.vertex_count())?;
        let s = self.vertices.len();
        if s < 3 || s % 2 == 0 {
            return Err(Error::InvalidCertificate(format!("size {s} is not odd and at least 3")));
        }
        let m = g.induced_edge_count(&self.vertices);
        if m != self.edge_count && self.bound != 0 {
            return Err(Error::InvalidCertificate(format!("claims {} induced edges, graph has {m}", self.edge_count)));
        }
        let half = (s - 1) / 2;
        if m < self.k_failed * half + 1 {
            return Err(Error::InvalidCertificate(format!("{m} induced edges, need {}", self.k_failed * half + 1)));
        }
        let bound = m.div_ceil(half);
        if bound <= self.k_failed || (self.bound != 0 && self.bound != bound) {
            return Err(Error::InvalidCertificate(format!("bound {bound} does not prove more than {}", self.k_failed)));
        }
        Ok(bound)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub swaps: usize,
    pub max_rungs: usize,
    pub resolves: usize,
    pub escalations: usize,
    pub colors_used: usize,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub k_used: usize,
    pub coloring: PartialColoring,
    pub certificates: Vec<DensityCertificate>,
    pub stats: RunStats,
    /// Every engine transformation, in order.
    pub steps: Vec<Step>,
    pub trace: Trace,
}

/// Why a run stopped without a coloring.
#[derive(Clone, Debug)]
pub enum RunError {
    /// The palette is too small and escalation is off.
    Infeasible { k: usize, certificate: Option<DensityCertificate>, trace: Trace },
    Failed(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Failed(e)
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Infeasible { k, certificate: Some(c), .. } => {
                write!(f, "{k} colors do not suffice: {} vertices span {} edges", c.vertices.len(), c.edge_count)
            }
            RunError::Infeasible { k, certificate: None, .. } => {
                write!(f, "{k} colors do not suffice for the greedy pass and no certificate is available at k = Δ")
            }
            RunError::Failed(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

/// One call into the engine, as seen by an observer.
pub struct ResolveEvent<'a> {
    /// The colored edges plus the stuck edge, before the engine ran.
    pub view: &'a PartialColoring,
    /// View edge id to graph edge id.
    pub map: &'a [EdgeId],
    pub resolution: &'a Resolution,
    pub report: &'a ResolveReport,
    /// Trace lines of this call in view edge ids (empty unless tracing).
    pub lines: &'a [String],
}

/// Colors `g` with at most `max(Δ+1, Γ)` colors (from the configured start).
pub fn color_graph(g: &Multigraph, cfg: &RunConfig) -> std::result::Result<RunResult, RunError> {
    color_graph_observed(g, cfg, &mut |_| {})
}

/// [`color_graph`], reporting every engine call to `observe`.
pub fn color_graph_observed(
    g: &Multigraph,
    cfg: &RunConfig,
    observe: &mut dyn FnMut(ResolveEvent<'_>),
) -> std::result::Result<RunResult, RunError> {
    let start = Instant::now();
    let g = Arc::new(g.clone());
    let delta = g.max_degree();
    let mut k = match cfg.initial_k {
        InitialK::Auto => delta + 1,
        InitialK::Fixed(k) if k < delta => {
            return Err(Error::InvalidConfig(format!("{k} colors are fewer than the maximum degree {delta}")).into())
        }
        InitialK::Fixed(k) => k,
    };
    if !(cfg.budget_multiplier > 0.0) {
        return Err(Error::InvalidConfig("budget multiplier must be positive".into()).into());
    }
    let mut trace = if cfg.trace { Trace::enabled() } else { Trace::disabled() };
    let mut certificates = Vec::new();
    let mut stats = RunStats::default();
    let mut steps = Vec::new();

    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    if let Some(seed) = cfg.shuffle {
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    }

    let c = if delta <= 2 {
        loop {
            match color_paths_and_cycles(&g, k, &order) {
                Ok(c) => break c,
                Err(cycle) => {
                    let cert = DensityCertificate::new(&g, k, cycle)?;
                    if !cfg.escalate {
                        return Err(RunError::Infeasible { k, certificate: Some(cert), trace });
                    }
                    certificates.push(cert);
                    stats.escalations += 1;
                    k += 1;
                }
            }
        }
    } else {
        let budget = default_budget(&PartialColoring::new(g.clone(), k), cfg.budget_multiplier);
        let mut spent = 0u64;
        let mut c = PartialColoring::new(g.clone(), k);
        let mut i = 0;
        while i < order.len() {
            let e = order[i];
            let [u, v] = g.endpoints(e);
            if let Some(col) = c.missing(u).intersect(&c.missing(v)).first() {
                c.assign(e, col)?;
                i += 1;
                continue;
            }
            if k <= delta {
                // the engine needs two missing colors at each end of e
                if !cfg.escalate {
                    return Err(RunError::Infeasible { k, certificate: None, trace });
                }
                stats.escalations += 1;
                k += 1;
                c.widen(k);
                continue;
            }
            let (view, map) = subgraph_view(&c, e)?;
            let from = trace.lines().len();
            stats.resolves += 1;
            let (res, report) = resolve(view.clone(), budget.saturating_sub(spent), &mut trace)?;
            observe(ResolveEvent { view: &view, map: &map, resolution: &res, report: &report, lines: &trace.lines()[from..] });
            trace.remap_edges(from, &map);
            spent += report.steps.len() as u64;
            stats.swaps += report.swaps;
            stats.max_rungs = stats.max_rungs.max(report.rungs);
            steps.extend(report.steps);
            match res {
                Resolution::Colored(d) => {
                    let mut cols = vec![None; g.edge_count()];
                    for (j, &f) in map.iter().enumerate() {
                        cols[f] = d.color(j);
                    }
                    c = PartialColoring::from_colors(g.clone(), k, &cols)?;
                    i += 1;
                }
                Resolution::Certificate(x) => {
                    certificate_count_check(&view, &x, k)?;
                    let cert = DensityCertificate::new(&g, k, x)?;
                    if !cfg.escalate {
                        return Err(RunError::Infeasible { k, certificate: Some(cert), trace });
                    }
                    certificates.push(cert);
                    stats.escalations += 1;
                    k += 1;
                    c.widen(k);
                }
            }
        }
        c
    };
    if !c.is_total() {
        return Err(Error::EngineInvariantViolation("coloring is not total".into()).into());
    }
    c.audit()?;
    let cols: Vec<Option<Color>> = c.colors();
    if let Err(v) = verify(&g, &cols, k) {
        return Err(Error::EngineInvariantViolation(format!("final coloring fails verification: {v}")).into());
    }
    let mut used: Vec<Color> = cols.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    stats.colors_used = used.len();
    stats.wall = start.elapsed();
    Ok(RunResult { k_used: k, coloring: c, certificates, stats, steps, trace })
}

/// The colored edges of `c` plus `e`, as a graph of its own whose last edge
/// is `e`; the map sends view edge ids to ids in `c`.
fn subgraph_view(c: &PartialColoring, e: EdgeId) -> Result<(PartialColoring, Vec<EdgeId>)> {
    let g = c.graph();
    let mut map: Vec<EdgeId> = (0..g.edge_count()).filter(|&f| c.color(f).is_some()).collect();
    map.push(e);
    let pairs: Vec<(Vertex, Vertex)> = map
        .iter()
        .map(|&f| {
            let [a, b] = g.endpoints(f);
            (a, b)
        })
        .collect();
    let h = Arc::new(Multigraph::from_edges(g.vertex_count(), &pairs)?);
    let cols: Vec<Option<Color>> = map.iter().map(|&f| c.color(f)).collect();
    Ok((PartialColoring::from_colors(h, c.k(), &cols)?, map))
}

/// Δ ≤ 2: alternate two colors along every path and cycle, giving an odd
/// cycle a third color on its last edge. An odd cycle with `k < 3` is
/// returned as the obstruction.
fn color_paths_and_cycles(g: &Arc<Multigraph>, k: usize, order: &[EdgeId]) -> std::result::Result<PartialColoring, VertexSet> {
    let mut c = PartialColoring::new(g.clone(), k);
    let mut done = vec![false; g.edge_count()];
    // walk paths from their ends first so only cycles remain
    let mut starts: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).collect();
    let mut seen_start = vec![false; g.vertex_count()];
    for &e in order {
        let [a, b] = g.endpoints(e);
        for v in [a, b] {
            if !seen_start[v] {
                seen_start[v] = true;
                if g.degree(v) == 2 {
                    starts.push(v);
                }
            }
        }
    }
    for v0 in starts {
        let Some(&first) = g.incident(v0).iter().find(|&&f| !done[f]) else { continue };
        let mut walk = vec![first];
        done[first] = true;
        let mut v = g.other_end(first, v0);
        while let Some(&f) = g.incident(v).iter().find(|&&f| !done[f]) {
            done[f] = true;
            walk.push(f);
            v = g.other_end(f, v);
        }
        let cycle = v == v0;
        let odd = cycle && walk.len() % 2 == 1;
        if odd && k < 3 {
            let mut x = VertexSet::new();
            for &f in &walk {
                for w in g.endpoints(f) {
                    x.insert(w);
                }
            }
            return Err(x);
        }
        for (j, &f) in walk.iter().enumerate() {
            let col = if odd && j + 1 == walk.len() { 3 } else { 1 + j % 2 };
            c.assign(f, col).expect("alternating colors along a walk are proper");
        }
    }
    Ok(c)
}

/// A reason a coloring is not a proper total `k`-edge-coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, found: usize },
    NotTotal { edge: EdgeId },
    OutOfRange { edge: EdgeId, color: Color },
    Conflict { first: EdgeId, second: EdgeId, vertex: Vertex, color: Color },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Violation::WrongLength { expected, found } => write!(f, "expected {expected} edges, found {found}"),
            Violation::NotTotal { edge } => write!(f, "edge {edge} has no color"),
            Violation::OutOfRange { edge, color } => write!(f, "edge {edge} has color {color} outside the palette"),
            Violation::Conflict { first, second, vertex, color } => {
                write!(f, "edges {first} and {second} share vertex {} and color {color}", vertex + 1)
            }
        }
    }
}

/// Checks totality, the color range `1..=k`, and that every color class is a matching.
pub fn verify(g: &Multigraph, colors: &[Option<Color>], k: usize) -> std::result::Result<(), Violation> {
    if colors.len() != g.edge_count() {
        return Err(Violation::WrongLength { expected: g.edge_count(), found: colors.len() });
    }
    let mut at = std::collections::HashMap::new();
    for (e, col) in colors.iter().enumerate() {
        let col = col.ok_or(Violation::NotTotal { edge: e })?;
        if col == 0 || col > k {
            return Err(Violation::OutOfRange { edge: e, color: col });
        }
        for v in g.endpoints(e) {
            if let Some(&first) = at.get(&(v, col)) {
                return Err(Violation::Conflict { first, second: e, vertex: v, color: col });
            }
            at.insert((v, col), e);
        }
    }
    Ok(())
}
