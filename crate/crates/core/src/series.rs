//! Tashkinov series: the rung ladder with IE/RE extensions, its canonical
//! deterministic construction, and a literal validator.

use crate::coloring::{ClosureStatus, Color, ColorSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexSet};
use crate::hierarchy::{check_r2, Hierarchy, RungContext};
use crate::kempe::{classify_chains_through, ExitPath};
use crate::trace::Trace;
use crate::tree::{path_number, taa_candidates, TreeSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtKind {
    IE,
    RE,
}

impl std::fmt::Display for ExtKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExtKind::IE => "IE",
            ExtKind::RE => "RE",
        })
    }
}

/// `(f_i, γ_i, δ_i, Θ_i)`: how `T_{i+1}` leaves the closed tree `T_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    pub edge: EdgeId,
    pub gamma: Color,
    pub delta: Color,
    pub kind: ExtKind,
}

/// One closed rung `T_i` with the data of the extension that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rung {
    pub tree: TreeSequence,
    /// `f_{i-1}`; the uncolored edge for the first rung.
    pub connecting_edge: EdgeId,
    pub connecting_color: Option<Color>,
    pub companion_color: Option<Color>,
    pub extension_type: Option<ExtKind>,
}

/// Read-only view of the ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesState {
    pub rungs: Vec<Rung>,
    pub d_set: ColorSet,
    pub initial_index: usize,
}

/// An extended Tashkinov tree `T` with ladder `T_0 ⊂ T_1 ⊂ ... ⊂ T_n ⊊ T`,
/// plus the hierarchy each rung was grown with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ett {
    pub tree: TreeSequence,
    /// `ends[i] = |T_i|`, `ends[0] = 1` for `T_0 = {x_e}`.
    pub ends: Vec<usize>,
    /// `ext[i - 1]` leaves `T_i`, for `1 ≤ i ≤ n`.
    pub ext: Vec<Extension>,
    /// `hier[i]` is the hierarchy of the rung grown from `T_i`.
    pub hier: Vec<Hierarchy>,
}

/// Lexicographic progress measure; smaller is closer to a coloring.
/// A non-elementary tree scores `(n, 0, q, p(T), |T − T_{n,q}|)`; a closed
/// rung failing interchangeability scores `(n, 1, Q, |P1|+|P2|+|P3|, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Measure(pub [usize; 5]);

impl Measure {
    pub fn n(&self) -> usize {
        self.0[0]
    }
    pub fn q(&self) -> usize {
        self.0[2]
    }
    pub fn p(&self) -> usize {
        self.0[3]
    }
    pub fn tail(&self) -> usize {
        self.0[4]
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [n, kind, a, b, c] = self.0;
        if kind == 0 {
            write!(f, "{n} {a} {b} {c}")
        } else {
            write!(f, "{n} Q={a} {b}")
        }
    }
}

impl Ett {
    /// `T_0 = {x_e}` and the first rung started with `e`.
    pub fn start(c: &PartialColoring, e: EdgeId) -> Result<Ett> {
        let tree = TreeSequence::from_edge(c.graph(), e);
        let ctx = RungContext { base: 1, deltas: vec![], gamma_n: None };
        let h = Hierarchy::start(c, &tree, &ctx)?;
        Ok(Ett { tree, ends: vec![1], ext: vec![], hier: vec![h] })
    }

    pub fn n(&self) -> usize {
        self.ends.len() - 1
    }

    pub fn uncolored_edge(&self) -> EdgeId {
        self.tree.edge_into(1)
    }

    pub fn ctx(&self, i: usize) -> RungContext {
        RungContext {
            base: self.ends[i],
            deltas: self.ext[..i].iter().map(|x| x.delta).collect(),
            gamma_n: i.checked_sub(1).map(|j| self.ext[j].gamma),
        }
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hier[self.n()]
    }

    pub fn rung_tree(&self, i: usize) -> TreeSequence {
        self.tree.prefix(self.ends[i])
    }

    /// Largest `h ≤ i − 1` with `Θ_h = IE`, or 0.
    pub fn initial_index(&self, i: usize) -> usize {
        (1..i).rev().find(|&h| self.ext[h - 1].kind == ExtKind::IE).unwrap_or(0)
    }

    /// `γ_n` of the top rung, if any.
    pub fn gamma_n(&self) -> Option<Color> {
        self.n().checked_sub(1).map(|j| self.ext[j].gamma)
    }

    pub fn d_set(&self, c: &PartialColoring) -> ColorSet {
        self.ctx(self.n()).d_set(c, &self.tree)
    }

    /// Measure of a tree whose last vertex is its first collision.
    pub fn measure(&self, c: &PartialColoring) -> Measure {
        let h = self.hierarchy();
        let split = h.top_level();
        let p = path_number(c.graph(), &self.tree, split);
        Measure([self.n(), 0, h.q(), p, self.tree.len() - split])
    }

    /// The same ladder cut to the first `len` vertices (`len ≥ 2`).
    pub fn prefix(&self, len: usize) -> Ett {
        let n = self.ends.iter().filter(|&&l| l < len).count() - 1;
        let mut hier = self.hier[..=n].to_vec();
        hier[n] = hier[n].truncated(len);
        Ett {
            tree: self.tree.prefix(len),
            ends: self.ends[..=n].to_vec(),
            ext: self.ext[..n].to_vec(),
            hier,
        }
    }

    pub fn series(&self, c: &PartialColoring) -> SeriesState {
        let mut rungs = Vec::new();
        for i in 1..=self.n() {
            let from = if i == 1 { None } else { Some(self.ext[i - 2]) };
            rungs.push(Rung {
                tree: self.rung_tree(i),
                connecting_edge: from.map_or(self.uncolored_edge(), |x| x.edge),
                connecting_color: from.map(|x| x.delta),
                companion_color: from.map(|x| x.gamma),
                extension_type: from.map(|x| x.kind),
            });
        }
        let n = self.n();
        let d_set = if n == 0 { ColorSet::new() } else { self.ctx(n).d_set(c, &self.tree) };
        SeriesState { rungs, d_set, initial_index: self.initial_index(n.max(1)) }
    }
}

fn ear_edges(c: &PartialColoring, t: &TreeSequence, gamma: Color, delta: Color) -> Vec<(crate::kempe::Ear, [EdgeId; 2])> {
    let rep = classify_chains_through(c, &t.vertex_set(), gamma, delta);
    rep.ears()
        .map(|ear| {
            let es = &ear.chain.edges;
            (ear.clone(), [es[0], es[es.len() - 1]])
        })
        .collect()
}

/// `(h, f)` pairs allowing a revisiting extension out of `t_r`: `h < r` is an
/// IE index and `f` is the first edge leaving `t_r` along a (γ_h,δ_h)-ear of
/// `T_h`, walking in from one of its roots.
pub fn re_options(c: &PartialColoring, ett: &Ett, r: usize, t_r: &TreeSequence) -> Vec<(usize, EdgeId)> {
    let mut out = Vec::new();
    for h in 1..r.min(ett.n() + 1) {
        let x = ett.ext[h - 1];
        if x.kind != ExtKind::IE {
            continue;
        }
        let t_h = ett.rung_tree(h);
        for (ear, _) in ear_edges(c, &t_h, x.gamma, x.delta) {
            let vs = &ear.chain.vertices;
            let es = &ear.chain.edges;
            if vs.iter().all(|&v| t_r.contains(v)) {
                continue;
            }
            if let Some(i) = (0..es.len()).find(|&i| !t_r.contains(vs[i + 1])) {
                out.push((h, es[i]));
            }
            if let Some(i) = (0..es.len()).rev().find(|&i| !t_r.contains(vs[i])) {
                out.push((h, es[i]));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Every (γ_h,δ_h)-ear of every IE rung `T_h`, `h < upto`, lies inside `T_upto`.
/// `upto = n + 1` refers to the whole tree, which should then be closed.
pub fn re_finished(c: &PartialColoring, ett: &Ett, upto: usize) -> bool {
    if upto <= 1 {
        return true;
    }
    let t = if upto <= ett.n() { ett.rung_tree(upto) } else { ett.tree.clone() };
    re_options(c, ett, upto, &t).is_empty()
}

fn ie_legal(c: &PartialColoring, t: &TreeSequence, x: &Extension) -> bool {
    let set = t.vertex_set();
    c.defective_colors(&set).contains(x.delta)
        && t.missing(c).contains(x.gamma)
        && ear_edges(c, t, x.gamma, x.delta).iter().any(|(_, ends)| ends.contains(&x.edge))
}

/// Smallest IE choice out of the closed tree `t`: smallest δ, then γ, then edge.
pub fn ie_option(c: &PartialColoring, t: &TreeSequence) -> Option<Extension> {
    let set = t.vertex_set();
    let phibar = t.missing(c);
    for delta in c.defective_colors(&set).iter() {
        if phibar.contains(delta) {
            continue;
        }
        for gamma in phibar.iter() {
            let best = ear_edges(c, t, gamma, delta).iter().flat_map(|(_, e)| *e).min();
            if let Some(edge) = best {
                return Some(Extension { edge, gamma, delta, kind: ExtKind::IE });
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extend {
    Extended(Extension),
    /// The closed top is strongly closed; its vertex set.
    Finished(VertexSet),
}

/// One step of the series construction from the closed top `ett.tree`.
/// Revisiting extensions take priority; ties go to the largest IE index,
/// then the smallest edge.
pub fn try_extend(c: &PartialColoring, ett: &Ett) -> Result<Extend> {
    let t = &ett.tree;
    let k = c.k();
    if !taa_candidates(c, t, &ColorSet::full(k)).is_empty() {
        return Err(Error::NotClosed);
    }
    let n = ett.n();
    let opts = re_options(c, ett, n + 1, t);
    if let Some(&(h, _)) = opts.iter().max_by_key(|(h, _)| *h) {
        let edge = opts.iter().filter(|(hh, _)| *hh == h).map(|(_, e)| *e).min().unwrap();
        let x = ett.ext[h - 1];
        return Ok(Extend::Extended(Extension { edge, gamma: x.gamma, delta: x.delta, kind: ExtKind::RE }));
    }
    if let Some(x) = ie_option(c, t) {
        return Ok(Extend::Extended(x));
    }
    let set = t.vertex_set();
    match c.closure_status(&set) {
        ClosureStatus::StronglyClosed => Ok(Extend::Finished(set)),
        _ => Err(Error::EngineInvariantViolation(format!(
            "closed tree {t:?} has a defective color but no ear to extend along"
        ))),
    }
}

/// Checks every structural requirement on `ett` under `c`: tree-sequence
/// shape, Tashkinov augmentation steps, closed rungs, legal extensions with
/// revisiting priority, and the hierarchy clauses of the top rung.
pub fn validate(c: &PartialColoring, ett: &Ett) -> std::result::Result<(), String> {
    let g = c.graph();
    let t = &ett.tree;
    if t.len() < 2 || !t.is_valid(g) {
        return Err("not a tree-sequence".into());
    }
    let e = t.edge_into(1);
    let [a, b] = g.endpoints(e);
    if c.color(e).is_some() || t.vertex(0) != a.min(b) {
        return Err("tree does not start at the uncolored edge".into());
    }
    let n = ett.n();
    if ett.ends[0] != 1
        || ett.ends.windows(2).any(|w| w[0] >= w[1])
        || ett.ends[n] >= t.len()
        || ett.ext.len() != n
        || ett.hier.len() != n + 1
    {
        return Err("ladder bookkeeping".into());
    }
    let mut seen = c.missing(t.vertex(0));
    seen.union_with(&c.missing(t.vertex(1)));
    for i in 2..t.len() {
        let f = t.edge_into(i);
        let col = c.color(f).ok_or("uncolored tree edge")?;
        if let Some(r) = (1..=n).find(|&r| ett.ends[r] == i) {
            let x = ett.ext[r - 1];
            if x.edge != f || x.delta != col {
                return Err(format!("connecting edge of rung {r}"));
            }
        } else if !seen.contains(col) {
            return Err(format!("edge into position {i} is not a Tashkinov augmentation"));
        }
        seen.union_with(&c.missing(t.vertex(i)));
    }
    let full = ColorSet::full(c.k());
    for r in 1..=n {
        let t_r = ett.rung_tree(r);
        if !taa_candidates(c, &t_r, &full).is_empty() {
            return Err(format!("rung {r} is not closed"));
        }
        let x = ett.ext[r - 1];
        let opts = re_options(c, ett, r, &t_r);
        if !opts.is_empty() {
            let ok = x.kind == ExtKind::RE
                && opts.iter().any(|&(h, f)| {
                    let y = ett.ext[h - 1];
                    f == x.edge && y.gamma == x.gamma && y.delta == x.delta
                });
            if !ok {
                return Err(format!("extension out of rung {r} ignores a revisiting option"));
            }
        } else if x.kind != ExtKind::IE || !ie_legal(c, &t_r, &x) {
            return Err(format!("extension out of rung {r} is not a legal IE"));
        }
    }
    check_r2(c, t, &ett.ctx(n), ett.hierarchy()).map_err(|cl| format!("hierarchy clause {cl}"))
}

/// A closed rung failing interchangeability: two (α,β)-paths meet it.
#[derive(Clone, Debug)]
pub struct A2Report {
    pub ett: Ett,
    pub alpha: Color,
    pub beta: Color,
    /// Three exit paths `P1, P2, P3` ordered by exit vertex.
    pub exits: Vec<ExitPath>,
    pub measure: Measure,
}

/// Checks the interchangeability property of the closed top `ett.tree`.
/// Returns the violation with the smallest measure, if any.
pub fn interchange_violation(c: &PartialColoring, ett: &Ett) -> Option<A2Report> {
    let t = &ett.tree;
    let set = t.vertex_set();
    let n = ett.n();
    let h = ett.initial_index(n + 1);
    let mut alphas = t.missing(c);
    if !re_finished(c, ett, n + 1) && h >= 1 {
        alphas.remove(ett.ext[h - 1].gamma);
    }
    let mut best: Option<A2Report> = None;
    for alpha in alphas.iter() {
        for beta in 1..=c.k() {
            if beta == alpha || (alphas.contains(beta) && beta < alpha) {
                continue;
            }
            let rep = classify_chains_through(c, &set, alpha, beta);
            if rep.interchangeable() {
                continue;
            }
            let mut exits: Vec<ExitPath> = rep.exits().cloned().collect();
            exits.sort_by_key(|x| (t.position(x.exit_vertex), x.exit_edge));
            exits.truncate(12);
            let pick = best_triple(c, ett, h, &exits);
            let report = A2Report {
                ett: ett.clone(),
                alpha,
                beta,
                measure: Measure([n, 1, pick.0, pick.1, 0]),
                exits: pick.2,
            };
            if best.as_ref().is_none_or(|b| report.measure < b.measure) {
                best = Some(report);
            }
        }
    }
    best
}

fn best_triple(c: &PartialColoring, ett: &Ett, h: usize, exits: &[ExitPath]) -> (usize, usize, Vec<ExitPath>) {
    let t = &ett.tree;
    let q_of = |b2: &ExitPath| -> usize {
        if h == 0 {
            return 0;
        }
        let d = ett.ext[h - 1].delta;
        let upto = t.position(b2.exit_vertex).unwrap();
        usize::from(!t.vertices()[..=upto].iter().any(|&v| c.is_missing(v, d)))
    };
    let mut best: Option<(usize, usize, Vec<ExitPath>)> = None;
    let m = exits.len();
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let tri = [&exits[i], &exits[j], &exits[l]];
                let q = q_of(tri[1]);
                let sum = tri.iter().map(|x| x.chain.edges.len()).sum();
                if best.as_ref().is_none_or(|b| (q, sum) < (b.0, b.1)) {
                    best = Some((q, sum, tri.iter().map(|x| (*x).clone()).collect()));
                }
            }
        }
    }
    best.unwrap_or_else(|| (1, exits.iter().map(|x| x.chain.edges.len()).sum(), exits.to_vec()))
}

/// Where the canonical construction stopped.
#[derive(Clone, Debug)]
pub enum Built {
    /// The ends of the uncolored edge share this missing color.
    BaseCase(Color),
    /// The last vertex of the tree is its first collision.
    NonElementary(Ett),
    Interchange(Box<A2Report>),
    /// `ett.tree` is closed, elementary, and strongly closed.
    StronglyClosed(Ett),
}

impl Built {
    pub fn measure(&self, c: &PartialColoring) -> Option<Measure> {
        match self {
            Built::NonElementary(ett) => Some(ett.measure(c)),
            Built::Interchange(r) => Some(r.measure),
            _ => None,
        }
    }
}

/// Canonical construction from the unique uncolored edge of `c`.
pub fn build(c: &PartialColoring, trace: &mut Trace) -> Result<Built> {
    let e = c
        .uncolored()
        .next()
        .ok_or_else(|| Error::EngineInvariantViolation("no uncolored edge".into()))?;
    grow(c, Ett::start(c, e)?, trace)
}

/// Continues the canonical construction from a valid `ett`: grows the top
/// rung level by level, checks each closed rung for interchangeability, and
/// extends until a collision, a violation, or a strongly closed rung.
pub fn grow(c: &PartialColoring, ett: Ett, trace: &mut Trace) -> Result<Built> {
    let g = c.graph();
    let full = ColorSet::full(c.k());
    let mut ett = ett;
    if let Some(i) = crate::tree::first_collision(c, &ett.tree, 1) {
        return Ok(collided(c, ett.prefix(i + 1)));
    }
    let mut seen = ett.tree.missing(c);
    // appends `f` and reports whether the new vertex collides
    let mut push = |ett: &mut Ett, f: EdgeId, trace: &mut Trace| -> bool {
        let v = ett.tree.push_edge(g, f);
        trace.emit(|| format!("T+ {f} {}", v + 1));
        let m = c.missing(v);
        let hit = m.intersects(&seen);
        seen.union_with(&m);
        hit
    };
    loop {
        let n = ett.n();
        let ctx = ett.ctx(n);
        loop {
            let blocked = ett.hier[n].blocked(c, &ett.tree, &ctx);
            let allowed = full.difference(&blocked);
            let f = if let Some(&f) = taa_candidates(c, &ett.tree, &allowed).first() {
                f
            } else if taa_candidates(c, &ett.tree, &full).is_empty() {
                break;
            } else {
                let tree = ett.tree.clone();
                ett.hier[n].open_level(c, &tree, &ctx, trace)?
            };
            if push(&mut ett, f, trace) {
                return Ok(collided(c, ett));
            }
        }
        if let Some(r) = interchange_violation(c, &ett) {
            return Ok(Built::Interchange(Box::new(r)));
        }
        match try_extend(c, &ett)? {
            Extend::Finished(_) => return Ok(Built::StronglyClosed(ett)),
            Extend::Extended(x) => {
                trace.emit(|| format!("R {} {} {} {}", x.kind, x.edge, x.gamma, x.delta));
                ett.ends.push(ett.tree.len());
                ett.ext.push(x);
                let h = Hierarchy::start(c, &ett.tree, &ett.ctx(n + 1))?;
                ett.hier.push(h);
                if push(&mut ett, x.edge, trace) {
                    return Ok(collided(c, ett));
                }
            }
        }
    }
}

fn collided(c: &PartialColoring, ett: Ett) -> Built {
    if ett.tree.len() == 2 {
        let [a, b] = [ett.tree.vertex(0), ett.tree.vertex(1)];
        let col = c.missing(a).intersect(&c.missing(b)).first().expect("collision");
        Built::BaseCase(col)
    } else {
        Built::NonElementary(ett)
    }
}
