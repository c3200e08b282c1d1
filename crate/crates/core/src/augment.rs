//! The recoloring engine. A non-elementary tree (or a closed rung failing
//! interchangeability) is a counterexample with a lexicographic measure; each
//! transformation applies a short sequence of Kempe changes after which a
//! validated counterexample with a strictly smaller measure exists, until the
//! uncolored edge can be colored directly.

use crate::coloring::{Color, ColorSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Vertex, VertexSet};
use crate::hierarchy::Hierarchy;
use crate::kempe::{chain_at, kempe_swap_traced, ChainKind};
use crate::series::{self, grow, interchange_violation, validate, A2Report, Built, Ett, Measure};
use crate::trace::Trace;
use crate::tree::{closure, first_collision, TreeSequence};

pub use crate::tree::path_number;

/// How one uncolored edge was settled.
#[derive(Clone, Debug)]
pub enum Resolution {
    /// The coloring now includes the edge.
    Colored(PartialColoring),
    /// An elementary strongly closed set containing the edge.
    Certificate(VertexSet),
}

/// One accepted transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub case: &'static str,
    pub before: Measure,
    /// `None` when the transformation made the edge colorable.
    pub after: Option<Measure>,
    pub swaps: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ResolveReport {
    pub steps: Vec<Step>,
    pub swaps: usize,
    pub rungs: usize,
    /// Closed rungs whose interchangeability was confirmed on the way to a certificate.
    pub checked_rungs: Vec<VertexSet>,
}

/// A counterexample to elementarity or to interchangeability.
#[derive(Clone, Debug)]
pub enum Counterexample {
    Tree(Ett),
    Interchange(Box<A2Report>),
}

impl Counterexample {
    pub fn measure(&self, c: &PartialColoring) -> Measure {
        match self {
            Counterexample::Tree(e) => e.measure(c),
            Counterexample::Interchange(r) => r.measure,
        }
    }

    pub fn ett(&self) -> &Ett {
        match self {
            Counterexample::Tree(e) => e,
            Counterexample::Interchange(r) => &r.ett,
        }
    }
}

#[derive(Clone, Debug)]
enum Found {
    Base(Color),
    State(Counterexample, Measure),
}

impl Found {
    fn rank(&self) -> Option<Measure> {
        match self {
            Found::Base(_) => None,
            Found::State(_, m) => Some(*m),
        }
    }

    fn better_than(&self, other: &Found) -> bool {
        match (self.rank(), other.rank()) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Move {
    /// Kempe change on the (a,b)-chain at `v`.
    Swap(Vertex, Color, Color),
    /// Recolor an edge with a color missing at both its ends.
    Recolor(EdgeId, Color),
    /// Kempe changes on every (a,b)-chain avoiding the vertex set of the tree prefix of this length.
    Outside(usize, Color, Color),
}

/// Engine configuration and counters for one uncolored edge.
pub struct Engine<'t> {
    pub budget: u64,
    pub trace: &'t mut Trace,
    pub report: ResolveReport,
    spent: u64,
}

/// `C·|E|·|V|·Δ⁵` transformations.
pub fn default_budget(c: &PartialColoring, multiplier: f64) -> u64 {
    let g = c.graph();
    let d = g.max_degree().max(1) as f64;
    let raw = multiplier * g.edge_count().max(1) as f64 * g.vertex_count() as f64 * d.powi(5);
    raw.min(u64::MAX as f64 / 2.0) as u64
}

/// Settles the unique uncolored edge of `c`: either colors it (possibly after
/// recoloring) or returns an elementary strongly closed certificate.
pub fn resolve(c: PartialColoring, budget: u64, trace: &mut Trace) -> Result<(Resolution, ResolveReport)> {
    let mut eng = Engine { budget, trace, report: ResolveReport::default(), spent: 0 };
    let res = eng.run(c)?;
    Ok((res, eng.report))
}

impl Engine<'_> {
    fn run(&mut self, mut c: PartialColoring) -> Result<Resolution> {
        let e = c
            .uncolored()
            .next()
            .ok_or_else(|| Error::EngineInvariantViolation("no uncolored edge".into()))?;
        if c.uncolored().nth(1).is_some() {
            return Err(Error::EngineInvariantViolation("more than one uncolored edge".into()));
        }
        let built = series::build(&c, self.trace)?;
        let mut state = match built {
            Built::BaseCase(col) => {
                c.assign(e, col)?;
                return Ok(Resolution::Colored(c));
            }
            Built::StronglyClosed(ett) => {
                self.report.rungs = ett.n() + 1;
                self.report.checked_rungs = (1..=ett.n()).map(|i| ett.rung_tree(i).vertex_set()).collect();
                self.report.checked_rungs.push(ett.tree.vertex_set());
                return Ok(Resolution::Certificate(ett.tree.vertex_set()));
            }
            Built::NonElementary(ett) => Counterexample::Tree(ett),
            Built::Interchange(r) => Counterexample::Interchange(r),
        };
        loop {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::EngineInvariantViolation(format!(
                    "transformation budget {} exhausted",
                    self.budget
                )));
            }
            let before = state.measure(&c);
            self.report.rungs = self.report.rungs.max(before.n() + 1);
            let (moves, found) = self.search(&c, &state, before).ok_or_else(|| {
                Error::EngineInvariantViolation(format!(
                    "no transformation decreases the measure {before} from {:?}",
                    state.ett().tree
                ))
            })?;
            let case = case_id(&c, &state);
            self.trace.emit(|| format!("A {case} {before}"));
            let mut swaps = 0;
            for mv in &moves {
                swaps += apply(&mut c, mv, state.ett(), self.trace)?;
            }
            self.report.swaps += swaps;
            match found {
                Found::Base(col) => {
                    self.report.steps.push(Step { case, before, after: None, swaps });
                    c.assign(e, col)?;
                    return Ok(Resolution::Colored(c));
                }
                Found::State(next, after) => {
                    check_state(&c, &next)?;
                    if after >= before || next.measure(&c) != after {
                        return Err(Error::EngineInvariantViolation(format!("measure {before} did not decrease to {after}")));
                    }
                    self.report.steps.push(Step { case, before, after: Some(after), swaps });
                    state = next;
                }
            }
        }
    }

    /// Breadth-first over move sequences of length ≤ 2; the first depth with
    /// a strictly smaller counterexample wins, keeping its best candidate.
    fn search(&mut self, c: &PartialColoring, state: &Counterexample, bound: Measure) -> Option<(Vec<Move>, Found)> {
        if let Some(f) = candidates(c, state, bound) {
            return Some((vec![], f));
        }
        let first = moves_for(c, state);
        let mut frontier: Vec<(Vec<Move>, PartialColoring)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        seen.insert(c.colors());
        let mut best: Option<(Vec<Move>, Found)> = None;
        for mv in first {
            let mut d = c.clone();
            let _ = apply(&mut d, &mv, state.ett(), &mut Trace::disabled());
            if !seen.insert(d.colors()) {
                continue;
            }
            if let Some(f) = candidates(&d, state, bound) {
                if best.as_ref().is_none_or(|(_, b)| f.better_than(b)) {
                    let done = f.rank().is_none();
                    best = Some((vec![mv], f));
                    if done {
                        break;
                    }
                }
            }
            frontier.push((vec![mv], d));
        }
        if best.is_some() {
            return best;
        }
        for (path, d) in frontier {
            for mv in moves_for(&d, state) {
                let mut d2 = d.clone();
                let _ = apply(&mut d2, &mv, state.ett(), &mut Trace::disabled());
                if !seen.insert(d2.colors()) {
                    continue;
                }
                if let Some(f) = candidates(&d2, state, bound) {
                    let mut p = path.clone();
                    p.push(mv);
                    return Some((p, f));
                }
            }
        }
        None
    }
}

fn case_id(c: &PartialColoring, state: &Counterexample) -> &'static str {
    match state {
        Counterexample::Interchange(_) => "interchange",
        Counterexample::Tree(ett) => {
            let split = ett.hierarchy().top_level();
            let p = ett.tree.len() - split;
            let pt = path_number(c.graph(), &ett.tree, split);
            if pt == 1 {
                "case1"
            } else if pt == p {
                "case2"
            } else {
                "case3"
            }
        }
    }
}

/// Re-validates an accepted counterexample under the recolored `c`.
fn check_state(c: &PartialColoring, state: &Counterexample) -> Result<()> {
    let bad = |m: String| Error::EngineInvariantViolation(format!("accepted state fails validation: {m}"));
    match state {
        Counterexample::Tree(ett) => {
            validate(c, ett).map_err(bad)?;
            if first_collision(c, &ett.tree, 1) != Some(ett.tree.len() - 1) {
                return Err(bad("the last vertex is not the first collision".into()));
            }
        }
        Counterexample::Interchange(r) => {
            if first_collision(c, &r.ett.tree, 1).is_some() {
                return Err(bad("closed rung is not elementary".into()));
            }
            let mut z = r.ett.clone();
            let n = z.n();
            z.hier[n] = Hierarchy { levels: vec![z.ends[n]], gamma: vec![vec![]], reserved: z.hier[n].reserved };
            match validate(c, &z) {
                Err(m) if !m.starts_with("hierarchy") => return Err(bad(m)),
                _ => {}
            }
            if interchange_violation(c, &r.ett).map(|x| x.measure) != Some(r.measure) {
                return Err(bad("interchangeability report is stale".into()));
            }
        }
    }
    Ok(())
}

/// Applies a move; returns the number of Kempe changes made.
fn apply(c: &mut PartialColoring, mv: &Move, ett: &Ett, trace: &mut Trace) -> Result<usize> {
    match *mv {
        Move::Swap(v, a, b) => {
            let ch = chain_at(c, v, a, b);
            if ch.is_trivial() {
                return Ok(0);
            }
            kempe_swap_traced(c, &ch, trace)?;
            Ok(1)
        }
        Move::Recolor(f, col) => {
            let old = c.color(f);
            c.assign(f, col)?;
            trace.emit(|| format!("K {} {} {f}", old.unwrap_or(0), col));
            Ok(1)
        }
        Move::Outside(len, a, b) => {
            let set = ett.tree.prefix(len).vertex_set();
            let n = c.graph().vertex_count();
            let inside = set.mask(n);
            let mut done = vec![false; n];
            let mut count = 0;
            for v in 0..n {
                if done[v] || inside[v] {
                    continue;
                }
                let ch = chain_at(c, v, a, b);
                for &w in &ch.vertices {
                    done[w] = true;
                }
                if ch.is_trivial() || ch.vertices.iter().any(|&w| inside[w]) {
                    continue;
                }
                kempe_swap_traced(c, &ch, trace)?;
                count += 1;
            }
            Ok(count)
        }
    }
}

fn moves_for(c: &PartialColoring, state: &Counterexample) -> Vec<Move> {
    let ett = state.ett();
    let t = &ett.tree;
    let k = c.k();
    let mut out = Vec::new();
    match state {
        Counterexample::Tree(_) => {
            let p = t.len() - 1;
            // recolor the last edge with a color missing at both ends
            let ep = t.edge_into(p);
            let [a, b] = c.graph().endpoints(ep);
            for col in c.missing(a).intersect(&c.missing(b)).iter() {
                out.push(Move::Recolor(ep, col));
            }
            let split = ett.hierarchy().top_level();
            let mut order: Vec<usize> = (0..t.len()).rev().collect();
            // tail first, then the rest of the tree
            order.sort_by_key(|&i| (i < split, std::cmp::Reverse(i)));
            for i in order {
                let v = t.vertex(i);
                for a in c.missing(v).iter() {
                    for b in 1..=k {
                        if b != a {
                            out.push(Move::Swap(v, a, b));
                        }
                    }
                }
            }
        }
        Counterexample::Interchange(r) => {
            let phibar = t.missing(c);
            for g in phibar.iter() {
                if g != r.alpha {
                    out.push(Move::Outside(t.len(), r.alpha, g));
                }
            }
            for x in &r.exits {
                let v = x.outside_end;
                for a in c.missing(v).iter() {
                    for b in 1..=k {
                        if b != a {
                            out.push(Move::Swap(v, a, b));
                        }
                    }
                }
            }
            for i in (0..t.len()).rev() {
                let v = t.vertex(i);
                for a in c.missing(v).iter() {
                    for b in 1..=k {
                        if b != a {
                            out.push(Move::Swap(v, a, b));
                        }
                    }
                }
            }
        }
    }
    out.dedup();
    out
}

/// A counterexample from `x` under `c`: the prefix ending at its first collision.
fn settle(c: &PartialColoring, x: &Ett) -> Option<Found> {
    let i = first_collision(c, &x.tree, 1)?;
    let y = x.prefix(i + 1);
    if i == 1 {
        validate(c, &y).ok()?;
        let [a, b] = [x.tree.vertex(0), x.tree.vertex(1)];
        return Some(Found::Base(c.missing(a).intersect(&c.missing(b)).first()?));
    }
    validate(c, &y).ok()?;
    let m = y.measure(c);
    Some(Found::State(Counterexample::Tree(y), m))
}

fn keep(best: &mut Option<Found>, f: Option<Found>, bound: Measure) {
    if let Some(f) = f {
        let under = f.rank().is_none_or(|m| m < bound);
        if under && best.as_ref().is_none_or(|b| f.better_than(b)) {
            *best = Some(f);
        }
    }
}

/// Best counterexample strictly below `bound` reachable without further
/// recoloring, derived from `state`'s structure.
fn candidates(c: &PartialColoring, state: &Counterexample, bound: Measure) -> Option<Found> {
    let ett = state.ett();
    let e = ett.uncolored_edge();
    let [a, b] = c.graph().endpoints(e);
    if let Some(col) = c.missing(a).intersect(&c.missing(b)).first() {
        return Some(Found::Base(col));
    }
    let mut best = None;
    match state {
        Counterexample::Tree(x) => {
            keep(&mut best, settle(c, x), bound);
            for y in variants(c, x) {
                keep(&mut best, settle(c, &y), bound);
            }
        }
        Counterexample::Interchange(r) => {
            for y in closures_at_exits(c, r) {
                keep(&mut best, Some(y), bound);
            }
        }
    }
    if best.is_some() {
        return best;
    }
    for r in (0..=ett.n()).rev() {
        if let Some(z) = regrow_from(c, ett, r) {
            keep(&mut best, Some(z), bound);
            if best.is_some() {
                return best;
            }
        }
    }
    best
}

/// `T⁻`, `T*` and path-tail rearrangements of the tail of `x`.
fn variants(c: &PartialColoring, x: &Ett) -> Vec<Ett> {
    let g = c.graph();
    let t = &x.tree;
    let split = x.hierarchy().top_level();
    let p = t.len() - 1;
    let mut out = Vec::new();
    if p > split {
        let ep = t.edge_into(p);
        let prev = t.vertex(p - 1);
        let [u, v] = g.endpoints(ep);
        if u != prev && v != prev {
            // T*: swap the last two vertices
            let mut vs = t.vertices().to_vec();
            let mut es = t.edges().to_vec();
            vs.swap(p - 1, p);
            es.swap(p - 2, p - 1);
            if let Some(ts) = TreeSequence::from_parts(g, vs.clone(), es.clone()) {
                out.push(Ett { tree: ts, ..x.clone() });
            }
            // T⁻: drop y_{p-1}
            vs.remove(p);
            es.remove(p - 1);
            if let Some(tm) = TreeSequence::from_parts(g, vs, es) {
                out.push(Ett { tree: tm, ..x.clone() });
            }
        }
    }
    // path-tails: follow a two-colored chain from the last vertex back into the tree
    let yp = t.last();
    for a in c.missing(yp).iter() {
        for b in 1..=c.k() {
            if b == a {
                continue;
            }
            let ch = chain_at(c, yp, a, b);
            if ch.kind != ChainKind::Path || ch.is_trivial() {
                continue;
            }
            // orient so the walk starts at y_p
            let (vs, es) = if ch.vertices[0] == yp {
                (ch.vertices.clone(), ch.edges.clone())
            } else {
                let mut vs = ch.vertices.clone();
                let mut es = ch.edges.clone();
                vs.reverse();
                es.reverse();
                (vs, es)
            };
            let Some(hit) = (1..vs.len()).find(|&i| t.position(vs[i]).is_some_and(|q| q < p)) else {
                continue;
            };
            let u_pos = t.position(vs[hit]).unwrap();
            for len in (u_pos + 1).max(split)..t.len() {
                let base = t.prefix(len);
                if vs[..hit].iter().any(|&w| base.contains(w)) {
                    continue;
                }
                let mut tt = base;
                let mut ok = true;
                for i in (0..hit).rev() {
                    if tt.contains(vs[i]) {
                        ok = false;
                        break;
                    }
                    tt.push(g, es[i], vs[i]);
                }
                if ok && tt.len() > split {
                    out.push(Ett { tree: tt, ..x.clone() });
                }
            }
        }
    }
    out.retain(|y| y.tree.len() > split && y.ends[y.n()] < y.tree.len());
    out
}

/// For a closed rung with three exit paths: the closure of the tree up to
/// each later exit vertex, as a new interchangeability counterexample.
fn closures_at_exits(c: &PartialColoring, r: &A2Report) -> Vec<Found> {
    let ett = &r.ett;
    let t = &ett.tree;
    let base = ett.ends[ett.n()];
    let mut out = Vec::new();
    for x in &r.exits {
        let Some(pos) = t.position(x.exit_vertex) else { continue };
        if pos < base {
            continue;
        }
        let tree = closure(c, &t.prefix(pos + 1), &ColorSet::full(c.k()));
        let y = Ett { tree, ..ett.clone() };
        if let Some(f) = settle_closed(c, &y) {
            out.push(f);
        }
    }
    out
}

/// A closed candidate rung: valid ladder (hierarchy aside), elementary, and
/// failing interchangeability.
fn settle_closed(c: &PartialColoring, y: &Ett) -> Option<Found> {
    if first_collision(c, &y.tree, 1).is_some() {
        return None;
    }
    let mut z = y.clone();
    // the hierarchy is irrelevant for a closed rung; check the ladder only
    let n = z.n();
    z.hier[n] = Hierarchy { levels: vec![z.ends[n]], gamma: vec![vec![]], reserved: z.hier[n].reserved };
    if let Err(msg) = validate(c, &z) {
        if !msg.starts_with("hierarchy") {
            return None;
        }
    }
    let r = interchange_violation(c, y)?;
    let m = r.measure;
    Some(Found::State(Counterexample::Interchange(Box::new(r)), m))
}

/// Keeps the ladder up to `T_r`, regrows rung `r + 1` canonically, and
/// continues the canonical construction.
fn regrow_from(c: &PartialColoring, ett: &Ett, r: usize) -> Option<Found> {
    let z = if r == 0 {
        Ett::start(c, ett.uncolored_edge()).ok()?
    } else {
        let base = ett.rung_tree(r);
        let mut z = Ett {
            tree: base.clone(),
            ends: ett.ends[..=r].to_vec(),
            ext: ett.ext[..r].to_vec(),
            hier: ett.hier[..r].to_vec(),
        };
        let h = Hierarchy::start(c, &base, &z.ctx(r)).ok()?;
        z.hier.push(h);
        let f = ett.ext[r - 1].edge;
        let g = c.graph();
        let [u, v] = g.endpoints(f);
        if base.contains(u) == base.contains(v) {
            return None;
        }
        z.tree.push_edge(g, f);
        validate(c, &z).ok()?;
        z
    };
    match grow(c, z, &mut Trace::disabled()).ok()? {
        Built::BaseCase(col) => Some(Found::Base(col)),
        Built::NonElementary(y) => {
            let m = y.measure(c);
            Some(Found::State(Counterexample::Tree(y), m))
        }
        Built::Interchange(rep) => {
            let m = rep.measure;
            Some(Found::State(Counterexample::Interchange(rep), m))
        }
        Built::StronglyClosed(_) => None,
    }
}

/// Re-checks a certificate: odd size at least 3, enough induced edges, and
/// returns the density bound `⌈|E(G[X])| / ((|X|−1)/2)⌉`, which exceeds `k`.
pub fn certificate_count_check(c: &PartialColoring, cert: &VertexSet, k: usize) -> Result<usize> {
    let g = c.graph();
    cert.check(g.vertex_count())?;
    let s = cert.len();
    if s < 3 || s % 2 == 0 {
        return Err(Error::InvalidCertificate(format!("size {s} is not odd and at least 3")));
    }
    let m = g.induced_edge_count(cert);
    let half = (s - 1) / 2;
    if m < k * half + 1 {
        return Err(Error::InvalidCertificate(format!("{m} induced edges, need {}", k * half + 1)));
    }
    let bound = m.div_ceil(half);
    if bound <= k {
        return Err(Error::InvalidCertificate(format!("bound {bound} does not exceed {k}")));
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Multigraph;
    use std::sync::Arc;

    #[test]
    fn certificate_arithmetic() {
        let g = Arc::new(fat_triangle(2));
        let c = PartialColoring::new(g.clone(), 5);
        let all = VertexSet::all(3);
        assert_eq!(certificate_count_check(&c, &all, 5), Ok(6));
        let g3 = Arc::new(fat_triangle(3));
        let c3 = PartialColoring::new(g3, 8);
        assert_eq!(certificate_count_check(&c3, &all, 8), Ok(9));
        let two: VertexSet = [0, 1].into_iter().collect();
        assert!(matches!(certificate_count_check(&c, &two, 5), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn single_edge_is_colored() {
        let g = Arc::new(single_edge());
        let c = PartialColoring::new(g, 2);
        let (res, _) = resolve(c, 100, &mut Trace::disabled()).unwrap();
        assert!(matches!(res, Resolution::Colored(c) if c.is_total()));
    }

    #[test]
    fn fat_triangle_certificate() {
        let g = Arc::new(fat_triangle(2));
        let cols = [Some(1), Some(2), Some(3), Some(4), Some(5), None];
        // pairs: 0-1 x2 (1,2), 1-2 x2 (3,4), 0-2 x2 (5, uncolored)
        let c = PartialColoring::from_colors(g, 5, &cols).unwrap();
        let (res, _) = resolve(c, 100, &mut Trace::disabled()).unwrap();
        assert!(matches!(res, Resolution::Certificate(x) if x.len() == 3));
    }

    #[test]
    fn path_number_on_star_tail() {
        // tail hanging off one vertex: a 2-edge star rooted mid-sequence
        let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let mut t = TreeSequence::from_edge(&g, 0);
        t.push_edge(&g, 1);
        t.push_edge(&g, 2);
        assert_eq!(path_number(&g, &t, 1), 3);
        assert_eq!(path_number(&g, &t, 2), 2);
    }
}
