//! Two-colored chains, Kempe changes, and how chains meet a vertex set.

use crate::coloring::{Color, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Vertex, VertexSet};
use crate::trace::{join, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Path,
    Cycle,
}

/// A maximal (α,β)-chain or a subpath of one. Edges alternate between the two colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub alpha: Color,
    pub beta: Color,
    /// For a cycle the first vertex is not repeated at the end.
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
    pub kind: ChainKind,
    version: u64,
}

impl Chain {
    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn ends(&self) -> Option<(Vertex, Vertex)> {
        match self.kind {
            ChainKind::Path => Some((self.vertices[0], *self.vertices.last().unwrap())),
            ChainKind::Cycle => None,
        }
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    fn segment(&self, vertices: Vec<Vertex>, edges: Vec<EdgeId>) -> Chain {
        Chain {
            alpha: self.alpha,
            beta: self.beta,
            vertices,
            edges,
            kind: ChainKind::Path,
            version: self.version,
        }
    }
}

fn walk(c: &PartialColoring, start: Vertex, first: Color, second: Color) -> (Vec<Vertex>, Vec<EdgeId>, bool) {
    let g = c.graph();
    let (mut vs, mut es) = (Vec::new(), Vec::new());
    let (mut cur, mut col, mut next) = (start, first, second);
    while let Some(e) = c.edge_at(cur, col) {
        let w = g.other_end(e, cur);
        es.push(e);
        if w == start {
            return (vs, es, true);
        }
        vs.push(w);
        cur = w;
        std::mem::swap(&mut col, &mut next);
    }
    (vs, es, false)
}

/// P_v(α,β): the maximal (α,β)-chain through `v`; `{v}` if `v` misses both colors.
pub fn chain_at(c: &PartialColoring, v: Vertex, alpha: Color, beta: Color) -> Chain {
    debug_assert_ne!(alpha, beta);
    let (fwd_v, fwd_e, cycle) = walk(c, v, alpha, beta);
    let version = c.version();
    if cycle {
        let mut vertices = vec![v];
        vertices.extend(fwd_v);
        return Chain { alpha, beta, vertices, edges: fwd_e, kind: ChainKind::Cycle, version };
    }
    let (back_v, back_e, _) = walk(c, v, beta, alpha);
    let mut vertices: Vec<Vertex> = back_v.into_iter().rev().collect();
    vertices.push(v);
    vertices.extend(fwd_v);
    let mut edges: Vec<EdgeId> = back_e.into_iter().rev().collect();
    edges.extend(fwd_e);
    Chain { alpha, beta, vertices, edges, kind: ChainKind::Path, version }
}

fn check_current(c: &PartialColoring, chain: &Chain) -> Result<()> {
    if chain.version != c.version() {
        return Err(Error::StaleChain);
    }
    // a subpath of a longer chain is not a chain
    if let Some((a, b)) = chain.ends() {
        let (ca, cb) = (chain.alpha, chain.beta);
        let open_end = |v: Vertex, last: Option<EdgeId>| {
            [ca, cb].into_iter().all(|col| match c.edge_at(v, col) {
                None => true,
                Some(f) => Some(f) == last,
            })
        };
        if !open_end(a, chain.edges.first().copied()) || !open_end(b, chain.edges.last().copied()) {
            return Err(Error::StaleChain);
        }
    }
    Ok(())
}

/// Interchanges the two colors on the chain.
pub fn kempe_swap(c: &mut PartialColoring, chain: &Chain) -> Result<()> {
    kempe_swap_traced(c, chain, &mut Trace::disabled())
}

pub fn kempe_swap_traced(c: &mut PartialColoring, chain: &Chain, trace: &mut Trace) -> Result<()> {
    check_current(c, chain)?;
    if chain.edges.is_empty() {
        return Ok(());
    }
    c.exchange(&chain.edges, chain.alpha, chain.beta);
    trace.emit(|| format!("K {} {} {}", chain.alpha, chain.beta, join(&chain.edges)));
    Ok(())
}

/// Extracts P_v(α,β) and swaps it.
pub fn swap_at(c: &mut PartialColoring, v: Vertex, alpha: Color, beta: Color, trace: &mut Trace) {
    let chain = chain_at(c, v, alpha, beta);
    kempe_swap_traced(c, &chain, trace).expect("fresh chain");
}

/// φ/(G−t, α, β): exchanges α and β on all edges with no end in `t`.
pub fn swap_outside(c: &mut PartialColoring, t: &VertexSet, alpha: Color, beta: Color) -> Result<()> {
    swap_outside_traced(c, t, alpha, beta, &mut Trace::disabled())
}

pub fn swap_outside_traced(
    c: &mut PartialColoring,
    t: &VertexSet,
    alpha: Color,
    beta: Color,
    trace: &mut Trace,
) -> Result<()> {
    let n = c.graph().vertex_count();
    let inside = t.mask(n);
    for v in t.iter() {
        for col in [alpha, beta] {
            if let Some(e) = c.edge_at(v, col) {
                if !inside[c.graph().other_end(e, v)] {
                    return Err(Error::BoundaryColorPresent(col));
                }
            }
        }
    }
    let mut done = vec![false; n];
    for v in 0..n {
        if inside[v] || done[v] {
            continue;
        }
        let chain = chain_at(c, v, alpha, beta);
        for &w in &chain.vertices {
            done[w] = true;
        }
        kempe_swap_traced(c, &chain, trace)?;
    }
    Ok(())
}

/// Subpath from an end `outside_end` (missing α or β) to the only vertex it shares with the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitPath {
    pub chain: Chain,
    pub exit_vertex: Vertex,
    pub exit_edge: EdgeId,
    pub outside_end: Vertex,
}

/// Subpath meeting the set exactly at its two roots. A cycle meeting the set
/// at a single vertex gives an ear whose roots coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ear {
    pub chain: Chain,
    pub roots: (Vertex, Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainPiece {
    Exit(ExitPath),
    Ear(Ear),
    /// A maximal run of the chain inside the set.
    Contained(Chain),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub pieces: Vec<ChainPiece>,
    /// Distinct (α,β)-paths (trivial ones included) meeting the set.
    pub path_count: usize,
}

impl ChainReport {
    pub fn exits(&self) -> impl Iterator<Item = &ExitPath> {
        self.pieces.iter().filter_map(|p| match p {
            ChainPiece::Exit(x) => Some(x),
            _ => None,
        })
    }

    pub fn ears(&self) -> impl Iterator<Item = &Ear> {
        self.pieces.iter().filter_map(|p| match p {
            ChainPiece::Ear(x) => Some(x),
            _ => None,
        })
    }

    /// At most one (α,β)-path meets the set.
    pub fn interchangeable(&self) -> bool {
        self.path_count <= 1
    }
}

/// Splits every (α,β)-chain meeting `t` into exit paths, ears, and inside runs.
pub fn classify_chains_through(c: &PartialColoring, t: &VertexSet, alpha: Color, beta: Color) -> ChainReport {
    let n = c.graph().vertex_count();
    let inside = t.mask(n);
    let mut seen = vec![false; n];
    let mut report = ChainReport::default();
    for v in t.iter() {
        if seen[v] {
            continue;
        }
        let chain = chain_at(c, v, alpha, beta);
        for &w in &chain.vertices {
            seen[w] = true;
        }
        if chain.kind == ChainKind::Path {
            report.path_count += 1;
        }
        decompose(&chain, &inside, &mut report.pieces);
    }
    report
}

fn decompose(chain: &Chain, inside: &[bool], out: &mut Vec<ChainPiece>) {
    let vs = &chain.vertices;
    let es = &chain.edges;
    let len = vs.len();
    match chain.kind {
        ChainKind::Path => {
            // runs of consecutive vertices with the same side
            let mut i = 0;
            while i < len {
                let side = inside[vs[i]];
                let mut j = i;
                while j + 1 < len && inside[vs[j + 1]] == side {
                    j += 1;
                }
                if side {
                    out.push(ChainPiece::Contained(chain.segment(vs[i..=j].to_vec(), es[i..j].to_vec())));
                } else if i > 0 && j + 1 < len {
                    out.push(ChainPiece::Ear(Ear {
                        chain: chain.segment(vs[i - 1..=j + 1].to_vec(), es[i - 1..=j].to_vec()),
                        roots: (vs[i - 1], vs[j + 1]),
                    }));
                } else if i == 0 && j + 1 < len {
                    out.push(ChainPiece::Exit(ExitPath {
                        chain: chain.segment(vs[0..=j + 1].to_vec(), es[0..=j].to_vec()),
                        exit_vertex: vs[j + 1],
                        exit_edge: es[j],
                        outside_end: vs[0],
                    }));
                } else if i > 0 && j + 1 == len {
                    let mut sv: Vec<Vertex> = vs[i - 1..].to_vec();
                    let mut se: Vec<EdgeId> = es[i - 1..].to_vec();
                    sv.reverse();
                    se.reverse();
                    out.push(ChainPiece::Exit(ExitPath {
                        chain: chain.segment(sv, se),
                        exit_vertex: vs[i - 1],
                        exit_edge: es[i - 1],
                        outside_end: vs[len - 1],
                    }));
                }
                i = j + 1;
            }
        }
        ChainKind::Cycle => {
            // rotate so the walk starts at an inside vertex
            let Some(s) = (0..len).find(|&i| inside[vs[i]]) else { return };
            let rv: Vec<Vertex> = (0..=len).map(|i| vs[(s + i) % len]).collect();
            let re: Vec<EdgeId> = (0..len).map(|i| es[(s + i) % len]).collect();
            let mut i = 0;
            while i < len {
                let side = inside[rv[i]];
                let mut j = i;
                while j + 1 < len && inside[rv[j + 1]] == side {
                    j += 1;
                }
                if side {
                    out.push(ChainPiece::Contained(chain.segment(rv[i..=j].to_vec(), re[i..j].to_vec())));
                } else {
                    out.push(ChainPiece::Ear(Ear {
                        chain: chain.segment(rv[i - 1..=j + 1].to_vec(), re[i - 1..=j].to_vec()),
                        roots: (rv[i - 1], rv[j + 1]),
                    }));
                }
                i = j + 1;
            }
        }
    }
}

/// True when every color class is a matching.
pub fn classes_are_matchings(c: &PartialColoring) -> bool {
    let g = c.graph();
    let mut used = vec![false; g.vertex_count() * (c.k() + 1)];
    for (e, [u, v]) in g.edges() {
        if let Some(col) = c.color(e) {
            for w in [u, v] {
                let slot = w * (c.k() + 1) + col;
                if used[slot] {
                    return false;
                }
                used[slot] = true;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;
    use std::sync::Arc;

    fn colored(n: usize, edges: &[(usize, usize, usize)], k: usize) -> PartialColoring {
        let list: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        let g = Arc::new(Multigraph::from_edges(n, &list).unwrap());
        let cols: Vec<Option<usize>> = edges.iter().map(|&(_, _, c)| Some(c)).collect();
        PartialColoring::from_colors(g, k, &cols).unwrap()
    }

    #[test]
    fn trivial_chain() {
        let c = colored(3, &[(0, 1, 1)], 3);
        let ch = chain_at(&c, 2, 1, 2);
        assert!(ch.is_trivial());
        assert_eq!(ch.vertices, vec![2]);
        let mut d = c.clone();
        kempe_swap(&mut d, &ch).unwrap();
        assert_eq!(d.colors(), c.colors());
    }

    #[test]
    fn path_chain_swap() {
        let mut c = colored(3, &[(0, 1, 1), (1, 2, 2)], 2);
        let ch = chain_at(&c, 0, 1, 2);
        assert_eq!(ch.kind, ChainKind::Path);
        assert_eq!(ch.vertices, vec![0, 1, 2]);
        assert_eq!(chain_at(&c, 1, 2, 1).vertices.len(), 3);
        kempe_swap(&mut c, &ch).unwrap();
        assert_eq!(c.colors(), vec![Some(2), Some(1)]);
        assert_eq!(kempe_swap(&mut c, &ch), Err(Error::StaleChain));
    }

    #[test]
    fn cycle_chain() {
        let c = colored(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)], 3);
        for v in 0..4 {
            let ch = chain_at(&c, v, 1, 2);
            assert_eq!(ch.kind, ChainKind::Cycle);
            assert_eq!(ch.vertices.len(), 4);
        }
        let mut d = c.clone();
        kempe_swap(&mut d, &chain_at(&c, 0, 1, 2)).unwrap();
        for v in 0..4 {
            assert_eq!(d.missing(v), c.missing(v));
        }
    }

    #[test]
    fn subpath_is_rejected() {
        let c = colored(5, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 4, 2)], 2);
        let report = classify_chains_through(&c, &[0, 3].into_iter().collect(), 1, 2);
        let ear = report.ears().next().unwrap().chain.clone();
        let mut d = c.clone();
        assert_eq!(kempe_swap(&mut d, &ear), Err(Error::StaleChain));
    }

    #[test]
    fn swap_outside_two_triangles() {
        let mut c = colored(
            6,
            &[(0, 1, 1), (1, 2, 2), (0, 2, 3), (3, 4, 1), (4, 5, 2), (3, 5, 3)],
            4,
        );
        let t: VertexSet = [0, 1, 2].into_iter().collect();
        swap_outside(&mut c, &t, 1, 2).unwrap();
        assert_eq!(c.colors()[3..], [Some(2), Some(1), Some(3)]);
        assert_eq!(c.colors()[..3], [Some(1), Some(2), Some(3)]);
        assert!(classes_are_matchings(&c));
    }

    #[test]
    fn swap_outside_checks_boundary() {
        let mut c = colored(3, &[(0, 1, 1), (1, 2, 2)], 3);
        let t: VertexSet = [0].into_iter().collect();
        assert_eq!(swap_outside(&mut c, &t, 1, 3), Err(Error::BoundaryColorPresent(1)));
        let all = VertexSet::all(3);
        let before = c.colors();
        swap_outside(&mut c, &all, 1, 2).unwrap();
        assert_eq!(c.colors(), before);
    }

    #[test]
    fn ear_and_exit() {
        // 0 and 4 inside; chain 0-1-2-3-4 leaves and returns: one ear
        let c = colored(5, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 4, 2)], 3);
        let t: VertexSet = [0, 4].into_iter().collect();
        let r = classify_chains_through(&c, &t, 1, 2);
        let ears: Vec<_> = r.ears().collect();
        assert_eq!(ears.len(), 1);
        assert_eq!(ears[0].roots, (0, 4));
        assert_eq!(r.exits().count(), 0);
        assert_eq!(r.path_count, 1);

        // path 0-1-2-3, t = {0,1}, end 3 misses 1: one exit path through edge 1
        let c = colored(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1)], 3);
        let t: VertexSet = [0, 1].into_iter().collect();
        let r = classify_chains_through(&c, &t, 1, 2);
        let exits: Vec<_> = r.exits().collect();
        assert_eq!(exits.len(), 1);
        assert_eq!((exits[0].exit_vertex, exits[0].exit_edge, exits[0].outside_end), (1, 1, 3));
        assert_eq!(exits[0].chain.vertices, vec![3, 2, 1]);
    }
}
