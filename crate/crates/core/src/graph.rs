//! Loopless multigraphs, vertex sets, and the text graph format.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// A loopless multigraph with dense ids. Parallel edges are distinct ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    ends: Vec<[Vertex; 2]>,
    incident: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    /// Builds a graph from an edge list; edge ids follow list order.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("graph needs at least one vertex".into()));
        }
        let mut incident = vec![Vec::new(); n];
        let mut ends = Vec::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n {
                return Err(Error::BadVertex(u));
            }
            if v >= n {
                return Err(Error::BadVertex(v));
            }
            if u == v {
                return Err(Error::InvalidConfig(format!("edge {id} is a self-loop")));
            }
            ends.push([u, v]);
            incident[u].push(id);
            incident[v].push(id);
        }
        Ok(Multigraph { n, ends, incident })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> [Vertex; 2] {
        self.ends[e]
    }

    /// The end of `e` that is not `v`.
    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let [a, b] = self.ends[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident[v].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, [Vertex; 2])> + '_ {
        self.ends.iter().copied().enumerate()
    }

    /// Δ(G); zero for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of parallel edges between `u` and `v`.
    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.incident[u]
            .iter()
            .filter(|&&e| self.other_end(e, u) == v)
            .count()
    }

    /// μ(G).
    pub fn max_multiplicity(&self) -> usize {
        let mut best = 0;
        let mut count = vec![0usize; self.n];
        for u in 0..self.n {
            for &e in &self.incident[u] {
                let w = self.other_end(e, u);
                count[w] += 1;
                best = best.max(count[w]);
            }
            for &e in &self.incident[u] {
                count[self.other_end(e, u)] = 0;
            }
        }
        best
    }

    /// Edges with exactly one end in `x`, ascending.
    pub fn boundary_edges(&self, x: &VertexSet) -> Result<Vec<EdgeId>> {
        if x.is_empty() {
            return Err(Error::EmptySet);
        }
        let mask = x.mask(self.n);
        Ok(self
            .edges()
            .filter(|(_, [u, v])| mask[*u] != mask[*v])
            .map(|(e, _)| e)
            .collect())
    }

    /// Number of edges with both ends in `x`.
    pub fn induced_edge_count(&self, x: &VertexSet) -> usize {
        let mask = x.mask(self.n);
        self.ends.iter().filter(|[u, v]| mask[*u] && mask[*v]).count()
    }

    /// G[x] with densely renumbered vertices and the old-to-new vertex map.
    /// Edge order of G is preserved.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<(Multigraph, Vec<Option<Vertex>>)> {
        if x.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut map = vec![None; self.n];
        for (i, v) in x.iter().enumerate() {
            map[v] = Some(i);
        }
        let edges: Vec<(Vertex, Vertex)> = self
            .ends
            .iter()
            .filter_map(|[u, v]| Some((map[*u]?, map[*v]?)))
            .collect();
        let sub = Multigraph::from_edges(x.len(), &edges)?;
        Ok((sub, map))
    }
}

/// A set of vertex ids kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn all(n: usize) -> Self {
        VertexSet { members: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: Vertex) {
        if let Err(i) = self.members.binary_search(&v) {
            self.members.insert(i, v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    /// Membership table over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.members {
            if v < n {
                m[v] = true;
            }
        }
        m
    }

    /// Checks every member is a vertex of a graph with `n` vertices.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&v) if v >= n => Err(Error::BadVertex(v)),
            _ => Ok(()),
        }
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut members: Vec<Vertex> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }
}

/// Δ(G) as a free function.
pub fn max_degree(g: &Multigraph) -> usize {
    g.max_degree()
}

/// Parses the `p edge n m` / `e u v` format. Vertex ids in the file are 1-based.
pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let mut tok = raw.split_whitespace();
        let Some(tag) = tok.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err(line, "duplicate header"));
                }
                if tok.next() != Some("edge") {
                    return Err(err(line, "malformed header, expected `p edge <n> <m>`"));
                }
                let n = parse_num(tok.next()).ok_or_else(|| err(line, "malformed vertex count"))?;
                let m = parse_num(tok.next()).ok_or_else(|| err(line, "malformed edge count"))?;
                if tok.next().is_some() {
                    return Err(err(line, "trailing tokens in header"));
                }
                if n == 0 {
                    return Err(err(line, "graph needs at least one vertex"));
                }
                header = Some((n, m));
                edges.reserve(m);
            }
            "e" => {
                let Some((n, m)) = header else {
                    return Err(err(line, "edge line before header"));
                };
                let u = parse_num(tok.next()).ok_or_else(|| err(line, "malformed edge"))?;
                let v = parse_num(tok.next()).ok_or_else(|| err(line, "malformed edge"))?;
                if tok.next().is_some() {
                    return Err(err(line, "trailing tokens in edge line"));
                }
                if u == 0 || u > n || v == 0 || v > n {
                    return Err(err(line, "vertex id out of range"));
                }
                if u == v {
                    return Err(err(line, "self-loop"));
                }
                if edges.len() == m {
                    return Err(err(line, "edge count mismatch: more edges than declared"));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(err(line, "unknown line type")),
        }
    }
    let Some((n, m)) = header else {
        return Err(err(last_line.max(1), "missing `p edge` header"));
    };
    if edges.len() != m {
        return Err(err(
            last_line.max(1),
            &format!("edge count mismatch: declared {m}, found {}", edges.len()),
        ));
    }
    Multigraph::from_edges(n, &edges)
}

fn parse_num(tok: Option<&str>) -> Option<usize> {
    tok?.parse().ok()
}

/// Writes the graph in the same format `parse_graph` reads.
pub fn write_graph(g: &Multigraph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for (_, [u, v]) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(single_edge().max_degree(), 1);
        assert_eq!(fat_triangle(3).max_degree(), 6);
        let p = petersen();
        assert_eq!(p.max_degree(), 3);
        // independent count from the endpoint list
        let mut deg = vec![0; 10];
        for (_, [u, v]) in p.edges() {
            deg[u] += 1;
            deg[v] += 1;
        }
        assert!(deg.iter().all(|&d| d == 3));
        assert_eq!(Multigraph::from_edges(4, &[]).unwrap().max_degree(), 0);
    }

    #[test]
    fn multiplicity() {
        let g = fat_triangle(4);
        assert_eq!(g.multiplicity(0, 1), 4);
        assert_eq!(g.max_multiplicity(), 4);
        assert_eq!(petersen().max_multiplicity(), 1);
    }

    #[test]
    fn boundary() {
        let g = fat_triangle(2);
        assert_eq!(g.boundary_edges(&VertexSet::all(3)).unwrap(), Vec::<EdgeId>::new());
        let x: VertexSet = [0, 1].into_iter().collect();
        let b = g.boundary_edges(&x).unwrap();
        assert_eq!(b.len(), 4);
        for e in b {
            assert!(g.endpoints(e).contains(&2));
        }
        assert_eq!(single_edge().boundary_edges(&[0].into_iter().collect()).unwrap(), vec![0]);
        assert_eq!(g.boundary_edges(&VertexSet::new()), Err(Error::EmptySet));
    }

    #[test]
    fn induced() {
        let path = Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let (sub, map) = path.induced_subgraph(&[0, 2].into_iter().collect()).unwrap();
        assert_eq!((sub.vertex_count(), sub.edge_count()), (2, 0));
        assert_eq!(map, vec![Some(0), None, Some(1)]);

        let p = petersen();
        let (copy, map) = p.induced_subgraph(&VertexSet::all(10)).unwrap();
        assert_eq!(copy, p);
        assert_eq!(map, (0..10).map(Some).collect::<Vec<_>>());

        let (outer, _) = p.induced_subgraph(&(0..5).collect()).unwrap();
        assert_eq!((outer.vertex_count(), outer.edge_count()), (5, 5));
        assert!(p.induced_subgraph(&VertexSet::new()).is_err());
    }

    #[test]
    fn parse_ok() {
        let g = parse_graph("p edge 2 1\ne 1 2").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        let g = parse_graph("c fat\np edge 3 6\ne 1 2\ne 1 2\ne 2 3\ne 2 3\ne 1 3\ne 1 3\n").unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.max_degree(), 4);
    }

    #[test]
    fn parse_errors() {
        let line = |t: &str| match parse_graph(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line("p edge 2 1\ne 1 1"), 2);
        assert_eq!(line("e 1 2"), 1);
        assert_eq!(line("p edge 2 1\ne 1 3"), 2);
        assert_eq!(line("p edge 2 2\ne 1 2"), 2);
        assert_eq!(line("p edge 2 1\ne 1 2\ne 1 2"), 3);
        assert_eq!(line("p node 2 1"), 1);
        assert_eq!(line("c x\np edge 2 x"), 2);
        assert_eq!(line("p edge 2 0\np edge 2 0"), 2);
        assert_eq!(line("p edge 2 1\nq 1 2"), 2);
    }

    #[test]
    fn roundtrip() {
        let g = petersen();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_loops_and_bad_ids() {
        assert!(Multigraph::from_edges(2, &[(1, 1)]).is_err());
        assert_eq!(Multigraph::from_edges(2, &[(0, 2)]), Err(Error::BadVertex(2)));
    }
}
