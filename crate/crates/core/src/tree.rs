//! Tree-sequences, Tashkinov augmentation and closures.

use crate::coloring::{ColorSet, PartialColoring, Witness};
use crate::graph::{EdgeId, Multigraph, Vertex, VertexSet};
use crate::trace::Trace;

const ABSENT: u32 = u32::MAX;

/// `(y0, e1, y1, ..., ep, yp)`: every `e_j` joins `y_j` to an earlier vertex.
/// The position of a vertex in the sequence is the order ≺.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TreeSequence {
    vertices: Vec<Vertex>,
    /// `edges[j - 1]` is `e_j`.
    edges: Vec<EdgeId>,
    pos: Vec<u32>,
}

impl std::fmt::Debug for TreeSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T[{}", self.vertices[0])?;
        for (e, v) in self.edges.iter().zip(&self.vertices[1..]) {
            write!(f, " -{e}- {v}")?;
        }
        write!(f, "]")
    }
}

impl TreeSequence {
    /// `(x, e, y)` for the uncolored edge `e`; `x` is its smaller end.
    pub fn from_edge(g: &Multigraph, e: EdgeId) -> Self {
        let [a, b] = g.endpoints(e);
        let (x, y) = (a.min(b), a.max(b));
        let mut pos = vec![ABSENT; g.vertex_count()];
        pos[x] = 0;
        pos[y] = 1;
        TreeSequence { vertices: vec![x, y], edges: vec![e], pos }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// `e_1, ..., e_p`.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    /// `e_i`, the edge that brought in `y_i` (`i ≥ 1`).
    pub fn edge_into(&self, i: usize) -> EdgeId {
        self.edges[i - 1]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.pos[v] != ABSENT
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        match self.pos[v] {
            ABSENT => None,
            p => Some(p as usize),
        }
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Appends `(f, v)`; `f` must join `v` to a vertex already in the sequence.
    pub fn push(&mut self, g: &Multigraph, f: EdgeId, v: Vertex) {
        debug_assert!(!self.contains(v));
        debug_assert!(g.endpoints(f).contains(&v) && self.contains(g.other_end(f, v)));
        self.pos[v] = self.vertices.len() as u32;
        self.vertices.push(v);
        self.edges.push(f);
    }

    /// Appends the boundary edge `f`, whose outside end becomes the new vertex.
    pub fn push_edge(&mut self, g: &Multigraph, f: EdgeId) -> Vertex {
        let [a, b] = g.endpoints(f);
        let v = if self.contains(a) { b } else { a };
        self.push(g, f, v);
        v
    }

    /// The segment `T(y_{len-1})`.
    pub fn prefix(&self, len: usize) -> TreeSequence {
        let mut t = self.clone();
        t.truncate(len);
        t
    }

    pub fn truncate(&mut self, len: usize) {
        assert!(len >= 1);
        for &v in &self.vertices[len.min(self.vertices.len())..] {
            self.pos[v] = ABSENT;
        }
        self.vertices.truncate(len);
        self.edges.truncate(len - 1);
    }

    /// Rebuilds from explicit lists, checking the tree-sequence invariants.
    pub fn from_parts(g: &Multigraph, vertices: Vec<Vertex>, edges: Vec<EdgeId>) -> Option<Self> {
        if vertices.is_empty() || edges.len() + 1 != vertices.len() {
            return None;
        }
        let mut pos = vec![ABSENT; g.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= g.vertex_count() || pos[v] != ABSENT {
                return None;
            }
            pos[v] = i as u32;
        }
        let mut seen = std::collections::HashSet::new();
        for (j, &e) in edges.iter().enumerate() {
            if e >= g.edge_count() || !seen.insert(e) {
                return None;
            }
            let v = vertices[j + 1];
            let [a, b] = g.endpoints(e);
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                return None;
            };
            if pos[other] == ABSENT || pos[other] as usize > j {
                return None;
            }
        }
        Some(TreeSequence { vertices, edges, pos })
    }

    /// Checks the structural invariants against `g`.
    pub fn is_valid(&self, g: &Multigraph) -> bool {
        TreeSequence::from_parts(g, self.vertices.clone(), self.edges.clone()).as_ref() == Some(self)
    }

    /// φ̄ of the whole sequence.
    pub fn missing(&self, c: &PartialColoring) -> ColorSet {
        c.missing_union(self.vertices.iter().copied())
    }
}

/// Boundary edges whose color is missing somewhere in `t` and lies in `allowed`, ascending.
pub fn taa_candidates(c: &PartialColoring, t: &TreeSequence, allowed: &ColorSet) -> Vec<EdgeId> {
    let g = c.graph();
    let usable = t.missing(c).intersect(allowed);
    let mut out = Vec::new();
    for col in usable.iter() {
        for &u in t.vertices() {
            if let Some(f) = c.edge_at(u, col) {
                if !t.contains(g.other_end(f, u)) {
                    out.push(f);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Grows `t` by TAA, always taking the smallest eligible edge, until no
/// boundary edge carries a color of φ̄(t) ∩ allowed.
pub fn closure(c: &PartialColoring, t: &TreeSequence, allowed: &ColorSet) -> TreeSequence {
    closure_traced(c, t, allowed, &mut Trace::disabled())
}

pub fn closure_traced(c: &PartialColoring, t: &TreeSequence, allowed: &ColorSet, trace: &mut Trace) -> TreeSequence {
    let g = c.graph();
    let mut t = t.clone();
    while let Some(&f) = taa_candidates(c, &t, allowed).first() {
        let v = t.push_edge(g, f);
        trace.emit(|| format!("T+ {f} {}", v + 1));
    }
    t
}

/// Elementarity of V(t) with the smallest witness.
pub fn elementary_or_witness(c: &PartialColoring, t: &TreeSequence) -> Result<(), Witness> {
    c.is_elementary(&t.vertex_set())
}

/// Index of the first vertex whose missing colors meet those of the earlier
/// vertices, starting the scan at `from`.
pub fn first_collision(c: &PartialColoring, t: &TreeSequence, from: usize) -> Option<usize> {
    let mut seen = ColorSet::new();
    for (i, &v) in t.vertices().iter().enumerate() {
        let m = c.missing(v);
        if i >= from.max(1) && m.intersects(&seen) {
            return Some(i);
        }
        seen.union_with(&m);
    }
    None
}

/// The path number of the part of `t` after the first `split` vertices:
/// the smallest `i ≥ 1` such that `(y_i, e_{i+1}, ..., y_p)` is a path,
/// where `y_1` is the vertex at index `split`.
pub fn path_number(g: &Multigraph, t: &TreeSequence, split: usize) -> usize {
    assert!(split >= 1 && split < t.len(), "the tail must be nonempty");
    let p = t.len() - split;
    let mut i = p;
    while i > 1 {
        // y_i sits at index split + i - 1
        let at = split + i - 1;
        let [a, b] = g.endpoints(t.edge_into(at));
        let prev = t.vertex(at - 1);
        if a == prev || b == prev {
            i -= 1;
        } else {
            break;
        }
    }
    i
}
