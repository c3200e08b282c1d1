//! Partial k-edge-colorings with missing-color bookkeeping.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, Vertex, VertexSet};

/// Colors are `1..=k`.
pub type Color = usize;

const NONE: u32 = u32::MAX;

/// A set of colors stored as a bitset.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorSet {
    words: Vec<u64>,
}

impl ColorSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{1, ..., k}`.
    pub fn full(k: usize) -> Self {
        let mut s = ColorSet::new();
        for c in 1..=k {
            s.insert(c);
        }
        s
    }

    pub fn insert(&mut self, c: Color) {
        let (w, b) = (c / 64, c % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, c: Color) {
        if let Some(w) = self.words.get_mut(c / 64) {
            *w &= !(1u64 << (c % 64));
        }
    }

    pub fn contains(&self, c: Color) -> bool {
        self.words.get(c / 64).is_some_and(|w| w >> (c % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Ascending iteration.
    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn first(&self) -> Option<Color> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &ColorSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect(&self, other: &ColorSet) -> ColorSet {
        ColorSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &ColorSet) -> ColorSet {
        let words = self
            .words
            .iter()
            .enumerate()
            .map(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0))
            .collect();
        ColorSet { words }
    }

    pub fn intersects(&self, other: &ColorSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.difference(other).is_empty()
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::new();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Two vertices of a set sharing a missing color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub u: Vertex,
    pub v: Vertex,
    pub alpha: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureStatus {
    /// Colors of φ̄(X) used on ∂(X), together with colors used twice or more on ∂(X).
    Open(ColorSet),
    Closed,
    StronglyClosed,
}

/// A proper partial edge coloring with palette `1..=k`.
#[derive(Clone)]
pub struct PartialColoring {
    g: Arc<Multigraph>,
    k: usize,
    color: Vec<Color>,
    /// `at[v * (k + 1) + c]` is the edge at `v` colored `c`.
    at: Vec<u32>,
    version: u64,
}

impl PartialColoring {
    /// All edges uncolored.
    pub fn new(g: Arc<Multigraph>, k: usize) -> Self {
        let at = vec![NONE; g.vertex_count() * (k + 1)];
        let color = vec![0; g.edge_count()];
        PartialColoring { g, k, color, at, version: 0 }
    }

    /// Builds a coloring from explicit per-edge colors, checking propriety.
    pub fn from_colors(g: Arc<Multigraph>, k: usize, colors: &[Option<Color>]) -> Result<Self> {
        if colors.len() != g.edge_count() {
            return Err(Error::InvalidConfig("color list length differs from edge count".into()));
        }
        let mut c = PartialColoring::new(g, k);
        for (e, col) in colors.iter().enumerate() {
            if let Some(col) = *col {
                c.assign(e, col)?;
            }
        }
        Ok(c)
    }

    pub fn graph(&self) -> &Multigraph {
        &self.g
    }

    pub fn graph_arc(&self) -> &Arc<Multigraph> {
        &self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Bumped on every mutation.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn color(&self, e: EdgeId) -> Option<Color> {
        match self.color[e] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn colors(&self) -> Vec<Option<Color>> {
        (0..self.color.len()).map(|e| self.color(e)).collect()
    }

    pub fn uncolored(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.color.iter().enumerate().filter(|(_, &c)| c == 0).map(|(e, _)| e)
    }

    pub fn is_total(&self) -> bool {
        self.color.iter().all(|&c| c != 0)
    }

    /// The edge at `v` with color `c`, if any.
    pub fn edge_at(&self, v: Vertex, c: Color) -> Option<EdgeId> {
        match self.at[v * (self.k + 1) + c] {
            NONE => None,
            e => Some(e as EdgeId),
        }
    }

    pub fn is_missing(&self, v: Vertex, c: Color) -> bool {
        self.edge_at(v, c).is_none()
    }

    /// φ̄(v).
    pub fn missing(&self, v: Vertex) -> ColorSet {
        (1..=self.k).filter(|&c| self.is_missing(v, c)).collect()
    }

    /// φ̄(X).
    pub fn missing_union<I: IntoIterator<Item = Vertex>>(&self, xs: I) -> ColorSet {
        let mut s = ColorSet::new();
        for v in xs {
            s.union_with(&self.missing(v));
        }
        s
    }

    /// Colors `e` with `c`; a colored `e` is recolored.
    pub fn assign(&mut self, e: EdgeId, c: Color) -> Result<()> {
        if e >= self.color.len() {
            return Err(Error::BadEdge(e));
        }
        if c == 0 || c > self.k {
            return Err(Error::BadColor { edge: e, color: c });
        }
        let [u, v] = self.g.endpoints(e);
        for w in [u, v] {
            if let Some(f) = self.edge_at(w, c) {
                if f != e {
                    return Err(Error::BadColor { edge: e, color: c });
                }
            }
        }
        self.unassign(e);
        let stride = self.k + 1;
        self.color[e] = c;
        self.at[u * stride + c] = e as u32;
        self.at[v * stride + c] = e as u32;
        self.version += 1;
        Ok(())
    }

    pub fn unassign(&mut self, e: EdgeId) {
        let c = self.color[e];
        if c == 0 {
            return;
        }
        let stride = self.k + 1;
        let [u, v] = self.g.endpoints(e);
        self.at[u * stride + c] = NONE;
        self.at[v * stride + c] = NONE;
        self.color[e] = 0;
        self.version += 1;
    }

    /// Exchanges colors `a` and `b` on every listed edge at once. The caller
    /// guarantees the result is proper (a Kempe chain or a union of chains).
    pub(crate) fn exchange(&mut self, edges: &[EdgeId], a: Color, b: Color) {
        let stride = self.k + 1;
        for &e in edges {
            let [u, v] = self.g.endpoints(e);
            let c = self.color[e];
            self.at[u * stride + c] = NONE;
            self.at[v * stride + c] = NONE;
        }
        for &e in edges {
            let [u, v] = self.g.endpoints(e);
            let c = if self.color[e] == a { b } else { a };
            debug_assert!(self.color[e] == a || self.color[e] == b);
            debug_assert_eq!(self.at[u * stride + c], NONE);
            debug_assert_eq!(self.at[v * stride + c], NONE);
            self.color[e] = c;
            self.at[u * stride + c] = e as u32;
            self.at[v * stride + c] = e as u32;
        }
        self.version += 1;
    }

    /// Reinterprets the coloring in a larger palette.
    pub fn widen(&mut self, k: usize) {
        assert!(k >= self.k, "palette can only grow");
        let colors = self.color.clone();
        *self = PartialColoring::new(self.g.clone(), k);
        for (e, c) in colors.into_iter().enumerate() {
            if c != 0 {
                self.assign(e, c).expect("a proper coloring stays proper");
            }
        }
    }

    /// Smallest witness `(u, v, α)` with `u < v` if `x` is not elementary.
    pub fn is_elementary(&self, x: &VertexSet) -> std::result::Result<(), Witness> {
        let sets: Vec<(Vertex, ColorSet)> = x.iter().map(|v| (v, self.missing(v))).collect();
        for (i, (u, mu)) in sets.iter().enumerate() {
            for (v, mv) in &sets[i + 1..] {
                if let Some(alpha) = mu.intersect(mv).first() {
                    return Err(Witness { u: *u, v: *v, alpha });
                }
            }
        }
        Ok(())
    }

    /// Colors appearing on at least two boundary edges of `x`.
    pub fn defective_colors(&self, x: &VertexSet) -> ColorSet {
        let mut seen = ColorSet::new();
        let mut twice = ColorSet::new();
        for e in self.g.boundary_edges(x).unwrap_or_default() {
            if let Some(c) = self.color(e) {
                if seen.contains(c) {
                    twice.insert(c);
                }
                seen.insert(c);
            }
        }
        twice
    }

    pub fn closure_status(&self, x: &VertexSet) -> ClosureStatus {
        let miss = self.missing_union(x.iter());
        let mut seen = ColorSet::new();
        let mut leak = ColorSet::new();
        let mut twice = ColorSet::new();
        for e in self.g.boundary_edges(x).unwrap_or_default() {
            if let Some(c) = self.color(e) {
                if miss.contains(c) {
                    leak.insert(c);
                }
                if seen.contains(c) {
                    twice.insert(c);
                }
                seen.insert(c);
            }
        }
        if !leak.is_empty() {
            leak.union_with(&twice);
            ClosureStatus::Open(leak)
        } else if twice.is_empty() {
            ClosureStatus::StronglyClosed
        } else {
            ClosureStatus::Closed
        }
    }

    /// Recomputes every cache from the edge colors and checks propriety.
    pub fn audit(&self) -> Result<()> {
        let stride = self.k + 1;
        let mut at = vec![NONE; self.at.len()];
        for (e, &c) in self.color.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c > self.k {
                return Err(Error::BadColor { edge: e, color: c });
            }
            for v in self.g.endpoints(e) {
                if at[v * stride + c] != NONE {
                    return Err(Error::EngineInvariantViolation(format!(
                        "color {c} used twice at vertex {v}"
                    )));
                }
                at[v * stride + c] = e as u32;
            }
        }
        if at != self.at {
            return Err(Error::EngineInvariantViolation("stale color table".into()));
        }
        Ok(())
    }
}

impl fmt::Debug for PartialColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialColoring")
            .field("k", &self.k)
            .field("colors", &self.colors())
            .finish()
    }
}

/// φ̄(v) as a free function.
pub fn missing(c: &PartialColoring, v: Vertex) -> ColorSet {
    c.missing(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn arc(g: Multigraph) -> Arc<Multigraph> {
        Arc::new(g)
    }

    #[test]
    fn colorset_ops() {
        let a: ColorSet = [1, 3, 64, 70].into_iter().collect();
        let b: ColorSet = [3, 70, 5].into_iter().collect();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 3, 64, 70]);
        assert_eq!(a.intersect(&b).iter().collect::<Vec<_>>(), vec![3, 70]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![1, 64]);
        assert!(a.intersects(&b));
        assert_eq!(ColorSet::full(3).len(), 3);
        assert!(!ColorSet::full(3).contains(0));
    }

    #[test]
    fn missing_sets() {
        let g = arc(Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap());
        let mut c = PartialColoring::new(g, 3);
        assert_eq!(c.missing(0), ColorSet::full(3));
        c.assign(0, 1).unwrap();
        c.assign(1, 2).unwrap();
        assert_eq!(c.missing(1).iter().collect::<Vec<_>>(), vec![3]);
        let iso = arc(Multigraph::from_edges(1, &[]).unwrap());
        assert_eq!(PartialColoring::new(iso, 3).missing(0), ColorSet::full(3));
    }

    #[test]
    fn assign_rejects_conflicts() {
        let g = arc(fat_triangle(1));
        let mut c = PartialColoring::new(g, 3);
        c.assign(0, 1).unwrap();
        assert!(c.assign(1, 1).is_err());
        assert!(c.assign(1, 4).is_err());
        c.assign(0, 2).unwrap();
        assert_eq!(c.color(0), Some(2));
        c.audit().unwrap();
    }

    #[test]
    fn elementary() {
        let g = arc(single_edge());
        let c = PartialColoring::new(g, 2);
        assert_eq!(c.is_elementary(&[0].into_iter().collect()), Ok(()));
        assert_eq!(
            c.is_elementary(&[0, 1].into_iter().collect()),
            Err(Witness { u: 0, v: 1, alpha: 1 })
        );
    }

    #[test]
    fn closure_of_whole_graph() {
        let g = arc(petersen());
        let c = PartialColoring::new(g, 4);
        assert_eq!(c.closure_status(&VertexSet::all(10)), ClosureStatus::StronglyClosed);
        let g = arc(single_edge());
        let c = PartialColoring::new(g, 2);
        assert_eq!(c.closure_status(&VertexSet::all(2)), ClosureStatus::StronglyClosed);
    }

    #[test]
    fn widen_keeps_colors() {
        let g = arc(fat_triangle(1));
        let mut c = PartialColoring::from_colors(g, 3, &[Some(1), Some(2), Some(3)]).unwrap();
        c.widen(5);
        assert_eq!(c.k(), 5);
        assert_eq!(c.colors(), vec![Some(1), Some(2), Some(3)]);
        assert_eq!(c.missing(0).iter().collect::<Vec<_>>(), vec![2, 4, 5]);
        c.audit().unwrap();
    }
}
