//! Exact small-instance oracles: density Γ by subset enumeration and the
//! chromatic index by backtracking. The engine never consults them.

use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSet};

pub const DEFAULT_GAMMA_LIMIT: usize = 20;
pub const DEFAULT_CHI_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub gamma: usize,
    pub argmax_set: VertexSet,
}

/// `⌈|E(H)| / ⌊|V(H)|/2⌋⌉` for an induced subgraph with `size ≥ 2` vertices.
pub fn density_of(edges: usize, size: usize) -> usize {
    edges.div_ceil(size / 2)
}

fn lex_less(a: u32, b: u32) -> bool {
    // compare the ascending id lists of two masks
    let (mut a, mut b) = (a, b);
    loop {
        match (a, b) {
            (0, 0) => return false,
            (0, _) => return true,
            (_, 0) => return false,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x < y;
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// Γ(G) over all induced subgraphs on at least two vertices. Subsets are
/// visited by increasing size; a size is skipped when even a complete
/// multigraph at maximum multiplicity could not beat the incumbent.
pub fn gamma_bruteforce(g: &Multigraph, limit: usize) -> Result<DensityReport> {
    let n = g.vertex_count();
    if n > limit || n > 30 {
        return Err(Error::TooLarge { size: n, limit: limit.min(30) });
    }
    if n < 2 {
        return Ok(DensityReport { gamma: 0, argmax_set: VertexSet::new() });
    }
    let mut mult = vec![vec![0u32; n]; n];
    for (_, [u, v]) in g.edges() {
        mult[u][v] += 1;
        mult[v][u] += 1;
    }
    let mu = g.max_multiplicity();
    let delta = g.max_degree();
    // induced edge counts of every mask, built from the mask without its lowest bit
    let full = 1usize << n;
    let mut count = vec![0u32; full];
    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut add = 0;
        let mut r = rest;
        while r != 0 {
            let u = r.trailing_zeros() as usize;
            add += mult[v][u];
            r &= r - 1;
        }
        count[mask] = count[rest] + add;
    }
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for mask in 1..full {
        by_size[(mask as u32).count_ones() as usize].push(mask as u32);
    }
    let mut best = 0usize;
    let mut best_mask = 0u32;
    for (size, masks) in by_size.iter().enumerate().skip(2) {
        let pairs = size * (size - 1) / 2;
        let cap = (pairs * mu).min(size * delta / 2);
        if density_of(cap, size) < best {
            continue;
        }
        for &mask in masks {
            let d = density_of(count[mask as usize] as usize, size);
            if d > best || (d == best && lex_less(mask, best_mask)) {
                best = d;
                best_mask = mask;
            }
        }
    }
    let argmax_set = (0..n).filter(|&v| best_mask >> v & 1 == 1).collect();
    Ok(DensityReport { gamma: best, argmax_set })
}

/// χ′(G): the smallest `k ≥ Δ` with a proper k-edge-coloring, found by
/// backtracking on the most constrained edge with per-vertex counting
/// bounds and interchangeable unused colors collapsed.
pub fn chromatic_index_oracle(g: &Multigraph, limit: usize) -> Result<usize> {
    let m = g.edge_count();
    if m > limit {
        return Err(Error::TooLarge { size: m, limit });
    }
    if m == 0 {
        return Ok(0);
    }
    let mut k = g.max_degree();
    loop {
        if colorable(g, k) {
            return Ok(k);
        }
        k += 1;
    }
}

/// Whether `g` has a proper `k`-edge-coloring.
pub fn colorable(g: &Multigraph, k: usize) -> bool {
    let mut s = Search {
        g,
        k,
        color: vec![0; g.edge_count()],
        used: vec![0u64; g.vertex_count()],
        left: (0..g.vertex_count()).map(|v| g.degree(v)).collect(),
    };
    k <= 64 && s.run(0)
}

struct Search<'a> {
    g: &'a Multigraph,
    k: usize,
    color: Vec<usize>,
    /// Colors present at each vertex.
    used: Vec<u64>,
    /// Uncolored edges at each vertex.
    left: Vec<usize>,
}

impl Search<'_> {
    fn free(&self, e: usize) -> u64 {
        let [u, v] = self.g.endpoints(e);
        let all = if self.k == 64 { u64::MAX } else { (1u64 << self.k) - 1 };
        all & !(self.used[u] | self.used[v])
    }

    fn run(&mut self, max_used: usize) -> bool {
        // most constrained uncolored edge
        let mut pick = None;
        let mut fewest = u32::MAX;
        for e in 0..self.color.len() {
            if self.color[e] != 0 {
                continue;
            }
            let f = self.free(e).count_ones();
            if f == 0 {
                return false;
            }
            if f < fewest {
                fewest = f;
                pick = Some(e);
            }
        }
        let Some(e) = pick else { return true };
        let [u, v] = self.g.endpoints(e);
        let mut opts = self.free(e);
        // colors above max_used are interchangeable: try only the first
        let limit = (max_used + 1).min(self.k);
        opts &= if limit == 64 { u64::MAX } else { (1u64 << limit) - 1 };
        while opts != 0 {
            let c = opts.trailing_zeros() as usize;
            opts &= opts - 1;
            let bit = 1u64 << c;
            self.color[e] = c + 1;
            self.used[u] |= bit;
            self.used[v] |= bit;
            self.left[u] -= 1;
            self.left[v] -= 1;
            let ok = self.counts_ok(u) && self.counts_ok(v) && self.run(max_used.max(c + 1));
            self.left[u] += 1;
            self.left[v] += 1;
            self.used[u] &= !bit;
            self.used[v] &= !bit;
            self.color[e] = 0;
            if ok {
                return true;
            }
        }
        false
    }

    fn counts_ok(&self, v: usize) -> bool {
        self.left[v] <= self.k - self.used[v].count_ones() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Multigraph;

    #[test]
    fn gamma_examples() {
        let tri = fat_triangle(1);
        let r = gamma_bruteforce(&tri, DEFAULT_GAMMA_LIMIT).unwrap();
        assert_eq!(r.gamma, 3);
        assert_eq!(r.argmax_set.as_slice(), &[0, 1, 2]);
        assert_eq!(gamma_bruteforce(&fat_triangle(3), 20).unwrap().gamma, 9);
        let p = gamma_bruteforce(&petersen(), 20).unwrap();
        assert_eq!(p.gamma, 3);
        let size = p.argmax_set.len();
        assert_eq!(density_of(petersen().induced_edge_count(&p.argmax_set), size), 3);
    }

    #[test]
    fn gamma_ties_prefer_lexicographically_smallest() {
        // two disjoint double edges: {0,1} and {2,3} both give 2
        let g = Multigraph::from_edges(4, &[(2, 3), (2, 3), (0, 1), (0, 1)]).unwrap();
        let r = gamma_bruteforce(&g, 20).unwrap();
        assert_eq!(r.gamma, 2);
        assert_eq!(r.argmax_set.as_slice(), &[0, 1]);
    }

    #[test]
    fn gamma_too_large() {
        let g = Multigraph::from_edges(21, &[(0, 1)]).unwrap();
        assert!(matches!(gamma_bruteforce(&g, 20), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn chromatic_index_examples() {
        assert_eq!(chromatic_index_oracle(&fat_triangle(1), 24), Ok(3));
        assert_eq!(chromatic_index_oracle(&fat_triangle(2), 24), Ok(6));
        assert_eq!(chromatic_index_oracle(&petersen(), 24), Ok(4));
        assert_eq!(chromatic_index_oracle(&single_edge(), 24), Ok(1));
        let big = Multigraph::from_edges(2, &[(0, 1); 25]).unwrap();
        assert!(matches!(chromatic_index_oracle(&big, 24), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn even_cycle_is_class_one() {
        let g = Multigraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(chromatic_index_oracle(&g, 24), Ok(2));
        assert!(!colorable(&fat_triangle(1), 2));
    }
}
