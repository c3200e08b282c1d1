//! Helpers shared by the integration and acceptance tests. Everything here
//! recomputes from first principles rather than calling the library's checks.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use edgecolor::graph::Multigraph;
use rand::Rng;

/// Random loopless multigraph with `n` in `nmin..=nmax`, up to `mmax` edges
/// and at most `mu` parallel edges per pair.
pub fn random_multigraph(rng: &mut impl Rng, nmin: usize, nmax: usize, mu: usize, mmin: usize, mmax: usize) -> Multigraph {
    let n = rng.random_range(nmin..=nmax);
    let target = rng.random_range(mmin..=mmax);
    let mut mult: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut attempts = 0;
    while edges.len() < target && attempts < 50 * target {
        attempts += 1;
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let m = mult.entry((u.min(v), u.max(v))).or_default();
        if *m >= mu {
            continue;
        }
        *m += 1;
        edges.push((u, v));
    }
    Multigraph::from_edges(n, &edges).unwrap()
}

pub fn fat_triangle(mu: usize) -> Multigraph {
    let mut e = Vec::new();
    for pair in [(0, 1), (1, 2), (0, 2)] {
        e.extend(std::iter::repeat_n(pair, mu));
    }
    Multigraph::from_edges(3, &e).unwrap()
}

pub fn petersen() -> Multigraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    Multigraph::from_edges(10, &e).unwrap()
}

pub fn edge_list(g: &Multigraph) -> Vec<(usize, usize)> {
    g.edges().map(|(_, [u, v])| (u, v)).collect()
}

/// Induced edge count of a vertex set, by scanning every edge.
pub fn induced(g: &Multigraph, set: &BTreeSet<usize>) -> usize {
    edge_list(g).iter().filter(|(u, v)| set.contains(u) && set.contains(v)).count()
}

/// Γ(G) by plain enumeration of all vertex subsets with at least two vertices.
pub fn gamma_naive(g: &Multigraph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 16);
    let edges = edge_list(g);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let m = edges.iter().filter(|(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count();
        best = best.max(m.div_ceil(size / 2));
    }
    best
}

pub fn max_degree(g: &Multigraph) -> usize {
    let mut d = vec![0; g.vertex_count()];
    for (u, v) in edge_list(g) {
        d[u] += 1;
        d[v] += 1;
    }
    d.into_iter().max().unwrap_or(0)
}

/// First pair of edges sharing a vertex and a color, if any.
pub fn matching_violation(g: &Multigraph, colors: &[Option<usize>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, (u, v)) in edge_list(g).into_iter().enumerate() {
        let Some(c) = colors[e] else { continue };
        for w in [u, v] {
            if let Some(&f) = seen.get(&(w, c)) {
                return Some((f, e));
            }
            seen.insert((w, c), e);
        }
    }
    None
}

/// Colors missing at `v` under `colors` with palette `k`.
pub fn missing_at(g: &Multigraph, colors: &[Option<usize>], k: usize, v: usize) -> BTreeSet<usize> {
    let mut m: BTreeSet<usize> = (1..=k).collect();
    for (e, (a, b)) in edge_list(g).into_iter().enumerate() {
        if a == v || b == v {
            if let Some(c) = colors[e] {
                m.remove(&c);
            }
        }
    }
    m
}

/// Applies one `K a b e1 e2 ...` line: exchanges `a` and `b` on the listed edges.
pub fn apply_k_line(colors: &mut [Option<usize>], line: &str) -> bool {
    let toks: Vec<&str> = line.split(' ').collect();
    if toks[0] != "K" {
        return false;
    }
    let a: usize = toks[1].parse().unwrap();
    let b: usize = toks[2].parse().unwrap();
    for t in &toks[3..] {
        let e: usize = t.parse().unwrap();
        colors[e] = match colors[e] {
            Some(c) if c == a => Some(b),
            Some(c) if c == b => Some(a),
            other => panic!("edge {e} has color {other:?}, not {a} or {b}"),
        };
    }
    true
}

/// Verdict of an independent recount of a density certificate.
pub fn certificate_sound(g: &Multigraph, vertices: &[usize], k_failed: usize, edge_count: usize, bound: usize) -> Result<(), String> {
    let set: BTreeSet<usize> = vertices.iter().copied().collect();
    let s = set.len();
    if s != vertices.len() || s < 3 || s % 2 == 0 {
        return Err(format!("size {s} is not odd and at least 3"));
    }
    let m = induced(g, &set);
    if m != edge_count {
        return Err(format!("claims {edge_count} edges, graph has {m}"));
    }
    let half = (s - 1) / 2;
    if m < k_failed * half + 1 {
        return Err(format!("{m} edges cannot beat {k_failed} colors"));
    }
    if m.div_ceil(half) != bound || bound <= k_failed {
        return Err(format!("bound {bound} is wrong or too small"));
    }
    Ok(())
}

/// Closure of `{x, y}` by Tashkinov augmentation, taking eligible boundary
/// edges in random order.
pub fn random_order_closure(
    g: &Multigraph,
    colors: &[Option<usize>],
    k: usize,
    start: [usize; 2],
    rng: &mut impl Rng,
) -> BTreeSet<usize> {
    let edges = edge_list(g);
    let mut set: BTreeSet<usize> = start.into_iter().collect();
    loop {
        let mut phibar = BTreeSet::new();
        for &v in &set {
            phibar.extend(missing_at(g, colors, k, v));
        }
        let eligible: Vec<usize> = (0..edges.len())
            .filter(|&e| {
                let (u, v) = edges[e];
                set.contains(&u) != set.contains(&v) && colors[e].is_some_and(|c| phibar.contains(&c))
            })
            .collect();
        if eligible.is_empty() {
            return set;
        }
        let (u, v) = edges[eligible[rng.random_range(0..eligible.len())]];
        set.insert(u);
        set.insert(v);
    }
}

/// Number of maximal (α,β)-paths meeting `set`, trivial ones included.
pub fn paths_meeting(g: &Multigraph, colors: &[Option<usize>], k: usize, set: &BTreeSet<usize>, a: usize, b: usize) -> usize {
    let n = g.vertex_count();
    let edges = edge_list(g);
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if colors[e] == Some(a) || colors[e] == Some(b) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &s in set {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = s;
        let mut members = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = s;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        // a component is a path exactly when some vertex misses a or b
        let is_path = members.iter().any(|&x| {
            let m = missing_at(g, colors, k, x);
            m.contains(&a) || m.contains(&b)
        });
        if is_path {
            count += 1;
        }
    }
    count
}
