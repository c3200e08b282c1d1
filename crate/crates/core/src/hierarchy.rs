//! Good hierarchies: level-by-level growth of the top rung with reserved
//! Γ-sets, and a literal checker for the four hierarchy clauses.

use crate::coloring::{Color, ColorSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::trace::{join, Trace};
use crate::tree::TreeSequence;

/// What the hierarchy of the top rung needs to know about the ladder below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RungContext {
    /// `|T_n|`.
    pub base: usize,
    /// `δ_1, ..., δ_n`.
    pub deltas: Vec<Color>,
    /// `γ_n`, absent for the first rung.
    pub gamma_n: Option<Color>,
}

impl RungContext {
    /// `D_n`: connecting colors not missing in `T_n`.
    pub fn d_set(&self, c: &PartialColoring, t: &TreeSequence) -> ColorSet {
        let base = c.missing_union(t.vertices()[..self.base].iter().copied());
        self.deltas.iter().copied().filter(|d| !base.contains(*d)).collect()
    }
}

/// `T_{n,0} ⊂ T_{n,1} ⊂ ... ⊂ T_{n,q} ⊂ T` with Γ-sets per level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hierarchy {
    /// `levels[j] = |T_{n,j}|`; `levels[0] = |T_n|`.
    pub levels: Vec<usize>,
    /// `gamma[j]` lists `(δ_m, Γ^j_m)` for `δ_m ∈ D_{n,j}`, by increasing δ.
    pub gamma: Vec<Vec<(Color, [Color; 2])>>,
    /// `(γ, τ)`, two colors missing at the first vertex.
    pub reserved: (Color, Color),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R2Clause {
    /// Reserved colors are not two distinct colors missing at `x_e`.
    Reserved,
    /// Level sizes or Γ-set keys do not match the tree.
    Bookkeeping,
    I,
    II,
    III,
    IV,
}

impl std::fmt::Display for R2Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            R2Clause::Reserved => "reserved",
            R2Clause::Bookkeeping => "bookkeeping",
            R2Clause::I => "i",
            R2Clause::II => "ii",
            R2Clause::III => "iii",
            R2Clause::IV => "iv",
        };
        f.write_str(s)
    }
}

fn missing_between(c: &PartialColoring, t: &TreeSequence, from: usize, to: usize) -> ColorSet {
    c.missing_union(t.vertices()[from..to].iter().copied())
}

fn two_smallest(avail: &ColorSet) -> Option<[Color; 2]> {
    let mut it = avail.iter();
    Some([it.next()?, it.next()?])
}

fn render(sets: &[(Color, [Color; 2])]) -> String {
    join(sets.iter().map(|(d, [a, b])| format!("{d}:{a},{b}")))
}

impl Hierarchy {
    /// Level 0 for the rung grown from `T_n = t[..ctx.base]`: reserved colors
    /// and one Γ-set per color of `D_{n,0}`, smallest colors first.
    pub fn start(c: &PartialColoring, t: &TreeSequence, ctx: &RungContext) -> Result<Hierarchy> {
        let xe = c.missing(t.vertex(0));
        let mut it = xe.iter();
        let (Some(g), Some(tau)) = (it.next(), it.next()) else {
            return Err(Error::EngineInvariantViolation("first vertex misses fewer than two colors".into()));
        };
        let mut avail = missing_between(c, t, 0, ctx.base);
        for x in [Some(g), Some(tau), ctx.gamma_n].into_iter().flatten() {
            avail.remove(x);
        }
        let mut sets = Vec::new();
        for d in ctx.d_set(c, t).iter() {
            let pair = two_smallest(&avail)
                .ok_or_else(|| Error::EngineInvariantViolation(format!("no colors left for a reserved pair of {d}")))?;
            avail.remove(pair[0]);
            avail.remove(pair[1]);
            sets.push((d, pair));
        }
        Ok(Hierarchy { levels: vec![ctx.base], gamma: vec![sets], reserved: (g, tau) })
    }

    /// `q`: the index of the last completed level.
    pub fn q(&self) -> usize {
        self.levels.len() - 1
    }

    /// `T_{n,q}` size.
    pub fn top_level(&self) -> usize {
        *self.levels.last().unwrap()
    }

    /// `∪ Γ^q_m` over `δ_m ∈ D_n − φ̄(t)`: colors the current level may not grow by.
    pub fn blocked(&self, c: &PartialColoring, t: &TreeSequence, ctx: &RungContext) -> ColorSet {
        let have = t.missing(c);
        let mut out = ColorSet::new();
        for &(d, [a, b]) in &self.gamma[self.q()] {
            if ctx.deltas.contains(&d) && !have.contains(d) {
                out.insert(a);
                out.insert(b);
            }
        }
        out
    }

    /// Growth stalled at `t = T_{n,j}` without `t` being closed: record the
    /// level, move the Γ-set of the blocking color to colors new at this level,
    /// and return the edge `g` that opens the next level.
    pub fn open_level(
        &mut self,
        c: &PartialColoring,
        t: &TreeSequence,
        ctx: &RungContext,
        trace: &mut Trace,
    ) -> Result<EdgeId> {
        let g = c.graph();
        let have = t.missing(c);
        let prev_end = self.top_level();
        let live: Vec<(Color, [Color; 2])> =
            self.gamma[self.q()].iter().copied().filter(|(d, _)| ctx.deltas.contains(d) && !have.contains(*d)).collect();
        let mut pick: Option<(EdgeId, Color)> = None;
        for &(d, [a, b]) in &live {
            for col in [a, b] {
                for &u in t.vertices() {
                    if let Some(f) = c.edge_at(u, col) {
                        if !t.contains(g.other_end(f, u)) && pick.is_none_or(|(best, _)| f < best) {
                            pick = Some((f, d));
                        }
                    }
                }
            }
        }
        let Some((edge, blocked_delta)) = pick else {
            return Err(Error::EngineInvariantViolation("stalled level has no Γ-colored boundary edge".into()));
        };
        let fresh = missing_between(c, t, prev_end, t.len());
        let pair = two_smallest(&fresh)
            .ok_or_else(|| Error::EngineInvariantViolation("new level misses fewer than two colors".into()))?;
        let next: Vec<(Color, [Color; 2])> =
            live.into_iter().map(|(d, s)| if d == blocked_delta { (d, pair) } else { (d, s) }).collect();
        self.levels.push(t.len());
        self.gamma.push(next);
        trace.emit(|| format!("H {} {}", self.q(), render(self.gamma.last().unwrap())));
        Ok(edge)
    }

    /// Keeps only the levels strictly inside a prefix of length `len`.
    pub fn truncated(&self, len: usize) -> Hierarchy {
        let keep = self.levels.iter().take_while(|&&l| l < len).count().max(1);
        Hierarchy {
            levels: self.levels[..keep].to_vec(),
            gamma: self.gamma[..keep].to_vec(),
            reserved: self.reserved,
        }
    }
}

/// Evaluates the hierarchy clauses literally for `t = T_{n,q+1}`.
pub fn check_r2(c: &PartialColoring, t: &TreeSequence, ctx: &RungContext, h: &Hierarchy) -> std::result::Result<(), R2Clause> {
    let q = h.q();
    if h.levels.is_empty() || h.gamma.len() != h.levels.len() || h.levels[0] != ctx.base {
        return Err(R2Clause::Bookkeeping);
    }
    if h.levels.windows(2).any(|w| w[0] >= w[1]) || h.top_level() >= t.len() {
        return Err(R2Clause::Bookkeeping);
    }
    let (g, tau) = h.reserved;
    let xe = c.missing(t.vertex(0));
    if g == tau || !xe.contains(g) || !xe.contains(tau) {
        return Err(R2Clause::Reserved);
    }
    let d_n = ctx.d_set(c, t);
    let end_of = |j: usize| if j < q { h.levels[j + 1] } else { t.len() };
    for j in 0..=q {
        let level_missing = missing_between(c, t, 0, h.levels[j]);
        let d_nj: Vec<Color> = d_n.iter().filter(|d| !level_missing.contains(*d)).collect();
        let keys: Vec<Color> = h.gamma[j].iter().map(|(d, _)| *d).collect();
        if keys != d_nj {
            return Err(R2Clause::Bookkeeping);
        }
        let mut used = ColorSet::new();
        for &(d, [a, b]) in &h.gamma[j] {
            if a == b {
                return Err(R2Clause::Bookkeeping);
            }
            for x in [a, b] {
                if !level_missing.contains(x) || x == g || x == tau || Some(x) == ctx.gamma_n {
                    return Err(R2Clause::Bookkeeping);
                }
                if used.contains(x) {
                    return Err(R2Clause::II);
                }
                used.insert(x);
            }
            // (i): no Γ color on the edges of T_{n,j+1}(v_δ) − T_{n,j}
            let next = end_of(j);
            let v = (h.levels[j]..next).find(|&i| c.is_missing(t.vertex(i), d)).unwrap_or(next - 1);
            for i in h.levels[j]..=v {
                if let Some(col) = c.color(t.edge_into(i)) {
                    if col == a || col == b {
                        return Err(R2Clause::I);
                    }
                }
            }
        }
    }
    for j in 1..=q {
        // (iii)
        let fresh = missing_between(c, t, h.levels[j - 1], h.levels[j]);
        let prev: ColorSet = h.gamma[j - 1].iter().flat_map(|(_, s)| *s).collect();
        for (_, s) in &h.gamma[j] {
            for &x in s {
                if !prev.contains(x) && !fresh.contains(x) {
                    return Err(R2Clause::III);
                }
            }
        }
        // (iv): T_{n,j} closed except for Γ^{j-1}_m, δ_m ∈ D_{n,j}
        let level = t.prefix(h.levels[j]);
        let level_missing = level.missing(c);
        let mut exempt = ColorSet::new();
        for &(d, [a, b]) in &h.gamma[j - 1] {
            if d_n.contains(d) && !level_missing.contains(d) {
                exempt.insert(a);
                exempt.insert(b);
            }
        }
        let want = level_missing.difference(&exempt);
        if !crate::tree::taa_candidates(c, &level, &want).is_empty() {
            return Err(R2Clause::IV);
        }
    }
    Ok(())
}
