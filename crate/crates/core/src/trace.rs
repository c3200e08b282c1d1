//! Line-oriented engine trace (`K`, `T+`, `R`, `H`, `A` records).

use std::fmt::Write as _;

/// Collects trace lines when enabled; a disabled trace costs one branch per event.
#[derive(Debug, Default, Clone)]
pub struct Trace {
    lines: Option<Vec<String>>,
}

impl Trace {
    pub fn enabled() -> Self {
        Trace { lines: Some(Vec::new()) }
    }

    pub fn disabled() -> Self {
        Trace { lines: None }
    }

    pub fn is_enabled(&self) -> bool {
        self.lines.is_some()
    }

    /// Records a line; `f` only runs when tracing is on.
    pub fn emit(&mut self, f: impl FnOnce() -> String) {
        if let Some(lines) = &mut self.lines {
            lines.push(f());
        }
    }

    pub fn lines(&self) -> &[String] {
        self.lines.as_deref().unwrap_or(&[])
    }

    pub fn append(&mut self, other: Trace) {
        if let (Some(lines), Some(more)) = (&mut self.lines, other.lines) {
            lines.extend(more);
        }
    }

    /// Rewrites edge ids in the lines from index `from` on through `map`,
    /// for traces recorded on a subgraph view.
    pub fn remap_edges(&mut self, from: usize, map: &[usize]) {
        let Some(lines) = &mut self.lines else { return };
        for line in &mut lines[from..] {
            let mut toks: Vec<String> = line.split(' ').map(str::to_string).collect();
            let edge_slots = match toks[0].as_str() {
                "K" => 3..toks.len(),
                "T+" => 1..2,
                "R" => 2..3,
                _ => continue,
            };
            for t in &mut toks[edge_slots] {
                if let Some(e) = t.parse::<usize>().ok().and_then(|e| map.get(e)) {
                    *t = e.to_string();
                }
            }
            *line = toks.join(" ");
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in self.lines() {
            let _ = writeln!(s, "{l}");
        }
        s
    }
}

pub(crate) fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
