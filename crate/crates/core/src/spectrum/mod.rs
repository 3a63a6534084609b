//! Exact cycle-length sets, short-cycle counts and circumference.
//!
//! Lengths start at 3 by default; multigraph inputs are reduced to their
//! underlying simple graph, and length 2 is reported only when explicitly
//! requested. Loops never count as cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub mod brute;
mod circumference;
mod search;

pub use circumference::{circumference, Circumference, EXACT_COMPONENT_BOUND};
pub use search::{has_cycle_of_length, interval_verdict, interval_verdict_counted, IntervalVerdict, LengthVerdict};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSpectrum {
    #[serde(rename = "lengths")]
    pub lengths_present: BTreeSet<usize>,
    /// Enumerated cycles per length; exact whenever `exhaustive` holds.
    pub counts: BTreeMap<usize, u64>,
    pub exhaustive: bool,
    pub budget_exhausted: bool,
    pub cycles_enumerated: u64,
}

impl CycleSpectrum {
    pub fn contains(&self, k: usize) -> bool {
        self.lengths_present.contains(&k)
    }

    pub fn max_length(&self) -> Option<usize> {
        self.lengths_present.last().copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumOptions {
    /// Maximum number of cycles to enumerate.
    pub budget: u64,
    /// Report length-2 cycles (parallel edges, or opposite arcs).
    pub allow_length_two: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            budget: DEFAULT_BUDGET,
            allow_length_two: false,
        }
    }
}

/// Simple graph to search, plus whether a length-2 cycle exists.
fn underlying(g: &Graph) -> (Graph, bool) {
    if g.is_multigraph() {
        let (h, _) = g.simplify();
        let two = if g.is_directed() {
            has_opposite_arcs(&h)
        } else {
            g.edges().windows(2).any(|w| w[0] == w[1] && w[0].0 != w[0].1)
        };
        (h, two)
    } else {
        let two = g.is_directed() && has_opposite_arcs(g);
        (g.clone(), two)
    }
}

fn has_opposite_arcs(g: &Graph) -> bool {
    g.edges().iter().any(|&(u, v)| u < v && g.has_edge(v, u))
}

/// Elementary circuits of `g` (Johnson's algorithm on the symmetric digraph
/// for undirected input), each undirected cycle reported once, lengths ≥ 3.
///
/// Every circuit is passed to `visit` as a vertex sequence starting at its
/// smallest vertex. Returns `true` if the enumeration ran to completion.
pub fn for_each_cycle(g: &Graph, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) -> bool {
    let n = g.n();
    let undirected = !g.is_directed();
    let mut blocked = vec![false; n];
    let mut b_sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut path: Vec<usize> = Vec::new();
    // (vertex, next neighbor index, found a circuit through this vertex)
    let mut frames: Vec<(usize, usize, bool)> = Vec::new();
    let mut unblock_stack: Vec<usize> = Vec::new();

    for s in 0..n {
        for v in s..n {
            blocked[v] = false;
            b_sets[v].clear();
        }
        path.push(s);
        blocked[s] = true;
        frames.push((s, 0, false));
        while let Some(top) = frames.last_mut() {
            let v = top.0;
            let nbrs = g.neighbors(v);
            if top.1 < nbrs.len() {
                let w = nbrs[top.1];
                top.1 += 1;
                if w < s {
                    continue;
                }
                if w == s {
                    top.2 = true;
                    let len = path.len();
                    let keep = len >= 3 && (!undirected || path[1] < path[len - 1]);
                    if keep && visit(&path).is_break() {
                        path.clear();
                        return false;
                    }
                } else if !blocked[w] {
                    path.push(w);
                    blocked[w] = true;
                    frames.push((w, 0, false));
                }
            } else {
                let found = top.2;
                frames.pop();
                path.pop();
                if found {
                    unblock_stack.push(v);
                    while let Some(u) = unblock_stack.pop() {
                        if blocked[u] {
                            blocked[u] = false;
                            unblock_stack.append(&mut b_sets[u]);
                        }
                    }
                } else {
                    for &w in nbrs {
                        if w >= s && !b_sets[w].contains(&v) {
                            b_sets[w].push(v);
                        }
                    }
                }
                if let Some(parent) = frames.last_mut() {
                    parent.2 |= found;
                }
            }
        }
    }
    true
}

/// Cycle-length set by exhaustive enumeration, within a budget of
/// enumerated cycles.
pub fn cycle_length_set(g: &Graph, budget: u64) -> CycleSpectrum {
    cycle_length_set_with(
        g,
        &SpectrumOptions {
            budget,
            ..SpectrumOptions::default()
        },
    )
}

pub fn cycle_length_set_with(g: &Graph, opts: &SpectrumOptions) -> CycleSpectrum {
    let (h, two) = underlying(g);
    let mut spec = CycleSpectrum::default();
    let complete = for_each_cycle(&h, |c| {
        if spec.cycles_enumerated >= opts.budget {
            return ControlFlow::Break(());
        }
        spec.cycles_enumerated += 1;
        *spec.counts.entry(c.len()).or_insert(0) += 1;
        ControlFlow::Continue(())
    });
    if opts.allow_length_two && two {
        let pairs = if g.is_directed() {
            h.edges().iter().filter(|&&(u, v)| u < v && h.has_edge(v, u)).count() as u64
        } else {
            let mut e = g.edges().to_vec();
            e.retain(|&(u, v)| u != v);
            e.dedup();
            e.iter().filter(|&&(u, v)| g.multiplicity(u, v) >= 2).count() as u64
        };
        spec.counts.insert(2, pairs);
    }
    spec.lengths_present = spec.counts.keys().copied().collect();
    spec.exhaustive = complete;
    spec.budget_exhausted = !complete;
    spec
}

/// Exact `Z_k` for `k = 3..=max_len`, returned as a vector indexed by `k`
/// (entries below 3 are zero). Undirected cycles are counted once per cycle,
/// not per traversal.
pub fn count_short_cycles(g: &Graph, max_len: usize) -> Result<Vec<u64>> {
    if max_len < 3 {
        return Err(Error::param("K", "counts start at length 3"));
    }
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let n = g.n();
    let mut counts = vec![0u64; max_len + 1];
    let mut on_path = vec![false; n];
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        on_path[s] = true;
        frames.push((s, 0));
        while let Some(top) = frames.last_mut() {
            let v = top.0;
            let nbrs = g.neighbors(v);
            if top.1 == nbrs.len() {
                on_path[v] = false;
                frames.pop();
                continue;
            }
            let w = nbrs[top.1];
            top.1 += 1;
            let depth = frames.len();
            if w == s {
                if depth >= 3 {
                    counts[depth] += 1;
                }
            } else if w > s && !on_path[w] && depth < max_len {
                on_path[w] = true;
                frames.push((w, 0));
            }
        }
    }
    if !g.is_directed() {
        for c in &mut counts {
            *c /= 2;
        }
    }
    Ok(counts)
}
