use std::collections::{BTreeSet, VecDeque};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{count_short_cycles, for_each_cycle, underlying};
use crate::graph::{Graph, VertexCycle};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "witness")]
pub enum LengthVerdict {
    Present(VertexCycle),
    Absent,
    Unknown,
}

impl LengthVerdict {
    pub fn is_present(&self) -> bool {
        matches!(self, LengthVerdict::Present(_))
    }
}

/// Depth-first search for one cycle of length `ell ≥ 3` with a given
/// smallest vertex, pruned by distance back to the start and by the size of
/// the region still reachable from the path's end.
struct Search<'g> {
    g: &'g Graph,
    ell: usize,
    s: usize,
    dist: Vec<usize>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    budget: u64,
    spent: u64,
    seen: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl Search<'_> {
    fn predecessors(&self, v: usize) -> &[usize] {
        if self.g.is_directed() {
            self.g.in_neighbors(v)
        } else {
            self.g.neighbors(v)
        }
    }

    /// BFS distances to `s` within vertices `≥ s`.
    fn distances(&mut self) {
        let n = self.g.n();
        self.dist.clear();
        self.dist.resize(n, usize::MAX);
        self.dist[self.s] = 0;
        self.queue.clear();
        self.queue.push_back(self.s);
        while let Some(v) = self.queue.pop_front() {
            for i in 0..self.predecessors(v).len() {
                let u = self.predecessors(v)[i];
                if u > self.s && self.dist[u] == usize::MAX {
                    self.dist[u] = self.dist[v] + 1;
                    self.queue.push_back(u);
                }
            }
        }
    }

    #[inline]
    fn free(&self, x: usize) -> bool {
        x > self.s && !self.on_path[x]
    }

    /// Whether `x` could still sit inside the rest of a cycle whose open path
    /// ends at `v`: it needs a usable way in and a usable way out.
    fn live(&self, x: usize, v: usize) -> bool {
        if self.g.is_directed() {
            let inward = self.g.in_neighbors(x).iter().any(|&y| y == v || self.free(y));
            inward && self.g.neighbors(x).iter().any(|&y| y == self.s || self.free(y))
        } else {
            self.g
                .neighbors(x)
                .iter()
                .filter(|&&y| y == v || y == self.s || self.free(y))
                .take(2)
                .count()
                == 2
        }
    }

    /// Can the path ending at `v` still be closed with `remaining` more
    /// edges? Counts live unvisited vertices reachable from `v` through live
    /// vertices only.
    fn room(&mut self, v: usize, remaining: usize) -> bool {
        self.stamp += 1;
        let stamp = self.stamp;
        self.queue.clear();
        self.queue.push_back(v);
        let mut fresh = 0usize;
        let mut closes = false;
        while let Some(x) = self.queue.pop_front() {
            for i in 0..self.g.neighbors(x).len() {
                let y = self.g.neighbors(x)[i];
                if y == self.s {
                    closes |= x != v;
                } else if self.free(y) && self.seen[y] != stamp {
                    self.seen[y] = stamp;
                    if !self.live(y, v) {
                        continue;
                    }
                    fresh += 1;
                    if closes && fresh + 1 >= remaining {
                        return true;
                    }
                    self.queue.push_back(y);
                }
            }
        }
        closes && fresh + 1 >= remaining
    }

    /// Onward options from `w` once it joins the path.
    fn options(&self, w: usize) -> usize {
        self.g.neighbors(w).iter().filter(|&&y| y != w && self.free(y)).count()
    }

    /// `None` on budget exhaustion, otherwise whether a cycle was found.
    fn extend(&mut self, v: usize) -> Option<bool> {
        let used = self.path.len() - 1;
        let remaining = self.ell - used;
        if remaining == 1 {
            return Some(self.g.has_edge(v, self.s));
        }
        if remaining >= 3 && !self.room(v, remaining) {
            return Some(false);
        }
        let mut next: Vec<(usize, usize)> = self
            .g
            .neighbors(v)
            .iter()
            .filter(|&&w| self.free(w) && self.dist[w] < remaining)
            .map(|&w| (self.options(w), w))
            .collect();
        next.sort_unstable();
        for (_, w) in next {
            self.spent += 1;
            if self.spent > self.budget {
                return None;
            }
            self.on_path[w] = true;
            self.path.push(w);
            if self.extend(w)? {
                return Some(true);
            }
            self.path.pop();
            self.on_path[w] = false;
        }
        Some(false)
    }
}

/// Decide whether `g` has a cycle of length exactly `ell`.
///
/// `Present` carries a witness; `Absent` is returned only after an
/// exhaustive search; `Unknown` means more than `budget` path extensions
/// were needed. Multigraphs are searched through their underlying simple
/// graph, so lengths below 3 are always `Absent`.
pub fn has_cycle_of_length(g: &Graph, ell: usize, budget: u64) -> LengthVerdict {
    let n = g.n();
    if ell < 3 || ell > n {
        return LengthVerdict::Absent;
    }
    let (h, _) = underlying(g);
    let mut search = Search {
        g: &h,
        ell,
        s: 0,
        dist: Vec::new(),
        on_path: vec![false; n],
        path: Vec::with_capacity(ell),
        budget,
        spent: 0,
        seen: vec![0; n],
        stamp: 0,
        queue: VecDeque::new(),
    };
    for s in 0..=n - ell {
        search.s = s;
        search.distances();
        let reach = search.dist.iter().filter(|&&d| d != usize::MAX).count();
        if reach < ell {
            continue;
        }
        search.on_path[s] = true;
        search.path.clear();
        search.path.push(s);
        let found = search.extend(s);
        search.on_path[s] = false;
        match found {
            None => return LengthVerdict::Unknown,
            Some(true) => {
                let witness = VertexCycle::new(std::mem::take(&mut search.path));
                debug_assert!(h.validate_cycle(&witness));
                return LengthVerdict::Present(witness);
            }
            Some(false) => {}
        }
        for &v in &search.path {
            search.on_path[v] = false;
        }
    }
    LengthVerdict::Absent
}

/// Circuits enumerated before switching to per-length searches.
const ENUMERATION_CAP: u64 = 2_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum IntervalVerdict {
    /// Every length in the interval occurs.
    Contained,
    /// The given length provably does not occur.
    Missing { length: usize },
    /// Some length could not be decided within budget.
    Unknown { length: usize },
}

/// Exact decision of `[lo, hi] ⊆ 𝓛(g)` for a simple graph.
///
/// Short lengths are settled by exact counts, then a bounded circuit
/// enumeration collects as many lengths as it can cheaply, and every length
/// still missing gets a dedicated exhaustive search with `budget` path
/// extensions.
pub fn interval_verdict(g: &Graph, lo: usize, hi: usize, budget: u64) -> IntervalVerdict {
    interval_verdict_counted(g, lo, hi, budget).0
}

/// [`interval_verdict`] together with the number of circuits enumerated.
pub fn interval_verdict_counted(g: &Graph, lo: usize, hi: usize, budget: u64) -> (IntervalVerdict, u64) {
    const SHORT: usize = 5;
    let lo = lo.max(3);
    if lo > hi {
        return (IntervalVerdict::Contained, 0);
    }
    if hi > g.n() {
        return (IntervalVerdict::Missing { length: g.n() + 1 }, 0);
    }
    let (h, _) = underlying(g);
    let short_hi = hi.min(SHORT);
    if lo <= short_hi {
        let counts = count_short_cycles(&h, short_hi).expect("simple graph, K ≥ 3");
        if let Some(k) = (lo..=short_hi).find(|&k| counts[k] == 0) {
            return (IntervalVerdict::Missing { length: k }, 0);
        }
    }
    let mut missing: BTreeSet<usize> = (lo.max(short_hi + 1)..=hi).collect();
    if missing.is_empty() {
        return (IntervalVerdict::Contained, 0);
    }
    let mut enumerated = 0u64;
    let cap = budget.min(ENUMERATION_CAP);
    for_each_cycle(&h, |c| {
        missing.remove(&c.len());
        enumerated += 1;
        if missing.is_empty() || enumerated >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    // longest first: long cycles are the ones most often absent
    for &k in missing.iter().rev() {
        match has_cycle_of_length(&h, k, budget) {
            LengthVerdict::Present(_) => {}
            LengthVerdict::Absent => return (IntervalVerdict::Missing { length: k }, enumerated),
            LengthVerdict::Unknown => return (IntervalVerdict::Unknown { length: k }, enumerated),
        }
    }
    (IntervalVerdict::Contained, enumerated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Orientation;
    use crate::spectrum::tests::petersen;
    use crate::spectrum::{cycle_length_set, DEFAULT_BUDGET};

    #[test]
    fn petersen_lengths() {
        let g = petersen();
        for k in 3..=10 {
            let v = has_cycle_of_length(&g, k, DEFAULT_BUDGET);
            let expect = [5, 6, 8, 9].contains(&k);
            assert_eq!(v.is_present(), expect, "k = {k}");
            if let LengthVerdict::Present(c) = v {
                assert_eq!(c.len(), k);
                assert!(g.validate_cycle(&c));
            } else {
                assert_eq!(v, LengthVerdict::Absent);
            }
        }
    }

    #[test]
    fn cycle_witness() {
        let c9 = Graph::cycle(9, Orientation::Undirected).unwrap();
        let v = has_cycle_of_length(&c9, 9, DEFAULT_BUDGET);
        let LengthVerdict::Present(c) = v else { panic!() };
        let mut vs = c.into_vec();
        vs.sort_unstable();
        assert_eq!(vs, (0..9).collect::<Vec<_>>());
        let d = Graph::cycle(7, Orientation::Directed).unwrap();
        assert!(has_cycle_of_length(&d, 7, DEFAULT_BUDGET).is_present());
        assert_eq!(has_cycle_of_length(&d, 6, DEFAULT_BUDGET), LengthVerdict::Absent);
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let mut e = Vec::new();
        for u in 0..12 {
            for v in u + 1..12 {
                if (u + v) % 3 != 0 {
                    e.push((u, v));
                }
            }
        }
        let g = Graph::new(12, Orientation::Undirected, false, e).unwrap();
        assert_eq!(has_cycle_of_length(&g, 12, 3), LengthVerdict::Unknown);
    }

    #[test]
    fn interval_examples() {
        let g = petersen();
        assert_eq!(interval_verdict(&g, 5, 6, DEFAULT_BUDGET), IntervalVerdict::Contained);
        assert_eq!(
            interval_verdict(&g, 3, 10, DEFAULT_BUDGET),
            IntervalVerdict::Missing { length: 3 }
        );
        assert_eq!(
            interval_verdict(&g, 8, 10, DEFAULT_BUDGET),
            IntervalVerdict::Missing { length: 10 }
        );
        assert_eq!(
            interval_verdict(&g, 5, 7, DEFAULT_BUDGET),
            IntervalVerdict::Missing { length: 7 }
        );
        let c = Graph::cycle(12, Orientation::Undirected).unwrap();
        assert_eq!(interval_verdict(&c, 12, 12, DEFAULT_BUDGET), IntervalVerdict::Contained);
    }

    #[test]
    fn agrees_with_enumeration_on_random_graphs() {
        use rand::Rng;
        let mut rng = crate::stream::SeededStream::new(5, 0).rng();
        for trial in 0..60 {
            let n = rng.random_range(4..=11);
            let directed = trial % 2 == 1;
            let o = Orientation::from_directed(directed);
            let mut e = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && (directed || u < v) && rng.random_bool(0.35) {
                        e.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, o, false, e).unwrap();
            let spec = cycle_length_set(&g, DEFAULT_BUDGET);
            for k in 3..=n {
                let v = has_cycle_of_length(&g, k, DEFAULT_BUDGET);
                assert_eq!(v.is_present(), spec.contains(k), "{g:?} k={k}");
            }
        }
    }
}
