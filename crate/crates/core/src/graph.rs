//! Sparse graph container shared by every other module.
//!
//! Vertices are dense indices `0..n`. Edges are kept as a sorted multiset of
//! canonical pairs (smaller endpoint first for undirected graphs) and mirrored
//! into CSR adjacency so neighbourhood queries cost O(degree).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Edge = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Undirected,
    Directed,
}

impl Orientation {
    pub fn is_directed(self) -> bool {
        matches!(self, Orientation::Directed)
    }

    pub fn from_directed(directed: bool) -> Self {
        if directed {
            Orientation::Directed
        } else {
            Orientation::Undirected
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Undirected => "undirected",
            Orientation::Directed => "directed",
        })
    }
}

/// Canonical storage form of an edge: undirected pairs are sorted.
#[inline]
pub fn canonical(orientation: Orientation, (u, v): Edge) -> Edge {
    match orientation {
        Orientation::Undirected if u > v => (v, u),
        _ => (u, v),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    fn build(n: usize, arcs: impl Iterator<Item = Edge> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (u, _) in arcs.clone() {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        for (u, v) in arcs {
            targets[fill[u]] = v;
            fill[u] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}

/// Number of occurrences of `v` in a sorted slice.
fn count_sorted(row: &[usize], v: usize) -> usize {
    let lo = row.partition_point(|&x| x < v);
    let hi = row.partition_point(|&x| x <= v);
    hi - lo
}

/// Immutable sparse graph. Safe to share across worker threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    orientation: Orientation,
    multigraph: bool,
    edges: Vec<Edge>,
    out: Csr,
    inc: Option<Csr>,
}

impl Graph {
    /// Build a graph from an edge list. With `multigraph` unset, loops and
    /// repeated edges are rejected.
    pub fn new(
        n: usize,
        orientation: Orientation,
        multigraph: bool,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut edges: Vec<Edge> = edges.into_iter().map(|e| canonical(orientation, e)).collect();
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if !multigraph && u == v {
                return Err(Error::LoopInSimpleGraph(u));
            }
        }
        edges.sort_unstable();
        if !multigraph {
            if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(Self::from_sorted(n, orientation, multigraph, edges))
    }

    /// Internal constructor for edge lists already canonical, sorted and valid.
    pub(crate) fn from_sorted(n: usize, orientation: Orientation, multigraph: bool, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] <= w[1]));
        let (out, inc) = match orientation {
            Orientation::Undirected => {
                let arcs = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]);
                (Csr::build(n, arcs), None)
            }
            Orientation::Directed => {
                let out = Csr::build(n, edges.iter().copied());
                let inc = Csr::build(n, edges.iter().map(|&(u, v)| (v, u)));
                (out, Some(inc))
            }
        };
        Graph {
            n,
            orientation,
            multigraph,
            edges,
            out,
            inc,
        }
    }

    /// The cycle `0 → 1 → … → n−1 → 0`, undirected or directed.
    pub fn cycle(n: usize, orientation: Orientation) -> Result<Self> {
        if n < 3 {
            return Err(Error::param("n", "a cycle needs at least 3 vertices"));
        }
        Graph::new(n, orientation, false, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_directed(&self) -> bool {
        self.orientation.is_directed()
    }

    /// Whether loops and parallel edges are permitted.
    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    /// Edge multiset in sorted canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Out-neighbours (all neighbours when undirected), sorted, with repeats
    /// for parallel edges. A loop appears twice in an undirected row.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        self.out.row(u)
    }

    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        match &self.inc {
            Some(inc) => inc.row(u),
            None => self.out.row(u),
        }
    }

    pub fn degree(&self, u: usize) -> usize {
        self.out.row(u).len()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        if u >= self.n || v >= self.n {
            return 0;
        }
        let c = count_sorted(self.out.row(u), v);
        if u == v && !self.is_directed() {
            c / 2
        } else {
            c
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.multiplicity(u, v) > 0
    }

    /// True when the graph has no loops and no parallel edges, whatever the flag.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|&(u, v)| u != v) && self.edges.windows(2).all(|w| w[0] != w[1])
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// Per-vertex degree table.
    pub fn degrees(&self) -> Degrees {
        match self.orientation {
            Orientation::Undirected => Degrees::Undirected((0..self.n).map(|u| self.degree(u)).collect()),
            Orientation::Directed => Degrees::Directed {
                out: (0..self.n).map(|u| self.out.row(u).len()).collect(),
                inc: (0..self.n).map(|u| self.in_neighbors(u).len()).collect(),
            },
        }
    }

    /// Check that `cycle` is a cycle of this graph: distinct vertices, every
    /// cyclically consecutive pair an edge (respecting direction).
    pub fn validate_cycle(&self, cycle: &VertexCycle) -> bool {
        let vs = cycle.vertices();
        let min_len = if self.multigraph { 2 } else { 3 };
        if vs.len() < min_len || vs.iter().any(|&v| v >= self.n) {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in vs {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        if vs.len() == 2 {
            // a 2-cycle needs two parallel undirected edges or both arcs
            let (a, b) = (vs[0], vs[1]);
            return if self.is_directed() {
                self.has_edge(a, b) && self.has_edge(b, a)
            } else {
                self.multiplicity(a, b) >= 2
            };
        }
        cycle.arcs().all(|(a, b)| self.has_edge(a, b))
    }

    /// Collapse parallel edges and drop loops.
    pub fn simplify(&self) -> (Graph, SimplifyReport) {
        let mut report = SimplifyReport::default();
        let mut edges = Vec::with_capacity(self.edges.len());
        for &e in &self.edges {
            if e.0 == e.1 {
                report.loops_removed += 1;
            } else if edges.last() == Some(&e) {
                report.parallel_surplus += 1;
            } else {
                edges.push(e);
            }
        }
        (Graph::from_sorted(self.n, self.orientation, false, edges), report)
    }

    /// Same edge set, relabelled as a different container flag.
    pub fn with_multigraph_flag(&self, multigraph: bool) -> Result<Graph> {
        Graph::new(self.n, self.orientation, multigraph, self.edges.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degrees {
    Undirected(Vec<usize>),
    Directed { out: Vec<usize>, inc: Vec<usize> },
}

impl Degrees {
    /// Undirected degrees, or out-degrees for a directed graph.
    pub fn out(&self) -> &[usize] {
        match self {
            Degrees::Undirected(d) => d,
            Degrees::Directed { out, .. } => out,
        }
    }

    pub fn is_regular(&self, d: usize) -> bool {
        match self {
            Degrees::Undirected(deg) => deg.iter().all(|&x| x == d),
            Degrees::Directed { out, inc } => out.iter().all(|&x| x == d) && inc.iter().all(|&x| x == d),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyReport {
    pub loops_removed: usize,
    pub parallel_surplus: usize,
}

impl SimplifyReport {
    pub fn is_clean(&self) -> bool {
        self.loops_removed == 0 && self.parallel_surplus == 0
    }
}

/// A cycle given by its vertex sequence; the closing arc is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexCycle(Vec<usize>);

impl VertexCycle {
    pub fn new(vertices: Vec<usize>) -> Self {
        VertexCycle(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive pairs including the closing one.
    pub fn arcs(&self) -> impl Iterator<Item = Edge> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for VertexCycle {
    fn from(v: Vec<usize>) -> Self {
        VertexCycle(v)
    }
}

/// Text edge-list format.
///
/// ```text
/// n m U|D [multi]
/// u v
/// ...
/// ```
///
/// Lines are written in sorted canonical order, so reading then writing a
/// canonical file reproduces it byte for byte.
pub mod edgelist {
    use super::*;

    pub fn write(g: &Graph) -> String {
        let mut s = String::with_capacity(16 + g.edge_count() * 10);
        let tag = if g.is_directed() { "D" } else { "U" };
        s.push_str(&format!("{} {} {}", g.n(), g.edge_count(), tag));
        if g.is_multigraph() {
            s.push_str(" multi");
        }
        s.push('\n');
        for &(u, v) in g.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let bad = |line: usize, reason: &str| Error::Parse {
            line,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(bad(lineno, "header must be `n m U|D [multi]`"));
        }
        let n: usize = fields[0].parse().map_err(|_| bad(lineno, "bad vertex count"))?;
        let m: usize = fields[1].parse().map_err(|_| bad(lineno, "bad edge count"))?;
        let orientation = match fields[2] {
            "U" => Orientation::Undirected,
            "D" => Orientation::Directed,
            _ => return Err(bad(lineno, "orientation must be U or D")),
        };
        let multigraph = match fields.get(3) {
            None => false,
            Some(&"multi") => true,
            Some(_) => return Err(bad(lineno, "fourth header field must be `multi`")),
        };
        let mut edges = Vec::with_capacity(m);
        for (lineno, line) in lines {
            let mut it = line.split_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| bad(lineno, "expected two endpoints"))?
                    .parse()
                    .map_err(|_| bad(lineno, "endpoint is not an integer"))
            };
            let (u, v) = (next()?, next()?);
            if it.next().is_some() {
                return Err(bad(lineno, "trailing tokens"));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, orientation, multigraph, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn und(n: usize, edges: &[Edge]) -> Graph {
        Graph::new(n, Orientation::Undirected, false, edges.iter().copied()).unwrap()
    }

    #[test]
    fn triangle_degrees() {
        let g = und(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(g.degrees(), Degrees::Undirected(vec![2, 2, 2]));
        assert!(g.has_edge(0, 2) && g.has_edge(2, 0));
    }

    #[test]
    fn loop_in_simple_graph_rejected() {
        let err = Graph::new(2, Orientation::Undirected, false, [(0, 0)]).unwrap_err();
        assert!(matches!(err, Error::LoopInSimpleGraph(0)));
    }

    #[test]
    fn duplicate_and_out_of_range_rejected() {
        assert!(matches!(
            Graph::new(3, Orientation::Undirected, false, [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::new(3, Orientation::Undirected, false, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        // directed antiparallel arcs are distinct edges
        assert!(Graph::new(3, Orientation::Directed, false, [(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn directed_cycle_degrees() {
        let g = Graph::cycle(5, Orientation::Directed).unwrap();
        assert!(g.degrees().is_regular(1));
        assert!(g.has_edge(4, 0) && !g.has_edge(0, 4));
    }

    #[test]
    fn loop_counts_two() {
        let g = Graph::new(2, Orientation::Undirected, true, [(0, 0)]).unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.multiplicity(0, 0), 1);
        assert_eq!(g.degree(1), 0);
    }

    #[test]
    fn validate_cycles() {
        let c5 = Graph::cycle(5, Orientation::Undirected).unwrap();
        assert!(c5.validate_cycle(&vec![0, 1, 2, 3, 4].into()));
        assert!(c5.validate_cycle(&vec![2, 1, 0, 4, 3].into()));
        assert!(!c5.validate_cycle(&vec![0, 2, 4, 1, 3].into()));
        assert!(!c5.validate_cycle(&vec![0, 1, 2, 3, 3].into()));
        let d5 = Graph::cycle(5, Orientation::Directed).unwrap();
        assert!(d5.validate_cycle(&vec![0, 1, 2, 3, 4].into()));
        assert!(!d5.validate_cycle(&vec![0, 4, 3, 2, 1].into()));
    }

    #[test]
    fn two_cycles_in_multigraphs() {
        let g = Graph::new(3, Orientation::Undirected, true, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert!(g.validate_cycle(&vec![0, 1].into()));
        assert!(!g.validate_cycle(&vec![1, 2].into()));
    }

    #[test]
    fn simplify_reports() {
        let g = und(3, &[(0, 1), (1, 2)]);
        let (s, r) = g.simplify();
        assert_eq!(s.edges(), g.edges());
        assert!(r.is_clean());

        let g = Graph::new(3, Orientation::Undirected, true, [(0, 1), (1, 0)]).unwrap();
        let (s, r) = g.simplify();
        assert_eq!(s.edges(), &[(0, 1)]);
        assert_eq!(r.parallel_surplus, 1);

        let g = Graph::new(3, Orientation::Undirected, true, [(2, 2), (0, 1)]).unwrap();
        let (s, r) = g.simplify();
        assert_eq!(s.edges(), &[(0, 1)]);
        assert_eq!(r.loops_removed, 1);
        assert!(s.is_simple() && !s.is_multigraph());
    }

    #[test]
    fn edgelist_round_trip() {
        let g = Graph::new(4, Orientation::Undirected, true, [(3, 1), (0, 0), (1, 3)]).unwrap();
        let text = edgelist::write(&g);
        assert_eq!(text, "4 3 U multi\n0 0\n1 3\n1 3\n");
        let back = edgelist::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(edgelist::write(&back), text);
    }

    #[test]
    fn edgelist_errors() {
        assert!(edgelist::parse("").is_err());
        assert!(edgelist::parse("3 2 U\n0 1\n").is_err());
        assert!(edgelist::parse("3 1 X\n0 1\n").is_err());
        assert!(edgelist::parse("3 1 U\n0 x\n").is_err());
        assert!(edgelist::parse("3 1 D\n1 0\n").unwrap().has_edge(1, 0));
    }
}
