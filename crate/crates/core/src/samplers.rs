//! Random graph models, all driven by a [`SeededStream`].
//!
//! Every sampler is a pure function of its parameters and stream.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical, Edge, Graph, Orientation};
use crate::stream::{SeededStream, StreamRng};

pub const DEFAULT_MAX_ATTEMPTS: u32 = 1000;

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{p} is not a probability")))
    }
}

/// Walks candidate pairs in lexicographic order and yields those selected by
/// independent Bernoulli(`p`) trials, drawing only the geometric gaps between
/// successes.
///
/// Undirected candidates are `(i, j)` with `i < j`; directed candidates are
/// all `(i, j)` with `i != j`.
pub(crate) fn bernoulli_pairs(
    n: usize,
    orientation: Orientation,
    p: f64,
    rng: &mut StreamRng,
    mut visit: impl FnMut(Edge),
) {
    if n < 2 || p <= 0.0 {
        return;
    }
    let row_len = |i: usize| match orientation {
        Orientation::Undirected => n - 1 - i,
        Orientation::Directed => n - 1,
    };
    let rows = match orientation {
        Orientation::Undirected => n - 1,
        Orientation::Directed => n,
    };
    let col_to_j = |i: usize, c: usize| match orientation {
        Orientation::Undirected => i + 1 + c,
        Orientation::Directed => {
            if c < i {
                c
            } else {
                c + 1
            }
        }
    };
    let geom = if p < 1.0 {
        Some(Geometric::new(p).expect("p in (0,1)"))
    } else {
        None
    };
    let (mut row, mut col) = (0usize, 0usize);
    loop {
        let mut skip = geom.as_ref().map_or(0, |g| g.sample(rng));
        while row < rows && (col as u64).saturating_add(skip) >= row_len(row) as u64 {
            skip -= (row_len(row) - col) as u64;
            row += 1;
            col = 0;
        }
        if row >= rows {
            return;
        }
        col += skip as usize;
        visit((row, col_to_j(row, col)));
        col += 1;
    }
}

/// Configuration model: a uniform pairing of the `n·d` half-edges, projected
/// to a `d`-regular multigraph (loops count 2 towards the degree).
pub fn sample_configuration_model(n: usize, d: usize, stream: &SeededStream) -> Result<Graph> {
    let mut rng = stream.rng();
    configuration_edges(n, d, &mut rng)
        .map(|edges| Graph::new(n, Orientation::Undirected, true, edges).expect("endpoints in range"))
}

fn configuration_edges(n: usize, d: usize, rng: &mut StreamRng) -> Result<Vec<Edge>> {
    if d == 0 {
        return Err(Error::param("d", "degree must be at least 1"));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::param("n", format!("n·d = {} is odd", n * d)));
    }
    let mut half: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    half.shuffle(rng);
    Ok(half.chunks_exact(2).map(|p| (p[0], p[1])).collect())
}

#[derive(Clone, Debug)]
pub struct RegularSample {
    pub graph: Graph,
    /// Configuration-model draws used, including the accepted one.
    pub attempts: u32,
}

/// Uniform simple `d`-regular graph by rejection from the configuration model.
pub fn sample_regular_simple(n: usize, d: usize, stream: &SeededStream, max_attempts: u32) -> Result<RegularSample> {
    let mut rng = stream.rng();
    for attempt in 1..=max_attempts {
        let mut edges = configuration_edges(n, d, &mut rng)?;
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        for e in edges.iter_mut() {
            *e = canonical(Orientation::Undirected, *e);
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Ok(RegularSample {
            graph: Graph::from_sorted(n, Orientation::Undirected, false, edges),
            attempts: attempt,
        });
    }
    Err(Error::AttemptsExhausted { attempts: max_attempts })
}

fn cycle_edges(n: usize) -> impl Iterator<Item = Edge> {
    (0..n).map(move |i| (i, (i + 1) % n))
}

/// Hamilton cycle `0,1,…,n−1` plus an independent uniform perfect matching.
/// Matching edges that coincide with cycle edges are kept as parallel edges.
pub fn sample_ham_plus_matching(n: usize, stream: &SeededStream) -> Result<Graph> {
    if n % 2 == 1 || n < 4 {
        return Err(Error::param("n", "must be even and at least 4"));
    }
    let mut rng = stream.rng();
    let matching = uniform_perfect_matching(n, &mut rng);
    Ok(Graph::new(n, Orientation::Undirected, true, cycle_edges(n).chain(matching)).expect("endpoints in range"))
}

/// Uniform perfect matching on `0..n` (n even): shuffle and pair neighbours.
pub fn uniform_perfect_matching(n: usize, rng: &mut StreamRng) -> Vec<Edge> {
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(rng);
    vs.chunks_exact(2)
        .map(|p| canonical(Orientation::Undirected, (p[0], p[1])))
        .collect()
}

/// Hamilton cycle `0,1,…,n−1` plus an independent uniform Hamilton cycle.
pub fn sample_ham_plus_ham(n: usize, stream: &SeededStream) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("n", "must be at least 3"));
    }
    let mut rng = stream.rng();
    let second = uniform_hamilton_cycle(n, &mut rng);
    let k = second.len();
    let extra = (0..k).map(|i| (second[i], second[(i + 1) % k]));
    Ok(Graph::new(n, Orientation::Undirected, true, cycle_edges(n).chain(extra)).expect("endpoints in range"))
}

/// Vertex order of a uniform undirected Hamilton cycle on `0..n`, starting at 0.
/// Each undirected cycle arises from exactly two orders (its two directions).
pub fn uniform_hamilton_cycle(n: usize, rng: &mut StreamRng) -> Vec<usize> {
    let mut rest: Vec<usize> = (1..n).collect();
    rest.shuffle(rng);
    std::iter::once(0).chain(rest).collect()
}

/// `𝖢_n` (or the directed cycle) plus every other candidate edge independently
/// with probability `p`.
pub fn sample_ham_plus_binomial(n: usize, p: f64, orientation: Orientation, stream: &SeededStream) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("n", "must be at least 3"));
    }
    check_probability("p", p)?;
    let mut rng = stream.rng();
    let mut edges: Vec<Edge> = cycle_edges(n).map(|e| canonical(orientation, e)).collect();
    let on_cycle = |(i, j): Edge| match orientation {
        Orientation::Undirected => j == i + 1 || (i == 0 && j == n - 1),
        Orientation::Directed => j == (i + 1) % n,
    };
    bernoulli_pairs(n, orientation, p, &mut rng, |e| {
        if !on_cycle(e) {
            edges.push(e);
        }
    });
    edges.sort_unstable();
    Ok(Graph::from_sorted(n, orientation, false, edges))
}

/// `G(n,p)` or `D(n,p)`.
pub fn sample_binomial(n: usize, p: f64, orientation: Orientation, stream: &SeededStream) -> Result<Graph> {
    check_probability("p", p)?;
    let mut rng = stream.rng();
    let mut edges = Vec::new();
    bernoulli_pairs(n, orientation, p, &mut rng, |e| edges.push(e));
    Ok(Graph::from_sorted(n, orientation, false, edges))
}

/// Probability used to top up a `p′`-graph to a `p`-graph.
pub fn sprinkle_probability(p: f64, p_prime: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("p_prime", p_prime)?;
    if p < p_prime {
        return Err(Error::param("p", format!("p = {p} is below p′ = {p_prime}")));
    }
    if p_prime >= 1.0 {
        return Ok(0.0);
    }
    Ok(((p - p_prime) / (1.0 - p_prime)).clamp(0.0, 1.0))
}

/// Add every candidate edge missing from `base` independently with
/// probability `(p − p′)/(1 − p′)`. A `G(n,p′)` input yields `G(n,p)`.
pub fn sprinkle(base: &Graph, p: f64, p_prime: f64, stream: &SeededStream) -> Result<Graph> {
    if !base.is_simple() {
        return Err(Error::NotSimple);
    }
    let extra = sprinkle_probability(p, p_prime)?;
    let mut rng = stream.rng();
    let mut edges = base.edges().to_vec();
    bernoulli_pairs(base.n(), base.orientation(), extra, &mut rng, |e| {
        edges.push(e);
    });
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph::from_sorted(base.n(), base.orientation(), false, edges))
}

/// Result of contracting `ℓ` random edges out of a cubic graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CouplingOutcome {
    /// The contracted graph, on the surviving vertices relabelled in order.
    #[serde(skip)]
    pub h: Option<Graph>,
    /// Reconnected edges `x_i y_i`, `x′_i y′_i` in `h`'s labels.
    pub s_h: Vec<Edge>,
    /// The pairs `(u_i, u′_i)` in the original labels.
    pub pairs: Vec<Edge>,
    /// The selected edges span `2ℓ` distinct vertices.
    pub e1_holds: bool,
    /// No neighbour `x_i, y_i, x′_i, y′_i` is itself a deleted vertex.
    pub e2_holds: bool,
    /// Original vertex → label in `h`, `None` for deleted vertices.
    pub vertex_map: Vec<Option<usize>>,
}

impl CouplingOutcome {
    pub fn graph(&self) -> &Graph {
        self.h.as_ref().expect("coupling outcome carries its graph")
    }

    pub fn is_clean(&self) -> bool {
        self.e1_holds && self.e2_holds
    }
}

/// Pick a uniform `ℓ`-subset of the `3n` half-edges of a simple cubic graph,
/// delete both endpoints `u_i, u′_i` of each selected edge and join their
/// other neighbours pairwise (`x_i y_i` and `x′_i y′_i`) whenever both survive.
///
/// The events `E1` and `E2` are reported rather than conditioned on. When
/// `E1` fails fewer than `2ℓ` vertices are deleted.
pub fn couple_contract(g: &Graph, ell: usize, stream: &SeededStream) -> Result<CouplingOutcome> {
    let n = g.n();
    if g.is_directed() || !g.is_simple() || !g.degrees().is_regular(3) {
        return Err(Error::param("g", "must be a simple undirected cubic graph"));
    }
    if ell == 0 || 2 * ell >= n {
        return Err(Error::param("ell", format!("need 1 ≤ ℓ and 2ℓ < n = {n}")));
    }
    let mut rng = stream.rng();
    let chosen = index::sample(&mut rng, 3 * n, ell);

    let others = |v: usize, not: usize| -> [usize; 2] {
        let mut it = g.neighbors(v).iter().copied().filter(|&w| w != not);
        [it.next().unwrap(), it.next().unwrap()]
    };

    let mut pairs = Vec::with_capacity(ell);
    let mut joins = Vec::with_capacity(2 * ell);
    let mut deleted = vec![false; n];
    for h in chosen.iter() {
        let (u, slot) = (h / 3, h % 3);
        let u2 = g.neighbors(u)[slot];
        pairs.push((u, u2));
        joins.push(others(u, u2));
        joins.push(others(u2, u));
        deleted[u] = true;
        deleted[u2] = true;
    }
    let removed = deleted.iter().filter(|&&d| d).count();
    let e1_holds = removed == 2 * ell;
    let e2_holds = joins.iter().flatten().all(|&x| !deleted[x]);

    let mut vertex_map = vec![None; n];
    let mut next = 0;
    for v in 0..n {
        if !deleted[v] {
            vertex_map[v] = Some(next);
            next += 1;
        }
    }
    let relabel = |(a, b): Edge| Some((vertex_map[a]?, vertex_map[b]?));
    let mut edges: Vec<Edge> = g.edges().iter().filter_map(|&e| relabel(e)).collect();
    let s_h: Vec<Edge> = joins
        .iter()
        .filter_map(|&[x, y]| relabel((x, y)))
        .map(|e| canonical(Orientation::Undirected, e))
        .collect();
    edges.extend_from_slice(&s_h);
    let h = Graph::new(next, Orientation::Undirected, true, edges)?;
    Ok(CouplingOutcome {
        h: Some(h),
        s_h,
        pairs,
        e1_holds,
        e2_holds,
        vertex_map,
    })
}

/// A uniformly random ordered pair of distinct elements of `pool`, removed from it.
pub(crate) fn take_random_pair(pool: &mut Vec<usize>, rng: &mut StreamRng) -> Edge {
    let a = pool.swap_remove(rng.random_range(0..pool.len()));
    let b = pool.swap_remove(rng.random_range(0..pool.len()));
    (a, b)
}
