//! Chord classes `E_ℓ`, partner sets `F_{e,ℓ}` and the explicit cycles they
//! produce on top of the base cycle `0,1,…,n−1`.
//!
//! An undirected chord `{a, b}` is oriented canonically as `(i, j)` with
//! `(j − i) mod n ≤ n/2`; on a tie (`n` even, gap `n/2`) the orientation with
//! the smaller first index wins. Partner sets depend on that orientation.

use crate::error::{Error, Result};
use crate::graph::{canonical, Edge, Graph, Orientation, VertexCycle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SwitchingContext {
    n: usize,
    ell: usize,
    orientation: Orientation,
}

impl SwitchingContext {
    /// Undirected: `4 ≤ ℓ ≤ ⌊n/2⌋ + 2`. Directed: `4 ≤ ℓ ≤ n − 4`.
    pub fn new(n: usize, ell: usize, orientation: Orientation) -> Result<Self> {
        let hi = match orientation {
            Orientation::Undirected => n / 2 + 2,
            Orientation::Directed => n.saturating_sub(4),
        };
        if ell < 4 || ell > hi {
            return Err(Error::param(
                "ell",
                format!("ℓ = {ell} outside [4, {hi}] for {orientation} n = {n}"),
            ));
        }
        Ok(SwitchingContext { n, ell, orientation })
    }

    pub fn undirected(n: usize, ell: usize) -> Result<Self> {
        Self::new(n, ell, Orientation::Undirected)
    }

    pub fn directed(n: usize, ell: usize) -> Result<Self> {
        Self::new(n, ell, Orientation::Directed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_directed(&self) -> bool {
        self.orientation.is_directed()
    }

    /// Inclusive range of forward gaps `(j − i) mod n` that put `(i, j)` in `E_ℓ`.
    ///
    /// Undirected chords use `⌈ℓ/2⌉ ..= ⌊n/2⌋ − 1`, which gives exactly
    /// `(⌊n/2⌋ − ⌈ℓ/2⌉)·n` chords; directed ones use `2 ..= n − ℓ`.
    /// May be empty (`lo > hi`).
    pub fn gap_range(&self) -> (usize, usize) {
        match self.orientation {
            Orientation::Undirected => (self.ell.div_ceil(2), (self.n / 2).saturating_sub(1)),
            Orientation::Directed => (2, self.n - self.ell),
        }
    }

    /// Size of a partner set: `⌊ℓ/2⌋ − 1` undirected, `ℓ − 1` directed.
    pub fn f_size(&self) -> usize {
        match self.orientation {
            Orientation::Undirected => self.ell / 2 - 1,
            Orientation::Directed => self.ell - 1,
        }
    }

    #[inline]
    fn add(&self, a: usize, b: isize) -> usize {
        (a as isize + b).rem_euclid(self.n as isize) as usize
    }

    #[inline]
    fn gap(&self, (i, j): Edge) -> usize {
        (j + self.n - i) % self.n
    }
}

/// Canonical orientation of an undirected chord on the `n`-cycle.
pub fn canonical_chord(n: usize, (a, b): Edge) -> Edge {
    let g = (b + n - a) % n;
    match (2 * g).cmp(&n) {
        std::cmp::Ordering::Less => (a, b),
        std::cmp::Ordering::Greater => (b, a),
        std::cmp::Ordering::Equal => (a.min(b), a.max(b)),
    }
}

/// Oriented form used for membership tests: canonical for undirected chords,
/// as given for directed ones.
fn oriented(ctx: &SwitchingContext, e: Edge) -> Edge {
    match ctx.orientation {
        Orientation::Undirected => canonical_chord(ctx.n, e),
        Orientation::Directed => e,
    }
}

pub fn in_e_ell(e: Edge, ctx: &SwitchingContext) -> bool {
    let (u, v) = e;
    if u == v || u >= ctx.n || v >= ctx.n {
        return false;
    }
    let (lo, hi) = ctx.gap_range();
    let g = ctx.gap(oriented(ctx, e));
    lo <= g && g <= hi
}

/// `|E_ℓ|` by enumeration.
pub fn count_e_ell(ctx: &SwitchingContext) -> usize {
    e_ell(ctx).count()
}

/// Closed forms: `(⌊n/2⌋ − ⌈ℓ/2⌉)·n` undirected, `n(n − ℓ − 1)` directed.
pub fn count_e_ell_closed_form(ctx: &SwitchingContext) -> usize {
    let n = ctx.n;
    match ctx.orientation {
        Orientation::Undirected => (n / 2).saturating_sub(ctx.ell.div_ceil(2)) * n,
        Orientation::Directed => n * (n - ctx.ell - 1),
    }
}

/// All members of `E_ℓ` (oriented) in lexicographic order.
pub fn e_ell(ctx: &SwitchingContext) -> impl Iterator<Item = Edge> + '_ {
    let index = ChordIndex::new(ctx);
    (0..index.len()).map(move |k| index.chord(k))
}

fn require_e_ell(e: Edge, ctx: &SwitchingContext) -> Result<Edge> {
    if in_e_ell(e, ctx) {
        Ok(oriented(ctx, e))
    } else {
        Err(Error::param("e", format!("{e:?} is not in E_{}", ctx.ell)))
    }
}

/// The `k`-th partner of an (oriented) chord `e ∈ E_ℓ`.
/// Undirected `k ∈ 1..=⌊ℓ/2⌋−1`, directed `k ∈ 0..=ℓ−2`.
#[inline]
fn partner(ctx: &SwitchingContext, (i, j): Edge, k: usize) -> Edge {
    let l = ctx.ell as isize;
    let k = k as isize;
    match ctx.orientation {
        Orientation::Undirected => canonical(Orientation::Undirected, (ctx.add(i, k), ctx.add(j, l - k - 2))),
        Orientation::Directed => (ctx.add(j, l - k - 2), ctx.add(i, -k)),
    }
}

fn partner_range(ctx: &SwitchingContext) -> std::ops::RangeInclusive<usize> {
    match ctx.orientation {
        Orientation::Undirected => 1..=ctx.ell / 2 - 1,
        Orientation::Directed => 0..=ctx.ell - 2,
    }
}

/// Partner set `F_{e,ℓ}`, in order of `k`. Undirected partners are returned
/// with the smaller endpoint first.
pub fn f_set(e: Edge, ctx: &SwitchingContext) -> Result<Vec<Edge>> {
    let e = require_e_ell(e, ctx)?;
    Ok(f_set_unchecked(e, ctx))
}

pub(crate) fn f_set_unchecked(e: Edge, ctx: &SwitchingContext) -> Vec<Edge> {
    partner_range(ctx).map(|k| partner(ctx, e, k)).collect()
}

fn partner_index(e: Edge, f: Edge, ctx: &SwitchingContext) -> Result<usize> {
    let f = canonical(ctx.orientation, f);
    partner_range(ctx)
        .find(|&k| partner(ctx, e, k) == f)
        .ok_or_else(|| Error::param("f", format!("{f:?} is not in F({e:?})")))
}

/// The `ℓ`-cycle and `(n − ℓ + 4)`-cycle in `𝖢_n ∪ {e, f}` for `e ∈ E_ℓ`,
/// `f ∈ F_{e,ℓ}`.
pub fn switch_cycles(ctx: &SwitchingContext, e: Edge, f: Edge) -> Result<(VertexCycle, VertexCycle)> {
    if ctx.is_directed() {
        return Err(Error::Orientation { expected: "undirected" });
    }
    let (i, j) = require_e_ell(e, ctx)?;
    let k = partner_index((i, j), f, ctx)?;
    let n = ctx.n;
    let at = |off: usize| (i + off) % n;
    let j_off = ctx.gap((i, j));
    let a_off = j_off + ctx.ell - k - 2;

    // i, i+1, …, i+k, then f, then a, a−1, …, j, closed by e
    let short: Vec<usize> = (0..=k).chain((j_off..=a_off).rev()).map(at).collect();
    // a, a+1, …, i (wrapping), then e, then j, j−1, …, i+k, closed by f
    let long: Vec<usize> = (a_off..=n).chain((k..=j_off).rev()).map(at).collect();
    Ok((short.into(), long.into()))
}

/// The directed `ℓ`-cycle `(e, P₁, f, P₂)` in `𝖢⃗_n ∪ {e, f}`.
pub fn dir_shortcut_cycle(ctx: &SwitchingContext, e: Edge, f: Edge) -> Result<VertexCycle> {
    if !ctx.is_directed() {
        return Err(Error::Orientation { expected: "directed" });
    }
    let (i, j) = require_e_ell(e, ctx)?;
    let k = partner_index((i, j), f, ctx)?;
    let n = ctx.n;
    let j_off = ctx.gap((i, j));
    let a_off = j_off + ctx.ell - k - 2;
    // offsets relative to i: 0, then j..=a, then n−k..n−1
    let cycle: Vec<usize> = std::iter::once(0)
        .chain(j_off..=a_off)
        .chain(n - k..n)
        .map(|off| (i + off) % n)
        .collect();
    Ok(cycle.into())
}

/// Chords `e ≠ e0` of `E_ℓ` whose partner set meets `F_{e0,ℓ}`, sorted.
///
/// A shared undirected partner either matches in order, forcing
/// `e = (i + d, j − d)`, or swapped, forcing `i′ + j′ ≡ i + j`; a shared
/// directed partner forces `e = (i + d, j + d)`. Only those candidates are
/// examined, so the cost is `O(ℓ)`.
pub fn intersecting_edges(e0: Edge, ctx: &SwitchingContext) -> Result<Vec<Edge>> {
    let e0 = require_e_ell(e0, ctx)?;
    Ok(intersecting_unchecked(e0, ctx))
}

pub(crate) fn intersecting_unchecked((i, j): Edge, ctx: &SwitchingContext) -> Vec<Edge> {
    let l = ctx.ell as isize;
    let mut out = Vec::new();
    match ctx.orientation {
        Orientation::Undirected => {
            let kmax = (ctx.ell / 2 - 1) as isize;
            let mut push = |c: Edge| {
                if c.0 != c.1 && canonical_chord(ctx.n, c) == c && in_e_ell(c, ctx) {
                    out.push(c);
                }
            };
            for d in -(kmax - 1)..=(kmax - 1) {
                push((ctx.add(i, d), ctx.add(j, -d)));
            }
            for s in 2..=2 * kmax {
                let i2 = ctx.add(j, l - 2 - s);
                let j2 = ctx.add(i, s + 2 - l);
                push((i2, j2));
            }
        }
        Orientation::Directed => {
            for d in -(l - 2)..=(l - 2) {
                out.push((ctx.add(i, d), ctx.add(j, d)));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out.retain(|&c| c != (i, j));
    out
}

/// Auxiliary graph on `n` vertices whose edges are the union of the partner
/// sets of the chords of `matching` that lie in `E_ℓ`.
pub fn aux_graph(matching: &[Edge], ctx: &SwitchingContext) -> Result<Graph> {
    let mut used = vec![false; ctx.n];
    for &(u, v) in matching {
        for w in [u, v] {
            if w >= ctx.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: ctx.n });
            }
        }
        if u == v || std::mem::replace(&mut used[u], true) || std::mem::replace(&mut used[v], true) {
            return Err(Error::param("matching", format!("{:?} breaks the matching", (u, v))));
        }
    }
    let mut edges: Vec<Edge> = matching
        .iter()
        .filter(|&&e| in_e_ell(e, ctx))
        .flat_map(|&e| f_set_unchecked(oriented(ctx, e), ctx))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph::from_sorted(ctx.n, ctx.orientation, false, edges))
}

/// Bijection between `E_ℓ` (lexicographic order of oriented pairs) and
/// `0..|E_ℓ|`.
#[derive(Clone, Copy, Debug)]
pub struct ChordIndex {
    n: usize,
    lo: usize,
    hi: usize,
    width: usize,
}

impl ChordIndex {
    pub fn new(ctx: &SwitchingContext) -> Self {
        let (lo, hi) = ctx.gap_range();
        let width = if hi >= lo { hi - lo + 1 } else { 0 };
        ChordIndex {
            n: ctx.n,
            lo,
            hi,
            width,
        }
    }

    pub fn len(&self) -> usize {
        self.n * self.width
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    /// Gaps whose chord from `i` wraps past `n − 1`; those sort first in row `i`.
    #[inline]
    fn wrap_start(&self, i: usize) -> usize {
        self.lo.max(self.n - i)
    }

    #[inline]
    fn wrapped(&self, i: usize) -> usize {
        (self.hi + 1).saturating_sub(self.wrap_start(i))
    }

    pub fn chord(&self, idx: usize) -> Edge {
        let (i, r) = (idx / self.width, idx % self.width);
        let m = self.wrapped(i);
        let g = if r < m {
            self.wrap_start(i) + r
        } else {
            self.lo + (r - m)
        };
        (i, (i + g) % self.n)
    }

    /// Position of an oriented chord of `E_ℓ`.
    pub fn position(&self, (i, j): Edge) -> usize {
        let g = (j + self.n - i) % self.n;
        debug_assert!(self.lo <= g && g <= self.hi);
        let r = if i + g >= self.n {
            g - self.wrap_start(i)
        } else {
            self.wrapped(i) + (g - self.lo)
        };
        i * self.width + r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn und(n: usize, l: usize) -> SwitchingContext {
        SwitchingContext::undirected(n, l).unwrap()
    }

    fn dir(n: usize, l: usize) -> SwitchingContext {
        SwitchingContext::directed(n, l).unwrap()
    }

    /// Every valid (n, ℓ, orientation) with n ≤ `max`.
    fn contexts(max: usize) -> Vec<SwitchingContext> {
        let mut v = Vec::new();
        for n in 4..=max {
            for l in 4..=n / 2 + 2 {
                v.push(und(n, l));
            }
            for l in 4..=n.saturating_sub(4) {
                v.push(dir(n, l));
            }
        }
        v
    }

    #[test]
    fn context_ranges() {
        assert!(SwitchingContext::undirected(12, 8).is_ok());
        assert!(SwitchingContext::undirected(12, 9).is_err());
        assert!(SwitchingContext::undirected(12, 3).is_err());
        assert!(SwitchingContext::directed(10, 6).is_ok());
        assert!(SwitchingContext::directed(10, 7).is_err());
        assert!(SwitchingContext::undirected(8, 8).is_err());
    }

    #[test]
    fn membership_examples() {
        let c = und(12, 6);
        assert!(in_e_ell((0, 4), &c));
        assert!(in_e_ell((4, 0), &c));
        assert!(!in_e_ell((0, 2), &c));
        assert!(!in_e_ell((0, 0), &c));
        let d = dir(10, 5);
        assert!(in_e_ell((0, 3), &d));
        assert!(!in_e_ell((0, 1), &d));
        assert!(in_e_ell((0, 5), &d));
        assert!(!in_e_ell((0, 6), &d));
    }

    #[test]
    fn canonical_orientation_and_ties() {
        assert_eq!(canonical_chord(12, (4, 0)), (0, 4));
        assert_eq!(canonical_chord(12, (0, 9)), (9, 0));
        assert_eq!(canonical_chord(12, (9, 3)), (3, 9));
        assert_eq!(canonical_chord(11, (0, 6)), (6, 0));
    }

    #[test]
    fn counts_match_closed_forms() {
        assert_eq!(count_e_ell(&und(12, 6)), 36);
        assert_eq!(count_e_ell(&dir(10, 5)), 40);
        for ctx in contexts(20) {
            assert_eq!(count_e_ell(&ctx), count_e_ell_closed_form(&ctx), "{ctx:?}");
        }
    }

    #[test]
    fn enumeration_matches_membership() {
        for ctx in contexts(14) {
            let listed: Vec<Edge> = e_ell(&ctx).collect();
            let mut brute = Vec::new();
            for a in 0..ctx.n() {
                for b in 0..ctx.n() {
                    let e = (a, b);
                    if in_e_ell(e, &ctx) && oriented(&ctx, e) == e {
                        brute.push(e);
                    }
                }
            }
            assert_eq!(listed, brute, "{ctx:?}");
            let index = ChordIndex::new(&ctx);
            for (k, &e) in listed.iter().enumerate() {
                assert_eq!(index.position(e), k);
            }
        }
    }

    #[test]
    fn f_set_examples() {
        assert_eq!(f_set((0, 4), &und(12, 6)).unwrap(), vec![(1, 7), (2, 6)]);
        assert_eq!(f_set((4, 0), &und(12, 6)).unwrap(), vec![(1, 7), (2, 6)]);
        assert_eq!(
            f_set((0, 3), &dir(10, 5)).unwrap(),
            vec![(6, 0), (5, 9), (4, 8), (3, 7)]
        );
        assert!(f_set((0, 2), &und(12, 6)).is_err());
    }

    #[test]
    fn switch_cycles_example() {
        let ctx = und(12, 6);
        let (short, long) = switch_cycles(&ctx, (0, 4), (1, 7)).unwrap();
        assert_eq!(short.vertices(), &[0, 1, 7, 6, 5, 4]);
        assert_eq!(long.vertices(), &[7, 8, 9, 10, 11, 0, 4, 3, 2, 1]);
        assert!(switch_cycles(&ctx, (0, 4), (1, 8)).is_err());
        assert!(switch_cycles(&dir(12, 6), (0, 4), (1, 7)).is_err());
    }

    #[test]
    fn dir_shortcut_examples() {
        let ctx = dir(10, 5);
        let c = dir_shortcut_cycle(&ctx, (0, 3), (5, 9)).unwrap();
        assert_eq!(c.vertices(), &[0, 3, 4, 5, 9]);
        let c = dir_shortcut_cycle(&ctx, (0, 3), (6, 0)).unwrap();
        assert_eq!(c.vertices(), &[0, 3, 4, 5, 6]);
        assert!(dir_shortcut_cycle(&ctx, (0, 3), (9, 5)).is_err());
    }

    fn host(ctx: &SwitchingContext, e: Edge, f: Edge) -> Graph {
        let n = ctx.n();
        let edges = (0..n).map(|i| (i, (i + 1) % n)).chain([e, f]);
        Graph::new(n, ctx.orientation(), true, edges).unwrap()
    }

    #[test]
    fn exhaustive_constructions_small() {
        for ctx in contexts(16) {
            for e in e_ell(&ctx).collect::<Vec<_>>() {
                let fs = f_set(e, &ctx).unwrap();
                assert_eq!(fs.len(), ctx.f_size());
                for &f in &fs {
                    let g = host(&ctx, e, f);
                    if ctx.is_directed() {
                        assert!(in_e_ell(f, &ctx));
                        let c = dir_shortcut_cycle(&ctx, e, f).unwrap();
                        assert_eq!(c.len(), ctx.ell());
                        assert!(g.validate_cycle(&c), "{ctx:?} {e:?} {f:?}");
                    } else {
                        let (a, b) = switch_cycles(&ctx, e, f).unwrap();
                        assert_eq!(a.len(), ctx.ell());
                        assert_eq!(b.len(), ctx.n() - ctx.ell() + 4);
                        assert!(g.validate_cycle(&a) && g.validate_cycle(&b), "{ctx:?} {e:?} {f:?}");
                    }
                }
            }
        }
    }

    /// Scan oracle: every chord whose partner set meets that of `e0`.
    fn intersecting_scan(e0: Edge, ctx: &SwitchingContext) -> Vec<Edge> {
        let f0 = f_set(e0, ctx).unwrap();
        e_ell(ctx)
            .filter(|&e| e != e0)
            .filter(|&e| f_set(e, ctx).unwrap().iter().any(|f| f0.contains(f)))
            .collect()
    }

    #[test]
    fn intersecting_matches_scan() {
        for ctx in contexts(18) {
            for e0 in e_ell(&ctx).collect::<Vec<_>>() {
                let fast = intersecting_edges(e0, &ctx).unwrap();
                assert_eq!(fast, intersecting_scan(e0, &ctx), "{ctx:?} {e0:?}");
            }
        }
    }

    #[test]
    fn intersecting_bounds() {
        for ctx in contexts(20) {
            let l = ctx.ell();
            let bound = if ctx.is_directed() { 2 * l - 4 } else { 2 * l - 8 };
            for e0 in e_ell(&ctx).collect::<Vec<_>>() {
                assert!(intersecting_edges(e0, &ctx).unwrap().len() <= bound, "{ctx:?} {e0:?}");
            }
        }
    }

    #[test]
    fn directed_bound_two_ell_minus_six_is_exceeded() {
        // shift by ℓ−2 shares the partner (6, 0): k = 0 for (0,3), k = ℓ−2 for (3,6)
        let ctx = dir(10, 5);
        let hits = intersecting_edges((0, 3), &ctx).unwrap();
        assert!(hits.contains(&(3, 6)));
        assert_eq!(hits.len(), 2 * 5 - 4);
    }

    #[test]
    fn directed_intersections_are_shifts() {
        for ctx in contexts(20).into_iter().filter(|c| c.is_directed()) {
            let (n, l) = (ctx.n() as isize, ctx.ell() as isize);
            for e0 in e_ell(&ctx).collect::<Vec<_>>() {
                for e in intersecting_edges(e0, &ctx).unwrap() {
                    let di = (e0.0 as isize - e.0 as isize).rem_euclid(n);
                    let dj = (e0.1 as isize - e.1 as isize).rem_euclid(n);
                    assert_eq!(di, dj);
                    let ok = (1..=l - 2).any(|d| di == d || di == n - d);
                    assert!(ok, "{ctx:?} {e0:?} {e:?}");
                }
            }
        }
    }

    #[test]
    fn aux_graph_examples() {
        let ctx = und(12, 6);
        let g = aux_graph(&[(0, 4)], &ctx).unwrap();
        assert_eq!(g.edges(), &[(1, 7), (2, 6)]);
        assert_eq!(aux_graph(&[], &ctx).unwrap().edge_count(), 0);
        assert!(aux_graph(&[(0, 4), (4, 8)], &ctx).is_err());
        // chords outside E_ℓ contribute nothing
        assert_eq!(aux_graph(&[(0, 1)], &ctx).unwrap().edge_count(), 0);
    }
}
