use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use super::chords::{f_set_unchecked, intersecting_unchecked, ChordIndex, SwitchingContext};
use crate::error::{Error, Result};
use crate::graph::{canonical, Edge, Orientation};
use crate::samplers::take_random_pair;
use crate::stream::{SeededStream, StreamRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StagedVariant {
    Regular,
    BinomialUndirected,
    BinomialDirected,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StageParams {
    Regular { t1: usize, t2: usize },
    Binomial { t: usize, m: usize, delta: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagedOutcome {
    pub variant: StagedVariant,
    pub n: usize,
    pub ell: usize,
    pub params: StageParams,
    /// Regular: chords of `M₁` lying in `E_ℓ`. Binomial: accepted chords `A`.
    pub accepted: Vec<Edge>,
    /// `|E(X_{M₁})|` or `|S′|`.
    pub aux_edge_count: usize,
    /// `|E(𝒴₀)|`, regular only.
    pub unmatched_aux_edge_count: Option<usize>,
    pub success: bool,
    pub witness: Option<(Edge, Edge)>,
    /// More than `𝔪` rejections were needed.
    pub aborted: bool,
    /// The candidate pool ran dry before `𝔱` acceptances.
    pub exhausted: bool,
    /// Rejected pairs `|R|` (binomial only).
    pub rejected: usize,
    pub pairs_examined: u64,
    pub edges_found: u64,
    /// Regular only: the full revealed matching, stage I edges first, then
    /// stage II, then stage III.
    pub matching: Vec<Edge>,
    /// Number of stage II edges in `matching`.
    pub stage_two_len: usize,
}

impl StagedOutcome {
    fn new(variant: StagedVariant, n: usize, ell: usize, params: StageParams) -> Self {
        StagedOutcome {
            variant,
            n,
            ell,
            params,
            accepted: Vec::new(),
            aux_edge_count: 0,
            unmatched_aux_edge_count: None,
            success: false,
            witness: None,
            aborted: false,
            exhausted: false,
            rejected: 0,
            pairs_examined: 0,
            edges_found: 0,
            matching: Vec::new(),
            stage_two_len: 0,
        }
    }
}

/// `(𝔱₁, 𝔱₂) = (⌊n/16⌋, ⌊n/500⌋)`.
pub fn regular_parameters(n: usize) -> (usize, usize) {
    (n / 16, n / 500)
}

/// `(𝔱, 𝔪)` for the binomial procedure.
pub fn binomial_parameters(n: usize, ell: usize, delta: f64, orientation: Orientation) -> (usize, usize) {
    let nf = n as f64;
    match orientation {
        Orientation::Undirected => ((delta * nf / 15.0).ceil() as usize, n * n / 5),
        Orientation::Directed => {
            let r = (n - ell - 1) as f64;
            ((0.25 * delta * r).ceil() as usize, (0.75 * nf * r).floor() as usize)
        }
    }
}

/// Staged revelation of a uniform perfect matching of `{0,…,n−1}` with
/// `𝔱₁ = ⌊n/16⌋` and `𝔱₂ = ⌊n/500⌋`.
pub fn staged_exposure_regular(n: usize, ell: usize, stream: &SeededStream) -> Result<StagedOutcome> {
    let (t1, t2) = regular_parameters(n);
    if t1 == 0 || t2 == 0 {
        return Err(Error::param(
            "n",
            format!("n = {n} gives an empty stage (need n ≥ 500)"),
        ));
    }
    staged_exposure_regular_with(n, ell, t1, t2, stream)
}

/// As [`staged_exposure_regular`] with explicit stage sizes.
///
/// Stage I draws `t1` uniform matching edges. Stage II, `t2` times, matches a
/// vertex of maximum degree in the auxiliary graph restricted to unmatched
/// vertices (smallest index on ties) to a uniform unmatched partner, and
/// succeeds if the new edge is an auxiliary edge. Stage III pairs the rest
/// uniformly. The whole matching is uniform.
pub fn staged_exposure_regular_with(
    n: usize,
    ell: usize,
    t1: usize,
    t2: usize,
    stream: &SeededStream,
) -> Result<StagedOutcome> {
    if n % 2 == 1 {
        return Err(Error::param("n", "a perfect matching needs n even"));
    }
    let ctx = SwitchingContext::undirected(n, ell)?;
    if t1 + t2 > n / 2 {
        return Err(Error::param("t1", format!("t1 + t2 = {} exceeds n/2", t1 + t2)));
    }
    let mut out = StagedOutcome::new(StagedVariant::Regular, n, ell, StageParams::Regular { t1, t2 });
    let mut rng = stream.rng();
    let mut pool: Vec<usize> = (0..n).collect();

    // stage I
    let m1: Vec<Edge> = (0..t1).map(|_| take_random_pair(&mut pool, &mut rng)).collect();
    let mut owner: HashMap<Edge, Edge> = HashMap::new();
    for &e in &m1 {
        if super::in_e_ell(e, &ctx) {
            let e = super::canonical_chord(n, e);
            out.accepted.push(e);
            for f in f_set_unchecked(e, &ctx) {
                owner.insert(f, e);
            }
        }
    }
    let aux = super::aux_graph(&m1, &ctx)?;
    out.aux_edge_count = aux.edge_count();

    let mut matched = vec![true; n];
    for &v in &pool {
        matched[v] = false;
    }
    let mut deg_y: Vec<usize> = (0..n)
        .map(|v| {
            if matched[v] {
                0
            } else {
                aux.neighbors(v).iter().filter(|&&w| !matched[w]).count()
            }
        })
        .collect();
    out.unmatched_aux_edge_count = Some(deg_y.iter().sum::<usize>() / 2);

    // stage II
    let mut m2 = Vec::with_capacity(t2);
    for _ in 0..t2 {
        let u = pool
            .iter()
            .copied()
            .max_by(|&a, &b| deg_y[a].cmp(&deg_y[b]).then(b.cmp(&a)))
            .expect("pool holds at least two vertices");
        let at = pool.iter().position(|&v| v == u).expect("u is in the pool");
        pool.swap_remove(at);
        let w = pool.swap_remove(rng.random_range(0..pool.len()));
        for x in [u, w] {
            matched[x] = true;
            for &z in aux.neighbors(x) {
                if !matched[z] {
                    deg_y[z] -= 1;
                }
            }
        }
        let f = canonical(Orientation::Undirected, (u, w));
        if let Some(&e) = owner.get(&f) {
            out.edges_found += 1;
            if out.witness.is_none() {
                out.witness = Some((e, f));
            }
        }
        m2.push((u, w));
    }
    out.success = out.witness.is_some();

    // stage III
    pool.shuffle(&mut rng);
    let m3 = pool.chunks_exact(2).map(|c| (c[0], c[1]));

    out.pairs_examined = (t1 + m2.len()) as u64;
    out.stage_two_len = m2.len();
    out.matching = m1.into_iter().chain(m2).chain(m3).collect();
    Ok(out)
}

/// Fixed-length bitset with word-level rank/select over clear bits.
struct Blocked {
    words: Vec<u64>,
}

impl Blocked {
    fn new(len: usize) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            // pad bits past the end so they never count as free
            *words.last_mut().unwrap() = !0u64 << (len % 64);
        }
        Blocked { words }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// Position of the `k`-th (0-based) clear bit at or after `from`.
    fn nth_clear_from(&self, from: usize, mut k: u64) -> Option<usize> {
        let mut w = from / 64;
        let mut mask = !0u64 << (from % 64);
        while w < self.words.len() {
            let mut clear = !self.words[w] & mask;
            let c = clear.count_ones() as u64;
            if k < c {
                for _ in 0..k {
                    clear &= clear - 1;
                }
                return Some(w * 64 + clear.trailing_zeros() as usize);
            }
            k -= c;
            w += 1;
            mask = !0;
        }
        None
    }

    fn count_clear_from(&self, from: usize) -> u64 {
        let mut w = from / 64;
        if w >= self.words.len() {
            return 0;
        }
        let mut total = (!self.words[w] & (!0u64 << (from % 64))).count_ones() as u64;
        w += 1;
        total += self.words[w..].iter().map(|x| x.count_zeros() as u64).sum::<u64>();
        total
    }
}

/// Two-round exposure of `𝒢(n, p)` (or its directed analogue), `p = δ/n`,
/// against the chords of `E_ℓ`.
///
/// Round one scans `E_ℓ` in lexicographic order, testing each pair still
/// eligible with probability `p′ = p/2`. An accepted chord blocks every chord
/// whose partner set meets its own. The scan stops after `𝔱` acceptances and
/// aborts after more than `𝔪` rejections. Round two tests the union `S′` of
/// the accepted chords' partner sets with probability `p″ = p/(2 − p)`; the
/// first hit is the witness.
pub fn staged_exposure_binomial(
    n: usize,
    ell: usize,
    delta: f64,
    orientation: Orientation,
    stream: &SeededStream,
) -> Result<StagedOutcome> {
    if !(delta > 0.0 && delta < 1.0 / 3.0) {
        return Err(Error::param("delta", format!("δ = {delta} outside (0, 1/3)")));
    }
    let ctx = SwitchingContext::new(n, ell, orientation)?;
    let (t, m) = binomial_parameters(n, ell, delta, orientation);
    let variant = match orientation {
        Orientation::Undirected => StagedVariant::BinomialUndirected,
        Orientation::Directed => StagedVariant::BinomialDirected,
    };
    let mut out = StagedOutcome::new(variant, n, ell, StageParams::Binomial { t, m, delta });
    let mut rng: StreamRng = stream.rng();

    let p = delta / n as f64;
    let first = Geometric::new(p / 2.0).expect("p′ in (0, 1)");
    let second = Geometric::new(p / (2.0 - p)).expect("p″ in (0, 1)");

    let index = ChordIndex::new(&ctx);
    let mut blocked = Blocked::new(index.len());
    let mut cursor = 0usize;
    let mut rejected = 0u64;
    let limit = m as u64;

    while out.accepted.len() < t {
        let gap = first.sample(&mut rng);
        let allowed = limit + 1 - rejected;
        if gap >= allowed {
            if blocked.nth_clear_from(cursor, allowed - 1).is_some() {
                rejected = limit + 1;
                out.aborted = true;
            } else {
                rejected += blocked.count_clear_from(cursor);
                out.exhausted = true;
            }
            break;
        }
        let Some(pos) = blocked.nth_clear_from(cursor, gap) else {
            rejected += blocked.count_clear_from(cursor);
            out.exhausted = true;
            break;
        };
        rejected += gap;
        let chord = index.chord(pos);
        out.accepted.push(chord);
        for c in intersecting_unchecked(chord, &ctx) {
            blocked.set(index.position(c));
        }
        blocked.set(pos);
        cursor = pos + 1;
    }
    out.rejected = rejected as usize;
    out.edges_found = out.accepted.len() as u64;
    out.pairs_examined = out.edges_found + rejected;
    if out.aborted || out.exhausted {
        return Ok(out);
    }

    let fsize = ctx.f_size();
    out.aux_edge_count = fsize * out.accepted.len();
    let hit = second.sample(&mut rng);
    if hit < out.aux_edge_count as u64 {
        let hit = hit as usize;
        let e = out.accepted[hit / fsize];
        let f = f_set_unchecked(e, &ctx)[hit % fsize];
        out.witness = Some((e, f));
        out.success = true;
    }
    Ok(out)
}
