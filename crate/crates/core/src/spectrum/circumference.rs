use serde::{Deserialize, Serialize};

use super::underlying;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexCycle};

/// Largest connected component handled by the exact subset DP
/// (`2^24` endpoint sets of 4 bytes each, 64 MiB).
pub const EXACT_COMPONENT_BOUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circumference {
    pub length: usize,
    pub witness: Option<VertexCycle>,
}

/// Weakly connected components, each listed in increasing vertex order.
fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for r in 0..n {
        if comp[r] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![r];
        comp[r] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            let nbrs = g.neighbors(v).iter();
            let back = if g.is_directed() { g.in_neighbors(v) } else { &[] };
            for &w in nbrs.chain(back) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Longest cycle (length ≥ 3) with a witness; length 0 if acyclic.
///
/// Exact subset DP per connected component: `reach[S]` holds the vertices
/// `v` such that some path starting at `min S` visits exactly `S` and ends
/// at `v`. Fails with [`Error::TooLarge`] if a component exceeds
/// [`EXACT_COMPONENT_BOUND`].
pub fn circumference(g: &Graph) -> Result<Circumference> {
    let (h, _) = underlying(g);
    let comps = components(&h);
    if let Some(big) = comps.iter().find(|c| c.len() > EXACT_COMPONENT_BOUND) {
        return Err(Error::TooLarge {
            n: big.len(),
            max: EXACT_COMPONENT_BOUND,
        });
    }
    let mut best = Circumference {
        length: 0,
        witness: None,
    };
    for comp in comps.iter().filter(|c| c.len() >= 3) {
        if let Some((len, cycle)) = longest_in_component(&h, comp) {
            if len > best.length {
                best = Circumference {
                    length: len,
                    witness: Some(cycle),
                };
            }
        }
    }
    Ok(best)
}

fn longest_in_component(g: &Graph, comp: &[usize]) -> Option<(usize, VertexCycle)> {
    let c = comp.len();
    let local = |v: usize| comp.binary_search(&v).expect("same component");
    let adj: Vec<u32> = comp
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << local(w)))
        .collect();
    let mut reach = vec![0u32; 1 << c];
    for s in 0..c {
        reach[1 << s] = 1 << s;
    }
    let mut best: Option<(usize, u32, usize)> = None;
    for mask in 1u32..(1 << c) {
        let ends = reach[mask as usize];
        if ends == 0 {
            continue;
        }
        let s = mask.trailing_zeros() as usize;
        let size = mask.count_ones() as usize;
        let mut rest = ends;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if size >= 3 && adj[v] & (1 << s) != 0 && best.is_none_or(|b| size > b.0) {
                best = Some((size, mask, v));
            }
            // extend only to vertices above the start, so `s` stays minimal
            let mut next = adj[v] & !mask & !((2u32 << s) - 1);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                reach[(mask | 1 << w) as usize] |= 1 << w;
            }
        }
    }
    let (size, mut mask, mut v) = best?;
    let s = mask.trailing_zeros() as usize;
    let mut rev = vec![v];
    while mask != 1 << s {
        let prev = mask & !(1 << v);
        let u = (0..c)
            .find(|&u| reach[prev as usize] & (1 << u) != 0 && adj[u] & (1 << v) != 0)
            .expect("DP predecessor exists");
        rev.push(u);
        mask = prev;
        v = u;
    }
    rev.reverse();
    let cycle = VertexCycle::new(rev.into_iter().map(|x| comp[x]).collect());
    debug_assert_eq!(cycle.len(), size);
    Some((size, cycle))
}
