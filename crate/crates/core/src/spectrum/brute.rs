//! Reference implementation by exhaustive search over vertex subsets and
//! cyclic orderings. Exponential; intended for cross-checking on `n ≤ 10`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_N: usize = 11;

/// Number of cycles of each length `≥ 3` in a simple graph.
pub fn cycle_counts(g: &Graph) -> Result<BTreeMap<usize, u64>> {
    let n = g.n();
    if n > MAX_N {
        return Err(Error::TooLarge { n, max: MAX_N });
    }
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let mut counts = BTreeMap::new();
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k < 3 {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        // fix the smallest vertex first and permute the rest
        let mut rest = verts[1..].to_vec();
        let mut found = 0u64;
        permutations(&mut rest, 0, &mut |perm| {
            if !g.is_directed() && perm[0] > perm[perm.len() - 1] {
                return;
            }
            let closed = std::iter::once(verts[0])
                .chain(perm.iter().copied())
                .chain(std::iter::once(verts[0]))
                .collect::<Vec<_>>();
            if closed.windows(2).all(|w| g.has_edge(w[0], w[1])) {
                found += 1;
            }
        });
        if found > 0 {
            *counts.entry(k).or_insert(0) += found;
        }
    }
    Ok(counts)
}

fn permutations(xs: &mut [usize], i: usize, f: &mut impl FnMut(&[usize])) {
    if i == xs.len() {
        f(xs);
        return;
    }
    for j in i..xs.len() {
        xs.swap(i, j);
        permutations(xs, i + 1, f);
        xs.swap(i, j);
    }
}
