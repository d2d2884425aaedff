//! List assignments up to renaming of colors.
//!
//! An assignment of lists from a palette of `U` colors to `k` vertices is a
//! 0/1 matrix with one column per color; renaming colors permutes columns.
//! Each orbit is therefore a multiset of `U` columns, enumerated here as
//! non-decreasing column sequences with the prescribed row sums.

use crate::color::{Color, ColorSet};
use std::ops::ControlFlow;

/// Calls `f` once per orbit with the lists of the `sizes.len()` rows.
/// Rows are limited to 32.
pub fn for_each_canonical(
    sizes: &[usize],
    universe: usize,
    mut f: impl FnMut(&[ColorSet]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let k = sizes.len();
    assert!(k <= 32, "at most 32 rows");
    if sizes.iter().any(|&s| s > universe) {
        return ControlFlow::Continue(());
    }
    let mut need = sizes.to_vec();
    let mut cols: Vec<u32> = Vec::with_capacity(universe);
    go(k, universe, &mut need, &mut cols, 0, &mut f)
}

fn go(
    k: usize,
    universe: usize,
    need: &mut [usize],
    cols: &mut Vec<u32>,
    prev: u32,
    f: &mut impl FnMut(&[ColorSet]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let left = universe - cols.len();
    if left == 0 {
        let lists: Vec<ColorSet> = (0..k)
            .map(|i| {
                cols.iter()
                    .enumerate()
                    .filter(|&(_, &m)| m >> i & 1 == 1)
                    .map(|(c, _)| c as Color)
                    .collect()
            })
            .collect();
        return f(&lists);
    }
    let mut avail = 0u32;
    let mut forced = 0u32;
    for (i, &n) in need.iter().enumerate().take(k) {
        if n > 0 {
            avail |= 1 << i;
        }
        if n == left {
            forced |= 1 << i;
        }
    }
    // submasks of `avail` containing `forced`, at least `prev`, ascending
    let free = avail & !forced;
    let mut sub = 0u32;
    loop {
        let m = sub | forced;
        if m >= prev {
            for (i, n) in need.iter_mut().enumerate().take(k) {
                if m >> i & 1 == 1 {
                    *n -= 1;
                }
            }
            cols.push(m);
            let r = go(k, universe, need, cols, m, f);
            cols.pop();
            for (i, n) in need.iter_mut().enumerate().take(k) {
                if m >> i & 1 == 1 {
                    *n += 1;
                }
            }
            r?;
        }
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    ControlFlow::Continue(())
}

/// Number of labelled assignments in the orbit of `lists`: `U!` over the
/// product of the factorials of column multiplicities.
pub fn orbit_size(lists: &[ColorSet], universe: usize) -> u128 {
    let mut cols: Vec<u32> = (0..universe)
        .map(|c| {
            lists
                .iter()
                .enumerate()
                .filter(|(_, l)| l.contains(c as Color))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    cols.sort_unstable();
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    let mut denom = 1u128;
    let mut i = 0;
    while i < cols.len() {
        let j = (i..cols.len()).find(|&j| cols[j] != cols[i]).unwrap_or(cols.len());
        denom *= fact(j - i);
        i = j;
    }
    fact(universe) / denom
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(sizes: &[usize], universe: usize) -> Vec<Vec<ColorSet>> {
        let mut out = Vec::new();
        let _ = for_each_canonical(sizes, universe, |l| {
            out.push(l.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    #[test]
    fn all_lists_full_gives_one_orbit() {
        assert_eq!(collect(&[3, 3, 3], 3).len(), 1);
        assert_eq!(collect(&[], 5).len(), 1);
    }

    #[test]
    fn orbit_sizes_reconstruct_the_labelled_count() {
        for (sizes, u) in [
            (vec![2, 3], 4),
            (vec![2, 3, 3], 5),
            (vec![1, 2, 2, 3], 5),
            (vec![4, 6, 4], 10),
        ] {
            let total: u128 = collect(&sizes, u).iter().map(|l| orbit_size(l, u)).sum();
            let labelled: u128 = sizes.iter().map(|&s| binomial(u, s)).product();
            assert_eq!(total, labelled, "{sizes:?} over {u}");
        }
    }

    #[test]
    fn two_lists_by_overlap() {
        // a 2-set and a 3-set in 4 colors: overlap 1 or 2
        assert_eq!(collect(&[2, 3], 4).len(), 2);
    }
}
